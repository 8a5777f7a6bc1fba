"""4-simplex weights, face operators and the inverse of operator products."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Sequence

from .field import Field, RationalFunction
from .grassmann import Algebra, GrassmannElement, GrassmannError, Tet, is_homogeneous

Face = tuple[int, int, int]


class WeightError(ValueError):
    pass


class NotSurjectiveError(WeightError):
    """No element of the requested degree is mapped to 1."""


@dataclass(frozen=True, order=True)
class Simplex4:
    vertices: tuple[int, int, int, int, int]

    def __post_init__(self):
        v = tuple(self.vertices)
        if len(v) != 5 or any(not isinstance(x, int) or x < 1 for x in v):
            raise WeightError(f"a 4-simplex needs five positive vertex numbers, got {v}")
        if any(a >= b for a, b in zip(v, v[1:])):
            raise WeightError(f"4-simplex vertices must be strictly increasing, got {v}")
        object.__setattr__(self, "vertices", v)

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "Simplex4":
        v = tuple(vertices)
        if len(set(v)) != len(v):
            raise WeightError(f"repeated vertex in {v}")
        return cls(tuple(sorted(v)))

    @property
    def tetrahedra(self) -> tuple[Tet, ...]:
        v = self.vertices
        return tuple(sorted(tuple(x for x in v if x != drop) for drop in v))

    def __str__(self):
        return "".join(map(str, self.vertices)) if self.vertices[-1] < 10 else ".".join(
            map(str, self.vertices))


# Weight of simplex 12345 written with template labels 1..5; W_ijklm follows
# by substituting 1->i, ..., 5->m.  Each entry: (sign, zeta pair, kind, tet).
_W_FACTORS = (
    ((+1, (3, 4), "a", (1, 2, 3, 4)), (-1, (3, 5), "a", (1, 2, 3, 5)),
     (+1, (4, 5), "a", (1, 2, 4, 5)), (-1, (4, 5), "a", (1, 3, 4, 5))),
    ((+1, (3, 4), "b", (1, 2, 3, 4)), (-1, (3, 5), "b", (1, 2, 3, 5)),
     (+1, (4, 5), "b", (1, 2, 4, 5)), (+1, (4, 5), "a", (2, 3, 4, 5))),
    ((-1, (1, 4), "a", (1, 2, 3, 4)), (-1, (2, 4), "b", (1, 2, 3, 4)),
     (+1, (1, 5), "a", (1, 2, 3, 5)), (+1, (2, 5), "b", (1, 2, 3, 5)),
     (-1, (4, 5), "b", (1, 3, 4, 5)), (+1, (4, 5), "b", (2, 3, 4, 5))),
)
_W_PREFACTOR = (4, 5)  # overall 1/zeta_45


def weight_W(s: Simplex4 | Sequence[int], alg: Algebra) -> GrassmannElement:
    """Degree-3 weight of a 4-simplex (72 monomials)."""
    if not isinstance(s, Simplex4):
        s = Simplex4(tuple(s))
    v = (None,) + s.vertices
    f = alg.field
    table = alg.table
    factors = []
    for linear in _W_FACTORS:
        terms = []
        for sign, (p, q), kind, tet in linear:
            c = f.zeta_diff(v[p], v[q])
            terms.append((c if sign > 0 else f.neg(c), table.index(tuple(v[t] for t in tet), kind)))
        factors.append(alg.linear(terms))
    product = factors[0] * factors[1] * factors[2]
    inv = f.inv(f.zeta_diff(v[_W_PREFACTOR[0]], v[_W_PREFACTOR[1]]))
    out = {}
    for m, c in product.terms.items():
        c = f.mul(c, inv)
        if isinstance(c, RationalFunction) and not c.is_polynomial:
            raise WeightError(f"1/zeta_{v[4]}{v[5]} does not cancel in the weight of {s}")
        out[m] = c
    return GrassmannElement(alg, out)


# ---------------------------------------------------------------------------
# 72-term W_12345 fixture


@dataclass(frozen=True)
class FixtureTerm:
    sign: int
    zetas: tuple[tuple[int, int], tuple[int, int]]
    generators: tuple[tuple[str, Tet], ...]


def load_appendix_fixture(text: str | None = None) -> list[FixtureTerm]:
    """Parse lines ``<sign> z<i><j> z<k><l> <gen> <gen> <gen>`` (labels 1..5)."""
    if text is None:
        text = resources.files("pachner4d").joinpath("data/appendix_w12345.txt").read_text()
    terms = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 6 or parts[0] not in "+-":
            raise WeightError(f"fixture line {lineno}: malformed {raw!r}")
        zetas = []
        for z in parts[1:3]:
            if len(z) != 3 or z[0] != "z":
                raise WeightError(f"fixture line {lineno}: bad zeta factor {z!r}")
            zetas.append((int(z[1]), int(z[2])))
        gens = []
        for g in parts[3:]:
            if len(g) != 5 or g[0] not in "ab":
                raise WeightError(f"fixture line {lineno}: bad generator {g!r}")
            gens.append((g[0], tuple(int(c) for c in g[1:])))
        terms.append(FixtureTerm(1 if parts[0] == "+" else -1, tuple(zetas), tuple(gens)))
    return terms


def fixture_element(terms: Sequence[FixtureTerm], s: Simplex4 | Sequence[int],
                    alg: Algebra) -> GrassmannElement:
    """Assemble the fixture under the substitution 1..5 -> vertices of ``s``."""
    if not isinstance(s, Simplex4):
        s = Simplex4(tuple(s))
    v = (None,) + s.vertices
    f = alg.field
    acc = alg.zero
    for t in terms:
        c = f.mul(f.zeta_diff(v[t.zetas[0][0]], v[t.zetas[0][1]]),
                  f.zeta_diff(v[t.zetas[1][0]], v[t.zetas[1][1]]))
        if t.sign < 0:
            c = f.neg(c)
        mono = alg.scalar(c)
        for kind, tet in t.generators:
            mono = mono * alg.gen(alg.table.index(tuple(v[x] for x in tet), kind))
        acc = acc + mono
    return acc


# ---------------------------------------------------------------------------
# face operators


@dataclass(frozen=True)
class FaceOperator:
    """First-order operator ``sum c * d/dg`` acting by left derivatives."""

    alg: Algebra
    terms: tuple[tuple[object, int], ...]

    def __post_init__(self):
        gens = [g for _, g in self.terms]
        if len(set(gens)) != len(gens):
            raise WeightError("duplicate generator in a face operator")
        f = self.alg.field
        object.__setattr__(self, "terms", tuple(
            (c, g) for c, g in self.terms if not f.is_zero(c)))

    @property
    def generators(self) -> set[int]:
        return {g for _, g in self.terms}

    def __call__(self, x: GrassmannElement) -> GrassmannElement:
        return apply_operator(self, x)

    def __str__(self):
        f = self.alg.field
        return " + ".join(f"({f.format(c)}) d/d{self.alg.table.name(g)}" for c, g in self.terms) or "0"


def face_tet_operator(face: Face, tet: Tet, alg: Algebra) -> FaceOperator:
    """Operator attached to a 2-face inside a tetrahedron ``ijkl``."""
    face, tet = tuple(face), tuple(tet)
    if len(face) != 3 or not set(face) <= set(tet):
        raise WeightError(f"face {face} is not contained in tetrahedron {tet}")
    i, j, k, l = tet
    f = alg.field
    ga = alg.table.index(tet, "a")
    gb = alg.table.index(tet, "b")
    z = f.zeta_diff
    missing = (set(tet) - set(face)).pop()
    if missing == l:      # face ijk
        kl = f.inv(z(k, l))
        terms = ((f.mul(z(j, k), kl), ga), (f.neg(f.mul(z(i, k), kl)), gb))
    elif missing == k:    # face ijl
        kl = f.inv(z(k, l))
        terms = ((f.neg(f.mul(z(j, l), kl)), ga), (f.mul(z(i, l), kl), gb))
    elif missing == j:    # face ikl
        terms = ((f.one, ga),)
    else:                 # face jkl
        terms = ((f.neg(f.one), gb),)
    return FaceOperator(alg, terms)


def face_operator_d(face: Face, cluster, alg: Algebra) -> FaceOperator:
    """Sum of face/tetrahedron operators over every tetrahedron of ``cluster`` containing ``face``."""
    face = tuple(face)
    tets = cluster.face_tetrahedra.get(face)
    if not tets:
        raise WeightError(f"face {face} is not a 2-face of the cluster")
    terms = []
    for tet in tets:
        terms.extend(face_tet_operator(face, tet, alg).terms)
    return FaceOperator(alg, tuple(terms))


def _apply_terms(op: FaceOperator, terms: dict[int, object]) -> dict[int, object]:
    acc: dict[int, object] = {}
    for c, g in op.terms:
        bit = 1 << g
        below = bit - 1
        for m, x in terms.items():
            if m & bit:
                y = x * c
                if (m & below).bit_count() & 1:
                    y = -y
                key = m ^ bit
                acc[key] = acc[key] + y if key in acc else y
    return acc


def apply_operator(op: FaceOperator, x: GrassmannElement) -> GrassmannElement:
    if x.alg != op.alg:
        raise GrassmannError("operator and element live over different algebras")
    return GrassmannElement.from_raw(x.alg, _apply_terms(op, x.terms))


def apply_composed(ops: Sequence[FaceOperator], x: GrassmannElement) -> GrassmannElement:
    """``(ops[0] o ops[1] o ... o ops[-1])(x)``: the last operator acts first."""
    for op in reversed(ops):
        x = apply_operator(op, x)
    return x


def _rank(ops: Sequence[FaceOperator], gens: Sequence[int], f: Field) -> int:
    col = {g: i for i, g in enumerate(gens)}
    rows = []
    for op in ops:
        row = [f.zero] * len(gens)
        for c, g in op.terms:
            row[col[g]] = c
        rows.append(row)
    rank = 0
    for j in range(len(gens)):
        pivot = next((r for r in range(rank, len(rows)) if not f.is_zero(rows[r][j])), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = f.inv(rows[rank][j])
        for r in range(rank + 1, len(rows)):
            if not f.is_zero(rows[r][j]):
                factor = f.mul(rows[r][j], inv)
                rows[r] = [f.sub(a, f.mul(factor, b)) for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _subsets_increasing(k: int, n: int):
    """All ``n``-element subsets of ``range(k)`` as bitsets, increasing (Gosper)."""
    if n == 0:
        yield 0
        return
    if n > k:
        return
    m = (1 << n) - 1
    limit = 1 << k
    while m < limit:
        yield m
        low = m & -m
        ripple = m + low
        m = ((ripple ^ m) >> 2) // low | ripple


def invert_to_one(ops: Sequence[FaceOperator], alg: Algebra) -> GrassmannElement:
    """Deterministic homogeneous ``g`` of degree ``len(ops)`` with composed image 1.

    Degree-``n`` monomials over the operators' generators are scanned in
    increasing bitset order; the first with nonzero scalar image ``c`` is
    returned as ``m / c``.
    """
    n = len(ops)
    if n == 0:
        return alg.one
    f = alg.field
    gens = sorted(set().union(*(op.generators for op in ops)))
    if _rank(ops, gens, f) < n:
        raise NotSurjectiveError("operator product not surjective onto scalars")
    for compact in _subsets_increasing(len(gens), n):
        m = 0
        for i, g in enumerate(gens):
            if compact >> i & 1:
                m |= 1 << g
        terms = {m: f.one}
        for op in reversed(ops):
            terms = _apply_terms(op, terms)
            if not terms:
                break
        c = f.normalize(terms.get(0, f.zero))
        if not f.is_zero(c):
            return GrassmannElement(alg, {m: f.inv(c)})
    raise NotSurjectiveError("operator product not surjective onto scalars")


def verify_w_candidate(ops: Sequence[FaceOperator], g: GrassmannElement) -> bool:
    """True iff ``g`` is homogeneous of degree ``len(ops)`` and maps to exactly 1."""
    if not is_homogeneous(g, len(ops)):
        return False
    return apply_composed(ops, g) == g.alg.one


def general_inverse(op: FaceOperator, coefficients: dict[int, object]) -> GrassmannElement:
    """``sum lam_g g / sum lam_g c_g`` for a single operator ``sum c_g d/dg``."""
    alg = op.alg
    f = alg.field
    denom = f.zero
    for c, g in op.terms:
        if g in coefficients:
            denom = f.add(denom, f.mul(f(coefficients[g]), c))
    if f.is_zero(denom):
        raise WeightError("denominator of the general inverse vanishes")
    inv = f.inv(denom)
    return alg.linear((f.mul(f(lam), inv), g) for g, lam in coefficients.items())


__all__ = [
    "FaceOperator", "FixtureTerm", "NotSurjectiveError", "Simplex4", "WeightError",
    "apply_composed", "apply_operator", "face_operator_d", "face_tet_operator",
    "fixture_element", "general_inverse", "invert_to_one", "load_appendix_fixture",
    "verify_w_candidate", "weight_W",
]
