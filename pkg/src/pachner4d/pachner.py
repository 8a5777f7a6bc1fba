"""Cluster integrals, the 3->3 and 2->4 identities, and the move invariant."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .cluster import Cluster
from .field import Field
from .grassmann import (
    Algebra,
    GeneratorTable,
    GrassmannElement,
    GrassmannError,
    berezin,
    degree,
    support_generators,
    support_mask,
)
from .weights import (
    FaceOperator,
    NotSurjectiveError,
    face_operator_d,
    invert_to_one,
    verify_w_candidate,
    weight_W,
)

log = logging.getLogger(__name__)

LEFT_33 = Cluster.of((1, 2, 3, 4, 5), (1, 2, 3, 4, 6), (1, 2, 3, 5, 6))
RIGHT_33 = Cluster.of((1, 2, 4, 5, 6), (1, 3, 4, 5, 6), (2, 3, 4, 5, 6))
LEFT_24 = Cluster.of((1, 2, 3, 4, 5), (1, 2, 3, 4, 6))
RIGHT_24 = Cluster.of((1, 2, 3, 5, 6), (1, 2, 4, 5, 6), (1, 3, 4, 5, 6), (2, 3, 4, 5, 6))
STAR = Cluster.of((1, 2, 3, 4, 6), (1, 2, 3, 5, 6), (1, 2, 4, 5, 6), (1, 3, 4, 5, 6),
                  (2, 3, 4, 5, 6))


class IntegralError(ValueError):
    pass


# ---------------------------------------------------------------------------
# helpers


def algebra_for(*clusters: Cluster, field: Field) -> Algebra:
    """Algebra whose generator table covers every tetrahedron of ``clusters``."""
    tets = set()
    for c in clusters:
        tets.update(c.tetrahedra)
    return Algebra(GeneratorTable(tets), field)


def rebase(x: GrassmannElement, alg: Algebra) -> GrassmannElement:
    """Same element expressed over another table (generators matched by name)."""
    if x.alg == alg:
        return x
    if x.field != alg.field:
        raise GrassmannError("cannot rebase across coefficient fields")
    src = x.alg.table
    remap = {}
    for g in range(len(src)):
        tet, kind = src.key(g)
        if (tet, kind) in alg.table:
            remap[g] = alg.table.index(tet, kind)
    acc = alg.zero
    for m, c in x.terms.items():
        term = alg.scalar(c)
        g, mm = 0, m
        while mm:
            if mm & 1:
                if g not in remap:
                    raise GrassmannError(f"generator {src.name(g)} missing from target table")
                term = term * alg.gen(remap[g])
            mm >>= 1
            g += 1
        acc = acc + term
    return acc


def face_operators(cluster: Cluster, alg: Algebra) -> list[FaceOperator]:
    """``d`` operators of the inner 2-faces, faces in lexicographic order."""
    return [face_operator_d(f, cluster, alg) for f in cluster.classify().inner_faces]


def boundary_mask(cluster: Cluster, alg: Algebra) -> int:
    return alg.table.mask(cluster.classify().boundary_tetrahedra)


def _measure(cluster: Cluster, field: Field):
    f = field
    c = f.one
    for t in cluster.classify().inner_tetrahedra:
        c = f.mul(c, f.inv(f.zeta_diff(t[2], t[3])))
    return c


def _integration_sequence(cluster: Cluster, alg: Algebra) -> list[int]:
    seq = []
    for t in cluster.classify().inner_tetrahedra:
        seq.append(alg.table.index(t, "a"))
        seq.append(alg.table.index(t, "b"))
    return seq


def _parity(perm: Sequence[int]) -> int:
    n = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                n += 1
    return n & 1


def _resolve_w(cluster: Cluster, alg: Algebra, w, check: bool = True) -> GrassmannElement:
    ops = face_operators(cluster, alg)
    if isinstance(w, str):
        if w != "auto":
            raise IntegralError(f"unknown w selector {w!r}")
        return invert_to_one(ops, alg)
    w = rebase(w, alg)
    if check and not verify_w_candidate(ops, w):
        raise IntegralError("w does not satisfy (prod d) w = 1 with the right degree")
    return w


# ---------------------------------------------------------------------------
# integrals


def integrate_product(factors: Sequence[GrassmannElement], sequence: Sequence[int],
                      *, method: str = "schedule") -> GrassmannElement:
    """``int F_1 ... F_r dg_1 ... dg_s`` with ``dg_1`` innermost.

    ``method="naive"`` multiplies everything first.  ``"schedule"``
    reorders the homogeneous factors (Koszul signs) and integrates each
    generator as soon as no pending factor contains it; the reordering of
    the integrations is compensated by its permutation sign.
    """
    if not factors:
        raise IntegralError("empty product")
    alg = factors[0].alg
    if method == "naive":
        acc = factors[0]
        for x in factors[1:]:
            acc = acc * x
        for g in sequence:
            acc = berezin(acc, g)
        return acc
    if method != "schedule":
        raise IntegralError(f"unknown method {method!r}")

    degs = []
    for x in factors:
        d = degree(x)
        if d is None:
            return alg.zero
        degs.append(d)
    supports = [support_mask(x) for x in factors]
    pending = list(range(len(factors)))
    position = {g: i for i, g in enumerate(sequence)}
    left = set(sequence)
    order: list[int] = []
    done: list[int] = []

    def ready(remaining):
        busy = 0
        for i in remaining:
            busy |= supports[i]
        return [g for g in sequence if g in left and not busy >> g & 1]

    acc = alg.one
    rest_deg = sum(degs)
    while True:
        for g in ready(pending):
            acc = berezin(acc, g)
            if rest_deg & 1:
                acc = -acc
            left.discard(g)
            done.append(g)
        if not acc or not pending:
            break
        # greedy: the factor that frees the most generators, earliest on ties
        best, best_gain = pending[0], -1
        for i in pending:
            rem = [j for j in pending if j != i]
            gain = len(ready(rem))
            if gain > best_gain:
                best, best_gain = i, gain
        pending.remove(best)
        order.append(best)
        acc = acc * factors[best]
        rest_deg -= degs[best]
    if not acc:
        return alg.zero
    # factors were multiplied in `order`; undo with Koszul signs
    sign = 0
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b]:
                sign += degs[order[a]] * degs[order[b]]
    sign += _parity([position[g] for g in done])
    return -acc if sign & 1 else acc


def cluster_integral(cluster: Cluster, field: Field | None = None, w="auto", *,
                     alg: Algebra | None = None, method: str = "schedule",
                     check_w: bool = True) -> GrassmannElement:
    """Berezin integral of ``prod W * w`` over the inner tetrahedra of ``cluster``.

    Simplex weights are multiplied in lexicographic order with ``w`` on the
    right; each inner tetrahedron ``ijkl`` contributes ``da db / zeta_kl``,
    tetrahedra in lexicographic order, ``da`` innermost.  ``check_w=False``
    accepts any ``w``, which is how the integral is probed as a function of
    ``w``.
    """
    if alg is None:
        if field is None:
            raise IntegralError("need a field or an algebra")
        alg = algebra_for(cluster, field=field)
    f = alg.field
    w = _resolve_w(cluster, alg, w, check_w)
    factors = [weight_W(s, alg) for s in cluster.simplexes] + [w]
    result = integrate_product(factors, _integration_sequence(cluster, alg), method=method)
    return result.scale(_measure(cluster, f))


def edge_factor(cluster: Cluster, field: Field):
    """Product of ``zeta_ij`` over the inner edges ``ij``."""
    c = field.one
    for i, j in cluster.classify().inner_edges:
        c = field.mul(c, field.zeta_diff(i, j))
    return c


def probe_elements(cluster: Cluster, alg: Algebra, count: int, seed: int = 0):
    """Seeded random homogeneous elements of degree ``#inner faces`` on inner generators.

    Each probe is a sum of three random monomials with random coefficients.
    """
    rng = random.Random(seed)
    n = len(cluster.classify().inner_faces)
    gens = sorted(set().union(*(op.generators for op in face_operators(cluster, alg))))
    probes = []
    for _ in range(count):
        x = alg.zero
        for _ in range(3):
            mono = alg.scalar(rng.randrange(1, 1 << 30))
            for g in sorted(rng.sample(gens, n)):
                mono = mono * alg.gen(g)
            x = x + mono
        probes.append(x)
    return probes


def invariant_ti(cluster: Cluster, field: Field | None = None, w="auto", *,
                 alg: Algebra | None = None, method: str = "schedule",
                 probes: int = 4, seed: int = 0) -> GrassmannElement:
    """Move invariant of ``cluster``, defined up to an overall sign.

    If the inner-face operator product kills every element of the required
    degree (e.g. an inner vertex is present), no ``w`` exists.  The integral
    depends on ``w`` only through ``(prod d) w``, so the value is zero; this
    is checked on ``probes`` seeded random elements and an
    :class:`IntegralError` is raised if any probe integrates to nonzero.
    """
    if alg is None:
        alg = algebra_for(cluster, field=field)
    try:
        value = cluster_integral(cluster, w=w, alg=alg, method=method)
    except NotSurjectiveError:
        for i, x in enumerate(probe_elements(cluster, alg, probes, seed)):
            if cluster_integral(cluster, w=x, alg=alg, method=method, check_w=False):
                raise IntegralError(
                    f"no w exists and probe {i} integrates to a nonzero element; "
                    "the invariant is undefined for this cluster") from None
        log.info("no w for %r; integral vanished on %d probes", cluster, probes)
        return alg.zero
    return value.scale(edge_factor(cluster, alg.field))


def equal_up_to_sign(x: GrassmannElement, y: GrassmannElement) -> bool:
    return x == y or x == -y


# ---------------------------------------------------------------------------
# listed candidates for w


def candidates_33_left(alg: Algebra) -> dict[str, GrassmannElement]:
    """The six single-monomial choices of ``w_123``."""
    f = alg.field
    out = {}
    for x in (4, 5, 6):
        tet = (1, 2, 3, x)
        out[f"a123{x}"] = alg.a(tet).scale(f.div(f.zeta_diff(3, x), f.zeta_diff(2, 3)))
        out[f"b123{x}"] = alg.b(tet).scale(f.div(f.zeta_diff(3, x), f.zeta_diff(3, 1)))
    return out


def candidates_33_right(alg: Algebra) -> dict[str, GrassmannElement]:
    """The three single-monomial choices of ``w_456``."""
    return {f"b{x}456": -alg.b((x, 4, 5, 6)) for x in (1, 2, 3)}


def candidates_24_right(alg: Algebra) -> dict[str, GrassmannElement]:
    return {"a1256b1256a3456b3456": alg.a((1, 2, 5, 6)) * alg.b((1, 2, 5, 6))
            * alg.a((3, 4, 5, 6)) * alg.b((3, 4, 5, 6))}


def resolve_candidate(selector, candidates: dict[str, GrassmannElement]):
    if not isinstance(selector, str) or selector == "auto":
        return selector
    try:
        return candidates[selector]
    except KeyError:
        raise IntegralError(
            f"unknown w candidate {selector!r}; choose auto or one of {', '.join(candidates)}"
        ) from None


# ---------------------------------------------------------------------------
# move verification


@dataclass
class MoveReport:
    move: str
    left: GrassmannElement
    right: GrassmannElement
    edge_factor: object
    difference: GrassmannElement = dc_field(init=False)
    passed: bool = dc_field(init=False)
    details: dict[str, str] = dc_field(default_factory=dict)

    def __post_init__(self):
        self.difference = self.left - self.right
        self.passed = not self.difference

    @property
    def mode(self) -> dict[str, str]:
        return self.left.field.describe()

    def to_text(self) -> str:
        f = self.left.field
        lines = [f"move: {self.move}"]
        lines += [f"{k}: {v}" for k, v in self.mode.items()]
        lines += [f"{k}: {v}" for k, v in self.details.items()]
        lines += [
            f"edge factor: {f.format(self.edge_factor)}",
            f"left terms: {len(self.left)}",
            f"right terms: {len(self.right)}",
            f"difference terms: {len(self.difference)}",
            f"result: {'PASS' if self.passed else 'FAIL'}",
        ]
        return "\n".join(lines)


def verify_move_33(field: Field, w_left="auto", w_right="auto", *,
                   method: str = "schedule") -> MoveReport:
    alg = algebra_for(LEFT_33, RIGHT_33, field=field)
    w_left = resolve_candidate(w_left, candidates_33_left(alg))
    w_right = resolve_candidate(w_right, candidates_33_right(alg))
    left = cluster_integral(LEFT_33, w=w_left, alg=alg, method=method)
    right = cluster_integral(RIGHT_33, w=w_right, alg=alg, method=method)
    return MoveReport("3->3", left, right, field.one)


def verify_move_24(field: Field, w_right="auto", *, edge_factor: bool = True,
                   method: str = "schedule") -> MoveReport:
    alg = algebra_for(LEFT_24, RIGHT_24, field=field)
    w_right = resolve_candidate(w_right, candidates_24_right(alg))
    left = cluster_integral(LEFT_24, alg=alg, method=method)
    right = cluster_integral(RIGHT_24, w=w_right, alg=alg, method=method)
    factor = field.neg(field.zeta_diff(5, 6)) if edge_factor else field.one
    return MoveReport("2->4", left, right.scale(factor), factor)


def supported_on_boundary(x: GrassmannElement, cluster: Cluster) -> bool:
    return support_generators(x) <= set(
        g for g in range(len(x.alg.table)) if boundary_mask(cluster, x.alg) >> g & 1)
