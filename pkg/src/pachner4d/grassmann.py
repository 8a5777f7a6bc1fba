"""Sparse Grassmann algebra with Berezin integration and left derivatives.

A monomial is an ``int`` bitset; bit ``g`` set means generator ``g`` is a
factor, and the monomial denotes the product of its generators in
increasing index order.  Every sign is an inversion count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .field import Field

MAX_GENERATORS = 64

Tet = tuple[int, int, int, int]
KINDS = ("a", "b")


class GrassmannError(ValueError):
    pass


def _bits(m: int) -> Iterator[int]:
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def _popcount(m: int) -> int:
    return m.bit_count()


def reorder_sign(left: int, right: int) -> int:
    """Sign of rewriting ``left * right`` in increasing order (disjoint masks)."""
    n = 0
    for h in _bits(right):
        n += (left >> (h + 1)).bit_count()
    return -1 if n & 1 else 1


class GeneratorTable:
    """Registry of generators ``a_T``, ``b_T`` for tetrahedra ``T``.

    Tetrahedra are sorted lexicographically; ``a_T`` precedes ``b_T``.
    """

    def __init__(self, tetrahedra: Iterable[Tet]):
        tets = sorted({tuple(t) for t in tetrahedra})
        for t in tets:
            if len(t) != 4 or list(t) != sorted(set(t)):
                raise GrassmannError(f"tetrahedron {t} must be 4 strictly increasing vertices")
        if 2 * len(tets) > MAX_GENERATORS:
            raise GrassmannError(
                f"{2 * len(tets)} generators exceed the cap of {MAX_GENERATORS}")
        self.tetrahedra: tuple[Tet, ...] = tuple(tets)
        self.keys: tuple[tuple[Tet, str], ...] = tuple((t, k) for t in tets for k in KINDS)
        self._index = {key: i for i, key in enumerate(self.keys)}

    def __len__(self):
        return len(self.keys)

    def __eq__(self, other):
        return isinstance(other, GeneratorTable) and self.keys == other.keys

    def __hash__(self):
        return hash(self.keys)

    def __repr__(self):
        return f"GeneratorTable({len(self.tetrahedra)} tetrahedra)"

    def __contains__(self, key) -> bool:
        return key in self._index

    def index(self, tet: Iterable[int], kind: str) -> int:
        try:
            return self._index[(tuple(tet), kind)]
        except KeyError:
            raise GrassmannError(f"generator {kind}{_label(tuple(tet))} not registered") from None

    def key(self, g: int) -> tuple[Tet, str]:
        return self.keys[g]

    def name(self, g: int) -> str:
        tet, kind = self.keys[g]
        return kind + _label(tet)

    def lookup(self, name: str) -> int:
        """Index of a generator written like ``a1234`` or ``b2.10.11.12``."""
        kind, rest = name[:1], name[1:]
        if kind not in KINDS or not rest:
            raise GrassmannError(f"bad generator name {name!r}")
        if "." in rest:
            tet = tuple(int(v) for v in rest.split("."))
        else:
            tet = tuple(int(c) for c in rest)
        return self.index(tet, kind)

    def mask(self, tetrahedra: Iterable[Tet]) -> int:
        m = 0
        for t in tetrahedra:
            m |= 1 << self.index(t, "a") | 1 << self.index(t, "b")
        return m


def _label(vertices: tuple[int, ...]) -> str:
    if all(v < 10 for v in vertices):
        return "".join(map(str, vertices))
    return ".".join(map(str, vertices))


@dataclass(frozen=True)
class Algebra:
    """Generator table paired with a coefficient field."""

    table: GeneratorTable
    field: Field

    @property
    def zero(self) -> "GrassmannElement":
        return GrassmannElement(self, {})

    @property
    def one(self) -> "GrassmannElement":
        return GrassmannElement(self, {0: self.field.one})

    def scalar(self, c) -> "GrassmannElement":
        c = self.field.normalize(self.field(c))
        return GrassmannElement(self, {} if self.field.is_zero(c) else {0: c})

    def gen(self, g: int | str) -> "GrassmannElement":
        if isinstance(g, str):
            g = self.table.lookup(g)
        if not 0 <= g < len(self.table):
            raise GrassmannError(f"generator index {g} not registered")
        return GrassmannElement(self, {1 << g: self.field.one})

    def a(self, tet: Iterable[int]) -> "GrassmannElement":
        return self.gen(self.table.index(tet, "a"))

    def b(self, tet: Iterable[int]) -> "GrassmannElement":
        return self.gen(self.table.index(tet, "b"))

    def linear(self, terms: Iterable[tuple[object, int]]) -> "GrassmannElement":
        """Degree-1 element ``sum c * g`` from ``(c, g)`` pairs."""
        acc: dict[int, object] = {}
        for c, g in terms:
            m = 1 << g
            acc[m] = acc[m] + c if m in acc else c
        return GrassmannElement.from_raw(self, acc)


class GrassmannElement:
    """Immutable sparse element: ``{monomial bitset: nonzero coefficient}``."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: Algebra, terms: Mapping[int, object]):
        self.alg = alg
        self.terms = dict(terms)

    @classmethod
    def from_raw(cls, alg: Algebra, acc: Mapping[int, object]) -> "GrassmannElement":
        """Normalize coefficients and drop zeros."""
        f = alg.field
        norm, is_zero = f.normalize, f.is_zero
        out = {}
        for m, c in acc.items():
            c = norm(c)
            if not is_zero(c):
                out[m] = c
        return cls(alg, out)

    # -- structure ------------------------------------------------------

    @property
    def field(self) -> Field:
        return self.alg.field

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, monomial: int):
        return self.terms.get(monomial, self.alg.field.zero)

    def sorted_terms(self) -> list[tuple[int, object]]:
        return sorted(self.terms.items(), key=lambda mc: (_popcount(mc[0]), mc[0]))

    def _check(self, other: "GrassmannElement"):
        if other.alg is not self.alg and other.alg != self.alg:
            raise GrassmannError("elements live over different generator tables or fields")

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        self._check(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc[m] + c if m in acc else c
        return GrassmannElement.from_raw(self.alg, acc)

    def __neg__(self):
        neg = self.field.neg
        return GrassmannElement(self.alg, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "GrassmannElement":
        c = self.field(c)
        return GrassmannElement.from_raw(self.alg, {m: x * c for m, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, GrassmannElement):
            return g_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self.alg == other.alg and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        return f"GrassmannElement({len(self.terms)} terms)"

    def __str__(self):
        return format_element(self)


# ---------------------------------------------------------------------------
# operations


def g_mul(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    """Grassmann product; monomials sharing a generator annihilate."""
    x._check(y)
    if not x.terms or not y.terms:
        return x.alg.zero
    # for each right monomial, masks selecting left bits above each of its bits
    right = []
    for mb, cb in y.terms.items():
        highs = tuple(~((1 << (h + 1)) - 1) for h in _bits(mb))
        right.append((mb, cb, highs))
    acc: dict[int, object] = {}
    get = acc.get
    for ma, ca in x.terms.items():
        for mb, cb, highs in right:
            if ma & mb:
                continue
            n = 0
            for hm in highs:
                n += (ma & hm).bit_count()
            c = ca * cb
            if n & 1:
                c = -c
            m = ma | mb
            prev = get(m)
            acc[m] = c if prev is None else prev + c
    return GrassmannElement.from_raw(x.alg, acc)


def _check_gen(x: GrassmannElement, g: int):
    if not 0 <= g < len(x.alg.table):
        raise GrassmannError(f"generator index {g} not registered")


def berezin(x: GrassmannElement, g: int) -> GrassmannElement:
    """Berezin integral over generator ``g``.

    ``g`` is moved to the right end of each monomial and deleted.
    """
    _check_gen(x, g)
    bit = 1 << g
    above = ~((bit << 1) - 1)
    neg = x.field.neg
    out = {}
    for m, c in x.terms.items():
        if m & bit:
            out[m ^ bit] = neg(c) if (m & above).bit_count() & 1 else c
    return GrassmannElement(x.alg, out)


def l_deriv(x: GrassmannElement, g: int) -> GrassmannElement:
    """Left derivative: move ``g`` to the left end of each monomial, delete it."""
    _check_gen(x, g)
    bit = 1 << g
    below = bit - 1
    neg = x.field.neg
    out = {}
    for m, c in x.terms.items():
        if m & bit:
            out[m ^ bit] = neg(c) if (m & below).bit_count() & 1 else c
    return GrassmannElement(x.alg, out)


def degree_profile(x: GrassmannElement) -> set[int]:
    return {_popcount(m) for m in x.terms}


def is_homogeneous(x: GrassmannElement, n: int) -> bool:
    # the zero element counts as homogeneous of every degree
    return degree_profile(x) <= {n}


def degree(x: GrassmannElement) -> int | None:
    """Degree of a nonzero homogeneous element; ``None`` for zero."""
    profile = degree_profile(x)
    if not profile:
        return None
    if len(profile) > 1:
        raise GrassmannError(f"element is not homogeneous (degrees {sorted(profile)})")
    return profile.pop()


def support_mask(x: GrassmannElement) -> int:
    m = 0
    for mono in x.terms:
        m |= mono
    return m


def support_generators(x: GrassmannElement) -> set[int]:
    return set(_bits(support_mask(x)))


def monomial_names(table: GeneratorTable, m: int) -> list[str]:
    return [table.name(g) for g in _bits(m)]


def format_element(x: GrassmannElement) -> str:
    """One term per line, sorted by (degree, bitset); ``0`` for the zero element."""
    if not x.terms:
        return "0"
    fmt = x.field.format
    lines = []
    for m, c in x.sorted_terms():
        names = " ".join(monomial_names(x.alg.table, m)) or "1"
        lines.append(f"{fmt(c)} : {names}")
    return "\n".join(lines)


def parse_element(alg: Algebra, text: str) -> GrassmannElement:
    """Inverse of :func:`format_element` for rational coefficients.

    Each line is ``<coefficient> : <gen> <gen> ...``; generators may be
    given in any order, the sign of sorting them is applied.
    """
    from fractions import Fraction

    f = alg.field
    acc = alg.zero
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line == "0":
            continue
        if ":" not in line:
            raise GrassmannError(f"line {lineno}: expected '<coefficient> : <generators>'")
        coef_text, gens_text = line.split(":", 1)
        try:
            coef = f(Fraction(coef_text.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise GrassmannError(f"line {lineno}: bad coefficient: {exc}") from None
        term = alg.scalar(coef)
        for name in gens_text.split():
            if name == "1":
                continue
            term = term * alg.gen(name)
        acc = acc + term
    return acc
