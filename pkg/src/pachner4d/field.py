"""Coefficient fields for Grassmann arithmetic.

Three interchangeable modes share one small interface:

* ``RationalField``  -- exact rationals with concrete vertex coordinates,
* ``PrimeField``     -- residues mod a prime with concrete coordinates,
* ``SymbolicField``  -- rational functions over Q in indeterminates z1..zN.

Scalars are plain values (``Fraction``, ``int``, ``RationalFunction``) that
support the Python ring operators.  Hot loops may combine them with ``+``,
``-`` and ``*`` directly and call :meth:`Field.normalize` once at the end;
for the prime field this defers the modular reduction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping

import flint

DEFAULT_PRIME = (1 << 61) - 1

MODES = ("symbolic", "rational", "prime-field")


class FieldError(ValueError):
    """Invalid field construction or a disallowed scalar operation."""


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """Reduced quotient of two polynomials over Q.

    Canonical form: ``gcd(num, den) == 1`` and the graded-lex leading
    coefficient of ``den`` equals 1.  Equality is structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _canonical=False):
        if den is None:
            den = num.context().constant(1)
            _canonical = True
        if not _canonical:
            if den.is_zero():
                raise ZeroDivisionError("rational function with zero denominator")
            if num.is_zero():
                num, den = num, den.context().constant(1)
            elif not den.is_constant():
                g = num.gcd(den)
                if not g.is_one():
                    num = num / g
                    den = den / g
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        self.num = num
        self.den = den

    def _wrap(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            c = flint.fmpq(other.numerator, other.denominator)
            return RationalFunction(self.num.context().constant(c))
        return NotImplemented

    @property
    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def __add__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        if self.den.is_one() and other.den.is_one():
            return RationalFunction(self.num + other.num)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        if self.den.is_one() and other.den.is_one():
            return RationalFunction(self.num * other.num)
        # cross-cancel first; both operands are already reduced
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        a, d2 = self.num, other.den
        if not g1.is_one():
            a, d2 = a / g1, d2 / g1
        b, d1 = other.num, self.den
        if not g2.is_one():
            b, d1 = b / g2, d1 / g2
        num, den = a * b, d1 * d2
        if num.is_zero():
            return RationalFunction(num)
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        return RationalFunction(num, den, _canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class ZetaAssignment:
    """Concrete vertex coordinates, pairwise distinct."""

    values: Mapping[int, object]

    def __post_init__(self):
        if len(set(self.values.values())) != len(self.values):
            raise FieldError("vertex coordinates must be pairwise distinct")
        for v in self.values:
            if not isinstance(v, int) or v < 1:
                raise FieldError(f"vertex labels must be positive integers, got {v!r}")
        object.__setattr__(self, "values", dict(sorted(self.values.items())))

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(self.values)

    def __hash__(self):
        return hash(tuple(self.values.items()))


class Field:
    """Common interface; concrete subclasses fix the scalar type."""

    mode: str
    zero: object
    one: object

    def __call__(self, value) -> object:
        raise NotImplementedError

    def normalize(self, x):
        return x

    def add(self, x, y):
        return self.normalize(x + y)

    def sub(self, x, y):
        return self.normalize(x - y)

    def mul(self, x, y):
        return self.normalize(x * y)

    def neg(self, x):
        return self.normalize(-x)

    def inv(self, x):
        raise NotImplementedError

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def is_zero(self, x) -> bool:
        return not x

    def eq(self, x, y) -> bool:
        return self.is_zero(self.sub(x, y))

    def zeta(self, i: int):
        raise NotImplementedError

    def zeta_diff(self, i: int, j: int):
        """Coordinate difference ``zeta_i - zeta_j``."""
        if i == j:
            raise FieldError(f"zeta_diff needs distinct vertices, got {i} twice")
        return self.sub(self.zeta(i), self.zeta(j))

    def format(self, x) -> str:
        return str(x)

    def describe(self) -> dict[str, str]:
        """Key/value lines embedded in reports."""
        raise NotImplementedError


@dataclass(frozen=True, eq=True)
class RationalField(Field):
    assignment: ZetaAssignment
    mode: str = dc_field(default="rational", init=False)

    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value) -> Fraction:
        return Fraction(value)

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x

    def zeta(self, i):
        try:
            return self.assignment.values[i]
        except KeyError:
            raise FieldError(f"vertex {i} has no coordinate") from None

    def describe(self):
        return {
            "mode": self.mode,
            "zeta": " ".join(f"{v}:{c}" for v, c in self.assignment.values.items()),
        }


@dataclass(frozen=True, eq=True)
class PrimeField(Field):
    assignment: ZetaAssignment
    p: int = DEFAULT_PRIME
    mode: str = dc_field(default="prime-field", init=False)

    zero = 0
    one = 1

    def __post_init__(self):
        if self.p < 2 or not flint.fmpz(self.p).is_prime():
            raise FieldError(f"modulus {self.p} is not prime")
        for v, c in self.assignment.values.items():
            if not isinstance(c, int) or not 0 <= c < self.p:
                raise FieldError(f"coordinate of vertex {v} is not a residue mod {self.p}")

    def __call__(self, value) -> int:
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator {value.denominator} vanishes mod {self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def normalize(self, x):
        return x % self.p

    def inv(self, x):
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def zeta(self, i):
        try:
            return self.assignment.values[i]
        except KeyError:
            raise FieldError(f"vertex {i} has no coordinate") from None

    def format(self, x):
        # symmetric representative reads better for small values
        x %= self.p
        return str(x - self.p if x > self.p // 2 else x)

    def describe(self):
        return {
            "mode": self.mode,
            "prime": str(self.p),
            "zeta": " ".join(f"{v}:{c}" for v, c in self.assignment.values.items()),
        }


class SymbolicField(Field):
    """Rational functions over Q in z1..zN, graded-lex monomial order."""

    mode = "symbolic"

    def __init__(self, n_vertices: int):
        if n_vertices < 1:
            raise FieldError("symbolic field needs at least one vertex")
        self.n_vertices = n_vertices
        names = tuple(f"z{i}" for i in range(1, n_vertices + 1))
        self.ctx = flint.fmpq_mpoly_ctx.get(names, "deglex")
        self._gens = self.ctx.gens()
        self.zero = RationalFunction(self.ctx.constant(0))
        self.one = RationalFunction(self.ctx.constant(1))

    def __eq__(self, other):
        return isinstance(other, SymbolicField) and other.n_vertices == self.n_vertices

    def __hash__(self):
        return hash(("symbolic", self.n_vertices))

    def __repr__(self):
        return f"SymbolicField(n_vertices={self.n_vertices})"

    def __call__(self, value) -> RationalFunction:
        if isinstance(value, RationalFunction):
            return value
        value = Fraction(value)
        return RationalFunction(self.ctx.constant(flint.fmpq(value.numerator, value.denominator)))

    def inv(self, x):
        return x.inverse()

    def zeta(self, i):
        if not 1 <= i <= self.n_vertices:
            raise FieldError(f"vertex {i} outside z1..z{self.n_vertices}")
        return RationalFunction(self._gens[i - 1])

    def describe(self):
        return {"mode": self.mode, "variables": f"z1..z{self.n_vertices}", "exact": "yes"}


# ---------------------------------------------------------------------------
# assignments


def random_assignment(vertices: Iterable[int], seed: int, mode: str = "prime-field", *,
                      prime: int = DEFAULT_PRIME, bound: int = 10**6) -> ZetaAssignment:
    """Deterministic pairwise-distinct coordinates drawn from ``random.Random(seed)``.

    Rational mode draws ``n/d`` with ``|n| <= bound`` and ``1 <= d <= 1000``;
    prime-field mode draws residues in ``[0, prime)``.
    """
    vertices = sorted(set(vertices))
    rng = random.Random(seed)
    if mode == "prime-field":
        size = prime
        draw = lambda: rng.randrange(prime)  # noqa: E731
    elif mode == "rational":
        size = 2 * bound + 1  # distinct numerators alone suffice
        draw = lambda: Fraction(rng.randint(-bound, bound), rng.randint(1, 1000))  # noqa: E731
    else:
        raise FieldError(f"random assignments need mode rational or prime-field, got {mode!r}")
    if size < len(vertices):
        raise FieldError(f"cannot draw {len(vertices)} distinct values from a range of {size}")
    values: dict[int, object] = {}
    seen = set()
    for v in vertices:
        x = draw()
        while x in seen:
            x = draw()
        seen.add(x)
        values[v] = x
    return ZetaAssignment(values)


def parse_zeta_assignment(text: str) -> dict[int, Fraction]:
    """Parse ``<vertex> <p>/<q>`` lines; ``#`` starts a comment line."""
    values: dict[int, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FieldError(f"line {lineno}: expected '<vertex> <p>/<q>', got {raw!r}")
        try:
            vertex = int(parts[0])
            value = Fraction(parts[1])
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"line {lineno}: {exc}") from None
        if vertex < 1:
            raise FieldError(f"line {lineno}: vertex must be positive")
        if vertex in values:
            raise FieldError(f"line {lineno}: vertex {vertex} assigned twice")
        values[vertex] = value
    return values


def make_field(mode: str, vertices: Iterable[int], *, seed: int = 0, prime: int = DEFAULT_PRIME,
               values: Mapping[int, Fraction] | None = None) -> Field:
    """Build a field for ``vertices``.

    Concrete modes use ``values`` when given, otherwise a seeded random
    assignment.  Symbolic mode ignores both.
    """
    vertices = sorted(set(vertices))
    if mode == "symbolic":
        return SymbolicField(max(vertices))
    if mode not in MODES:
        raise FieldError(f"unknown mode {mode!r}; choose from {', '.join(MODES)}")
    if values is None:
        return _from_assignment(mode, random_assignment(vertices, seed, mode, prime=prime), prime)
    missing = [v for v in vertices if v not in values]
    if missing:
        raise FieldError(f"no coordinate for vertices {missing}")
    if mode == "rational":
        return RationalField(ZetaAssignment({v: Fraction(values[v]) for v in values}))
    if prime < 2 or not flint.fmpz(prime).is_prime():
        raise FieldError(f"modulus {prime} is not prime")
    conv = {}
    for v, c in values.items():
        c = Fraction(c)
        if c.denominator % prime == 0:
            raise FieldError(f"coordinate of vertex {v} has denominator divisible by {prime}")
        conv[v] = c.numerator * pow(c.denominator, -1, prime) % prime
    return PrimeField(ZetaAssignment(conv), prime)


def _from_assignment(mode, assignment, prime):
    if mode == "rational":
        return RationalField(assignment)
    return PrimeField(assignment, prime)
