"""Exact arithmetic in number fields Q[x]/(h(x)) and Dirichlet character tables.

Coefficient fields of newforms arrive as a monic integer polynomial ``h``
(coefficients low to high).  Elements are power-basis coordinate vectors of
``Fraction``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from freymod.errors import FieldMismatchError, RamifiedCharacterError

Poly = tuple  # low-to-high coefficients
Scalar = Union[int, Fraction]


def _trim(p: Sequence) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = [Fraction(c) for c in _trim(a)]
    b = [Fraction(c) for c in _trim(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] -= c * y
        a = _trim(a)
    return _trim(q), a


def resultant(f: Sequence, g: Sequence) -> Fraction:
    """Res(f, g) by the Euclidean algorithm over Q."""
    f = [Fraction(c) for c in _trim(f)]
    g = [Fraction(c) for c in _trim(g)]
    if not f or not g:
        return Fraction(0)
    m, n = len(f) - 1, len(g) - 1
    if n == 0:
        return g[0] ** m
    if m == 0:
        return f[0] ** n
    _, r = poly_divmod(f, g)
    if not r:
        return Fraction(0)
    # Res(f,g) = (-1)^{mn} Res(g,f) = (-1)^{mn} lc(g)^{m - deg r} Res(g, r)
    sign = -1 if (m * n) % 2 else 1
    return sign * g[-1] ** (m - (len(r) - 1)) * resultant(g, r)


def determinant(rows: list[list[Fraction]]) -> Fraction:
    a = [list(map(Fraction, r)) for r in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


class NumberField:
    """Q[x]/(h) for a monic integer polynomial h."""

    __slots__ = ("poly", "degree")

    def __init__(self, poly: Iterable[int]):
        poly = tuple(int(c) for c in _trim(poly))
        if len(poly) < 2:
            raise ValueError("defining polynomial must have degree >= 1")
        if poly[-1] != 1:
            raise ValueError(f"defining polynomial {list(poly)} is not monic")
        self.poly = poly
        self.degree = len(poly) - 1

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return f"NumberField({list(self.poly)})"

    def __call__(self, coords: Union[Scalar, Sequence[Scalar]]) -> "NumberFieldElement":
        if isinstance(coords, (int, Fraction)):
            coords = [coords]
        return NumberFieldElement(self, coords)

    def gen(self) -> "NumberFieldElement":
        if self.degree == 1:
            return self([-self.poly[0]])
        return self([0, 1])

    def reduce(self, p: Sequence) -> tuple[Fraction, ...]:
        _, r = poly_divmod(p, self.poly)
        r = r + [Fraction(0)] * (self.degree - len(r))
        return tuple(r)


class NumberFieldElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Sequence[Scalar]):
        self.field = field
        coords = [Fraction(c) for c in coords]
        if len(coords) > field.degree:
            self.coords = field.reduce(coords)
        else:
            self.coords = tuple(coords) + (Fraction(0),) * (field.degree - len(coords))

    @property
    def defining_poly(self) -> tuple:
        return self.field.poly

    def _coerce(self, other) -> "NumberFieldElement":
        if isinstance(other, NumberFieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return NumberFieldElement(self.field, [other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return NumberFieldElement(self.field, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return NumberFieldElement(self.field, [a - b for a, b in zip(self.coords, o.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return NumberFieldElement(self.field, self.field.reduce(poly_mul(self.coords, o.coords)))

    __rmul__ = __mul__

    def inverse(self) -> "NumberFieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid: s*a + t*h = 1
        r0, r1 = [Fraction(c) for c in self.field.poly], _trim(self.coords)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, poly_mul(q, s1))
        if not r1:
            raise ZeroDivisionError("element is a zero divisor (h is reducible)")
        c = r1[0]
        return NumberFieldElement(self.field, self.field.reduce([x / c for x in s1]))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = NumberFieldElement(self.field, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        return hash((self.field, self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __repr__(self):
        terms = [str(c) if i == 0 else f"{c}*x^{i}" for i, c in enumerate(self.coords) if c]
        return " + ".join(terms) or "0"

    def multiplication_matrix(self) -> list[list[Fraction]]:
        n = self.field.degree
        cols = []
        for i in range(n):
            basis = [Fraction(0)] * n
            basis[i] = Fraction(1)
            cols.append((self * NumberFieldElement(self.field, basis)).coords)
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def norm_det(self) -> Fraction:
        return determinant(self.multiplication_matrix())

    def norm_resultant(self) -> Fraction:
        rep = _trim(self.coords)
        if not rep:
            return Fraction(0)
        return resultant(self.field.poly, rep)

    def norm(self) -> Fraction:
        a, b = self.norm_det(), self.norm_resultant()
        if a != b:
            raise ArithmeticError(f"norm mismatch for {self!r}: det {a} vs resultant {b}")
        return a

    def trace(self) -> Fraction:
        m = self.multiplication_matrix()
        return sum(m[i][i] for i in range(len(m)))

    def charpoly(self) -> list[Fraction]:
        """Characteristic polynomial of multiplication, low-to-high (Faddeev-LeVerrier)."""
        A = self.multiplication_matrix()
        n = len(A)
        coeffs = [Fraction(0)] * n + [Fraction(1)]
        M = [[Fraction(0)] * n for _ in range(n)]
        for k in range(1, n + 1):
            # M <- A M + c_{n-k+1} I
            M = [[sum(A[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
            for i in range(n):
                M[i][i] += coeffs[n - k + 1]
            AM = [[sum(A[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
            coeffs[n - k] = -sum(AM[i][i] for i in range(n)) / k
        return coeffs

    def is_integral(self) -> bool:
        """True when the element is an algebraic integer."""
        return all(c.denominator == 1 for c in self.charpoly())


def _poly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([Fraction(x) - Fraction(y) for x, y in zip(a, b)])


def nf_norm(x: NumberFieldElement) -> Fraction:
    return x.norm()


# -- characters ------------------------------------------------------------


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


@dataclass(frozen=True)
class CharacterTable:
    """Full value table of a Dirichlet character of 2-power order."""

    modulus: int
    order: int
    values: Mapping[int, NumberFieldElement]

    def validate(self, spot_checks: int = 64, seed: int = 0) -> None:
        if not _is_power_of_two(self.order):
            raise ValueError(f"character order {self.order} is not a power of two")
        units = [u for u in range(self.modulus) if math.gcd(u, self.modulus) == 1]
        if self.modulus == 1:
            units = [0]
        missing = [u for u in units if u not in self.values]
        if missing:
            raise ValueError(f"character table misses units {missing[:5]}")
        one = None
        for u in units:
            v = self.values[u]
            one = one or v.field([1])
            if v ** self.order != one:
                raise ValueError(f"value at {u} is not a root of unity of order dividing {self.order}")
        if self.values[1 % self.modulus] != one:
            raise ValueError("character must send 1 to 1")
        rng = random.Random(seed)
        for _ in range(spot_checks):
            a, b = rng.choice(units), rng.choice(units)
            if self.values[a] * self.values[b] != self.values[(a * b) % self.modulus]:
                raise ValueError(f"character is not multiplicative at ({a}, {b})")

    def __call__(self, n: int) -> NumberFieldElement:
        return char_value(self, n)

    def power(self, k: int) -> "CharacterTable":
        return CharacterTable(self.modulus, self.order, {u: v ** k for u, v in self.values.items()})

    @classmethod
    def trivial(cls, field: NumberField) -> "CharacterTable":
        return cls(1, 1, {0: field([1])})


def char_value(tab: CharacterTable, ell: int) -> NumberFieldElement:
    if math.gcd(ell, tab.modulus) != 1:
        raise RamifiedCharacterError(f"ramified character evaluation: {ell} divides modulus {tab.modulus}")
    return tab.values[ell % tab.modulus]
