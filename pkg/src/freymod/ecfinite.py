"""Curves over F_ell and F_{ell^2} (ell odd) and traces of Frobenius.

F_{ell^2} is F_ell[t]/(t^2 - r) with r the smallest positive quadratic
non-residue mod ell.  Point counts use the completed-square form
(2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 and a table of the
quadratic character, vectorised with numpy.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from freymod import weierstrass
from freymod.errors import BadReductionError, UnsupportedPlaceError
from freymod.quadfield import PrimeIdeal, QuadInt

MAX_FIELD_SIZE = 10**6


@lru_cache(maxsize=None)
def smallest_nonresidue(ell: int) -> int:
    for r in range(2, ell):
        if pow(r, (ell - 1) // 2, ell) == ell - 1:
            return r
    raise ValueError(f"no non-residue mod {ell}")


class FqElement:
    """c0 + c1*t in F_ell (degree 1, c1 = 0) or F_{ell^2} (degree 2)."""

    __slots__ = ("ell", "degree", "c0", "c1")

    def __init__(self, ell: int, degree: int, c0: int, c1: int = 0):
        if degree not in (1, 2):
            raise ValueError("degree must be 1 or 2")
        if degree == 1 and c1 % ell:
            raise ValueError("degree-1 element with nonzero t coordinate")
        self.ell = ell
        self.degree = degree
        self.c0 = c0 % ell
        self.c1 = c1 % ell

    @property
    def coords(self) -> tuple[int, int]:
        return (self.c0, self.c1)

    @property
    def r(self) -> int:
        return smallest_nonresidue(self.ell)

    def _coerce(self, other) -> "FqElement":
        if isinstance(other, FqElement):
            if other.ell != self.ell:
                raise ValueError("mixed characteristics")
            return other
        if isinstance(other, int):
            return FqElement(self.ell, self.degree, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FqElement(self.ell, max(self.degree, o.degree), self.c0 + o.c0, self.c1 + o.c1)

    __radd__ = __add__

    def __neg__(self):
        return FqElement(self.ell, self.degree, -self.c0, -self.c1)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FqElement(
            self.ell,
            max(self.degree, o.degree),
            self.c0 * o.c0 + (self.r * self.c1 * o.c1 if self.c1 and o.c1 else 0),
            self.c0 * o.c1 + self.c1 * o.c0,
        )

    __rmul__ = __mul__

    def norm(self) -> int:
        """Norm down to F_ell (the element itself in degree 1)."""
        if self.degree == 1:
            return self.c0
        return (self.c0 * self.c0 - self.r * self.c1 * self.c1) % self.ell

    def inverse(self) -> "FqElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        inv = pow(n, -1, self.ell)
        if self.degree == 1:
            return FqElement(self.ell, 1, inv)
        return FqElement(self.ell, 2, self.c0 * inv, -self.c1 * inv)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = FqElement(self.ell, self.degree, 1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frobenius(self) -> "FqElement":
        return FqElement(self.ell, self.degree, self.c0, -self.c1)

    def is_square(self) -> bool:
        n = self.norm()
        return n == 0 or pow(n, (self.ell - 1) // 2, self.ell) == 1

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.ell == o.ell and self.c0 == o.c0 and self.c1 == o.c1

    def __hash__(self):
        return hash((self.ell, self.c0, self.c1))

    def __bool__(self):
        return bool(self.c0 or self.c1)

    def __repr__(self):
        if self.degree == 1:
            return f"{self.c0} (mod {self.ell})"
        return f"{self.c0}+{self.c1}t (F_{self.ell}^2)"


def sqrt_in_fq2(n: int, ell: int) -> FqElement:
    """A square root of the integer n inside F_{ell^2}."""
    n %= ell
    r = smallest_nonresidue(ell)
    for c in range(ell):
        if (c * c - n) % ell == 0:
            return FqElement(ell, 2, c)
    # n = r * u^2 for some u since n is a non-residue
    target = n * pow(r, -1, ell) % ell
    for u in range(ell):
        if u * u % ell == target:
            return FqElement(ell, 2, 0, u)
    raise ArithmeticError("unreachable")


@dataclass(frozen=True)
class CurveOverFq:
    ell: int
    degree: int
    ainvs: tuple  # (a1, a2, a3, a4, a6) as FqElement

    @classmethod
    def from_ints(cls, ell: int, ainvs: Sequence, degree: int = 1) -> "CurveOverFq":
        elts = []
        for a in ainvs:
            if isinstance(a, tuple):
                elts.append(FqElement(ell, degree, *a))
            else:
                elts.append(FqElement(ell, degree, a))
        return cls(ell, degree, tuple(elts))

    @property
    def q(self) -> int:
        return self.ell ** self.degree

    @property
    def delta(self) -> FqElement:
        return weierstrass.invariants(self.ainvs).disc

    @property
    def is_singular(self) -> bool:
        return not self.delta

    def base_extend(self) -> "CurveOverFq":
        if self.degree == 2:
            return self
        return CurveOverFq(self.ell, 2, tuple(FqElement(self.ell, 2, a.c0, a.c1) for a in self.ainvs))

    def points(self) -> list:
        """All affine points by brute force (small fields only; test oracle)."""
        F = lambda c0, c1=0: FqElement(self.ell, self.degree, c0, c1)
        elements = [F(a, b) for a in range(self.ell) for b in range(self.ell if self.degree == 2 else 1)]
        return [(x, y) for x in elements for y in elements if weierstrass.on_curve(self.ainvs, (x, y))]


@lru_cache(maxsize=64)
def _legendre_table(ell: int) -> np.ndarray:
    chi = -np.ones(ell, dtype=np.int64)
    chi[0] = 0
    xs = np.arange(1, ell, dtype=np.int64)
    chi[(xs * xs) % ell] = 1
    return chi


def count_points(E: CurveOverFq) -> int:
    """Trace of Frobenius a = q + 1 - #E(F_q)."""
    ell = E.ell
    if ell == 2:
        raise UnsupportedPlaceError("characteristic 2 is not supported")
    q = E.q
    if q > MAX_FIELD_SIZE:
        raise ValueError(f"field size {q} exceeds the counting cap {MAX_FIELD_SIZE}")
    if E.is_singular:
        raise BadReductionError("singular curve: bad reduction")
    inv = weierstrass.invariants(E.ainvs)
    # coefficients of 4x^3 + b2 x^2 + 2 b4 x + b6
    coeffs = [FqElement(ell, E.degree, 4), inv.b2, 2 * inv.b4, inv.b6]
    chi = _legendre_table(ell)
    if E.degree == 1:
        x = np.arange(ell, dtype=np.int64)
        f = np.zeros(ell, dtype=np.int64)
        for c in coeffs:
            f = (f * x + c.c0) % ell
        s = int(chi[f].sum())
    else:
        r = smallest_nonresidue(ell)
        x0, x1 = np.divmod(np.arange(ell * ell, dtype=np.int64), ell)
        f0 = np.zeros_like(x0)
        f1 = np.zeros_like(x0)
        for c in coeffs:
            # (f0 + f1 t)(x0 + x1 t) + c
            g0 = (f0 * x0 + r * ((f1 * x1) % ell) + c.c0) % ell
            g1 = (f0 * x1 + f1 * x0 + c.c1) % ell
            f0, f1 = g0, g1
        nrm = (f0 * f0 - r * ((f1 * f1) % ell)) % ell
        s = int(chi[nrm].sum())
    a = -s
    assert a * a <= 4 * q, f"Hasse bound violated: a={a}, q={q}"
    return a


def inert_trace(E: CurveOverFq) -> int:
    """Trace over F_{ell^2} of a curve defined over F_ell, by direct count.

    Raises ArithmeticError if it disagrees with a_ell^2 - 2 ell.
    """
    if E.degree != 1:
        raise ValueError("curve must be defined over the prime field")
    a1 = count_points(E)
    a2 = count_points(E.base_extend())
    if a2 != a1 * a1 - 2 * E.ell:
        raise ArithmeticError(f"a_(ell^2)={a2} but a_ell^2 - 2 ell = {a1 * a1 - 2 * E.ell}")
    return a2


def residue_map(P: PrimeIdeal) -> Callable[[QuadInt], FqElement]:
    """Reduction O_K -> O_K/P as a function on QuadInt."""
    ell = P.ell
    if ell == 2:
        raise UnsupportedPlaceError("reduction at primes above 2 is not supported")
    K = P.K
    half = pow(2, -1, ell)
    if P.kind == "inert":
        s = sqrt_in_fq2(-K.d, ell)
        w = (1 + s) * half if K.half_basis else s
    else:
        w = FqElement(ell, 1, (1 + P.sqrt_image()) * half if K.half_basis else P.sqrt_image())

    def reduce(z: QuadInt) -> FqElement:
        if z.K != K:
            raise ValueError("element from a different field")
        return z.x + z.y * w

    return reduce


def reduce_curve(ainvs: Sequence[QuadInt], P: PrimeIdeal) -> CurveOverFq:
    red = residue_map(P)
    elts = tuple(red(a) for a in ainvs)
    degree = P.residue_degree
    elts = tuple(FqElement(P.ell, degree, e.c0, e.c1) for e in elts)
    return CurveOverFq(P.ell, degree, elts)


def reduce_frey_at(E, P: PrimeIdeal) -> CurveOverFq:
    """Reduction of a Frey curve (anything with ``ainvs``) at P."""
    return reduce_curve(E.ainvs, P)


def trace_at(ainvs: Sequence[QuadInt], P: PrimeIdeal) -> int:
    """a_P = N(P) + 1 - #E(O_K/P)."""
    return count_points(reduce_curve(ainvs, P))


def hasse_bound_ok(a: int, q: int) -> bool:
    return a * a <= 4 * q
