"""Frey curves attached to putative solutions of x^4 + d y^2 = z^p
(``quartic``) and x^2 + d y^6 = z^p (``sextic``) over K = Q(sqrt(-d)).

quartic:  y^2 = x^3 + 4a x^2 + 2(a^2 + b sqrt(-d)) x
sextic:   y^2 + 6b sqrt(-d) xy - 4d(a + b^3 sqrt(-d)) y = x^3
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from sympy import integer_nthroot, isprime

from freymod import weierstrass
from freymod.errors import GateError, TrivialSolutionError, UnsupportedPlaceError
from freymod.quadfield import PrimeIdeal, QuadField, QuadFrac, QuadInt

FAMILIES = ("quartic", "sextic")


def frey_ainvs(family: str, a: int, b: int, K: QuadField) -> tuple[QuadInt, ...]:
    """a-invariants of the Frey curve for (a, b); no validation of (a, b)."""
    zero = K.zero
    if family == "quartic":
        return (zero, K(4 * a), zero, 2 * K.element(a * a, b), zero)
    if family == "sextic":
        a1 = K.element(0, 6 * b)
        a3 = -4 * K.d * K.element(a, b**3)
        return (a1, zero, a3, zero, zero)
    raise ValueError(f"unknown family {family!r}")


def c_power_of(family: str, a: int, b: int, d: int) -> int:
    if family == "quartic":
        return a**4 + d * b**2
    return a**2 + d * b**6


@dataclass(frozen=True)
class CurveOverK:
    K: QuadField
    ainvs: tuple

    @property
    def invariants(self) -> weierstrass.Invariants:
        return weierstrass.invariants(self.ainvs)

    @property
    def delta(self) -> QuadInt:
        return self.invariants.disc

    @property
    def c4(self) -> QuadInt:
        return self.invariants.c4


@dataclass(frozen=True)
class FreyCurve:
    family: str
    d: int
    a: int
    b: int
    c_power: int
    K: QuadField = field(repr=False)
    ainvs: tuple = field(repr=False)
    delta: QuadInt = field(repr=False)
    c4: QuadInt = field(repr=False)
    c6: QuadInt = field(repr=False)
    j_num: QuadInt = field(repr=False)
    j_den: QuadInt = field(repr=False)

    @property
    def a1(self):
        return self.ainvs[0]

    @property
    def a2(self):
        return self.ainvs[1]

    @property
    def a3(self):
        return self.ainvs[2]

    @property
    def a4(self):
        return self.ainvs[3]

    @property
    def a6(self):
        return self.ainvs[4]

    def j_invariant(self) -> QuadFrac:
        return QuadFrac(self.j_num) / QuadFrac(self.j_den)

    def torsion_point(self) -> tuple[QuadFrac, QuadFrac]:
        """The rational torsion point (0, 0): order 2 (quartic) or 3 (sextic)."""
        z = QuadFrac(self.K.zero)
        return (z, z)

    def torsion_order(self) -> Optional[int]:
        """Order of (0,0) computed with the exact group law, if it is at most 12."""
        ainvs = tuple(QuadFrac(a) for a in self.ainvs)
        P = self.torsion_point()
        if not weierstrass.on_curve(ainvs, P):
            raise ArithmeticError("(0,0) is not on the curve")
        Q = P
        for n in range(2, 13):
            Q = weierstrass.add(ainvs, Q, P)
            if Q is None:
                return n
        return None


def build_frey(family: str, a: int, b: int, d: int, p: int) -> FreyCurve:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if a * b == 0:
        raise TrivialSolutionError("trivial solution: abc = 0")
    if math.gcd(a, b) != 1:
        raise GateError(f"gcd(a, b) = {math.gcd(a, b)} != 1")
    if p < 3 or not isprime(p):
        raise GateError(f"p = {p} is not an odd prime")
    try:
        K = QuadField(d)
    except ValueError as exc:
        raise GateError(str(exc)) from None
    c_power = c_power_of(family, a, b, d)
    ainvs = frey_ainvs(family, a, b, K)
    inv = weierstrass.invariants(ainvs)
    if family == "quartic":
        t = K.element(a * a, b)
        if inv.disc != 512 * t * c_power:
            raise ArithmeticError("discriminant disagrees with 512(a^2+b sqrt(-d)) c^p")
        if inv.c4 != 32 * K.element(5 * a * a, -3 * b):
            raise ArithmeticError("c4 disagrees with 32(5a^2 - 3b sqrt(-d))")
        j_num = 64 * K.element(5 * a * a, -3 * b) ** 3
        j_den = t * c_power
    else:
        a1, a3 = ainvs[0], ainvs[2]
        if inv.disc != a3**3 * (a1**3 - 27 * a3):
            raise ArithmeticError("discriminant disagrees with a3^3(a1^3 - 27 a3)")
        j_num = inv.c4**3
        j_den = inv.disc
    if inv.c4**3 * j_den != j_num * inv.disc:
        raise ArithmeticError("c4^3 != j * Delta")
    return FreyCurve(family, d, a, b, c_power, K, ainvs, inv.disc, inv.c4, inv.c6, j_num, j_den)


@dataclass(frozen=True)
class CMVerdict:
    kind: str  # "no_cm" or "cm_candidate"
    details: dict = field(default_factory=dict)

    @property
    def is_candidate(self) -> bool:
        return self.kind == "cm_candidate"


def cm_check(a: int, b: int, d: int, p: int) -> CMVerdict:
    """Real-j test for the quartic Frey curve: j is real iff 175 a^4 = 81 d b^2."""
    if a * b == 0:
        raise TrivialSolutionError("trivial solution: abc = 0")
    if math.gcd(a, b) != 1:
        raise GateError(f"gcd(a, b) = {math.gcd(a, b)} != 1")
    if 175 * a**4 != 81 * d * b**2:
        return CMVerdict("no_cm")
    c_power = a**4 + d * b**2
    root, exact = integer_nthroot(c_power, p)
    roots = []
    if exact:
        roots = sorted({root, -root}) if p % 2 == 0 else [root]
    return CMVerdict(
        "cm_candidate",
        {
            "d": d,
            "a": a,
            "b": b,
            "c_power": c_power,
            "p": p,
            "c": roots,
            "c_power_is_pth_power": bool(exact),
        },
    )


@dataclass(frozen=True)
class ReductionInfo:
    kind: str  # "good", "multiplicative" or "additive"
    v_delta: float
    v_c4: float
    shifts: int = 0


def reduction_type(E, P: PrimeIdeal) -> ReductionInfo:
    """Valuation-based reduction type of a curve over K at the prime P.

    The model is made P-minimal by removing u^12 from Delta (and u^4, u^6
    from c4, c6) while all stay integral.  Residue characteristic 2 or 3
    is accepted only for inert primes.
    """
    if P.ell == 2 and P.kind != "inert":
        raise UnsupportedPlaceError("unsupported place: residue characteristic 2 and not inert")
    if P.ell == 3 and P.kind == "ramified":
        raise UnsupportedPlaceError("unsupported place: 3 ramifies")
    inv = weierstrass.invariants(E.ainvs)
    vd = P.valuation(inv.disc)
    vc4 = P.valuation(inv.c4)
    vc6 = P.valuation(inv.c6)
    if vd == math.inf:
        raise ArithmeticError("singular curve over K")
    shifts = 0
    while vd >= 12 and vc4 >= 4 and vc6 >= 6:
        vd, vc4, vc6 = vd - 12, vc4 - 4, vc6 - 6
        shifts += 1
    if vd == 0:
        kind = "good"
    elif vc4 == 0:
        kind = "multiplicative"
    else:
        kind = "additive"
    return ReductionInfo(kind, vd, vc4, shifts)


def curve_from_ainvs(K: QuadField, ainvs: Sequence) -> CurveOverK:
    return CurveOverK(K, tuple(a if isinstance(a, QuadInt) else K(a) for a in ainvs))
