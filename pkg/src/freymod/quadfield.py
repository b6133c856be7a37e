"""Exact arithmetic in imaginary quadratic fields K = Q(sqrt(-d)).

Elements of the ring of integers are stored in the integral basis
{1, w} where w = (1 + sqrt(-d))/2 when d = 3 (mod 4) and w = sqrt(-d)
otherwise, so half-integral coordinates never need a denominator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional

from sympy import factorint, isprime, primerange
from sympy.ntheory import sqrt_mod

from freymod.errors import FieldMismatchError

# Cohen-Lenstra probability that 3 does not divide h for imaginary quadratic fields.
COHEN_LENSTRA_NOT_DIV3 = 0.56013


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factorint(abs(n)).values())


def kronecker(D: int, ell: int) -> int:
    """Kronecker symbol (D/ell) for a rational prime ell."""
    if ell == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = D % ell
    if r == 0:
        return 0
    return 1 if pow(r, (ell - 1) // 2, ell) == 1 else -1


@dataclass(frozen=True)
class QuadField:
    d: int
    disc: int = field(init=False, compare=False)
    half_basis: bool = field(init=False, compare=False)

    def __post_init__(self):
        if self.d < 1 or not is_squarefree(self.d):
            raise ValueError(f"d must be a squarefree positive integer, got {self.d}")
        half = self.d % 4 == 3
        object.__setattr__(self, "half_basis", half)
        object.__setattr__(self, "disc", -self.d if half else -4 * self.d)

    # trace and norm of the basis element w; w^2 = tw * w - nw
    @property
    def tw(self) -> int:
        return 1 if self.half_basis else 0

    @property
    def nw(self) -> int:
        return (1 + self.d) // 4 if self.half_basis else self.d

    def __repr__(self):
        return f"QuadField(-{self.d})"

    def __call__(self, x: int, y: int = 0) -> "QuadInt":
        """Element x + y*w in the integral basis."""
        return QuadInt(x, y, self)

    def element(self, a: int, b: int) -> "QuadInt":
        """The element a + b*sqrt(-d)."""
        if self.half_basis:
            return QuadInt(a - b, 2 * b, self)
        return QuadInt(a, b, self)

    def from_halves(self, u: int, v: int) -> "QuadInt":
        """The element (u + v*sqrt(-d))/2; raises if it is not integral."""
        if self.half_basis:
            if (u - v) % 2:
                raise ValueError("(u + v sqrt(-d))/2 is not integral")
            return QuadInt((u - v) // 2, v, self)
        if u % 2 or v % 2:
            raise ValueError("(u + v sqrt(-d))/2 is not integral")
        return QuadInt(u // 2, v // 2, self)

    @property
    def sqrt_neg_d(self) -> "QuadInt":
        return self.element(0, 1)

    @property
    def zero(self) -> "QuadInt":
        return QuadInt(0, 0, self)

    @property
    def one(self) -> "QuadInt":
        return QuadInt(1, 0, self)

    def primes_above(self, ell: int) -> list["PrimeIdeal"]:
        sp = splitting_type(ell, self)
        if sp.kind == "split":
            roots = sorted(_omega_roots(self, ell))
            return [PrimeIdeal(self, ell, "split", w) for w in roots]
        return [PrimeIdeal(self, ell, sp.kind, None)]


def _omega_roots(K: QuadField, ell: int) -> list[int]:
    return [w for w in range(ell) if (w * w - K.tw * w + K.nw) % ell == 0]


class QuadInt:
    """x + y*w in the ring of integers of ``K``."""

    __slots__ = ("x", "y", "K")

    def __init__(self, x: int, y: int, K: QuadField):
        self.x = int(x)
        self.y = int(y)
        self.K = K

    def _coerce(self, other) -> "QuadInt":
        if isinstance(other, QuadInt):
            if other.K != self.K:
                raise FieldMismatchError(f"{self.K} vs {other.K}")
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.K)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.x + o.x, self.y + o.y, self.K)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(-self.x, -self.y, self.K)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.x - o.x, self.y - o.y, self.K)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t, n = self.K.tw, self.K.nw
        yy = self.y * o.y
        return QuadInt(self.x * o.x - n * yy, self.x * o.y + self.y * o.x + t * yy, self.K)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not integral")
        result, base = self.K.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.y == 0 and self.x == other
        if isinstance(other, QuadInt):
            return self.K == other.K and self.x == other.x and self.y == other.y
        return NotImplemented

    def __hash__(self):
        return hash((self.x, self.y, self.K.d))

    def __bool__(self):
        return bool(self.x or self.y)

    def __repr__(self):
        u, v = self.halves()
        if u % 2 == 0 and v % 2 == 0:
            return f"({u // 2} + {v // 2}*sqrt(-{self.K.d}))"
        return f"({u} + {v}*sqrt(-{self.K.d}))/2"

    def conj(self) -> "QuadInt":
        return QuadInt(self.x + self.K.tw * self.y, -self.y, self.K)

    def norm(self) -> int:
        return self.x * self.x + self.K.tw * self.x * self.y + self.K.nw * self.y * self.y

    def trace(self) -> int:
        return 2 * self.x + self.K.tw * self.y

    def halves(self) -> tuple[int, int]:
        """(u, v) with self = (u + v*sqrt(-d))/2."""
        if self.K.half_basis:
            return 2 * self.x + self.y, self.y
        return 2 * self.x, 2 * self.y

    def is_rational(self) -> bool:
        return self.y == 0

    def content(self) -> int:
        return math.gcd(self.x, self.y)

    def divexact(self, n: int) -> "QuadInt":
        if self.x % n or self.y % n:
            raise ArithmeticError(f"{self!r} is not divisible by {n}")
        return QuadInt(self.x // n, self.y // n, self.K)

    def divides(self, other: "QuadInt") -> bool:
        if not self:
            return not other
        num = other * self.conj()
        n = self.norm()
        return num.x % n == 0 and num.y % n == 0


class QuadFrac:
    """Element of K written as numerator / positive integer denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: QuadInt, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num.x, num.y, den)
        if g > 1:
            num, den = num.divexact(g), den // g
        self.num = num
        self.den = den

    @property
    def K(self) -> QuadField:
        return self.num.K

    def _coerce(self, other) -> "QuadFrac":
        if isinstance(other, QuadFrac):
            if other.K != self.K:
                raise FieldMismatchError(f"{self.K} vs {other.K}")
            return other
        if isinstance(other, QuadInt):
            return QuadFrac(other)
        if isinstance(other, int):
            return QuadFrac(QuadInt(other, 0, self.K))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return QuadFrac(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return QuadFrac(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadFrac(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "QuadFrac":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        # 1/(a/n) = n*conj(a)/N(a)
        return QuadFrac(self.num.conj() * self.den, self.num.norm())

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return QuadFrac(self.num ** e, self.den ** e)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return f"{self.num!r}/{self.den}" if self.den != 1 else repr(self.num)


@dataclass(frozen=True)
class PrimeSplitting:
    ell: int
    kind: str  # "split", "inert" or "ramified"
    ideal_data: Optional[int]
    residue_norm: int


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime of K above ``ell``.

    For split primes ``omega_root`` is the image of w in F_ell, i.e. the
    ideal is (ell, w - omega_root).
    """

    K: QuadField
    ell: int
    kind: str
    omega_root: Optional[int] = None

    @property
    def norm(self) -> int:
        return self.ell * self.ell if self.kind == "inert" else self.ell

    @property
    def residue_degree(self) -> int:
        return 2 if self.kind == "inert" else 1

    def sqrt_image(self) -> Optional[int]:
        """Image of sqrt(-d) in F_ell for split or ramified primes."""
        if self.kind == "ramified":
            return 0
        if self.kind != "split":
            return None
        w = self.omega_root
        return (2 * w - 1) % self.ell if self.K.half_basis else w % self.ell

    def valuation(self, z: QuadInt) -> float:
        if z.K != self.K:
            raise FieldMismatchError(f"{self.K} vs {z.K}")
        if not z:
            return math.inf
        vn = _vp(z.norm(), self.ell)
        if self.kind == "inert":
            return vn // 2
        if self.kind == "ramified":
            return vn
        # split: z in P^k iff z maps to 0 in Z/ell^k under w -> lifted root
        for k in range(1, vn + 1):
            mod = self.ell ** k
            w = _hensel_omega(self.K, self.ell, self.omega_root, k)
            if (z.x + z.y * w) % mod:
                return k - 1
        return vn

    def contains(self, z: QuadInt) -> bool:
        return self.valuation(z) >= 1

    def __repr__(self):
        if self.kind == "split":
            return f"PrimeIdeal({self.ell}, w-{self.omega_root}; {self.K!r})"
        return f"PrimeIdeal({self.ell} {self.kind}; {self.K!r})"


def _vp(n: int, p: int) -> int:
    n = abs(n)
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@lru_cache(maxsize=4096)
def _hensel_omega(K: QuadField, ell: int, w0: int, k: int) -> int:
    mod = ell ** k
    w = w0 % mod
    for _ in range(k):
        f = w * w - K.tw * w + K.nw
        fp = 2 * w - K.tw
        w = (w - f * pow(fp, -1, mod)) % mod
    return w


def splitting_type(ell: int, K: QuadField) -> PrimeSplitting:
    if not isprime(ell):
        raise ValueError(f"{ell} is not prime")
    k = kronecker(K.disc, ell)
    if k == 0:
        return PrimeSplitting(ell, "ramified", 0 if ell != 2 else (K.d % 2), ell)
    if k == -1:
        return PrimeSplitting(ell, "inert", None, ell * ell)
    r = min(sqrt_mod(-K.d % ell, ell, all_roots=True))
    return PrimeSplitting(ell, "split", r, ell)


# -- class numbers ---------------------------------------------------------


def reduced_forms(D: int) -> Iterator[tuple[int, int, int]]:
    """Reduced primitive positive definite forms (a, b, c) of discriminant D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"bad discriminant {D}")
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(a, b, c) != 1:
                continue
            yield a, b, c
        a += 1


def class_number_forms(D: int) -> int:
    return sum(1 for _ in reduced_forms(D))


def class_number(K: QuadField) -> int:
    return class_number_forms(K.disc)


def minkowski_bound(D: int) -> int:
    return int(2 * math.sqrt(abs(D)) / math.pi) + 1


def class_number_ideals(K: QuadField, norm_cap: Optional[int] = None) -> int:
    """Class number from prime ideals below the Minkowski bound.

    Generators are one prime above each split or ramified p <= bound;
    relations come from factoring principal ideals (alpha) of primitive
    alpha with N(alpha) <= norm_cap over that factor base.
    """
    D = K.disc
    bound = minkowski_bound(D)
    base = []
    for p in primerange(2, bound + 1):
        k = kronecker(D, p)
        if k == -1:
            continue
        base.append((p, k, _omega_roots(K, p)[0]))
    n = len(base)
    if n == 0:
        return 1
    lattice = _Lattice(n)
    for i, (p, k, _) in enumerate(base):
        if k == 0:
            vec = [0] * n
            vec[i] = 2
            lattice.insert(vec)
    cap = norm_cap if norm_cap is not None else 8 * abs(D) + 64
    t, nw = K.tw, K.nw
    ymax = math.isqrt(4 * cap // max(1, abs(D))) + 1
    index = {p: i for i, (p, _, _) in enumerate(base)}
    for y in range(1, ymax + 1):
        xs = math.isqrt(cap) + y + 1
        for x in range(-xs, xs + 1):
            if math.gcd(x, y) != 1:
                continue
            N = x * x + t * x * y + nw * y * y
            if N > cap or N <= 1:
                continue
            vec = [0] * n
            m = N
            for p, k, w in base:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                if e:
                    sign = 1 if k == 0 or (x + y * w) % p == 0 else -1
                    vec[index[p]] = sign * e
            if m == 1:
                lattice.insert(vec)
    det = lattice.determinant()
    if det is None:
        raise ArithmeticError(f"relation search for {K!r} did not reach full rank (cap {cap})")
    return det


class _Lattice:
    """Integer row lattice kept in upper-triangular (Hermite-like) form."""

    def __init__(self, n: int):
        self.n = n
        self.rows: list[Optional[list[int]]] = [None] * n

    def insert(self, v: list[int]) -> None:
        v = list(v)
        for i in range(self.n):
            if v[i] == 0:
                continue
            row = self.rows[i]
            if row is None:
                if v[i] < 0:
                    v = [-c for c in v]
                self.rows[i] = v
                return
            if v[i] % row[i] == 0:
                q = v[i] // row[i]
                v = [a - q * b for a, b in zip(v, row)]
                continue
            g, s, u = _xgcd(row[i], v[i])
            a, b = row[i] // g, v[i] // g
            new = [s * r + u * c for r, c in zip(row, v)]
            v = [a * c - b * r for r, c in zip(row, v)]
            self.rows[i] = new
            # keep entries small by reducing against later pivots
            self._reduce(i)

    def _reduce(self, i: int) -> None:
        row = self.rows[i]
        for j in range(i + 1, self.n):
            pj = self.rows[j]
            if pj is not None and row[j]:
                q = row[j] // pj[j]
                if q:
                    row = [a - q * b for a, b in zip(row, pj)]
        self.rows[i] = row

    def determinant(self) -> Optional[int]:
        if any(r is None for r in self.rows):
            return None
        return abs(math.prod(r[i] for i, r in enumerate(self.rows)))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def cohen_lenstra_constant(terms: int = 60) -> float:
    """prod_{k>=1} (1 - 3^-k)."""
    return math.prod(1 - Fraction(1, 3**k) for k in range(1, terms + 1)).__float__()


def cohen_lenstra_proportion(limit: int) -> tuple[int, int, float]:
    """Among primes d = 3 (mod 8), d <= limit: (count, count with 3 not dividing h, proportion)."""
    total = good = 0
    for d in primerange(3, limit + 1):
        if d % 8 != 3:
            continue
        total += 1
        if class_number_forms(-d) % 3:
            good += 1
    return total, good, (good / total if total else float("nan"))


# -- hypothesis gates ------------------------------------------------------


@dataclass(frozen=True)
class HypothesisReport:
    d: int
    family: str
    d_prime: bool
    congruence_ok: bool
    class_number: Optional[int]
    class_number_ok: bool
    two_inert: bool
    three_inert: Optional[bool]

    @property
    def passed(self) -> bool:
        gates = [self.d_prime, self.congruence_ok, self.class_number_ok, self.two_inert]
        if self.three_inert is not None:
            gates.append(self.three_inert)
        return all(gates)

    def failures(self) -> list[str]:
        out = []
        if not self.d_prime:
            out.append("d is not prime")
        if not self.congruence_ok:
            mod = "3 mod 8" if self.family == "quartic" else "19 mod 24"
            out.append(f"d is not congruent to {mod}")
        if not self.class_number_ok:
            out.append(f"class number {self.class_number} fails the divisibility gate")
        if not self.two_inert:
            out.append("2 is not inert")
        if self.three_inert is False:
            out.append("3 is not inert")
        return out

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "family": self.family,
            "d_prime": self.d_prime,
            "congruence_ok": self.congruence_ok,
            "class_number": self.class_number,
            "class_number_ok": self.class_number_ok,
            "two_inert": self.two_inert,
            "three_inert": self.three_inert,
            "passed": self.passed,
        }


def check_hypotheses(d: int, family: str) -> HypothesisReport:
    """Gates for the x^4+dy^2=z^p (quartic) and x^2+dy^6=z^p (sextic) theorems."""
    if family not in ("quartic", "sextic"):
        raise ValueError(f"unknown family {family!r}")
    if d < 1:
        raise ValueError("d must be positive")
    squarefree = is_squarefree(d)
    h = class_number(QuadField(d)) if squarefree else None
    disc = -d if d % 4 == 3 else -4 * d
    if family == "quartic":
        congruence = d % 8 == 3
        h_ok = h is not None and h % 3 != 0
        three = None
    else:
        congruence = d % 24 == 19
        h_ok = h is not None and math.gcd(h, 6) == 1
        three = squarefree and kronecker(disc, 3) == -1
    return HypothesisReport(
        d=d,
        family=family,
        d_prime=bool(isprime(d)),
        congruence_ok=congruence,
        class_number=h,
        class_number_ok=h_ok,
        two_inert=squarefree and kronecker(disc, 2) == -1,
        three_inert=three,
    )
