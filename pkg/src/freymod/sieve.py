"""Exhaustive searches over discriminant equations.

* 2-torsion: curves y^2 = x^3 + a x^2 + b x over K with b^2(a^2 - 4b) = +-2^(r-4).
* 3-torsion: curves y^2 + a1 xy + a3 y = x^3 with a1 = alpha sqrt(-d),
  a3 = beta sqrt(-d) and beta^3 (d alpha^3 + 27 beta) = +-2^r 3^q.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Optional, Sequence

from sympy import factorint, isprime

from freymod.errors import ExtraUnitsError, GateError, UnsupportedPlaceError
from freymod.frey import curve_from_ainvs, reduction_type
from freymod.quadfield import QuadField, QuadInt, class_number

# Conductor exponent bounds at the inert primes 2 and 3 (Ogg's formula).
R_MAX = 16
Q_MAX = 13


def solve_mod8(max_exponent: int = 7) -> list[tuple[int, int, int]]:
    """All (s1, s2, m) with s1 + s2 * 2^m = 5 (mod 8), s1, s2 in {+1, -1}."""
    return sorted(
        (s1, s2, m)
        for s1 in (1, -1)
        for s2 in (1, -1)
        for m in range(max_exponent + 1)
        if (s1 + s2 * 2**m) % 8 == 5
    )


def mod8_patterns(solutions: Optional[Iterable[tuple[int, int, int]]] = None) -> dict:
    """Group solve_mod8 output by (s1, m): {(s1, m): sorted signs s2}."""
    groups: dict = {}
    for s1, s2, m in solutions if solutions is not None else solve_mod8():
        groups.setdefault((s1, m), set()).add(s2)
    return {k: tuple(sorted(v, reverse=True)) for k, v in sorted(groups.items())}


def format_pattern(s1: int, m: int, signs: Sequence[int]) -> str:
    head = "1" if s1 == 1 else "-1"
    op = "±" if len(signs) == 2 else ("+" if signs[0] == 1 else "-")
    return f"{head} {op} 2^{m}"


# -- 2-torsion -------------------------------------------------------------


@dataclass(frozen=True)
class TwoTorsionCandidate:
    d: int
    a_halves: tuple[int, int]  # a = (u + v sqrt(-d))/2
    b: int
    t: int
    r: int
    rational: bool

    def a(self) -> QuadInt:
        return QuadField(self.d).from_halves(*self.a_halves)

    def check(self) -> bool:
        a = self.a()
        lhs = self.b * self.b * (a * a - 4 * self.b)
        return abs(self.b) == 2**self.t and lhs.is_rational() and abs(lhs.x) == 2 ** (self.r - 4)

    def as_record(self) -> dict:
        return {"family": "2-torsion", **asdict(self), "a_halves": list(self.a_halves)}


def _gate_2torsion(d: int) -> None:
    if d == 3:
        raise ExtraUnitsError("d = 3: Q(sqrt(-3)) has extra units; the classification fails there")
    if d <= 3:
        raise GateError("d must exceed 3")
    if d % 8 != 3:
        raise GateError(f"d = {d} is not 3 mod 8 (2 must be inert)")
    if not isprime(d):
        raise GateError(f"d = {d} is not prime")
    h = class_number(QuadField(d))
    if math.gcd(h, 6) != 1:
        raise GateError(f"class number {h} is not prime to 6")


def non_base_change_2torsion_analytic(d: int) -> list[tuple[int, int]]:
    """Case a = a2 sqrt(-d), a2 = 2^s * odd: -d * odd^2 = s1 + s2 2^m with
    (s1, s2, m) from solve_mod8.  Returns the (odd part, m) solutions."""
    out = []
    for s1, s2, m in solve_mod8():
        value = s1 + s2 * 2**m
        if value >= 0 or (-value) % d:
            continue
        sq = -value // d
        root = math.isqrt(sq)
        if root * root == sq and root % 2 == 1:
            out.append((root, m))
    return out


def scan_2torsion(d: int, t_max: int = 10, r_max: int = 40) -> tuple[list, list]:
    """Bounded brute force over b = +-2^t, a^2 = +-2^(r-4-2t) + 4b.

    Returns (base_change, non_base_change) candidate lists.
    """
    K = QuadField(d)
    rational, other = [], []
    for t in range(t_max + 1):
        for b in (2**t, -(2**t)):
            for r in range(2 * t + 4, r_max + 1):
                for s in (1, -1):
                    N = s * 2 ** (r - 4 - 2 * t) + 4 * b
                    if N >= 0:
                        root = math.isqrt(N)
                        if root * root == N:
                            for a in sorted({root, -root}):
                                rational.append(TwoTorsionCandidate(d, (2 * a, 0), b, t, r, True))
                    elif (-N) % d == 0:
                        sq = -N // d
                        root = math.isqrt(sq)
                        if root * root == sq:
                            for a2 in sorted({root, -root}):
                                cand = TwoTorsionCandidate(d, (0, 2 * a2), b, t, r, False)
                                K.from_halves(*cand.a_halves)
                                other.append(cand)
    return rational, other


def sieve_2torsion(d: int, cross_check: bool = True, t_max: int = 10, r_max: int = 40) -> list[TwoTorsionCandidate]:
    """Non-base-change 2-torsion candidates with discriminant supported at 2."""
    _gate_2torsion(d)
    analytic = non_base_change_2torsion_analytic(d)
    if analytic:
        raise ArithmeticError(f"mod-8 analysis produced solutions for d = {d}: {analytic}")
    if cross_check:
        _, brute = scan_2torsion(d, t_max, r_max)
        if brute:
            raise ArithmeticError(f"brute-force scan disagrees with the mod-8 analysis for d = {d}: {brute}")
    return []


# -- 3-torsion -------------------------------------------------------------


def is_prime_times_cube(m: int) -> Optional[tuple[int, int]]:
    """(d, alpha) with m = d * alpha^3, d a positive prime, if possible."""
    if m == 0:
        raise ValueError("m must be nonzero")
    fac = factorint(abs(m))
    primes = [p for p, e in fac.items() if e % 3 == 1]
    if len(primes) != 1 or any(e % 3 == 2 for e in fac.values()):
        return None
    d = primes[0]
    alpha = 1
    for p, e in fac.items():
        alpha *= p ** ((e - 1) // 3 if p == d else e // 3)
    if m < 0:
        alpha = -alpha
    return d, alpha


@dataclass(frozen=True)
class ThreeTorsionCandidate:
    alpha: int
    beta: int
    d: int
    r: int
    q: int
    sign: int
    s: int = 2
    additive_at_2: bool = True
    additive_at_3: bool = True
    extra_paper: bool = False

    def check(self) -> bool:
        return self.beta**3 * (self.d * self.alpha**3 + 27 * self.beta) == self.sign * 2**self.r * 3**self.q

    def ainvs(self) -> tuple[QuadInt, ...]:
        K = QuadField(self.d)
        return (K.element(0, self.alpha), K.zero, K.element(0, self.beta), K.zero, K.zero)

    def as_record(self) -> dict:
        return {"family": "3-torsion", **asdict(self)}


def _betas(r: int, q: int):
    for u in range(r // 3 + 1):
        for v in range(q // 3 + 1):
            base = 2**u * 3**v
            yield base
            yield -base


def _cell(args) -> list[tuple]:
    sign, r, q, fixed_d = args
    rhs = sign * 2**r * 3**q
    hits = []
    for beta in _betas(r, q):
        b3 = beta**3
        if rhs % b3:
            continue
        m = rhs // b3 - 27 * beta
        if m == 0:
            continue
        found = is_prime_times_cube(m)
        if found is None:
            continue
        d, alpha = found
        if fixed_d is not None and d != fixed_d:
            continue
        hits.append((alpha, beta, d, r, q, sign))
    return hits


def _additive_at(ainvs, K: QuadField, ell: int) -> Optional[bool]:
    try:
        P = K.primes_above(ell)
        if len(P) != 1 or P[0].kind != "inert":
            return None
        return reduction_type(curve_from_ainvs(K, ainvs), P[0]).kind == "additive"
    except UnsupportedPlaceError:
        return None


def sieve_3torsion(
    fixed_d: Optional[int] = None,
    r_max: int = R_MAX,
    q_max: int = Q_MAX,
    workers: int = 1,
) -> list[ThreeTorsionCandidate]:
    """Search beta^3 (d alpha^3 + 27 beta) = +-2^r 3^q.

    With ``fixed_d=None`` any prime d is allowed; otherwise d must equal
    ``fixed_d``.  Kept candidates have 2 and 3 inert in Q(sqrt(-d)) and
    additive reduction at both.
    """
    if fixed_d is not None and (not isprime(fixed_d) or fixed_d % 24 != 19):
        raise GateError(f"d = {fixed_d} must be a prime congruent to 19 mod 24")
    cells = [(sign, r, q, fixed_d) for sign in (1, -1) for r in range(r_max + 1) for q in range(q_max + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_cell, cells, chunksize=16))
    else:
        results = [_cell(c) for c in cells]
    raw = sorted({hit for hits in results for hit in hits})
    out = []
    for alpha, beta, d, r, q, sign in raw:
        if d % 24 != 19:
            # 2 or 3 not inert; the model cannot come from the sextic Frey curve setting
            continue
        K = QuadField(d)
        ainvs = (K.element(0, alpha), K.zero, K.element(0, beta), K.zero, K.zero)
        add2 = _additive_at(ainvs, K, 2)
        add3 = _additive_at(ainvs, K, 3)
        if not (add2 and add3):
            continue
        out.append(
            ThreeTorsionCandidate(
                alpha, beta, d, r, q, sign,
                additive_at_2=True,
                additive_at_3=True,
                extra_paper=r > R_MAX or q > Q_MAX,
            )
        )
    return sorted(out, key=lambda c: (c.d, c.alpha, c.beta, c.r, c.q, c.sign))


def pair_by_negation(cands: Sequence[ThreeTorsionCandidate]) -> list[tuple]:
    """Pair (alpha, beta) with (-alpha, -beta); raises if something is unpaired."""
    keys = {(c.d, c.alpha, c.beta) for c in cands}
    pairs = []
    for d, a, b in sorted(keys):
        if (d, -a, -b) not in keys:
            raise ArithmeticError(f"candidate {(d, a, b)} has no negated partner")
        if (a, b) > (-a, -b):
            pairs.append(((d, -a, -b), (d, a, b)))
    return pairs


def write_candidates(cands: Iterable, path) -> None:
    """One JSON object per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for c in cands:
            fh.write(json.dumps(c.as_record(), sort_keys=True) + "\n")


def read_candidates(path) -> list:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            family = rec.pop("family")
            if family == "3-torsion":
                out.append(ThreeTorsionCandidate(**rec))
            elif family == "2-torsion":
                rec["a_halves"] = tuple(rec["a_halves"])
                out.append(TwoTorsionCandidate(**rec))
            else:
                raise ValueError(f"unknown candidate family {family!r}")
    return out
