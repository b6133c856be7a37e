"""Mazur-style elimination of newforms for x^4 + d y^2 = z^p.

For an auxiliary prime ell (odd, not dividing d) every putative solution
reduces to a triple in

    S_ell = {(a, b, c) in F_ell^3 minus 0 : a^4 + d b^2 = c^p}

and for each triple a related newform g forces p to divide a quantity
B(ell, g; a, b, c).  Raising to the p-th power is treated as a bijection
of F_ell, so c is represented by the value a^4 + d b^2 itself.

The character value kappa(l) is unknown; each bound multiplies over all
its admissible values (zeta^2 = eps(ell) for split ell, zeta = +-eps(ell)
for inert ell), so p still divides the result for the true kappa.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from sympy import factorint, isprime, primerange

from freymod.ecfinite import count_points, reduce_curve
from freymod.errors import BadReductionError, DataIntegrityError, GateError
from freymod.frey import frey_ainvs
from freymod.ingest import NewformRecord
from freymod.numfield import NumberFieldElement
from freymod.quadfield import PrimeIdeal, QuadField, splitting_type

SMALL_PRIME_CUTOFF = 13
NOT_ELIMINABLE = "not eliminable by this ell-set"


@dataclass(frozen=True, order=True)
class SolutionTriple:
    a_bar: int
    b_bar: int
    c_bar: int  # value of a^4 + d b^2 in F_ell
    divides_c: bool


def _check_ell(ell: int, d: int) -> None:
    if ell == 2 or not isprime(ell):
        raise GateError(f"ell = {ell} must be an odd prime")
    if (2 * d) % ell == 0:
        raise GateError(f"ell = {ell} divides 2d = {2 * d}")


def enumerate_S_ell(ell: int, d: int) -> list[SolutionTriple]:
    _check_ell(ell, d)
    out = []
    for a in range(ell):
        a4 = pow(a, 4, ell)
        for b in range(ell):
            if a == 0 and b == 0:
                continue
            c = (a4 + d * b * b) % ell
            out.append(SolutionTriple(a, b, c, c == 0))
    return out


@lru_cache(maxsize=None)
def _auxiliary_prime(ell: int, d: int) -> PrimeIdeal:
    # for split ell either prime above ell works; take the first for determinism
    return QuadField(d).primes_above(ell)[0]


@lru_cache(maxsize=1 << 16)
def frey_trace_mod(ell: int, d: int, a_bar: int, b_bar: int) -> int:
    """a_l of the quartic Frey curve at the fixed prime l above ell, for residues (a, b)."""
    P = _auxiliary_prime(ell, d)
    E = reduce_curve(frey_ainvs("quartic", a_bar, b_bar, P.K), P)
    try:
        return count_points(E)
    except BadReductionError:
        raise AssertionError(f"singular reduction at ({a_bar}, {b_bar}) mod {ell} although ell does not divide c") from None


def _bound_value(ell: int, d: int, triple: SolutionTriple, g: NewformRecord) -> NumberFieldElement:
    A = g.ap(ell)
    eps = g.eps(ell)
    if triple.divides_c:
        return eps.inverse() * (ell + 1) ** 2 - A * A
    aE = frey_trace_mod(ell, d, triple.a_bar, triple.b_bar)
    kind = _auxiliary_prime(ell, d).kind
    if kind == "split":
        # prod over zeta^2 = eps of (aE zeta - A)
        return A * A - eps * (aE * aE)
    if kind == "inert":
        two_l_eps = eps * (2 * ell)
        A2 = A * A
        return (A2 - eps * aE - two_l_eps) * (A2 + eps * aE - two_l_eps)
    raise GateError(f"ell = {ell} ramifies")


def _abs_int_norm(value: NumberFieldElement, label: str) -> int:
    n = value.norm()
    if n.denominator != 1:
        raise DataIntegrityError(f"record {label!r}: non-integral norm {n}")
    return abs(int(n))


def mazur_factor(ell: int, d: int, triple: SolutionTriple, g: NewformRecord) -> int:
    _check_ell(ell, d)
    return _abs_int_norm(_bound_value(ell, d, triple, g), g.label)


def lowering_level_bound(q: int, g: NewformRecord) -> int:
    """|N(eps^-1(q) (q+1)^2 - a_q(g)^2)|; p divides it when q is a level-lowering prime."""
    if g.level % q == 0:
        raise GateError(f"q = {q} divides the level {g.level}")
    A = g.ap(q)
    value = g.eps(q).inverse() * (q + 1) ** 2 - A * A
    n = _abs_int_norm(value, g.label)
    if n == 0:
        raise DataIntegrityError(f"record {g.label!r}: zero level-lowering bound at q = {q} (Ramanujan bound violated)")
    return n


def ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def agreement_threshold(norm_q: int) -> int:
    """ceil(max(N + 1 + 2 sqrt N, 4N))."""
    return max(norm_q + 1 + ceil_sqrt(4 * norm_q), 4 * norm_q)


@dataclass(frozen=True)
class TraceAgreement:
    status: str  # "agree", "disagree" or "threshold"
    pmin: int
    a1: Optional[int] = None
    a2: Optional[int] = None


def trace_agreement(E1, E2, q_ideal: PrimeIdeal, p: int) -> TraceAgreement:
    """Compare a_q(E1) and a_q(E2) for curves over K at a prime of good reduction for E1.

    For p above the threshold a mod-p congruence forces equal traces (and good
    reduction of E2); below it only the threshold is reported.
    """
    red1 = reduce_curve(E1.ainvs, q_ideal)
    if red1.is_singular:
        raise BadReductionError(f"E1 has bad reduction at {q_ideal}")
    pmin = agreement_threshold(q_ideal.norm)
    if p <= pmin:
        return TraceAgreement("threshold", pmin)
    a1 = count_points(red1)
    red2 = reduce_curve(E2.ainvs, q_ideal)
    if red2.is_singular:
        return TraceAgreement("disagree", pmin, a1, None)
    a2 = count_points(red2)
    return TraceAgreement("agree" if a1 == a2 else "disagree", pmin, a1, a2)


def sturm_agreement_bound(level: int) -> int:
    """ceil(index(Gamma_0(level)) / 6), the weight-2 coefficient count."""
    if level < 1:
        raise ValueError("level must be positive")
    index = level
    for p in factorint(level):
        index = index // p * (p + 1)
    return -(-index // 6)


# -- certificates ------------------------------------------------------------


@dataclass(frozen=True)
class EllProduct:
    ell: int
    product: int
    factorization: tuple  # ((p, e), ...) of the product; empty if product is 0


@dataclass(frozen=True)
class FormCertificate:
    label: str
    per_ell: tuple
    gcd: int
    surviving_primes: tuple
    caveat_primes: tuple
    small_primes: tuple
    verdict: str

    def exceptional_primes(self) -> Optional[tuple]:
        if self.gcd == 0:
            return None
        return tuple(sorted(set(self.surviving_primes) | set(self.caveat_primes) | set(self.small_primes)))

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "per_ell": [
                {"ell": e.ell, "product": str(e.product), "factorization": [[str(p), k] for p, k in e.factorization]}
                for e in self.per_ell
            ],
            "gcd": str(self.gcd),
            "surviving_primes": [str(p) for p in self.surviving_primes],
            "caveat_primes": list(self.caveat_primes),
            "small_primes": list(self.small_primes),
            "verdict": self.verdict,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "FormCertificate":
        return cls(
            label=raw["label"],
            per_ell=tuple(
                EllProduct(int(e["ell"]), int(e["product"]), tuple((int(p), int(k)) for p, k in e["factorization"]))
                for e in raw["per_ell"]
            ),
            gcd=int(raw["gcd"]),
            surviving_primes=tuple(int(p) for p in raw["surviving_primes"]),
            caveat_primes=tuple(int(p) for p in raw["caveat_primes"]),
            small_primes=tuple(int(p) for p in raw["small_primes"]),
            verdict=raw["verdict"],
        )


@dataclass(frozen=True)
class EliminationCertificate:
    d: int
    ell_set: tuple
    irreducibility_threshold: int
    forms: tuple
    conclusion: str
    input_digest: str = ""
    twists: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {
            "d": self.d,
            "ell_set": list(self.ell_set),
            "irreducibility_threshold": self.irreducibility_threshold,
            "forms": [f.to_dict() for f in self.forms],
            "conclusion": self.conclusion,
            "input_digest": self.input_digest,
        }
        if self.twists is not None:
            out["twists"] = self.twists
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> "EliminationCertificate":
        return cls(
            d=int(raw["d"]),
            ell_set=tuple(int(e) for e in raw["ell_set"]),
            irreducibility_threshold=int(raw["irreducibility_threshold"]),
            forms=tuple(FormCertificate.from_dict(f) for f in raw["forms"]),
            conclusion=raw["conclusion"],
            input_digest=raw.get("input_digest", ""),
            twists=raw.get("twists"),
        )


def _ell_product(args) -> tuple[int, str, int, tuple]:
    ell, d, g = args
    product = 1
    fac: Counter = Counter()
    for triple in enumerate_S_ell(ell, d):
        f = mazur_factor(ell, d, triple, g)
        if f == 0:
            return ell, g.label, 0, ()
        product *= f
        fac.update(factorint(f))
    return ell, g.label, product, tuple(sorted(fac.items()))


def _small_primes(threshold: int) -> tuple:
    return tuple(primerange(2, max(SMALL_PRIME_CUTOFF, threshold) + 1))


def _caveat_primes(ell_set: Sequence[int]) -> tuple:
    return tuple(sorted({p for ell in ell_set for p in factorint(ell - 1)}))


def assemble_form(label: str, entries: Sequence[EllProduct], ell_set, threshold: int) -> FormCertificate:
    nonzero = [e for e in entries if e.product != 0]
    g = 0
    for e in entries:
        g = math.gcd(g, e.product)
    if g == 0:
        surviving: tuple = ()
        verdict = NOT_ELIMINABLE
    else:
        exps = None
        for e in nonzero:
            fe = dict(e.factorization)
            exps = fe if exps is None else {p: min(k, fe.get(p, 0)) for p, k in exps.items()}
        surviving = tuple(sorted(p for p, k in exps.items() if k > 0))
        verdict = "eliminated for p outside the exceptional set"
    return FormCertificate(
        label=label,
        per_ell=tuple(sorted(entries, key=lambda e: e.ell)),
        gcd=g,
        surviving_primes=surviving,
        caveat_primes=_caveat_primes(ell_set),
        small_primes=_small_primes(threshold),
        verdict=verdict,
    )


def mazur_bound(
    ell_set: Iterable[int],
    d: int,
    g: NewformRecord,
    irreducibility_threshold: int = 0,
    workers: int = 1,
) -> FormCertificate:
    return run_elimination(ell_set, d, [g], irreducibility_threshold, workers).forms[0]


def run_elimination(
    ell_set: Iterable[int],
    d: int,
    forms: Sequence[NewformRecord],
    irreducibility_threshold: int = 0,
    workers: int = 1,
    input_digest: str = "",
    twists: Optional[dict] = None,
) -> EliminationCertificate:
    ells = tuple(sorted(set(ell_set)))
    if not ells:
        raise GateError("empty ell-set")
    for ell in ells:
        _check_ell(ell, d)
    for g in forms:
        for ell in ells:
            g.ap(ell)
    tasks = [(ell, d, g) for g in forms for ell in ells]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_ell_product, tasks))
    else:
        results = [_ell_product(t) for t in tasks]
    by_label: dict = {}
    for ell, label, product, fac in sorted(results, key=lambda r: (r[1], r[0])):
        by_label.setdefault(label, []).append(EllProduct(ell, product, fac))
    certs = tuple(
        assemble_form(label, by_label[label], ells, irreducibility_threshold) for label in sorted(by_label)
    )
    return EliminationCertificate(
        d=d,
        ell_set=ells,
        irreducibility_threshold=irreducibility_threshold,
        forms=certs,
        conclusion=_conclusion(certs),
        input_digest=input_digest,
        twists=twists,
    )


def _conclusion(certs: Sequence[FormCertificate]) -> str:
    stuck = [c.label for c in certs if c.gcd == 0]
    if stuck:
        return f"{NOT_ELIMINABLE}: {', '.join(stuck)}"
    exceptional = sorted({p for c in certs for p in c.exceptional_primes()})
    if not exceptional:
        return "all forms eliminated"
    return f"all forms eliminated for p > {exceptional[-1]}; exceptional primes {exceptional}"
