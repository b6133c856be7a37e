"""Inner twists and coefficient-field structure for the newform attached to
the quartic Frey curve.

Characters are symbolic: an inner twist (sigma_j, chi) is stored by the
odd residue j mod M (sigma_j(zeta_M) = zeta_M^j), whether sigma_j acts
nontrivially on the quadratic layer F, and chi = delta_K^flip * eps^e
with e = (j - 1)/2 reduced mod M/2 (eps has order dividing M/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from freymod.errors import GateError


def _check_power_of_two(M: int) -> None:
    if M < 1 or M & (M - 1):
        raise GateError(f"M = {M} is not a power of two")


def _eps_modulus(M: int) -> int:
    return max(1, M // 2)


@dataclass(frozen=True, order=True)
class InnerTwist:
    j: int
    flips_F: bool
    eps_exponent: int
    M: int

    @property
    def character(self) -> str:
        parts = []
        if self.flips_F:
            parts.append("delta_K")
        if self.eps_exponent:
            parts.append("eps" if self.eps_exponent == 1 else f"eps^{self.eps_exponent}")
        return "*".join(parts) or "trivial"

    def compose(self, other: "InnerTwist") -> "InnerTwist":
        """(sigma, chi) o (tau, psi) = (sigma tau, chi * sigma(psi))."""
        if other.M != self.M:
            raise ValueError("twists for different M")
        mod = _eps_modulus(self.M)
        j = (self.j * other.j) % self.M if self.M > 1 else 1
        e = (self.eps_exponent + self.j * other.eps_exponent) % mod
        return InnerTwist(j, self.flips_F != other.flips_F, e, self.M)


def inner_twist_group(M: int, F_nontrivial: bool) -> list[InnerTwist]:
    _check_power_of_two(M)
    units = [j for j in range(1, M, 2)] if M > 1 else [1]
    mod = _eps_modulus(M)
    twists = [InnerTwist(j, False, ((j - 1) // 2) % mod, M) for j in units]
    if F_nontrivial:
        twists += [InnerTwist(j, True, ((j - 1) // 2) % mod, M) for j in units]
    return sorted(twists)


def euler_phi_2power(M: int) -> int:
    _check_power_of_two(M)
    return max(1, M // 2)


@dataclass(frozen=True)
class CoefficientFieldInfo:
    M: int
    sign: int
    eta: int
    degree_over_cyclotomic: Optional[int]
    galois_group_shape: str

    def as_dict(self) -> dict:
        return {
            "M": self.M,
            "sign": self.sign,
            "eta": self.eta,
            "degree_over_cyclotomic": self.degree_over_cyclotomic,
            "galois_group_shape": self.galois_group_shape,
        }


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def coefficient_field_info(ap_E: int, p: int, M: int = 2) -> dict[int, CoefficientFieldInfo]:
    """For each sign s, eta = s*ap_E + 2p and the degree of K_f over Q(zeta_M).

    a_p(f)^2 = eps(p) * eta with eps(p) a square in Q(zeta_M), so the degree is 1
    exactly when eta is a rational square.  eta = 0 means a_p(f) = 0 and the
    prime says nothing (degree None).
    """
    _check_power_of_two(M)
    if abs(ap_E) > 2 * p:
        raise GateError(f"|a_p(E)| = {abs(ap_E)} exceeds 2p = {2 * p}")
    out = {}
    for sign in (1, -1):
        eta = sign * ap_E + 2 * p
        if eta == 0:
            deg, shape = None, "undetermined (a_p(f) = 0)"
        elif _is_square(eta):
            deg, shape = 1, f"(Z/{M})^x"
        else:
            deg, shape = 2, f"Z/2 x (Z/{M})^x"
        out[sign] = CoefficientFieldInfo(M, sign, eta, deg, shape)
    return out


def field_diagram(M: int) -> dict:
    """Degrees in the tower Q < Q^eps, K < K Q^eps < K^kappa."""
    _check_power_of_two(M)
    if M == 1:
        return {
            "M": 1,
            "degenerate": True,
            "layers": ["Q", "K"],
            "note": "kappa trivial: all layers collapse to K over Q",
        }
    eps_degrees = [2**k for k in range(M.bit_length() - 1)]  # proper divisors of M
    return {
        "M": M,
        "degenerate": False,
        "layers": ["Q", "Q^eps", "K", "K*Q^eps", "K^kappa"],
        "index_K^kappa_over_K*Q^eps": 2,
        "degree_Q^eps_over_Q": eps_degrees,
        "Q^eps_cap_K": "Q",
        "note": "eps(p) is a square in Q(zeta_M); squareness of eta*eps(p) reduces to squareness of eta",
    }


def twist_summary(M: int, F_nontrivial: bool) -> dict:
    """Informational block for certificates."""
    group = inner_twist_group(M, F_nontrivial)
    return {
        "M": M,
        "F_nontrivial": F_nontrivial,
        "order": len(group),
        "twists": [{"j": t.j, "flips_F": t.flips_F, "character": t.character} for t in group],
        "diagram": field_diagram(M),
    }
