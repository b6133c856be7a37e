import math
from fractions import Fraction

import pytest
from sympy import factorint
from hypothesis import given, settings, strategies as st

from freymod import weierstrass
from freymod.errors import GateError, TrivialSolutionError, UnsupportedPlaceError
from freymod.frey import build_frey, cm_check, curve_from_ainvs, reduction_type
from freymod.quadfield import QuadField, QuadFrac, is_squarefree

small = st.integers(-30, 30).filter(bool)
SQUAREFREE = [d for d in range(1, 120) if is_squarefree(d)]


def coprime_pair():
    return st.tuples(small, small).filter(lambda t: math.gcd(*t) == 1)


def test_quartic_discriminant_example():
    E = build_frey("quartic", 1, 1, 19, 3)
    K = E.K
    assert E.c_power == 20
    assert E.delta == 512 * K.element(1, 1) * 20
    # independent oracle: y^2 = x^3 + A x^2 + B x has disc 16 B^2 (A^2 - 4B)
    A, B = E.a2, E.a4
    assert E.delta == 16 * B * B * (A * A - 4 * B)


def test_quartic_j_denominator_example():
    E = build_frey("quartic", 3, 5, 7, 3)
    assert E.c_power == 256
    assert E.j_den == E.K.element(9, 5) * 256


@settings(max_examples=150, deadline=None)
@given(coprime_pair(), st.sampled_from(SQUAREFREE))
def test_quartic_invariants(ab, d):
    a, b = ab
    E = build_frey("quartic", a, b, d, 5)
    K = E.K
    assert E.delta == 512 * K.element(a * a, b) * (a**4 + d * b * b)
    assert E.c4 == 32 * K.element(5 * a * a, -3 * b)
    assert E.c4**3 * E.j_den == E.j_num * E.delta
    assert E.torsion_order() == 2
    j = E.j_invariant()
    assert j * QuadFrac(E.delta) == QuadFrac(E.c4**3)


@settings(max_examples=100, deadline=None)
@given(coprime_pair(), st.sampled_from(SQUAREFREE))
def test_sextic_invariants(ab, d):
    a, b = ab
    E = build_frey("sextic", a, b, d, 7)
    K = E.K
    s = K.element(a, b**3)
    assert E.delta == -6912 * d**4 * s * s * (a * a + d * b**6)
    assert E.delta == E.a3**3 * (E.a1**3 - 27 * E.a3)
    assert E.torsion_order() == 3
    ainvs = tuple(QuadFrac(x) for x in E.ainvs)
    P = E.torsion_point()
    assert weierstrass.on_curve(ainvs, P)
    assert weierstrass.multiply(ainvs, P, 3) is None


def test_build_frey_gates():
    with pytest.raises(TrivialSolutionError):
        build_frey("quartic", 0, 1, 19, 3)
    with pytest.raises(GateError):
        build_frey("quartic", 2, 4, 19, 3)
    with pytest.raises(GateError):
        build_frey("quartic", 1, 1, 19, 9)
    with pytest.raises(GateError):
        build_frey("quartic", 1, 1, 12, 3)


def test_quartic_delta_identity_grid():
    for d in (7, 19, 43):
        K = QuadField(d)
        for a in range(-30, 31):
            for b in range(-30, 31):
                if a * b == 0 or math.gcd(a, b) != 1:
                    continue
                E = build_frey("quartic", a, b, d, 3)
                assert E.delta == 512 * K.element(a * a, b) * (a**4 + d * b * b)


def test_cm_examples():
    v = cm_check(3, 5, 7, 2)
    assert v.is_candidate
    assert v.details["c"] == [-16, 16]
    assert v.details["c_power"] == 256
    assert cm_check(1, 1, 19, 5).kind == "no_cm"
    assert cm_check(5, 3, 7, 3).kind == "no_cm"


def test_cm_grid_only_d7():
    flagged = set()
    for d in range(1, 51):
        if not is_squarefree(d):
            continue
        for a in range(-50, 51):
            for b in range(-50, 51):
                if a * b == 0 or math.gcd(a, b) != 1:
                    continue
                if cm_check(a, b, d, 3).is_candidate:
                    flagged.add((d, a, b))
    assert flagged == {(7, 3, 5), (7, 3, -5), (7, -3, 5), (7, -3, -5)}


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([19, 43, 67, 163]), coprime_pair())
def test_quartic_reduction_at_odd_primes_dividing_c(d, ab):
    a, b = ab
    E = build_frey("quartic", a, b, d, 3)
    K = E.K
    for q in factorint(E.c_power):
        if q == 2 or d % q == 0:
            continue
        for P in K.primes_above(q):
            info = reduction_type(E, P)
            if P.valuation(E.delta) > 0:
                assert info.kind == "multiplicative"
    for P in K.primes_above(d):
        if E.c_power % d:
            assert reduction_type(E, P).kind == "good"


def test_reduction_examples():
    E = build_frey("quartic", 1, 1, 19, 3)
    kinds = [reduction_type(E, P).kind for P in E.K.primes_above(5)]
    assert kinds == ["multiplicative", "multiplicative"]
    assert reduction_type(E, E.K.primes_above(19)[0]).kind == "good"
    S = build_frey("sextic", 2, 1, 19, 3)
    for ell in (19, 2, 3):
        assert reduction_type(S, S.K.primes_above(ell)[0]).kind == "additive"


def test_reduction_unsupported_places():
    E = build_frey("quartic", 1, 2, 7, 3)  # 2 splits in Q(sqrt(-7))
    with pytest.raises(UnsupportedPlaceError):
        reduction_type(E, E.K.primes_above(2)[0])
    E = build_frey("quartic", 1, 1, 3, 5)  # 3 ramifies
    with pytest.raises(UnsupportedPlaceError):
        reduction_type(E, E.K.primes_above(3)[0])


def test_minimality_shift():
    # y^2 = x^3 + 5^4 x is the twist of y^2 = x^3 + x by u = 5
    K = QuadField(19)
    E = curve_from_ainvs(K, (0, 0, 0, 625, 0))
    P = K.primes_above(5)[0]
    info = reduction_type(E, P)
    assert info.shifts == 1 and info.kind == "good"


def test_weierstrass_group_law_over_integers():
    # y^2 = x^3 - 2 has (3, 5) of infinite order; check associativity on multiples
    ainvs = (0, 0, 0, 0, -2)
    P = (Fraction(3), Fraction(5))
    P2 = weierstrass.add(ainvs, P, P)
    assert weierstrass.on_curve(ainvs, P2)
    assert weierstrass.add(ainvs, weierstrass.add(ainvs, P2, P), P) == weierstrass.add(ainvs, P2, P2)
    assert weierstrass.add(ainvs, P, weierstrass.negate(ainvs, P)) is None
