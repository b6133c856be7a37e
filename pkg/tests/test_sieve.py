import math

import pytest
from hypothesis import given, settings, strategies as st
from sympy import isprime, primerange

from freymod.errors import ExtraUnitsError, GateError
from freymod.quadfield import QuadField, class_number
from freymod.sieve import (
    R_MAX,
    Q_MAX,
    ThreeTorsionCandidate,
    format_pattern,
    is_prime_times_cube,
    mod8_patterns,
    non_base_change_2torsion_analytic,
    pair_by_negation,
    read_candidates,
    scan_2torsion,
    sieve_2torsion,
    sieve_3torsion,
    solve_mod8,
    write_candidates,
)

EXPECTED_PAIRS = {(-6, 2), (-12, 16), (6, -2), (12, -16)}


def admissible_2torsion_d(limit=500):
    return [
        d
        for d in primerange(5, limit)
        if d % 8 == 3 and math.gcd(class_number(QuadField(d)), 6) == 1
    ]


def test_solve_mod8():
    sols = solve_mod8()
    assert (1, 1, 2) in sols
    assert (-1, -1, 1) in sols
    for s1, s2, m in sols:
        assert (s1 + s2 * 2**m) % 8 == 5
        assert m < 3
    # brute-force oracle over m <= 7
    expected = {
        (s1, s2, m) for s1 in (1, -1) for s2 in (1, -1) for m in range(8) if (s1 + s2 * 2**m - 5) % 8 == 0
    }
    assert set(sols) == expected


def test_mod8_patterns_display():
    pats = mod8_patterns()
    assert sorted(format_pattern(s1, m, signs) for (s1, m), signs in pats.items()) == ["-1 - 2^1", "1 ± 2^2"]


def test_sieve2_examples():
    assert sieve_2torsion(11) == []
    with pytest.raises(ExtraUnitsError):
        sieve_2torsion(3)
    with pytest.raises(GateError):
        sieve_2torsion(35)
    with pytest.raises(GateError):
        sieve_2torsion(7)


def test_sieve2_analytic_agrees_with_brute_force():
    ds = admissible_2torsion_d()
    assert 11 in ds and 19 in ds
    for d in ds:
        rational, other = scan_2torsion(d)
        assert other == []
        assert non_base_change_2torsion_analytic(d) == []
        assert all(c.check() and c.rational for c in rational)


def test_scan_finds_rational_models():
    rational, _ = scan_2torsion(19, t_max=3, r_max=12)
    # b = -1, a^2 = 2^(r-4) - 4 has a = 0 at r = 6 (y^2 = x^3 - x)
    assert any(c.b == -1 and c.a_halves == (0, 0) for c in rational)
    assert all(c.check() for c in rational)


def test_is_prime_times_cube_examples():
    assert is_prime_times_cube(-118152) == (547, -6)
    assert is_prime_times_cube(24) == (3, 2)
    assert is_prime_times_cube(16) == (2, 2)
    assert is_prime_times_cube(36) is None
    assert is_prime_times_cube(8) is None
    with pytest.raises(ValueError):
        is_prime_times_cube(0)


@settings(max_examples=200)
@given(st.sampled_from(list(primerange(2, 2000))), st.integers(-60, 60).filter(bool))
def test_is_prime_times_cube_roundtrip(d, alpha):
    found = is_prime_times_cube(d * alpha**3)
    assert found is not None
    fd, fa = found
    assert isprime(fd) and fd * fa**3 == d * alpha**3


def test_cell_example():
    m = -(2**4) * 3**10 // 2**3 - 27 * 2
    assert m == -118152 == 547 * (-6) ** 3


def test_sieve3_free_d():
    cands = sieve_3torsion()
    assert {(c.alpha, c.beta) for c in cands} == EXPECTED_PAIRS
    assert {c.d for c in cands} == {547}
    for c in cands:
        assert c.check()
        assert c.r <= R_MAX and c.q <= Q_MAX and c.s == 2
        assert not c.extra_paper
    assert len(cands) % 2 == 0
    assert len(pair_by_negation(cands)) == len(cands) // 2


def test_sieve3_parallel_matches_serial():
    assert sieve_3torsion(workers=2) == sieve_3torsion(workers=1)


def test_sieve3_fixed_d():
    assert sieve_3torsion(19) == []
    assert {(c.alpha, c.beta) for c in sieve_3torsion(547)} == EXPECTED_PAIRS
    with pytest.raises(GateError):
        sieve_3torsion(23)
    with pytest.raises(GateError):
        sieve_3torsion(91)


def test_sieve3_extra_paper_marking():
    cands = sieve_3torsion(r_max=18, q_max=13)
    assert all(c.extra_paper == (c.r > R_MAX) for c in cands)
    assert EXPECTED_PAIRS <= {(c.alpha, c.beta) for c in cands if not c.extra_paper}


def test_candidate_file_roundtrip(tmp_path):
    cands = sieve_3torsion()
    rational, _ = scan_2torsion(19, t_max=2, r_max=10)
    path = tmp_path / "cands.jsonl"
    write_candidates(list(cands) + rational, path)
    assert len(path.read_text().splitlines()) == len(cands) + len(rational)
    assert read_candidates(path) == list(cands) + rational


def test_unpaired_detected():
    c = ThreeTorsionCandidate(-6, 2, 547, 4, 10, -1)
    with pytest.raises(ArithmeticError):
        pair_by_negation([c])
