import itertools
import json

import pytest
from hypothesis import given, strategies as st

from freymod.errors import GateError
from freymod.twists import (
    coefficient_field_info,
    euler_phi_2power,
    field_diagram,
    inner_twist_group,
    twist_summary,
)

POWERS = [1, 2, 4, 8, 16, 32]


def labels(group):
    return {(t.j, t.character) for t in group}


def test_group_examples():
    assert labels(inner_twist_group(4, False)) == {(1, "trivial"), (3, "eps")}
    two = inner_twist_group(2, True)
    assert {(t.j, t.flips_F, t.character) for t in two} == {(1, False, "trivial"), (1, True, "delta_K")}
    assert len(inner_twist_group(4, True)) == 4


def test_non_power_of_two_rejected():
    for M in (0, 3, 6, 12):
        with pytest.raises(GateError):
            inner_twist_group(M, False)


@pytest.mark.parametrize("M", POWERS)
@pytest.mark.parametrize("flip", [False, True])
def test_group_size_and_closure(M, flip):
    group = inner_twist_group(M, flip)
    phi = sum(1 for j in range(M) if j % 2) if M > 1 else 1
    assert euler_phi_2power(M) == phi
    assert len(group) == phi * (2 if flip else 1)
    members = set(group)
    for s, t in itertools.product(group, repeat=2):
        u = s.compose(t)
        assert u in members
        assert u.j == (s.j * t.j) % M or M == 1
    for t in group:
        assert t.j % 2 == 1
        assert (t.j - 1) % 2 == 0


def test_composition_is_abelian():
    group = inner_twist_group(16, True)
    for s, t in itertools.product(group, repeat=2):
        assert s.compose(t) == t.compose(s)


def test_coefficient_field_examples():
    info = coefficient_field_info(2, 3)
    assert info[-1].eta == 4 and info[-1].degree_over_cyclotomic == 1
    assert info[1].eta == 8 and info[1].degree_over_cyclotomic == 2
    assert info[1].galois_group_shape == "Z/2 x (Z/2)^x"
    info = coefficient_field_info(0, 5)
    assert {i.eta for i in info.values()} == {10}
    assert {i.degree_over_cyclotomic for i in info.values()} == {2}
    with pytest.raises(GateError):
        coefficient_field_info(7, 3)


def test_eta_zero_undetermined():
    info = coefficient_field_info(6, 3)
    assert info[-1].eta == 0 and info[-1].degree_over_cyclotomic is None


@given(st.integers(3, 200).filter(lambda p: all(p % k for k in range(2, p))), st.data())
def test_degree_sign_symmetry(p, data):
    a = data.draw(st.integers(-2 * p, 2 * p))
    M = data.draw(st.sampled_from(POWERS))
    pos, neg = coefficient_field_info(a, p, M), coefficient_field_info(-a, p, M)
    for s in (1, -1):
        assert pos[s].degree_over_cyclotomic == neg[-s].degree_over_cyclotomic
        assert pos[s].degree_over_cyclotomic in (1, 2, None)


def test_field_diagram():
    assert field_diagram(2)["degree_Q^eps_over_Q"] == [1]
    assert field_diagram(2)["index_K^kappa_over_K*Q^eps"] == 2
    assert field_diagram(4)["degree_Q^eps_over_Q"] == [1, 2]
    assert field_diagram(16)["degree_Q^eps_over_Q"] == [1, 2, 4, 8]
    assert field_diagram(1)["degenerate"]


def test_summary_serialisable():
    s = twist_summary(8, True)
    assert s["order"] == 8
    assert json.loads(json.dumps(s)) == s
