"""Core module tests: canonicalization, weights, and weight inequalities.

Expected values frozen from hand evaluation of the weight formulas before
the implementation was written.
"""
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercross import core
from hypercross.errors import (
    EnergyNeedsSmoothness,
    InvalidFineIndex,
    NonPositiveSmoothness,
)

INF = math.inf


def close(a, b, rel=1e-12):
    return math.isclose(a, b, rel_tol=rel, abs_tol=0.0)


# ---------------------------------------------------------------- make_problem

def test_make_problem_sorts_smoothness():
    spec = core.make_problem(2, [2, 1], [1, 1], "l2")
    assert spec.s == (1.0, 2.0)
    assert spec.q == (1.0, 1.0)
    assert spec.nu == 1


def test_make_problem_constant_vector_nu_equals_d():
    spec = core.make_problem(3, [1, 1, 1], [INF, INF, INF], "l2")
    assert spec.nu == 3
    assert spec.q == (INF, INF, INF)


def test_make_problem_joint_permutation():
    spec = core.make_problem(3, [3, 1, 2], [7, 5, 6], "l2")
    assert spec.s == (1.0, 2.0, 3.0)
    assert spec.q == (5.0, 6.0, 7.0)
    # permutation maps canonical slots back to user coordinates
    assert spec.perm == (1, 2, 0)


def test_make_problem_nu_counts_minimum_multiplicity():
    spec = core.make_problem(4, [2, 1, 1, 5], [1, 1, 1, 1], "l2")
    assert spec.nu == 2
    assert spec.s == (1.0, 1.0, 2.0, 5.0)


def test_make_problem_rejects_bad_inputs():
    with pytest.raises(NonPositiveSmoothness):
        core.make_problem(2, [1, 0], [1, 1], "l2")
    with pytest.raises(NonPositiveSmoothness):
        core.make_problem(1, [-2], [1], "l2")
    with pytest.raises(InvalidFineIndex):
        core.make_problem(2, [1, 1], [1, 0], "l2")
    with pytest.raises(InvalidFineIndex):
        core.make_problem(2, [1, 1], [1, -3], "l2")
    with pytest.raises(EnergyNeedsSmoothness):
        core.make_problem(2, [1, 1], [2, 2], "h1")
    with pytest.raises(ValueError):
        core.make_problem(2, [1, 1, 1], [1, 1], "l2")


def test_make_problem_h1_forces_q_two():
    spec = core.make_problem(2, [2, 2], [1, 7], "h1")
    assert spec.q == (2.0, 2.0)
    assert spec.target == "h1"


def test_exact_integer_mode_detection():
    assert core.is_exact_integer(core.make_problem(2, [1, 2], [1, 1], "l2"))
    assert core.is_exact_integer(core.make_problem(2, [1, 3], [INF, 1], "l2"))
    assert not core.is_exact_integer(core.make_problem(2, [1, 1], [2, 1], "l2"))
    assert not core.is_exact_integer(core.make_problem(1, [0.5], [1], "l2"))
    assert not core.is_exact_integer(core.make_problem(2, [2, 2], [2, 2], "h1"))


# ---------------------------------------------------------------- weight_u

def test_weight_u_1d_q1():
    spec = core.make_problem(1, [1], [1], "l2")
    assert close(core.weight_u(spec, [3]), 4.0)
    assert close(core.weight_u(spec, [-3]), 4.0)
    assert core.weight_u(spec, [0]) == 1.0


def test_weight_u_q_infinity():
    spec = core.make_problem(2, [1, 1], [INF, INF], "l2")
    assert close(core.weight_u(spec, [2, 0]), 2.0)
    assert core.weight_u(spec, [1, -1]) == 1.0
    assert core.weight_u(spec, [0, 0]) == 1.0


def test_weight_u_mixed_smoothness_product():
    spec = core.make_problem(2, [1, 2], [1, 1], "l2")
    # (1+1)^1 * (1+1)^2 = 8
    assert close(core.weight_u(spec, [1, 1]), 8.0)


def test_weight_u_q2():
    spec = core.make_problem(1, [1], [2], "l2")
    assert close(core.weight_u(spec, [2]), math.sqrt(5.0))


def test_weight_u_large_q_is_stable():
    spec = core.make_problem(1, [1], [400], "l2")
    # (1 + 7^400)^{1/400} = 7 * (1 + 7^{-400})^{1/400} ~ 7
    assert close(core.weight_u(spec, [7]), 7.0, rel=1e-12)


# ---------------------------------------------------------------- energy weight

def test_weight_energy_values():
    spec = core.make_problem(2, [2, 2], [2, 2], "h1")
    assert core.weight_energy(spec, [0, 0]) == 1.0
    assert close(core.weight_energy(spec, [1, 0]), math.sqrt(2.0) / 2.0)
    assert close(core.weight_energy(spec, [1, 1]), math.sqrt(3.0) / 4.0)


def test_weight_energy_majorant_values():
    spec = core.make_problem(2, [2, 2], [2, 2], "h1")
    assert core.weight_energy_majorant(spec, [0, 0]) == 1.0
    assert close(core.weight_energy_majorant(spec, [1, 0]), 1.0 / math.sqrt(2.0))
    assert close(core.weight_energy_majorant(spec, [1, 1]), 0.5)
    assert core.weight_energy(spec, [1, 1]) <= 0.5


def test_weight_function_sigma():
    spec = core.make_problem(2, [1, 1], [1, 1], "l2")
    w = core.weight_for(spec)
    assert w.kind == "TensorL2"
    assert w.sigma([0, 0]) == 1.0
    assert close(w.sigma([1, 1]), 0.25)
    espec = core.make_problem(2, [2, 2], [2, 2], "h1")
    we = core.weight_for(espec)
    assert we.kind == "EnergyH1"
    assert close(we.sigma([1, 0]), math.sqrt(2.0) / 2.0)


# ---------------------------------------------------------------- properties

finite_q = st.floats(min_value=0.2, max_value=50.0)
any_q = st.one_of(finite_q, st.just(INF))
smoothness = st.floats(min_value=0.1, max_value=20.0)
coordinate = st.integers(min_value=-40, max_value=40)


@st.composite
def spec_and_point(draw, q_strategy=any_q, min_s=0.1):
    d = draw(st.integers(min_value=1, max_value=4))
    s = [draw(st.floats(min_value=min_s, max_value=20.0)) for _ in range(d)]
    q = [draw(q_strategy) for _ in range(d)]
    k = [draw(coordinate) for _ in range(d)]
    return s, q, k


@settings(max_examples=200, deadline=None)
@given(spec_and_point())
def test_semigroup_property(sqk):
    s, q, k = sqk
    d = len(s)
    t = [1.0 + 0.25 * j for j in range(d)]
    u_s = core.weight_u(core.make_problem(d, s, q, "l2"), k)
    u_t = core.weight_u(core.make_problem(d, t, q, "l2"), k)
    u_st = core.weight_u(
        core.make_problem(d, [a + b for a, b in zip(s, t)], q, "l2"), k
    )
    assert close(u_st, u_s * u_t, rel=1e-11)


@settings(max_examples=200, deadline=None)
@given(spec_and_point(q_strategy=st.floats(min_value=1.0, max_value=50.0)))
def test_weight_monotone_in_q_versus_one(sqk):
    # u_{s/q, 1}(k) <= u_{s,q}(k) for finite q >= 1
    s, q, k = sqk
    d = len(s)
    u_q = core.weight_u(core.make_problem(d, s, q, "l2"), k)
    s_over_q = [a / b for a, b in zip(s, q)]
    u_1 = core.weight_u(core.make_problem(d, s_over_q, [1.0] * d, "l2"), k)
    assert u_1 <= u_q * (1.0 + 1e-12)


@settings(max_examples=200, deadline=None)
@given(spec_and_point(q_strategy=finite_q))
def test_weight_q_infinity_is_smallest(sqk):
    s, q, k = sqk
    d = len(s)
    u_q = core.weight_u(core.make_problem(d, s, q, "l2"), k)
    u_inf = core.weight_u(core.make_problem(d, s, [INF] * d, "l2"), k)
    assert u_inf <= u_q * (1.0 + 1e-12)


@settings(max_examples=200, deadline=None)
@given(spec_and_point(), st.data())
def test_sigma_coordinatewise_nonincreasing_tensor(sqk, data):
    s, q, k = sqk
    d = len(s)
    k = [abs(x) for x in k]
    j = data.draw(st.integers(min_value=0, max_value=d - 1))
    spec = core.make_problem(d, s, q, "l2")
    w = core.weight_for(spec)
    k2 = list(k)
    k2[j] += 1
    assert w.sigma(k2) <= w.sigma(k) * (1.0 + 1e-12)


@settings(max_examples=200, deadline=None)
@given(spec_and_point(min_s=1.05), st.data())
def test_sigma_coordinatewise_nonincreasing_energy(sqk, data):
    s, _, k = sqk
    d = len(s)
    k = [abs(x) for x in k]
    j = data.draw(st.integers(min_value=0, max_value=d - 1))
    spec = core.make_problem(d, s, [2.0] * d, "h1")
    w = core.weight_for(spec)
    k2 = list(k)
    k2[j] += 1
    assert w.sigma(k2) <= w.sigma(k) * (1.0 + 1e-12)


@settings(max_examples=200, deadline=None)
@given(spec_and_point(min_s=1.05))
def test_energy_majorant_dominates(sqk):
    s, _, k = sqk
    d = len(s)
    spec = core.make_problem(d, s, [2.0] * d, "h1")
    assert core.weight_energy(spec, k) <= core.weight_energy_majorant(
        spec, k
    ) * (1.0 + 1e-12)
