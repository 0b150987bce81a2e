"""Frozen expected values and oracle checks for the frontier enumeration.

The oracle is harness.brute_force_an: full-box enumeration + sort, sharing
no frontier logic with the module under test.
"""
import math

import pytest

from hypercross import core, counting, enumeration, harness
from hypercross.errors import BudgetExceeded


def close(a, b, rel=1e-12):
    return abs(a - b) <= rel * max(abs(a), abs(b), 1.0)


def wf(d, s, q, target="l2"):
    return core.weight_for(core.make_problem(d, s, q, target))


# --------------------------------------------------------------------------
# singular_values frozen examples
# --------------------------------------------------------------------------

def test_trivial_first_value():
    for spec_args in ((1, [1], [1]), (3, [1.5, 2, 2], [2, 2, math.inf])):
        seq = enumeration.singular_values(wf(*spec_args), 1)
        assert seq.values[0] == 1.0


def test_no_approximation_plateau_1d():
    seq = enumeration.singular_values(wf(1, [5], [math.inf]), 4)
    assert seq.values == pytest.approx([1.0, 1.0, 1.0, 2.0**-5], rel=0, abs=0)


def test_d2_plateau_structure():
    seq = enumeration.singular_values(wf(2, [1, 1], [1, 1]), 17)
    assert seq.values[0] == 1.0
    assert all(v == 0.5 for v in seq.values[1:5])
    assert all(close(v, 1.0 / 3.0) for v in seq.values[5:9])
    assert all(v == 0.25 for v in seq.values[9:17])
    assert list(seq.plateaus[:4]) == [(1, 1), (2, 5), (3, 9), (4, 17)]


def test_values_non_increasing_and_in_unit_interval():
    for args in ((2, [1, 2], [1, 2]), (3, [1, 1, 1], [math.inf] * 3),
                 (2, [2.5, 2.5], [2, 2], "h1")):
        seq = enumeration.singular_values(wf(*args), 300)
        vals = seq.values
        assert vals[0] == 1.0
        assert all(0.0 < v <= 1.0 for v in vals)
        assert all(a >= b for a, b in zip(vals, vals[1:]))


# --------------------------------------------------------------------------
# nth_singular_value
# --------------------------------------------------------------------------

def test_nth_singular_value_examples():
    assert enumeration.nth_singular_value(wf(2, [1, 1], [1, 1]), 17) == 0.25
    assert close(enumeration.nth_singular_value(wf(2, [2, 2], [1, 1]), 10), 1.0 / 16.0)
    w_h1 = wf(2, [2, 2], [2, 2], "h1")
    assert close(enumeration.nth_singular_value(w_h1, 2), math.sqrt(2.0) / 2.0)


def test_energy_value_ordering_d2():
    # energy weights at s = 2: 1; sqrt(2)/2 (x4); sqrt(5)/5 (x4); sqrt(3)/4 (x4)
    seq = enumeration.singular_values(wf(2, [2, 2], [2, 2], "h1"), 13)
    assert close(seq.values[1], math.sqrt(2.0) / 2.0)
    assert close(seq.values[5], math.sqrt(5.0) / 5.0)
    assert close(seq.values[9], math.sqrt(3.0) / 4.0)


# --------------------------------------------------------------------------
# jump_sequence
# --------------------------------------------------------------------------

def test_jump_sequence_1d():
    jumps = enumeration.jump_sequence(wf(1, [1], [1]), 4)
    assert jumps == [(1, 1), (2, 3), (3, 5), (4, 7)]


def test_jump_sequence_d2():
    assert enumeration.jump_sequence(wf(2, [1, 1], [1, 1]), 4) == [
        (1, 1),
        (2, 5),
        (3, 9),
        (4, 17),
    ]


def test_jump_sequence_d2_max_norm():
    # theta=1 holds the 3^2 = 9 points with both |k_j| <= 1; theta=2 adds the
    # 12 points with one coordinate at +-2 and the other in {0, +-1}
    # (brute-force verified; n_2 = 21 = count at r = 2).
    jumps = enumeration.jump_sequence(wf(2, [1, 1], [math.inf] * 2), 2)
    assert jumps == [(1, 9), (2, 21)]


def test_jump_counts_match_counting_module():
    for args in ((2, [1, 2], [1, 1]), (3, [1, 1, 1], [2, 2, 2]),
                 (2, [1.3, 2.2], [1.5, 3.0]), (2, [1, 1], [math.inf] * 2)):
        spec = core.make_problem(*args)
        jumps = enumeration.jump_sequence(core.weight_for(spec), 6)
        for theta, n_m in jumps:
            assert counting.count_exact(spec, theta).value == n_m, (args, theta)


# --------------------------------------------------------------------------
# optimal_index_set
# --------------------------------------------------------------------------

def test_optimal_index_set_examples():
    assert enumeration.optimal_index_set(core.make_problem(1, [1], [1]), 1) == set()
    got = enumeration.optimal_index_set(core.make_problem(1, [1], [1]), 4)
    assert got == {(0,), (1,), (-1,)}
    got6 = enumeration.optimal_index_set(core.make_problem(2, [1, 1], [1, 1]), 6)
    assert got6 == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}


def test_optimal_index_set_partial_plateau_is_deterministic():
    # plateau {(0,1),(1,0)} truncated after one representative: the
    # lexicographically smaller representative (0,1) wins, signs + then -
    got = enumeration.optimal_index_set(core.make_problem(2, [1, 1], [1, 1]), 4)
    assert got == {(0, 0), (0, 1), (0, -1)}


def test_optimal_index_set_user_coordinate_order():
    # s = [2, 1]: the cheap direction is the second user coordinate
    got = enumeration.optimal_index_set(core.make_problem(2, [2, 1], [1, 1]), 4)
    assert got == {(0, 0), (0, 1), (0, -1)}


def test_optimal_index_set_separation_property():
    spec = core.make_problem(3, [1.0, 1.5, 2.0], [1.0, 2.0, math.inf])
    n = 40
    lam = enumeration.optimal_index_set(spec, n)
    assert len(lam) == n - 1
    included_max = max(core.weight_u(spec, k) for k in lam)
    # probe a shell of excluded points around the included set
    radius = 1 + max(abs(c) for k in lam for c in k)
    excluded_min = math.inf
    for k in lam:
        for j in range(3):
            for sign in (1, -1):
                probe = list(k)
                probe[j] += sign
                if tuple(probe) not in lam:
                    excluded_min = min(excluded_min, core.weight_u(spec, probe))
    axis_probe = [0, 0, 0]
    axis_probe[0] = radius
    excluded_min = min(excluded_min, core.weight_u(spec, axis_probe))
    assert included_max <= excluded_min * (1.0 + 1e-12)


# --------------------------------------------------------------------------
# oracle equivalence (small grid here; the full grid runs in acceptance)
# --------------------------------------------------------------------------

def test_oracle_equivalence_small_grid():
    jumped = {1: [1.0], 2: [1.0, 2.0], 3: [1.0, 1.0, 2.0]}
    for d in (1, 2, 3):
        for q in (1.0, 2.0, math.inf):
            for s in ([1.0] * d, jumped[d]):
                spec = core.make_problem(d, s, [q] * d)
                n_max = 200
                seq = enumeration.singular_values(core.weight_for(spec), n_max)
                ref = harness.brute_force_an(spec, n_max)
                exact_mode = core.is_exact_integer(spec)
                for i, (a, b) in enumerate(zip(seq.values, ref)):
                    if exact_mode:
                        assert a == b, (d, q, s, i)
                    else:
                        assert close(a, b), (d, q, s, i)


def test_oracle_equivalence_energy():
    spec = core.make_problem(2, [2.0, 2.0], [2, 2], "h1")
    seq = enumeration.singular_values(core.weight_for(spec), 150)
    ref = harness.brute_force_an(spec, 150)
    for a, b in zip(seq.values, ref):
        assert close(a, b)


# --------------------------------------------------------------------------
# structural properties
# --------------------------------------------------------------------------

def test_scaling_law():
    for d, s in ((2, [1.0, 2.0]), (3, [1.0, 1.5, 1.5])):
        base = enumeration.singular_values(wf(d, s, [2.0] * d), 200).values
        for lam in (0.5, 2.0, 3.0):
            scaled = enumeration.singular_values(
                wf(d, [lam * x for x in s], [2.0] * d), 200
            ).values
            for a, b in zip(scaled, base):
                assert close(a, b**lam), (d, s, lam)


def test_permutation_invariance():
    a = enumeration.singular_values(wf(3, [1, 2, 3], [1.0, 2.0, math.inf]), 150)
    b = enumeration.singular_values(wf(3, [3, 1, 2], [math.inf, 1.0, 2.0]), 150)
    assert a.values == b.values
    assert a.plateaus == b.plateaus


def test_monotone_in_fine_index():
    specs = {q: wf(2, [1.5, 1.5], [q, q]) for q in (1.0, 1.7, 2.0, 5.0, math.inf)}
    seqs = {q: enumeration.singular_values(w, 150).values for q, w in specs.items()}
    qs = (1.0, 1.7, 2.0, 5.0, math.inf)
    for qa, qb in zip(qs, qs[1:]):
        for va, vb in zip(seqs[qa], seqs[qb]):
            assert va <= vb * (1.0 + 1e-12), (qa, qb)


def test_energy_dominated_by_shifted_tensor():
    for d, s in ((2, 2.0), (3, 2.5)):
        spec_h1 = core.make_problem(d, [s] * d, [2] * d, "h1")
        energy = enumeration.singular_values(core.weight_for(spec_h1), 300).values
        shifted = core.majorant_spec(spec_h1)
        tensor = enumeration.singular_values(core.weight_for(shifted), 300).values
        for a, b in zip(energy, tensor):
            assert a <= b * (1.0 + 1e-12), (d, s)


def test_q_infinity_plateau_small_d():
    for d in (1, 2, 3):
        w = wf(d, [2.0] * d, [math.inf] * d)
        seq = enumeration.singular_values(w, 3**d + 1)
        assert all(v == 1.0 for v in seq.values[: 3**d])
        assert seq.values[3**d] < 1.0


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        enumeration.singular_values(wf(3, [1, 1, 1], [1, 1, 1]), 500, node_budget=10)
