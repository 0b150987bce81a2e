"""Singular-value sequences by lazy best-first enumeration of lattice weights.

The n-th singular value of the embedding is the n-th largest value of the
reciprocal weight sigma over Z^d.  Weights are sign-symmetric, so the walk
runs over orthant representatives in N_0^d (multiplicity 2^{#nonzero}) in
nondecreasing weight order, grouped into plateaus of equal weight.

The walk itself lives in a kernel module (compiled extension when built,
pure Python otherwise; HYPERCROSS_PURE=1 forces the pure kernel).  This
module prepares per-coordinate weight tables, chooses a pruning cap, and
consumes the pops:

  * pruning cap: the n-th smallest weight cannot exceed the weight of the
    m*-th axis point on any axis (2 m* + 1 >= n axis points), so the walk
    never pushes a point heavier than min_j u_j(m*) (plus float slack);
  * plateau closure: the final plateau is consumed to its true end (first
    strictly heavier pop, or frontier exhaustion under the cap), so the
    reported cumulative counts n_m are exact even past n_max.

Exact-integer specs (q_j in {1, inf}, integer s_j, l2 target) run on exact
integer keys; everything else runs on log-domain doubles, where two pops
belong to one plateau iff their log-weights differ by <= 1e-10.  The
tie_sensitive flag reports when that tolerance was load-bearing: some group
had internal spread above 1e-11, or two adjacent plateaus sat closer than
1e-7 in the log domain.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

from . import core, counting
from .errors import BudgetExceeded  # noqa: F401  (re-raised from kernels)

if os.environ.get("HYPERCROSS_PURE"):
    from . import _frontier_py as _kernel
else:
    try:
        from . import _frontier as _kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _frontier_py as _kernel

KERNEL_NAME = _kernel.__name__.rsplit(".", 1)[-1]

DEFAULT_NODE_BUDGET = 100_000_000

# Log-domain plateau tolerances (documented in the module docstring).
_GROUP_TOL = 1e-10
_SPREAD_TOL = 1e-11
_NEIGHBOR_TOL = 1e-7
_CAP_SLACK = 1e-9


@dataclass(frozen=True)
class SingularSequence:
    """First n_max singular values plus the plateau structure behind them.

    values    -- a_1 >= a_2 >= ... >= a_n_max, each in (0, 1];
    plateaus  -- (theta_m, n_m): m-th smallest distinct weight and the exact
                 cumulative count of lattice points with weight <= theta_m
                 (the final n_m may exceed len(values));
    tie_sensitive -- float-mode plateau grouping was within tolerance of
                 splitting or merging differently.
    """

    values: list
    plateaus: list
    tie_sensitive: bool


# --------------------------------------------------------------------------
# kernel setup
# --------------------------------------------------------------------------

def _axis_cap_log(weight: core.WeightFunction, m_star: int) -> float:
    """min_j log u(m* e_j): an upper bound for the n-th smallest log-weight."""
    spec = weight.spec
    if weight.kind == "EnergyH1":
        lg = math.log1p(float(m_star) ** 2)
        return min(((sj - 1.0) / 2.0) * lg for sj in spec.s)
    return min(
        core.log_weight_1d(spec.s[i], spec.q[i], m_star) for i in range(spec.d)
    )


def _start_walk(weight: core.WeightFunction, m_star: int, node_budget: int):
    """Build tables + cap and return (pops-generator, exact_int_mode)."""
    spec = weight.spec
    m_star = max(0, int(m_star))
    if weight.kind == "EnergyH1":
        cap = _axis_cap_log(weight, m_star) + _CAP_SLACK
        tables = []
        for i in range(spec.d):
            k_hi = counting._m_max_log(spec.s[i] - 1.0, 2.0, cap)
            tables.append(
                [(spec.s[i] / 2.0) * math.log1p(float(m) ** 2) for m in range(k_hi + 2)]
            )
        return _kernel.frontier_energy(tables, cap, node_budget), False
    if core.is_exact_integer(spec):
        cap = min(
            core.weight_1d_int(spec.s[i], spec.q[i], m_star) for i in range(spec.d)
        )
        tables = []
        for i in range(spec.d):
            k_hi = counting._m_max_int(int(spec.s[i]), math.isinf(spec.q[i]), cap)
            tables.append(
                [core.weight_1d_int(spec.s[i], spec.q[i], m) for m in range(k_hi + 2)]
            )
        return _kernel.frontier_int(tables, cap, node_budget), True
    cap = _axis_cap_log(weight, m_star) + _CAP_SLACK
    tables = []
    for i in range(spec.d):
        k_hi = counting._m_max_log(spec.s[i], spec.q[i], cap)
        tables.append(
            [core.log_weight_1d(spec.s[i], spec.q[i], m) for m in range(k_hi + 2)]
        )
    return _kernel.frontier_float(tables, cap, node_budget), False


def _multiplicity(k: tuple) -> int:
    return 1 << sum(1 for c in k if c)


# --------------------------------------------------------------------------
# plateau grouping
# --------------------------------------------------------------------------

def _collect_groups(pops, exact: bool, *, n_target=None, m_target=None):
    """Group pops into plateaus: list of (key0, count, key_min, key_max).

    Stops once n_target points (or m_target groups) are covered by *closed*
    groups; the group in progress when the threshold is crossed is consumed
    to its end so cumulative counts stay exact.
    """
    groups = []
    covered = 0
    key0 = key_lo = key_hi = None
    count = 0

    def done() -> bool:
        if n_target is not None and covered >= n_target:
            return True
        return m_target is not None and len(groups) >= m_target

    for key, k in pops:
        same = False
        if key0 is not None:
            same = key == key0 if exact else (key - key0) <= _GROUP_TOL
        if same:
            count += _multiplicity(k)
            key_hi = key
        else:
            if key0 is not None:
                groups.append((key0, count, key_lo, key_hi))
                covered += count
                if done():
                    return groups
            key0 = key_lo = key_hi = key
            count = _multiplicity(k)
    if key0 is not None:
        groups.append((key0, count, key_lo, key_hi))
    return groups


def _tie_sensitivity(groups, exact: bool) -> bool:
    if exact:
        return False
    for _, _, lo, hi in groups:
        if hi - lo > _SPREAD_TOL:
            return True
    for (a, _, _, _), (b, _, _, _) in zip(groups, groups[1:]):
        if b - a < _NEIGHBOR_TOL:
            return True
    return False


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------

def singular_values(
    weight: core.WeightFunction, n_max: int, node_budget: int = DEFAULT_NODE_BUDGET
) -> SingularSequence:
    """First n_max singular values of the embedding defined by `weight`."""
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    pops, exact = _start_walk(weight, n_max // 2, node_budget)
    groups = _collect_groups(pops, exact, n_target=n_max)
    values = []
    plateaus = []
    cum = 0
    for key0, count, _, _ in groups:
        cum += count
        if exact:
            theta, sigma = key0, 1 / key0
        else:
            theta, sigma = math.exp(key0), math.exp(-key0)
        plateaus.append((theta, cum))
        take = min(count, n_max - len(values))
        values.extend([sigma] * take)
    return SingularSequence(values, plateaus, _tie_sensitivity(groups, exact))


def nth_singular_value(weight: core.WeightFunction, n: int) -> float:
    """The n-th singular value alone (computed via the same walk)."""
    return singular_values(weight, n).values[-1]


def jump_sequence(
    weight: core.WeightFunction, m_max: int, node_budget: int = DEFAULT_NODE_BUDGET
):
    """First m_max distinct weights theta_m with exact cumulative counts n_m.

    Along the axis of minimal weight growth the first m_max axis points
    already realize m_max distinct weights <= u(m_max e_j), so capping the
    walk there is safe.
    """
    m_max = int(m_max)
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    pops, exact = _start_walk(weight, m_max, node_budget)
    groups = _collect_groups(pops, exact, m_target=m_max)
    out = []
    cum = 0
    for key0, count, _, _ in groups[:m_max]:
        cum += count
        out.append((key0 if exact else math.exp(key0), cum))
    return out


def _sign_expansions(k: tuple):
    """All sign patterns of k: + before -, earlier coordinates vary slowest."""
    nz = [i for i, c in enumerate(k) if c]
    w = len(nz)
    for bits in range(1 << w):
        p = list(k)
        for idx, i in enumerate(nz):
            if (bits >> (w - 1 - idx)) & 1:
                p[i] = -p[i]
        yield tuple(p)


def optimal_index_set(
    spec: core.ProblemSpec, n: int, node_budget: int = DEFAULT_NODE_BUDGET
) -> set:
    """The n-1 frequencies (user coordinate order) a rank-(n-1) optimum uses.

    These are the n-1 smallest-weight points of Z^d; every excluded frequency
    weighs at least as much as every included one.  Within a partially taken
    plateau, orthant representatives enter in lexicographic order and signs
    expand + before -, so the set is deterministic.
    """
    if spec.target != core.TARGET_L2:
        raise ValueError("optimal index sets are defined for the l2 target")
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    need = n - 1
    if need == 0:
        return set()
    weight = core.weight_for(spec)
    pops, _ = _start_walk(weight, n // 2, node_budget)
    out = set()
    for _, k in pops:
        for p in _sign_expansions(k):
            out.add(spec.to_user_order(p))
            if len(out) == need:
                return out
    raise AssertionError("frontier exhausted before n-1 points were produced")
