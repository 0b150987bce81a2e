"""Exact and bounded evaluation of the lattice counting function.

C(r) = #{k in Z^d : u_{s,q}(k) <= r} is piecewise constant in r.  It is
computed by recursing over the last canonical coordinate (the largest
smoothness): c(i, r) = c(i-1, r) + 2 sum_{m=1}^{M_i} c(i-1, r / w_i(m)),
with the 1-D closed forms as base case:

  finite q:  2 floor((r^{q/s} - 1)^{1/q}) + 1
  q = inf :  2 floor(r^{1/s}) + 1

Floors are evaluated with a 1e-12 relative inward snap on the floor's
argument, so thresholds that land a hair below a jump still include it.
When every q_j is 1 or inf, every s_j is an integer, and r is an integer,
the whole recursion runs in exact integer arithmetic (no snapping needed:
thresholds and weights are exact).

tie_sensitive reports whether re-running the count at r (1 +- 1e-12)
changes the value; counts at exact jump thresholds are flagged unless the
perturbation is itself swallowed by the snap.
"""
from __future__ import annotations

import math
import operator
from dataclasses import dataclass

from . import core
from .errors import BudgetExceeded

_SNAP_REL = 1e-12
# Threshold logs below this exclude even the origin (weight exactly 1).
_LOG_LO = math.log1p(-_SNAP_REL)
_DEFAULT_BUDGET = 50_000_000
_MAX_EXACT_FLOAT = 2.0**53


@dataclass(frozen=True)
class CountResult:
    """A count value, its threshold, and a float-fragility flag."""

    value: int
    tie_sensitive: bool
    r: float


def _snap_floor(x: float) -> int:
    """floor(x) with values within 1e-12 relative of an integer snapping."""
    xr = round(x)
    if abs(x - xr) <= _SNAP_REL * max(1.0, abs(x)):
        return int(xr)
    return int(math.floor(x))


def _m_max_log(s: float, q: float, logr: float) -> int:
    """Largest m with the 1-D factor at m below exp(logr), log-domain.

    finite q: floor((r^{q/s} - 1)^{1/q}); q = inf: floor(r^{1/s}).
    Returns -1 when even the origin is excluded (logr below -1e-12-ish).
    """
    if logr < _LOG_LO:
        return -1
    logr = max(logr, 0.0)
    if math.isinf(q):
        return max(1, _snap_floor(math.exp(logr / s)))
    t = (q / s) * logr
    if t > 700.0:
        x = math.exp(t / q)
    else:
        x = math.expm1(t) ** (1.0 / q)
    return _snap_floor(x)


def _max_arg(pred, lo: int) -> int:
    """Largest m >= lo with pred(m), given pred(lo); exponential + bisection."""
    hi = lo + 1
    while pred(hi):
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _m_max_int(e: int, q_inf: bool, t: int) -> int:
    """Exact integer version of _m_max_log for thresholds t >= 1."""
    if q_inf:
        return _max_arg(lambda m: m**e <= t, 1)
    return _max_arg(lambda m: (1 + m) ** e <= t, 0)


def _weight_int(e: int, q_inf: bool, m: int) -> int:
    return m**e if q_inf else (1 + m) ** e


def _count_1d_at(s: float, q: float, r: float) -> int:
    exactable = float(s).is_integer() and (q == 1.0 or math.isinf(q))
    if exactable and float(r).is_integer() and abs(r) <= _MAX_EXACT_FLOAT:
        t = int(r)
        if t < 1:
            return 0
        return 2 * _m_max_int(int(s), math.isinf(q), t) + 1
    if r <= 0.0:
        return 0
    m = _m_max_log(s, q, math.log(r))
    return 0 if m < 0 else 2 * m + 1


def count_1d(s: float, q: float, r: float) -> CountResult:
    """#{k in Z : (1+|k|^q)^{s/q} <= r} (max(1,|k|)^s for q = inf), r >= 1."""
    s = float(s)
    q = float(q)
    rf = float(r)
    if not rf >= 1.0:
        raise ValueError(f"count threshold must be >= 1, got {r}")
    center = _count_1d_at(s, q, rf)
    lo = _count_1d_at(s, q, rf * (1.0 - _SNAP_REL))
    hi = _count_1d_at(s, q, rf * (1.0 + _SNAP_REL))
    return CountResult(center, lo != center or hi != center, rf)


def _count_rec_int(spec: core.ProblemSpec, t0: int, budget: list) -> int:
    """Exact-integer recursion over canonical coordinates, largest s last."""
    es = [int(x) for x in spec.s]
    qinf = [math.isinf(x) for x in spec.q]
    memo: dict = {}

    def rec(i: int, t: int) -> int:
        if t < 1:
            return 0
        key = (i, t)
        hit = memo.get(key)
        if hit is not None:
            return hit
        budget[0] -= 1
        if budget[0] < 0:
            raise BudgetExceeded("counting recursion exceeded its node budget")
        if i == 0:
            out = 2 * _m_max_int(es[0], qinf[0], t) + 1
        else:
            out = rec(i - 1, t)
            m_hi = _m_max_int(es[i], qinf[i], t)
            for m in range(1, m_hi + 1):
                out += 2 * rec(i - 1, t // _weight_int(es[i], qinf[i], m))
        memo[key] = out
        return out

    return rec(spec.d - 1, t0)


def _count_rec_log(spec: core.ProblemSpec, logr0: float, budget: list) -> int:
    """Log-domain recursion; memo keys quantize log r to 48 fractional bits."""
    s, q = spec.s, spec.q
    memo: dict = {}
    scale = float(1 << 48)

    def rec(i: int, logr: float) -> int:
        if logr < _LOG_LO:
            return 0
        key = (i, round(logr * scale))
        hit = memo.get(key)
        if hit is not None:
            return hit
        budget[0] -= 1
        if budget[0] < 0:
            raise BudgetExceeded("counting recursion exceeded its node budget")
        if i == 0:
            m = _m_max_log(s[0], q[0], logr)
            out = 0 if m < 0 else 2 * m + 1
        else:
            out = rec(i - 1, logr)
            m_hi = _m_max_log(s[i], q[i], logr)
            for m in range(1, m_hi + 1):
                out += 2 * rec(i - 1, logr - core.log_weight_1d(s[i], q[i], m))
        memo[key] = out
        return out

    return rec(spec.d - 1, logr0)


def _count_at(spec: core.ProblemSpec, r, budget: list) -> int:
    try:
        ri = operator.index(r)
    except TypeError:
        ri = None
    if core.is_exact_integer(spec):
        if ri is not None:
            return _count_rec_int(spec, ri, budget)
        rf = float(r)
        if rf.is_integer() and abs(rf) <= _MAX_EXACT_FLOAT:
            return _count_rec_int(spec, int(rf), budget)
    rf = float(r)
    if rf <= 0.0:
        return 0
    return _count_rec_log(spec, math.log(rf), budget)


def count_exact(
    spec: core.ProblemSpec, r, node_budget: int = _DEFAULT_BUDGET
) -> CountResult:
    """Exact cardinality #{k in Z^d : u_{s,q}(k) <= r} for r >= 1.

    Integer thresholds with integer weights are counted in exact integer
    arithmetic; everything else runs in the snapped log-domain recursion.
    Raises BudgetExceeded when the recursion outgrows node_budget.
    """
    if spec.target != core.TARGET_L2:
        raise ValueError("counting is defined for the tensor (l2) target only")
    rf = float(r)
    if not rf >= 1.0:
        raise ValueError(f"count threshold must be >= 1, got {r}")
    budget = [int(node_budget)]
    center = _count_at(spec, r, budget)
    exact_int = core.is_exact_integer(spec)
    try:
        ri = operator.index(r)
    except TypeError:
        ri = int(rf) if (rf.is_integer() and abs(rf) <= _MAX_EXACT_FLOAT) else None
    if exact_int and ri is not None:
        # exact +-1e-12 relative probes in integer arithmetic
        lo_t = (ri * (10**12 - 1)) // 10**12
        hi_t = (ri * (10**12 + 1)) // 10**12
        lo = _count_at(spec, lo_t, budget) if lo_t >= 1 else 0
        hi = _count_at(spec, hi_t, budget)
    else:
        lo = _count_at(spec, rf * (1.0 - _SNAP_REL), budget)
        hi = _count_at(spec, rf * (1.0 + _SNAP_REL), budget)
    return CountResult(center, lo != center or hi != center, rf)


def count_upper_clever(s, r: float, alpha: float) -> float:
    """Bound A_alpha prod_{j=2}^d (2 zeta(alpha s_j) - 1) r^alpha on the count.

    Requires s sorted nondecreasing with s_1 = 1 (normalize by dividing by
    s_1 first; the count scales accordingly) and alpha > 1.
    """
    from . import specfun

    s = [float(x) for x in s]
    if not s:
        raise ValueError("smoothness vector must be nonempty")
    if abs(s[0] - 1.0) > 1e-12:
        raise ValueError(f"normalized vector must have s_1 = 1, got {s[0]}")
    if any(a > b for a, b in zip(s, s[1:])):
        raise ValueError("smoothness vector must be nondecreasing")
    rf = float(r)
    if not rf >= 1.0:
        raise ValueError(f"count threshold must be >= 1, got {r}")
    acc = math.log(specfun.a_alpha(alpha)) + alpha * math.log(rf)
    for sj in s[1:]:
        acc += math.log(2.0 * specfun.zeta(alpha * sj) - 1.0)
    return math.exp(acc)
