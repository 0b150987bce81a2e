"""Closed-form envelopes for singular-value sequences.

Upper estimates for a_n in the small-n (preasymptotic) regime, the matching
small-n lower estimate, exact asymptotic constants, the rate exponents the
estimates are built from, and a strong-tractability check.

Every upper estimate is addressed by a stable theorem identifier from
THEOREM_IDS and returns a BoundResult.  Inputs outside an estimate's validity
range still evaluate the formula whenever it is total (handy for plotting)
but come back flagged ``applicable=False``, so verification code can treat
them as absent; where the formula itself is undefined the value is ``inf``.

Two constant modes cover the jump estimates whose commonly quoted prefactor
does not match what the underlying derivation chain yields: AS_PRINTED
evaluates the quoted constants verbatim, while DERIVATION_SAFE (the default,
and what all verification uses) substitutes the slightly larger constants the
chain actually supports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

from . import specfun
from .core import TARGET_H1, TARGET_L2, ProblemSpec
from .errors import (
    AlphaTooSmall,
    DivergentArgument,
    MissingParameter,
    UnknownTheorem,
)

AS_PRINTED = "AsPrinted"
DERIVATION_SAFE = "DerivationSafe"
CONSTANT_MODES = (AS_PRINTED, DERIVATION_SAFE)

THEOREM_IDS = (
    "SMALL",
    "SMALLBBB",
    "SMALLB",
    "SMALLBCB",
    "SMALLDD_Q",
    "JUMP_BIG_NU",
    "JUMP_SMALL_NU",
    "JUMP_NU1",
    "JUMP_REORDERED",
    "LOGGROWTH",
    "ENERGY_MAIN0",
    "ENERGY_MAIN1",
    "ENERGY_MAIN2",
)

LOWER_BOUND_ID = "LOWER"

# Jump-estimate constants.  The quoted 3.2326 narrowly fails the inequality
# that defines it (equality forces >= 16 (zeta(3) - 1) = 3.23291...);
# 16 * (1.2021 - 1) = 3.2336 is the value the derivation supports.
_DELTA_PRINTED = 3.2326
_DELTA_SAFE = 3.2336
_JUMP_PREFACTOR_PRINTED = 38.02

# Relative slack for hypothesis comparisons on computed floats.
_REL_SLACK = 1e-12

_SERIES_N = 600


@dataclass(frozen=True)
class BoundResult:
    """One evaluated bound: value, provenance, and applicability."""

    value: float
    theorem_id: str
    applicable: bool
    validity_note: str
    constant_mode: str


@dataclass(frozen=True)
class ImprovementRegion:
    """Interval in ln n where the fitted rate beats the baseline exponent."""

    log_n_lower: float
    log_n_upper: float
    empty: bool


@dataclass(frozen=True)
class TractabilityReport:
    """Partial product/sum diagnostics plus the analytic tail verdict."""

    partial_product: float
    partial_sum: float
    meaningful: bool
    tail_converges: bool
    strongly_tractable: bool


# ---------------------------------------------------------------------------
# scalar constants and rate exponents
# ---------------------------------------------------------------------------


def c_d_constant(d: int) -> float:
    """Dimension constant C(d) = [1 + (1 + 2/log2(d-1))/(d-1)]^(d-1), d >= 3.

    Strictly decreasing in d with limit e; C(3) = 6.25 exactly.
    """
    d = int(d)
    if d < 3:
        raise ValueError(f"requires d >= 3, got {d}")
    ld = math.log2(d - 1.0)
    return (1.0 + (1.0 + 2.0 / ld) / (d - 1.0)) ** (d - 1)


def delta_d(d: int) -> float:
    """Exponent gain ((d-1) - ln C(d)) / ((d-1)(1 + log2(d-1))), d >= 3."""
    d = int(d)
    if d < 3:
        raise ValueError(f"requires d >= 3, got {d}")
    return ((d - 1) - math.log(c_d_constant(d))) / (
        (d - 1) * (1.0 + math.log2(d - 1.0))
    )


def gamma_rate(n: float, beta: float, d: int) -> float:
    """(1 - 2/beta) / (1 + log2(2 + beta (d-1)/ln n)); intended for beta > 2."""
    n = float(n)
    d = int(d)
    beta = float(beta)
    if not n > 1.0:
        raise ValueError(f"requires n > 1, got {n}")
    if d < 2:
        raise ValueError(f"requires d >= 2, got {d}")
    return (1.0 - 2.0 / beta) / (
        1.0 + math.log2(2.0 + beta * (d - 1) / math.log(n))
    )


def gamma_star(n: float, d: int) -> float:
    """gamma_rate at the fitted beta = (4 kappa + 1)^(11/8), kappa = (d-1)/ln n."""
    n = float(n)
    d = int(d)
    if not n > 1.0:
        raise ValueError(f"requires n > 1, got {n}")
    kappa = (d - 1) / math.log(n)
    beta = (4.0 * kappa + 1.0) ** (11.0 / 8.0)
    return gamma_rate(n, beta, d)


def gamma_lower(n: float, d: int) -> float:
    """Exponent log2(1 + 2d / log3 n) of the small-n lower bound."""
    n = float(n)
    d = int(d)
    if not n > 1.0:
        raise ValueError(f"requires n > 1, got {n}")
    return math.log2(1.0 + 2.0 * d / (math.log(n) / math.log(3.0)))


# ---------------------------------------------------------------------------
# shared plumbing
# ---------------------------------------------------------------------------


def _check_n(n) -> int:
    if isinstance(n, bool) or n != int(n):
        raise ValueError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    return n


def _guarded(fn) -> float:
    """Evaluate a formula, mapping domain errors to inf (value stays total)."""
    try:
        return float(fn())
    except (ValueError, ZeroDivisionError, OverflowError):
        return math.inf


def _ge(lhs: float, rhs: float) -> bool:
    """lhs >= rhs with relative slack for float-computed hypotheses."""
    return lhs >= rhs - _REL_SLACK * max(1.0, abs(rhs))


def _finish(value, theorem_id, failures, base_note, mode) -> BoundResult:
    if failures:
        note = "not applicable: " + "; ".join(failures) + ". " + base_note
    else:
        note = base_note
    return BoundResult(
        value=float(value),
        theorem_id=theorem_id,
        applicable=not failures,
        validity_note=note,
        constant_mode=mode,
    )


def _require_l2(spec, failures) -> None:
    if spec.target != TARGET_L2:
        failures.append("requires the plain tensor (L2) target")


def _require_h1(spec, failures) -> None:
    if spec.target != TARGET_H1:
        failures.append("requires the energy (H1) target")


def _require_const_s(spec, failures) -> None:
    if spec.nu != spec.d:
        failures.append("requires constant smoothness")


def _require_q_one(spec, failures) -> None:
    if any(x != 1.0 for x in spec.q):
        failures.append("requires fine index q = 1 in every coordinate")


def _require_const_finite_q(spec, failures) -> None:
    q0 = spec.q[0]
    if any(x != q0 for x in spec.q) or math.isinf(q0) or q0 < 1.0:
        failures.append("requires a constant finite fine index q >= 1")


def _require_n_at_least(n, lo, failures) -> None:
    if n < lo:
        failures.append(f"requires n >= {lo}, got n = {n}")


def _require_preasymptotic_n(n, d, failures) -> None:
    hi = math.exp(d - 1)
    if not (2 <= n <= hi):
        failures.append(
            f"requires 2 <= n <= e^(d-1) ~ {hi:.6g}, got n = {n}"
        )


def _jump_prefactor(mode: str) -> float:
    if mode == AS_PRINTED:
        return _JUMP_PREFACTOR_PRINTED
    return math.exp(1.5 * _DELTA_SAFE)


def _delta_constant(mode: str) -> float:
    return _DELTA_PRINTED if mode == AS_PRINTED else _DELTA_SAFE


# ---------------------------------------------------------------------------
# individual upper estimates
# ---------------------------------------------------------------------------


def _eval_small(spec, n):
    failures = []
    _require_l2(spec, failures)
    if spec.d < 2:
        failures.append(f"requires d >= 2, got d = {spec.d}")
    _require_const_s(spec, failures)
    _require_q_one(spec, failures)
    _require_n_at_least(n, 6, failures)
    s1 = spec.s[0]
    value = _guarded(
        lambda: (16.0 / (3.0 * n)) ** (s1 / (1.0 + math.log2(spec.d)))
    )
    note = "valid for d >= 2, constant smoothness, q = 1, n >= 6"
    return value, failures, note


def _eval_smallbbb(spec, n):
    failures = []
    _require_l2(spec, failures)
    if spec.d < 3:
        failures.append(f"requires d >= 3, got d = {spec.d}")
    _require_const_s(spec, failures)
    _require_q_one(spec, failures)
    _require_n_at_least(n, 2, failures)
    s1 = spec.s[0]
    value = _guarded(
        lambda: (c_d_constant(spec.d) / n)
        ** (s1 / (1.0 + math.log2(spec.d - 1.0)))
    )
    note = "valid for d >= 3, constant smoothness, q = 1, n >= 2"
    return value, failures, note


def _eval_smallb(spec, n, beta):
    failures = []
    _require_l2(spec, failures)
    if spec.d < 2:
        failures.append(f"requires d >= 2, got d = {spec.d}")
    _require_const_s(spec, failures)
    _require_q_one(spec, failures)
    if not beta > 2.0:
        failures.append(f"requires beta > 2, got beta = {beta}")
    _require_preasymptotic_n(n, spec.d, failures)
    s1 = spec.s[0]
    value = _guarded(lambda: float(n) ** (-gamma_rate(n, beta, spec.d) * s1))
    note = (
        "valid for d >= 2, constant smoothness, q = 1, beta > 2, "
        "2 <= n <= e^(d-1); the proof supports the wider range "
        "n <= e^(beta (d-1)/2)"
    )
    return value, failures, note


def _eval_smallbcb(spec, n):
    failures = []
    _require_l2(spec, failures)
    if spec.d < 7:
        failures.append(f"requires d >= 7, got d = {spec.d}")
    _require_const_s(spec, failures)
    _require_q_one(spec, failures)
    _require_preasymptotic_n(n, spec.d, failures)
    s1 = spec.s[0]
    value = _guarded(lambda: float(n) ** (-gamma_star(n, spec.d) * s1))
    note = "valid for d >= 7, constant smoothness, q = 1, 2 <= n <= e^(d-1)"
    return value, failures, note


def _eval_smalldd_q(spec, n, variant):
    failures = []
    _require_l2(spec, failures)
    _require_const_s(spec, failures)
    _require_const_finite_q(spec, failures)
    s1 = spec.s[0]
    q0 = spec.q[0]
    if variant == "i":
        if spec.d < 3:
            failures.append(f"requires d >= 3, got d = {spec.d}")
        _require_n_at_least(n, 2, failures)
        value = _guarded(
            lambda: (c_d_constant(spec.d) / n)
            ** (s1 / (q0 * (1.0 + math.log2(spec.d - 1.0))))
        )
        note = (
            "variant (i): valid for d >= 3, constant smoothness, "
            "constant finite q >= 1, n >= 2"
        )
    else:
        if spec.d < 7:
            failures.append(f"requires d >= 7, got d = {spec.d}")
        _require_preasymptotic_n(n, spec.d, failures)
        value = _guarded(
            lambda: float(n) ** (-gamma_star(n, spec.d) * s1 / q0)
        )
        note = (
            "variant (ii): valid for d >= 7, constant smoothness, "
            "constant finite q >= 1, 2 <= n <= e^(d-1)"
        )
    return value, failures, note


def _check_jump_gap(spec, block, need_fn, failures) -> None:
    """Record a failure when s_(block+1)/s_1 falls below the required gap."""
    if block >= spec.d:
        failures.append("requires a smoothness jump after the leading block")
        return
    if block < 2:
        return  # the gap requirement only binds for blocks of size >= 2
    t = spec.s[block] / spec.s[0]
    need = need_fn()
    if not _ge(t, need):
        failures.append(
            f"smoothness gap {t:.6g} below the required gap {need:.6g}"
        )


def _eval_jump_big_nu(spec, n, mode):
    failures = []
    _require_l2(spec, failures)
    _require_const_finite_q(spec, failures)
    nu = spec.nu
    if nu < 5:
        failures.append(
            f"requires at least 5 equal leading smoothness entries, got {nu}"
        )
    if nu >= spec.d:
        failures.append("requires a smoothness jump after the leading block")
    else:
        _check_jump_gap(
            spec,
            nu,
            lambda: math.log2(spec.d - nu) / (1.0 + math.log2(nu - 1.0))
            if nu >= 2
            else 0.0,
            failures,
        )
    s1 = spec.s[0]
    q0 = spec.q[0]
    value = _guarded(
        lambda: (_jump_prefactor(mode) / n)
        ** (s1 / (q0 * (1.0 + math.log2(nu - 1.0))))
    )
    note = (
        "valid for 5 <= nu < d with the relative-gap condition, "
        "constant finite q >= 1, all n"
    )
    return value, failures, note


def _eval_jump_small_nu(spec, n):
    failures = []
    _require_l2(spec, failures)
    _require_const_finite_q(spec, failures)
    nu = spec.nu
    if nu >= 5:
        failures.append(
            f"requires at most 4 equal leading smoothness entries, got {nu}"
        )
    if nu >= spec.d:
        failures.append("requires a smoothness jump after the leading block")
    else:
        t = spec.s[nu] / spec.s[0]
        need = max(1.5, math.log2(spec.d - nu) / 2.0)
        if not _ge(t, need):
            failures.append(
                f"smoothness gap {t:.6g} below the required gap {need:.6g}"
            )
    s1 = spec.s[0]
    q0 = spec.q[0]
    c = math.pi**2 / 3.0 - 1.0
    value = _guarded(
        lambda: (math.exp(4.0) * c ** (nu - 1) / n) ** (s1 / (2.0 * q0))
    )
    note = (
        "valid for 1 <= nu <= min(4, d-1) with gap >= max(3/2, log2(d-nu)/2), "
        "constant finite q >= 1, all n"
    )
    return value, failures, note


def _eval_jump_nu1(spec, n, mode):
    failures = []
    _require_l2(spec, failures)
    _require_const_finite_q(spec, failures)
    if spec.d < 5:
        failures.append(f"requires d >= 5, got d = {spec.d}")
    if spec.nu != 1:
        failures.append(
            f"requires a unique smoothness minimum, got multiplicity {spec.nu}"
        )
    s1 = spec.s[0]
    q0 = spec.q[0]

    def compute():
        t = spec.s[1] / s1
        # delta / (2^t (d-1)^(t-1)) without overflow for large t
        scale = math.exp(-(t * math.log(2.0) + (t - 1.0) * math.log(spec.d - 1.0)))
        c = math.exp(_delta_constant(mode) * scale)
        return (c / n) ** (s1 / (q0 * (1.0 + math.log2(spec.d - 1.0))))

    value = _guarded(compute)
    note = (
        "valid for d >= 5, a unique smoothness minimum, "
        "constant finite q >= 1, all n"
    )
    return value, failures, note


def _eval_jump_reordered(spec, n, mode):
    failures = []
    _require_l2(spec, failures)
    if any(math.isinf(x) for x in spec.q):
        failures.append("requires a finite fine-index vector")
    if min(spec.q) <= 1.0:
        failures.append("requires q_j > 1 in every coordinate")
    ratios = sorted(s / q for s, q in zip(spec.s, spec.q))
    mu = sum(
        1 for r in ratios if math.isclose(r, ratios[0], rel_tol=_REL_SLACK)
    )
    if mu < 5:
        failures.append(
            f"requires at least 5 equal leading ratio entries, got {mu}"
        )
    if mu >= spec.d:
        failures.append("requires a jump after the leading ratio block")
    elif mu >= 2:
        t = ratios[mu] / ratios[0]
        need = math.log2(spec.d - mu) / (1.0 + math.log2(mu - 1.0))
        if not _ge(t, need):
            failures.append(
                f"ratio gap {t:.6g} below the required gap {need:.6g}"
            )
    value = _guarded(
        lambda: (_jump_prefactor(mode) / n)
        ** (ratios[0] / (1.0 + math.log2(mu - 1.0)))
    )
    note = (
        "valid for finite q with min q_j > 1, ratio block 5 <= mu < d with "
        "the relative-gap condition, all n; exponent r_1/(1 + log2(mu - 1))"
    )
    return value, failures, note


def _eval_loggrowth(spec, n, alpha, beta):
    failures = []
    _require_l2(spec, failures)
    if spec.d < 2:
        failures.append(f"requires d >= 2, got d = {spec.d}")
    _require_const_finite_q(spec, failures)
    if not beta > 0.0:
        failures.append(f"requires beta > 0, got beta = {beta}")
    elif not alpha > 1.0 / beta:
        failures.append(
            f"requires alpha > 1/beta = {1.0 / beta:.6g}, got alpha = {alpha}"
        )
    s1 = spec.s[0]
    for j in range(1, spec.d + 1):
        need = (1.0 + beta * math.log2(j)) * s1
        if not _ge(spec.s[j - 1], need):
            failures.append(
                f"requires s_j >= (1 + beta log2 j) s_1; fails at j = {j} "
                f"({spec.s[j - 1]:.6g} < {need:.6g})"
            )
            break
    q0 = spec.q[0]
    try:
        envelope = specfun.a_alpha(alpha)
        c = (6.0 / 2.0 ** (1.0 / beta)) * (specfun.zeta(alpha * beta) - 1.0)
        value = _guarded(
            lambda: (envelope * math.exp(c) / n) ** (s1 / (alpha * q0))
        )
    except (AlphaTooSmall, DivergentArgument) as exc:
        value = math.inf
        failures.append(f"envelope constant diverges ({exc})")
    note = (
        "valid for d >= 2, s_j >= (1 + beta log2 j) s_1, alpha > 1/beta, "
        "constant finite q >= 1, all n"
    )
    return value, failures, note


def _eval_energy_main0(spec, n):
    failures = []
    _require_h1(spec, failures)
    if spec.d < 3:
        failures.append(f"requires d >= 3, got d = {spec.d}")
    _require_const_s(spec, failures)
    _require_n_at_least(n, 2, failures)
    s1 = spec.s[0]
    value = _guarded(
        lambda: (c_d_constant(spec.d) / n)
        ** ((s1 - 1.0) / (2.0 * (1.0 + math.log2(spec.d - 1.0))))
    )
    note = "valid for the energy target, d >= 3, constant smoothness, n >= 2"
    return value, failures, note


def _eval_energy_main1(spec, n):
    failures = []
    _require_h1(spec, failures)
    if spec.d < 4:
        failures.append(f"requires d >= 4, got d = {spec.d}")
    _require_const_s(spec, failures)
    _require_n_at_least(n, 8, failures)
    s1 = spec.s[0]
    value = _guarded(
        lambda: (math.e**2 / n) ** ((s1 - 1.0) / (2.0 * math.log2(spec.d)))
    )
    note = "valid for the energy target, d >= 4, constant smoothness, n >= 8"
    return value, failures, note


def _eval_energy_main2(spec, n):
    failures = []
    _require_h1(spec, failures)
    _require_const_s(spec, failures)
    s1 = spec.s[0]
    try:
        threshold = 1.0 + max(2.0 ** (s1 - 1.0), 2.0 ** (1.0 / (s1 - 1.0)))
    except (ZeroDivisionError, OverflowError):
        threshold = math.inf
    if spec.d < threshold:
        failures.append(
            "requires d >= 1 + max(2^(s-1), 2^(1/(s-1))) "
            f"= {threshold:.6g}, got d = {spec.d}"
        )
    value = _guarded(
        lambda: math.sqrt(spec.d)
        * (math.e * (2.154 + 3.0 / spec.d) / n)
        ** (s1 / (2.0 * (1.0 + math.log2(spec.d - 1.0))))
    )
    note = (
        "valid for the energy target, constant smoothness, "
        "d >= 1 + max(2^(s-1), 2^(1/(s-1))), all n; exponent uses s, not s-1"
    )
    return value, failures, note


PARAMETRIC_THEOREMS = {
    "SMALLB": frozenset({"beta"}),
    "LOGGROWTH": frozenset({"alpha", "beta"}),
    "SMALLDD_Q": frozenset({"variant"}),
}


def upper_bound(
    spec: ProblemSpec,
    n: int,
    theorem_id: str,
    constant_mode: str = DERIVATION_SAFE,
    *,
    beta: float | None = None,
    alpha: float | None = None,
    variant: str | None = None,
) -> BoundResult:
    """Evaluate one upper estimate for a_n with its applicability flag.

    Parameters beyond (spec, n): SMALLB needs ``beta``; LOGGROWTH needs
    ``alpha`` and ``beta``; SMALLDD_Q accepts ``variant`` "i" (default) or
    "ii".  Supplying a parameter to an estimate that does not use it is an
    error, as is an unknown theorem id or constant mode.
    """
    if constant_mode not in CONSTANT_MODES:
        raise ValueError(
            f"constant_mode must be one of {CONSTANT_MODES}, got {constant_mode!r}"
        )
    if theorem_id not in THEOREM_IDS:
        raise UnknownTheorem(f"unknown theorem id {theorem_id!r}")
    n = _check_n(n)
    allowed = PARAMETRIC_THEOREMS.get(theorem_id, frozenset())
    given = {
        name
        for name, v in (("beta", beta), ("alpha", alpha), ("variant", variant))
        if v is not None
    }
    extra = sorted(given - allowed)
    if extra:
        raise ValueError(f"parameter(s) {extra} are not used by {theorem_id}")

    if theorem_id == "SMALL":
        value, failures, note = _eval_small(spec, n)
    elif theorem_id == "SMALLBBB":
        value, failures, note = _eval_smallbbb(spec, n)
    elif theorem_id == "SMALLB":
        if beta is None:
            raise MissingParameter("SMALLB requires the parameter beta")
        value, failures, note = _eval_smallb(spec, n, float(beta))
    elif theorem_id == "SMALLBCB":
        value, failures, note = _eval_smallbcb(spec, n)
    elif theorem_id == "SMALLDD_Q":
        variant = "i" if variant is None else str(variant)
        if variant not in ("i", "ii"):
            raise ValueError(f"variant must be 'i' or 'ii', got {variant!r}")
        value, failures, note = _eval_smalldd_q(spec, n, variant)
    elif theorem_id == "JUMP_BIG_NU":
        value, failures, note = _eval_jump_big_nu(spec, n, constant_mode)
    elif theorem_id == "JUMP_SMALL_NU":
        value, failures, note = _eval_jump_small_nu(spec, n)
    elif theorem_id == "JUMP_NU1":
        value, failures, note = _eval_jump_nu1(spec, n, constant_mode)
    elif theorem_id == "JUMP_REORDERED":
        value, failures, note = _eval_jump_reordered(spec, n, constant_mode)
    elif theorem_id == "LOGGROWTH":
        if alpha is None or beta is None:
            raise MissingParameter(
                "LOGGROWTH requires the parameters alpha and beta"
            )
        value, failures, note = _eval_loggrowth(spec, n, float(alpha), float(beta))
    elif theorem_id == "ENERGY_MAIN0":
        value, failures, note = _eval_energy_main0(spec, n)
    elif theorem_id == "ENERGY_MAIN1":
        value, failures, note = _eval_energy_main1(spec, n)
    else:  # ENERGY_MAIN2
        value, failures, note = _eval_energy_main2(spec, n)

    return _finish(value, theorem_id, failures, note, constant_mode)


# ---------------------------------------------------------------------------
# lower estimate
# ---------------------------------------------------------------------------


def lower_bound(d: int, s: float, q: float, n: int) -> BoundResult:
    """Small-n lower estimate 2^(-s/q) n^(-s/(q gamma_lower(n, d))).

    Applicable for d >= 2 and 3 <= n <= 3^d.  Below n = 3 the reported value
    is the trivially true 0.0; above 3^d the formula value is reported but
    flagged.
    """
    d = int(d)
    s = float(s)
    q = float(q)
    n = _check_n(n)
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if not s > 0.0:
        raise ValueError(f"smoothness must be > 0, got {s}")
    if not q >= 1.0 or math.isinf(q):
        raise ValueError(f"fine index must be finite and >= 1, got {q}")
    failures = []
    if d < 2:
        failures.append(f"requires d >= 2, got d = {d}")
    if not (3 <= n <= 3**d):
        failures.append(f"requires 3 <= n <= 3^d = {3**d}, got n = {n}")
    if n < 3:
        value = 0.0
    else:
        g = gamma_lower(n, d)
        value = 2.0 ** (-s / q) * float(n) ** (-s / (q * g))
    note = "valid for d >= 2, 3 <= n <= 3^d"
    return _finish(value, LOWER_BOUND_ID, failures, note, DERIVATION_SAFE)


# ---------------------------------------------------------------------------
# asymptotic constants
# ---------------------------------------------------------------------------


def _integer_weight_series(m: int, m1: int) -> float:
    """1 + 2 sum_{l>=1} (sum_{i=0..m} l^(2i))^(-1/(2 m1)) for m > m1.

    Same recipe as specfun.b_factor: direct sum to N, then an integral tail
    with Euler-Maclaurin corrections.  The polynomial is evaluated through
    its geometric-sum closed form in log space, so large m cannot overflow.
    """
    if not m > m1:
        raise DivergentArgument(
            f"series requires m_j > m_1, got {m} <= {m1}"
        )
    rho = 0.5 / m1

    def log_poly(x: float) -> float:
        if x == 1.0:
            return math.log(m + 1.0)
        lx = math.log(x)
        return (
            2.0 * m * lx
            + math.log1p(-math.exp(-2.0 * (m + 1) * lx))
            - math.log1p(-math.exp(-2.0 * lx))
        )

    def f(x: float) -> float:
        return math.exp(-rho * log_poly(x))

    n = _SERIES_N
    acc = 0.0
    for ell in range(n, 0, -1):
        acc += f(float(ell))
    integral, _err = quad(f, float(n), math.inf, epsabs=1e-15, epsrel=1e-13)
    lx = math.log(float(n))
    dlog_poly = (
        2.0 * m / n
        + 2.0 * (m + 1) * math.exp(-(2 * m + 3) * lx)
        / (1.0 - math.exp(-(2 * m + 2) * lx))
        - 2.0 * math.exp(-3.0 * lx) / (1.0 - math.exp(-2.0 * lx))
    )
    fp_n = -rho * f(float(n)) * dlog_poly
    tail = integral - 0.5 * f(float(n)) - fp_n / 12.0
    return 1.0 + 2.0 * (acc + tail)


def asymptotic_constant(spec: ProblemSpec, sobolev_integer: bool = False) -> float:
    """Limit of n^(s_1) a_n / (ln n)^((nu-1) s_1).

    Equals [2^nu/(nu-1)! * prod_{j>nu} B_j]^(s_1), where B_j is the 1-D weight
    series of coordinate j at smoothness scaled by 1/s_1.  With
    ``sobolev_integer=True`` the polynomial-weight norm family is used
    instead (requires integer smoothness); the fine index plays no role
    there.
    """
    if spec.target != TARGET_L2:
        raise ValueError("asymptotic constants are defined for the L2 target")
    nu = spec.nu
    s1 = spec.s[0]
    if sobolev_integer:
        if not all(float(x).is_integer() for x in spec.s):
            raise ValueError(
                "the integer norm family requires integer smoothness"
            )
        tail = [
            _integer_weight_series(int(spec.s[j]), int(s1))
            for j in range(nu, spec.d)
        ]
    else:
        tail = [
            specfun.b_factor(spec.s[j], s1, spec.q[j])
            for j in range(nu, spec.d)
        ]
    base = 2.0**nu / math.factorial(nu - 1)
    return (base * math.prod(tail)) ** s1


# ---------------------------------------------------------------------------
# improvement region and tractability
# ---------------------------------------------------------------------------


def improvement_region_check(d: int, delta: float | None = None) -> ImprovementRegion:
    """Interval in ln n where the fitted exponent provably beats the baseline.

    Default: the closed-form interval [4 (d-1)^(3/5), 2 (d-1)/7].  With a
    ``delta`` in (0, 1): the alternative region
    [(d-1)/(delta ((d-1)^(1-delta)/2^(1+delta) - 1)), (d-1)/delta], empty
    when the bracket is nonpositive.  ``empty`` flags a crossed interval.
    """
    d = int(d)
    if d < 2:
        raise ValueError(f"requires d >= 2, got {d}")
    if delta is None:
        lower = 4.0 * (d - 1) ** 0.6
        upper = 2.0 * (d - 1) / 7.0
    else:
        delta = float(delta)
        if not 0.0 < delta < 1.0:
            raise ValueError(f"delta must be in (0, 1), got {delta}")
        bracket = (d - 1) ** (1.0 - delta) / 2.0 ** (1.0 + delta) - 1.0
        lower = (d - 1) / (delta * bracket) if bracket > 0.0 else math.inf
        upper = (d - 1) / delta
    return ImprovementRegion(lower, upper, not lower < upper)


def tractability_verdict(
    s1: float, beta: float, tau: float, d_max: int
) -> TractabilityReport:
    """Strong-tractability check for the growth rule s_j = s_1 (1 + beta log2 j).

    Reports the partial product prod_{j<=d_max} (2 zeta(2 tau s_j) - 1) and
    partial sum sum_{j<=d_max} 2^(-2 tau s_j); the product is meaningful only
    when 2 tau s_1 > 1 (else it is reported as inf).  The full sum converges
    iff 2 tau s_1 beta > 1, which together with meaningfulness gives the
    verdict; beta = 0 (constant smoothness) always fails.
    """
    s1 = float(s1)
    beta = float(beta)
    tau = float(tau)
    d_max = int(d_max)
    if not s1 > 0.0:
        raise ValueError(f"s1 must be > 0, got {s1}")
    if beta < 0.0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    if not tau > 0.0:
        raise ValueError(f"tau must be > 0, got {tau}")
    if d_max < 1:
        raise ValueError(f"d_max must be >= 1, got {d_max}")
    svals = [s1 * (1.0 + beta * math.log2(j)) for j in range(1, d_max + 1)]
    meaningful = 2.0 * tau * s1 > 1.0
    if meaningful:
        try:
            product = 1.0
            for sj in svals:
                product *= 2.0 * specfun.zeta(2.0 * tau * sj) - 1.0
        except DivergentArgument:
            product = math.inf
    else:
        product = math.inf
    partial_sum = math.fsum(2.0 ** (-2.0 * tau * sj) for sj in svals)
    tail_converges = 2.0 * tau * s1 * beta > 1.0
    return TractabilityReport(
        partial_product=product,
        partial_sum=partial_sum,
        meaningful=meaningful,
        tail_converges=tail_converges,
        strongly_tractable=meaningful and tail_converges,
    )
