"""Problem specification and the two weight families everything derives from.

A problem is a dimension d, a smoothness vector s, a fine-index vector q
(entries in (0, inf], inf allowed), and a target space ("l2" or "h1").
Specs are canonicalized so that s is nondecreasing with the minimal value
repeated nu times: s_1 = ... = s_nu < s_{nu+1} <= ... <= s_d.  The same
permutation is applied to q, and recorded so callers can map lattice points
back to user coordinate order.

Weights (on k in Z^d; all are sign-symmetric in each coordinate):

  tensor ("l2" target):   u(k) = prod_j (1+|k_j|^{q_j})^{s_j/q_j},
                          with the factor max(1,|k_j|)^{s_j} when q_j = inf;
  energy ("h1" target):   w(k) = (1+sum_j k_j^2)^{1/2}
                                 / prod_j (1+k_j^2)^{s_j/2},  q fixed to 2;
  energy majorant:        (1+k_j^2)^{-(s_j-1)/2} productized; dominates w.

The reciprocal weight sigma = 1/u (respectively sigma = w) lies in (0, 1],
equals 1 at the origin, and is nonincreasing in each |k_j| (for the energy
weight this needs s_j > 1, which the constructor enforces).

Exact-integer mode: when every q_j is 1 or inf and every s_j is a positive
integer, u(k) is a product of integer powers and is computed in exact integer
arithmetic; everything else runs in log-domain double precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    EnergyNeedsSmoothness,
    InvalidFineIndex,
    NonPositiveSmoothness,
)

TARGET_L2 = "l2"
TARGET_H1 = "h1"

# Guard for exp() underflow when computing log(1 + x) as t + log1p(exp(-t)).
_EXP_UNDERFLOW = 700.0


@dataclass(frozen=True)
class ProblemSpec:
    """Canonicalized embedding problem.

    perm maps canonical slots to user coordinates: canonical coordinate i
    is the user's coordinate perm[i].
    """

    d: int
    s: tuple[float, ...]
    q: tuple[float, ...]
    target: str
    nu: int
    perm: tuple[int, ...]

    def to_user_order(self, k: Sequence[int]) -> tuple[int, ...]:
        """Map a canonical-order lattice point back to user coordinate order."""
        out = [0] * self.d
        for i, j in enumerate(self.perm):
            out[j] = k[i]
        return tuple(out)


def make_problem(d, s, q, target=TARGET_L2) -> ProblemSpec:
    """Validate, canonicalize (sort by (s_j, q_j)), and compute nu.

    For the "h1" target the fine index is fixed to 2 in every coordinate
    (the energy weight lives in the q=2 norm family) and min_j s_j > 1 is
    required.
    """
    d = int(d)
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if len(s) != d or len(q) != d:
        raise ValueError(f"s and q must have length d={d}")
    s = [float(x) for x in s]
    q = [float(x) for x in q]
    target = str(target).lower()
    if target not in (TARGET_L2, TARGET_H1):
        raise ValueError(f"target must be 'l2' or 'h1', got {target!r}")
    for x in s:
        if not x > 0.0 or math.isinf(x):
            raise NonPositiveSmoothness(f"smoothness entries must be finite > 0, got {x}")
    for x in q:
        if not x > 0.0:
            raise InvalidFineIndexError(x)
    if target == TARGET_H1:
        if min(s) <= 1.0:
            raise EnergyNeedsSmoothness(
                f"energy target requires min smoothness > 1, got {min(s)}"
            )
        q = [2.0] * d
    order = sorted(range(d), key=lambda j: (s[j], q[j]))
    s_sorted = tuple(s[j] for j in order)
    q_sorted = tuple(q[j] for j in order)
    nu = sum(1 for x in s_sorted if x == s_sorted[0])
    return ProblemSpec(d, s_sorted, q_sorted, target, nu, tuple(order))


def InvalidFineIndexError(x):  # small helper to keep the message in one place
    return InvalidFineIndex(f"fine-index entries must be > 0 (inf allowed), got {x}")


def is_exact_integer(spec: ProblemSpec) -> bool:
    """True when weights are exact integers: q_j in {1, inf}, s_j integer."""
    if spec.target != TARGET_L2:
        return False
    return all(qj == 1.0 or math.isinf(qj) for qj in spec.q) and all(
        sj.is_integer() for sj in spec.s
    )


# --------------------------------------------------------------------------
# 1-D factors
# --------------------------------------------------------------------------

def log_weight_1d(s: float, q: float, k: int) -> float:
    """log of the 1-D weight factor at |k|, computed stably for any q > 0.

    Finite q: (s/q) log(1+|k|^q), written as (s/q)(q log|k| + log1p(|k|^-q))
    for |k| >= 1 so that huge q never overflows.  q = inf: s log(max(1,|k|)).
    """
    k = abs(int(k))
    if math.isinf(q):
        return s * math.log(k) if k > 1 else 0.0
    if k == 0:
        return 0.0
    t = q * math.log(k)  # log(k^q); zero when k == 1
    if t > _EXP_UNDERFLOW:
        return (s / q) * t
    return (s / q) * (t + math.log1p(math.exp(-t)))


def weight_1d_int(s: float, q: float, k: int):
    """Exact integer 1-D factor: (1+|k|)^s for q=1, max(1,|k|)^s for q=inf."""
    k = abs(int(k))
    e = int(s)
    if math.isinf(q):
        return max(1, k) ** e
    return (1 + k) ** e


# --------------------------------------------------------------------------
# Weights on Z^d
# --------------------------------------------------------------------------

def log_weight_u(spec: ProblemSpec, k: Sequence[int]) -> float:
    """log u_{s,q}(k), with k given in the caller's coordinate order."""
    return sum(
        log_weight_1d(spec.s[i], spec.q[i], k[j]) for i, j in enumerate(spec.perm)
    )


def weight_u(spec: ProblemSpec, k: Sequence[int]) -> float:
    """Tensor weight u_{s,q}(k) = prod_j (1+|k_j|^{q_j})^{s_j/q_j} >= 1."""
    return math.exp(log_weight_u(spec, k))


def weight_u_exact(spec: ProblemSpec, k: Sequence[int]) -> int:
    """Exact integer u(k); only valid when is_exact_integer(spec)."""
    out = 1
    for i, j in enumerate(spec.perm):
        out *= weight_1d_int(spec.s[i], spec.q[i], k[j])
    return out


def log_weight_energy(spec: ProblemSpec, k: Sequence[int]) -> float:
    """log of the energy weight w(k) (a value in (-inf, 0])."""
    ssum = 0.0
    denom = 0.0
    for i, j in enumerate(spec.perm):
        kk = float(k[j]) * float(k[j])
        ssum += kk
        denom += (spec.s[i] / 2.0) * math.log1p(kk)
    return 0.5 * math.log1p(ssum) - denom


def weight_energy(spec: ProblemSpec, k: Sequence[int]) -> float:
    """Energy weight (1+sum k_j^2)^{1/2} / prod (1+k_j^2)^{s_j/2} in (0,1]."""
    return math.exp(log_weight_energy(spec, k))


def weight_energy_majorant(spec: ProblemSpec, k: Sequence[int]) -> float:
    """Pointwise majorant prod_j (1+k_j^2)^{-(s_j-1)/2} of the energy weight."""
    acc = 0.0
    for i, j in enumerate(spec.perm):
        kk = float(k[j]) * float(k[j])
        acc += ((spec.s[i] - 1.0) / 2.0) * math.log1p(kk)
    return math.exp(-acc)


def majorant_spec(spec: ProblemSpec) -> ProblemSpec:
    """Tensor problem whose weight 1/u equals the energy majorant: s-1, q=2."""
    return make_problem(
        spec.d, [sj - 1.0 for sj in spec.s], [2.0] * spec.d, TARGET_L2
    )


# --------------------------------------------------------------------------
# WeightFunction facade
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightFunction:
    """Reciprocal weight sigma: N_0^d -> (0, 1] with sign multiplicities.

    kind is "TensorL2" or "EnergyH1"; sigma(0) = 1 and sigma is nonincreasing
    in each coordinate.
    """

    kind: str
    spec: ProblemSpec

    def sigma(self, k: Sequence[int]) -> float:
        if self.kind == "TensorL2":
            return math.exp(-log_weight_u(self.spec, k))
        return weight_energy(self.spec, k)

    def log_u(self, k: Sequence[int]) -> float:
        """log of the weight u = 1/sigma (nonnegative)."""
        if self.kind == "TensorL2":
            return log_weight_u(self.spec, k)
        return -log_weight_energy(self.spec, k)


def weight_for(spec: ProblemSpec) -> WeightFunction:
    """The weight family selected by the spec's target."""
    if spec.target == TARGET_H1:
        return WeightFunction("EnergyH1", spec)
    return WeightFunction("TensorL2", spec)
