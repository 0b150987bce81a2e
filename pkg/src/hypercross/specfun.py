"""Scalar special functions used by the counting estimates and rate bounds.

Conventions:
  zeta(t)           Riemann zeta for t > 1, direct series plus integral tail
                    with Euler-Maclaurin corrections (<= 1e-12 relative).
  a_alpha(alpha)    sup_{m in N} (2m-1)/m^alpha for alpha > 1; equals 1
                    exactly once alpha >= log2(3).
  omega_m(m, l)     sqrt(sum_{n=0}^m l^{2n}) with the convention 0^0 = 1.
  b_factor(...)     B = 1 + 2 sum_{m>=1} (1+m^q)^{-rho/q} with rho = s_j/s_1;
                    closed forms 2*zeta(rho)-1 (q=1) and 1+2*zeta(rho) (q=inf).
  f_kappa_beta      F(kappa,beta) = 2[1+log2(2+beta*kappa)]
                                    - (beta^2-2 beta) kappa / (ln2 (2+beta*kappa)).
  optimal_beta      smallest root of F(kappa, .) on [2, inf), located by a
                    fine geometric scan for the first sign change, then
                    bisection to 1e-6 absolute.

All functions are pure and deterministic; zeta is memoized.
"""
from __future__ import annotations

import math
from functools import lru_cache

from scipy.integrate import quad

from .errors import (
    AlphaTooSmall,
    DivergentArgument,
    InvalidFineIndex,
    NoSignChange,
)

_LOG2_3 = math.log2(3.0)

# Series length for zeta / b_factor tails.  With the two Euler-Maclaurin
# correction terms the truncation error is ~ t(t+1)(t+2) N^{-t-3}/720,
# below 1e-13 absolute for every t > 1 at N = 600.
_SERIES_N = 600


@lru_cache(maxsize=None)
def zeta(t: float) -> float:
    """Riemann zeta(t) for t > 1 to <= 1e-12 relative error.

    sum_{m<=N} m^-t  +  N^{1-t}/(t-1)  -  N^-t/2  +  t N^{-t-1}/12.

    The plain integral tail alone decays only like N^-t and cannot reach
    1e-12 near t = 1 with a feasible N; the two correction terms push the
    error to O(N^{-t-3}).
    """
    t = float(t)
    if not t > 1.0 + 1e-9:
        raise DivergentArgument(f"zeta(t) requires t > 1, got {t}")
    n = _SERIES_N
    acc = 0.0
    for m in range(n, 0, -1):  # ascending magnitude for summation accuracy
        acc += m ** (-t)
    tail = n ** (1.0 - t) / (t - 1.0) - 0.5 * n ** (-t) + t * n ** (-t - 1.0) / 12.0
    return acc + tail


def a_alpha(alpha: float) -> float:
    """sup_{m in N} (2m-1)/m^alpha, exactly 1 when alpha >= log2(3).

    f(m) = 2 m^{1-alpha} - m^{-alpha} is unimodal with continuous maximizer
    m* = alpha/(2(alpha-1)), so a scan past 4*m* is exhaustive.
    """
    alpha = float(alpha)
    if not alpha > 1.0:
        raise AlphaTooSmall(f"requires alpha > 1, got {alpha}")
    if alpha >= _LOG2_3:
        return 1.0
    m_star = alpha / (2.0 * (alpha - 1.0))
    m_hi = max(8, 4 * int(math.ceil(m_star)) + 4)
    return max((2 * m - 1) / m**alpha for m in range(1, m_hi + 1))


def omega_m(m: int, ell: int) -> float:
    """sqrt(sum_{n=0}^m ell^{2n}); the n = 0 term is 1 even for ell = 0."""
    m = int(m)
    if m < 1:
        raise ValueError(f"requires m >= 1, got {m}")
    l2 = int(ell) * int(ell)
    return math.sqrt(float(sum(l2**n for n in range(m + 1))))


def _tail_term_log(rho: float, q: float, x: float) -> float:
    """(1+x^q)^(-rho/q) for x >= 1, stable for arbitrarily large q."""
    t = q * math.log(x)
    if t > 700.0:
        return math.exp(-rho * math.log(x))
    return math.exp(-(rho / q) * (t + math.log1p(math.exp(-t))))


def b_factor(s_j: float, s_1: float, q_j: float) -> float:
    """B = 1 + 2 sum_{m>=1} (1+m^{q_j})^{-s_j/(s_1 q_j)}, rho = s_j/s_1 > 1.

    q=1 and q=inf resum to 2*zeta(rho)-1 and 1+2*zeta(rho).  General q uses
    a direct sum to N plus integral tail with Euler-Maclaurin corrections
    (sum_{m>N} f(m) = int_N^inf f - f(N)/2 - f'(N)/12 + O(f'''(N))).
    """
    rho = float(s_j) / float(s_1)
    if not rho > 1.0:
        raise DivergentArgument(
            f"series requires s_j/s_1 > 1, got ratio {rho}"
        )
    q = float(q_j)
    if not q > 0.0:
        raise InvalidFineIndex(f"fine index must be > 0 (inf allowed), got {q}")
    if math.isinf(q):
        return 1.0 + 2.0 * zeta(rho)
    if q == 1.0:
        return 2.0 * zeta(rho) - 1.0
    n = _SERIES_N

    def f(x: float) -> float:
        return _tail_term_log(rho, q, x)

    acc = 0.0
    for m in range(n, 0, -1):
        acc += f(float(m))
    integral, _err = quad(f, float(n), math.inf, epsabs=1e-15, epsrel=1e-13)
    # f'(x) = -rho f(x) / (x (1 + x^-q))
    fp_n = -rho * f(float(n)) / (n * (1.0 + math.exp(-q * math.log(n))))
    tail = integral - 0.5 * f(float(n)) - fp_n / 12.0
    return 1.0 + 2.0 * (acc + tail)


def f_kappa_beta(kappa: float, beta: float) -> float:
    """F(kappa, beta) = 2[1+log2(2+beta kappa)] - (beta^2-2beta) kappa / (ln2 (2+beta kappa))."""
    kappa = float(kappa)
    beta = float(beta)
    g = 2.0 + beta * kappa
    return 2.0 * (1.0 + math.log2(g)) - (beta * beta - 2.0 * beta) * kappa / (
        math.log(2.0) * g
    )


def beta_residual(kappa: float, beta: float) -> float:
    """Residual of the stationarity equation the published beta(kappa) solve.

    G(kappa, beta) = 2[1+log2(2+beta kappa)] - (beta^2-2 beta)/(ln2 (2+beta kappa)).

    This is f_kappa_beta with the kappa factor dropped from the second term;
    the two coincide at kappa = 1.  The published beta(kappa) values (and the
    (4 kappa + 1)^{11/8} fit) are roots of G, not of the printed F — only G
    reproduces the tabulated 20.72 / 164.15 / 2637.18 / 16628.70.
    """
    kappa = float(kappa)
    beta = float(beta)
    g = 2.0 + beta * kappa
    return 2.0 * (1.0 + math.log2(g)) - (beta * beta - 2.0 * beta) / (
        math.log(2.0) * g
    )


def optimal_beta(kappa: float) -> float:
    """Smallest root beta* >= 2 of beta_residual(kappa, .) = 0, to 1e-6 abs.

    The residual is positive at beta = 2 and eventually negative; a geometric
    scan with ratio 2^(1/8) finds the first sign change, then bisection
    refines.  Reproduces the published beta(kappa) table to < 0.5%.
    """
    kappa = float(kappa)
    if kappa < 1.0:
        raise ValueError(f"requires kappa >= 1, got {kappa}")
    lo = 2.0
    f_lo = beta_residual(kappa, lo)
    if f_lo <= 0.0:
        raise NoSignChange(f"residual({kappa}, 2) = {f_lo} is not positive")
    ratio = 2.0 ** 0.125
    hi = lo * ratio
    while beta_residual(kappa, hi) > 0.0:
        lo, hi = hi, hi * ratio
        if hi > 1e15:
            raise NoSignChange(f"no sign change of residual({kappa}, .) up to 1e15")
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if beta_residual(kappa, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
