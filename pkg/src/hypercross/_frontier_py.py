"""Pure-Python best-first frontier walk over N_0^d, in weight order.

Points are orthant representatives (nonnegative coordinates).  The walk
pops them in nondecreasing weight order (ties: lexicographically smallest
point first) using a binary heap and the unique-parent rule: the children
of k are k + e_j exactly for those j whose earlier coordinates are all
zero.  Every point is pushed at most once, so no visited-set is needed;
correctness rests on the weight being nondecreasing in each coordinate.

Three key arithmetics, one function each (mirrored by the compiled kernel):
  float  — key is log u, per-coordinate log tables;
  int    — key is u itself as an exact Python integer, integer tables;
  energy — key is log u = sum_j (s_j/2) log(1+k_j^2) - (1/2) log(1+|k|^2),
           tracked incrementally via the pair (D, S), D the sum of the
           per-coordinate log terms and S = sum k_j^2.

Each generator yields (key, point) with point a tuple; a point whose key
exceeds `cap` is never pushed.  `budget` caps total pushes and raises
BudgetExceeded when exhausted.
"""
from __future__ import annotations

import heapq
import math

from .errors import BudgetExceeded

_BUDGET_MSG = "frontier exceeded its node budget"


def _first_nonzero(k: tuple) -> int:
    for i, c in enumerate(k):
        if c:
            return i
    return len(k) - 1


def frontier_float(tables, cap: float, budget: int):
    """Yield (log-weight, point) in nondecreasing order; tensor weights."""
    d = len(tables)
    heap = [(0.0, (0,) * d)]
    pushes = 1
    while heap:
        key, k = heapq.heappop(heap)
        yield key, k
        stop = _first_nonzero(k)
        for j in range(stop + 1):
            kj = k[j] + 1
            tab = tables[j]
            if kj >= len(tab):
                continue
            ck = key - tab[kj - 1] + tab[kj]
            if ck > cap:
                continue
            pushes += 1
            if pushes > budget:
                raise BudgetExceeded(_BUDGET_MSG)
            heapq.heappush(heap, (ck, k[:j] + (kj,) + k[j + 1 :]))


def frontier_int(tables, cap: int, budget: int):
    """Yield (weight, point) with exact integer weights."""
    d = len(tables)
    heap = [(1, (0,) * d)]
    pushes = 1
    while heap:
        key, k = heapq.heappop(heap)
        yield key, k
        stop = _first_nonzero(k)
        for j in range(stop + 1):
            kj = k[j] + 1
            tab = tables[j]
            if kj >= len(tab):
                continue
            ck = (key // tab[kj - 1]) * tab[kj]
            if ck > cap:
                continue
            pushes += 1
            if pushes > budget:
                raise BudgetExceeded(_BUDGET_MSG)
            heapq.heappush(heap, (ck, k[:j] + (kj,) + k[j + 1 :]))


def frontier_energy(dtables, cap: float, budget: int):
    """Yield (log-weight, point) for the energy weight.

    dtables[j][m] = (s_j/2) log(1+m^2); the key subtracts (1/2) log(1+S)
    with S = sum k_j^2 tracked incrementally (S grows by 2 k_j + 1).
    """
    d = len(dtables)
    heap = [(0.0, (0,) * d, 0.0, 0)]
    pushes = 1
    while heap:
        key, k, dsum, ssum = heapq.heappop(heap)
        yield key, k
        stop = _first_nonzero(k)
        for j in range(stop + 1):
            kj = k[j] + 1
            tab = dtables[j]
            if kj >= len(tab):
                continue
            cd = dsum - tab[kj - 1] + tab[kj]
            cs = ssum + 2 * k[j] + 1
            ck = cd - 0.5 * math.log1p(float(cs))
            if ck > cap:
                continue
            pushes += 1
            if pushes > budget:
                raise BudgetExceeded(_BUDGET_MSG)
            heapq.heappush(heap, (ck, k[:j] + (kj,) + k[j + 1 :], cd, cs))
    return
