# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: initializedcheck=False
# cython: cdivision=True
"""Compiled best-first frontier walk -- same contract as _frontier_py.

The three generators mirror the pure-Python kernel exactly: (key, point)
pops in nondecreasing key order with lexicographic tie-breaks, the
unique-parent rule for children, cap pruning, and a push budget that
raises BudgetExceeded.  Pop order agrees with the pure kernel because
the order is total (each point is pushed at most once, and key ties are
broken by comparing the point tuples), so both heaps always hold a
unique minimum.

Speed comes from keeping keys in C arrays (float64, or int64 for the
exact-integer walk) beside a Python list of point tuples: heap sifts
compare C keys and touch the tuples only on exact key ties.  Integer
problems whose weights might not fit in 62 bits fall back to the pure
kernel, which uses arbitrary-precision integers.
"""

import array

from . import _frontier_py
from .errors import BudgetExceeded

cimport cython
from cpython.list cimport PyList_GET_ITEM
from cpython.long cimport PyLong_FromLongLong
from cpython.mem cimport PyMem_Free, PyMem_Malloc, PyMem_Realloc
from cpython.object cimport Py_LT, PyObject_RichCompareBool
from cpython.ref cimport Py_INCREF
from cpython.tuple cimport (PyTuple_GET_ITEM, PyTuple_GET_SIZE, PyTuple_New,
                            PyTuple_SET_ITEM)
from libc.math cimport log1p

_BUDGET_MSG = "frontier exceeded its node budget"

# Exact-integer fast path: keys stay <= cap, and a child key is computed
# as (key // t_prev) * t_next with t_prev, t_next table entries, so the
# walk is overflow-free in int64 whenever cap and every entry are below
# 2^62 (the quotient is <= cap, and the product is tested against cap via
# division before it is formed).  Kept as a Python int so comparisons
# against arbitrary-size caps and budgets never overflow.
_INT64_LIMIT = 4611686018427387904  # 2**62


cdef long long _clamp_budget(budget):
    """Budgets beyond the int64-safe range are unreachable; clamp them."""
    if budget > _INT64_LIMIT:
        return _INT64_LIMIT
    return budget


cdef tuple _child(tuple k, Py_ssize_t j, long long kj):
    """Copy of k with coordinate j replaced by kj (parent items reused)."""
    cdef Py_ssize_t d = PyTuple_GET_SIZE(k)
    cdef tuple out = PyTuple_New(d)
    cdef object item
    cdef Py_ssize_t i
    for i in range(d):
        if i == j:
            item = PyLong_FromLongLong(kj)
        else:
            item = <object> PyTuple_GET_ITEM(k, i)
        Py_INCREF(item)
        PyTuple_SET_ITEM(out, i, item)
    return out


@cython.final
cdef class _FloatHeap:
    """Min-heap of (float64 key, point) with optional (D, S) side values.

    Ordering matches heapq on (key, point, ...) tuples: C key first,
    point tuples (lexicographic) on exact key ties.
    """

    cdef double* keys
    cdef double* dsums
    cdef long long* ssums
    cdef bint has_aux
    cdef list pts
    cdef Py_ssize_t n
    cdef Py_ssize_t room

    def __cinit__(self, bint has_aux):
        self.room = 256
        self.n = 0
        self.has_aux = has_aux
        self.pts = []
        self.keys = <double*> PyMem_Malloc(self.room * sizeof(double))
        self.dsums = NULL
        self.ssums = NULL
        if self.keys == NULL:
            raise MemoryError()
        if has_aux:
            self.dsums = <double*> PyMem_Malloc(self.room * sizeof(double))
            self.ssums = <long long*> PyMem_Malloc(self.room * sizeof(long long))
            if self.dsums == NULL or self.ssums == NULL:
                raise MemoryError()

    def __dealloc__(self):
        PyMem_Free(self.keys)
        PyMem_Free(self.dsums)
        PyMem_Free(self.ssums)

    cdef int _grow(self) except -1:
        cdef Py_ssize_t room = self.room * 2
        cdef double* kd = <double*> PyMem_Realloc(self.keys, room * sizeof(double))
        if kd == NULL:
            raise MemoryError()
        self.keys = kd
        cdef double* dd
        cdef long long* sd
        if self.has_aux:
            dd = <double*> PyMem_Realloc(self.dsums, room * sizeof(double))
            if dd == NULL:
                raise MemoryError()
            self.dsums = dd
            sd = <long long*> PyMem_Realloc(self.ssums, room * sizeof(long long))
            if sd == NULL:
                raise MemoryError()
            self.ssums = sd
        self.room = room
        return 0

    cdef int _less(self, Py_ssize_t i, Py_ssize_t j) except -1:
        if self.keys[i] < self.keys[j]:
            return 1
        if self.keys[i] > self.keys[j]:
            return 0
        return PyObject_RichCompareBool(
            <object> PyList_GET_ITEM(self.pts, i),
            <object> PyList_GET_ITEM(self.pts, j),
            Py_LT,
        )

    cdef void _swap(self, Py_ssize_t i, Py_ssize_t j):
        cdef double tk = self.keys[i]
        self.keys[i] = self.keys[j]
        self.keys[j] = tk
        cdef long long ts
        if self.has_aux:
            tk = self.dsums[i]
            self.dsums[i] = self.dsums[j]
            self.dsums[j] = tk
            ts = self.ssums[i]
            self.ssums[i] = self.ssums[j]
            self.ssums[j] = ts
        cdef object tmp = self.pts[i]
        self.pts[i] = self.pts[j]
        self.pts[j] = tmp

    cdef int push(self, double key, tuple pt, double dsum, long long ssum) except -1:
        if self.n == self.room:
            self._grow()
        cdef Py_ssize_t i = self.n
        self.keys[i] = key
        if self.has_aux:
            self.dsums[i] = dsum
            self.ssums[i] = ssum
        self.pts.append(pt)
        self.n = i + 1
        cdef Py_ssize_t parent
        while i > 0:
            parent = (i - 1) >> 1
            if self._less(i, parent):
                self._swap(i, parent)
                i = parent
            else:
                break
        return 0

    cdef tuple popmin(self):
        """Remove and return the minimal point (read keys[0] etc. first)."""
        cdef tuple pt = <tuple> self.pts[0]
        cdef Py_ssize_t last = self.n - 1
        if last > 0:
            self.keys[0] = self.keys[last]
            if self.has_aux:
                self.dsums[0] = self.dsums[last]
                self.ssums[0] = self.ssums[last]
            self.pts[0] = self.pts[last]
        self.pts.pop()
        self.n = last
        if last > 1:
            self._sift_down()
        return pt

    cdef int _sift_down(self) except -1:
        cdef Py_ssize_t i = 0
        cdef Py_ssize_t child
        while True:
            child = 2 * i + 1
            if child >= self.n:
                break
            if child + 1 < self.n and self._less(child + 1, child):
                child += 1
            if self._less(child, i):
                self._swap(child, i)
                i = child
            else:
                break
        return 0


@cython.final
cdef class _IntHeap:
    """Min-heap of (int64 key, point); same ordering contract as _FloatHeap."""

    cdef long long* keys
    cdef list pts
    cdef Py_ssize_t n
    cdef Py_ssize_t room

    def __cinit__(self):
        self.room = 256
        self.n = 0
        self.pts = []
        self.keys = <long long*> PyMem_Malloc(self.room * sizeof(long long))
        if self.keys == NULL:
            raise MemoryError()

    def __dealloc__(self):
        PyMem_Free(self.keys)

    cdef int _grow(self) except -1:
        cdef Py_ssize_t room = self.room * 2
        cdef long long* kd = <long long*> PyMem_Realloc(self.keys, room * sizeof(long long))
        if kd == NULL:
            raise MemoryError()
        self.keys = kd
        self.room = room
        return 0

    cdef int _less(self, Py_ssize_t i, Py_ssize_t j) except -1:
        if self.keys[i] < self.keys[j]:
            return 1
        if self.keys[i] > self.keys[j]:
            return 0
        return PyObject_RichCompareBool(
            <object> PyList_GET_ITEM(self.pts, i),
            <object> PyList_GET_ITEM(self.pts, j),
            Py_LT,
        )

    cdef void _swap(self, Py_ssize_t i, Py_ssize_t j):
        cdef long long tk = self.keys[i]
        self.keys[i] = self.keys[j]
        self.keys[j] = tk
        cdef object tmp = self.pts[i]
        self.pts[i] = self.pts[j]
        self.pts[j] = tmp

    cdef int push(self, long long key, tuple pt) except -1:
        if self.n == self.room:
            self._grow()
        cdef Py_ssize_t i = self.n
        self.keys[i] = key
        self.pts.append(pt)
        self.n = i + 1
        cdef Py_ssize_t parent
        while i > 0:
            parent = (i - 1) >> 1
            if self._less(i, parent):
                self._swap(i, parent)
                i = parent
            else:
                break
        return 0

    cdef tuple popmin(self):
        cdef tuple pt = <tuple> self.pts[0]
        cdef Py_ssize_t last = self.n - 1
        if last > 0:
            self.keys[0] = self.keys[last]
            self.pts[0] = self.pts[last]
        self.pts.pop()
        self.n = last
        if last > 1:
            self._sift_down()
        return pt

    cdef int _sift_down(self) except -1:
        cdef Py_ssize_t i = 0
        cdef Py_ssize_t child
        while True:
            child = 2 * i + 1
            if child >= self.n:
                break
            if child + 1 < self.n and self._less(child + 1, child):
                child += 1
            if self._less(child, i):
                self._swap(child, i)
                i = child
            else:
                break
        return 0


def _flatten_float(tables):
    """Concatenate per-coordinate tables into ('d' values, 'q' offsets, 'q' lengths)."""
    vals = []
    offs = []
    lens = []
    for tab in tables:
        offs.append(len(vals))
        lens.append(len(tab))
        vals.extend(tab)
    return (
        array.array("d", vals),
        array.array("q", offs),
        array.array("q", lens),
    )


def _int64_safe(tables, cap):
    """True when the whole integer walk fits in int64 (see module docstring)."""
    if cap >= _INT64_LIMIT:
        return False
    for tab in tables:
        for entry in tab:
            if entry < 1 or entry >= _INT64_LIMIT:
                return False
    return True


def frontier_float(tables, double cap, budget):
    """Yield (log-weight, point) in nondecreasing order; tensor weights."""
    cdef Py_ssize_t d = len(tables)
    cdef long long budget_c = _clamp_budget(budget)
    flat_a, off_a, len_a = _flatten_float(tables)
    cdef double[::1] flat = flat_a
    cdef long long[::1] off = off_a
    cdef long long[::1] tln = len_a
    cdef long long[::1] kc = array.array("q", bytes(8 * d))
    cdef _FloatHeap heap = _FloatHeap(False)
    heap.push(0.0, (0,) * d, 0.0, 0)
    cdef long long pushes = 1
    cdef double key, ck
    cdef tuple k
    cdef Py_ssize_t i, j, stop
    cdef long long kj, base
    while heap.n > 0:
        key = heap.keys[0]
        k = heap.popmin()
        yield key, k
        stop = d - 1
        for i in range(d):
            kc[i] = <object> PyTuple_GET_ITEM(k, i)
        for i in range(d):
            if kc[i] != 0:
                stop = i
                break
        for j in range(stop + 1):
            kj = kc[j] + 1
            if kj >= tln[j]:
                continue
            base = off[j]
            ck = key - flat[base + kj - 1] + flat[base + kj]
            if ck > cap:
                continue
            pushes += 1
            if pushes > budget_c:
                raise BudgetExceeded(_BUDGET_MSG)
            heap.push(ck, _child(k, j, kj), 0.0, 0)


def frontier_int(tables, cap, budget):
    """Yield (weight, point) with exact integer weights."""
    if not _int64_safe(tables, cap):
        # Arbitrary-precision weights: delegate to the pure kernel.
        yield from _frontier_py.frontier_int(tables, cap, budget)
        return
    cdef Py_ssize_t d = len(tables)
    cdef long long cap_c = cap
    cdef long long budget_c = _clamp_budget(budget)
    vals = []
    offs = []
    lens = []
    for tab in tables:
        offs.append(len(vals))
        lens.append(len(tab))
        vals.extend(tab)
    cdef long long[::1] flat = array.array("q", vals)
    cdef long long[::1] off = array.array("q", offs)
    cdef long long[::1] tln = array.array("q", lens)
    cdef long long[::1] kc = array.array("q", bytes(8 * d))
    cdef _IntHeap heap = _IntHeap()
    heap.push(1, (0,) * d)
    cdef long long pushes = 1
    cdef long long key, ck, quot, tnext
    cdef tuple k
    cdef Py_ssize_t i, j, stop
    cdef long long kj, base
    while heap.n > 0:
        key = heap.keys[0]
        k = heap.popmin()
        yield PyLong_FromLongLong(key), k
        stop = d - 1
        for i in range(d):
            kc[i] = <object> PyTuple_GET_ITEM(k, i)
        for i in range(d):
            if kc[i] != 0:
                stop = i
                break
        for j in range(stop + 1):
            kj = kc[j] + 1
            if kj >= tln[j]:
                continue
            base = off[j]
            quot = key // flat[base + kj - 1]
            tnext = flat[base + kj]
            if quot > cap_c // tnext:
                continue
            ck = quot * tnext
            pushes += 1
            if pushes > budget_c:
                raise BudgetExceeded(_BUDGET_MSG)
            heap.push(ck, _child(k, j, kj))


def frontier_energy(dtables, double cap, budget):
    """Yield (log-weight, point) for the energy weight.

    dtables[j][m] = (s_j/2) log(1+m^2); the key subtracts (1/2) log(1+S)
    with S = sum k_j^2 tracked incrementally (S grows by 2 k_j + 1).
    """
    cdef Py_ssize_t d = len(dtables)
    cdef long long budget_c = _clamp_budget(budget)
    flat_a, off_a, len_a = _flatten_float(dtables)
    cdef double[::1] flat = flat_a
    cdef long long[::1] off = off_a
    cdef long long[::1] tln = len_a
    cdef long long[::1] kc = array.array("q", bytes(8 * d))
    cdef _FloatHeap heap = _FloatHeap(True)
    heap.push(0.0, (0,) * d, 0.0, 0)
    cdef long long pushes = 1
    cdef double key, ck, dsum, cd
    cdef long long ssum, cs
    cdef tuple k
    cdef Py_ssize_t i, j, stop
    cdef long long kj, base
    while heap.n > 0:
        key = heap.keys[0]
        dsum = heap.dsums[0]
        ssum = heap.ssums[0]
        k = heap.popmin()
        yield key, k
        stop = d - 1
        for i in range(d):
            kc[i] = <object> PyTuple_GET_ITEM(k, i)
        for i in range(d):
            if kc[i] != 0:
                stop = i
                break
        for j in range(stop + 1):
            kj = kc[j] + 1
            if kj >= tln[j]:
                continue
            base = off[j]
            cd = dsum - flat[base + kj - 1] + flat[base + kj]
            cs = ssum + 2 * kc[j] + 1
            ck = cd - 0.5 * log1p(<double> cs)
            if ck > cap:
                continue
            pushes += 1
            if pushes > budget_c:
                raise BudgetExceeded(_BUDGET_MSG)
            heap.push(ck, _child(k, j, kj), cd, cs)
