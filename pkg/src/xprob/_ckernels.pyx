# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels over the power set of a finite state space.

Events are bitmasks: bit ``i`` set means state index ``i`` is in the event.
Every function here has a numpy twin in ``xprob._pure`` with identical
results (same summation order, same pair enumeration order).
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


def subset_sums(const double[::1] atoms):
    cdef Py_ssize_t n = atoms.shape[0]
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(size, dtype=np.float64)
    cdef double[::1] v = out
    cdef Py_ssize_t i, m, half
    cdef double a
    for i in range(n):
        half = (<Py_ssize_t>1) << i
        a = atoms[i]
        for m in range(half):
            v[half + m] = v[m] + a
    return out


def max_abs_subset_sum(const double[::1] d):
    """Largest |sum of d over A| across all subsets A (2^N walk, O(1) memory per step)."""
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef double[::1] v = np.zeros(size, dtype=np.float64)
    cdef Py_ssize_t i, m, half
    cdef double best = 0.0, x
    for i in range(n):
        half = (<Py_ssize_t>1) << i
        for m in range(half):
            x = v[m] + d[i]
            v[half + m] = x
            if fabs(x) > best:
                best = fabs(x)
    return best


def ec3_violations(const double[::1] values, double tol):
    """Count nested pairs A <= B breaking either sign-guarded monotonicity clause.

    Returns int64 array [n_pos, a_pos, b_pos, n_neg, a_neg, b_neg]; the pair
    entries hold the first offending (A, B) or -1.
    """
    cdef Py_ssize_t size = values.shape[0]
    cdef long long b, a, diff
    cdef long long n_pos = 0, n_neg = 0
    cdef long long a_pos = -1, b_pos = -1, a_neg = -1, b_neg = -1
    cdef double va, vb, vd
    for b in range(size):
        vb = values[b]
        a = b
        while True:
            va = values[a]
            vd = values[b ^ a]
            if va >= 0.0 and vb >= 0.0 and vd >= 0.0:
                if va > vb + tol:
                    if n_pos == 0:
                        a_pos = a
                        b_pos = b
                    n_pos += 1
            if va <= 0.0 and vb <= 0.0 and vd <= 0.0:
                if va < vb - tol:
                    if n_neg == 0:
                        a_neg = a
                        b_neg = b
                    n_neg += 1
            if a == 0:
                break
            a = (a - 1) & b
    return np.array([n_pos, a_pos, b_pos, n_neg, a_neg, b_neg], dtype=np.int64)


def disjoint_violations(const double[::1] values, int sense, double tol):
    """Check v(A|B) >= v(A)+v(B) (sense=+1) or <= (sense=-1) on disjoint A < B.

    Returns int64 array [count, a, b] with the first offending pair or -1.
    """
    cdef Py_ssize_t size = values.shape[0]
    cdef long long full = size - 1
    cdef long long a, b, comp
    cdef long long count = 0, fa = -1, fb = -1
    cdef double lhs, rhs
    for a in range(size):
        comp = full ^ a
        b = comp
        while True:
            if b > a:
                lhs = values[a | b]
                rhs = values[a] + values[b]
                if (sense > 0 and lhs < rhs - tol) or (sense < 0 and lhs > rhs + tol):
                    if count == 0:
                        fa = a
                        fb = b
                    count += 1
            if b == 0:
                break
            b = (b - 1) & comp
    return np.array([count, fa, fb], dtype=np.int64)
