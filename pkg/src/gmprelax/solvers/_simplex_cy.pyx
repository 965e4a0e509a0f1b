# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled revised-simplex pivot loop.

Cython twin of ``_simplex_py.pivot_loop`` with identical pivot rules;
see that module for the algorithm description.  The payoff is on the
many small hierarchy LPs where per-iteration Python overhead dominates
the O(m*n) arithmetic.
"""

from libc.math cimport INFINITY, fabs
from libc.stdlib cimport calloc, free, malloc

OPTIMAL = 0
UNBOUNDED = 1
ITERATION_LIMIT = 2

DEF REFACTOR_EVERY = 100
DEF STALL_LIMIT = 50


cdef int _reinvert(double[:, ::1] a, double[::1] b, long[::1] basis,
                   double[:, ::1] binv, double[::1] xb) except -1:
    # Gauss-Jordan inversion of a[:, basis] with partial pivoting.
    cdef Py_ssize_t m = basis.shape[0]
    cdef Py_ssize_t i, j, k, piv_row
    cdef double piv, factor, tmp
    cdef double *work = <double *> malloc(m * 2 * m * sizeof(double))
    if work is NULL:
        raise MemoryError()
    try:
        for i in range(m):
            for j in range(m):
                work[i * 2 * m + j] = a[i, basis[j]]
                work[i * 2 * m + m + j] = 1.0 if i == j else 0.0
        for k in range(m):
            piv_row = k
            piv = fabs(work[k * 2 * m + k])
            for i in range(k + 1, m):
                if fabs(work[i * 2 * m + k]) > piv:
                    piv = fabs(work[i * 2 * m + k])
                    piv_row = i
            if piv == 0.0:
                raise ZeroDivisionError("singular basis matrix")
            if piv_row != k:
                for j in range(2 * m):
                    tmp = work[k * 2 * m + j]
                    work[k * 2 * m + j] = work[piv_row * 2 * m + j]
                    work[piv_row * 2 * m + j] = tmp
            piv = work[k * 2 * m + k]
            for j in range(2 * m):
                work[k * 2 * m + j] /= piv
            for i in range(m):
                if i == k:
                    continue
                factor = work[i * 2 * m + k]
                if factor != 0.0:
                    for j in range(2 * m):
                        work[i * 2 * m + j] -= factor * work[k * 2 * m + j]
        for i in range(m):
            for j in range(m):
                binv[i, j] = work[i * 2 * m + m + j]
        for i in range(m):
            tmp = 0.0
            for j in range(m):
                tmp += binv[i, j] * b[j]
            xb[i] = tmp if tmp > 0.0 else 0.0
    finally:
        free(work)
    return 0


def pivot_loop(double[:, ::1] a, double[::1] b, double[::1] c,
               long[::1] basis, double[:, ::1] binv, double[::1] xb,
               Py_ssize_t n_real, double opt_tol, double piv_tol,
               Py_ssize_t max_iter):
    """In-place primal simplex pivots; same contract as the pure twin."""
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t niter = 0, stall = 0
    cdef bint bland = False
    cdef Py_ssize_t i, j, enter, leave, old
    cdef double best, red, piv, ratio, rmin, factor, obj, last_obj
    cdef double *y = <double *> malloc(m * sizeof(double))
    cdef double *w = <double *> malloc(m * sizeof(double))
    cdef char *in_basis = <char *> calloc(n, sizeof(char))
    if y is NULL or w is NULL or in_basis is NULL:
        if y is not NULL:
            free(y)
        if w is not NULL:
            free(w)
        if in_basis is not NULL:
            free(in_basis)
        raise MemoryError()
    for i in range(m):
        in_basis[basis[i]] = 1
    last_obj = INFINITY
    try:
        while niter < max_iter:
            niter += 1
            for i in range(m):
                y[i] = 0.0
                for j in range(m):
                    y[i] += c[basis[j]] * binv[j, i]
            enter = -1
            best = -opt_tol
            for j in range(n_real):
                if in_basis[j]:
                    continue
                red = c[j]
                for i in range(m):
                    red -= y[i] * a[i, j]
                if red < best:
                    enter = j
                    if bland:
                        break
                    best = red
            if enter < 0:
                return OPTIMAL, niter, -1
            for i in range(m):
                w[i] = 0.0
                for j in range(m):
                    w[i] += binv[i, j] * a[j, enter]
            rmin = INFINITY
            for i in range(m):
                if w[i] > piv_tol:
                    ratio = xb[i] / w[i]
                    if ratio < rmin:
                        rmin = ratio
            if rmin == INFINITY:
                return UNBOUNDED, niter, enter
            leave = -1
            for i in range(m):
                if w[i] > piv_tol and xb[i] / w[i] <= rmin + piv_tol * (1.0 + fabs(rmin)):
                    if leave < 0:
                        leave = i
                    elif bland:
                        if basis[i] < basis[leave]:
                            leave = i
                    elif w[i] > w[leave]:
                        # stability: largest pivot element among the ties
                        leave = i
            piv = w[leave]
            for i in range(m):
                if i == leave:
                    continue
                factor = w[i] / piv
                if factor != 0.0:
                    for j in range(m):
                        binv[i, j] -= factor * binv[leave, j]
                    xb[i] -= factor * xb[leave]
                if xb[i] < 0.0:
                    xb[i] = 0.0
            for j in range(m):
                binv[leave, j] /= piv
            xb[leave] /= piv
            old = basis[leave]
            in_basis[old] = 0
            in_basis[enter] = 1
            basis[leave] = enter

            obj = 0.0
            for i in range(m):
                obj += c[basis[i]] * xb[i]
            if obj < last_obj - opt_tol * (1.0 + fabs(last_obj)):
                stall = 0
                last_obj = obj
            else:
                stall += 1
                if stall >= STALL_LIMIT:
                    bland = True
            if niter % REFACTOR_EVERY == 0:
                _reinvert(a, b, basis, binv, xb)
        return ITERATION_LIMIT, niter, -1
    finally:
        free(y)
        free(w)
        free(in_basis)
