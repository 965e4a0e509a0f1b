"""Pure NumPy revised-simplex pivot loop.

Same contract as the Cython kernel in ``_simplex_cy.pyx``; which one is
used is decided at import time in ``simplex.py``.  The loop maintains
an explicit basis inverse updated by Gauss-Jordan pivots, with periodic
reinversion to bound drift.

Pivot rules are fixed so results are deterministic: Dantzig pricing
(most negative reduced cost, lowest column index on ties) with a
permanent switch to Bland's rule (lowest eligible column index) after a
stretch of non-improving iterations; the leaving row is the minimum
ratio, ties broken by the smallest basis variable index.
"""

import numpy as np

OPTIMAL = 0
UNBOUNDED = 1
ITERATION_LIMIT = 2

REFACTOR_EVERY = 100
STALL_LIMIT = 50


def _reinvert(a, b, basis, binv, xb):
    binv[:, :] = np.linalg.inv(a[:, basis])
    xb[:] = binv @ b
    np.maximum(xb, 0.0, out=xb)


def pivot_loop(a, b, c, basis, binv, xb, n_real, opt_tol, piv_tol, max_iter):
    """Iterate primal simplex pivots in place.

    ``a`` is the full (m, n) column matrix; columns with index >=
    ``n_real`` are never priced (artificials).  ``basis``, ``binv`` and
    ``xb`` must describe a primal-feasible basis on entry and are
    updated in place.  Returns (status, iterations, entering) where
    ``entering`` is the unbounded column when status is UNBOUNDED,
    else -1.
    """
    m, n = a.shape
    bland = False
    stall = 0
    last_obj = np.inf
    niter = 0
    while niter < max_iter:
        niter += 1
        cb = c[basis]
        y = cb @ binv
        reduced = c[:n_real] - y @ a[:, :n_real]
        in_basis = np.zeros(n_real, dtype=bool)
        in_basis[basis[basis < n_real]] = True
        reduced[in_basis] = 0.0
        eligible = np.flatnonzero(reduced < -opt_tol)
        if eligible.size == 0:
            return OPTIMAL, niter, -1
        if bland:
            enter = int(eligible[0])
        else:
            enter = int(eligible[np.argmin(reduced[eligible])])
        w = binv @ a[:, enter]
        pos = np.flatnonzero(w > piv_tol)
        if pos.size == 0:
            return UNBOUNDED, niter, enter
        ratios = xb[pos] / w[pos]
        rmin = float(ratios.min())
        if bland:
            # Bland needs the exact minimum-ratio set (degenerate ratios
            # are exact zeros); pick the smallest basis variable index
            near = pos[ratios == rmin]
            leave = int(near[np.argmin(basis[near])])
        else:
            # stability: largest pivot element among the ratio near-ties
            near = pos[ratios <= rmin + piv_tol * (1.0 + abs(rmin))]
            leave = int(near[np.argmax(w[near])])

        piv = w[leave]
        factors = w / piv
        factors[leave] = 0.0
        binv -= np.outer(factors, binv[leave])
        xb -= factors * xb[leave]
        binv[leave] /= piv
        xb[leave] /= piv
        np.maximum(xb, 0.0, out=xb)
        basis[leave] = enter

        obj = float(c[basis] @ xb)
        if obj < last_obj - opt_tol * (1.0 + abs(last_obj)):
            stall = 0
            last_obj = obj
        else:
            stall += 1
            if stall >= STALL_LIMIT:
                bland = True
        if niter % REFACTOR_EVERY == 0:
            _reinvert(a, b, basis, binv, xb)
    return ITERATION_LIMIT, niter, -1
