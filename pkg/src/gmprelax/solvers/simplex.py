"""Dense two-phase revised simplex with a uniform status contract.

Problems are given as

    minimize c.x  subject to  a_eq x = b_eq,  a_ub x <= b_ub,  x >= lb,

where lb entries may be -inf (free variables are split internally).
The driver converts to standard form, runs phase 1 with artificial
variables, removes redundant rows, and prices the original objective in
phase 2.  Every returned status carries residual numbers so callers
can assert on them instead of trusting the label:

* optimal: primal/dual residuals and the duality gap are reported;
* infeasible: a Farkas certificate (y_eq, y_ub) with its independently
  computed violation numbers;
* unbounded: an improving ray in the original variables.

The pivot loop itself lives in a compiled Cython kernel when available,
with a NumPy implementation of the same rules as fallback; set
GMPRELAX_BACKEND=py to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import _simplex_py

try:  # compiled kernel is optional
    from . import _simplex_cy
except ImportError:  # pragma: no cover - depends on build environment
    _simplex_cy = None


def _select_backend():
    forced = os.environ.get("GMPRELAX_BACKEND", "auto").lower()
    if forced == "py":
        return _simplex_py, "python"
    if forced == "c":
        if _simplex_cy is None:
            raise ImportError(
                "GMPRELAX_BACKEND=c requested but the compiled kernel is not built"
            )
        return _simplex_cy, "cython"
    if _simplex_cy is not None:
        return _simplex_cy, "cython"
    return _simplex_py, "python"


_KERNEL, KERNEL_NAME = _select_backend()


def set_kernel(name: str):
    """Switch the pivot kernel at runtime ('cython' | 'python')."""
    global _KERNEL, KERNEL_NAME
    if name == "python":
        _KERNEL, KERNEL_NAME = _simplex_py, "python"
    elif name == "cython":
        if _simplex_cy is None:
            raise ValueError("compiled kernel not available")
        _KERNEL, KERNEL_NAME = _simplex_cy, "cython"
    else:
        raise ValueError(f"unknown kernel {name!r}")


def available_kernels() -> list[str]:
    return ["python"] + (["cython"] if _simplex_cy is not None else [])


@dataclass
class LinearProgram:
    """min c.x s.t. a_eq x = b_eq, a_ub x <= b_ub, x >= lb."""

    c: np.ndarray
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    a_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    lb: np.ndarray | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        n = self.c.shape[0]
        if self.a_eq is None:
            self.a_eq = np.zeros((0, n))
            self.b_eq = np.zeros(0)
        self.a_eq = np.ascontiguousarray(self.a_eq, dtype=float)
        self.b_eq = np.asarray(self.b_eq, dtype=float)
        if self.a_ub is None:
            self.a_ub = np.zeros((0, n))
            self.b_ub = np.zeros(0)
        self.a_ub = np.ascontiguousarray(self.a_ub, dtype=float)
        self.b_ub = np.asarray(self.b_ub, dtype=float)
        if self.lb is None:
            self.lb = np.zeros(n)
        self.lb = np.asarray(self.lb, dtype=float)
        if self.a_eq.shape != (self.b_eq.shape[0], n):
            raise ValueError("a_eq shape inconsistent with c/b_eq")
        if self.a_ub.shape != (self.b_ub.shape[0], n):
            raise ValueError("a_ub shape inconsistent with c/b_ub")
        if self.lb.shape != (n,):
            raise ValueError("lb has wrong length")
        for name, arr in (("c", self.c), ("a_eq", self.a_eq), ("b_eq", self.b_eq),
                          ("a_ub", self.a_ub), ("b_ub", self.b_ub)):
            if arr.size and not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")
        if self.lb.size and np.any(np.isposinf(self.lb)):
            raise ValueError("lb contains +inf")

    @property
    def n(self) -> int:
        return self.c.shape[0]


@dataclass
class LpResult:
    status: str
    objective: float | None = None
    x: np.ndarray | None = None
    y_eq: np.ndarray | None = None
    y_ub: np.ndarray | None = None
    reduced_costs: np.ndarray | None = None
    residuals: dict = field(default_factory=dict)
    farkas: dict | None = None
    ray: np.ndarray | None = None
    iterations: int = 0
    backend: str = ""


class _SingularBasis(Exception):
    pass


def _run_phase(kernel, a, b, c, basis, binv, xb, n_real, tol, max_iter):
    opt_tol = min(tol, 1e-9)
    piv_tol = 1e-9
    try:
        return kernel.pivot_loop(a, b, c, basis, binv, xb, n_real, opt_tol,
                                 piv_tol, max_iter)
    except (ZeroDivisionError, np.linalg.LinAlgError) as exc:
        raise _SingularBasis(str(exc)) from exc


def lp_solve(lp: LinearProgram, tol: float = 1e-8, max_iter: int | None = None) -> LpResult:
    """Solve the LP; statuses: optimal | infeasible | unbounded | numerical-failure."""
    kernel, backend = _KERNEL, KERNEL_NAME
    n = lp.n
    me, mu = lp.a_eq.shape[0], lp.a_ub.shape[0]
    m = me + mu

    free = np.isneginf(lp.lb)
    shift = np.where(free, 0.0, lp.lb)

    # standard-form columns: one per finite-lb variable, a +/- pair per free one
    col_var = []  # (variable index, sign)
    for j in range(n):
        col_var.append((j, 1.0))
        if free[j]:
            col_var.append((j, -1.0))
    n_std = len(col_var) + mu

    if m == 0:
        return _solve_unconstrained(lp, free, backend)

    a_rows = np.vstack([lp.a_eq, lp.a_ub])
    b_rows = np.concatenate([lp.b_eq, lp.b_ub]) - a_rows @ shift
    cols = np.empty((m, n_std))
    c_std = np.zeros(n_std)
    for k, (j, sgn) in enumerate(col_var):
        cols[:, k] = sgn * a_rows[:, j]
        c_std[k] = sgn * lp.c[j]
    cols[:, len(col_var):] = 0.0
    for i in range(mu):
        cols[me + i, len(col_var) + i] = 1.0

    flip = np.where(b_rows < 0, -1.0, 1.0)
    a_std = np.ascontiguousarray(cols * flip[:, None])
    b_std = b_rows * flip

    max_iter = max_iter or 50 * (m + n_std) + 1000

    # phase 1
    a1 = np.ascontiguousarray(np.hstack([a_std, np.eye(m)]))
    c1 = np.concatenate([np.zeros(n_std), np.ones(m)])
    basis = np.arange(n_std, n_std + m, dtype=np.int64)
    binv = np.eye(m)
    xb = b_std.copy()
    try:
        status1, it1, _ = _run_phase(kernel, a1, b_std, c1, basis, binv, xb,
                                     n_std + m, tol, max_iter)
    except _SingularBasis as exc:
        return LpResult(status="numerical-failure", residuals={"error": str(exc)},
                        backend=backend)
    iterations = it1
    if status1 == _simplex_py.ITERATION_LIMIT:
        return LpResult(status="numerical-failure", iterations=iterations,
                        residuals={"phase": 1.0}, backend=backend)
    phase1_obj = float(c1[basis] @ xb)
    scale = 1.0 + float(np.abs(b_std).max(initial=0.0))
    if phase1_obj > tol * scale:
        return _infeasible_result(lp, a_std, b_std, c1, basis, binv, flip, me, mu,
                                  tol, iterations, backend)

    keep, basis, binv, xb, a_std, b_std, flip_kept = _drop_redundant_rows(
        a1, a_std, b_std, basis, binv, xb, n_std, flip)
    m2 = a_std.shape[0]

    # phase 2 on the reduced, artificial-free problem
    try:
        status2, it2, enter = _run_phase(kernel, a_std, b_std, c_std, basis, binv,
                                         xb, n_std, tol, max_iter)
    except _SingularBasis as exc:
        return LpResult(status="numerical-failure", iterations=iterations,
                        residuals={"error": str(exc)}, backend=backend)
    iterations += it2
    if status2 == _simplex_py.ITERATION_LIMIT:
        return LpResult(status="numerical-failure", iterations=iterations,
                        residuals={"phase": 2.0}, backend=backend)
    if status2 == _simplex_py.UNBOUNDED:
        return _unbounded_result(lp, a_std, basis, binv, enter, col_var, free,
                                 iterations, backend)

    # assemble optimal point and duals in the original coordinates
    x_std = np.zeros(n_std)
    x_std[basis] = xb
    x = shift.copy()
    for k, (j, sgn) in enumerate(col_var):
        x[j] += sgn * x_std[k]
    y_rows = np.zeros(me + mu)
    y_rows[keep] = (c_std[basis] @ binv) * flip_kept
    y_eq, y_ub = y_rows[:me], y_rows[me:]
    # mild dual cleanup: an upper-bound row multiplier is nonpositive at optimality
    y_ub = np.minimum(y_ub, 0.0)

    reduced = lp.c - lp.a_eq.T @ y_eq - lp.a_ub.T @ y_ub
    obj = float(lp.c @ x)
    dual_obj = float(lp.b_eq @ y_eq + lp.b_ub @ y_ub
                     + np.sum(np.where(free, 0.0, lp.lb) * np.maximum(reduced, 0.0)))
    res = {
        "primal_eq": _max_abs(lp.a_eq @ x - lp.b_eq),
        "primal_ub": _max_pos(lp.a_ub @ x - lp.b_ub),
        "bounds": _max_pos(np.where(free, -np.inf, lp.lb) - x),
        "dual": max(_max_pos(-reduced[~free]) if (~free).any() else 0.0,
                    _max_abs(reduced[free]) if free.any() else 0.0),
        "gap": abs(obj - dual_obj),
    }
    status = "optimal"
    if (res["primal_eq"] > tol * scale or res["primal_ub"] > tol * scale
            or res["dual"] > tol * (1.0 + _max_abs(lp.c))
            or res["gap"] > tol * (1.0 + abs(obj))):
        status = "numerical-failure"
    return LpResult(status=status, objective=obj, x=x, y_eq=y_eq, y_ub=y_ub,
                    reduced_costs=reduced, residuals=res, iterations=iterations,
                    backend=backend)


def _max_abs(v) -> float:
    v = np.asarray(v, dtype=float)
    return float(np.abs(v).max()) if v.size else 0.0


def _max_pos(v) -> float:
    v = np.asarray(v, dtype=float)
    return float(np.maximum(v, 0.0).max()) if v.size else 0.0


def _solve_unconstrained(lp, free, backend):
    """No rows: minimize c.x over the bound box alone."""
    bad_free = free & (lp.c != 0)
    bad_lb = (~free) & (lp.c < 0)
    if bad_free.any() or bad_lb.any():
        ray = np.zeros(lp.n)
        j = int(np.flatnonzero(bad_free | bad_lb)[0])
        ray[j] = -np.sign(lp.c[j]) if free[j] else 1.0
        return LpResult(status="unbounded", ray=ray, backend=backend,
                        residuals={"ray_descent": float(lp.c @ ray)})
    x = np.where(free, 0.0, lp.lb)
    return LpResult(status="optimal", objective=float(lp.c @ x), x=x,
                    y_eq=np.zeros(0), y_ub=np.zeros(0), reduced_costs=lp.c.copy(),
                    residuals={"primal_eq": 0.0, "primal_ub": 0.0, "bounds": 0.0,
                               "dual": 0.0, "gap": 0.0},
                    backend=backend)


def _infeasible_result(lp, a_std, b_std, c1, basis, binv, flip, me, mu, tol,
                       iterations, backend):
    """Farkas certificate from the phase-1 duals."""
    y1 = c1[basis] @ binv
    # certificate in original row space (undo the sign flips)
    y_rows = y1 * flip
    y_eq, y_ub = y_rows[:me], y_rows[me:]
    # independent residual check: A_eq'u + A_ub'v <= 0 on x-space columns,
    # v <= 0, and (b_eq.u + b_ub.v) - mass from lb shifts > 0
    combo = lp.a_eq.T @ y_eq + lp.a_ub.T @ y_ub
    free = np.isneginf(lp.lb)
    viol = max(
        _max_pos(combo[~free]) if (~free).any() else 0.0,
        _max_abs(combo[free]) if free.any() else 0.0,
        _max_pos(y_ub),
    )
    shift = np.where(free, 0.0, lp.lb)
    value = float(lp.b_eq @ y_eq + lp.b_ub @ y_ub - combo @ shift)
    farkas = {"y_eq": y_eq, "y_ub": y_ub, "violation": viol, "value": value}
    return LpResult(status="infeasible", farkas=farkas, iterations=iterations,
                    residuals={"farkas_violation": viol, "farkas_value": value},
                    backend=backend)


def _drop_redundant_rows(a1, a_std, b_std, basis, binv, xb, n_std, flip):
    """Pivot artificials out of the basis; drop rows where that is impossible."""
    m = a_std.shape[0]
    redundant = []
    for l in range(m):
        if basis[l] < n_std:
            continue
        row = binv[l] @ a_std
        cand = np.flatnonzero(np.abs(row) > 1e-9)
        cand = [j for j in cand if j not in set(basis.tolist())]
        if not cand:
            redundant.append(l)
            continue
        enter = int(cand[0])
        w = binv @ a_std[:, enter]
        piv = w[l]
        factors = w / piv
        factors[l] = 0.0
        binv -= np.outer(factors, binv[l])
        xb -= factors * xb[l]
        binv[l] /= piv
        xb[l] /= piv
        np.maximum(xb, 0.0, out=xb)
        basis[l] = enter
    keep = np.array([i for i in range(m) if i not in set(redundant)], dtype=int)
    if len(keep) < m:
        a_new = np.ascontiguousarray(a_std[keep])
        b_new = b_std[keep]
        basis_new = basis[keep]
        binv_new = np.linalg.inv(a_new[:, basis_new])
        xb_new = np.maximum(binv_new @ b_new, 0.0)
        return keep, basis_new, binv_new, xb_new, a_new, b_new, flip[keep]
    return keep, basis, binv, xb, a_std, b_std, flip


def _unbounded_result(lp, a_std, basis, binv, enter, col_var, free, iterations,
                      backend):
    """Map the improving standard-form ray back to the original variables."""
    m = a_std.shape[0]
    d_std = np.zeros(a_std.shape[1])
    d_std[enter] = 1.0
    w = binv @ a_std[:, enter]
    d_std[basis] = -w
    ray = np.zeros(lp.n)
    for k, (j, sgn) in enumerate(col_var):
        ray[j] += sgn * d_std[k]
    res = {
        "ray_eq": _max_abs(lp.a_eq @ ray),
        "ray_ub": _max_pos(lp.a_ub @ ray),
        "ray_descent": float(lp.c @ ray),
    }
    return LpResult(status="unbounded", ray=ray, iterations=iterations,
                    residuals=res, backend=backend)
