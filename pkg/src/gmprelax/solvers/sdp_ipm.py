"""Primal-dual interior-point solver for small dense SDPs.

Problems carry a vector variable x with one PSD matrix constraint in
LMI form plus scalar linear rows:

    minimize c.x
    s.t.     a_eq x = b_eq
             a_ub x <= b_ub
             S(x) = F0 + sum_i x_i Fi  is positive semidefinite.

Internally this is the standard conic pair over R_+^l x S_+^p: slacks
(s_l, S) with s_l = b_ub - a_ub x and S = S(x).  The algorithm is a
Mehrotra predictor-corrector with Nesterov-Todd scaling and dense
factorizations, sized for blocks up to a couple hundred; robustness is
preferred over speed throughout.

Moment matrices of measures supported on a variety are singular, so the
PSD constraint of a hierarchy relaxation has no strictly feasible
point; the iterates stay interior while the limit sits on the boundary.
The implementation tolerates that regime via least-squares KKT solves
with a tiny ridge, and reports the final residuals whatever the status.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible"
STATUS_UNBOUNDED = "unbounded"
STATUS_NUMERICAL = "numerical-failure"


def svec_indices(p: int):
    return [(i, j) for i in range(p) for j in range(i, p)]


def svec(mat: np.ndarray) -> np.ndarray:
    """Scaled upper-triangle vectorization: <A,B> = svec(A).svec(B)."""
    p = mat.shape[0]
    out = np.empty(p * (p + 1) // 2)
    k = 0
    sq2 = np.sqrt(2.0)
    for i in range(p):
        out[k] = mat[i, i]
        k += 1
        for j in range(i + 1, p):
            out[k] = mat[i, j] * sq2
            k += 1
    return out


def smat(vec: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros((p, p))
    k = 0
    inv_sq2 = 1.0 / np.sqrt(2.0)
    for i in range(p):
        out[i, i] = vec[k]
        k += 1
        for j in range(i + 1, p):
            out[i, j] = out[j, i] = vec[k] * inv_sq2
            k += 1
    return out


@dataclass
class SemidefiniteProgram:
    """LMI-form SDP; see module docstring for the optimization problem."""

    c: np.ndarray
    psd_f0: np.ndarray
    psd_fi: np.ndarray  # (n, p, p)
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    a_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        n = self.c.shape[0]
        self.psd_f0 = np.asarray(self.psd_f0, dtype=float)
        self.psd_fi = np.asarray(self.psd_fi, dtype=float)
        p = self.psd_f0.shape[0]
        if self.psd_f0.shape != (p, p):
            raise ValueError("psd_f0 must be square")
        if self.psd_fi.shape != (n, p, p):
            raise ValueError("psd_fi must have shape (n, p, p)")
        for name, m in [("psd_f0", self.psd_f0)] + [
            (f"psd_fi[{i}]", self.psd_fi[i]) for i in range(n)
        ]:
            if not np.allclose(m, m.T, atol=1e-12):
                raise ValueError(f"{name} is not symmetric")
        if self.a_eq is None:
            self.a_eq = np.zeros((0, n))
            self.b_eq = np.zeros(0)
        if self.a_ub is None:
            self.a_ub = np.zeros((0, n))
            self.b_ub = np.zeros(0)
        self.a_eq = np.asarray(self.a_eq, dtype=float)
        self.b_eq = np.asarray(self.b_eq, dtype=float)
        self.a_ub = np.asarray(self.a_ub, dtype=float)
        self.b_ub = np.asarray(self.b_ub, dtype=float)
        if self.a_eq.shape != (self.b_eq.shape[0], n):
            raise ValueError("a_eq shape inconsistent")
        if self.a_ub.shape != (self.b_ub.shape[0], n):
            raise ValueError("a_ub shape inconsistent")

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def block_dim(self) -> int:
        return self.psd_f0.shape[0]

    @classmethod
    def from_primal_form(cls, c_mat: np.ndarray, rows: list) -> "SemidefiniteProgram":
        """Standard primal form: min <C,X>, <A_k,X> sense b_k, X psd.

        ``rows`` holds (A_k, sense, b_k) with sense '==' or '<='.  The
        matrix variable becomes the vector of svec coordinates, and the
        PSD constraint is the identity LMI on those coordinates.
        """
        c_mat = np.asarray(c_mat, dtype=float)
        p = c_mat.shape[0]
        idx = svec_indices(p)
        nx = len(idx)
        fi = np.zeros((nx, p, p))
        inv_sq2 = 1.0 / np.sqrt(2.0)
        for k, (i, j) in enumerate(idx):
            if i == j:
                fi[k, i, i] = 1.0
            else:
                fi[k, i, j] = fi[k, j, i] = inv_sq2
        a_eq, b_eq, a_ub, b_ub = [], [], [], []
        for mat, sense, rhs in rows:
            row = svec(np.asarray(mat, dtype=float))
            if sense == "==":
                a_eq.append(row)
                b_eq.append(rhs)
            elif sense == "<=":
                a_ub.append(row)
                b_ub.append(rhs)
            else:
                raise ValueError(f"unknown sense {sense!r}")
        return cls(
            c=svec(c_mat),
            psd_f0=np.zeros((p, p)),
            psd_fi=fi,
            a_eq=np.array(a_eq) if a_eq else None,
            b_eq=np.array(b_eq) if b_eq else None,
            a_ub=np.array(a_ub) if a_ub else None,
            b_ub=np.array(b_ub) if b_ub else None,
        )


@dataclass
class SdpResult:
    status: str
    objective: float | None = None
    x: np.ndarray | None = None
    s_psd: np.ndarray | None = None   # S(x) at the reported point
    z_psd: np.ndarray | None = None   # dual matrix
    y_eq: np.ndarray | None = None
    z_ub: np.ndarray | None = None
    residuals: dict = field(default_factory=dict)
    iterations: int = 0


def _drop_dependent_eq_rows(a: np.ndarray, b: np.ndarray, tol: float = 1e-10):
    """Greedy row filter via modified Gram-Schmidt; detects inconsistency."""
    me = a.shape[0]
    if me == 0:
        return a, b, None
    kept_rows: list[np.ndarray] = []
    kept_b: list[float] = []
    basis: list[np.ndarray] = []
    for i in range(me):
        v = a[i].astype(float).copy()
        rhs = float(b[i])
        for q in basis:
            v -= (q @ v) * q
        norm_orig = np.linalg.norm(a[i]) + 1.0
        if np.linalg.norm(v) > tol * norm_orig:
            basis.append(v / np.linalg.norm(v))
            kept_rows.append(a[i])
            kept_b.append(rhs)
        else:
            # dependent row: consistent only if the rhs matches the projection
            if kept_rows:
                sol, *_ = np.linalg.lstsq(np.array(kept_rows).T, a[i], rcond=None)
                predicted = float(np.array(kept_b) @ sol)
            else:
                predicted = 0.0
            if abs(rhs - predicted) > 1e-7 * (1.0 + abs(rhs)):
                return None, None, f"equality row {i} inconsistent with earlier rows"
    return np.array(kept_rows), np.array(kept_b), None


def _nt_scaling_psd(s_mat: np.ndarray, z_mat: np.ndarray):
    """Return (r, rinv, lam) with lam = rinv S rinv.T = r.T Z r, diagonal."""
    ls = np.linalg.cholesky(s_mat)
    lz = np.linalg.cholesky(z_mat)
    u, sig, vt = np.linalg.svd(lz.T @ ls)
    sig = np.maximum(sig, 1e-300)
    r = ls @ vt.T @ np.diag(sig ** -0.5)
    rinv = np.diag(sig ** 0.5) @ vt @ np.linalg.inv(ls)
    return r, rinv, sig


def _psd_max_step(chol_lower: np.ndarray, delta: np.ndarray) -> float:
    """Largest t with M + t*Delta psd, given M = L L^T."""
    linv_delta = np.linalg.solve(chol_lower, delta)
    inner = np.linalg.solve(chol_lower, linv_delta.T)
    w = np.linalg.eigvalsh(0.5 * (inner + inner.T))
    mn = float(w.min())
    if mn >= 0:
        return np.inf
    return 1.0 / (-mn)


def sdp_solve(sdp: SemidefiniteProgram, tol: float = 1e-8,
              max_iter: int = 200) -> SdpResult:
    """Solve the SDP; statuses: optimal | infeasible | numerical-failure.

    Optimality means relative primal/dual residuals and duality gap all
    below tol.  Every status reports the final residual numbers.
    """
    n, p, ml = sdp.n, sdp.block_dim, sdp.a_ub.shape[0]
    a_eq, b_eq, err = _drop_dependent_eq_rows(sdp.a_eq, sdp.b_eq)
    if err is not None:
        return SdpResult(status=STATUS_INFEASIBLE, residuals={"presolve": err})
    me = a_eq.shape[0]
    f0, fi = sdp.psd_f0, sdp.psd_fi
    g_ub, h_ub = sdp.a_ub, sdp.b_ub
    c = sdp.c

    def s_of_x(x):
        return f0 + np.tensordot(x, fi, axes=(0, 0))

    # interior starting point
    x = np.zeros(n)
    scale0 = 1.0 + max(_norm_inf(f0), _norm_inf(h_ub))
    s_l = np.full(ml, scale0)
    z_l = np.ones(ml)
    s_m = np.eye(p) * scale0
    z_m = np.eye(p)
    y = np.zeros(me)
    nu = ml + p

    c_scale = 1.0 + _norm_inf(c)
    b_scale = 1.0 + max(_norm_inf(b_eq), _norm_inf(h_ub), _norm_inf(svec(f0)))

    best = None
    fi_svec = np.array([svec(fi[i]) for i in range(n)])  # (n, sp)

    for it in range(1, max_iter + 1):
        # residuals; conic convention: G_psd x + s = h_psd with G = -Fi, h = F0
        fz = fi_svec @ svec(z_m)               # [<Fi, Z>]_i
        rd = c + a_eq.T @ y + g_ub.T @ z_l - fz
        rp_eq = a_eq @ x - b_eq
        rp_l = g_ub @ x + s_l - h_ub
        rp_m = s_m - s_of_x(x)

        mu = (float(s_l @ z_l) + float(np.tensordot(s_m, z_m))) / nu
        pobj = float(c @ x)
        # conic dual objective: -b'y - h'z with h_psd = svec(F0), z_psd = svec(Z)
        dobj = float(-b_eq @ y - h_ub @ z_l - np.tensordot(f0, z_m))
        pres = max(_norm_inf(rp_eq), _norm_inf(rp_l), _norm_inf(svec(rp_m))) / b_scale
        dres = _norm_inf(rd) / c_scale
        gap = abs(pobj - dobj) / (1.0 + max(abs(pobj), abs(dobj)))

        metrics = {"primal_res": pres, "dual_res": dres, "rel_gap": gap, "mu": mu,
                   "primal_obj": pobj, "dual_obj": dobj}
        if best is None or max(pres, dres, gap) < best["score"]:
            best = {"score": max(pres, dres, gap), "x": x.copy(), "y": y.copy(),
                    "z_l": z_l.copy(), "z_m": z_m.copy(), "s_m": s_m.copy(),
                    "metrics": metrics}
        if pres <= tol and dres <= tol and gap <= tol:
            return _finish(STATUS_OPTIMAL, sdp, x, y, z_l, z_m, s_m, metrics, it)

        # infeasibility certificate: dual ray with negative value
        znorm = max(_norm_inf(z_l), _norm_inf(svec(z_m)), _norm_inf(y), 1e-300)
        cert_val = -(b_eq @ y + h_ub @ z_l + np.tensordot(f0, z_m)) / znorm
        cert_res = _norm_inf(a_eq.T @ y + g_ub.T @ z_l - fz) / znorm
        if cert_val > 1e-2 and cert_res < tol * 1e-2 and mu < tol:
            return SdpResult(status=STATUS_INFEASIBLE, residuals=metrics,
                             iterations=it)

        # NT scalings
        try:
            r, rinv, sig = _nt_scaling_psd(s_m, z_m)
            chol_s = np.linalg.cholesky(s_m)
            chol_z = np.linalg.cholesky(z_m)
        except np.linalg.LinAlgError:
            return _finish(STATUS_NUMERICAL, sdp, best["x"], best["y"],
                           best["z_l"], best["z_m"], best["s_m"],
                           best["metrics"], it)
        w_l = np.sqrt(s_l / z_l) if ml else np.zeros(0)
        lam_l = np.sqrt(s_l * z_l) if ml else np.zeros(0)

        tinv = rinv.T @ rinv  # T^{-1}; (W'W)^{-1} maps U -> T^{-1} U T^{-1}

        # H = G' (W'W)^{-1} G over both cones
        k_mats = np.array([tinv @ fi[i] @ tinv for i in range(n)])
        h_psd = np.einsum("iab,jab->ij", fi, k_mats)
        if ml:
            h_lin = g_ub.T @ (g_ub * (z_l / s_l)[:, None])
        else:
            h_lin = 0.0
        h_full = h_psd + h_lin

        kkt = np.zeros((n + me, n + me))
        kkt[:n, :n] = h_full
        kkt[:n, n:] = a_eq.T
        kkt[n:, :n] = a_eq

        def kkt_solve(rhs):
            mat = kkt.copy()
            ridge = 1e-13 * (1.0 + (np.abs(np.diag(h_full)).max() if n else 0.0))
            mat[:n, :n] += np.eye(n) * ridge
            mat[n:, n:] -= np.eye(me) * ridge
            try:
                return np.linalg.solve(mat, rhs)
            except np.linalg.LinAlgError:
                return np.linalg.lstsq(mat, rhs, rcond=None)[0]

        def direction(d_l, d_mat):
            """Newton step for scaled complementarity targets (d_l, D)."""
            # Gz-term of the reduced rhs: G'[W^{-1}d + (W'W)^{-1} rp_cone]
            t1_mat = rinv.T @ d_mat @ rinv + tinv @ rp_m @ tinv
            gz = -fi_svec @ svec(t1_mat)
            if ml:
                gz = gz + g_ub.T @ (d_l / w_l + (z_l / s_l) * rp_l)
            rhs = np.concatenate([-rd - gz, -rp_eq])
            sol = kkt_solve(rhs)
            dx, dy = sol[:n], sol[n:]
            gdx_mat = -np.tensordot(dx, fi, axes=(0, 0))
            dz_m = rinv.T @ d_mat @ rinv + tinv @ (rp_m + gdx_mat) @ tinv
            dz_m = 0.5 * (dz_m + dz_m.T)
            ds_m = -rp_m - gdx_mat
            if ml:
                dz_l = d_l / w_l + (z_l / s_l) * (rp_l + g_ub @ dx)
                ds_l = -rp_l - g_ub @ dx
            else:
                dz_l = np.zeros(0)
                ds_l = np.zeros(0)
            return dx, dy, ds_l, dz_l, ds_m, dz_m

        # predictor
        d_l_aff = -lam_l
        d_m_aff = -np.diag(sig)
        aff = direction(d_l_aff, d_m_aff)
        dx_a, dy_a, ds_l_a, dz_l_a, ds_m_a, dz_m_a = aff

        alpha_aff = 1.0
        if ml:
            for v, dv in ((s_l, ds_l_a), (z_l, dz_l_a)):
                neg = dv < 0
                if neg.any():
                    alpha_aff = min(alpha_aff, float((-v[neg] / dv[neg]).min()))
        alpha_aff = min(alpha_aff, _psd_max_step(chol_s, ds_m_a),
                        _psd_max_step(chol_z, dz_m_a))
        alpha_aff = min(alpha_aff, 1.0)

        mu_aff = (float((s_l + alpha_aff * ds_l_a) @ (z_l + alpha_aff * dz_l_a))
                  + float(np.tensordot(s_m + alpha_aff * ds_m_a,
                                       z_m + alpha_aff * dz_m_a))) / nu
        sigma = min(max((max(mu_aff, 0.0) / mu) ** 3, 1e-10), 0.999)

        # corrector targets in scaled space
        if ml:
            dsb = ds_l_a / w_l
            dzb = w_l * dz_l_a
            d_l = -lam_l + (sigma * mu - dsb * dzb) / lam_l
        else:
            d_l = np.zeros(0)
        a_sc = rinv @ ds_m_a @ rinv.T
        b_sc = r.T @ dz_m_a @ r
        cross = 0.5 * (a_sc @ b_sc + b_sc @ a_sc)
        denom = sig[:, None] + sig[None, :]
        d_m = -np.diag(sig) + 2.0 * (sigma * mu * np.eye(p) - cross) / denom

        dx, dy, ds_l, dz_l, ds_m, dz_m = direction(d_l, d_m)

        alpha = 1.0
        if ml:
            for v, dv in ((s_l, ds_l), (z_l, dz_l)):
                neg = dv < 0
                if neg.any():
                    alpha = min(alpha, float((-v[neg] / dv[neg]).min()))
        alpha = min(alpha, _psd_max_step(chol_s, ds_m),
                    _psd_max_step(chol_z, dz_m))
        alpha = min(0.99 * alpha, 1.0)
        if not np.isfinite(alpha) or alpha <= 1e-14:
            return _finish(STATUS_NUMERICAL, sdp, best["x"], best["y"],
                           best["z_l"], best["z_m"], best["s_m"],
                           best["metrics"], it)

        x = x + alpha * dx
        y = y + alpha * dy
        s_l = s_l + alpha * ds_l
        z_l = z_l + alpha * dz_l
        s_m = 0.5 * ((s_m + alpha * ds_m) + (s_m + alpha * ds_m).T)
        z_m = 0.5 * ((z_m + alpha * dz_m) + (z_m + alpha * dz_m).T)

    return _finish(STATUS_NUMERICAL, sdp, best["x"], best["y"], best["z_l"],
                   best["z_m"], best["s_m"], best["metrics"], max_iter)


def _finish(status, sdp, x, y, z_l, z_m, s_m, metrics, iterations):
    res = dict(metrics)
    res["psd_min_eig"] = float(np.linalg.eigvalsh(s_m).min()) if sdp.block_dim else 0.0
    return SdpResult(
        status=status,
        objective=float(sdp.c @ x),
        x=x,
        s_psd=s_m,
        z_psd=z_m,
        y_eq=y,
        z_ub=z_l,
        residuals=res,
        iterations=iterations,
    )


def _norm_inf(v) -> float:
    v = np.asarray(v, dtype=float)
    return float(np.abs(v).max()) if v.size else 0.0
