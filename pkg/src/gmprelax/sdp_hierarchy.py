"""Moment-matrix semidefinite hierarchy over the unit sphere.

Level r works with one pseudo-moment variable y_alpha per monomial of
degree at most 2r (deduplicated: the matrix below is a linear function
of these variables, so entries indexed by the same monomial coincide by
construction).  The constraints are

* the prescribed moment rows   sum_alpha f_i,alpha y_alpha = b_i,
* the mass bound               y_0 <= 1,
* the moment matrix            M(y)[i,j] = y_(alpha_i + alpha_j) psd,
  indexed by the monomial basis of degree <= r,
* the sphere-ideal rows        y_alpha = sum_i y_(alpha + 2 e_i)
                               for |alpha| <= 2r - 2,

so pseudo-moments respect p == p * ||x||^2 on the sphere.  The full
monomial basis is kept; no reduction modulo the ideal is applied to the
matrix index set, matching the displayed relaxation.  One consequence
is that the feasible moment matrices are singular for r >= 2 (vectors
of polynomials divisible by 1 - ||x||^2 lie in their kernel), which the
interior-point solver is built to tolerate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .model import GmpInstance, MomentVector
from .polynomials import (
    SPHERE,
    Monomial,
    Polynomial,
    monomial_index_set,
)
from .reports import DualInfo, LevelReport
from .solvers import SemidefiniteProgram, sdp_solve


@dataclass
class MomentMatrixIndex:
    """Monomial basis of degree <= r and the map entry -> monomial."""

    level: int
    basis: list[Monomial]

    @classmethod
    def build(cls, n: int, r: int) -> "MomentMatrixIndex":
        return cls(level=r, basis=monomial_index_set(n, r))

    @property
    def size(self) -> int:
        return len(self.basis)

    def entry_monomial(self, i: int, j: int) -> Monomial:
        return tuple(a + b for a, b in zip(self.basis[i], self.basis[j]))


@dataclass
class RelaxationProblemSDP:
    """Assembled level-r SDP plus the monomial/variable correspondence."""

    level: int
    instance: GmpInstance
    index: MomentMatrixIndex
    variables: list[Monomial]
    variable_of: dict[Monomial, int]
    sdp: SemidefiniteProgram
    n_moment_rows: int
    n_ideal_rows: int

    def moment_matrix(self, y: np.ndarray) -> np.ndarray:
        size = self.index.size
        m = np.empty((size, size))
        for i in range(size):
            for j in range(i, size):
                v = y[self.variable_of[self.index.entry_monomial(i, j)]]
                m[i, j] = m[j, i] = v
        return m

    def to_json_dict(self) -> dict:
        """Documented JSON dump: block dimension, per-row coefficient
        matrices in upper-triangle triplet form, objective vector."""
        from .reports import format_number

        def row_triplets(row):
            return [
                [int(j), format_number(v)] for j, v in enumerate(row) if v != 0.0
            ]

        return {
            "level": self.level,
            "block_dim": self.index.size,
            "variables": [list(a) for a in self.variables],
            "objective": [format_number(v) for v in self.sdp.c],
            "eq_rows": [row_triplets(r) for r in self.sdp.a_eq],
            "eq_rhs": [format_number(v) for v in self.sdp.b_eq],
            "ub_rows": [row_triplets(r) for r in self.sdp.a_ub],
            "ub_rhs": [format_number(v) for v in self.sdp.b_ub],
            "psd_entry_variable": [
                [i, j, self.variable_of[self.index.entry_monomial(i, j)]]
                for i in range(self.index.size)
                for j in range(i, self.index.size)
            ],
            "row_labels": (
                [f"moment[{i}]" for i in range(self.n_moment_rows)]
                + [f"ideal[{i}]" for i in range(self.n_ideal_rows)]
            ),
        }


def build_sdp(inst: GmpInstance, r: int) -> RelaxationProblemSDP:
    """Assemble the level-r moment relaxation for a sphere instance."""
    if inst.domain.kind != SPHERE:
        raise ValueError("SDP hierarchy requires a sphere instance")
    if 2 * r < inst.degree:
        raise ValueError(
            f"level {r} too small: moment degree 2r={2 * r} below instance "
            f"degree {inst.degree}"
        )
    n = inst.n
    index = MomentMatrixIndex.build(n, r)
    variables = monomial_index_set(n, 2 * r)
    variable_of = {a: k for k, a in enumerate(variables)}
    nx = len(variables)

    c = np.zeros(nx)
    for alpha, coef in inst.objective.terms.items():
        c[variable_of[alpha]] = float(coef)

    ideal_index = monomial_index_set(n, 2 * r - 2)
    a_eq = np.zeros((inst.m + len(ideal_index), nx))
    b_eq = np.zeros(inst.m + len(ideal_index))
    for i, (poly, rhs) in enumerate(inst.constraints):
        if poly.degree > 2 * r:
            raise ValueError(
                f"constraint {i} has degree {poly.degree} > 2r = {2 * r}"
            )
        for alpha, coef in poly.terms.items():
            a_eq[i, variable_of[alpha]] = float(coef)
        b_eq[i] = float(rhs)
    for k, alpha in enumerate(ideal_index):
        row = inst.m + k
        a_eq[row, variable_of[alpha]] += 1.0
        for i in range(n):
            up = tuple(alpha[j] + (2 if j == i else 0) for j in range(n))
            a_eq[row, variable_of[up]] -= 1.0

    a_ub = np.zeros((1, nx))
    a_ub[0, variable_of[tuple([0] * n)]] = 1.0
    b_ub = np.ones(1)

    size = index.size
    fi = np.zeros((nx, size, size))
    for i in range(size):
        for j in range(size):
            fi[variable_of[index.entry_monomial(i, j)], i, j] = 1.0

    sdp = SemidefiniteProgram(
        c=c,
        psd_f0=np.zeros((size, size)),
        psd_fi=fi,
        a_eq=a_eq,
        b_eq=b_eq,
        a_ub=a_ub,
        b_ub=b_ub,
    )
    return RelaxationProblemSDP(
        level=r,
        instance=inst,
        index=index,
        variables=variables,
        variable_of=variable_of,
        sdp=sdp,
        n_moment_rows=inst.m,
        n_ideal_rows=len(ideal_index),
    )


def sphere_ideal_residual(prob: RelaxationProblemSDP, y: np.ndarray) -> float:
    """Max violation of y_alpha = sum_i y_(alpha + 2 e_i), |alpha| <= 2r-2."""
    n = prob.instance.n
    worst = 0.0
    for alpha in monomial_index_set(n, 2 * prob.level - 2):
        acc = 0.0
        for i in range(n):
            up = tuple(alpha[j] + (2 if j == i else 0) for j in range(n))
            acc += y[prob.variable_of[up]]
        worst = max(worst, abs(y[prob.variable_of[alpha]] - acc))
    return worst


def solve_level_sdp(inst: GmpInstance, r: int, tol: float = 1e-8) -> LevelReport:
    """Solve level r and package bound, moments, duals, and residuals."""
    start = time.perf_counter()
    prob = build_sdp(inst, r)
    res = sdp_solve(prob.sdp, tol=tol)
    elapsed = time.perf_counter() - start
    caveats = [
        "assumes a dual optimal solution exists for the moment problem; "
        "not verifiable from the instance data"
    ]
    if res.status != "optimal":
        return LevelReport(level=r, hierarchy="sdp", status=res.status,
                           residuals=res.residuals, caveats=caveats,
                           wall_time_s=elapsed)
    y = res.x
    values = {a: float(y[k]) for a, k in prob.variable_of.items()}
    moments = MomentVector(level=r, n=inst.n, kind=SPHERE, values=values)
    mmat = prob.moment_matrix(y)
    residuals = dict(res.residuals)
    residuals["moment_matrix_min_eig"] = float(np.linalg.eigvalsh(mmat).min())
    residuals["sphere_ideal_max"] = sphere_ideal_residual(prob, y)
    ybar = tuple(-float(v) for v in res.y_eq[: inst.m])
    t = max(0.0, float(res.z_ub[0]))
    return LevelReport(level=r, hierarchy="sdp", status=res.status,
                       bound=float(res.objective), moments=moments,
                       duals=DualInfo(ybar=ybar, t=t), residuals=residuals,
                       caveats=caveats, wall_time_s=elapsed)


def sos_pairing_check(moment_matrix: np.ndarray, gram_matrix: np.ndarray) -> float:
    """Trace inner product <A, M>; nonnegative for psd A against a psd
    moment matrix, which is how sums of squares pair with pseudo-moments."""
    a = np.asarray(gram_matrix, dtype=float)
    m = np.asarray(moment_matrix, dtype=float)
    if a.shape != m.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {m.shape}")
    return float(np.tensordot(a, m))


def sphere_rate_probe(inst: GmpInstance, levels: list[int], oracle_value: float,
                      tol: float = 1e-8) -> list[dict]:
    """Table of (r, gap, gap * r^2) against a brute-force oracle value.

    Precondition from the convergence theorem: half-degree d <= n.  The
    output is descriptive; no numeric constant is asserted because the
    theorem's constants are not specified.
    """
    d = inst.half_degree
    if d > inst.n:
        raise ValueError(
            f"rate probe requires half-degree d={d} <= n={inst.n}"
        )
    rows = []
    for r in levels:
        report = solve_level_sdp(inst, r, tol=tol)
        gap = None if report.bound is None else oracle_value - report.bound
        rows.append({
            "level": r,
            "status": report.status,
            "bound": report.bound,
            "gap": gap,
            "gap_r2": None if gap is None else gap * r * r,
        })
    return rows
