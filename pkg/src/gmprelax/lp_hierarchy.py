"""RLT-style linear relaxation hierarchy over the simplex.

Level r of the hierarchy introduces one variable y_alpha per monomial
of degree at most r and imposes

* the prescribed moment rows  sum_alpha f_i,alpha y_alpha = b_i,
* the mass bound              y_0 <= 1,
* nonnegativity               y_alpha >= 0 for |alpha| <= r,
* the simplex-ideal rows      y_alpha = sum_i y_(alpha + e_i)
                              for |alpha| <= r - 1,

so pseudo-moments respect the relation p == p * (x_1+...+x_n) that
holds for true moments of measures on the simplex.  The optimal value
is a lower bound on the instance value, nondecreasing in r.

The module also hosts the coefficient hierarchy for minimizing a form
p of degree d over the simplex: p^(r) is the largest lambda such that
(x_1+...+x_n)^r (p - lambda (x_1+...+x_n)^d) has only nonnegative
coefficients.  Spelled out per degree-(r+d) exponent beta, each
coefficient gives one inequality

    C(r+d, beta) * lambda <= sum_{|alpha|=d} C(r, beta-alpha) p_alpha,

a one-variable LP whose optimum is the minimum of the right-hand sides
over the positive multinomials; ``dklp_value`` evaluates that minimum
in exact rational arithmetic.  ``equivalence_check`` confirms
p^(r) = f_LP^(r+d) for the single-constraint normalization instance,
which ties the two formulations together and is the main exactness
test of the LP layer.

The a-priori error bound: with dual multipliers (ybar, t) for the
moment rows and the mass bound, the gap val - f_LP^(r) is at most

    (sum_{i=0}^{m+1} B(y_i f_i) + t) * d(d-1) / (2(r-1) - d(d-1))

for r > d(d-1)/2 + 1, where y_0 = 1, y_i = -ybar_i, and the (m+1)-st
function is the constant one lifted to degree d with multiplier t.
The certificate assumes the duals are optimal for the moment problem
itself; finite-level LP duals only approximate that, so reports carry
the bound with a caveat instead of a guarantee.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import GmpInstance, MomentVector
from .polynomials import (
    SIMPLEX,
    Monomial,
    Polynomial,
    coordinate_sum_power,
    monomial_index_set,
    monomials_of_degree,
    multinomial,
    b_of_f,
    homogenize,
)
from .reports import DualInfo, LevelReport
from .solvers import LinearProgram, lp_solve

DUAL_EXISTENCE_CAVEAT = (
    "assumes a dual optimal solution exists for the moment problem; "
    "not verifiable from the instance data"
)
DUAL_OPTIMALITY_CAVEAT = (
    "a-priori bound is conditional on dual optimality; finite-level LP "
    "duals only approximate the moment-problem duals"
)


@dataclass
class RelaxationProblemLP:
    """Assembled level-r LP plus the monomial/column correspondence."""

    level: int
    instance: GmpInstance
    columns: list[Monomial]
    column_of: dict[Monomial, int]
    lp: LinearProgram
    n_moment_rows: int
    n_ideal_rows: int

    def to_json_dict(self) -> dict:
        """Sparse triplet dump of the assembled LP for external inspection."""
        from .reports import format_number

        def triplets(mat):
            rows, cols = np.nonzero(mat)
            return [
                [int(i), int(j), format_number(mat[i, j])]
                for i, j in zip(rows.tolist(), cols.tolist())
            ]

        return {
            "level": self.level,
            "columns": [list(a) for a in self.columns],
            "objective": [format_number(v) for v in self.lp.c],
            "eq_triplets": triplets(self.lp.a_eq),
            "eq_rhs": [format_number(v) for v in self.lp.b_eq],
            "ub_triplets": triplets(self.lp.a_ub),
            "ub_rhs": [format_number(v) for v in self.lp.b_ub],
            "lower_bounds": [format_number(v) for v in self.lp.lb],
            "row_labels": (
                [f"moment[{i}]" for i in range(self.n_moment_rows)]
                + [f"ideal[{i}]" for i in range(self.n_ideal_rows)]
            ),
        }


def build_lp(inst: GmpInstance, r: int) -> RelaxationProblemLP:
    """Assemble the level-r relaxation for a simplex instance."""
    if inst.domain.kind != SIMPLEX:
        raise ValueError("LP hierarchy requires a simplex instance")
    if r < inst.degree:
        raise ValueError(f"level {r} below instance degree {inst.degree}")
    n = inst.n
    columns = monomial_index_set(n, r)
    column_of = {a: j for j, a in enumerate(columns)}
    ncols = len(columns)

    c = np.zeros(ncols)
    for alpha, coef in inst.objective.terms.items():
        c[column_of[alpha]] = float(coef)

    ideal_index = monomial_index_set(n, r - 1)
    a_eq = np.zeros((inst.m + len(ideal_index), ncols))
    b_eq = np.zeros(inst.m + len(ideal_index))
    for i, (poly, rhs) in enumerate(inst.constraints):
        for alpha, coef in poly.terms.items():
            a_eq[i, column_of[alpha]] = float(coef)
        b_eq[i] = float(rhs)
    for k, alpha in enumerate(ideal_index):
        row = inst.m + k
        a_eq[row, column_of[alpha]] += 1.0
        for i in range(n):
            up = tuple(alpha[j] + (1 if j == i else 0) for j in range(n))
            a_eq[row, column_of[up]] -= 1.0

    a_ub = np.zeros((1, ncols))
    a_ub[0, column_of[tuple([0] * n)]] = 1.0
    b_ub = np.ones(1)

    lp = LinearProgram(c=c, a_eq=a_eq, b_eq=b_eq, a_ub=a_ub, b_ub=b_ub,
                       lb=np.zeros(ncols))
    return RelaxationProblemLP(
        level=r,
        instance=inst,
        columns=columns,
        column_of=column_of,
        lp=lp,
        n_moment_rows=inst.m,
        n_ideal_rows=len(ideal_index),
    )


def solve_level(inst: GmpInstance, r: int, tol: float = 1e-8) -> LevelReport:
    """Solve level r and package bound, moments, duals, and residuals."""
    start = time.perf_counter()
    prob = build_lp(inst, r)
    res = lp_solve(prob.lp, tol=tol)
    elapsed = time.perf_counter() - start
    caveats = [DUAL_EXISTENCE_CAVEAT]
    if res.status != "optimal":
        return LevelReport(level=r, hierarchy="lp", status=res.status,
                           residuals=res.residuals, caveats=caveats,
                           wall_time_s=elapsed)
    values = {a: float(res.x[j]) for a, j in prob.column_of.items()}
    moments = MomentVector(level=r, n=inst.n, kind=SIMPLEX, values=values)
    ybar = tuple(float(v) for v in res.y_eq[: inst.m])
    t = max(0.0, -float(res.y_ub[0]))
    duals = DualInfo(ybar=ybar, t=t)
    residuals = dict(res.residuals)
    residuals["degree_raise_max"] = degree_raise_check(moments, 1)
    apriori = None
    d = inst.degree
    if r > d * (d - 1) // 2 + 1:
        apriori = apriori_error_bound(inst, (ybar, t), r)
        caveats.append(DUAL_OPTIMALITY_CAVEAT)
    return LevelReport(level=r, hierarchy="lp", status=res.status,
                       bound=float(res.objective), moments=moments, duals=duals,
                       residuals=residuals, apriori_bound=apriori,
                       caveats=caveats, wall_time_s=elapsed)


def degree_raise_check(moments: MomentVector, k: int) -> float:
    """Max violation of y_gamma = L(x^gamma (x_1+...+x_n)^k), |gamma| <= r-k."""
    if k < 0 or k > moments.level:
        raise ValueError("need 0 <= k <= level")
    n, r = moments.n, moments.level
    shift = monomials_of_degree(n, k)
    worst = 0.0
    for gamma in monomial_index_set(n, r - k):
        acc = 0.0
        for beta in shift:
            key = tuple(g + b for g, b in zip(gamma, beta))
            acc += multinomial(k, beta) * moments.values[key]
        worst = max(worst, abs(moments.values[gamma] - acc))
    return worst


def apriori_error_bound(inst: GmpInstance, duals: tuple, r: int) -> float:
    """Worst-case gap certificate from dual multipliers (ybar, t).

    Valid for r > d(d-1)/2 + 1; raises ValueError below that.  The
    result is nonnegative and bounds val - f_LP^(r) whenever the
    supplied duals are optimal for the moment problem.
    """
    ybar, t = duals
    if len(ybar) != inst.m:
        raise ValueError(f"expected {inst.m} moment duals, got {len(ybar)}")
    if t < 0:
        raise ValueError("mass multiplier t must be nonnegative")
    d = inst.degree
    denom = 2 * (r - 1) - d * (d - 1)
    if denom <= 0:
        raise ValueError(
            f"level {r} too small for the bound: need r > d(d-1)/2 + 1 = "
            f"{d * (d - 1) // 2 + 1}"
        )
    if d <= 1:
        return 0.0
    tq = Fraction(t)
    total = b_of_f(inst.objective)
    for (poly, _), ybar_i in zip(inst.constraints, ybar):
        yi = -Fraction(ybar_i)
        if yi != 0:
            total += b_of_f(yi * poly)
    ones_lifted = coordinate_sum_power(inst.n, d)
    if tq != 0:
        total += b_of_f(tq * ones_lifted)
    total += tq
    return float(total * Fraction(d * (d - 1), denom))


def dklp_value(p: Polynomial, r: int) -> Fraction:
    """p^(r): largest lambda making (x_1+..+x_n)^r (p - lambda (..)^d)
    coefficientwise nonnegative; exact rational arithmetic."""
    d = p.degree
    if d < 0:
        raise ValueError("zero polynomial")
    if not p.is_homogeneous():
        raise ValueError("p must be homogeneous")
    if r < 0:
        raise ValueError("level must be nonnegative")
    n = p.n
    degree_d = monomials_of_degree(n, d)
    best: Fraction | None = None
    for beta in monomials_of_degree(n, r + d):
        rhs = Fraction(0)
        for alpha in degree_d:
            coef = p.terms.get(alpha)
            if coef is None:
                continue
            gamma = tuple(b - a for b, a in zip(beta, alpha))
            m = multinomial(r, gamma) if min(gamma) >= 0 else 0
            if m:
                rhs += coef * m
        ratio = rhs / multinomial(r + d, beta)
        best = ratio if best is None else min(best, ratio)
    return best


def build_dklp(p: Polynomial, r: int) -> Fraction:
    """Alias for dklp_value; named for the hierarchy it evaluates."""
    return dklp_value(p, r)


def normalization_instance(p: Polynomial, domain_kind: str = SIMPLEX) -> GmpInstance:
    """min <p, mu> subject to unit mass, with the mass constraint
    homogenized to the degree of p."""
    from .model import Domain, validate_and_canonicalize

    domain = Domain(domain_kind, p.n)
    one = Polynomial.constant(p.n, 1)
    return validate_and_canonicalize(domain, p, [(one, 1)])


def equivalence_check(p: Polynomial, r: int, tol: float = 1e-8) -> dict:
    """Compare p^(r) with the level-(r+d) LP bound for the
    normalization instance; the two agree exactly in theory."""
    if not p.is_homogeneous() or p.degree < 1:
        raise ValueError("p must be homogeneous of degree >= 1")
    lhs = dklp_value(p, r)
    inst = normalization_instance(p, SIMPLEX)
    report = solve_level(inst, r + p.degree, tol=tol)
    if report.status != "optimal":
        raise RuntimeError(f"LP level {r + p.degree} returned {report.status}")
    rhs = report.bound
    return {"dklp": float(lhs), "dklp_exact": lhs, "lp": rhs,
            "diff": abs(float(lhs) - rhs), "level": r + p.degree}
