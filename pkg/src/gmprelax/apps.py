"""Application front ends: polynomial/rational optimization, stable
sets, and cubature-style moment matching.

Each entry point assembles a moment-problem instance, dispatches to the
hierarchy matching the domain (LP on the simplex, SDP on the sphere),
and interprets the resulting bound.  Grid oracles are attached to
reports for small dimensions so bounds can be eyeballed against brute
force.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .lp_hierarchy import solve_level
from .model import (
    Domain,
    GmpInstance,
    instance_reference_moment,
    reference_moments,
    validate_and_canonicalize,
)
from .oracles import (
    eval_on_points,
    max_stable_set,
    simplex_grid,
    simplex_grid_min,
    sphere_grid_min,
)
from .polynomials import SIMPLEX, SPHERE, Monomial, Polynomial, monomial_index_set
from .reports import LevelReport
from .sdp_hierarchy import solve_level_sdp

Q_MIN_SLACK = 1e-6


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph as a dense 0/1 adjacency matrix."""

    n: int
    adjacency: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.adjacency)
        if a.shape != (self.n, self.n):
            raise ValueError("adjacency must be n x n")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(a) != 0):
            raise ValueError("adjacency must have zero diagonal")
        if not np.isin(a, (0, 1)).all():
            raise ValueError("adjacency entries must be 0 or 1")
        object.__setattr__(self, "adjacency", a.astype(int))

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[Sequence[int]]) -> "Graph":
        a = np.zeros((n, n), dtype=int)
        for k, e in enumerate(edges):
            if len(e) != 2:
                raise ValueError(f"edges[{k}] must be a pair")
            i, j = int(e[0]), int(e[1])
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ValueError(f"edges[{k}] = ({i}, {j}) invalid for n = {n}")
            a[i, j] = a[j, i] = 1
        return cls(n=n, adjacency=a)

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Graph":
        try:
            n = int(data["n"])
            edges = data.get("edges", [])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed graph object: {exc}") from exc
        return cls.from_edges(n, edges)

    def stability_form(self) -> Polynomial:
        """x'(A + I)x, whose simplex minimum is 1/alpha(G)."""
        terms: dict[Monomial, int] = {}
        for i in range(self.n):
            e = [0] * self.n
            e[i] = 2
            terms[tuple(e)] = 1
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if self.adjacency[i, j]:
                    e = [0] * self.n
                    e[i] = e[j] = 1
                    terms[tuple(e)] = 2
        return Polynomial(self.n, terms)


def _dispatch(inst: GmpInstance, r: int, tol: float) -> LevelReport:
    if inst.domain.kind == SIMPLEX:
        return solve_level(inst, r, tol=tol)
    return solve_level_sdp(inst, r, tol=tol)


def polynomial_min(p: Polynomial, domain: Domain, r: int,
                   tol: float = 1e-8, oracle: bool = True) -> LevelReport:
    """Lower bound on min_K p via the unit-mass normalization instance."""
    one = Polynomial.constant(p.n, 1)
    inst = validate_and_canonicalize(domain, p, [(one, 1)])
    report = _dispatch(inst, r, tol)
    if oracle and p.n <= 3:
        if domain.kind == SIMPLEX:
            val, point = simplex_grid_min(p)
        else:
            val, point = sphere_grid_min(p)
        report.oracle = {"grid_min": val, "grid_point": [f"{v:.6f}" for v in point]}
    return report


def rational_min(p: Polynomial, q: Polynomial, domain: Domain, r: int,
                 tol: float = 1e-8, oracle: bool = True) -> LevelReport:
    """Lower bound on inf_K p/q via moment rows <q, mu> = 1, mass <= 1.

    Requires q >= 1 on the domain (sampled on a grid, not certified):
    below 1 the mass bound stops being redundant and the construction
    no longer targets inf p/q, so the call refuses with a diagnostic.
    A q that changes sign makes the infimum -infinity outright.  Grid
    minima inside [1 - 1e-6, 1) draw a warning instead of a refusal.
    """
    if p.n != q.n:
        raise ValueError("p and q must share a dimension")
    if domain.kind == SIMPLEX:
        qmin, _ = simplex_grid_min(q)
    else:
        qmin, _ = sphere_grid_min(q)
    if qmin < 1.0 - Q_MIN_SLACK:
        hint = (
            "q takes values below 1 on the domain (grid minimum "
            f"{qmin:.6g}); rescale q (and the target) so that q >= 1"
        )
        if qmin < 0:
            hint += "; q changes sign, where the infimum of p/q is -infinity"
        raise ValueError(hint)
    if qmin < 1.0:
        warnings.warn(
            f"grid minimum of q is {qmin:.12g}, within tolerance of 1; "
            "the mass bound may bind numerically",
            stacklevel=2,
        )
    inst = validate_and_canonicalize(domain, p, [(q, 1)])
    report = _dispatch(inst, r, tol)
    if oracle and p.n <= 3:
        pts = _domain_grid(domain)
        ratio = eval_on_points(p, pts) / eval_on_points(q, pts)
        report.oracle = {"grid_ratio_min": float(ratio.min())}
    return report


def _domain_grid(domain: Domain) -> np.ndarray:
    if domain.kind == SIMPLEX:
        return simplex_grid(domain.n, 120 if domain.n <= 2 else 60)
    if domain.n == 2:
        theta = np.linspace(0.0, 2 * np.pi, 10000, endpoint=False)
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if domain.n == 3:
        theta = np.linspace(0.0, np.pi, 160)
        phi = np.linspace(0.0, 2 * np.pi, 320, endpoint=False)
        tt, pp = np.meshgrid(theta, phi, indexing="ij")
        return np.column_stack([
            (np.sin(tt) * np.cos(pp)).ravel(),
            (np.sin(tt) * np.sin(pp)).ravel(),
            np.cos(tt).ravel(),
        ])
    raise ValueError("grid oracle supports n <= 3")


def stable_set_bound(g: Graph, r: int, tol: float = 1e-8,
                     oracle: bool = True) -> dict:
    """Bound alpha(G) through the simplex minimum of x'(A+I)x.

    The level-r LP bound L satisfies L <= 1/alpha(G); when L > 0 this
    gives alpha(G) <= 1/L.  The alpha bound is reported unrounded
    (finite levels make 1/L an overestimate, so rounding down would
    claim integrality the bound does not give); floor(1/L) is displayed
    separately.
    """
    if r < 2:
        raise ValueError("stable-set bound needs level r >= 2")
    p = g.stability_form()
    report = solve_level(
        validate_and_canonicalize(Domain.simplex(g.n), p,
                                  [(Polynomial.constant(g.n, 1), 1)]),
        r, tol=tol)
    out = {
        "report": report,
        "lp_bound_on_inv_alpha": report.bound,
        "alpha_upper_bound": None,
        "alpha_upper_floor": None,
        "note": "",
    }
    if report.status != "optimal":
        out["note"] = f"solver returned {report.status}"
        return out
    if report.bound > tol:
        out["alpha_upper_bound"] = 1.0 / report.bound
        out["alpha_upper_floor"] = int(np.floor(1.0 / report.bound + tol))
    else:
        out["note"] = "uninformative at this level (bound is not positive)"
    if oracle and g.n <= 16:
        alpha = max_stable_set(g.adjacency)
        resolution = 60 if g.n <= 5 else 24
        grid_val, _ = simplex_grid_min(p, resolution=resolution)
        out["oracle"] = {
            "alpha_exact": alpha,
            "inv_alpha": 1.0 / alpha,
            "grid_min": grid_val,
        }
    return out


def cubature_bound(domain: Domain, d: int, beta: Monomial, r: int,
                   tol: float = 1e-8,
                   moments: Mapping[Monomial, Fraction] | None = None) -> LevelReport:
    """Extremal beta-moment among measures matching the reference
    moments up to degree d.

    The objective monomial must have degree greater than d, otherwise
    it is a combination of the matched moments and the problem is
    trivial.  Matching rows are generated for every |alpha| <= d from
    the uniform measure unless an explicit moment table is supplied.
    On the sphere, odd-degree monomials cannot be lifted to the common
    even degree; their rows are kept at their own degree, which every
    measure on the sphere still satisfies.
    """
    beta = tuple(int(b) for b in beta)
    if len(beta) != domain.n:
        raise ValueError("beta has wrong length")
    if sum(beta) <= d:
        raise ValueError(
            f"objective degree |beta| = {sum(beta)} must exceed the matched "
            f"degree d = {d}"
        )
    n = domain.n
    objective = Polynomial(n, {beta: 1})
    constraints = []
    for alpha in monomial_index_set(n, d):
        mono = Polynomial(n, {alpha: 1})
        if moments is not None:
            key = tuple(alpha)
            if key not in moments:
                raise ValueError(f"moment table missing entry for {key}")
            rhs = Fraction(moments[key])
        else:
            rhs = reference_moments(domain, alpha)
        constraints.append((mono, rhs))
    inst = validate_and_canonicalize(domain, objective, constraints,
                                     explicit_moments=moments)
    report = _dispatch(inst, r, tol)
    if report.moments is not None:
        worst = 0.0
        for alpha in monomial_index_set(n, d):
            target = float(instance_reference_moment(inst, alpha))
            worst = max(worst, abs(report.moments.values[tuple(alpha)] - target))
        report.residuals["matched_moment_max"] = worst
    return report
