"""Brute-force reference values for small instances.

Everything here is deliberately independent of the relaxation
machinery: grids, exhaustive enumeration, and exact stationary-point
analysis.  Used to sanity-check bounds in reports (lower bounds must
sit below the oracle value) and as the comparison side of rate tests.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np

from .polynomials import Monomial, Polynomial, monomials_of_degree


def simplex_grid(n: int, resolution: int) -> np.ndarray:
    """All rational grid points alpha/resolution on the simplex."""
    pts = monomials_of_degree(n, resolution)
    return np.array(pts, dtype=float) / resolution


def eval_on_points(p: Polynomial, pts: np.ndarray) -> np.ndarray:
    out = np.zeros(len(pts))
    for alpha, coef in p.terms.items():
        term = np.full(len(pts), float(coef))
        for i, a in enumerate(alpha):
            if a:
                term *= pts[:, i] ** a
        out += term
    return out


def simplex_grid_min(p: Polynomial, resolution: int = 120) -> tuple[float, np.ndarray]:
    """Grid minimum over the simplex (an upper bound on the true minimum)."""
    pts = simplex_grid(p.n, resolution)
    vals = eval_on_points(p, pts)
    k = int(np.argmin(vals))
    return float(vals[k]), pts[k]


def sphere_grid_min(p: Polynomial, samples: int = 100000) -> tuple[float, np.ndarray]:
    """Grid minimum over the unit sphere; supports n = 2 and n = 3."""
    if p.n == 2:
        theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
        pts = np.column_stack([np.cos(theta), np.sin(theta)])
    elif p.n == 3:
        k = max(int(np.sqrt(samples / 2)), 2)
        theta = np.linspace(0.0, np.pi, k)
        phi = np.linspace(0.0, 2 * np.pi, 2 * k, endpoint=False)
        tt, pp = np.meshgrid(theta, phi, indexing="ij")
        pts = np.column_stack([
            (np.sin(tt) * np.cos(pp)).ravel(),
            (np.sin(tt) * np.sin(pp)).ravel(),
            np.cos(tt).ravel(),
        ])
    else:
        raise ValueError("sphere grid oracle supports n <= 3")
    vals = eval_on_points(p, pts)
    k = int(np.argmin(vals))
    return float(vals[k]), pts[k]


def exact_simplex_quadratic_min(p: Polynomial) -> Fraction:
    """Exact minimum of a homogeneous quadratic over the simplex.

    Enumerate faces; on each face the candidate minimizers are the
    vertices and any stationary point of the restricted quadratic with
    positive coordinates (solving 2 Q_S x = lambda 1, sum x = 1 over the
    rationals).  Minima on face boundaries are covered by the subfaces.
    """
    if not p.is_homogeneous(2):
        raise ValueError("need a homogeneous quadratic")
    n = p.n
    q = [[Fraction(0)] * n for _ in range(n)]
    for alpha, c in p.terms.items():
        idx = [i for i, a in enumerate(alpha) for _ in range(a)]
        i, j = idx
        if i == j:
            q[i][i] += c
        else:
            q[i][j] += c / 2
            q[j][i] += c / 2
    best: Fraction | None = None
    for size in range(1, n + 1):
        for face in combinations(range(n), size):
            # vertices are the size-1 faces
            if size == 1:
                v = q[face[0]][face[0]]
                best = v if best is None else min(best, v)
                continue
            # stationary point: 2 Q_S x = lambda, 1.x = 1 over the face
            k = size
            mat = [[Fraction(0)] * (k + 1) for _ in range(k + 1)]
            rhs = [Fraction(0)] * (k + 1)
            for a in range(k):
                for bidx in range(k):
                    mat[a][bidx] = 2 * q[face[a]][face[bidx]]
                mat[a][k] = Fraction(-1)
            for bidx in range(k):
                mat[k][bidx] = Fraction(1)
            rhs[k] = Fraction(1)
            sol = _solve_rational(mat, rhs)
            if sol is None:
                continue
            x = sol[:k]
            if any(v < 0 for v in x):
                continue
            val = Fraction(0)
            for a in range(k):
                for bidx in range(k):
                    val += x[a] * q[face[a]][face[bidx]] * x[bidx]
            best = val if best is None else min(best, val)
    return best


def _solve_rational(mat, rhs):
    """Gaussian elimination over the rationals; None when singular."""
    k = len(mat)
    m = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(k):
        piv = None
        for r in range(col, k):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        pivval = m[col][col]
        m[col] = [v / pivval for v in m[col]]
        for r in range(k):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[r][k] for r in range(k)]


def rational_sphere_points(n: int, count: int, seed: int = 0) -> list[tuple[Fraction, ...]]:
    """Exact rational points on the unit sphere, via nested Pythagorean
    parametrization: extend (x, y) on S^1 to (x u, y u, v) with (u, v)
    on S^1, and so on."""
    rng = np.random.default_rng(seed)

    def circle_point() -> tuple[Fraction, Fraction]:
        t = Fraction(int(rng.integers(-50, 51)), int(rng.integers(1, 50)))
        den = 1 + t * t
        return ((1 - t * t) / den, 2 * t / den)

    out = []
    for _ in range(count):
        pt = list(circle_point())
        while len(pt) < n:
            u, v = circle_point()
            pt = [x * u for x in pt] + [v]
        out.append(tuple(pt[:n]) if n > 1 else (Fraction(1),))
    return out


def rational_simplex_points(n: int, count: int, seed: int = 0) -> list[tuple[Fraction, ...]]:
    """Random rational points on the simplex."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        w = [Fraction(int(rng.integers(0, 20)) + (1 if i == 0 else 0)) for i in range(n)]
        s = sum(w)
        out.append(tuple(v / s for v in w))
    return out


def max_stable_set(adjacency: np.ndarray) -> int:
    """Exhaustive maximum stable set size; fine for n up to ~20."""
    n = adjacency.shape[0]
    if n > 24:
        raise ValueError("graph too large for exhaustive search")
    neighbors = [int(sum(1 << j for j in range(n) if adjacency[i, j])) for i in range(n)]
    best = 0

    def grow(candidates: int, size: int):
        nonlocal best
        if size + bin(candidates).count("1") <= best:
            return
        if candidates == 0:
            best = max(best, size)
            return
        v = (candidates & -candidates).bit_length() - 1
        grow(candidates & ~(1 << v) & ~neighbors[v], size + 1)
        grow(candidates & ~(1 << v), size)

    grow((1 << n) - 1, 0)
    return best
