"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial in n variables is stored as a map from exponent tuples
alpha = (a_1, ..., a_n) to nonzero ``fractions.Fraction`` coefficients.
All arithmetic here is exact; floating point enters only in the solver
layer.  Exactness matters because coefficient-sign certificates
(multiplying a positive form by powers of x_1 + ... + x_n until every
coefficient is nonnegative) and the cross-checks between the two LP
formulations are statements about exact rational numbers.

On top of the ring operations the module provides

* homogenization to a target degree, on the simplex (pad with powers of
  the coordinate sum) or on the sphere (pad with powers of the squared
  norm, which requires every degree gap to be even),
* the shift f -> (x_1 + ... + x_n)^k * f, fully expanded,
* the weighted-coefficient bound B(f) = max over degree-d exponents of
  (a_1! ... a_n! / d!) * f_alpha together with the smallest shift
  exponent k that certifies positivity for a given positive lower bound
  on the simplex minimum,
* the degree-r Bernstein approximation of a function on the simplex.
"""

from __future__ import annotations

import decimal
import math
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Mapping

Monomial = tuple[int, ...]

SIMPLEX = "simplex"
SPHERE = "sphere"


def monomial_degree(alpha: Monomial) -> int:
    return sum(alpha)


def grlex_key(alpha: Monomial) -> tuple[int, Monomial]:
    """Sort key for graded lexicographic order: degree first, then lex."""
    return (sum(alpha), alpha)


def monomials_of_degree(n: int, d: int) -> list[Monomial]:
    """All exponent tuples of length n with |alpha| = d, in lex order."""
    if n < 1:
        raise ValueError("need at least one variable")
    if d < 0:
        return []
    out = []
    for bars in combinations_with_replacement(range(n), d):
        alpha = [0] * n
        for i in bars:
            alpha[i] += 1
        out.append(tuple(alpha))
    out.sort()
    return out


def monomial_index_set(n: int, t: int) -> list[Monomial]:
    """All alpha with |alpha| <= t, graded lex order, C(n+t, t) entries."""
    if t < 0:
        raise ValueError("degree bound must be nonnegative")
    out: list[Monomial] = []
    for d in range(t + 1):
        out.extend(monomials_of_degree(n, d))
    return out


def multinomial(k: int, beta: Monomial) -> int:
    """k! / (beta_1! ... beta_n!); zero if any entry is negative."""
    if any(b < 0 for b in beta):
        return 0
    if sum(beta) != k:
        raise ValueError(f"entries of {beta} must sum to {k}")
    num = math.factorial(k)
    for b in beta:
        num //= math.factorial(b)
    return num


def _coerce_coef(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError:
            # decimal strings with exponents, e.g. "1e-3"
            return Fraction(decimal.Decimal(value))
    raise TypeError(f"cannot interpret {value!r} as a rational coefficient")


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Monomial, object] | None = None):
        if n < 1:
            raise ValueError("dimension must be >= 1")
        clean: dict[Monomial, Fraction] = {}
        for alpha, coef in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n:
                raise ValueError(f"exponent {alpha} has length {len(alpha)}, expected {n}")
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative exponent in {alpha}")
            c = _coerce_coef(coef)
            if c != 0:
                clean[alpha] = clean.get(alpha, Fraction(0)) + c
                if clean[alpha] == 0:
                    del clean[alpha]
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *_):
        raise AttributeError("Polynomial is immutable")

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n, {})

    @classmethod
    def constant(cls, n: int, c) -> "Polynomial":
        return cls(n, {tuple([0] * n): c})

    @classmethod
    def variable(cls, n: int, i: int) -> "Polynomial":
        if not 0 <= i < n:
            raise ValueError(f"variable index {i} out of range for n={n}")
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): 1})

    @classmethod
    def coordinate_sum(cls, n: int) -> "Polynomial":
        """x_1 + ... + x_n."""
        return cls(n, {tuple(e): 1 for e in monomials_of_degree(n, 1)})

    @classmethod
    def squared_norm(cls, n: int) -> "Polynomial":
        """x_1^2 + ... + x_n^2."""
        terms = {}
        for i in range(n):
            e = [0] * n
            e[i] = 2
            terms[tuple(e)] = 1
        return cls(n, terms)

    # ---- ring operations ----------------------------------------------

    def _check_same_dim(self, other: "Polynomial"):
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.n, other)
        self._check_same_dim(other)
        terms = dict(self.terms)
        for alpha, c in other.terms.items():
            s = terms.get(alpha, Fraction(0)) + c
            if s == 0:
                terms.pop(alpha, None)
            else:
                terms[alpha] = s
        return Polynomial(self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.n, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Polynomial.zero(self.n)
            return Polynomial(self.n, {a: c * other for a, c in self.terms.items()})
        self._check_same_dim(other)
        prod: dict[Monomial, Fraction] = {}
        for a1, c1 in self.terms.items():
            for a2, c2 in other.terms.items():
                key = tuple(x + y for x, y in zip(a1, a2))
                s = prod.get(key, Fraction(0)) + c1 * c2
                if s == 0:
                    prod.pop(key, None)
                else:
                    prod[key] = s
        return Polynomial(self.n, prod)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # ---- queries -------------------------------------------------------

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(a) for a in self.terms)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(a) for a in self.terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return d is None or degs == {d}

    def homogeneous_parts(self) -> dict[int, "Polynomial"]:
        parts: dict[int, dict[Monomial, Fraction]] = {}
        for alpha, c in self.terms.items():
            parts.setdefault(sum(alpha), {})[alpha] = c
        return {d: Polynomial(self.n, t) for d, t in sorted(parts.items())}

    def coefficient(self, alpha: Monomial) -> Fraction:
        return self.terms.get(tuple(alpha), Fraction(0))

    def evaluate(self, point: Iterable) -> Fraction | float:
        """Sum of coef * prod(x_i^a_i); exact when the point is rational."""
        pt = tuple(point)
        if len(pt) != self.n:
            raise ValueError(f"point has length {len(pt)}, expected {self.n}")
        total = 0
        for alpha, c in self.terms.items():
            v = c
            for x, a in zip(pt, alpha):
                if a:
                    v = v * x**a
            total = total + v
        return total

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    # ---- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"exp": list(alpha), "coef": str(c)} for alpha, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Polynomial":
        try:
            n = int(data["n"])
            raw = data["terms"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed polynomial object: {exc}") from exc
        terms: dict[Monomial, Fraction] = {}
        for k, item in enumerate(raw):
            try:
                alpha = tuple(int(a) for a in item["exp"])
                coef = _coerce_coef(item["coef"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"malformed term at terms[{k}]: {exc}") from exc
            if len(alpha) != n:
                raise ValueError(
                    f"terms[{k}].exp has length {len(alpha)}, expected n={n}"
                )
            terms[alpha] = terms.get(alpha, Fraction(0)) + coef
        return cls(n, terms)

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for alpha, c in self.sorted_terms():
            mono = "*".join(
                f"x{i + 1}" if a == 1 else f"x{i + 1}^{a}"
                for i, a in enumerate(alpha)
                if a
            )
            if not mono:
                chunks.append(str(c))
            elif c == 1:
                chunks.append(mono)
            elif c == -1:
                chunks.append(f"-{mono}")
            else:
                chunks.append(f"{c}*{mono}")
        out = " + ".join(chunks)
        return out.replace("+ -", "- ")

    def __repr__(self):
        return f"Polynomial({self.n}, {self})"


def coordinate_sum_power(n: int, k: int) -> Polynomial:
    """(x_1 + ... + x_n)^k expanded via multinomial coefficients."""
    if k < 0:
        raise ValueError("power must be nonnegative")
    return Polynomial(n, {b: multinomial(k, b) for b in monomials_of_degree(n, k)})


def homogenize(p: Polynomial, d: int, mode: str) -> Polynomial:
    """Lift p to a homogeneous polynomial of degree d.

    Simplex mode pads each degree-j part with (x_1+...+x_n)^(d-j); the
    result agrees with p wherever the coordinates sum to 1.  Sphere mode
    pads with ||x||_2^(d-j), which is a polynomial only for even gaps;
    an odd gap raises ValueError.  The result agrees with p on the unit
    sphere.
    """
    if mode not in (SIMPLEX, SPHERE):
        raise ValueError(f"unknown homogenization mode {mode!r}")
    if not p.terms:
        return p
    if d < p.degree:
        raise ValueError(f"target degree {d} below polynomial degree {p.degree}")
    result = Polynomial.zero(p.n)
    if mode == SIMPLEX:
        for j, part in p.homogeneous_parts().items():
            result = result + part * coordinate_sum_power(p.n, d - j)
        return result
    pad = Polynomial.squared_norm(p.n)
    for j, part in p.homogeneous_parts().items():
        gap = d - j
        if gap % 2:
            raise ValueError(
                f"degree-{j} part cannot be lifted to degree {d} on the sphere "
                "(odd gap)"
            )
        result = result + part * pad ** (gap // 2)
    return result


def polya_shift(p: Polynomial, k: int) -> Polynomial:
    """(x_1 + ... + x_n)^k * p, fully expanded."""
    if k < 0:
        raise ValueError("shift exponent must be nonnegative")
    if k == 0:
        return p
    shifted: dict[Monomial, Fraction] = {}
    for beta in monomials_of_degree(p.n, k):
        m = multinomial(k, beta)
        for alpha, c in p.terms.items():
            key = tuple(a + b for a, b in zip(alpha, beta))
            s = shifted.get(key, Fraction(0)) + c * m
            if s == 0:
                shifted.pop(key, None)
            else:
                shifted[key] = s
    return Polynomial(p.n, shifted)


def b_of_f(f: Polynomial) -> Fraction:
    """max over |alpha| = d of (alpha_1! ... alpha_n!/d!) * f_alpha.

    The max runs over the full degree-d exponent set, with absent
    monomials contributing 0, so the result is never negative.
    """
    d = f.degree
    if d < 1:
        raise ValueError("B(f) requires a homogeneous polynomial of degree >= 1")
    if not f.is_homogeneous():
        raise ValueError("B(f) requires a homogeneous polynomial")
    dfact = math.factorial(d)
    best = Fraction(0)
    for alpha, c in f.terms.items():
        w = 1
        for a in alpha:
            w *= math.factorial(a)
        best = max(best, Fraction(w, dfact) * c)
    return best


def polya_exponent_bound(f: Polynomial, eps) -> int:
    """Smallest integer k with k > d(d-1)/2 * B(f)/eps - d.

    For a homogeneous f of degree d whose minimum over the simplex is at
    least eps > 0, the shift (x_1+...+x_n)^k * f has only nonnegative
    coefficients.  eps may be any positive lower bound on that minimum.
    """
    eps = _coerce_coef(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    d = f.degree
    if d < 1 or not f.is_homogeneous():
        raise ValueError("need a homogeneous polynomial of degree >= 1")
    bound = Fraction(d * (d - 1), 2) * b_of_f(f) / eps - d
    return max(math.floor(bound) + 1, 0)


def bernstein_approx(f: Callable, r: int, n: int) -> Polynomial:
    """Degree-r Bernstein approximation on the simplex.

    Returns sum over |alpha| = r of f(alpha/r) * C(r, alpha) * x^alpha,
    a homogeneous polynomial of degree r that converges uniformly to f
    on the simplex for continuous f.  The sample points alpha/r are
    passed to f as tuples of Fractions, so rational-valued f yields an
    exact result.
    """
    if r < 1:
        raise ValueError("order must be >= 1")
    terms: dict[Monomial, Fraction] = {}
    for alpha in monomials_of_degree(n, r):
        value = f(tuple(Fraction(a, r) for a in alpha))
        coef = _coerce_coef(value) * multinomial(r, alpha)
        if coef != 0:
            terms[alpha] = coef
    return Polynomial(n, terms)
