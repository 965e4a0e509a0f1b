"""Problem model for the generalized moment problem on simplex and sphere.

An instance asks to minimize the integral of an objective polynomial
over positive Borel measures supported on the domain, subject to m
prescribed moment equalities <f_i, mu> = b_i and the mass bound
<1, mu> <= 1.  Canonicalization lifts every polynomial to a common
homogeneous degree, which loses nothing on either domain: on the
simplex the coordinates sum to one, on the sphere the squared norm is
one.

The module also supplies the moments of the uniform probability measure
on each domain.  Those closed forms double as test oracles: they
satisfy the degree-raising identities m(a) = sum_i m(a + e_i) (simplex)
and m(a) = sum_i m(a + 2 e_i) (sphere) exactly, which is the linear
structure the relaxation hierarchies impose on pseudo-moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .polynomials import (
    SIMPLEX,
    SPHERE,
    Monomial,
    Polynomial,
    grlex_key,
    homogenize,
    monomial_index_set,
    monomials_of_degree,
)

__all__ = [
    "Domain",
    "GmpInstance",
    "MomentVector",
    "monomial_index_set",
    "monomials_of_degree",
    "reference_moments",
    "validate_and_canonicalize",
]


@dataclass(frozen=True)
class Domain:
    """Either the probability simplex or the unit sphere in R^n."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in (SIMPLEX, SPHERE):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("domain dimension must be >= 1")

    @classmethod
    def simplex(cls, n: int) -> "Domain":
        return cls(SIMPLEX, n)

    @classmethod
    def sphere(cls, n: int) -> "Domain":
        return cls(SPHERE, n)

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "n": self.n}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Domain":
        try:
            return cls(str(data["kind"]), int(data["n"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed domain object: {exc}") from exc


def double_factorial(k: int) -> int:
    if k <= 0:
        return 1
    out = 1
    while k > 0:
        out *= k
        k -= 2
    return out


def reference_moments(domain: Domain, alpha: Monomial) -> Fraction:
    """Moment of x^alpha under the uniform probability measure.

    Simplex: (n-1)! * prod(a_i!) / (|a| + n - 1)!.
    Sphere: zero if any exponent is odd, otherwise
    prod((a_i - 1)!!) / prod_{j=0}^{|a|/2 - 1} (n + 2j).
    """
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != domain.n:
        raise ValueError(f"exponent length {len(alpha)} != dimension {domain.n}")
    if any(a < 0 for a in alpha):
        raise ValueError("negative exponent")
    n, d = domain.n, sum(alpha)
    if domain.kind == SIMPLEX:
        num = math.factorial(n - 1)
        for a in alpha:
            num *= math.factorial(a)
        return Fraction(num, math.factorial(d + n - 1))
    if any(a % 2 for a in alpha):
        return Fraction(0)
    num = 1
    for a in alpha:
        num *= double_factorial(a - 1)
    den = 1
    for j in range(d // 2):
        den *= n + 2 * j
    return Fraction(num, den)


def reference_moment_of_poly(domain: Domain, p: Polynomial) -> Fraction:
    return sum(
        (c * reference_moments(domain, a) for a, c in p.terms.items()),
        Fraction(0),
    )


@dataclass(frozen=True)
class GmpInstance:
    """Canonicalized moment-problem data.

    After construction the objective and all constraint polynomials are
    homogeneous.  They share the common degree, except on the sphere
    where a polynomial with the opposite parity cannot be lifted (the
    gap would be odd) and is kept homogeneous at its own degree; such
    rows are still valid moment constraints for every measure on the
    sphere.  The mass bound is fixed at one; callers rescale their data
    beforehand.
    """

    domain: Domain
    objective: Polynomial
    constraints: tuple[tuple[Polynomial, Fraction], ...]
    degree: int
    explicit_moments: Mapping[Monomial, Fraction] | None = field(default=None)

    @property
    def n(self) -> int:
        return self.domain.n

    @property
    def m(self) -> int:
        return len(self.constraints)

    @property
    def half_degree(self) -> int:
        """d with common degree 2d; only meaningful on the sphere."""
        return (self.degree + 1) // 2

    def min_level(self) -> int:
        """Lowest admissible relaxation level for this instance."""
        if self.domain.kind == SIMPLEX:
            return self.degree
        return self.half_degree

    def to_json_dict(self) -> dict:
        out = {
            "domain": self.domain.to_json_dict(),
            "objective": self.objective.to_json_dict(),
            "constraints": [
                {"poly": p.to_json_dict(), "rhs": str(b)} for p, b in self.constraints
            ],
        }
        if self.explicit_moments is not None:
            out["reference_moments"] = [
                {"exp": list(a), "value": str(v)}
                for a, v in sorted(self.explicit_moments.items(), key=lambda kv: grlex_key(kv[0]))
            ]
        return out

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "GmpInstance":
        if not isinstance(data, Mapping):
            raise ValueError("instance must be a JSON object")
        try:
            domain = Domain.from_json_dict(data["domain"])
        except KeyError as exc:
            raise ValueError("missing field: domain") from exc
        try:
            objective = Polynomial.from_json_dict(data["objective"])
        except KeyError as exc:
            raise ValueError("missing field: objective") from exc
        except ValueError as exc:
            raise ValueError(f"objective: {exc}") from exc
        constraints = []
        for k, item in enumerate(data.get("constraints", [])):
            try:
                poly = Polynomial.from_json_dict(item["poly"])
                rhs = Fraction(str(item["rhs"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"constraints[{k}]: {exc}") from exc
            constraints.append((poly, rhs))
        moments = None
        if "reference_moments" in data:
            moments = {}
            for k, item in enumerate(data["reference_moments"]):
                try:
                    alpha = tuple(int(a) for a in item["exp"])
                    moments[alpha] = Fraction(str(item["value"]))
                except (KeyError, TypeError, ValueError) as exc:
                    raise ValueError(f"reference_moments[{k}]: {exc}") from exc
        return validate_and_canonicalize(
            domain, objective, constraints, explicit_moments=moments
        )


def validate_and_canonicalize(
    domain: Domain,
    objective: Polynomial,
    constraints: Sequence[tuple[Polynomial, object]] = (),
    explicit_moments: Mapping[Monomial, object] | None = None,
) -> GmpInstance:
    """Check dimensions and lift all data to a common homogeneous degree.

    The common degree is the maximal total degree over the objective and
    constraints, rounded up to even on the sphere.  Polynomials whose
    degree gap to the target is odd in sphere mode are kept at their own
    (homogeneous) degree; mixed-parity polynomials are rejected.
    Idempotent: canonicalizing a canonical instance returns equal data.
    """
    if objective.n != domain.n:
        raise ValueError(
            f"objective dimension {objective.n} != domain dimension {domain.n}"
        )
    if not objective.terms:
        raise ValueError("objective must be nonzero")
    polys = [objective] + [p for p, _ in constraints]
    for k, p in enumerate(polys[1:]):
        if p.n != domain.n:
            raise ValueError(
                f"constraints[{k}] dimension {p.n} != domain dimension {domain.n}"
            )
        if not p.terms:
            raise ValueError(f"constraints[{k}] polynomial is zero")
    target = max(p.degree for p in polys)
    if domain.kind == SPHERE and target % 2:
        target += 1

    def lift(p: Polynomial, label: str) -> Polynomial:
        if domain.kind == SIMPLEX:
            return homogenize(p, target, SIMPLEX)
        parities = {sum(a) % 2 for a in p.terms}
        if len(parities) > 1:
            raise ValueError(
                f"{label} mixes even and odd degrees; it cannot be made "
                "homogeneous on the sphere"
            )
        if (target - p.degree) % 2:
            # opposite parity: keep the polynomial at its own degree
            if not p.is_homogeneous():
                raise ValueError(
                    f"{label} has odd parity gap and is not homogeneous"
                )
            return p
        return homogenize(p, target, SPHERE)

    lifted_obj = lift(objective, "objective")
    if lifted_obj.degree != target:
        raise ValueError(
            "objective cannot be lifted to the common even degree on the sphere"
        )
    lifted_cons = tuple(
        (lift(p, f"constraints[{k}]"), Fraction(str(b)) if isinstance(b, str) else Fraction(b))
        for k, (p, b) in enumerate(constraints)
    )
    moments = None
    if explicit_moments is not None:
        moments = {}
        for a, v in explicit_moments.items():
            alpha = tuple(int(x) for x in a)
            if len(alpha) != domain.n:
                raise ValueError(f"explicit moment exponent {alpha} has wrong length")
            moments[alpha] = Fraction(str(v)) if isinstance(v, str) else Fraction(v)
    return GmpInstance(
        domain=domain,
        objective=lifted_obj,
        constraints=lifted_cons,
        degree=target,
        explicit_moments=moments,
    )


@dataclass
class MomentVector:
    """Pseudo-moment assignment y_alpha for |alpha| <= bound.

    ``level`` is the relaxation level r; on the sphere the stored index
    set runs to 2r.  ``check`` verifies completeness over the index
    set, y_0 in [0, 1 + tol], and (on the simplex) y_alpha >= -tol.
    """

    level: int
    n: int
    kind: str
    values: dict[Monomial, float]

    @property
    def degree_bound(self) -> int:
        return self.level if self.kind == SIMPLEX else 2 * self.level

    def check(self, tol: float = 1e-8) -> list[str]:
        problems = []
        origin = tuple([0] * self.n)
        for alpha in monomial_index_set(self.n, self.degree_bound):
            if alpha not in self.values:
                problems.append(f"missing moment for {alpha}")
        y0 = self.values.get(origin)
        if y0 is not None and not -tol <= y0 <= 1 + tol:
            problems.append(f"mass {y0} outside [0, 1]")
        if self.kind == SIMPLEX:
            for alpha, v in self.values.items():
                if v < -tol:
                    problems.append(f"negative pseudo-moment {v} at {alpha}")
        return problems

    def pairing(self, p: Polynomial) -> float:
        """L(p) = sum of p_alpha * y_alpha."""
        total = 0.0
        for alpha, c in p.terms.items():
            total += float(c) * self.values[alpha]
        return total

    def to_json_dict(self) -> dict:
        from .reports import format_number

        return {
            "level": self.level,
            "n": self.n,
            "kind": self.kind,
            "values": [
                {"exp": list(a), "value": format_number(v)}
                for a, v in sorted(self.values.items(), key=lambda kv: grlex_key(kv[0]))
            ],
        }


def instance_reference_moment(inst: GmpInstance, alpha: Monomial) -> Fraction:
    """Reference moment honouring an explicit moment table when present."""
    if inst.explicit_moments is not None:
        key = tuple(int(a) for a in alpha)
        if key in inst.explicit_moments:
            return inst.explicit_moments[key]
        raise KeyError(f"explicit moment table has no entry for {key}")
    return reference_moments(inst.domain, alpha)
