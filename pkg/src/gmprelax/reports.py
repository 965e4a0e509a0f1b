"""Per-level solve reports and canonical JSON serialization.

Reports serialize every number as a decimal string with 12 significant
digits (rational strings where a value is exact), so serialized reports
round-trip byte-identically: parsing a report and re-serializing it
with ``canonical_json`` reproduces the exact bytes.  Wall-clock timing
is the one field that varies between otherwise identical runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .model import MomentVector


def format_number(value) -> str:
    """Canonical decimal string, 12 significant digits."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if value != value:  # NaN
        return "nan"
    return f"{float(value):.12g}"


def canonical_json(obj) -> str:
    """Deterministic JSON text: sorted keys, fixed separators."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": "))


@dataclass
class DualInfo:
    """Multipliers (ybar, t) of the moment rows and the mass bound."""

    ybar: tuple[float, ...]
    t: float
    note: str = ""

    def to_json_dict(self) -> dict:
        return {
            "ybar": [format_number(v) for v in self.ybar],
            "t": format_number(self.t),
            "note": self.note,
        }


@dataclass
class LevelReport:
    """Outcome of one relaxation level.

    ``bound`` is a lower bound on the instance value when status is
    "optimal".  ``apriori_bound`` carries the worst-case gap certificate
    when it applies (simplex hierarchy, level large enough, duals
    available); it is conditional on the returned duals being optimal
    for the underlying moment problem, which finite levels only
    approximate.  The ``caveats`` list records that and the standing
    assumption that a dual optimal solution exists.
    """

    level: int
    hierarchy: str
    status: str
    bound: float | None = None
    moments: MomentVector | None = None
    duals: DualInfo | None = None
    residuals: dict = field(default_factory=dict)
    apriori_bound: float | None = None
    caveats: list[str] = field(default_factory=list)
    oracle: dict | None = None
    wall_time_s: float = 0.0

    def to_json_dict(self, include_moments: bool = True) -> dict:
        out = {
            "level": self.level,
            "hierarchy": self.hierarchy,
            "status": self.status,
            "bound": None if self.bound is None else format_number(self.bound),
            "residuals": {k: format_number(v) for k, v in sorted(self.residuals.items())},
            "apriori_bound": (
                None if self.apriori_bound is None else format_number(self.apriori_bound)
            ),
            "caveats": list(self.caveats),
            "wall_time_s": format_number(self.wall_time_s),
        }
        out["duals"] = self.duals.to_json_dict() if self.duals is not None else None
        if include_moments and self.moments is not None:
            out["moments"] = self.moments.to_json_dict()
        else:
            out["moments"] = None
        if self.oracle is not None:
            out["oracle"] = {k: format_number(v) if isinstance(v, (int, float, Fraction))
                             else v for k, v in sorted(self.oracle.items())}
        return out
