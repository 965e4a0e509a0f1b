"""Embedded dense LP and SDP kernels with a uniform status contract.

``lp_solve`` is a two-phase revised simplex (compiled pivot kernel when
built, NumPy fallback otherwise); ``sdp_solve`` is a Nesterov-Todd
primal-dual interior-point method.  Statuses are the strings
"optimal", "infeasible", "unbounded", "numerical-failure", and every
result carries the residual numbers backing its status.
"""

from .simplex import (
    KERNEL_NAME,
    LinearProgram,
    LpResult,
    available_kernels,
    lp_solve,
    set_kernel,
)
from .sdp_ipm import SdpResult, SemidefiniteProgram, sdp_solve, smat, svec

__all__ = [
    "KERNEL_NAME",
    "LinearProgram",
    "LpResult",
    "SdpResult",
    "SemidefiniteProgram",
    "available_kernels",
    "lp_solve",
    "sdp_solve",
    "set_kernel",
    "smat",
    "svec",
]
