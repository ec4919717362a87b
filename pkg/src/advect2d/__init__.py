"""2D linear transport on uniform grids, with adjoint-based inverse design.

Three interchangeable one-dimensional kernels (Lax-Friedrichs,
Lax-Wendroff, and a modified method of characteristics) advance the
transport equation by dimensional splitting; a gradient-adjoint descent
loop recovers unknown initial conditions from a target state.
"""

from .grid import (
    Grid2D,
    ScalarField2D,
    bilinear_interpolate,
    make_grid,
    order_of_accuracy,
    rms_error,
    sample,
)
from .inverse import (
    DescentDiverged,
    GDReport,
    InverseProblem,
    cost,
    evaluate_design,
    gd_solve,
    gradient,
)
from .schemes import lf_sweep, lw_sweep, mmoc_sweep
from .solver import (
    CFLViolation,
    SchemeKind,
    SolverConfig,
    advance,
    backward_solve,
    cfl_timestep,
    forward_solve,
)
from .velocity import (
    DoswellParams,
    VelocityField,
    angular_velocity,
    doswell_exact,
    doswell_field,
    doswell_velocity,
    negated,
    sample_components,
    tangential_speed,
    uniform_field,
)

__version__ = "0.1.0"

__all__ = [
    "Grid2D",
    "ScalarField2D",
    "make_grid",
    "sample",
    "rms_error",
    "order_of_accuracy",
    "bilinear_interpolate",
    "VelocityField",
    "DoswellParams",
    "tangential_speed",
    "angular_velocity",
    "doswell_velocity",
    "doswell_exact",
    "doswell_field",
    "uniform_field",
    "negated",
    "sample_components",
    "lf_sweep",
    "lw_sweep",
    "mmoc_sweep",
    "SchemeKind",
    "SolverConfig",
    "CFLViolation",
    "cfl_timestep",
    "advance",
    "forward_solve",
    "backward_solve",
    "InverseProblem",
    "GDReport",
    "DescentDiverged",
    "cost",
    "gradient",
    "gd_solve",
    "evaluate_design",
    "__version__",
]
