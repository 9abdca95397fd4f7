"""Spectra, Turing-space classification, instability-region maps, and
nonlinear simulation of fourth-order reaction-diffusion on an interval.

The operator is ``u -> u'''' - tau*u''`` on ``(-R, R)`` under free
(natural, mass-conserving) or periodic conditions.  ``spectrum`` computes
its eigenvalues by three mutually checking routes, ``dispersion`` turns a
reaction Jacobian plus diffusion ratio into growth rates and the
instability decision, ``regions`` maps where each eigenvalue branch
destabilizes in the ``(R, tau)`` plane, ``kinetics`` supplies the
activator-inhibitor system, ``simulate`` integrates the full nonlinear
pair, and ``serialize``/``cli`` expose everything as files and
subcommands.
"""

from .dispersion import growth_rate, in_turing_space, max_growth, quantities
from .kinetics import V_FLOOR, gm_eval, gm_jacobian, gm_steady_state, reaction_params
from .regions import (
    boundary_curve,
    boundary_tau,
    check_nesting,
    classification_spectrum,
    rasterize,
    region_contains,
    ts_equivalence,
    turing_union_contains,
)
from .simulate import (
    build_diffusion_matrix,
    initial_state,
    probe_linear_rate,
    run,
    step_imex,
)
from .spectrum import (
    MuastResult,
    branch_parameterization,
    characteristic_det,
    crossing_tau,
    fd_eigensolve,
    find_muast,
    free_branch_mu,
    negative_eigenvalues,
    periodic_mu,
    rescale_mu,
    spectrum_list,
)
from .types import (
    BoundaryCondition,
    BranchNotFoundError,
    BranchParameterization,
    Classification,
    DispersionQuantities,
    EigenBranchId,
    EquivalenceReport,
    Family,
    FamilyPreconditionError,
    GMConstants,
    GridRaster,
    GrowthRate,
    Method,
    ModeProbe,
    MuastNotFoundError,
    NestingReport,
    Parity,
    ReactionParams,
    RegionBoundary,
    RegionSpec,
    RunReport,
    Side,
    SimConfig,
    SimState,
    SolverError,
    SpectrumPoint,
    SteadyState,
    TensionedOperator,
    TuringDecision,
    ValidationError,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # types
    "BoundaryCondition",
    "BranchNotFoundError",
    "BranchParameterization",
    "Classification",
    "DispersionQuantities",
    "EigenBranchId",
    "EquivalenceReport",
    "Family",
    "FamilyPreconditionError",
    "GMConstants",
    "GridRaster",
    "GrowthRate",
    "Method",
    "ModeProbe",
    "MuastNotFoundError",
    "MuastResult",
    "NestingReport",
    "Parity",
    "ReactionParams",
    "RegionBoundary",
    "RegionSpec",
    "RunReport",
    "Side",
    "SimConfig",
    "SimState",
    "SolverError",
    "SpectrumPoint",
    "SteadyState",
    "TensionedOperator",
    "TuringDecision",
    "ValidationError",
    # spectrum
    "branch_parameterization",
    "characteristic_det",
    "crossing_tau",
    "fd_eigensolve",
    "find_muast",
    "free_branch_mu",
    "negative_eigenvalues",
    "periodic_mu",
    "rescale_mu",
    "spectrum_list",
    # dispersion
    "growth_rate",
    "in_turing_space",
    "max_growth",
    "quantities",
    # kinetics
    "V_FLOOR",
    "gm_eval",
    "gm_jacobian",
    "gm_steady_state",
    "reaction_params",
    # regions
    "boundary_curve",
    "boundary_tau",
    "check_nesting",
    "classification_spectrum",
    "rasterize",
    "region_contains",
    "ts_equivalence",
    "turing_union_contains",
    # simulate
    "build_diffusion_matrix",
    "initial_state",
    "probe_linear_rate",
    "run",
    "step_imex",
]
