"""Shared domain types for the turing4 package.

Coordinates and conventions used throughout:

* The spatial domain is the symmetric interval ``(-R, R)``; ``R`` is the
  half-length.  All free-boundary eigenvalue computations are reduced to the
  unit interval ``(-1, 1)`` through the rescaling
  ``mu(R, tau) = R**-4 * mu(1, tau * R**2)``.
* ``tau`` is the tension coefficient of the operator ``u'''' - tau * u''``.
  Negative tau makes the second-order term destabilizing.
* Free-boundary eigenvalues are organized into parity branches
  ``mu_l^even(tau)`` and ``mu_l^odd(tau)``, each strictly increasing in tau,
  plus the constant zero mode which is an eigenvalue for every tau.  The zero
  mode is reported with parity :attr:`Parity.ZERO` so that the even/odd
  indices can follow the branch convention (``odd`` branch ``l`` crosses
  ``mu = 0`` at ``tau = -(l*pi)**2``; ``even`` branch ``l`` at
  ``tau = -((2l+1)*pi/2)**2``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class ValidationError(ValueError):
    """Malformed user input: flags, configuration files, or file contents."""


class SolverError(RuntimeError):
    """A numerical routine failed to converge or validate its result."""


class BranchNotFoundError(SolverError):
    """A requested eigenvalue branch could not be located at this tension."""


class MuastNotFoundError(SolverError):
    """The mu-threshold search exhausted its R sweep without a witness."""


class FamilyPreconditionError(ValueError):
    """Reaction parameters violate the conditions a region family requires."""


class BoundaryCondition(str, Enum):
    FREE = "free"
    PERIODIC = "periodic"


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"
    PERIODIC = "periodic"
    #: The constant eigenfunction; mu = 0 for every tau, kept separate from
    #: the indexed even branches so branch indices match the crossing rule.
    ZERO = "zero"


class Method(str, Enum):
    PARAMETERIZED = "param"
    DETERMINANT = "det"
    FINITE_DIFFERENCE = "fd"


class Family(str, Enum):
    E_PLUS = "EPlus"
    E_MINUS = "EMinus"
    O_PLUS = "OPlus"
    O_MINUS = "OMinus"
    E_TILDE = "ETilde"
    O_TILDE = "OTilde"
    I_PER_PLUS = "IPerPlus"
    I_PER_MINUS = "IPerMinus"


class Side(str, Enum):
    TOP = "Top"
    BOTTOM = "Bottom"


class Classification(str, Enum):
    RUNNING = "Running"
    PATTERNED = "Patterned"
    DECAYED = "Decayed"
    BLOWN_UP = "BlownUp"


@dataclass(frozen=True)
class DomainInterval:
    """The interval (-R, R)."""

    R: float

    def __post_init__(self) -> None:
        if not (self.R > 0 and math.isfinite(self.R)):
            raise ValueError(f"half-length R must be positive and finite, got {self.R}")


@dataclass(frozen=True)
class TensionedOperator:
    """The operator u'''' - tau*u'' together with its boundary condition."""

    tau: float
    bc: BoundaryCondition = BoundaryCondition.FREE

    def __post_init__(self) -> None:
        if not math.isfinite(self.tau):
            raise ValueError(f"tau must be finite, got {self.tau}")


@dataclass(frozen=True, order=True)
class EigenBranchId:
    """Identifies one eigenvalue branch by parity and counting index."""

    parity: Parity
    index: int = 0

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"branch index must be >= 0, got {self.index}")


@dataclass(frozen=True)
class SpectrumPoint:
    """One (tau, mu) sample on a labeled branch, tagged with its method."""

    branch: EigenBranchId
    tau: float
    mu: float
    method: Method


@dataclass(frozen=True)
class BranchParameterization:
    """Upper-half-plane branch coordinates.

    For an odd branch, ``alpha**3 * tan(alpha) = beta**3 * tanh(beta)`` with
    ``l*pi <= alpha < (2l+1)*pi/2``; for an even branch,
    ``beta**3 * tan(alpha) = -alpha**3 * tanh(beta)`` on the window shifted by
    ``pi/2``.  The branch point is recovered through ``tau = beta**2 -
    alpha**2`` and ``mu = alpha**2 * beta**2`` (unit interval).
    """

    alpha: float
    beta: float
    parity: Parity

    @property
    def tau(self) -> float:
        return self.beta**2 - self.alpha**2

    @property
    def mu(self) -> float:
        return (self.alpha * self.beta) ** 2


@dataclass(frozen=True)
class ReactionParams:
    """Reaction Jacobian entries at the steady state plus diffusivity ratio."""

    f_u: float
    f_v: float
    g_u: float
    g_v: float
    k: float

    def __post_init__(self) -> None:
        if not (self.k > 0 and math.isfinite(self.k)):
            raise ValueError(f"diffusivity ratio k must be positive, got {self.k}")


@dataclass(frozen=True)
class DispersionQuantities:
    """Derived reaction-side quantities.

    ``A`` is the threshold ``(f_u+g_v)/(1+k)``.  When the discriminant of
    ``H(mu) = k*mu**2 - (k*f_u+g_v)*mu + (f_u*g_v - f_v*g_u)`` is positive,
    ``a < b`` are its real roots (``a`` the minus root); otherwise both are
    ``None``.  The four boolean flags are the structural conditions on the
    kinetics, in the order they are reported everywhere: negative trace,
    positive determinant, positive discriminant of ``H``, and positive
    weighted trace ``k*f_u + g_v``.
    """

    A: float
    a: float | None
    b: float | None
    discriminant: float
    trace_negative: bool
    det_positive: bool
    disc_positive: bool
    weighted_trace_positive: bool

    @property
    def conditions(self) -> tuple[bool, bool, bool, bool]:
        return (
            self.trace_negative,
            self.det_positive,
            self.disc_positive,
            self.weighted_trace_positive,
        )


@dataclass(frozen=True)
class GrowthRate:
    """Largest real part among the roots of lambda**2 + F*lambda + H = 0."""

    mu: float
    lambda_max_real: float
    F: float
    H: float


@dataclass(frozen=True)
class TuringDecision:
    """Outcome of the Turing-space membership test.

    ``case`` is ``"H"`` when instability is triggered by an eigenvalue inside
    ``(a, b)`` (H < 0), ``"F"`` when it is triggered by ``mu_1 < A`` (F < 0,
    only possible for tau < 0), and ``None`` for non-members.
    """

    member: bool
    case: str | None
    witness_mu: float | None
    conditions: tuple[bool, bool, bool, bool]
    A: float
    a: float | None
    b: float | None


@dataclass(frozen=True)
class RegionSpec:
    """One instability-region family with its branch index."""

    family: Family
    l: int

    def __post_init__(self) -> None:
        if self.l < 0:
            raise ValueError(f"region index l must be >= 0, got {self.l}")

    def __str__(self) -> str:
        return f"{self.family.value}:{self.l}"


@dataclass(frozen=True)
class RegionBoundary:
    """A sampled boundary curve of one region in the (R, tau) plane."""

    spec: RegionSpec
    side: Side
    curve: tuple[tuple[float, float], ...]  # (R, tau) points


@dataclass(frozen=True)
class GridRaster:
    """Cell-centered membership bitmasks over an (R, tau) rectangle.

    ``cells[i][j]`` corresponds to the cell center at row i (tau direction,
    ascending) and column j (R direction, ascending); bit ``m`` of the mask is
    set when the center lies in ``families[m]``.
    """

    r_min: float
    r_max: float
    tau_min: float
    tau_max: float
    n_r: int
    n_tau: int
    families: tuple[RegionSpec, ...]
    cells: tuple[tuple[int, ...], ...]

    def r_center(self, j: int) -> float:
        step = (self.r_max - self.r_min) / self.n_r
        return self.r_min + (j + 0.5) * step

    def tau_center(self, i: int) -> float:
        step = (self.tau_max - self.tau_min) / self.n_tau
        return self.tau_min + (i + 0.5) * step


@dataclass(frozen=True)
class NestingReport:
    """Result of the curve-ordering check across consecutive indices."""

    family: Family
    l_max: int
    passed: bool
    worst_margin: float
    details: tuple[str, ...] = ()


@dataclass(frozen=True)
class EquivalenceReport:
    """Region-union versus classifier cross-check over sampled points."""

    n_samples: int
    n_disagreements: int
    disagreements: tuple[tuple[float, float], ...] = ()

    @property
    def passed(self) -> bool:
        return self.n_disagreements == 0


@dataclass(frozen=True)
class GMConstants:
    """Gierer-Meinhardt rate constants.

    ``f(u, v) = k1 - k2*u + k3*u**2/v`` and ``g(u, v) = k4*u**2 - k5*v``.
    """

    k1: float
    k2: float
    k3: float
    k4: float
    k5: float

    def __post_init__(self) -> None:
        if self.k1 < 0:
            raise ValueError(f"k1 must be >= 0, got {self.k1}")
        for name in ("k2", "k3", "k4", "k5"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class SteadyState:
    u0: float
    v0: float

    def __post_init__(self) -> None:
        if not (self.u0 > 0 and self.v0 > 0):
            raise ValueError(f"steady state must be positive, got {(self.u0, self.v0)}")


@dataclass(frozen=True)
class SimConfig:
    """Configuration of one nonlinear simulation run."""

    R: float
    tau: float
    k: float
    kinetics: GMConstants
    seed: int
    n_grid: int = 512
    dt: float = 1e-3
    t_max: float = 50.0
    perturbation_amplitude: float = 1e-2
    snapshot_stride: int = 250

    def __post_init__(self) -> None:
        if self.R <= 0:
            raise ValueError(f"R must be positive, got {self.R}")
        if self.k <= 0:
            raise ValueError(f"k must be positive, got {self.k}")
        if self.n_grid < 128:
            raise ValueError(f"n_grid must be >= 128, got {self.n_grid}")
        if not (0 < self.dt <= 1e-2):
            raise ValueError(f"dt must lie in (0, 1e-2], got {self.dt}")
        if self.t_max <= 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.perturbation_amplitude < 0:
            raise ValueError("perturbation amplitude must be >= 0")
        if self.snapshot_stride < 1:
            raise ValueError("snapshot_stride must be >= 1")


@dataclass
class SimState:
    """Discretized fields at one instant, with run classification."""

    t: float
    u: "list[float]"
    v: "list[float]"
    mass_u: float
    classification: Classification = Classification.RUNNING


@dataclass(frozen=True)
class ModeProbe:
    """Measured versus predicted linear growth rate of one branch mode."""

    branch: EigenBranchId
    mu: float
    measured_rate: float
    predicted_rate: float


@dataclass(frozen=True)
class RunReport:
    """Summary of a completed simulation run."""

    classification: Classification
    t_final: float
    dt_used: float
    n_steps: int
    mass_drift_u: float
    mass_drift_v: float
    floor_activations: int
    detector_log: tuple[str, ...] = field(default_factory=tuple)
