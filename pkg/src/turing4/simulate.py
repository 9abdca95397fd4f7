"""Time integration of the tensioned fourth-order reaction-diffusion pair.

The system

    u_t = -(u'''' - tau*u'')   + f(u, v)
    v_t = -k*(v'''' - tau*v'') + g(u, v)

is integrated on (-R, R) with free (natural) ends by a first-order IMEX
scheme: diffusion is stepped implicitly through prefactorized banded
Cholesky solves of ``M + dt*K`` (and ``M + dt*k*K``), reaction explicitly.
``K`` is the same conforming second-difference assembly of the quadratic
form ``int (u'')**2 + tau*(u')**2`` used by the spectral oracle, so
constants are annihilated exactly and both masses ``int u``, ``int v`` are
conserved by pure diffusion up to solver roundoff.

For tensions negative enough that ``M + dt*K`` loses positive definiteness
the step size is halved until the factorization succeeds.  The inhibitor is
floored at ``V_FLOOR`` inside the reaction evaluation to guard the ``u**2/v``
term; activations are counted and a persistent floor classifies the run as
blown up, alongside the plain magnitude test.

``probe_linear_rate`` integrates the exactly linearized system seeded with
one discrete eigenvector and fits the amplitude growth against the
dispersion prediction; complex temporal roots are handled by sampling the
envelope at whole oscillation periods.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.linalg import LinAlgError, cho_solve_banded, cholesky_banded, eig_banded

from .dispersion import growth_rate
from .kinetics import V_FLOOR, gm_steady_state, reaction_params
from .spectrum import assemble_free_form, free_branch_mu, spectrum_list
from .types import (
    BoundaryCondition,
    Classification,
    EigenBranchId,
    Method,
    ModeProbe,
    Parity,
    RunReport,
    SimConfig,
    SimState,
    SolverError,
    TensionedOperator,
)

__all__ = [
    "V_FLOOR",
    "build_diffusion_matrix",
    "step_imex",
    "initial_state",
    "run",
    "probe_linear_rate",
]

BLOWUP_MAGNITUDE = 1e6
MAX_DT_HALVINGS = 20
PATTERN_CHANGE_TOL = 1e-6
_AMPLITUDE_FLOOR = 1e-10


def build_diffusion_matrix(R: float, tau: float, n_grid: int) -> tuple[np.ndarray, np.ndarray]:
    """Banded symmetric discretization of ``u -> u'''' - tau*u''`` on (-R, R).

    Returns (lower banded stiffness ``K`` with diagonals 0..2, trapezoid mass
    diagonal ``M``); the generalized eigenvalues of (K, M) approximate the
    free spectrum at second order and ``K @ 1 == 0`` exactly (free conditions
    are natural, never imposed).
    """
    if n_grid < 128:
        raise ValueError(f"n_grid must be >= 128, got {n_grid}")
    return assemble_free_form(R, tau, n_grid)


def _implicit_factor(kband: np.ndarray, mass: np.ndarray, weight: float) -> np.ndarray:
    """Cholesky factor of ``M + weight*K`` in lower banded storage."""
    ab = weight * kband
    ab = ab.copy()
    ab[0, :] += mass
    return cholesky_banded(ab, lower=True)


class _Stepper:
    """Prefactorized IMEX update for one configuration.

    Holds the banded Cholesky factors for both fields at the largest step
    size ``dt <= cfg.dt`` keeping ``M + dt*K`` and ``M + dt*k*K`` positive
    definite (halving at most ``MAX_DT_HALVINGS`` times).
    """

    def __init__(self, cfg: SimConfig) -> None:
        self.cfg = cfg
        kband, mass = build_diffusion_matrix(cfg.R, cfg.tau, cfg.n_grid)
        self.mass = mass
        dt = cfg.dt
        for _ in range(MAX_DT_HALVINGS + 1):
            try:
                self.factor_u = _implicit_factor(kband, mass, dt)
                self.factor_v = _implicit_factor(kband, mass, dt * cfg.k)
            except LinAlgError:
                dt *= 0.5
                continue
            break
        else:
            raise SolverError(
                f"implicit diffusion matrix not positive definite down to "
                f"dt={dt!r} (tau={cfg.tau!r}, R={cfg.R!r})"
            )
        self.dt = dt
        self.total_weight = float(mass.sum())  # = 2R, the measure of the interval
        self.steady = gm_steady_state(cfg.kinetics)

    def reaction(self, u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
        """Vectorized kinetics with the division guard; returns activations.

        Only the autocatalysis denominator is floored; the linear inhibitor
        drain keeps the raw (possibly negative) value so excursions below
        zero are driven back up instead of being frozen at the floor.
        """
        c = self.cfg.kinetics
        floored = int(np.count_nonzero(v < V_FLOOR))
        f = c.k1 - c.k2 * u + c.k3 * u * u / np.maximum(v, V_FLOOR)
        g = c.k4 * u * u - c.k5 * v
        return f, g, floored

    def step(
        self, u: np.ndarray, v: np.ndarray, reaction=None
    ) -> tuple[np.ndarray, np.ndarray, int]:
        """One IMEX step; returns the new fields and floor activations."""
        if reaction is None:
            f, g, floored = self.reaction(u, v)
        else:
            f, g = reaction(u, v)
            floored = 0
        u_new = self._diffuse(self.factor_u, u + self.dt * f)
        v_new = self._diffuse(self.factor_v, v + self.dt * g)
        return u_new, v_new, floored

    def _diffuse(self, factor: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Implicit diffusion of w, with its exact mass invariant restored.

        In exact arithmetic the solve preserves ``int w`` identically (the
        stiffness annihilates constants); the banded solve loses it at the
        eps*condition level, so the constant mode — which diffusion leaves
        untouched anyway — is shifted back.
        """
        out = cho_solve_banded((factor, True), self.mass * w)
        out += float(self.mass @ w - self.mass @ out) / self.total_weight
        return out

    def mass_of(self, field: np.ndarray) -> float:
        return float(self.mass @ field)


@lru_cache(maxsize=8)
def _stepper(cfg: SimConfig) -> _Stepper:
    return _Stepper(cfg)


def step_imex(state: SimState, cfg: SimConfig) -> SimState:
    """Advance one IMEX step; classification flips on the magnitude detector.

    The snapshot-comparison detectors (pattern lock-in, decay) need history
    and live in ``run``; a single step only applies the blow-up magnitude
    test.  Requires a running state.
    """
    if state.classification is not Classification.RUNNING:
        raise ValueError(
            f"step_imex requires a Running state, got {state.classification.value}"
        )
    st = _stepper(cfg)
    u = np.asarray(state.u, dtype=float)
    v = np.asarray(state.v, dtype=float)
    u_new, v_new, _ = st.step(u, v)
    classification = Classification.RUNNING
    if _blown_up(u_new, v_new):
        classification = Classification.BLOWN_UP
    return SimState(
        t=state.t + st.dt,
        u=u_new,
        v=v_new,
        mass_u=st.mass_of(u_new),
        classification=classification,
    )


def initial_state(cfg: SimConfig) -> SimState:
    """Steady state plus seeded uniform noise on both fields.

    Noise is independent per grid point with amplitude
    ``perturbation_amplitude * u0`` (activator scale for both fields); the
    activator field is drawn first, then the inhibitor.
    """
    st = _stepper(cfg)
    rng = np.random.default_rng(cfg.seed)
    npts = cfg.n_grid + 1
    amp = cfg.perturbation_amplitude * st.steady.u0
    u = np.full(npts, st.steady.u0) + amp * rng.uniform(-1.0, 1.0, npts)
    v = np.full(npts, st.steady.v0) + amp * rng.uniform(-1.0, 1.0, npts)
    return SimState(t=0.0, u=u, v=v, mass_u=st.mass_of(u))


def _blown_up(u: np.ndarray, v: np.ndarray) -> bool:
    mags = max(float(np.max(np.abs(u))), float(np.max(np.abs(v))))
    return not math.isfinite(mags) or mags > BLOWUP_MAGNITUDE


def run(cfg: SimConfig, reaction=None) -> tuple[RunReport, list[SimState]]:
    """Integrate to ``t_max`` or a terminal classification; emit snapshots.

    ``reaction`` may override the built-in kinetics with any callable
    ``(u, v) -> (f, g)`` (arrays in, arrays or scalars out); passing
    ``lambda u, v: (0.0, 0.0)`` yields the pure-diffusion run used by the
    conservation checks.  Detectors, evaluated at snapshot boundaries:

    * Patterned — relative change of u between consecutive snapshots below
      ``PATTERN_CHANGE_TOL`` while the spatial amplitude exceeds ten times
      the perturbation amplitude;
    * Decayed — spatial amplitude below a tenth of the perturbation
      amplitude (an exactly unperturbed run reports Decayed immediately);
    * BlownUp — field magnitude beyond ``BLOWUP_MAGNITUDE`` or inhibitor
      floor activations persisting longer than one time unit (checked every
      step).
    """
    st = _stepper(cfg)
    state = initial_state(cfg)
    u = np.asarray(state.u, dtype=float)
    v = np.asarray(state.v, dtype=float)
    u0 = st.steady.u0
    mass0_u = st.mass_of(u)
    mass0_v = st.mass_of(v)

    n_steps = max(1, round(cfg.t_max / st.dt))
    persist_limit = math.ceil(1.0 / st.dt)
    amp_hi = 10.0 * max(cfg.perturbation_amplitude, _AMPLITUDE_FLOOR)
    amp_lo = 0.1 * max(cfg.perturbation_amplitude, _AMPLITUDE_FLOOR)

    snapshots = [state]
    log: list[str] = []
    classification = Classification.RUNNING
    prev_snap_u = u.copy()
    consecutive_floor = 0
    total_floor = 0
    step_index = 0
    t = 0.0

    while step_index < n_steps and classification is Classification.RUNNING:
        u, v, floored = st.step(u, v, reaction)
        step_index += 1
        t = step_index * st.dt
        total_floor += floored
        consecutive_floor = consecutive_floor + 1 if floored else 0
        if consecutive_floor > persist_limit:
            classification = Classification.BLOWN_UP
            log.append(
                f"inhibitor floor active for {consecutive_floor} consecutive "
                f"steps at t={t:.6g}"
            )
        elif _blown_up(u, v):
            classification = Classification.BLOWN_UP
            log.append(f"field magnitude exceeded {BLOWUP_MAGNITUDE:g} at t={t:.6g}")

        at_snapshot = (
            step_index % cfg.snapshot_stride == 0
            or step_index == n_steps
            or classification is not Classification.RUNNING
        )
        if not at_snapshot:
            continue
        if classification is Classification.RUNNING:
            amplitude = 0.5 * (float(np.max(u)) - float(np.min(u))) / u0
            scale = max(float(np.max(np.abs(prev_snap_u))), _AMPLITUDE_FLOOR)
            change = float(np.max(np.abs(u - prev_snap_u))) / scale
            if amplitude < amp_lo:
                classification = Classification.DECAYED
                log.append(
                    f"amplitude {amplitude:.3g} under the decay threshold "
                    f"{amp_lo:.3g} at t={t:.6g}"
                )
            elif change < PATTERN_CHANGE_TOL and amplitude > amp_hi:
                classification = Classification.PATTERNED
                log.append(
                    f"stationary profile: snapshot change {change:.3g} with "
                    f"amplitude {amplitude:.3g} at t={t:.6g}"
                )
            prev_snap_u = u.copy()
        snapshots.append(
            SimState(
                t=t,
                u=u.copy(),
                v=v.copy(),
                mass_u=st.mass_of(u),
                classification=classification,
            )
        )

    elapsed = max(t, st.dt)
    report = RunReport(
        classification=classification,
        t_final=t,
        dt_used=st.dt,
        n_steps=step_index,
        mass_drift_u=abs(st.mass_of(u) - mass0_u) / elapsed,
        mass_drift_v=abs(st.mass_of(v) - mass0_v) / elapsed,
        floor_activations=total_floor,
        detector_log=tuple(log),
    )
    return report, snapshots


# --------------------------------------------------------------------------
# linear-regime growth-rate probe
# --------------------------------------------------------------------------

def _discrete_mode(cfg: SimConfig, branch: EigenBranchId) -> np.ndarray:
    """Normalized discrete eigenvector of one free branch on the grid.

    The eigenvector rank is the branch's position in the ascending analytic
    spectrum (the same rank matching the spectral oracle uses); the zero
    branch is the exact constant null vector.
    """
    kband, mass = build_diffusion_matrix(cfg.R, cfg.tau, cfg.n_grid)
    npts = mass.size
    if branch.parity is Parity.ZERO:
        return np.full(npts, 1.0 / math.sqrt(npts))
    op = TensionedOperator(tau=cfg.tau, bc=BoundaryCondition.FREE)
    count = 8
    while True:
        pts = spectrum_list(op, cfg.R, count, Method.PARAMETERIZED)
        ranks = [i for i, pt in enumerate(pts) if pt.branch == branch]
        if ranks:
            rank = ranks[0]
            break
        if count >= 512:
            raise SolverError(
                f"branch ({branch.parity.value}, {branch.index}) not within "
                f"the first {count} modes at tau={cfg.tau!r}, R={cfg.R!r}"
            )
        count *= 2
    inv_sqrt = 1.0 / np.sqrt(mass)
    sband = np.zeros_like(kband)
    for d in range(3):
        sband[d, : npts - d] = kband[d, : npts - d] * inv_sqrt[: npts - d] * inv_sqrt[d:]
    _, vec = eig_banded(
        sband, lower=True, select="i", select_range=(rank, rank)
    )
    phi = inv_sqrt * vec[:, 0]
    phi /= math.sqrt(float(phi @ phi))
    if phi[int(np.argmax(np.abs(phi)))] < 0.0:
        phi = -phi
    return phi


def _mode_seed(p, k: float, mu: float, lam: float, disc: float) -> tuple[float, float]:
    """Real 2-vector seeding the (u, v) mode amplitudes.

    For real temporal roots this is the eigenvector of the 2x2 mode matrix
    at the dominant root, so the amplitude is a clean exponential; for a
    complex pair any real seed works because the envelope is sampled at
    whole periods.
    """
    if disc < 0.0:
        return 1.0, 0.0
    a00 = -mu + p.f_u
    a11 = -k * mu + p.g_v
    v1 = (p.f_v, lam - a00)
    v2 = (lam - a11, p.g_u)
    cu, cv = max(v1, v2, key=lambda w: w[0] * w[0] + w[1] * w[1])
    norm = math.hypot(cu, cv)
    return cu / norm, cv / norm


def probe_linear_rate(cfg: SimConfig, branch: EigenBranchId) -> ModeProbe:
    """Measured versus predicted temporal growth rate of one spatial mode.

    Integrates the linearized system (Jacobian frozen at the steady state)
    seeded with the branch's discrete eigenvector and fits the log-amplitude
    slope: over whole envelope periods when the temporal roots are complex,
    by least squares across an ``exp(+-2)`` window when real.
    """
    p = reaction_params(cfg.kinetics, cfg.k)
    if branch.parity is Parity.ZERO:
        mu = 0.0
    elif branch.parity in (Parity.EVEN, Parity.ODD):
        mu = free_branch_mu(branch, cfg.tau, cfg.R)
    else:
        raise ValueError(f"the probe requires a free-interval branch, got {branch}")
    gr = growth_rate(p, mu)
    predicted = gr.lambda_max_real
    disc = gr.F * gr.F - 4.0 * gr.H

    phi = _discrete_mode(cfg, branch)
    cu, cv = _mode_seed(p, cfg.k, mu, predicted, disc)

    if disc < 0.0:
        omega = 0.5 * math.sqrt(-disc)
        period = 2.0 * math.pi / omega
        steps_per_period = max(1, math.ceil(period / cfg.dt))
        dt = period / steps_per_period
        n_steps = 2 * steps_per_period
        sample_every = steps_per_period
    else:
        window = 2.0 / max(abs(predicted), 0.1)
        n_steps = max(64, math.ceil(window / cfg.dt))
        dt = window / n_steps
        sample_every = max(1, n_steps // 64)

    kband, mass = build_diffusion_matrix(cfg.R, cfg.tau, cfg.n_grid)
    factor_u = _implicit_factor(kband, mass, dt)
    factor_v = _implicit_factor(kband, mass, dt * cfg.k)
    du = cu * phi
    dv = cv * phi

    times = [0.0]
    amps = [math.hypot(math.sqrt(float(du @ du)), math.sqrt(float(dv @ dv)))]
    for i in range(1, n_steps + 1):
        fu = p.f_u * du + p.f_v * dv
        gv = p.g_u * du + p.g_v * dv
        du = cho_solve_banded((factor_u, True), mass * (du + dt * fu))
        dv = cho_solve_banded((factor_v, True), mass * (dv + dt * gv))
        if i % sample_every == 0 or i == n_steps:
            times.append(i * dt)
            amps.append(math.hypot(math.sqrt(float(du @ du)), math.sqrt(float(dv @ dv))))

    log_amps = np.log(amps)
    if disc < 0.0:
        measured = float((log_amps[-1] - log_amps[0]) / (times[-1] - times[0]))
    else:
        measured = float(np.polyfit(times, log_amps, 1)[0])
    return ModeProbe(
        branch=branch, mu=mu, measured_rate=measured, predicted_rate=predicted
    )
