"""Instability regions of the (R, tau)-plane for fixed reaction parameters.

Each spatial eigenvalue branch carves out regions where its rescaled value
``R**-4 * mu_l(tau * R**2)`` destabilizes the kinetics:

* plus regions   — branch value inside the band ``(a, b)``;
* minus regions  — branch value below ``A`` (tension-assisted, ``tau < 0``);
* tilde regions  — the band case when the band itself is negative
  (weighted trace negative), necessarily ``tau < 0``;
* periodic regions — the same tests against the periodic eigenvalues
  ``(l*pi)**4 + tau*R**2*(l*pi)**2`` rescaled by ``R**-4``.

Boundary curves of plus regions follow in closed parametric form from the
(alpha, beta) branch coordinates: on the level set ``mu = level * R**4``,

    R(alpha) = (alpha**2 * beta**2 / level) ** (1/4),
    tau(alpha) = (beta**2 - alpha**2) / R**2.

Minus/tilde boundaries are computed per R by monotone inversion of the
branch value in the tension, searching ``tau`` in ``[-C_R, 0)`` with
``C_R = max(100, 50/R**2)`` and geometric expansion if the level is not yet
reached.  Rasters decide membership at cell centers only.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .dispersion import in_turing_space, quantities
from .spectrum import (
    _beta_from_alpha,
    _log_polish,
    _negative_zeros,
    _odd0_tension_gap,
    branch_parameterization,
    crossing_tau,
    free_branch_mu,
    periodic_mu,
    spectrum_list,
)
from .types import BranchParameterization
from .types import (
    BoundaryCondition,
    DispersionQuantities,
    EigenBranchId,
    EquivalenceReport,
    Family,
    FamilyPreconditionError,
    GridRaster,
    NestingReport,
    Parity,
    ReactionParams,
    RegionBoundary,
    RegionSpec,
    Side,
    SolverError,
    TensionedOperator,
)

__all__ = [
    "region_contains",
    "boundary_tau",
    "boundary_curve",
    "rasterize",
    "check_nesting",
    "ts_equivalence",
    "classification_spectrum",
    "turing_union_contains",
]

_PLUS = (Family.E_PLUS, Family.O_PLUS)
_MINUS = (Family.E_MINUS, Family.O_MINUS)
_TILDE = (Family.E_TILDE, Family.O_TILDE)
_FREE = _PLUS + _MINUS + _TILDE
_PERIODIC = (Family.I_PER_PLUS, Family.I_PER_MINUS)

#: Default half-length window for R-sampled boundary curves and nesting.
R_WINDOW = (0.05, 25.0)
_FLOAT_EPS = float(np.finfo(float).eps)


def _family_parity(family: Family) -> Parity:
    if family in (Family.E_PLUS, Family.E_MINUS, Family.E_TILDE):
        return Parity.EVEN
    if family in (Family.O_PLUS, Family.O_MINUS, Family.O_TILDE):
        return Parity.ODD
    return Parity.PERIODIC


def _require(ok: bool, family: Family, what: str) -> None:
    if not ok:
        raise FamilyPreconditionError(
            f"family {family.value} requires {what} for these reaction "
            "parameters"
        )


def _check_preconditions(family: Family, q: DispersionQuantities) -> None:
    """Validate the structural conditions each family presumes."""
    if family in (Family.E_MINUS, Family.O_MINUS, Family.I_PER_MINUS):
        _require(q.trace_negative, family, "a negative kinetic trace")
    elif family in (Family.E_PLUS, Family.O_PLUS, Family.I_PER_PLUS):
        _require(q.disc_positive, family, "a positive band discriminant")
    else:  # tilde
        _require(q.trace_negative, family, "a negative kinetic trace")
        _require(q.det_positive, family, "a positive kinetic determinant")
        _require(q.disc_positive, family, "a positive band discriminant")
        _require(
            not q.weighted_trace_positive,
            family,
            "a nonpositive weighted trace (the band must be negative)",
        )


def _branch_value(spec: RegionSpec, R: float, tau: float) -> float:
    parity = _family_parity(spec.family)
    if parity is Parity.PERIODIC:
        return periodic_mu(spec.l, tau, R)
    return free_branch_mu(EigenBranchId(parity, spec.l), tau, R)


def _contains(spec: RegionSpec, q: DispersionQuantities, R: float, tau: float) -> bool:
    """Membership test assuming preconditions were already validated."""
    if spec.family in _MINUS + _TILDE + (Family.I_PER_MINUS,) and not tau < 0.0:
        return False
    value = _branch_value(spec, R, tau)
    if spec.family in _MINUS + (Family.I_PER_MINUS,):
        return value < q.A
    return q.a < value < q.b


def region_contains(spec: RegionSpec, p: ReactionParams, R: float, tau: float) -> bool:
    """Strict membership of (R, tau) in one instability region."""
    if R <= 0:
        raise ValueError(f"half-length R must be positive, got {R}")
    q = quantities(p)
    _check_preconditions(spec.family, q)
    return _contains(spec, q, R, tau)


# --------------------------------------------------------------------------
# boundary curves
# --------------------------------------------------------------------------

def _invert_branch_tau_unit(
    parity: Parity, l: int, target: float, sigma_max: float
) -> float:
    """Tension tau_unit with branch value target (monotone in tau_unit).

    Works in the signed distance sigma from the branch crossing, laddering
    log-uniformly until the target level is straddled, then polishing in
    log(sigma) so tiny offsets keep relative precision.  Raises SolverError
    if the level is not reached within ``sigma_max``.
    """
    cross = crossing_tau(parity, l)
    if target == 0.0:
        return cross
    sgn = 1.0 if target > 0.0 else -1.0

    def excess(sigma: float) -> float:
        tau_unit = cross + sgn * sigma
        if sgn > 0.0:
            value = branch_parameterization(parity, l, tau_unit).mu
        else:
            value = _negative_zeros(tau_unit, parity)[l]
        return (value - target) * sgn

    sigma_lo = 1e-13 * max(1.0, abs(cross))
    if excess(sigma_lo) >= 0.0:
        return cross + sgn * sigma_lo
    ladder = np.geomspace(sigma_lo, sigma_max, max(8, int(4 * math.log10(sigma_max / sigma_lo))))
    prev = sigma_lo
    for sigma in ladder[1:]:
        if excess(sigma) >= 0.0:
            t = _log_bracket_root(excess, prev, sigma)
            return cross + sgn * t
        prev = sigma
    raise SolverError(
        f"no tension with branch ({parity.value}, {l}) value {target!r} "
        f"within sigma <= {sigma_max!r} of the crossing"
    )


def _log_bracket_root(fn, lo: float, hi: float) -> float:
    return _log_polish(fn, lo, hi)


def _level(spec: RegionSpec, q: DispersionQuantities, side: Side) -> float:
    if spec.family in _MINUS + (Family.I_PER_MINUS,):
        if side is not Side.TOP:
            raise ValueError(
                f"family {spec.family.value} has only a Top boundary (level A)"
            )
        return q.A
    return q.b if side is Side.TOP else q.a


def boundary_tau(spec: RegionSpec, p: ReactionParams, side: Side, R: float) -> float:
    """The tension on one boundary of a region at fixed half-length R.

    Solves ``R**-4 * mu_l(tau*R**2) = level`` for tau by monotone inversion;
    the search window ``[-max(100, 50/R**2), 0)`` (negative levels) is
    expanded geometrically before giving up, and positive levels are always
    reachable above the crossing.
    """
    if R <= 0:
        raise ValueError(f"half-length R must be positive, got {R}")
    q = quantities(p)
    _check_preconditions(spec.family, q)
    level = _level(spec, q, side)
    parity = _family_parity(spec.family)
    if parity is Parity.PERIODIC:
        if spec.l == 0:
            raise ValueError(
                "the periodic l=0 branch is identically zero and bounds no region"
            )
        lp = spec.l * math.pi
        return (level * R**4 - lp**4) / (R * R * lp * lp)
    target = level * R**4
    cross = crossing_tau(parity, spec.l)
    if target > 0.0:
        sigma_max = 10.0 * (abs(cross) + 1.0)
        for _ in range(60):
            try:
                return _invert_branch_tau_unit(parity, spec.l, target, sigma_max) / (R * R)
            except SolverError:
                sigma_max *= 2.0
        raise SolverError(
            f"level {level!r} unreachable for {spec.family.value}:{spec.l} at R={R!r}"
        )
    window = max(100.0, 50.0 / (R * R))
    for _ in range(8):
        sigma_max = window * R * R - cross  # distance from crossing to -window*R**2
        if sigma_max > 0.0:
            try:
                return _invert_branch_tau_unit(parity, spec.l, target, sigma_max) / (R * R)
            except SolverError:
                pass
        window *= 2.0
    raise SolverError(
        f"no tension in the search window reaches level {level!r} for "
        f"{spec.family.value}:{spec.l} at R={R!r}"
    )


def _alpha_window_interior(parity: Parity, l: int, eps: float = 1e-6) -> tuple[float, float]:
    if parity is Parity.ODD:
        lo, hi = l * math.pi, (2 * l + 1) * math.pi / 2
    else:
        lo, hi = (2 * l + 1) * math.pi / 2, (l + 1) * math.pi
    return lo + eps, hi - eps


def _plus_point(parity: Parity, l: int, alpha: float, level: float) -> tuple[float, float]:
    if parity is Parity.ODD and l == 0:
        gap = _odd0_tension_gap(alpha)
        mu_unit = alpha * alpha * (alpha * alpha + gap)
        R = (mu_unit / level) ** 0.25
        return R, gap / (R * R)
    par = branch_parameterization_from_alpha(parity, l, alpha)
    mu_unit = par.mu
    R = (mu_unit / level) ** 0.25
    tau = par.tau / (R * R)
    return R, tau


def branch_parameterization_from_alpha(
    parity: Parity, l: int, alpha: float
) -> BranchParameterization:
    """Branch coordinates at a prescribed interior alpha (beta solved)."""
    lo, hi = _alpha_window_interior(parity, l, 0.0)
    if not (lo < alpha < hi):
        raise ValueError(
            f"alpha={alpha!r} outside the ({parity.value}, {l}) window ({lo}, {hi})"
        )
    return BranchParameterization(
        alpha=alpha, beta=_beta_from_alpha(parity, alpha), parity=parity
    )


def boundary_curve(
    spec: RegionSpec, p: ReactionParams, side: Side, samples: int
) -> RegionBoundary:
    """One boundary curve of a region, as (R, tau) samples.

    Plus families with a positive band use the closed parametric form over
    the branch's alpha window (densified where the tension jumps); all other
    families sample R geometrically over ``R_WINDOW`` and invert the
    defining equality per point.
    """
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    q = quantities(p)
    _check_preconditions(spec.family, q)
    level = _level(spec, q, side)
    parity = _family_parity(spec.family)

    if spec.family in _PLUS and level > 0.0:
        lo, hi = _alpha_window_interior(parity, spec.l)
        alphas = list(np.linspace(lo, hi, samples))
        pts = [_plus_point(parity, spec.l, al, level) for al in alphas]
        # densify where consecutive tensions jump
        for _ in range(3):
            taus = [t for _, t in pts]
            span = max(taus) - min(taus)
            cap = span / max(8, samples // 4)
            inserts = [
                i
                for i in range(len(pts) - 1)
                if abs(taus[i + 1] - taus[i]) > cap
            ]
            if not inserts or len(pts) > 4 * samples:
                break
            for off, i in enumerate(inserts):
                mid = 0.5 * (alphas[i + off] + alphas[i + off + 1])
                alphas.insert(i + off + 1, mid)
                pts.insert(i + off + 1, _plus_point(parity, spec.l, mid, level))
        return RegionBoundary(spec=spec, side=side, curve=tuple(pts))

    if parity is Parity.PERIODIC:
        scale = (spec.l * math.pi) ** 2
    else:
        scale = abs(crossing_tau(parity, spec.l))
    # The emitted tau only resolves the rescaled tension to ~eps*|crossing|,
    # and the branch slope there (~|crossing| again) turns that quantization
    # into an absolute mu noise ~eps*crossing**2, while the level target
    # shrinks like R**4; start the window where the noise sits a decade under
    # the 1e-8 relative residual contract.
    r_lo = R_WINDOW[0]
    if scale > 0.0 and level != 0.0:
        r_lo = max(r_lo, (_FLOAT_EPS * scale * scale / (1e-9 * abs(level))) ** 0.25)
    r_vals = np.geomspace(r_lo, R_WINDOW[1], samples)
    pts = [(float(R), boundary_tau(spec, p, side, float(R))) for R in r_vals]
    return RegionBoundary(spec=spec, side=side, curve=tuple(pts))


# --------------------------------------------------------------------------
# rasters
# --------------------------------------------------------------------------

def classification_spectrum(
    p: ReactionParams,
    tau: float,
    R: float,
    bc: BoundaryCondition = BoundaryCondition.FREE,
) -> list[float]:
    """Enough of the spectrum for a conclusive instability test.

    Grows the eigenvalue count until the spectrum passes the upper band edge
    (beyond which no eigenvalue can destabilize), so the classifier sees
    every relevant mode.
    """
    q = quantities(p)
    upper = q.b if q.b is not None else 0.0
    target = max(upper, 0.0) + 1.0 + 0.1 * abs(upper)
    op = TensionedOperator(tau=tau, bc=bc)
    count = 16
    while True:
        pts = spectrum_list(op, R, count)
        if pts[-1].mu > target or count >= 4096:
            return [pt.mu for pt in pts]
        count *= 2


def turing_union_contains(p: ReactionParams, R: float, tau: float) -> bool:
    """Membership of (R, tau) in the union of all free branch regions.

    Walks branch indices upward per parity and stops once both parity
    values exceed the upper band edge; minus-region membership is included
    for negative tensions.
    """
    q = quantities(p)
    if q.a is None:
        raise FamilyPreconditionError(
            "the band (a, b) is undefined: positive discriminant required"
        )
    for l in range(256):
        above_band = 0
        for parity in (Parity.EVEN, Parity.ODD):
            value = free_branch_mu(EigenBranchId(parity, l), tau, R)
            if q.a < value < q.b:
                return True
            if tau < 0.0 and q.trace_negative and value < q.A:
                return True
            if value > q.b:
                above_band += 1
        if above_band == 2:
            return False
    raise SolverError(
        f"branch walk did not clear the band at R={R!r}, tau={tau!r}"
    )


def _raster_row(
    fam_list: tuple[RegionSpec, ...],
    q: DispersionQuantities,
    p: ReactionParams,
    r_centers: np.ndarray,
    tau: float,
    cross_check: bool,
) -> tuple[int, ...]:
    row = []
    for R in r_centers:
        mask = 0
        free_hit = False
        per_hit = False
        for bit, spec in enumerate(fam_list):
            if _contains(spec, q, float(R), tau):
                mask |= 1 << bit
                if spec.family in _PERIODIC:
                    per_hit = True
                else:
                    free_hit = True
        if cross_check and (free_hit or per_hit):
            legs_ok = (
                all(q.conditions)
                if tau >= 0.0
                else (q.trace_negative and q.det_positive)
            )
            if legs_ok:
                for hit, bc in (
                    (free_hit, BoundaryCondition.FREE),
                    (per_hit, BoundaryCondition.PERIODIC),
                ):
                    if not hit:
                        continue
                    spectrum = classification_spectrum(p, tau, float(R), bc)
                    if not in_turing_space(p, tau, spectrum).member:
                        raise SolverError(
                            f"raster cross-check failed at R={R!r}, "
                            f"tau={tau!r} ({bc.value}): region member but "
                            "classifier disagrees"
                        )
        row.append(mask)
    return tuple(row)


def rasterize(
    p: ReactionParams,
    r_range: tuple[float, float],
    tau_range: tuple[float, float],
    n: int | tuple[int, int],
    families: list[RegionSpec] | tuple[RegionSpec, ...],
    cross_check: bool = True,
    threads: int | None = None,
) -> GridRaster:
    """Region-membership bitmask raster over a rectangle of (R, tau).

    Cell (i, j) covers tau row i (ascending) and R column j (ascending) and
    is decided at its center.  Bit ``k`` of a cell corresponds to
    ``families[k]`` after deterministic (family, l) ordering.  Cells claimed
    by any family are cross-checked against the instability classifier
    whenever the classifier's own route conditions hold for p.
    """
    n_r, n_tau = (n, n) if isinstance(n, int) else n
    if n_r < 2 or n_tau < 2:
        raise ValueError(f"raster resolution must be >= 2, got {(n_r, n_tau)}")
    r_min, r_max = map(float, r_range)
    tau_min, tau_max = map(float, tau_range)
    if not (r_min < r_max and r_min > 0):
        raise ValueError(f"invalid R range ({r_min}, {r_max})")
    if not tau_min < tau_max:
        raise ValueError(f"invalid tau range ({tau_min}, {tau_max})")
    fam_list = tuple(
        sorted(set(families), key=lambda s: (s.family.value, s.l))
    )
    if not fam_list:
        raise ValueError("at least one region family is required")
    if len(fam_list) > 62:
        raise ValueError(f"too many families for a bitmask raster: {len(fam_list)}")
    q = quantities(p)
    for spec in fam_list:
        _check_preconditions(spec.family, q)
    dr = (r_max - r_min) / n_r
    dt = (tau_max - tau_min) / n_tau
    r_centers = r_min + dr * (np.arange(n_r) + 0.5)
    tau_centers = tau_min + dt * (np.arange(n_tau) + 0.5)

    def job(i: int) -> tuple[int, ...]:
        return _raster_row(fam_list, q, p, r_centers, float(tau_centers[i]), cross_check)

    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(job, range(n_tau)))
    else:
        rows = [job(i) for i in range(n_tau)]
    return GridRaster(
        r_min=r_min,
        r_max=r_max,
        tau_min=tau_min,
        tau_max=tau_max,
        n_r=n_r,
        n_tau=n_tau,
        families=fam_list,
        cells=tuple(rows),
    )


# --------------------------------------------------------------------------
# structural checks
# --------------------------------------------------------------------------

def check_nesting(
    p: ReactionParams,
    family: Family,
    l_max: int,
    r_values: list[float] | None = None,
) -> NestingReport:
    """Monotone movement of region boundaries as the branch index grows.

    For minus families the Top level-A curves must descend strictly in l;
    for plus/tilde families both Top and Bottom curves must.  Returns the
    worst tension margin over the sampled half-lengths.
    """
    if l_max < 1:
        raise ValueError(f"l_max must be >= 1, got {l_max}")
    q = quantities(p)
    _check_preconditions(family, q)
    if r_values is None:
        r_values = [float(r) for r in np.geomspace(0.5, 25.0, 12)]
    sides = (Side.TOP,) if family in _MINUS + (Family.I_PER_MINUS,) else (
        Side.TOP,
        Side.BOTTOM,
    )
    l_start = 1 if family in _PERIODIC else 0
    details: list[tuple[int, str, float, float]] = []
    worst = math.inf
    for l in range(l_start, l_max):
        for side in sides:
            for R in r_values:
                t_here = boundary_tau(RegionSpec(family, l), p, side, R)
                t_next = boundary_tau(RegionSpec(family, l + 1), p, side, R)
                margin = t_here - t_next
                details.append((l, side.value, R, margin))
                worst = min(worst, margin)
    return NestingReport(
        family=family,
        l_max=l_max,
        passed=worst > 0.0,
        worst_margin=worst,
        details=tuple(details),
    )


def ts_equivalence(
    p: ReactionParams, samples: list[tuple[float, float]]
) -> EquivalenceReport:
    """Pointwise equality of the region union and the instability test.

    For each sampled (R, tau), membership of the union of all free branch
    regions must match the classifier fed with the full free spectrum.
    Requires reaction parameters satisfying all four structural conditions.
    """
    q = quantities(p)
    if not all(q.conditions):
        raise FamilyPreconditionError(
            "the union decomposition requires all four structural conditions"
        )
    disagreements: list[tuple[float, float, bool, bool]] = []
    for R, tau in samples:
        via_regions = turing_union_contains(p, float(R), float(tau))
        spectrum = classification_spectrum(p, float(tau), float(R))
        via_classifier = in_turing_space(p, float(tau), spectrum).member
        if via_regions != via_classifier:
            disagreements.append((float(R), float(tau), via_regions, via_classifier))
    return EquivalenceReport(
        n_samples=len(samples),
        n_disagreements=len(disagreements),
        disagreements=tuple(disagreements),
    )
