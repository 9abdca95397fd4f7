"""Eigenvalues of u'''' - tau*u'' = mu*u on (-R, R), free or periodic ends.

Everything is reduced to the unit interval through
``mu(R, tau) = R**-4 * mu(1, tau*R**2)``.  On the unit interval three
mutually checking methods are provided:

* **Parameterized** (upper half-plane, ``mu > 0``): a free eigenfunction of
  parity even/odd is ``A*cos(alpha*x) + B*cosh(beta*x)`` resp.
  ``A*sin(alpha*x) + B*sinh(beta*x)`` with ``beta**2 - alpha**2 = tau`` and
  ``mu = alpha**2 * beta**2``.  The boundary conditions collapse to one
  transcendental relation per parity (odd: ``alpha**3*tan(alpha) =
  beta**3*tanh(beta)``; even: ``beta**3*tan(alpha) = -alpha**3*tanh(beta)``),
  and branch ``l`` lives on the alpha-window ``[l*pi, (2l+1)*pi/2)`` (odd)
  resp. ``[(2l+1)*pi/2, (l+1)*pi)`` (even).
* **Determinant** (lower half-plane and cross-checks): a characteristic
  determinant assembled from the four roots of ``r**4 - tau*r**2 - mu = 0``,
  with a dedicated numerically stable basis in each root regime and scaled
  exponentials, whose sign changes bracket eigenvalues.
* **Finite differences**: a symmetric second-order discretization of the
  quadratic form ``int (u'')**2 + tau*(u')**2`` (free conditions are natural,
  no constraint rows).

The constant eigenfunction contributes ``mu = 0`` for every tau and is
reported as the ``Parity.ZERO`` branch; even/odd branch indices then follow
the crossing rule ``mu_l^odd(-(l*pi)**2) = 0`` and
``mu_l^even(-((2l+1)*pi/2)**2) = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.linalg import eig_banded
from scipy.optimize import brentq

from .types import (
    BoundaryCondition,
    BranchNotFoundError,
    BranchParameterization,
    EigenBranchId,
    Method,
    MuastNotFoundError,
    Parity,
    SolverError,
    SpectrumPoint,
    TensionedOperator,
)

__all__ = [
    "periodic_mu",
    "free_branch_mu",
    "branch_parameterization",
    "crossing_tau",
    "characteristic_det",
    "spectrum_list",
    "rescale_mu",
    "fd_eigensolve",
    "negative_eigenvalues",
    "find_muast",
    "MuastResult",
]

_EPS = float(np.finfo(float).eps)
def _log_polish(fn, lo: float, hi: float):
    """Refine a bracketed sign change of ``fn`` on (lo, hi), 0 < lo < hi or
    lo < hi < 0, in log-magnitude coordinates.

    Working in ``t = log|x|`` makes the final tolerance relative to the root
    magnitude, so roots arbitrarily close to zero keep full significance.
    The ``exp(log(x))`` round trip can perturb an endpoint past a root that
    sits within an ulp of it; when that loses the straddle, the nearer
    endpoint is already converged and is returned as is.
    """
    neg = lo < 0.0
    if neg:
        ta, tb = math.log(-hi), math.log(-lo)

        def g(t: float) -> float:
            return fn(-math.exp(t))

    else:
        ta, tb = math.log(lo), math.log(hi)

        def g(t: float) -> float:
            return fn(math.exp(t))

    fa, fb = g(ta), g(tb)
    if fa == 0.0 or fb == 0.0 or (fa < 0.0) == (fb < 0.0):
        t = ta if abs(fa) <= abs(fb) else tb
    else:
        t = brentq(g, ta, tb, xtol=1e-13, rtol=4 * _EPS, maxiter=200)
    return -math.exp(t) if neg else math.exp(t)


# --------------------------------------------------------------------------
# characteristic determinant
# --------------------------------------------------------------------------

def _det_pair(tau: float, mu) -> tuple[np.ndarray, np.ndarray]:
    """Scaled even/odd characteristic determinants on (-1, 1).

    Vectorized over ``mu``.  Each factor vanishes exactly at the free
    eigenvalues of its parity and is continuous across the regime boundaries
    ``mu = 0`` and ``tau**2 + 4*mu = 0`` (where the fundamental basis
    degenerates, both factors touch zero without changing sign).  Growing
    exponentials are scaled out so values stay finite for large arguments.
    """
    mu = np.atleast_1d(np.asarray(mu, dtype=float)).copy()
    even = np.zeros_like(mu)
    odd = np.zeros_like(mu)

    disc = tau * tau + 4.0 * mu
    on_boundary = (disc == 0.0) & (mu != 0.0)
    if np.any(on_boundary):
        # exact basis degeneration: nudge proportionally into the adjacent
        # regime (an absolute floor would fling tiny mu across distant roots)
        mu[on_boundary] -= 1e-12 * np.abs(mu[on_boundary])
        disc = tau * tau + 4.0 * mu

    # mu > 0: one oscillatory and one hyperbolic pair of roots.  The smaller
    # squared root differences nearly equal quantities when |mu| << tau**2,
    # so it is recovered from the exact product alpha**2 * beta**2 = mu.
    sel = mu > 0.0
    if np.any(sel):
        sq = np.sqrt(disc[sel])
        if tau >= 0.0:
            beta = np.sqrt((sq + tau) / 2.0)
            alpha = np.sqrt(mu[sel]) / beta
        else:
            alpha = np.sqrt((sq - tau) / 2.0)
            beta = np.sqrt(mu[sel]) / alpha
        th = np.tanh(beta)
        ab = alpha * beta
        even[sel] = -ab * (alpha**3 * np.cos(alpha) * th + beta**3 * np.sin(alpha))
        odd[sel] = ab * (beta**3 * th * np.cos(alpha) - alpha**3 * np.sin(alpha))

    # mu < 0 with positive discriminant: both r**2 real, same sign as tau;
    # the smaller squared root again comes from the product identity
    # (r1*r2)**2 = -mu to dodge the |tau| - sqrt(disc) cancellation.
    sel = (mu < 0.0) & (disc > 0.0)
    if np.any(sel):
        sq = np.sqrt(disc[sel])
        if tau < 0.0:
            a1 = np.sqrt((-tau + sq) / 2.0)
            a2 = np.sqrt(-mu[sel]) / a1
            pref = a1 * a2
            even[sel] = pref * (
                a1**3 * np.cos(a1) * np.sin(a2) - a2**3 * np.cos(a2) * np.sin(a1)
            )
            odd[sel] = pref * (
                a2**3 * np.cos(a1) * np.sin(a2) - a1**3 * np.sin(a1) * np.cos(a2)
            )
        else:
            b1 = np.sqrt((tau + sq) / 2.0)
            b2 = np.sqrt(-mu[sel]) / b1
            t1 = np.tanh(b1)
            t2 = np.tanh(b2)
            pref = b1 * b2
            # strictly negative for tau > 0: no eigenvalues in this regime
            even[sel] = pref * (b2**3 * t1 - b1**3 * t2)
            odd[sel] = pref * (b2**3 * t2 - b1**3 * t1)

    # mu < -tau**2/4: complex-conjugate pairs r = +-(p +- i q); near the
    # discriminant sign change one of p, q collapses and is computed from
    # p**2 * q**2 = -disc/16 instead of the cancelling difference
    sel = disc < 0.0
    if np.any(sel):
        xi = np.sqrt(-mu[sel])
        if tau >= 0.0:
            p = np.sqrt((xi + tau / 2.0) / 2.0)
            q = np.sqrt(-disc[sel]) / (4.0 * p)
        else:
            q = np.sqrt((xi - tau / 2.0) / 2.0)
            p = np.sqrt(-disc[sel]) / (4.0 * q)
        e2p = np.exp(-2.0 * p)
        sh = (1.0 - e2p * e2p) / 2.0  # sinh(2p) * exp(-2p)
        sn = np.sin(2.0 * q) * e2p
        t1 = q * (3.0 * p * p - q * q) * sh
        t2 = p * (p * p - 3.0 * q * q) * sn
        pref = 0.5 * (p * p + q * q)
        even[sel] = pref * (t1 - t2)
        odd[sel] = pref * (t1 + t2)

    return even, odd


def characteristic_det(tau: float, mu: float) -> float:
    """Characteristic determinant of the free problem on the unit interval.

    Returns a single real value whose zeros (over ``mu`` at fixed ``tau``)
    are exactly the free eigenvalues, assembled as the product of the even
    and odd parity factors; sign changes bracket eigenvalues.  ``mu = 0`` is
    always an eigenvalue (constant mode) and evaluates to exactly zero.
    """
    even, odd = _det_pair(float(tau), float(mu))
    return float(even[0] * odd[0])


# --------------------------------------------------------------------------
# branch windows and the upper-half-plane parameterization
# --------------------------------------------------------------------------

def _alpha_window(parity: Parity, l: int) -> tuple[float, float]:
    if parity is Parity.ODD:
        return l * math.pi, (2 * l + 1) * math.pi / 2
    if parity is Parity.EVEN:
        return (2 * l + 1) * math.pi / 2, (l + 1) * math.pi
    raise ValueError(f"no alpha window for parity {parity}")


def crossing_tau(parity: Parity, l: int) -> float:
    """Unit-interval tension at which branch (parity, l) crosses mu = 0."""
    w_lo, _ = _alpha_window(parity, l)
    return -(w_lo**2)


def _crossing_slope(parity: Parity, l: int) -> float:
    """d(mu)/d(tau) of branch (parity, l) at its zero crossing.

    The crossing eigenfunction is ``x`` (odd, l=0), ``sin(l*pi*x)`` (odd,
    l>=1) or ``cos((2l+1)*pi*x/2)`` (even), and first-order perturbation
    gives the slope as the Rayleigh ratio ``int (u')**2 / int u**2``.
    """
    if parity is Parity.ODD and l == 0:
        return 3.0
    w_lo, _ = _alpha_window(parity, l)
    return w_lo**2


def _beta_from_alpha(parity: Parity, alpha: float) -> float:
    """Solve the parity relation for beta >= 0 at a given interior alpha."""
    if parity is Parity.ODD:
        y = alpha**3 * math.tan(alpha)
        if y <= 0.0:
            return 0.0
        hi = max(2.0, 1.1 * y ** (1.0 / 3.0) + 1.0)
        fn = lambda b: b**3 * math.tanh(b) - y
        while fn(hi) < 0.0:
            hi *= 2.0
        # the absolute floor only bites for vanishing roots, where beta**2 is
        # negligible in the tension gap anyway
        return brentq(fn, 0.0, hi, xtol=1e-20 * hi, rtol=4 * _EPS, maxiter=200)
    t = math.tan(alpha)
    if t >= 0.0:
        return 0.0
    c = -t
    hi = (alpha**3 / c) ** (1.0 / 3.0) + 1.0
    fn = lambda b: c * b**3 - alpha**3 * math.tanh(b)
    while fn(hi) < 0.0:
        hi *= 2.0
    return brentq(fn, 1e-160, hi, xtol=1e-20 * hi, rtol=4 * _EPS, maxiter=200)


def _tan_series_coeffs(n: int) -> list[float]:
    """Coefficients q_j of ``x**3 * tan(x) = sum_j q_j x**(2j+4)``, exact.

    Built from ``tan' = 1 + tan**2`` in rational arithmetic; the matching
    tanh coefficients are ``(-1)**j q_j``.
    """
    c = {1: Fraction(1)}
    for k in range(3, 2 * n, 2):
        c[k] = sum(c[i] * c[k - 1 - i] for i in range(1, k, 2)) / k
    return [float(c[2 * j + 1]) for j in range(n)]


_TAN_Q = _tan_series_coeffs(24)


def _odd0_gap_iterate(y: float, gap: float) -> float:
    """One fixed-point refinement of the lowest-odd tension gap at y=alpha**2.

    The branch relation ``b**3 tanh b = a**3 tan a`` differences two terms
    whose leading x**4 parts cancel; regrouping the two series term by term
    (even orders share coefficients, odd orders add) leaves every contribution
    at full relative precision and isolates the gap linearly:

        gap * sum_{j even} q_j S_j = sum_{j odd} q_j (w**(j+2) + y**(j+2)),

    with ``w = y + gap`` and ``S_j = sum_m w**m y**(j+1-m)`` (all positive).
    """
    w = y + gap
    den = 0.0
    num = 0.0
    for j, q in enumerate(_TAN_Q):
        if j % 2 == 0:
            s = 0.0
            for m in range(j + 2):
                s += w**m * y ** (j + 1 - m)
            den += q * s
        else:
            num += q * (w ** (j + 2) + y ** (j + 2))
    return num / den


def _odd0_tension_gap(alpha: float) -> float:
    """tau_unit on the lowest odd branch at interior alpha, solved directly.

    On this branch ``beta - alpha`` shrinks like ``alpha**3``, so computing
    ``tau = beta**2 - alpha**2`` from a rounded beta loses all significance
    as ``alpha -> 0``.  Worse, the residual ``b**3 tanh b - a**3 tan a``
    itself differences two ~alpha**4 quantities, leaving an absolute noise
    floor near ``eps * alpha**2 / 2`` in any gap recovered from it; below
    ``alpha = 0.5`` the series form sidesteps the cancellation entirely.
    """
    y = alpha * alpha
    if alpha < 0.5:
        gap = y * y / 3.0  # first-order seed
        for _ in range(60):
            refined = _odd0_gap_iterate(y, gap)
            if abs(refined - gap) <= 4.0 * _EPS * refined:
                return refined
            gap = refined
        return gap
    target = alpha**3 * math.tan(alpha)

    def h(gap: float) -> float:
        b2 = y + gap
        b = math.sqrt(b2)
        return b2 * b * math.tanh(b) - target

    lo = hi = y * y / 3.0
    for _ in range(600):
        if h(lo) < 0.0:
            break
        lo /= 4.0
    for _ in range(600):
        if h(hi) > 0.0:
            break
        hi *= 4.0
    return _log_polish(h, lo, hi)


def _branch_param_odd0(tau_unit: float) -> BranchParameterization:
    """Stable (alpha, beta) for the lowest odd branch at tau_unit > 0.

    Inverts the tension gap (solved to full relative precision) instead of
    the cancellation-prone difference of the squared wavenumbers.
    """
    hi_cap = math.nextafter(math.pi / 2, 0.0)

    def g(alpha: float) -> float:
        return _odd0_tension_gap(alpha) - tau_unit

    seed = min((3.0 * tau_unit) ** 0.25, hi_cap / 2.0)
    lo, hi = seed, seed
    for _ in range(600):
        if g(lo) < 0.0:
            break
        lo /= 2.0
    ok = False
    for _ in range(600):
        if g(hi) > 0.0:
            ok = True
            break
        if hi >= hi_cap:
            break
        hi = min(2.0 * hi, hi_cap)
    if not ok:
        raise BranchNotFoundError(
            f"tension tau={tau_unit!r} exceeds the resolvable range of "
            "branch (odd, 0)"
        )
    alpha = _log_polish(g, lo, hi)
    return BranchParameterization(
        alpha=alpha, beta=math.sqrt(alpha * alpha + tau_unit), parity=Parity.ODD
    )


def branch_parameterization(
    parity: Parity, l: int, tau_unit: float
) -> BranchParameterization:
    """(alpha, beta) coordinates of branch (parity, l) at unit tension.

    Defined for ``tau_unit >= crossing_tau(parity, l)`` (the branch value is
    nonnegative there); below the crossing the branch is located by
    determinant root-finding instead.
    """
    if parity not in (Parity.EVEN, Parity.ODD):
        raise ValueError(f"parameterization requires even/odd parity, got {parity}")
    if l < 0:
        raise ValueError(f"branch index must be >= 0, got {l}")
    w_lo, w_hi = _alpha_window(parity, l)
    cross = crossing_tau(parity, l)
    if tau_unit < cross:
        raise BranchNotFoundError(
            f"branch ({parity.value}, {l}) is negative at tau={tau_unit!r}; "
            "use the determinant solver below its crossing"
        )
    if tau_unit == cross:
        return BranchParameterization(alpha=w_lo, beta=0.0, parity=parity)
    if parity is Parity.ODD and l == 0:
        return _branch_param_odd0(tau_unit)

    def gap(alpha: float) -> float:
        beta = _beta_from_alpha(parity, alpha)
        return (beta - alpha) * (beta + alpha) - tau_unit

    lo = math.nextafter(w_lo, math.inf)
    hi = math.nextafter(w_hi, -math.inf)
    g_lo = gap(lo)
    if g_lo == 0.0:
        alpha = lo
    elif g_lo > 0.0:
        # tau_unit sits closer to the crossing than float resolution of the
        # window edge; fall back to the first-order branch slope
        mu = _crossing_slope(parity, l) * (tau_unit - cross)
        if w_lo > 0.0:
            return BranchParameterization(alpha=lo, beta=math.sqrt(mu) / w_lo, parity=parity)
        return BranchParameterization(alpha=mu**0.25, beta=mu**0.25, parity=parity)
    else:
        if gap(hi) < 0.0:
            raise BranchNotFoundError(
                f"tension tau={tau_unit!r} exceeds the resolvable range of "
                f"branch ({parity.value}, {l})"
            )
        alpha = brentq(gap, lo, hi, xtol=1e-300, rtol=4 * _EPS, maxiter=600)
    return BranchParameterization(
        alpha=alpha, beta=_beta_from_alpha(parity, alpha), parity=parity
    )


# --------------------------------------------------------------------------
# negative eigenvalues by determinant scan
# --------------------------------------------------------------------------

def _negative_count(tau_unit: float, parity: Parity) -> int:
    """Number of (parity) branches with negative value at this tension."""
    if tau_unit >= 0.0:
        return 0
    m = 0
    while crossing_tau(parity, m) > tau_unit:
        m += 1
    return m


def _scan_nodes(tau: float, cap: float, refine: int) -> np.ndarray:
    """Strictly negative mu scan nodes covering [-cap, 0) densely enough
    that consecutive nodes bracket at most one determinant zero per parity."""
    parts: list[np.ndarray] = []
    s = math.sqrt(-tau / 2.0)
    # regime mu in (-tau**2/4, 0): parameterize by the smaller wavenumber
    a2_top = s * (1.0 - 1e-9)
    geo = np.geomspace(s * 1e-8 / refine, s / 8.0, 48 * refine)
    step = math.pi / (16.0 * max(1.0, math.sqrt(-tau)))
    n_lin = max(240, int(math.ceil((a2_top - s / 8.0) / step))) * refine
    lin = np.linspace(s / 8.0, a2_top, n_lin)
    a2 = np.concatenate([geo, lin])
    parts.append(-((-tau - a2 * a2) * a2 * a2))
    # regime mu < -tau**2/4: parameterize by q, mu = -(2q**2 + tau/2)**2
    q_lo = s * (1.0 + 1e-9)
    q_hi = math.sqrt((math.sqrt(cap) - tau / 2.0) / 2.0)
    if q_hi > q_lo:
        n_q = max(64, int(math.ceil((q_hi - q_lo) / (math.pi / 16.0)))) * refine
        q = np.linspace(q_lo, q_hi, n_q)
        xi = 2.0 * q * q + tau / 2.0
        parts.append(-(xi * xi))
    # dense window around the near-degenerate edge pair at mu ~ -tau**2
    w = 3.0 * refine
    xi_a = max(-tau - w, -tau / 2.0 * (1.0 + 1e-6))
    xi_b = min(-tau + w, math.sqrt(cap))
    if xi_b > xi_a:
        xi = np.linspace(xi_a, xi_b, 160 * refine)
        parts.append(-(xi * xi))
    nodes = np.unique(np.concatenate(parts))
    return nodes[(nodes < 0.0) & (nodes >= -cap)]


@lru_cache(maxsize=4096)
def _negative_zeros(tau_unit: float, parity: Parity) -> tuple[float, ...]:
    """All negative unit-interval eigenvalues of one parity, ascending.

    The scan brackets sign changes of the parity determinant on a structured
    grid and validates the root count against the branch-crossing count;
    on a shortfall the grid is refined before giving up.
    """
    expected = _negative_count(tau_unit, parity)
    if expected == 0:
        return ()
    cap = max(10.0, 10.0 * tau_unit**4)
    idx = 0 if parity is Parity.EVEN else 1

    def det_scalar(m: float) -> float:
        return float(_det_pair(tau_unit, m)[idx][0])

    for refine in (1, 2, 4, 8):
        nodes = _scan_nodes(tau_unit, cap, refine)
        vals = _det_pair(tau_unit, nodes)[idx]
        keep = vals != 0.0
        nodes_k, vals_k = nodes[keep], vals[keep]
        flips = np.nonzero(np.sign(vals_k[:-1]) * np.sign(vals_k[1:]) < 0)[0]
        roots = [
            _log_polish(det_scalar, nodes_k[i], nodes_k[i + 1]) for i in flips
        ]
        if len(roots) == expected:
            return tuple(sorted(roots))
        if len(roots) > expected:
            raise SolverError(
                f"determinant scan found {len(roots)} negative "
                f"{parity.value} eigenvalues at tau={tau_unit!r}, expected "
                f"{expected}"
            )
    raise SolverError(
        f"determinant scan located only {len(roots)} of {expected} negative "
        f"{parity.value} eigenvalues at tau={tau_unit!r}"
    )


def negative_eigenvalues(tau: float, R: float = 1.0) -> list[SpectrumPoint]:
    """All negative free eigenvalues on (-R, R), ascending, with labels."""
    tau_unit = tau * R * R
    points: list[SpectrumPoint] = []
    for parity in (Parity.EVEN, Parity.ODD):
        for l, mu in enumerate(_negative_zeros(tau_unit, parity)):
            points.append(
                SpectrumPoint(
                    branch=EigenBranchId(parity, l),
                    tau=tau,
                    mu=mu / R**4,
                    method=Method.DETERMINANT,
                )
            )
    points.sort(key=lambda pt: pt.mu)
    return points


# --------------------------------------------------------------------------
# public branch evaluation
# --------------------------------------------------------------------------

def periodic_mu(l: int, tau: float, R: float) -> float:
    """Periodic eigenvalue (l*pi)**4 + tau*(l*pi)**2 rescaled to (-R, R)."""
    if l < 0:
        raise ValueError(f"periodic index must be >= 0, got {l}")
    if R <= 0:
        raise ValueError(f"half-length R must be positive, got {R}")
    lp = l * math.pi
    tau_unit = tau * R * R
    return (lp**4 + tau_unit * lp**2) / R**4


def free_branch_mu(branch: EigenBranchId, tau: float, R: float) -> float:
    """Value of one free eigenvalue branch at tension tau on (-R, R).

    Nonnegative values come from the (alpha, beta) parameterization, negative
    values from determinant root-finding; the zero branch is identically 0.
    """
    if R <= 0:
        raise ValueError(f"half-length R must be positive, got {R}")
    if branch.parity is Parity.ZERO:
        return 0.0
    if branch.parity is Parity.PERIODIC:
        return periodic_mu(branch.index, tau, R)
    tau_unit = tau * R * R
    cross = crossing_tau(branch.parity, branch.index)
    if tau_unit >= cross:
        return branch_parameterization(branch.parity, branch.index, tau_unit).mu / R**4
    zeros = _negative_zeros(tau_unit, branch.parity)
    if branch.index >= len(zeros):
        raise BranchNotFoundError(
            f"branch ({branch.parity.value}, {branch.index}) not located at "
            f"tau={tau!r}, R={R!r}"
        )
    return zeros[branch.index] / R**4


def rescale_mu(mu_unit: float, tau_unit: float, R: float) -> tuple[float, float]:
    """Map a unit-interval (mu, tau) pair to the interval (-R, R)."""
    if R <= 0:
        raise ValueError(f"half-length R must be positive, got {R}")
    return mu_unit / R**4, tau_unit / (R * R)


def _det_positive(parity: Parity, l: int, tau_unit: float) -> float:
    """Positive branch value recomputed by determinant root polish.

    The parameterized neighbors provide a bracket that isolates exactly the
    requested zero of the parity determinant; the returned value's precision
    comes from the determinant alone.
    """
    mu_here = branch_parameterization(parity, l, tau_unit).mu
    if mu_here == 0.0:
        return 0.0
    lo = 0.5 * mu_here
    if l >= 1:
        cross_prev = crossing_tau(parity, l - 1)
        if tau_unit >= cross_prev:
            mu_prev = branch_parameterization(parity, l - 1, tau_unit).mu
            lo = 0.5 * (mu_prev + mu_here)
    mu_next = branch_parameterization(parity, l + 1, tau_unit).mu
    hi = 0.5 * (mu_here + mu_next)
    idx = 0 if parity is Parity.EVEN else 1

    def det_scalar(m: float) -> float:
        return float(_det_pair(tau_unit, m)[idx][0])

    f_lo, f_hi = det_scalar(lo), det_scalar(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise SolverError(
            f"determinant bracket failed for branch ({parity.value}, {l}) "
            f"at tau={tau_unit!r}"
        )
    return _log_polish(det_scalar, lo, hi)


def spectrum_list(
    op: TensionedOperator,
    R: float,
    count: int,
    method: Method = Method.PARAMETERIZED,
) -> list[SpectrumPoint]:
    """The lowest ``count`` eigenvalues on (-R, R), ascending, labeled.

    ``method`` selects the value source: the default analytic mix
    (parameterization above the crossings, determinant below), pure
    determinant polish, or the finite-difference discretization (values
    rank-matched to analytic labels).
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if R <= 0:
        raise ValueError(f"half-length R must be positive, got {R}")
    tau_unit = op.tau * R * R

    if op.bc is BoundaryCondition.PERIODIC:
        pts: list[SpectrumPoint] = []
        l_margin = count + int(math.sqrt(abs(tau_unit)) / math.pi) + 4
        for l in range(l_margin + 1):
            mult = 1 if l == 0 else 2
            for _ in range(mult):
                pts.append(
                    SpectrumPoint(
                        branch=EigenBranchId(Parity.PERIODIC, l),
                        tau=op.tau,
                        mu=periodic_mu(l, op.tau, R),
                        method=Method.PARAMETERIZED,
                    )
                )
        pts.sort(key=lambda pt: (pt.mu, pt.branch.index))
        pts = pts[:count]
        if method is Method.FINITE_DIFFERENCE:
            n_grid = max(1024, 4 * count)
            vals = fd_eigensolve(op, R, n_grid=n_grid, count=count)
            pts = [
                SpectrumPoint(p.branch, p.tau, v, Method.FINITE_DIFFERENCE)
                for p, v in zip(pts, vals)
            ]
        return pts

    labeled: list[SpectrumPoint] = list(negative_eigenvalues(op.tau, R))
    labeled.append(
        SpectrumPoint(
            branch=EigenBranchId(Parity.ZERO, 0),
            tau=op.tau,
            mu=0.0,
            method=Method.PARAMETERIZED,
        )
    )
    streams = {
        parity: _negative_count(tau_unit, parity) for parity in (Parity.EVEN, Parity.ODD)
    }
    heads: dict[Parity, float] = {}

    def branch_value(parity: Parity, l: int) -> float:
        if method is Method.DETERMINANT:
            cross = crossing_tau(parity, l)
            if tau_unit == cross:
                return 0.0
            return _det_positive(parity, l, tau_unit) / R**4
        return branch_parameterization(parity, l, tau_unit).mu / R**4

    for parity in streams:
        heads[parity] = branch_value(parity, streams[parity])
    while len(labeled) < count:
        parity = min(heads, key=lambda par: heads[par])
        l = streams[parity]
        labeled.append(
            SpectrumPoint(
                branch=EigenBranchId(parity, l),
                tau=op.tau,
                mu=heads[parity],
                method=Method.DETERMINANT
                if method is Method.DETERMINANT
                else Method.PARAMETERIZED,
            )
        )
        streams[parity] = l + 1
        heads[parity] = branch_value(parity, l + 1)
    labeled.sort(key=lambda pt: pt.mu)
    labeled = labeled[:count]

    if method is Method.FINITE_DIFFERENCE:
        n_grid = max(1024, 4 * count)
        vals = fd_eigensolve(op, R, n_grid=n_grid, count=count)
        labeled = [
            SpectrumPoint(p.branch, p.tau, v, Method.FINITE_DIFFERENCE)
            for p, v in zip(labeled, vals)
        ]
    return labeled


# --------------------------------------------------------------------------
# finite-difference oracle
# --------------------------------------------------------------------------

def assemble_free_form(R: float, tau: float, n_grid: int) -> tuple[np.ndarray, np.ndarray]:
    """Banded stiffness and diagonal mass of the free quadratic form.

    Nodes are ``x_i = -R + i*h`` with ``h = 2R/n_grid`` (``n_grid + 1``
    values).  The stiffness is ``h * (B2'B2 + tau*B1'B1)`` with ``B2`` the
    interior second differences and ``B1`` the midpoint first differences, so
    free conditions are natural and constants are annihilated exactly; the
    mass is the trapezoid rule.  Returns (lower banded stiffness with
    diagonals 0..2, mass diagonal).
    """
    n = n_grid
    npts = n + 1
    h = 2.0 * R / n
    d2 = np.zeros((3, npts))
    # B2'B2: pentadiagonal product assembled row by row from the stencil
    main = np.zeros(npts)
    off1 = np.zeros(npts - 1)
    off2 = np.zeros(npts - 2)
    # row i of B2 touches nodes (i, i+1, i+2) with weights (1, -2, 1)/h**2
    w = np.array([1.0, -2.0, 1.0]) / (h * h)
    for a in range(3):
        main[a : npts - 2 + a] += w[a] * w[a] * np.ones(npts - 2)
    for a in range(3):
        for b in range(a + 1, 3):
            lag = b - a
            if lag == 1:
                off1[a : npts - 2 + a] += w[a] * w[b]
            else:
                off2[a : npts - 2 + a] += w[a] * w[b]
    # B1'B1: tridiagonal, rows touch (i, i+1) with weights (-1, 1)/h
    v = 1.0 / (h * h)
    main_t = np.full(npts, 2.0 * v)
    main_t[0] = main_t[-1] = v
    off1_t = np.full(npts - 1, -v)
    d2[0, :] = h * (main + tau * main_t)
    d2[1, : npts - 1] = h * (off1 + tau * off1_t)
    d2[2, : npts - 2] = h * off2
    mass = np.full(npts, h)
    mass[0] = mass[-1] = h / 2.0
    return d2, mass


def fd_eigensolve(
    op: TensionedOperator, R: float, n_grid: int = 1024, count: int = 6
) -> list[float]:
    """Lowest eigenvalues of the finite-difference Rayleigh quotient.

    Second-order accurate in the grid spacing.  For periodic conditions the
    discrete operator is circulant and is diagonalized exactly through its
    symbol; for free conditions a banded symmetric eigensolver is used.
    """
    if n_grid < 64:
        raise ValueError(f"n_grid must be >= 64, got {n_grid}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if count > n_grid // 4:
        raise ValueError(
            f"grid too coarse: count={count} exceeds n_grid/4={n_grid // 4} "
            "resolvable modes"
        )
    if op.bc is BoundaryCondition.PERIODIC:
        h = 2.0 * R / n_grid
        j = np.arange(n_grid)
        c = (2.0 - 2.0 * np.cos(2.0 * math.pi * j / n_grid)) / (h * h)
        vals = np.sort(c * c + op.tau * c)
        return [float(v) for v in vals[:count]]
    kband, mass = assemble_free_form(R, op.tau, n_grid)
    inv_sqrt = 1.0 / np.sqrt(mass)
    npts = mass.size
    sband = np.zeros_like(kband)
    for d in range(3):
        sband[d, : npts - d] = kband[d, : npts - d] * inv_sqrt[: npts - d] * inv_sqrt[d:]
    vals = eig_banded(
        sband,
        lower=True,
        eigvals_only=True,
        select="i",
        select_range=(0, count - 1),
    )
    return [float(v) for v in vals]


# --------------------------------------------------------------------------
# arbitrarily negative first eigenvalue: the R sweep
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MuastResult:
    """Witness of mu_1((-R, R), tau) <= -c*tau**2."""

    R: float
    mu1: float
    target: float
    tau: float
    c: float
    threshold_R: float | None
    tested: tuple[tuple[float, float], ...]


def _mu1(tau: float, R: float) -> float:
    """Smallest nonzero free eigenvalue on (-R, R) (negative for tau < 0)."""
    tau_unit = tau * R * R
    if tau_unit < 0.0:
        lows = [
            zeros[0]
            for parity in (Parity.EVEN, Parity.ODD)
            if (zeros := _negative_zeros(tau_unit, parity))
        ]
        if lows:
            return min(lows) / R**4
    vals = [
        branch_parameterization(par, _negative_count(tau_unit, par), tau_unit).mu
        for par in (Parity.EVEN, Parity.ODD)
    ]
    return min(vals) / R**4


def find_muast(
    tau: float,
    c: float,
    r_start: float = 1.0,
    r_floor: float = 1e-4,
    shrink: float = 0.7,
) -> MuastResult:
    """Search for a half-length R with mu_1((-R, R), tau) <= -c*tau**2.

    Sweeps R geometrically downward (small domains drive mu_1 towards
    -infinity like 3*tau/R**2) and bisects the first success against the
    last failure for a threshold estimate.
    """
    if not tau < 0.0:
        raise ValueError(f"the sweep requires tau < 0, got {tau}")
    if not c > 0.0:
        raise ValueError(f"the factor c must be positive, got {c}")
    target = -c * tau * tau
    tested: list[tuple[float, float]] = []
    r = r_start
    r_prev_fail: float | None = None
    while r >= r_floor:
        mu1 = _mu1(tau, r)
        tested.append((r, mu1))
        if mu1 <= target:
            threshold = None
            if r_prev_fail is not None:
                lo, hi = r, r_prev_fail
                while (hi - lo) / hi > 1e-3:
                    mid = 0.5 * (lo + hi)
                    if _mu1(tau, mid) <= target:
                        lo = mid
                    else:
                        hi = mid
                threshold = lo
            return MuastResult(
                R=r,
                mu1=mu1,
                target=target,
                tau=tau,
                c=c,
                threshold_R=threshold,
                tested=tuple(tested),
            )
        r_prev_fail = r
        r *= shrink
    raise MuastNotFoundError(
        f"no R in [{r_floor!r}, {r_start!r}] gives mu_1 <= {target!r} at "
        f"tau={tau!r}; sweep tested {len(tested)} values"
    )
