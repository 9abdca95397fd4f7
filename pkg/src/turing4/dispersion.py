"""Linearized reaction-diffusion dispersion analysis and the instability test.

For the two-species system ``u_t = -Delta^2 u + tau*Delta u + f(u, v)``,
``v_t = k*(-Delta^2 v + tau*Delta v) + g(u, v)`` linearized about a steady
state with Jacobian ``(f_u, f_v; g_u, g_v)``, substituting a spatial
eigenmode with eigenvalue ``mu`` gives the temporal growth factors as roots
of ``lambda**2 + F(mu)*lambda + H(mu) = 0`` with

* ``F(mu) = (1 + k)*mu - (f_u + g_v)``
* ``H(mu) = k*mu**2 - (k*f_u + g_v)*mu + (f_u*g_v - f_v*g_u)``.

A mode grows iff ``F < 0`` or ``H < 0``.  Under the stability conditions on
the kinetics (trace negative, determinant positive) only ``H < 0`` can
occur, on the open interval ``(a, b)`` between the roots of ``H`` — or, for
tensions admitting eigenvalues below ``A = (f_u + g_v)/(1 + k)``, through
``F < 0``.  ``in_turing_space`` packages the resulting membership test
against a supplied spatial spectrum.
"""

from __future__ import annotations

import math

from .types import DispersionQuantities, GrowthRate, ReactionParams, TuringDecision

__all__ = [
    "quantities",
    "growth_rate",
    "in_turing_space",
    "max_growth",
    "ZERO_MODE_TOL",
]

#: Spatial eigenvalues within this distance of zero are the conserved
#: constant mode and never witness instability (A < 0 and 0 outside (a, b)
#: whenever the membership conditions hold).
ZERO_MODE_TOL = 1e-9


def quantities(p: ReactionParams) -> DispersionQuantities:
    """Thresholds and stability conditions derived from the Jacobian.

    ``A`` is the tension-assisted threshold ``(f_u + g_v)/(1 + k)``; ``a``
    and ``b`` are the roots of ``H`` (present only when the discriminant is
    positive).  The four condition flags are, in order: negative trace,
    positive determinant, positive discriminant of ``H``, and positive
    cross-diffusion trace ``k*f_u + g_v``.
    """
    trace = p.f_u + p.g_v
    det = p.f_u * p.g_v - p.f_v * p.g_u
    s = p.k * p.f_u + p.g_v
    disc = s * s - 4.0 * p.k * det
    a = b = None
    if disc > 0.0:
        sq = math.sqrt(disc)
        a = (s - sq) / (2.0 * p.k)
        b = (s + sq) / (2.0 * p.k)
    return DispersionQuantities(
        A=trace / (1.0 + p.k),
        a=a,
        b=b,
        discriminant=disc,
        trace_negative=trace < 0.0,
        det_positive=det > 0.0,
        disc_positive=disc > 0.0,
        weighted_trace_positive=s > 0.0,
    )


def growth_rate(p: ReactionParams, mu: float) -> GrowthRate:
    """Largest real part among the two temporal roots at spatial mode mu."""
    trace = p.f_u + p.g_v
    det = p.f_u * p.g_v - p.f_v * p.g_u
    F = (1.0 + p.k) * mu - trace
    H = p.k * mu * mu - (p.k * p.f_u + p.g_v) * mu + det
    disc = F * F - 4.0 * H
    if disc >= 0.0:
        lam = 0.5 * (-F + math.sqrt(disc))
    else:
        lam = -0.5 * F
    return GrowthRate(mu=mu, lambda_max_real=lam, F=F, H=H)


def _nonzero(spectrum: list[float]) -> list[float]:
    return [mu for mu in spectrum if abs(mu) > ZERO_MODE_TOL]


def in_turing_space(
    p: ReactionParams, tau: float, spectrum: list[float]
) -> TuringDecision:
    """Diffusion-driven instability test against a spatial spectrum.

    For ``tau >= 0`` membership requires all four condition flags plus a
    spectrum point inside ``(a, b)``.  For ``tau < 0`` two routes exist and
    the first-eigenvalue route is checked first: either the smallest nonzero
    eigenvalue lies below ``A`` (case ``"F"``), or conditions one through
    three hold with a spectrum point inside ``(a, b)`` (case ``"H"``).  The
    witness for case H is the admissible eigenvalue of largest growth rate.
    """
    q = quantities(p)
    conds = q.conditions
    nonzero = _nonzero(spectrum)

    def band_witness() -> float | None:
        if q.a is None or q.b is None:
            return None
        best: float | None = None
        best_rate = -math.inf
        for mu in nonzero:
            if q.a < mu < q.b:
                rate = growth_rate(p, mu).lambda_max_real
                if rate > best_rate or (rate == best_rate and best is not None and mu < best):
                    best, best_rate = mu, rate
        return best

    if tau < 0.0:
        if q.trace_negative and q.det_positive and nonzero:
            mu1 = min(nonzero)
            if mu1 < q.A:
                return TuringDecision(
                    member=True,
                    case="F",
                    witness_mu=mu1,
                    conditions=conds,
                    A=q.A,
                    a=q.a,
                    b=q.b,
                )
        if q.trace_negative and q.det_positive and q.disc_positive:
            witness = band_witness()
            if witness is not None:
                return TuringDecision(
                    member=True,
                    case="H",
                    witness_mu=witness,
                    conditions=conds,
                    A=q.A,
                    a=q.a,
                    b=q.b,
                )
        return TuringDecision(
            member=False, case=None, witness_mu=None, conditions=conds,
            A=q.A, a=q.a, b=q.b,
        )

    if all(conds):
        witness = band_witness()
        if witness is not None:
            return TuringDecision(
                member=True,
                case="H",
                witness_mu=witness,
                conditions=conds,
                A=q.A,
                a=q.a,
                b=q.b,
            )
    return TuringDecision(
        member=False, case=None, witness_mu=None, conditions=conds,
        A=q.A, a=q.a, b=q.b,
    )


def max_growth(p: ReactionParams, spectrum: list[float]) -> float:
    """Largest growth rate over the nonzero part of a spatial spectrum."""
    rates = [growth_rate(p, mu).lambda_max_real for mu in _nonzero(spectrum)]
    return max(rates, default=-math.inf)
