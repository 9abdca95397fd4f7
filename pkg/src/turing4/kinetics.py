"""Activator-inhibitor kinetics with a saturating autocatalysis term.

The reaction pair is

* ``f(u, v) = k1 - k2*u + k3*u**2 / v``  (activator)
* ``g(u, v) = k4*u**2 - k5*v``           (inhibitor)

with nonnegative source ``k1`` and positive remaining constants.  The
positive steady state and its Jacobian are available in closed form:
inserting ``v = (k4/k5)*u**2`` into ``f = 0`` makes the quadratic term a
constant, so ``u0 = (k1 + k3*k5/k4)/k2`` follows directly.

Time integrators drive ``v`` below zero during large excursions; only the
``u**2/v`` division is guarded (denominator floored at ``V_FLOOR``), while
the linear ``-k5*v`` drain keeps the raw value so a negative inhibitor is
pushed back up rather than frozen at the floor.
"""

from __future__ import annotations

from .types import GMConstants, ReactionParams, SolverError, SteadyState

__all__ = ["V_FLOOR", "gm_eval", "gm_steady_state", "gm_jacobian", "reaction_params"]

V_FLOOR = 1e-8


def gm_eval(c: GMConstants, u: float, v: float) -> tuple[float, float]:
    """Reaction terms (f, g) at state (u, v).

    The autocatalysis denominator is floored at ``V_FLOOR``; everything
    else uses the raw inputs.
    """
    f = c.k1 - c.k2 * u + c.k3 * u * u / max(v, V_FLOOR)
    g = c.k4 * u * u - c.k5 * v
    return f, g


def gm_steady_state(c: GMConstants) -> SteadyState:
    """The unique positive spatially homogeneous steady state."""
    u0 = (c.k1 + c.k3 * c.k5 / c.k4) / c.k2
    v0 = (c.k4 / c.k5) * u0 * u0
    f0, g0 = gm_eval(c, u0, v0)
    scale = max(1.0, abs(c.k1) + c.k2 * u0, c.k4 * u0 * u0)
    if abs(f0) > 1e-12 * scale or abs(g0) > 1e-12 * scale:
        raise SolverError(
            f"steady-state residual check failed: f={f0!r}, g={g0!r} at "
            f"(u0, v0)=({u0!r}, {v0!r})"
        )
    return SteadyState(u0=u0, v0=v0)


def gm_jacobian(c: GMConstants, s: SteadyState) -> tuple[float, float, float, float]:
    """Jacobian entries (f_u, f_v, g_u, g_v) at a steady state."""
    f_u = -c.k2 + 2.0 * c.k3 * s.u0 / s.v0
    f_v = -c.k3 * s.u0 * s.u0 / (s.v0 * s.v0)
    g_u = 2.0 * c.k4 * s.u0
    g_v = -c.k5
    return f_u, f_v, g_u, g_v


def reaction_params(c: GMConstants, k: float) -> ReactionParams:
    """Jacobian at the steady state bundled with a diffusion ratio k."""
    f_u, f_v, g_u, g_v = gm_jacobian(c, gm_steady_state(c))
    return ReactionParams(f_u=f_u, f_v=f_v, g_u=g_u, g_v=g_v, k=k)
