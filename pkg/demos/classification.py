"""Classify reaction parameter sets against the instability characterization.

Shows the four structural conditions and the derived quantities (A, a, b) for
the reference Gierer-Meinhardt linearization, then sweeps a few (R, tau)
points to show membership flipping between the band route (case H) and the
oscillatory route (case F).  Decision records go to demos/output/.
"""

import os

from turing4 import (
    GMConstants,
    ReactionParams,
    classification_spectrum,
    gm_jacobian,
    gm_steady_state,
    in_turing_space,
    quantities,
    reaction_params,
)
from turing4.serialize import atomic_write_text, decision_json

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "output")
REF = GMConstants(0.0, 0.4, 1.0, 1.0, 1.0)
DIFFUSION_RATIO = 30.0
POINTS = [(20.0, 0.5), (20.0, -0.3), (0.5, -0.001), (0.1, 0.0)]


def main() -> None:
    os.makedirs(OUT, exist_ok=True)
    ss = gm_steady_state(REF)
    jac = gm_jacobian(REF, ss)
    print(f"steady state: u0 = {ss.u0}, v0 = {ss.v0}")
    print(f"jacobian: f_u = {jac[0]}, f_v = {jac[1]}, g_u = {jac[2]}, g_v = {jac[3]}")

    p = reaction_params(REF, DIFFUSION_RATIO)
    q = quantities(p)
    print(f"conditions (trace, det, disc, weighted trace): {q.conditions}")
    print(f"A = {q.A:.12f}, band = ({q.a:.12f}, {q.b:.12f})")

    for R, tau in POINTS:
        spectrum = classification_spectrum(p, tau, R)
        decision = in_turing_space(p, tau, spectrum)
        tag = f"R{R:g}_tau{tau:g}".replace("-", "m").replace(".", "p")
        path = os.path.join(OUT, f"decision_{tag}.json")
        atomic_write_text(path, decision_json(decision, p, tau, R))
        witness = (
            f", witness mu = {decision.witness_mu:.6f} (case {decision.case})"
            if decision.member
            else ""
        )
        print(f"(R, tau) = ({R:g}, {tau:g}): member = {decision.member}{witness}")

    # with the weighted trace failing, membership needs the oscillatory route
    stable = ReactionParams(-1.0, 0.1, 0.1, -1.0, 2.0)
    decision = in_turing_space(stable, 0.0, classification_spectrum(stable, 0.0, 1.0))
    print(f"weighted-trace failure at zero tension: member = {decision.member}, "
          f"conditions = {quantities(stable).conditions}")
    print(f"wrote decision records to {OUT}")


if __name__ == "__main__":
    main()
