"""Seed sweep at (R, tau) = (20, -0.3), below the level-A boundary.

Here the leading modes are an oscillatory pair growing at rate ~1.1; the
inhibitor is driven through zero within a handful of time units, the
division guard engages, and the activator source blows up for every seed.
The sweep prints each outcome and the blow-up times.
"""

import os
from collections import Counter

from turing4 import GMConstants, SimConfig, negative_eigenvalues, quantities, reaction_params, rescale_mu, run
from turing4.serialize import atomic_write_text, run_report_json

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "output")
REF = GMConstants(0.0, 0.4, 1.0, 1.0, 1.0)
R, TAU = 20.0, -0.3
SEEDS = range(1, 21)


def main() -> None:
    os.makedirs(OUT, exist_ok=True)
    p = reaction_params(REF, 30.0)
    q = quantities(p)
    print(f"level A = {q.A:.6f}; scaled negative branch values at tau = {TAU}:")
    for pt in negative_eigenvalues(TAU * R * R):
        mu, _ = rescale_mu(pt.mu, TAU * R * R, R)
        marker = " < A (oscillatory route)" if mu < q.A else ""
        print(f"  {pt.branch.parity.value}-{pt.branch.index}: mu = {mu:.6f}{marker}")

    outcomes = Counter()
    times = []
    for seed in SEEDS:
        cfg = SimConfig(R=R, tau=TAU, k=30.0, kinetics=REF, seed=seed,
                        n_grid=512, dt=1e-3, t_max=50.0)
        report, _ = run(cfg)
        outcomes[report.classification.value] += 1
        times.append(report.t_final)
        if seed == 1:
            atomic_write_text(os.path.join(OUT, "seed_sweep_first.json"),
                              run_report_json(report, cfg))
        print(f"  seed {seed:2d}: {report.classification.value:>8} "
              f"at t = {report.t_final:.3f} "
              f"(floor activations: {report.floor_activations})")

    print(f"outcomes over {len(list(SEEDS))} seeds: {dict(outcomes)}")
    print(f"termination times: min {min(times):.2f}, max {max(times):.2f}")
    print(f"wrote first report to {OUT}")


if __name__ == "__main__":
    main()
