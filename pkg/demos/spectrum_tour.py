"""Tour of the free and periodic spectra under the three solvers.

Prints a cross-check table (closed-form parameterization, characteristic
determinant, finite differences) at a few tensions, the negative part of the
spectrum under compression, and the exact kernel crossings; the full table
goes to demos/output/spectrum_tour.csv.
"""

import math
import os

from turing4 import (
    BoundaryCondition,
    Method,
    Parity,
    TensionedOperator,
    branch_parameterization,
    crossing_tau,
    negative_eigenvalues,
    periodic_mu,
    spectrum_list,
)
from turing4.serialize import atomic_write_text, spectrum_csv

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "output")
RADIUS = 1.0
TENSIONS = (0.0, 5.0, -5.0, -30.0)
COUNT = 7


def main() -> None:
    os.makedirs(OUT, exist_ok=True)
    rows = []
    for tau in TENSIONS:
        op = TensionedOperator(tau=tau, bc=BoundaryCondition.FREE)
        by_method = {
            m: spectrum_list(op, RADIUS, COUNT, m)
            for m in (Method.PARAMETERIZED, Method.DETERMINANT, Method.FINITE_DIFFERENCE)
        }
        rows.extend(by_method[Method.PARAMETERIZED])
        print(f"tau = {tau:+.1f}")
        print(f"  {'branch':<12}{'param':>22}{'det':>22}{'fd':>22}")
        for pt, dt, fd in zip(*by_method.values()):
            label = f"{pt.branch.parity.value}-{pt.branch.index}"
            print(f"  {label:<12}{pt.mu:>22.12e}{dt.mu:>22.12e}{fd.mu:>22.12e}")

    print("negative part under strong compression (tau = -120):")
    for pt in negative_eigenvalues(-120.0):
        print(f"  {pt.branch.parity.value}-{pt.branch.index}: {pt.mu:.10f}")

    for parity, l in ((Parity.EVEN, 0), (Parity.ODD, 1)):
        tau_c = crossing_tau(parity, l)
        mu = branch_parameterization(parity, l, tau_c).mu
        print(f"kernel crossing {parity.value}-{l}: tau = {tau_c:.15f}, mu = {mu}")
    print(f"  (compare -pi^2/4 = {-math.pi ** 2 / 4:.15f}, -pi^2 = {-math.pi ** 2:.15f})")

    print("periodic band values at R = 2:")
    for l in range(4):
        print(f"  l={l}: mu = {periodic_mu(l, -1.0, 2.0):.12f}")

    path = os.path.join(OUT, "spectrum_tour.csv")
    atomic_write_text(path, spectrum_csv(rows, RADIUS))
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
