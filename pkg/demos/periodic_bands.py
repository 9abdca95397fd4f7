"""Periodic-cell bands: closed-form eigenvalues and their region boundaries.

On a periodic cell the spectrum is explicit, so each band boundary inverts a
quadratic in tau; this sweeps the first few wavenumbers, shows where each
mode enters and leaves the unstable band, and rasters the periodic plus
families next to their free counterparts for comparison.
"""

import os

from turing4 import (
    Family,
    GMConstants,
    RegionSpec,
    Side,
    boundary_tau,
    periodic_mu,
    quantities,
    rasterize,
    reaction_params,
)
from turing4.serialize import atomic_write_text, raster_csv, region_svg

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "output")
P_STAR = reaction_params(GMConstants(0.0, 0.4, 1.0, 1.0, 1.0), 30.0)


def main() -> None:
    os.makedirs(OUT, exist_ok=True)
    q = quantities(P_STAR)
    print(f"unstable band: ({q.a:.10f}, {q.b:.10f})")

    R = 10.0
    print(f"periodic eigenvalues at R = {R}, tau = 0.2:")
    for l in range(5):
        mu = periodic_mu(l, 0.2, R)
        status = "in band" if q.a < mu < q.b else "outside"
        print(f"  l={l}: mu = {mu:.10f}  ({status})")

    print("band entry/exit tensions for the periodic plus families:")
    for l in (1, 2, 3):
        spec = RegionSpec(Family.I_PER_PLUS, l)
        bottom = boundary_tau(spec, P_STAR, Side.BOTTOM, R)
        top = boundary_tau(spec, P_STAR, Side.TOP, R)
        print(f"  l={l}: tau in ({bottom:.8f}, {top:.8f})")

    specs = [RegionSpec(Family.I_PER_PLUS, l) for l in (1, 2, 3)] + [
        RegionSpec(Family.I_PER_MINUS, 1)
    ]
    raster = rasterize(P_STAR, (0.5, 25.0), (-0.5, 1.5), (60, 48), specs)
    atomic_write_text(os.path.join(OUT, "periodic_raster.csv"), raster_csv(raster))
    atomic_write_text(os.path.join(OUT, "periodic.svg"), region_svg(raster))
    print(f"wrote periodic band files to {OUT}")


if __name__ == "__main__":
    main()
