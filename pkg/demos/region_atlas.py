"""Atlas of instability regions in the (R, tau) plane.

Builds boundary curves and a membership raster for the leading even/odd
families of the reference parameter set, renders an SVG overview, and does
the same for the tilde families of a parameter set on the oscillatory route
(weighted trace failing).  Everything lands in demos/output/.
"""

import os

from turing4 import (
    Family,
    GMConstants,
    ReactionParams,
    RegionSpec,
    Side,
    boundary_curve,
    check_nesting,
    rasterize,
    reaction_params,
    region_contains,
)
from turing4.serialize import atomic_write_text, curves_csv, raster_csv, region_svg

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "output")
P_STAR = reaction_params(GMConstants(0.0, 0.4, 1.0, 1.0, 1.0), 30.0)
P_TILDE = ReactionParams(0.1, -0.01, 20.0, -1.0, 1.0)
SAMPLES = 60


def sides_for(spec: RegionSpec) -> tuple[Side, ...]:
    if spec.family in (Family.E_MINUS, Family.O_MINUS, Family.I_PER_MINUS):
        return (Side.TOP,)
    return (Side.BOTTOM, Side.TOP)


def main() -> None:
    os.makedirs(OUT, exist_ok=True)

    star_specs = [
        RegionSpec(Family.E_PLUS, l) for l in (0, 1, 2)
    ] + [
        RegionSpec(Family.O_PLUS, l) for l in (0, 1, 2)
    ] + [
        RegionSpec(Family.E_MINUS, 0),
        RegionSpec(Family.O_MINUS, 0),
    ]
    curves = [
        boundary_curve(spec, P_STAR, side, SAMPLES)
        for spec in star_specs
        for side in sides_for(spec)
    ]
    raster = rasterize(P_STAR, (0.5, 25.0), (-0.5, 1.5), (60, 48), star_specs)
    atomic_write_text(os.path.join(OUT, "atlas_curves.csv"), curves_csv(curves))
    atomic_write_text(os.path.join(OUT, "atlas_raster.csv"), raster_csv(raster))
    atomic_write_text(os.path.join(OUT, "atlas.svg"), region_svg(raster, curves))

    probe = (20.0, 0.5)
    inside = [
        f"{spec.family.value}:{spec.l}"
        for spec in star_specs
        if region_contains(spec, P_STAR, *probe)
    ]
    print(f"families containing (R, tau) = {probe}: {', '.join(inside)}")
    for family in (Family.E_MINUS, Family.E_PLUS, Family.O_PLUS):
        report = check_nesting(P_STAR, family, 2)
        print(f"nesting {family.value} (l <= 2): passed = {report.passed}, "
              f"worst margin = {report.worst_margin:.4f}")

    tilde_specs = [RegionSpec(Family.E_TILDE, 1), RegionSpec(Family.O_TILDE, 1)]
    tilde_curves = [
        boundary_curve(spec, P_TILDE, side, SAMPLES)
        for spec in tilde_specs
        for side in sides_for(spec)
    ]
    tilde_raster = rasterize(P_TILDE, (0.5, 10.0), (-3.0, 0.0), (48, 40), tilde_specs)
    atomic_write_text(os.path.join(OUT, "tilde_curves.csv"), curves_csv(tilde_curves))
    atomic_write_text(os.path.join(OUT, "tilde.svg"),
                      region_svg(tilde_raster, tilde_curves))
    filled = sum(
        1 for row in tilde_raster.cells for mask in row if mask
    )
    print(f"tilde raster: {filled} of {tilde_raster.n_r * tilde_raster.n_tau} "
          "cells inside a region (all at tau < 0)")
    print(f"wrote atlas files to {OUT}")


if __name__ == "__main__":
    main()
