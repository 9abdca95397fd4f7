"""Command-line front end for the spectral, classification, and run tools.

Five subcommands expose the library: ``spectrum`` (eigenvalue listings
under free or periodic conditions), ``classify`` (full instability
decision for one parameter set), ``region`` (boundary curves, membership
raster, optional SVG), ``simulate`` (one seeded nonlinear run with
snapshot and report files), and ``muast`` (the shrinking-domain search
driving the first eigenvalue below ``-c*tau**2``).

Exit codes: 0 success, 2 invalid flags or configuration, 3 solver
failure, 4 region-family precondition failure, 5 eigenvalue-target search
exhausted.  Identical invocations produce byte-identical outputs; the
environment variable ``T4_THREADS`` caps raster parallelism.  Files are
written atomically (temp file plus rename).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import serialize
from .dispersion import in_turing_space
from .kinetics import gm_steady_state
from .regions import boundary_curve, classification_spectrum, rasterize
from .simulate import run
from .spectrum import find_muast, spectrum_list
from .types import (
    BoundaryCondition,
    Family,
    FamilyPreconditionError,
    GMConstants,
    Method,
    MuastNotFoundError,
    ReactionParams,
    RegionSpec,
    Side,
    SimConfig,
    SolverError,
    TensionedOperator,
    ValidationError,
)

__all__ = ["main", "build_parser"]

_MINUS_FAMILIES = (Family.E_MINUS, Family.O_MINUS, Family.I_PER_MINUS)

_METHODS = {
    "param": Method.PARAMETERIZED,
    "det": Method.DETERMINANT,
    "fd": Method.FINITE_DIFFERENCE,
}


def _threads() -> int | None:
    raw = os.environ.get("T4_THREADS")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(f"T4_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise ValidationError(f"T4_THREADS must be positive, got {value}")
    return value


def _floats(text: str, n: int, what: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != n:
        raise ValidationError(
            f"{what} needs {n} comma-separated numbers, got {text!r}"
        )
    try:
        return [float(part) for part in parts]
    except ValueError:
        raise ValidationError(f"{what} is not numeric: {text!r}")


def _parse_p(text: str) -> ReactionParams:
    f_u, f_v, g_u, g_v, k = _floats(text, 5, "--p (f_u,f_v,g_u,g_v,k)")
    if k <= 0:
        raise ValidationError(f"diffusion ratio k must be positive, got {k}")
    return ReactionParams(f_u=f_u, f_v=f_v, g_u=g_u, g_v=g_v, k=k)


def _parse_kinetics(text: str) -> GMConstants:
    k1, k2, k3, k4, k5 = _floats(text, 5, "--kinetics (k1,k2,k3,k4,k5)")
    try:
        return GMConstants(k1=k1, k2=k2, k3=k3, k4=k4, k5=k5)
    except ValueError as exc:
        raise ValidationError(str(exc))


def _parse_families(text: str) -> list[RegionSpec]:
    specs = []
    for item in text.split(","):
        name, colon, index = item.partition(":")
        if not colon:
            raise ValidationError(
                f"family {item!r} must look like Name:index, e.g. EPlus:0"
            )
        try:
            family = Family(name)
        except ValueError:
            known = ", ".join(f.value for f in Family)
            raise ValidationError(f"unknown family {name!r}; known: {known}")
        try:
            l = int(index)
        except ValueError:
            raise ValidationError(f"family index must be an integer, got {index!r}")
        if l < 0:
            raise ValidationError(f"family index must be nonnegative, got {l}")
        specs.append(RegionSpec(family=family, l=l))
    return specs


def _parse_grid(text: str) -> tuple[tuple[float, float, int], tuple[float, float, int]]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValidationError(
            f"--grid must be Rmin:Rmax:n,taumin:taumax:n, got {text!r}"
        )
    out = []
    for part, what in zip(parts, ("R", "tau")):
        pieces = part.split(":")
        if len(pieces) != 3:
            raise ValidationError(f"grid axis {part!r} must be min:max:n")
        try:
            lo, hi, n = float(pieces[0]), float(pieces[1]), int(pieces[2])
        except ValueError:
            raise ValidationError(f"grid axis {part!r} is not numeric")
        if not lo < hi:
            raise ValidationError(f"{what} axis needs min < max, got {part!r}")
        if n < 1:
            raise ValidationError(f"{what} axis needs n >= 1, got {n}")
        out.append((lo, hi, n))
    return out[0], out[1]


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        serialize.atomic_write_text(output, text)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_spectrum(args: argparse.Namespace) -> int:
    op = TensionedOperator(tau=args.tau, bc=BoundaryCondition(args.bc))
    points = spectrum_list(op, args.radius, args.count, _METHODS[args.method])
    if args.format == "csv":
        text = serialize.spectrum_csv(points, args.radius)
    else:
        text = serialize.spectrum_json(points, args.radius)
    _emit(text, args.output)
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    p = _parse_p(args.p)
    spectrum = classification_spectrum(p, args.tau, args.radius)
    decision = in_turing_space(p, args.tau, spectrum)
    _emit(serialize.decision_json(decision, p, args.tau, args.radius), args.output)
    return 0


def cmd_region(args: argparse.Namespace) -> int:
    p = _parse_p(args.p)
    families = _parse_families(args.families)
    (r_min, r_max, n_r), (tau_min, tau_max, n_tau) = _parse_grid(args.grid)
    boundaries = []
    for spec in families:
        sides = (Side.TOP,) if spec.family in _MINUS_FAMILIES else (Side.BOTTOM, Side.TOP)
        for side in sides:
            boundaries.append(boundary_curve(spec, p, side, args.samples))
    raster = rasterize(
        p,
        (r_min, r_max),
        (tau_min, tau_max),
        (n_r, n_tau),
        families,
        threads=_threads(),
    )
    os.makedirs(args.outdir, exist_ok=True)
    serialize.atomic_write_text(
        os.path.join(args.outdir, "curves.csv"), serialize.curves_csv(boundaries)
    )
    serialize.atomic_write_text(
        os.path.join(args.outdir, "raster.csv"), serialize.raster_csv(raster)
    )
    serialize.atomic_write_text(
        os.path.join(args.outdir, "raster_meta.json"),
        serialize.raster_meta_json(raster),
    )
    if args.svg is not None:
        serialize.atomic_write_text(
            args.svg, serialize.region_svg(raster, boundaries)
        )
    return 0


_INLINE_SIMULATE_FLAGS = (
    "radius", "tau", "k", "kinetics", "seed", "n_grid", "dt", "t_max",
    "amplitude", "stride",
)


def _simulate_config(args: argparse.Namespace) -> SimConfig:
    inline_given = [
        flag for flag in _INLINE_SIMULATE_FLAGS if getattr(args, flag) is not None
    ]
    if args.config is not None:
        if inline_given:
            raise ValidationError(
                "--config excludes inline flags (got --"
                + ", --".join(flag.replace("_", "-") for flag in inline_given)
                + ")"
            )
        try:
            with open(args.config, "r", encoding="utf-8") as handle:
                document = json.load(handle)
        except OSError as exc:
            raise ValidationError(f"cannot read {args.config}: {exc}")
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{args.config} is not valid JSON: {exc}")
        return serialize.load_run_config(document)
    required = ("radius", "tau", "k", "kinetics", "seed")
    missing = [flag for flag in required if getattr(args, flag) is None]
    if missing:
        raise ValidationError(
            "without --config these flags are required: --"
            + ", --".join(flag.replace("_", "-") for flag in missing)
        )
    kwargs = {
        "R": args.radius,
        "tau": args.tau,
        "k": args.k,
        "kinetics": _parse_kinetics(args.kinetics),
        "seed": args.seed,
    }
    if args.n_grid is not None:
        kwargs["n_grid"] = args.n_grid
    if args.dt is not None:
        kwargs["dt"] = args.dt
    if args.t_max is not None:
        kwargs["t_max"] = args.t_max
    if args.amplitude is not None:
        kwargs["perturbation_amplitude"] = args.amplitude
    if args.stride is not None:
        kwargs["snapshot_stride"] = args.stride
    try:
        return SimConfig(**kwargs)
    except ValueError as exc:
        raise ValidationError(str(exc))


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _simulate_config(args)
    gm_steady_state(cfg.kinetics)  # surfaces bad kinetics before any stepping
    os.makedirs(args.outdir, exist_ok=True)
    report_path = os.path.join(args.outdir, "report.json")
    try:
        report, snapshots = run(cfg)
    except SolverError as exc:
        serialize.atomic_write_text(
            report_path, serialize.solver_failure_json(str(exc), cfg)
        )
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3
    serialize.atomic_write_text(
        os.path.join(args.outdir, "snapshots.csv"),
        serialize.snapshots_csv(snapshots, cfg.R),
    )
    serialize.write_t4sim(
        os.path.join(args.outdir, "snapshots.t4sim"), cfg, snapshots
    )
    serialize.atomic_write_text(report_path, serialize.run_report_json(report, cfg))
    return 0


def cmd_muast(args: argparse.Namespace) -> int:
    result = find_muast(args.tau, args.c)
    _emit(serialize.muast_json(result), args.output)
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="turing4",
        description=(
            "Spectra, instability regions, and nonlinear runs of the "
            "tensioned fourth-order reaction-diffusion system."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="list eigenvalues of one operator")
    sp.add_argument("--bc", choices=["free", "periodic"], required=True)
    sp.add_argument("--tau", type=float, required=True)
    sp.add_argument("--radius", type=float, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--method", choices=sorted(_METHODS), default="param")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--output", default=None, help="file instead of stdout")
    sp.set_defaults(func=cmd_spectrum)

    cl = sub.add_parser("classify", help="instability decision for one p")
    cl.add_argument("--p", required=True, help="f_u,f_v,g_u,g_v,k")
    cl.add_argument("--tau", type=float, required=True)
    cl.add_argument("--radius", type=float, required=True)
    cl.add_argument("--output", default=None, help="file instead of stdout")
    cl.set_defaults(func=cmd_classify)

    rg = sub.add_parser("region", help="boundary curves and membership raster")
    rg.add_argument("--p", required=True, help="f_u,f_v,g_u,g_v,k")
    rg.add_argument(
        "--families", required=True, help="comma list of Name:index, e.g. EPlus:0"
    )
    rg.add_argument("--grid", required=True, help="Rmin:Rmax:n,taumin:taumax:n")
    rg.add_argument("--samples", type=int, default=200, help="points per curve")
    rg.add_argument("--svg", default=None, help="also write an SVG overview")
    rg.add_argument("--outdir", default=".", help="directory for output files")
    rg.set_defaults(func=cmd_region)

    sm = sub.add_parser("simulate", help="one seeded nonlinear run")
    sm.add_argument("--config", default=None, help="JSON run configuration")
    sm.add_argument("--radius", type=float, default=None)
    sm.add_argument("--tau", type=float, default=None)
    sm.add_argument("--k", type=float, default=None)
    sm.add_argument("--kinetics", default=None, help="k1,k2,k3,k4,k5")
    sm.add_argument("--seed", type=int, default=None, help="required inline")
    sm.add_argument("--n-grid", dest="n_grid", type=int, default=None)
    sm.add_argument("--dt", type=float, default=None)
    sm.add_argument("--t-max", dest="t_max", type=float, default=None)
    sm.add_argument(
        "--amplitude", type=float, default=None, help="perturbation amplitude"
    )
    sm.add_argument("--stride", type=int, default=None, help="snapshot stride")
    sm.add_argument("--outdir", default=".", help="directory for output files")
    sm.set_defaults(func=cmd_simulate)

    mu = sub.add_parser("muast", help="search R with mu_1 <= -c*tau**2")
    mu.add_argument("--tau", type=float, required=True)
    mu.add_argument("--c", type=float, required=True)
    mu.add_argument("--output", default=None, help="file instead of stdout")
    mu.set_defaults(func=cmd_muast)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FamilyPreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except MuastNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
