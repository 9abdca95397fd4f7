"""Deterministic on-disk formats for spectra, regions, and simulation runs.

Every numeric field is written with 17 significant digits (``%.17g``) in
CSV and with ``repr`` round-trip fidelity in JSON, so identical inputs
produce byte-identical files and regression diffs stay meaningful.  All
writers go through an atomic temp-file-plus-rename so readers never see a
partial file.

The compact snapshot format ``T4SIM`` is five magic bytes followed by a
little-endian ``float64`` header ``(n_grid, R, tau, k, dt)`` and frames of
``1 + 2*(n_grid+1)`` doubles each: the time stamp, the activator field,
the inhibitor field.

Run configuration files are JSON documents mirroring ``SimConfig`` with
the kinetics constants nested; they are schema-validated and unknown keys
are rejected.
"""

from __future__ import annotations

import json
import os
import struct
import tempfile
from typing import Iterable, Sequence

import numpy as np
from jsonschema import Draft202012Validator

from .types import (
    GMConstants,
    GridRaster,
    RegionBoundary,
    RunReport,
    SimConfig,
    SimState,
    SpectrumPoint,
    TuringDecision,
    ValidationError,
)

__all__ = [
    "T4SIM_MAGIC",
    "RUN_CONFIG_SCHEMA",
    "format_float",
    "atomic_write_text",
    "atomic_write_bytes",
    "spectrum_csv",
    "spectrum_json",
    "decision_json",
    "curves_csv",
    "raster_csv",
    "raster_meta_json",
    "snapshots_csv",
    "write_t4sim",
    "read_t4sim",
    "config_dict",
    "run_report_json",
    "solver_failure_json",
    "muast_json",
    "load_run_config",
    "region_svg",
]

T4SIM_MAGIC = b"T4SIM"

RUN_CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Run configuration",
    "type": "object",
    "properties": {
        "R": {"type": "number", "exclusiveMinimum": 0},
        "tau": {"type": "number"},
        "k": {"type": "number", "exclusiveMinimum": 0},
        "kinetics": {
            "type": "object",
            "properties": {
                "k1": {"type": "number", "minimum": 0},
                "k2": {"type": "number", "exclusiveMinimum": 0},
                "k3": {"type": "number", "exclusiveMinimum": 0},
                "k4": {"type": "number", "exclusiveMinimum": 0},
                "k5": {"type": "number", "exclusiveMinimum": 0},
            },
            "required": ["k1", "k2", "k3", "k4", "k5"],
            "additionalProperties": False,
        },
        "seed": {"type": "integer"},
        "n_grid": {"type": "integer", "minimum": 128},
        "dt": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.01},
        "t_max": {"type": "number", "exclusiveMinimum": 0},
        "perturbation_amplitude": {"type": "number", "minimum": 0},
        "snapshot_stride": {"type": "integer", "minimum": 1},
    },
    "required": ["R", "tau", "k", "kinetics", "seed"],
    "additionalProperties": False,
}

_CONFIG_VALIDATOR = Draft202012Validator(RUN_CONFIG_SCHEMA)


def format_float(x: float) -> str:
    """Full double precision rendering used by every CSV writer."""
    return format(float(x), ".17g")


def _write_atomic(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".t4tmp-")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: str, text: str) -> None:
    """Write text through a temp file and rename, never a partial file."""
    _write_atomic(path, text.encode("utf-8"))


def atomic_write_bytes(path: str, data: bytes) -> None:
    """Write bytes through a temp file and rename, never a partial file."""
    _write_atomic(path, data)


def _csv(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _json(document) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


# --------------------------------------------------------------------------
# spectra
# --------------------------------------------------------------------------

def _point_rows(points: Sequence[SpectrumPoint], R: float):
    for pt in points:
        yield (
            pt.branch.parity.value,
            str(pt.branch.index),
            format_float(pt.tau),
            format_float(R),
            format_float(pt.mu),
            pt.method.value,
        )


def spectrum_csv(points: Sequence[SpectrumPoint], R: float) -> str:
    """CSV rows ``parity,l,tau,R,mu,method`` for one spectrum listing."""
    return _csv(("parity", "l", "tau", "R", "mu", "method"), _point_rows(points, R))


def spectrum_json(points: Sequence[SpectrumPoint], R: float) -> str:
    """JSON document carrying the same fields as :func:`spectrum_csv`."""
    return _json(
        {
            "R": R,
            "points": [
                {
                    "parity": pt.branch.parity.value,
                    "l": pt.branch.index,
                    "tau": pt.tau,
                    "mu": pt.mu,
                    "method": pt.method.value,
                }
                for pt in points
            ],
        }
    )


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------

def decision_json(decision: TuringDecision, p, tau: float, R: float) -> str:
    """Full decision record for one parameter set on one interval."""
    return _json(
        {
            "p": {
                "f_u": p.f_u,
                "f_v": p.f_v,
                "g_u": p.g_u,
                "g_v": p.g_v,
                "k": p.k,
            },
            "tau": tau,
            "R": R,
            "member": decision.member,
            "case": decision.case,
            "witness_mu": decision.witness_mu,
            "conditions": list(decision.conditions),
            "A": decision.A,
            "a": decision.a,
            "b": decision.b,
        }
    )


# --------------------------------------------------------------------------
# regions
# --------------------------------------------------------------------------

def curves_csv(boundaries: Sequence[RegionBoundary]) -> str:
    """CSV rows ``family,l,side,R,tau`` for a batch of boundary curves."""

    def rows():
        for boundary in boundaries:
            for R, tau in boundary.curve:
                yield (
                    boundary.spec.family.value,
                    str(boundary.spec.l),
                    boundary.side.value,
                    format_float(R),
                    format_float(tau),
                )

    return _csv(("family", "l", "side", "R", "tau"), rows())


def _spec_label(spec) -> str:
    return f"{spec.family.value}:{spec.l}"


def raster_csv(raster: GridRaster) -> str:
    """Long-format CSV of raster cells: indices, centers, member families."""

    def rows():
        for i in range(raster.n_tau):
            for j in range(raster.n_r):
                mask = raster.cells[i][j]
                members = [
                    _spec_label(spec)
                    for m, spec in enumerate(raster.families)
                    if mask >> m & 1
                ]
                yield (
                    str(i),
                    str(j),
                    format_float(raster.r_center(j)),
                    format_float(raster.tau_center(i)),
                    "|".join(members),
                )

    return _csv(("i", "j", "R", "tau", "members"), rows())


def raster_meta_json(raster: GridRaster) -> str:
    """Grid geometry and the family list that produced a raster."""
    return _json(
        {
            "r_min": raster.r_min,
            "r_max": raster.r_max,
            "tau_min": raster.tau_min,
            "tau_max": raster.tau_max,
            "n_r": raster.n_r,
            "n_tau": raster.n_tau,
            "families": [_spec_label(spec) for spec in raster.families],
        }
    )


# --------------------------------------------------------------------------
# simulation runs
# --------------------------------------------------------------------------

def snapshots_csv(snapshots: Sequence[SimState], R: float) -> str:
    """Long-format CSV ``t,x,u,v`` across all snapshots of one run."""

    def rows():
        for snap in snapshots:
            u = np.asarray(snap.u)
            v = np.asarray(snap.v)
            x = np.linspace(-R, R, u.size)
            t_str = format_float(snap.t)
            for xi, ui, vi in zip(x, u, v):
                yield (t_str, format_float(xi), format_float(ui), format_float(vi))

    return _csv(("t", "x", "u", "v"), rows())


def write_t4sim(path: str, cfg: SimConfig, snapshots: Sequence[SimState]) -> None:
    """Binary snapshot frames with the T4SIM magic and float64 header."""
    parts = [
        T4SIM_MAGIC,
        struct.pack(
            "<5d", float(cfg.n_grid), cfg.R, cfg.tau, cfg.k, cfg.dt
        ),
    ]
    for snap in snapshots:
        u = np.ascontiguousarray(snap.u, dtype="<f8")
        v = np.ascontiguousarray(snap.v, dtype="<f8")
        if u.size != cfg.n_grid + 1 or v.size != cfg.n_grid + 1:
            raise ValidationError(
                f"snapshot at t={snap.t!r} has {u.size} points, expected "
                f"{cfg.n_grid + 1}"
            )
        parts.append(struct.pack("<d", snap.t))
        parts.append(u.tobytes())
        parts.append(v.tobytes())
    atomic_write_bytes(path, b"".join(parts))


def read_t4sim(path: str) -> tuple[dict, list[dict]]:
    """Read back a T4SIM file; returns (header, frames).

    The header is ``{"n_grid", "R", "tau", "k", "dt"}``; each frame is
    ``{"t", "u", "v"}`` with numpy arrays.
    """
    with open(path, "rb") as handle:
        blob = handle.read()
    if blob[: len(T4SIM_MAGIC)] != T4SIM_MAGIC:
        raise ValidationError(f"{path}: not a T4SIM file (bad magic)")
    offset = len(T4SIM_MAGIC)
    n_grid_f, R, tau, k, dt = struct.unpack_from("<5d", blob, offset)
    offset += 5 * 8
    n_grid = int(n_grid_f)
    if n_grid_f != n_grid or n_grid < 1:
        raise ValidationError(f"{path}: invalid n_grid {n_grid_f!r} in header")
    header = {"n_grid": n_grid, "R": R, "tau": tau, "k": k, "dt": dt}
    npts = n_grid + 1
    frame_bytes = (1 + 2 * npts) * 8
    body = blob[offset:]
    if len(body) % frame_bytes:
        raise ValidationError(
            f"{path}: truncated frame ({len(body)} bytes after header, "
            f"frame size {frame_bytes})"
        )
    frames = []
    for start in range(0, len(body), frame_bytes):
        (t,) = struct.unpack_from("<d", body, start)
        u = np.frombuffer(body, dtype="<f8", count=npts, offset=start + 8)
        v = np.frombuffer(body, dtype="<f8", count=npts, offset=start + 8 + npts * 8)
        frames.append({"t": t, "u": u.copy(), "v": v.copy()})
    return header, frames


def config_dict(cfg: SimConfig) -> dict:
    """JSON-ready mirror of a SimConfig (also a valid run-config document)."""
    return {
        "R": cfg.R,
        "tau": cfg.tau,
        "k": cfg.k,
        "kinetics": {
            "k1": cfg.kinetics.k1,
            "k2": cfg.kinetics.k2,
            "k3": cfg.kinetics.k3,
            "k4": cfg.kinetics.k4,
            "k5": cfg.kinetics.k5,
        },
        "seed": cfg.seed,
        "n_grid": cfg.n_grid,
        "dt": cfg.dt,
        "t_max": cfg.t_max,
        "perturbation_amplitude": cfg.perturbation_amplitude,
        "snapshot_stride": cfg.snapshot_stride,
    }


def run_report_json(report: RunReport, cfg: SimConfig) -> str:
    """Run report: classification, timing, conservation, detector log."""
    return _json(
        {
            "classification": report.classification.value,
            "t_final": report.t_final,
            "dt_used": report.dt_used,
            "n_steps": report.n_steps,
            "mass_drift_u": report.mass_drift_u,
            "mass_drift_v": report.mass_drift_v,
            "floor_activations": report.floor_activations,
            "detector_log": list(report.detector_log),
            "config": config_dict(cfg),
        }
    )


def solver_failure_json(message: str, cfg: SimConfig) -> str:
    """Report written when a run dies in the solver instead of a detector."""
    return _json({"error": message, "config": config_dict(cfg)})


def muast_json(result) -> str:
    """Search report of the arbitrarily-negative-eigenvalue sweep."""
    return _json(
        {
            "tau": result.tau,
            "c": result.c,
            "target": result.target,
            "R": result.R,
            "mu1": result.mu1,
            "threshold_R": result.threshold_R,
            "tested": list(result.tested),
        }
    )


# --------------------------------------------------------------------------
# run configuration files
# --------------------------------------------------------------------------

def load_run_config(document: dict) -> SimConfig:
    """Validate a run-configuration document and build the SimConfig.

    Unknown keys anywhere in the document are rejected; missing optional
    fields take the SimConfig defaults.
    """
    errors = sorted(_CONFIG_VALIDATOR.iter_errors(document), key=str)
    if errors:
        joined = "; ".join(
            f"{'/'.join(str(p) for p in err.absolute_path) or '<root>'}: {err.message}"
            for err in errors
        )
        raise ValidationError(f"run configuration invalid: {joined}")
    kin = document["kinetics"]
    kwargs = {
        "R": float(document["R"]),
        "tau": float(document["tau"]),
        "k": float(document["k"]),
        "kinetics": GMConstants(
            k1=float(kin["k1"]),
            k2=float(kin["k2"]),
            k3=float(kin["k3"]),
            k4=float(kin["k4"]),
            k5=float(kin["k5"]),
        ),
        "seed": int(document["seed"]),
    }
    for field in ("n_grid", "snapshot_stride"):
        if field in document:
            kwargs[field] = int(document[field])
    for field in ("dt", "t_max", "perturbation_amplitude"):
        if field in document:
            kwargs[field] = float(document[field])
    return SimConfig(**kwargs)


# --------------------------------------------------------------------------
# SVG
# --------------------------------------------------------------------------

_SVG_FILLS = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#e377c2",
)


def _svg_coord(x: float) -> str:
    return format(x, ".6g")


def region_svg(
    raster: GridRaster,
    boundaries: Sequence[RegionBoundary] = (),
    width: int = 640,
    height: int = 480,
) -> str:
    """Minimal SVG: axis box, shaded member cells, boundary polylines.

    Cells are colored per family (cycling a fixed palette, drawn with
    0.35 opacity so overlaps show); no axis ticks or labels beyond the
    corner coordinates.
    """
    margin = 40.0
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin
    r_span = raster.r_max - raster.r_min
    tau_span = raster.tau_max - raster.tau_min

    def sx(r: float) -> float:
        return margin + (r - raster.r_min) / r_span * plot_w

    def sy(tau: float) -> float:
        return height - margin - (tau - raster.tau_min) / tau_span * plot_h

    fills = {
        _spec_label(spec): _SVG_FILLS[idx % len(_SVG_FILLS)]
        for idx, spec in enumerate(raster.families)
    }
    cell_w = plot_w / raster.n_r
    cell_h = plot_h / raster.n_tau
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="{_svg_coord(margin)}" y="{_svg_coord(margin)}" '
        f'width="{_svg_coord(plot_w)}" height="{_svg_coord(plot_h)}" '
        'fill="none" stroke="black"/>',
    ]
    for i in range(raster.n_tau):
        for j in range(raster.n_r):
            mask = raster.cells[i][j]
            for m, spec in enumerate(raster.families):
                if not mask >> m & 1:
                    continue
                x = margin + j * cell_w
                y = height - margin - (i + 1) * cell_h
                parts.append(
                    f'<rect x="{_svg_coord(x)}" y="{_svg_coord(y)}" '
                    f'width="{_svg_coord(cell_w)}" height="{_svg_coord(cell_h)}" '
                    f'fill="{fills[_spec_label(spec)]}" fill-opacity="0.35"/>'
                )
    for boundary in boundaries:
        pts = " ".join(
            f"{_svg_coord(sx(R))},{_svg_coord(sy(tau))}"
            for R, tau in boundary.curve
            if raster.tau_min <= tau <= raster.tau_max
            and raster.r_min <= R <= raster.r_max
        )
        if pts:
            parts.append(
                f'<polyline points="{pts}" fill="none" stroke="black" '
                'stroke-width="1"/>'
            )
    corner = (
        f'<text x="{_svg_coord(margin)}" y="{_svg_coord(height - margin + 16)}" '
        f'font-size="12">R: {_svg_coord(raster.r_min)}..{_svg_coord(raster.r_max)}'
        f"  tau: {_svg_coord(raster.tau_min)}..{_svg_coord(raster.tau_max)}</text>"
    )
    parts.append(corner)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
