"""Command-line front end: ``nffsim field-map | cut | sweep | validate``."""

from __future__ import annotations

import io
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from .array import Configuration, ElementModel, Polarization, build_array
from .closed_forms import ey_closed, fx_closed, fy_closed
from .config import ConfigError, RunConfig, parse_config
from .fields import SINGULAR_RADIUS, copolar_field, default_threads, field_map, phase_conjugation_weights
from .metrics import gain_sweep
from .validation import run_checks


def fmt(value) -> str:
    """Nine significant digits, scientific notation."""
    return f"{value:.8e}"


def field_map_csv(run: RunConfig) -> str:
    elements = build_array(run.array_config())
    focus = run.focus_spec()
    w = phase_conjugation_weights(elements, focus.point, focus.ue_polarization, run.conjugation)
    fmap = field_map(elements, w, run.grid(), threads=run.threads)
    pts = fmap.grid.points().reshape(-1, 2)
    if fmap.ez is not None:
        ex, ey = fmap.ez.ravel(), np.zeros(fmap.ez.size, dtype=complex)
    else:
        ex, ey = fmap.ex.ravel(), fmap.ey.ravel()
    out = io.StringIO()
    out.write("x_m,y_m,re_ex,im_ex,re_ey,im_ey\n")
    for (x, y), a, b in zip(pts, ex, ey):
        out.write(",".join(fmt(v) for v in (x, y, a.real, a.imag, b.real, b.imag)) + "\n")
    return out.getvalue()


def _closed_form_column(run: RunConfig, pos):
    """Closed-form reference for the cuts that have one, else ``None``."""
    cfg = run.array_config()
    if (cfg.configuration is not Configuration.C1 or cfg.element_model is not ElementModel.HERTZIAN
            or run.focus_x_m != 0.0 or run.focus_y_m != 0.0):
        return None
    if run.ue_polarization is Polarization.X:
        return fx_closed(pos, cfg.wavelength) if run.axis is Polarization.X else fy_closed(pos, cfg.wavelength)
    if run.axis is Polarization.Y and cfg.n_elements % 4:
        return None
    return ey_closed(pos, cfg.wavelength, cfg.radius) * cfg.radius / 2.0


def cut_csv(run: RunConfig) -> str:
    elements = build_array(run.array_config())
    focus = run.focus_spec()
    pol = focus.ue_polarization
    w = phase_conjugation_weights(elements, focus.point, pol, run.conjugation)
    lo, hi = run.span()
    pos = np.linspace(lo, hi, run.points) if run.points > 1 else np.array([0.0])
    pts = np.tile(focus.point, (len(pos), 1))
    pts[:, 0 if run.axis is Polarization.X else 1] += pos
    peak = abs(copolar_field(elements, w, focus.point, pol))
    gaps = np.min(np.hypot(*(pts[:, None, :] - elements.positions[None]).transpose(2, 0, 1)), axis=1)
    amps = np.full(len(pos), np.nan)
    ok = gaps >= SINGULAR_RADIUS
    if ok.any():
        amps[ok] = np.abs(copolar_field(elements, w, pts[ok], pol)) / peak
    closed = _closed_form_column(run, pos)
    out = io.StringIO()
    out.write("pos_m,abs_e_norm,closed_form\n")
    for i, p in enumerate(pos):
        ref = "" if closed is None else fmt(float(np.atleast_1d(closed)[i]))
        out.write(f"{fmt(p)},{fmt(amps[i])},{ref}\n")
    return out.getvalue()


def sweep_outputs(run: RunConfig):
    """CSV text and JSON summary of a focal-point gain sweep."""
    lo, hi = run.span()
    if run.points == 1:
        pos = np.array([run.focus_x_m if run.axis is Polarization.X else run.focus_y_m])
    else:
        pos = np.linspace(lo, hi, run.points)
    curve = gain_sweep(run.array_config(), run.axis, pos, run.ue_polarization, run.conjugation, run.threads)
    out = io.StringIO()
    out.write("pos_m,peak_gain_db\n")
    for p, g in zip(curve.positions, curve.gains_db):
        out.write(f"{fmt(p)},{fmt(g)}\n")
    summary = {
        "parameter": curve.parameter,
        "n_points": len(curve.positions),
        "argmax_m": curve.argmax_position,
        "max_gain_db": float(np.max(curve.gains_db)),
        "min_gain_db": float(np.min(curve.gains_db)),
        "fluctuation_db": curve.fluctuation_db,
        "config": run.to_text().splitlines(),
    }
    return out.getvalue(), json.dumps(summary, indent=2) + "\n"


def _emit(text: str, path):
    if path is None:
        click.echo(text, nl=False)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise click.ClickException(f"cannot write {path}: {exc}") from None


def _parse_floats(value, count, name):
    try:
        parts = [float(v) for v in value.split(",")]
    except ValueError:
        parts = []
    if len(parts) != count:
        raise click.BadParameter(f"expected {count} comma-separated numbers", param_hint=name)
    return parts


def _load(options, required=True) -> RunConfig:
    overrides = {
        "n_elements": options.get("n"),
        "radius_m": options.get("radius_m"),
        "wavelength_m": options.get("wavelength_m"),
        "configuration": options.get("configuration"),
        "element_model": options.get("element_model"),
        "focus_x_m": options.get("focus_x_m"),
        "focus_y_m": options.get("focus_y_m"),
        "ue_polarization": options.get("pol"),
        "axis": options.get("axis"),
        "points": options.get("points"),
        "conjugation": options.get("conjugation"),
        "threads": options.get("threads"),
        "out": options.get("out"),
    }
    if options.get("grid"):
        keys = ("grid_xmin_m", "grid_xmax_m", "grid_ymin_m", "grid_ymax_m", "grid_step_m")
        overrides.update(zip(keys, _parse_floats(options["grid"], 5, "--grid")))
    if options.get("range_m"):
        overrides.update(zip(("range_min_m", "range_max_m"), _parse_floats(options["range_m"], 2, "--range-m")))
    text = ""
    if options.get("config"):
        try:
            text = Path(options["config"]).read_text()
        except OSError as exc:
            raise click.ClickException(f"cannot read {options['config']}: {exc}") from None
    try:
        run = parse_config(text, overrides, required=("n_elements", "radius_m", "wavelength_m") if required else ())
    except ConfigError as exc:
        raise click.ClickException(f"invalid config: {exc}") from None
    if run.threads is None:
        run = run.replace(threads=default_threads())
    return run


def common_options(f):
    options = [
        click.option("--config", type=click.Path(dir_okay=False), help="key = value config file."),
        click.option("--out", help="Output path (stdout if omitted)."),
        click.option("--n", type=int, help="Number of elements."),
        click.option("--radius-m", type=float, help="Array radius in metres."),
        click.option("--wavelength-m", type=float, help="Wavelength in metres."),
        click.option("--configuration", help="c1, c2 or vertical."),
        click.option("--element-model", help="hertzian or half_wave."),
        click.option("--focus-x-m", type=float),
        click.option("--focus-y-m", type=float),
        click.option("--pol", help="Receiving dipole polarisation: x or y."),
        click.option("--axis", help="Cut or sweep axis: x or y."),
        click.option("--grid", help="xmin,xmax,ymin,ymax,step in metres."),
        click.option("--range-m", help="lo,hi of a cut or sweep in metres."),
        click.option("--points", type=int, help="Number of cut or sweep samples."),
        click.option("--conjugation", help="channel (default) or path."),
        click.option("--threads", type=int, help="Worker threads (default: $NFF_THREADS or 1)."),
    ]
    for opt in reversed(options):
        f = opt(f)
    return f


@click.group()
def main():
    """Phase-conjugation near-field focusing of uniform circular dipole arrays."""


@main.command("field-map")
@common_options
def field_map_cmd(**options):
    """Write the complex (E_x, E_y) field over a grid as CSV."""
    run = _load(options)
    _emit(field_map_csv(run), run.out)


@main.command("cut")
@common_options
def cut_cmd(**options):
    """Write a normalised 1D cut through the focus, with closed forms where known."""
    run = _load(options)
    _emit(cut_csv(run), run.out)


@main.command("sweep")
@common_options
def sweep_cmd(**options):
    """Sweep the focus along an axis; CSV curve plus a JSON summary."""
    run = _load(options)
    csv_text, summary = sweep_outputs(run)
    _emit(csv_text, run.out)
    if run.out is None:
        click.echo(summary, err=True, nl=False)
    else:
        _emit(summary, str(Path(run.out).with_suffix(".json")))


@main.command("validate")
@common_options
def validate_cmd(**options):
    """Run the built-in cross-checks; exit status 1 if any check fails."""
    given = any(v is not None for k, v in options.items() if k not in ("out", "threads"))
    run = _load(options, required=False) if given else None
    report = run_checks(run)
    click.echo(report.table())
    if options.get("out"):
        _emit(report.to_json(), options["out"])
    sys.exit(0 if report.passed else 1)


if __name__ == "__main__":
    main()
