"""Cross-checks of the field engine, closed forms and quadrature oracle.

Reference values come from the canonical setup: N = 120, wavelength
0.2 m, ring radii 1, 1.5 and 2 m, focus at the centre. Computations use the
supplied :class:`RunConfig` wavelength, so a wrong wavelength shows up as
failing width checks.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from .array import ArrayConfig, Configuration, FocusSpec, Polarization, build_array
from .closed_forms import bessel_j, ex_xaxis_closed, ey_closed, fx_closed, fy_closed
from .config import RunConfig
from .fields import (c2_expanded_ex, copolar_field, field_map, phase_conjugation_weights)
from .metrics import c2_penalty, cut_grid, focal_width, gain_sweep, peak_gain, sidelobe_level
from .quadrature import integrate_ex_axis, integrate_ex_taylor, integrate_ey_axis

CANONICAL_WAVELENGTH = 0.2
CANONICAL_N = 120
CANONICAL_RADII = (1.0, 1.5, 2.0)
ORACLE_RADIUS = 25.0  # in wavelengths


@dataclass
class Check:
    name: str
    value: float
    reference: float
    tolerance: float
    passed: bool
    note: str = ""


@dataclass
class ValidationReport:
    checks: List[Check] = field(default_factory=list)
    info: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, value, reference, tolerance, passed=None, note=""):
        value = float(value)
        if passed is None:
            passed = abs(value - reference) <= tolerance
        self.checks.append(Check(name, value, float(reference), float(tolerance), bool(passed), note))

    def to_json(self) -> str:
        data = {"passed": self.passed, "checks": [asdict(c) for c in self.checks], "info": self.info}
        return json.dumps(data, indent=2, allow_nan=True) + "\n"

    def table(self) -> str:
        rows = [f"{'check':<34} {'value':>13} {'reference':>11} {'tol':>9}  result"]
        for c in self.checks:
            rows.append(f"{c.name:<34} {c.value:>13.6g} {c.reference:>11.6g} {c.tolerance:>9.3g}  "
                        f"{'PASS' if c.passed else 'FAIL'}" + (f"  ({c.note})" if c.note else ""))
        rows.extend(f"note: {line}" for line in self.info)
        rows.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(rows)


def _cut_amplitudes(elements, focus, axis, positions):
    w = phase_conjugation_weights(elements, focus.point, focus.ue_polarization)
    e = np.zeros((len(positions), 2))
    if axis is Polarization.X:
        e[:, 0] = positions
    else:
        e[:, 1] = positions
    return np.abs(copolar_field(elements, w, e, focus.ue_polarization))


def closed_form_deviation(config: ArrayConfig, axis, extent=0.8, samples=801) -> float:
    """Largest |numerical - closed form| of a normalised E_x cut over |r| <= extent*r_c."""
    elements = build_array(config)
    focus = FocusSpec((0.0, 0.0), Polarization.X)
    r = np.linspace(0.0, extent * config.radius, samples)
    amps = _cut_amplitudes(elements, focus, axis, r)
    amps = amps / amps[0]
    ref = fx_closed(r, config.wavelength) if axis is Polarization.X else fy_closed(r, config.wavelength)
    return float(np.max(np.abs(amps - ref)))


def run_checks(run: Optional[RunConfig] = None) -> ValidationReport:
    report = ValidationReport()
    if run is None:
        run = RunConfig()
        report.info.append("no config given; canonical defaults applied")
    lam = run.wavelength_m
    lam0 = CANONICAL_WAVELENGTH
    centre_x = FocusSpec((0.0, 0.0), Polarization.X)
    centre_y = FocusSpec((0.0, 0.0), Polarization.Y)

    def c1(n=CANONICAL_N, rc=1.0):
        return build_array(ArrayConfig(n, rc, lam, Configuration.C1))

    arr = c1()
    w = phase_conjugation_weights(arr, (0.0, 0.0), Polarization.X)
    report.add("ex_centre_times_rc", abs(copolar_field(arr, w, (0.0, 0.0), "x")), math.pi, 0.005 * math.pi)
    w = phase_conjugation_weights(arr, (0.0, 0.0), Polarization.Y)
    report.add("ey_centre_times_rc", abs(copolar_field(arr, w, (0.0, 0.0), "y")), 2.0, 0.01)

    drop = peak_gain(c1(rc=1.0), centre_x) - peak_gain(c1(rc=2.0), centre_x)
    report.add("gain_drop_rc1_to_rc2_db", drop, 3.0, 0.3)
    gap = peak_gain(arr, centre_x) - peak_gain(arr, centre_y)
    report.add("polarization_gap_db", gap, 3.92, 0.2)
    report.add("polarization_gap_vs_20log10_pi_over_2", gap, 20 * math.log10(math.pi / 2), 0.2)

    report.add("width_ex_x_axis_m", focal_width(arr, centre_x, "x"), 0.518 * lam0, 0.02 * lam0)
    report.add("width_ex_y_axis_m", focal_width(arr, centre_x, "y"), 0.29 * lam0, 0.02 * lam0)
    report.add("width_ey_x_axis_m", focal_width(arr, centre_y, "x"), 0.36 * lam0, 0.02 * lam0)
    for off in (-2.0, 2.0):
        for axis_f in ("x", "y"):
            f = FocusSpec((off * lam if axis_f == "x" else 0.0, off * lam if axis_f == "y" else 0.0), "x")
            tag = f"{axis_f}f={off:+g}lam"
            report.add(f"width_ex_x_axis_m[{tag}]", focal_width(arr, f, "x"), 0.518 * lam0, 0.02 * lam0)
            report.add(f"width_ex_y_axis_m[{tag}]", focal_width(arr, f, "y"), 0.29 * lam0, 0.02 * lam0)
    widths = [focal_width(c1(n), centre_x, "x") for n in (60, 120, 240)]
    report.add("width_spread_over_N_m", max(widths) - min(widths), 0.0, 0.01 * lam0)

    for rc in CANONICAL_RADII:
        cfg = ArrayConfig(CANONICAL_N, rc, lam, Configuration.C1)
        report.add(f"closed_form_fx_dev[rc={rc:g}]", closed_form_deviation(cfg, Polarization.X), 0.0, 0.02)
        report.add(f"closed_form_fy_dev[rc={rc:g}]", closed_form_deviation(cfg, Polarization.Y), 0.0, 0.02)

    rc_o = ORACLE_RADIUS * lam
    peak_x = math.pi / rc_o
    offsets = np.linspace(0.0, 2.0 * lam, 401)
    taylor = max(abs(abs(integrate_ex_taylor(d, lam, rc_o).value) - abs(ex_xaxis_closed(d, lam, rc_o)))
                 for d in offsets) / peak_x
    exact = max(abs(abs(integrate_ex_axis(d, lam, rc_o).value) - abs(ex_xaxis_closed(d, lam, rc_o)))
                for d in offsets) / peak_x
    report.add("oracle_taylor_vs_bessel_ex", taylor, 0.0, 1e-3)
    report.add("oracle_exact_vs_bessel_ex", exact, 0.0, 1e-3)
    offsets = np.linspace(0.0, lam, 201)
    ey = max(abs(abs(integrate_ey_axis(d, lam, rc_o).value) - ey_closed(d, lam, rc_o))
             for d in offsets) / (2.0 / rc_o)
    report.add("oracle_ey_vs_closed", ey, 0.0, 1e-3)
    xs = np.linspace(0.1, 50.0, 2000)
    j0, j1, j2 = bessel_j(0, xs), bessel_j(1, xs), bessel_j(2, xs)
    rec = np.max(np.abs(j0 + j2 - 2 * j1 / xs) / (np.abs(j0) + np.abs(j2) + np.abs(2 * j1 / xs)))
    report.add("bessel_recurrence_rel", rec, 0.0, 1e-9)

    rc = 2.0
    ys = np.linspace(-0.9 * rc, 0.9 * rc, 181)
    small = gain_sweep(ArrayConfig(20, rc, lam), "y", ys)
    large = gain_sweep(ArrayConfig(120, rc, lam), "y", ys)
    report.add("sweep_argmax_N20_m", abs(small.argmax_position), 0.0, lam / 2)
    report.add("sweep_argmax_N120_over_rc", abs(large.argmax_position) / rc, 0.7, 0.0,
               passed=abs(large.argmax_position) > 0.7 * rc, note="must exceed 0.7")
    report.add("sweep_fluctuation_N120_db", large.fluctuation_db, 0.0, 1.0,
               passed=large.fluctuation_db < 1.0, note="must be below 1 dB")

    cfg1 = ArrayConfig(60, 1.0, lam, Configuration.C1)
    cfg2 = ArrayConfig(60, 1.0, lam, Configuration.C2)
    penalty = c2_penalty(cfg1, cfg2)
    report.add("c2_penalty_db", penalty, 7.4, 1.0, note="tangent dipoles, channel conjugation")
    el2 = build_array(cfg2)
    w2 = phase_conjugation_weights(el2, (0.0, 0.0), Polarization.X)
    grid = cut_grid(centre_x, "x", 0.9 * el2.config.radius, lam / 100)
    sll = sidelobe_level(field_map(el2, w2, grid), centre_x)
    report.add("c2_sll_x_axis_db", sll.level_db, 0.0, 0.0, passed=sll.level_db > 0.0, note="must exceed 0 dB")

    path_penalty = c2_penalty(cfg1, cfg2, mode="path")
    report.info.append(f"C2 penalty with path-only conjugation: {path_penalty:.3f} dB")
    el1 = build_array(cfg1)
    e1 = abs(copolar_field(el1, phase_conjugation_weights(el1, (0.0, 0.0)), (0.0, 0.0)))
    e2 = abs(c2_expanded_ex(el2, phase_conjugation_weights(el2, (0.0, 0.0), mode="path"), (0.0, 0.0)))
    report.info.append(f"C2 penalty from the expanded E_x polynomial (path conjugation): "
                       f"{20 * math.log10(e1 / e2):.3f} dB")
    return report
