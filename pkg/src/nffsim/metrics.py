"""Focusing figures of merit: peak gain, 3 dB focal width, sidelobe level.

Gains are ``20*log10|E|`` of the co-polarised field at the focus, under the
field-engine normalisation (unit dipole constant, ``2*pi/N`` excitation).
Only differences between gains are reference-free.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from .array import ArrayConfig, Configuration, ElementSet, FocusSpec, Polarization, build_array, parse_enum
from .fields import Grid, FieldMap, copolar_field, field_map, phase_conjugation_weights

# First null of 2*J1(x)/x, in wavelengths (3.8317/(2*pi) = 0.6098).
MAIN_LOBE_RADIUS = 0.61
PEAK_SEARCH = 0.25      # wavelengths either side of the nominal focus
WIDTH_SEARCH = 2.0      # wavelengths
SWEEP_MARGIN = 0.05     # fraction of radius kept clear of the ring
_MARCH_STEP = 1.0 / 200  # wavelengths
_ROOT_XTOL = 1e-7        # wavelengths


class WidthUnresolvedError(RuntimeError):
    """No half-power crossing was found within the search range."""


class CoverageError(ValueError):
    """A field map does not cover the region a metric needs."""


def _axis_vector(axis) -> np.ndarray:
    axis = parse_enum(Polarization, axis)
    return np.array([1.0, 0.0]) if axis is Polarization.X else np.array([0.0, 1.0])


def _to_db(amplitude):
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(amplitude)


def peak_gain(elements: ElementSet, focus: FocusSpec, mode="channel") -> float:
    """Co-polarised focal gain in dB with weights conjugated for ``focus``."""
    pol = focus.ue_polarization
    w = phase_conjugation_weights(elements, focus.point, pol, mode)
    return float(_to_db(abs(copolar_field(elements, w, focus.point, pol))))


def focal_width(elements: ElementSet, focus: FocusSpec, axis=Polarization.X, mode="channel") -> float:
    """Full 3 dB width (metres) of the focal spot along ``axis``.

    The peak is first located along the cut within +/-0.25 wavelength of
    the nominal focus; the two nearest half-power crossings are then
    bracketed by marching outward and refined by Brent's method.
    """
    cfg = elements.config
    lam = cfg.wavelength
    pol = focus.ue_polarization
    f0 = focus.point
    direction = _axis_vector(axis)
    w = phase_conjugation_weights(elements, f0, pol, mode)
    inner = cfg.radius * (1.0 - 1e-6)

    def amp(t):
        return abs(copolar_field(elements, w, f0 + t * direction, pol))

    def inside(t):
        return math.hypot(*(f0 + t * direction)) < inner

    lo, hi = -PEAK_SEARCH * lam, PEAK_SEARCH * lam
    while not (inside(lo) and inside(hi)):
        lo, hi = 0.5 * lo, 0.5 * hi
    res = optimize.minimize_scalar(lambda t: -amp(t), bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-9 * lam})
    t_peak = float(res.x) if -res.fun > amp(0.0) else 0.0
    level = amp(t_peak) / math.sqrt(2.0)

    def crossing(sign):
        step = sign * _MARCH_STEP * lam
        prev = t_peak
        n_steps = int(round(WIDTH_SEARCH / _MARCH_STEP))
        for i in range(1, n_steps + 1):
            t = t_peak + i * step
            if not inside(t):
                break
            if amp(t) < level:
                return optimize.brentq(lambda s: amp(s) - level, min(prev, t), max(prev, t),
                                       xtol=_ROOT_XTOL * lam)
            prev = t
        raise WidthUnresolvedError(
            f"no half-power crossing within {WIDTH_SEARCH} wavelengths along {parse_enum(Polarization, axis).value}")

    return crossing(+1) - crossing(-1)


@dataclass(frozen=True)
class SidelobeResult:
    level_db: float
    location: tuple
    monotone: bool  # strongest sample sits on the map edge


def sidelobe_level(fmap: FieldMap, focus: FocusSpec, exclusion_radius: Optional[float] = None) -> SidelobeResult:
    """Strongest co-polarised sample outside the main lobe, relative to the focal value.

    The main lobe is a disk of ``0.61 wavelength`` around the focus unless
    ``exclusion_radius`` (metres) is given. The map must cover the disk of
    radius ``min(2 wavelengths, 0.9 r_c)`` around the focus; a single-row or
    single-column map counts as a cut and must pass through the focus.
    """
    cfg = fmap.elements.config
    lam = cfg.wavelength
    fx, fy = focus.focus
    need = min(2.0 * lam, 0.9 * cfg.radius)
    g = fmap.grid
    tol = 1e-9 * max(1.0, cfg.radius)
    for lo, hi, n, c, name in ((g.xmin, g.xs[-1], len(g.xs), fx, "x"), (g.ymin, g.ys[-1], len(g.ys), fy, "y")):
        if n == 1:
            if abs(lo - c) > tol:
                raise CoverageError(f"single-sample {name} axis at {lo} does not pass through the focus")
        elif lo > c - need + tol or hi < c + need - tol:
            raise CoverageError(f"map {name} range [{lo}, {hi}] does not cover focus +/- {need}")

    excl = MAIN_LOBE_RADIUS * lam if exclusion_radius is None else exclusion_radius
    pol = focus.ue_polarization
    peak = abs(copolar_field(fmap.elements, fmap.weights, focus.point, pol))
    amps = np.abs(fmap.component(pol))
    pts = g.points()
    dist = np.hypot(pts[..., 0] - fx, pts[..., 1] - fy)
    usable = (dist > excl) & ~fmap.singular
    if not usable.any():
        raise CoverageError("no map samples outside the main-lobe exclusion disk")
    masked = np.where(usable, amps, -np.inf)
    iy, ix = np.unravel_index(np.argmax(masked), masked.shape)
    ny, nx = masked.shape
    edge = (nx > 1 and ix in (0, nx - 1)) or (ny > 1 and iy in (0, ny - 1))
    with np.errstate(divide="ignore", invalid="ignore"):
        level = float(_to_db(masked[iy, ix] / peak))
    return SidelobeResult(level, (float(pts[iy, ix, 0]), float(pts[iy, ix, 1])), bool(edge))


def cut_grid(focus: FocusSpec, axis, half_span: float, step: float) -> Grid:
    """One-row (x) or one-column (y) grid through the focus."""
    fx, fy = focus.focus
    axis = parse_enum(Polarization, axis)
    if axis is Polarization.X:
        return Grid(fx - half_span, fx + half_span, fy, fy, step)
    return Grid(fx, fx, fy - half_span, fy + half_span, step)


@dataclass(frozen=True)
class SweepCurve:
    parameter: str
    positions: np.ndarray
    gains_db: np.ndarray

    @property
    def argmax_position(self) -> float:
        return float(self.positions[int(np.argmax(self.gains_db))])

    @property
    def fluctuation_db(self) -> float:
        return float(np.max(self.gains_db) - np.min(self.gains_db))


def gain_sweep(config: ArrayConfig, axis, positions: Sequence[float], pol=Polarization.X,
               mode="channel", threads: Optional[int] = None) -> SweepCurve:
    """Peak gain as the focus moves along ``axis``; weights are recomputed per focus."""
    axis = parse_enum(Polarization, axis)
    pos = np.asarray(positions, dtype=float).ravel()
    if len(pos) == 0:
        raise ValueError("at least one sweep position is required")
    if np.any(np.diff(pos) <= 0):
        raise ValueError("sweep positions must be strictly increasing")
    limit = (1.0 - SWEEP_MARGIN) * config.radius
    if np.any(np.abs(pos) > limit + 1e-12 * config.radius):
        raise ValueError(f"sweep positions must lie within +/-{limit} m of the centre")
    elements = build_array(config)

    def one(p):
        point = (p, 0.0) if axis is Polarization.X else (0.0, p)
        return peak_gain(elements, FocusSpec(point, pol), mode)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            gains = list(pool.map(one, pos))
    else:
        gains = [one(p) for p in pos]
    name = "x_f" if axis is Polarization.X else "y_f"
    return SweepCurve(name, pos, np.array(gains))


def c2_penalty(config_c1: ArrayConfig, config_c2: ArrayConfig, mode="channel") -> float:
    """Focal E_x gain of C1 minus that of C2, focus at the centre, in dB."""
    if config_c1.configuration is not Configuration.C1 or config_c2.configuration is not Configuration.C2:
        raise ValueError("c2_penalty expects a C1 config and a C2 config")
    same = (config_c1.n_elements == config_c2.n_elements
            and config_c1.radius == config_c2.radius
            and config_c1.wavelength == config_c2.wavelength)
    if not same:
        raise ValueError("C1 and C2 configs must share N, radius and wavelength")
    centre = FocusSpec((0.0, 0.0), Polarization.X)
    return (peak_gain(build_array(config_c1), centre, mode)
            - peak_gain(build_array(config_c2), centre, mode))


@dataclass(frozen=True)
class MetricsReport:
    focus: FocusSpec
    peak_gain_db: float
    focal_width_x: Optional[float]
    focal_width_y: Optional[float]
    sidelobe_level_db: float
    notes: list = field(default_factory=list)


def metrics_report(config: ArrayConfig, focus: FocusSpec, step: Optional[float] = None,
                   mode="channel", threads: Optional[int] = None) -> MetricsReport:
    """All focal metrics for one focus; unresolved widths are reported as ``None``."""
    focus.check_inside(config.radius)
    elements = build_array(config)
    notes = []
    widths = {}
    for axis in (Polarization.X, Polarization.Y):
        try:
            widths[axis] = focal_width(elements, focus, axis, mode)
        except WidthUnresolvedError as exc:
            widths[axis] = None
            notes.append(str(exc))
    lam = config.wavelength
    half = min(2.0 * lam, 0.9 * config.radius)
    step = step or lam / 20.0
    fx, fy = focus.focus
    grid = Grid(fx - half, fx + half, fy - half, fy + half, step)
    w = phase_conjugation_weights(elements, focus.point, focus.ue_polarization, mode)
    sll = sidelobe_level(field_map(elements, w, grid, threads=threads), focus)
    if sll.monotone:
        notes.append("strongest off-focus sample lies on the map edge")
    return MetricsReport(focus, peak_gain(elements, focus, mode), widths[Polarization.X],
                         widths[Polarization.Y], sll.level_db, notes)
