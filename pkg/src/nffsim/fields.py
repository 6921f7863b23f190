"""Radiated fields of Hertzian dipoles and phase-conjugated array sums.

Only the radiating 1/r term of the dipole field is kept. Amplitudes are
normalised so that ``eta*I0*l*k/(4*pi) = 1``; a single element at distance
``r`` therefore contributes ``exp(-1j*k*r)/r`` times its in-plane pattern
vector ``a_l - (a_r . a_l) a_r``.

All observation-point arguments accept either a single ``(x, y)`` pair or an
array of shape ``(..., 2)``; results follow the leading shape.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .array import Configuration, ElementModel, ElementSet, Polarization, parse_enum

SINGULAR_RADIUS = 1e-9  # metres
MAX_MAP_SAMPLES = 10**8
_CHUNK_POINTS = 4096


class SingularPointError(ValueError):
    """Observation point coincides with a radiating element."""


class Field2(NamedTuple):
    ex: complex
    ey: complex


def half_wave_element_factor(psi):
    """Half-wave dipole pattern ``cos(pi/2 cos psi) / sin psi``.

    ``psi`` is the angle between the dipole axis and the ray. The axial
    limits psi -> 0 and psi -> pi return 0.
    """
    psi = np.asarray(psi, dtype=float)
    s = np.sin(psi)
    small = np.abs(s) < 1e-12
    out = np.cos(0.5 * np.pi * np.cos(psi)) / np.where(small, 1.0, s)
    out = np.where(small, 0.0, out)
    return out if out.ndim else float(out)


def _as_points(obs):
    pts = np.asarray(obs, dtype=float)
    if pts.shape[-1] != 2:
        raise ValueError(f"observation points must have a trailing axis of length 2, got {pts.shape}")
    return pts


def _pattern_vectors(orientation, u, model):
    """In-plane pattern vector for unit ray directions ``u`` (..., 2)."""
    proj = np.sum(u * orientation, axis=-1)
    vec = orientation - proj[..., None] * u
    if model is ElementModel.HALF_WAVE:
        sin2 = 1.0 - proj**2
        axial = sin2 < 1e-24
        scale = np.cos(0.5 * np.pi * proj) / np.where(axial, 1.0, sin2)
        vec = vec * np.where(axial, 0.0, scale)[..., None]
    return vec


def _distances(elements: ElementSet, pts, mask_singular=False):
    """Offsets obs - pos and distances, shapes (M, N, 2) and (M, N)."""
    offsets = pts[:, None, :] - elements.positions[None, :, :]
    dist = np.hypot(offsets[..., 0], offsets[..., 1])
    singular = (dist < SINGULAR_RADIUS).any(axis=1)
    if singular.any() and not mask_singular:
        bad = pts[np.argmax(singular)]
        raise SingularPointError(f"observation point {tuple(bad)} coincides with an element")
    if mask_singular:
        dist = np.where(dist < SINGULAR_RADIUS, np.nan, dist)
    return offsets, dist, singular


def element_channels(elements: ElementSet, obs, mask_singular=False):
    """Per-element fields at each observation point, before excitation/weights.

    Returns an array of shape ``(..., N, 2)`` for horizontal layouts and
    ``(..., N)`` for the vertical layout.
    """
    pts = _as_points(obs)
    lead = pts.shape[:-1]
    pts = pts.reshape(-1, 2)
    offsets, dist, _ = _distances(elements, pts, mask_singular)
    k = elements.config.wavenumber
    prop = np.exp(-1j * k * dist) / dist
    if elements.vertical:
        return prop.reshape(lead + prop.shape[1:])
    u = offsets / dist[..., None]
    vec = _pattern_vectors(elements.orientations[None], u, elements.config.element_model)
    out = vec * prop[..., None]
    return out.reshape(lead + out.shape[1:])


def hertzian_field(source_pos, orientation, obs, wavelength, model=ElementModel.HERTZIAN) -> Field2:
    """Field of one unit dipole at ``source_pos`` observed at ``obs``."""
    src = np.asarray(source_pos, dtype=float)
    pts = _as_points(obs)
    offset = pts - src
    r = np.hypot(offset[..., 0], offset[..., 1])
    if np.any(r < SINGULAR_RADIUS):
        raise SingularPointError(f"observation point {obs} coincides with the source")
    u = offset / r[..., None]
    vec = _pattern_vectors(np.asarray(orientation, dtype=float), u, parse_enum(ElementModel, model))
    prop = np.exp(-2j * np.pi * r / wavelength) / r
    e = vec * prop[..., None]
    return Field2(e[..., 0][()], e[..., 1][()])


def copolar_channel(elements: ElementSet, obs, pol=Polarization.X):
    """Element channels projected on the receiving dipole (x, y, or z for vertical)."""
    ch = element_channels(elements, obs)
    if elements.vertical:
        return ch
    idx = 0 if parse_enum(Polarization, pol) is Polarization.X else 1
    return ch[..., idx]


def phase_conjugation_weights(elements: ElementSet, focus, pol=Polarization.X, mode="channel"):
    """Unit-modulus excitation phases focusing the array on ``focus``.

    ``mode="channel"`` conjugates the full co-polarised channel of each
    element, i.e. the propagation phase plus the sign of the element's
    polarisation projection onto the receiving dipole. Elements with no
    projection fall back to the propagation phase. ``mode="path"`` conjugates
    the propagation phase ``k*|focus - position|`` only.
    """
    f = np.asarray(focus, dtype=float)
    if math.hypot(*f) >= elements.config.radius:
        raise ValueError(f"focus {tuple(f)} is not inside the array")
    dist = np.hypot(*(f[None, :] - elements.positions).T)
    path = np.exp(1j * elements.config.wavenumber * dist)
    if mode == "path":
        return path
    if mode != "channel":
        raise ValueError(f"unknown conjugation mode {mode!r}")
    h = copolar_channel(elements, f, pol)
    mag = np.abs(h)
    live = mag > 1e-12 * mag.max() if mag.max() > 0 else np.zeros_like(mag, dtype=bool)
    return np.where(live, np.conj(h) / np.where(live, mag, 1.0), path)


def total_field(elements: ElementSet, weights, obs) -> Field2:
    """Superposed in-plane field of the weighted array."""
    if elements.vertical:
        raise ValueError("vertical arrays radiate E_z; use vertical_baseline_field")
    ch = element_channels(elements, obs)
    drive = elements.excitations * np.asarray(weights)
    e = np.einsum("n,...nc->...c", drive, ch)
    return Field2(e[..., 0][()], e[..., 1][()])


def vertical_baseline_field(elements: ElementSet, weights, obs):
    """E_z of z-directed dipoles; the in-plane pattern factor is identically 1."""
    if not elements.vertical:
        raise ValueError("vertical_baseline_field needs a VERTICAL array")
    ch = element_channels(elements, obs)
    return (ch @ (elements.excitations * np.asarray(weights)))[()]


def copolar_field(elements: ElementSet, weights, obs, pol=Polarization.X):
    if elements.vertical:
        return vertical_baseline_field(elements, weights, obs)
    f = total_field(elements, weights, obs)
    return f.ex if parse_enum(Polarization, pol) is Polarization.X else f.ey


def c1_direct_field(elements: ElementSet, weights, obs) -> Field2:
    """Component-wise C1 sums with the propagation kernel exp(-jkd)/d^3.

    Algebraically identical to :func:`total_field` for x-directed Hertzian
    elements; kept as an independent evaluation route.
    """
    cfg = elements.config
    if cfg.configuration is not Configuration.C1:
        raise ValueError("c1_direct_field applies to the C1 layout only")
    pts = _as_points(obs)
    x = pts[..., 0][..., None]
    y = pts[..., 1][..., None]
    dx = x - cfg.radius * np.cos(elements.angles)
    dy = y - cfg.radius * np.sin(elements.angles)
    d2 = dx**2 + dy**2
    if np.any(d2 < SINGULAR_RADIUS**2):
        raise SingularPointError("observation point coincides with an element")
    d = np.sqrt(d2)
    kernel = np.exp(-1j * cfg.wavenumber * d) / d**3
    drive = elements.excitations * np.asarray(weights)
    ex = np.sum(drive * dy**2 * kernel, axis=-1)
    ey = np.sum(drive * (-dx * dy) * kernel, axis=-1)
    return Field2(ex[()], ey[()])


def c2_expanded_ex(elements: ElementSet, weights, obs):
    """Diagnostic: an expanded closed-form polynomial for the C2 E_x field.

    The polynomial is not the projection of a consistent tangent dipole and
    disagrees with :func:`total_field`; it is exposed only so the two can be
    compared side by side.
    """
    cfg = elements.config
    pts = _as_points(obs)
    x = pts[..., 0][..., None]
    y = pts[..., 1][..., None]
    rc = cfg.radius
    c = np.cos(elements.angles)
    c = np.where(np.abs(c) < 1e-12, 0.0, c)
    s = np.sin(elements.angles)
    g = np.where(c >= 0.0, 1.0, -1.0)
    ac = np.abs(c)
    poly = (rc**2 * (s * g - c * s**2 * g)
            - x**2 * ac * s**2
            + x**2 * (s * g)
            + y**2 * (g * s - ac)
            + x * rc * (s**2 * g - 2 * c * s * g)
            + y * rc * (2 * ac * s + c * s * g - 2 * s**2 * g)
            - x * y * g * s)
    d = np.sqrt((x - rc * c) ** 2 + (y - rc * s) ** 2)
    kernel = np.exp(-1j * cfg.wavenumber * d) / d**3
    drive = elements.excitations * np.asarray(weights)
    return np.sum(drive * poly * kernel, axis=-1)[()]


@dataclass(frozen=True)
class Grid:
    """Rectangular sampling grid in the array plane (metres)."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    step: float

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"grid step must be positive, got {self.step}")
        if self.xmax < self.xmin or self.ymax < self.ymin:
            raise ValueError("grid max must not be below grid min")

    @staticmethod
    def _axis(lo, hi, step):
        n = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return lo + step * np.arange(n)

    @property
    def xs(self) -> np.ndarray:
        return self._axis(self.xmin, self.xmax, self.step)

    @property
    def ys(self) -> np.ndarray:
        return self._axis(self.ymin, self.ymax, self.step)

    @property
    def shape(self):
        return len(self.ys), len(self.xs)

    @property
    def size(self) -> int:
        ny, nx = self.shape
        return nx * ny

    def points(self) -> np.ndarray:
        """Sample coordinates, shape (ny, nx, 2), y-outer row-major."""
        gx, gy = np.meshgrid(self.xs, self.ys)
        return np.stack([gx, gy], axis=-1)


@dataclass(frozen=True, eq=False)
class FieldMap:
    """Complex field samples over a :class:`Grid`.

    ``ex``/``ey`` hold the in-plane components (``ez`` for vertical arrays);
    samples on top of an element are NaN and flagged in ``singular``.
    """

    grid: Grid
    elements: ElementSet
    weights: np.ndarray
    singular: np.ndarray
    ex: Optional[np.ndarray] = None
    ey: Optional[np.ndarray] = None
    ez: Optional[np.ndarray] = None

    def component(self, pol=Polarization.X) -> np.ndarray:
        if self.ez is not None:
            return self.ez
        return self.ex if parse_enum(Polarization, pol) is Polarization.X else self.ey


def _map_chunk(elements, drive, pts):
    offsets, dist, singular = _distances(elements, pts, mask_singular=True)
    k = elements.config.wavenumber
    with np.errstate(invalid="ignore", divide="ignore"):
        # samples on an element are NaN'd by the caller
        prop = np.exp(-1j * k * dist) / dist
        u = offsets / dist[..., None]
    if elements.vertical:
        return prop @ drive, None, singular
    vec = _pattern_vectors(elements.orientations[None], u, elements.config.element_model)
    e = np.einsum("n,mnc->mc", drive, vec * prop[..., None])
    return e[:, 0], e[:, 1], singular


def field_map(elements: ElementSet, weights, grid: Grid, threads: Optional[int] = None,
              allow_large: bool = False) -> FieldMap:
    """Evaluate the array field on every grid sample.

    Work is split into fixed-size chunks; with ``threads > 1`` the chunks run
    on a thread pool, and the output is identical to the serial result.
    """
    if grid.size > MAX_MAP_SAMPLES and not allow_large:
        raise ValueError(f"grid has {grid.size} samples (> {MAX_MAP_SAMPLES}); pass allow_large=True")
    pts = grid.points().reshape(-1, 2)
    drive = elements.excitations * np.asarray(weights)
    chunks = [pts[i:i + _CHUNK_POINTS] for i in range(0, len(pts), _CHUNK_POINTS)]
    workers = threads or 1
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _map_chunk(elements, drive, c), chunks))
    else:
        parts = [_map_chunk(elements, drive, c) for c in chunks]
    shape = grid.shape
    singular = np.concatenate([p[2] for p in parts]).reshape(shape)
    first = np.concatenate([p[0] for p in parts]).reshape(shape)
    first[singular] = np.nan
    if elements.vertical:
        return FieldMap(grid, elements, np.asarray(weights), singular, ez=first)
    second = np.concatenate([p[1] for p in parts]).reshape(shape)
    second[singular] = np.nan
    return FieldMap(grid, elements, np.asarray(weights), singular, ex=first, ey=second)


def default_threads() -> int:
    """Thread count from ``NFF_THREADS``, else 1."""
    value = os.environ.get("NFF_THREADS", "").strip()
    if not value:
        return 1
    try:
        return max(1, int(value))
    except ValueError:
        warnings.warn(f"ignoring NFF_THREADS={value!r}: not an integer")
        return 1
