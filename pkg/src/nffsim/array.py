"""Uniform circular array geometry and element orientations.

Elements sit at angles ``theta_n = 2*pi*n/N`` (n = 0..N-1) on a circle of
radius ``radius`` centred on the origin. Three layouts are supported:

``C1``
    every element is an x-directed horizontal dipole.
``C2``
    every element's broadside faces the array centre, i.e. the dipole axis is
    tangent to the circle, with the sense flipped on the ``cos(theta) < 0``
    half of the ring.
``VERTICAL``
    z-directed dipoles, used as the vertical-polarisation baseline.

Each element carries a uniform excitation ``2*pi/N`` so that the discrete
array sums converge to the continuous ring integrals as N grows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

# |cos(theta)| below this is treated as an exact zero (sgn(0) = +1).
_SGN_ZERO = 1e-12


class Configuration(enum.Enum):
    C1 = "c1"
    C2 = "c2"
    VERTICAL = "vertical"


class ElementModel(enum.Enum):
    HERTZIAN = "hertzian"
    HALF_WAVE = "half_wave"


class Polarization(enum.Enum):
    X = "x"
    Y = "y"


def parse_enum(kind, value):
    """Case-insensitive lookup of an enum member by value or name."""
    if isinstance(value, kind):
        return value
    text = str(value).strip().lower()
    for member in kind:
        if text in (member.value, member.name.lower()):
            return member
    choices = ", ".join(m.value for m in kind)
    raise ValueError(f"{value!r} is not one of: {choices}")


@dataclass(frozen=True)
class ArrayConfig:
    """Geometry, polarisation layout and wavelength of a circular array.

    Lengths are in metres.
    """

    n_elements: int
    radius: float
    wavelength: float
    configuration: Configuration = Configuration.C1
    element_model: ElementModel = ElementModel.HERTZIAN

    def __post_init__(self):
        if isinstance(self.n_elements, bool) or int(self.n_elements) != self.n_elements:
            raise ValueError(f"n_elements must be an integer, got {self.n_elements!r}")
        if self.n_elements < 1:
            raise ValueError(f"n_elements must be >= 1, got {self.n_elements}")
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be positive, got {self.radius}")
        if not (self.wavelength > 0 and math.isfinite(self.wavelength)):
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")
        object.__setattr__(self, "n_elements", int(self.n_elements))
        object.__setattr__(self, "configuration", parse_enum(Configuration, self.configuration))
        object.__setattr__(self, "element_model", parse_enum(ElementModel, self.element_model))

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def element_spacing(self) -> float:
        """Arc length between neighbouring elements."""
        return 2.0 * math.pi * self.radius / self.n_elements

    @property
    def undersampled(self) -> bool:
        """True when neighbours are closer than half a wavelength."""
        return self.element_spacing < 0.5 * self.wavelength

    def scaled(self, factor: float) -> "ArrayConfig":
        """Same array with every length (radius, wavelength) multiplied by ``factor``."""
        return ArrayConfig(self.n_elements, self.radius * factor, self.wavelength * factor,
                           self.configuration, self.element_model)


class Element(NamedTuple):
    position: np.ndarray
    orientation: np.ndarray
    excitation_amplitude: float


@dataclass(frozen=True)
class FocusSpec:
    """Focal point (metres) and the polarisation of the receiving dipole."""

    focus: tuple
    ue_polarization: Polarization = Polarization.X

    def __post_init__(self):
        fx, fy = (float(v) for v in self.focus)
        object.__setattr__(self, "focus", (fx, fy))
        object.__setattr__(self, "ue_polarization", parse_enum(Polarization, self.ue_polarization))

    @property
    def point(self) -> np.ndarray:
        return np.array(self.focus)

    def check_inside(self, radius: float) -> None:
        if math.hypot(*self.focus) >= radius:
            raise ValueError(f"focus {self.focus} is not strictly inside the array (radius {radius})")


@dataclass(frozen=True, eq=False)
class ElementSet:
    """Realised element positions, orientations and excitations.

    ``orientations`` is all zeros for the ``VERTICAL`` layout, whose current
    points out of the array plane.
    """

    config: ArrayConfig
    angles: np.ndarray
    positions: np.ndarray
    orientations: np.ndarray
    excitations: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.angles)

    def __iter__(self) -> Iterator[Element]:
        for p, o, a in zip(self.positions, self.orientations, self.excitations):
            yield Element(p, o, float(a))

    @property
    def vertical(self) -> bool:
        return self.config.configuration is Configuration.VERTICAL


def element_angles(n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n) / n


def c2_orientations(angles: np.ndarray) -> np.ndarray:
    """Tangent unit vectors, sign-flipped where ``cos(theta) < 0``."""
    c = np.cos(angles)
    c = np.where(np.abs(c) < _SGN_ZERO, 0.0, c)
    sgn = np.where(c >= 0.0, 1.0, -1.0)
    return sgn[:, None] * np.column_stack([-np.sin(angles), np.cos(angles)])


def build_array(config: ArrayConfig) -> ElementSet:
    n = config.n_elements
    theta = element_angles(n)
    positions = config.radius * np.column_stack([np.cos(theta), np.sin(theta)])
    kind = config.configuration
    if kind is Configuration.C1:
        orientations = np.tile([1.0, 0.0], (n, 1))
    elif kind is Configuration.C2:
        orientations = c2_orientations(theta)
    else:
        orientations = np.zeros((n, 2))
    excitations = np.full(n, 2.0 * np.pi / n)
    for arr in (theta, positions, orientations, excitations):
        arr.setflags(write=False)
    return ElementSet(config, theta, positions, orientations, excitations)
