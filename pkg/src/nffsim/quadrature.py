"""Adaptive quadrature of continuous-ring field integrals.

These integrals treat the ring as a continuous current sheet (the N -> inf
limit of the array sums with ``2*pi/N`` excitation) and give an
independent reference for both the discrete field engine and the Bessel
closed forms. The focus is at the array centre, so the conjugated phase
reference is ``exp(+1j*k*r_c)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

DEFAULT_TOL = 1e-10
_MAX_SUBINTERVALS = 500


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    abs_error_estimate: float
    evaluations: int


def integrate_generic(kernel, tolerance=DEFAULT_TOL, lower=0.0, upper=2.0 * math.pi,
                      breakpoints=None) -> QuadratureResult:
    """Integrate a complex azimuthal kernel over ``[lower, upper]``.

    The interval is split at multiples of pi/2 (where ``|cos|`` and
    ``|sin|`` kernels have kinks) and each piece is handled by QUADPACK's
    adaptive Gauss-Kronrod rule, separately for real and imaginary parts.
    """
    if breakpoints is None:
        breakpoints = np.arange(math.ceil(lower / (0.5 * math.pi)),
                                math.floor(upper / (0.5 * math.pi)) + 1) * 0.5 * math.pi
    edges = sorted({lower, upper, *(b for b in breakpoints if lower < b < upper)})
    pieces = list(zip(edges[:-1], edges[1:]))
    # tolerance is split over 2 parts x len(pieces) subintervals
    share = tolerance / (2 * len(pieces))
    total = 0.0 + 0.0j
    err = 0.0
    nev = 0
    for part, unit in ((np.real, 1.0), (np.imag, 1.0j)):
        for a, b in pieces:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                val, e, info = integrate.quad(lambda t: float(part(kernel(t))), a, b,
                                              epsabs=share, epsrel=0.0,
                                              limit=_MAX_SUBINTERVALS, full_output=1)[:3]
            total += unit * val
            err += e
            nev += info["neval"]
    if not (err <= tolerance and np.isfinite(total)):
        raise QuadratureError(f"quadrature did not converge: error estimate {err:.3g} > {tolerance:.3g}")
    return QuadratureResult(complex(total), float(err), nev)


def _check_offset(offset, radius):
    if not 0.0 <= offset < radius:
        raise ValueError(f"offset must satisfy 0 <= offset < radius, got {offset}")


def _ring_distance(offset, radius, t):
    return math.sqrt((offset - radius * math.cos(t)) ** 2 + (radius * math.sin(t)) ** 2)


def integrate_ex_axis(offset, wavelength, radius, tolerance=DEFAULT_TOL) -> QuadratureResult:
    """E_x(offset, 0) of the continuous C1 ring, exact distances."""
    _check_offset(offset, radius)
    k = 2.0 * math.pi / wavelength

    def kernel(t):
        d = _ring_distance(offset, radius, t)
        return (radius * math.sin(t)) ** 2 * np.exp(-1j * k * (d - radius)) / d**3

    return integrate_generic(kernel, tolerance)


def integrate_ex_taylor(offset, wavelength, radius, tolerance=DEFAULT_TOL) -> QuadratureResult:
    """E_x(offset, 0) with the path difference expanded to ``offset^2/(2 r_c) - offset*cos``.

    The amplitude is frozen at ``1/r_c``; real and imaginary parts come from
    the same expanded phase, ``exp(-1j*k*(offset^2/(2 r_c) - offset*cos t))``.
    """
    _check_offset(offset, radius)
    k = 2.0 * math.pi / wavelength

    def kernel(t):
        phase = k * (offset**2 / (2.0 * radius) - offset * math.cos(t))
        return math.sin(t) ** 2 * (math.cos(phase) - 1j * math.sin(phase)) / radius

    return integrate_generic(kernel, tolerance)


def integrate_ey_axis(offset, wavelength, radius, tolerance=DEFAULT_TOL) -> QuadratureResult:
    """E_y(offset, 0) of the continuous ring with the simplified ``|cos||sin|/r_c`` amplitude."""
    _check_offset(offset, radius)
    k = 2.0 * math.pi / wavelength

    def kernel(t):
        d = _ring_distance(offset, radius, t)
        return abs(math.cos(t) * math.sin(t)) * np.exp(-1j * k * (d - radius)) / radius

    return integrate_generic(kernel, tolerance)


def integrate_ey_axis_full(offset, wavelength, radius, tolerance=DEFAULT_TOL) -> QuadratureResult:
    """E_y(offset, 0) of the continuous ring with the exact ``|dx||dy|/d^3`` amplitude."""
    _check_offset(offset, radius)
    k = 2.0 * math.pi / wavelength

    def kernel(t):
        d = _ring_distance(offset, radius, t)
        amp = radius * abs(offset - radius * math.cos(t)) * abs(math.sin(t)) / d**3
        return amp * np.exp(-1j * k * (d - radius))

    kink = math.acos(offset / radius)
    quarters = [0.5 * math.pi * i for i in range(5)]
    return integrate_generic(kernel, tolerance, breakpoints=quarters + [kink, 2.0 * math.pi - kink])
