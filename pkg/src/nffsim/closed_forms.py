"""Large-ring closed forms for the focal-spot cuts of a C1 array.

With the focus at the array centre and ``r_c >> offset``, the ring sums
reduce to Bessel functions of ``x = 2*pi*offset/wavelength``:

* E_x along the x-axis:  ``lambda*J1(x)/(offset*r_c)``, peak ``pi/r_c``
* E_x along the y-axis:  ``(lambda*J1(x) - 2*pi*offset*J2(x))/(offset*r_c)``
* E_y along the x-axis:  ``lambda*|lambda - lambda*cos x - 2*pi*offset*sin x| / (pi^2 offset^2 r_c)``,
  peak ``2/r_c``

``fx_closed`` and ``fy_closed`` are the first two normalised by ``pi/r_c``.
"""

from __future__ import annotations

import numpy as np
from scipy import special

BESSEL_MAX_ARG = 1e4
# Below this |x| the removable singularities are evaluated by series.
SMALL_ARG = 1e-4


def bessel_j(order: int, x):
    """Bessel function of the first kind ``J_order(x)`` for order 0, 1 or 2."""
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > BESSEL_MAX_ARG) or np.any(~np.isfinite(x)):
        raise ValueError(f"|x| must be <= {BESSEL_MAX_ARG:g}")
    return special.jv(order, x)[()]


def _phase_arg(offset, wavelength):
    return 2.0 * np.pi * np.abs(np.asarray(offset, dtype=float)) / wavelength


def fx_closed(r, wavelength):
    """Normalised |E_x| along the polarisation axis: ``|2 J1(x)/x|``."""
    x = _phase_arg(r, wavelength)
    small = x < SMALL_ARG
    xs = np.where(small, 1.0, x)
    out = np.where(small, 1.0 - x**2 / 8.0, 2.0 * bessel_j(1, xs) / xs)
    return np.abs(out)[()]


def fy_closed(r, wavelength):
    """Normalised |E_x| across the polarisation axis: ``|J0(x) - J2(x)|``."""
    x = _phase_arg(r, wavelength)
    return np.abs(bessel_j(0, x) - bessel_j(2, x))[()]


def ex_xaxis_closed(offset, wavelength, radius):
    """Unnormalised E_x(offset, 0) for a large ring (signed)."""
    d = np.abs(np.asarray(offset, dtype=float))
    x = _phase_arg(d, wavelength)
    small = x < SMALL_ARG
    ds = np.where(small, 1.0, d)
    out = np.where(small, (np.pi / radius) * (1.0 - x**2 / 8.0),
                   wavelength * bessel_j(1, np.where(small, 1.0, x)) / (ds * radius))
    return out[()]


def ex_yaxis_closed(offset, wavelength, radius):
    """Unnormalised E_x(0, offset) for a large ring (signed)."""
    d = np.abs(np.asarray(offset, dtype=float))
    x = _phase_arg(d, wavelength)
    small = x < SMALL_ARG
    ds = np.where(small, 1.0, d)
    xs = np.where(small, 1.0, x)
    big = (wavelength * bessel_j(1, xs) - 2.0 * np.pi * ds * bessel_j(2, xs)) / (ds * radius)
    out = np.where(small, (np.pi / radius) * (1.0 - 3.0 * x**2 / 8.0), big)
    return out[()]


def ey_closed(offset, wavelength, radius):
    """|E_y(offset, 0)| for a large ring, in 1/m; equals ``2/r_c`` at the centre."""
    d = np.abs(np.asarray(offset, dtype=float))
    x = _phase_arg(d, wavelength)
    small = x < SMALL_ARG
    xs = np.where(small, 1.0, x)
    # 1 - cos x written as 2 sin^2(x/2) to avoid cancellation near the centre
    big = 4.0 * np.abs(2.0 * np.sin(xs / 2) ** 2 - xs * np.sin(xs)) / (xs**2 * radius)
    series = (2.0 / radius) * (1.0 - x**2 / 4.0 + x**4 / 72.0)
    return np.where(small, series, big)[()]
