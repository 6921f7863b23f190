import math

import numpy as np
import pytest

from nffsim.array import ArrayConfig, build_array
from nffsim.closed_forms import ex_xaxis_closed, ey_closed
from nffsim.fields import phase_conjugation_weights, total_field
from nffsim.quadrature import (QuadratureError, integrate_ex_axis, integrate_ex_taylor, integrate_ey_axis,
                               integrate_ey_axis_full, integrate_generic)

LAM = 0.2
RC = 25 * LAM


class TestGeneric:
    @pytest.mark.parametrize("kernel,expected", [
        (lambda t: 1.0, 2 * math.pi),
        (lambda t: math.sin(t) ** 2, math.pi),
        (lambda t: abs(math.cos(t) * math.sin(t)), 2.0),
        (lambda t: 1j * abs(math.sin(t)), 4j),
    ])
    def test_basic_kernels(self, kernel, expected):
        res = integrate_generic(kernel, 1e-12)
        assert abs(res.value - expected) < 1e-12
        assert 0 <= res.abs_error_estimate <= 1e-12
        assert res.evaluations > 0

    def test_split_agrees_with_uniform_rule(self):
        # Smooth periodic kernel: the trapezoid rule is spectrally accurate.
        kern = lambda t: np.exp(np.cos(t)) * np.exp(1j * 3 * np.sin(t))
        t = np.linspace(0, 2 * math.pi, 4 * 64, endpoint=False)
        uniform = np.mean(kern(t)) * 2 * math.pi
        split = integrate_generic(kern, 1e-13).value
        assert abs(split - uniform) <= 1e-12 * abs(uniform)

    def test_halving_tolerance_within_estimate(self):
        k = 2 * math.pi / LAM
        for d in (0.03, 0.11, 0.3):
            kern = lambda t: abs(math.cos(t)) * np.exp(1j * k * d * math.cos(t))
            coarse = integrate_generic(kern, 1e-6)
            fine = integrate_generic(kern, 5e-7)
            assert abs(fine.value - coarse.value) <= coarse.abs_error_estimate

    def test_non_convergence(self):
        with pytest.raises(QuadratureError):
            integrate_generic(lambda t: 1.0 / abs(t - 1.0) ** 1.2, 1e-10)


class TestExAxis:
    def test_centre(self):
        res = integrate_ex_axis(0.0, LAM, RC)
        assert abs(res.value - math.pi / RC) < 1e-10

    def test_half_wavelength_vs_closed(self):
        q = abs(integrate_ex_axis(0.5 * LAM, LAM, RC).value)
        c = abs(ex_xaxis_closed(0.5 * LAM, LAM, RC))
        assert abs(q - c) / c < 1e-3

    def test_exact_vs_expanded_path(self):
        # The expanded path drops the sin^2 factor on the second-order term,
        # which costs ~1e-4 of the peak in the main lobe and more near the null.
        peak = math.pi / RC
        for d in np.linspace(0, 0.5 * LAM, 11):
            a = abs(integrate_ex_axis(d, LAM, RC).value)
            b = abs(integrate_ex_taylor(d, LAM, RC).value)
            assert abs(a - b) < 2e-4 * peak
        for d in np.linspace(0.5 * LAM, 2 * LAM, 16):
            a = abs(integrate_ex_axis(d, LAM, RC).value)
            b = abs(integrate_ex_taylor(d, LAM, RC).value)
            assert abs(a - b) < 1e-2 * peak

    def test_offset_range(self):
        with pytest.raises(ValueError):
            integrate_ex_axis(RC, LAM, RC)


class TestExTaylor:
    def test_centre(self):
        v = integrate_ex_taylor(0.0, LAM, RC).value
        assert abs(v - math.pi / RC) < 1e-10

    def test_modulus_even(self):
        # integrand symmetric in offset -> -offset after t -> t + pi
        k = 2 * math.pi / LAM
        for d in (0.05, 0.13):
            def kern(t, s):
                ph = k * (d * d / (2 * RC) - s * d * math.cos(t))
                return math.sin(t) ** 2 * np.exp(-1j * ph) / RC
            a = integrate_generic(lambda t: kern(t, 1.0)).value
            b = integrate_generic(lambda t: kern(t, -1.0)).value
            assert abs(abs(a) - abs(b)) < 1e-12
            assert abs(integrate_ex_taylor(d, LAM, RC).value - a) < 1e-12

    @pytest.mark.parametrize("d", [0.25 * LAM, 0.5 * LAM, LAM])
    def test_matches_bessel_form(self, d):
        q = integrate_ex_taylor(d, LAM, RC).value
        c = ex_xaxis_closed(d, LAM, RC)
        assert abs(abs(q) - abs(c)) / abs(c) < 1e-3


class TestEyAxis:
    def test_centre(self):
        assert abs(integrate_ey_axis(0.0, LAM, RC).value - 2 / RC) < 1e-10

    def test_matches_closed_form_near_centre(self):
        for d in np.linspace(0, 0.5 * LAM, 11):
            q = abs(integrate_ey_axis(d, LAM, RC).value)
            assert abs(q - ey_closed(d, LAM, RC)) <= 1e-3 * 2 / RC

    def test_simplified_vs_full_amplitude(self):
        for d in np.linspace(0.0, 0.1 * RC, 11):
            a = abs(integrate_ey_axis(d, LAM, RC).value)
            b = abs(integrate_ey_axis_full(d, LAM, RC).value)
            assert abs(a - b) / a < 0.02


@pytest.mark.parametrize("d", [0.0, 0.25 * LAM, 0.5 * LAM])
def test_discrete_sum_converges_to_ring_integral(d):
    rc = 1.0
    ref = integrate_ex_axis(d, LAM, rc, tolerance=1e-12).value
    errs = []
    for n in (120, 240, 480):
        el = build_array(ArrayConfig(n, rc, LAM))
        w = phase_conjugation_weights(el, (0, 0))
        errs.append(abs(total_field(el, w, (d, 0.0)).ex - ref))
    floor = 1e-11
    assert errs[-1] < 1e-9
    assert all(b <= a or b < floor for a, b in zip(errs, errs[1:]))


def test_discrete_ey_converges_to_full_integral():
    rc = 1.0
    d = 0.25 * LAM
    ref = integrate_ey_axis_full(d, LAM, rc, tolerance=1e-12).value
    errs = []
    for n in (120, 240, 480):
        el = build_array(ArrayConfig(n, rc, LAM))
        w = phase_conjugation_weights(el, (0, 0), "y")
        errs.append(abs(abs(total_field(el, w, (d, 0.0)).ey) - abs(ref)))
    assert errs[0] > errs[1] > errs[2]
