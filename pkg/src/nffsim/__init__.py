"""Near-field focusing of uniform circular arrays of horizontal dipoles."""

from .array import (ArrayConfig, Configuration, Element, ElementModel, ElementSet, FocusSpec,
                    Polarization, build_array)
from .closed_forms import bessel_j, ex_xaxis_closed, ex_yaxis_closed, ey_closed, fx_closed, fy_closed
from .fields import (Field2, FieldMap, Grid, SingularPointError, c1_direct_field, copolar_field,
                     field_map, half_wave_element_factor, hertzian_field, phase_conjugation_weights,
                     total_field, vertical_baseline_field)
from .metrics import (MetricsReport, SweepCurve, c2_penalty, focal_width, gain_sweep, metrics_report,
                      peak_gain, sidelobe_level)
from .quadrature import (QuadratureResult, integrate_ex_axis, integrate_ex_taylor, integrate_ey_axis,
                         integrate_ey_axis_full, integrate_generic)

__version__ = "0.1.0"
