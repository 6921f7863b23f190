"""Run configuration: flat ``key = value`` text files plus flag overrides."""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from typing import Mapping, Optional

from .array import (ArrayConfig, Configuration, ElementModel, FocusSpec, Polarization,
                    parse_enum)
from .fields import Grid

REQUIRED_KEYS = ("n_elements", "radius_m", "wavelength_m")


class ConfigError(ValueError):
    def __init__(self, key, message, line=None):
        self.key = key
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{key}: {message}")


def _positive(v):
    return v > 0 and math.isfinite(v)


def _finite(v):
    return math.isfinite(v)


# key -> (type, validator, description of the constraint)
_FIELDS = {
    "n_elements": (int, lambda v: v >= 1, "must be >= 1"),
    "radius_m": (float, _positive, "must be positive"),
    "wavelength_m": (float, _positive, "must be positive"),
    "configuration": (Configuration, None, None),
    "element_model": (ElementModel, None, None),
    "focus_x_m": (float, _finite, "must be finite"),
    "focus_y_m": (float, _finite, "must be finite"),
    "ue_polarization": (Polarization, None, None),
    "axis": (Polarization, None, None),
    "points": (int, lambda v: v >= 1, "must be >= 1"),
    "grid_xmin_m": (float, _finite, "must be finite"),
    "grid_xmax_m": (float, _finite, "must be finite"),
    "grid_ymin_m": (float, _finite, "must be finite"),
    "grid_ymax_m": (float, _finite, "must be finite"),
    "grid_step_m": (float, _positive, "must be positive"),
    "range_min_m": (float, _finite, "must be finite"),
    "range_max_m": (float, _finite, "must be finite"),
    "conjugation": (str, lambda v: v in ("channel", "path"), "must be 'channel' or 'path'"),
    "threads": (int, lambda v: v >= 1, "must be >= 1"),
    "out": (str, None, None),
}


def _convert(key, raw, line=None):
    if key not in _FIELDS:
        raise ConfigError(key, "unknown key", line)
    kind, check, why = _FIELDS[key]
    try:
        if issubclass(kind, enum.Enum):
            value = parse_enum(kind, raw)
        elif kind is int:
            if isinstance(raw, bool):
                raise ValueError(raw)
            if isinstance(raw, str):
                value = int(raw.strip())
            elif isinstance(raw, float) and not raw.is_integer():
                raise ValueError(raw)
            else:
                value = int(raw)
        elif kind is float:
            value = float(raw)
        else:
            value = str(raw).strip()
            if key == "conjugation":
                value = value.lower()
    except (TypeError, ValueError) as exc:
        raise ConfigError(key, f"cannot parse {raw!r} as {getattr(kind, '__name__', kind)} ({exc})", line) from None
    if check is not None and not check(value):
        raise ConfigError(key, f"{why}, got {raw!r}", line)
    return value


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI command needs. Lengths in metres.

    ``None`` ranges fall back to +/-0.9 r_c and a step of wavelength/20.
    """

    n_elements: int = 120
    radius_m: float = 1.0
    wavelength_m: float = 0.2
    configuration: Configuration = Configuration.C1
    element_model: ElementModel = ElementModel.HERTZIAN
    focus_x_m: float = 0.0
    focus_y_m: float = 0.0
    ue_polarization: Polarization = Polarization.X
    axis: Polarization = Polarization.X
    points: int = 201
    grid_xmin_m: Optional[float] = None
    grid_xmax_m: Optional[float] = None
    grid_ymin_m: Optional[float] = None
    grid_ymax_m: Optional[float] = None
    grid_step_m: Optional[float] = None
    range_min_m: Optional[float] = None
    range_max_m: Optional[float] = None
    conjugation: str = "channel"
    threads: Optional[int] = None
    out: Optional[str] = None

    def __post_init__(self):
        try:
            array = self.array_config()
        except ValueError as exc:
            raise ConfigError("array", str(exc)) from None
        if math.hypot(self.focus_x_m, self.focus_y_m) >= array.radius:
            raise ConfigError("focus_x_m", f"focus ({self.focus_x_m}, {self.focus_y_m}) must lie strictly "
                              f"inside the array of radius {array.radius}")
        grid = [self.grid_xmin_m, self.grid_xmax_m, self.grid_ymin_m, self.grid_ymax_m]
        if any(g is not None for g in grid) and any(g is None for g in grid):
            raise ConfigError("grid_xmin_m", "grid bounds must be given together")
        if grid[0] is not None and (grid[1] < grid[0] or grid[3] < grid[2]):
            raise ConfigError("grid_xmax_m", "grid max must not be below grid min")
        if (self.range_min_m is None) != (self.range_max_m is None):
            raise ConfigError("range_min_m", "range_min_m and range_max_m must be given together")
        if self.range_min_m is not None and self.range_max_m < self.range_min_m:
            raise ConfigError("range_max_m", "range max must not be below range min")

    @classmethod
    def from_mapping(cls, values: Mapping, lines: Optional[Mapping] = None) -> "RunConfig":
        lines = lines or {}
        converted = {k: _convert(k, v, lines.get(k)) for k, v in values.items() if v is not None}
        return cls(**converted)

    def replace(self, **overrides) -> "RunConfig":
        merged = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        merged.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig.from_mapping(merged)

    def array_config(self) -> ArrayConfig:
        return ArrayConfig(self.n_elements, self.radius_m, self.wavelength_m,
                           self.configuration, self.element_model)

    def focus_spec(self) -> FocusSpec:
        return FocusSpec((self.focus_x_m, self.focus_y_m), self.ue_polarization)

    def grid(self) -> Grid:
        if self.grid_xmin_m is None:
            half = 0.9 * self.radius_m
            return Grid(-half, half, -half, half, self.grid_step_m or self.wavelength_m / 20.0)
        return Grid(self.grid_xmin_m, self.grid_xmax_m, self.grid_ymin_m, self.grid_ymax_m,
                    self.grid_step_m or self.wavelength_m / 20.0)

    def span(self):
        if self.range_min_m is None:
            return -0.9 * self.radius_m, 0.9 * self.radius_m
        return self.range_min_m, self.range_max_m

    def to_text(self) -> str:
        out = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if isinstance(value, (Configuration, ElementModel, Polarization)):
                value = value.value
            elif isinstance(value, float):
                value = repr(value)
            out.append(f"{f.name} = {value}")
        return "\n".join(out) + "\n"


def read_pairs(text: str):
    """Split config text into ``{key: raw_value}`` and ``{key: line_number}``."""
    values, lines = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(body, "expected 'key = value'", lineno)
        key, value = (part.strip() for part in body.split("=", 1))
        if key not in _FIELDS:
            raise ConfigError(key, "unknown key", lineno)
        if key in values:
            raise ConfigError(key, "duplicate key", lineno)
        values[key] = value
        lines[key] = lineno
    return values, lines


def parse_config(text: str, overrides: Optional[Mapping] = None, required=REQUIRED_KEYS) -> RunConfig:
    """Parse ``key = value`` text; ``overrides`` (e.g. CLI flags) win over file values."""
    values, lines = read_pairs(text)
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
            lines.pop(key, None)
    for key in required:
        if key not in values:
            raise ConfigError(key, "missing required key")
    return RunConfig.from_mapping(values, lines)
