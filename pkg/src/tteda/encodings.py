"""Maps between discrete index sequences and physical control fields.

A discrete optimizer works on index sequences; dynamics need fields on a
time grid.  Supported parameterizations: direct time series (one site per
time step), piecewise-constant segments, truncated Fourier series, and
clamped uniform B-splines.  Value maps translate alphabet symbols into
physical amplitudes or basis coefficients.  Multi-field problems place
their per-field coefficients on TT sites in either interleaved or separate
order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "ValueMap",
    "uniform_value_map",
    "TimeGrid",
    "decode_time_series",
    "decode_piecewise",
    "decode_fourier",
    "clamped_uniform_knots",
    "bspline_basis",
    "decode_spline",
    "layout_variables",
    "FieldSpec",
    "ControlEncoding",
    "VectorEncoding",
]

LAYOUTS = ("interleaved", "separate")


@dataclass(frozen=True)
class ValueMap:
    """Strictly increasing physical values addressed by alphabet symbols 0..d-1."""

    levels: tuple

    def __post_init__(self):
        levels = tuple(float(v) for v in self.levels)
        object.__setattr__(self, "levels", levels)
        if len(levels) < 2:
            raise ValueError("a value map needs at least 2 levels")
        if np.any(np.diff(levels) <= 0):
            raise ValueError("levels must be strictly increasing")

    def __len__(self) -> int:
        return len(self.levels)

    def values(self, x) -> np.ndarray:
        """Physical values of the symbols in ``x``."""
        return np.asarray(self.levels)[np.asarray(x, dtype=int)]

    def nearest_index(self, u) -> np.ndarray:
        """Indices of the levels closest to the physical values ``u``."""
        levels = np.asarray(self.levels)
        return np.abs(np.asarray(u, dtype=float)[..., None] - levels).argmin(axis=-1)


def uniform_value_map(u_min: float, u_max: float, n_levels: int) -> ValueMap:
    """Evenly spaced levels covering ``[u_min, u_max]`` inclusive."""
    if not u_min < u_max:
        raise ValueError("u_min must be below u_max")
    if n_levels < 2:
        raise ValueError("n_levels must be >= 2")
    return ValueMap(tuple(np.linspace(u_min, u_max, n_levels)))


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of ``n_steps`` steps covering ``[0, total_time]``.

    Fields are zero-order-hold: the value attached to step ``k`` applies on
    ``[k dt, (k+1) dt)``.  Basis expansions are sampled at the step start
    times ``k dt``.
    """

    total_time: float
    n_steps: int

    def __post_init__(self):
        if not self.total_time > 0:
            raise ValueError("total_time must be positive")
        if self.n_steps < 1:
            raise ValueError("n_steps must be >= 1")

    @property
    def dt(self) -> float:
        return self.total_time / self.n_steps

    @property
    def times(self) -> np.ndarray:
        """Step start times, length ``n_steps``."""
        return self.dt * np.arange(self.n_steps)


def decode_time_series(x, value_map: ValueMap, grid: TimeGrid) -> np.ndarray:
    """One symbol per step, held constant over the step."""
    x = np.asarray(x, dtype=int)
    if x.shape != (grid.n_steps,):
        raise ValueError(f"expected {grid.n_steps} symbols, got {x.shape}")
    return value_map.values(x)


def decode_piecewise(x, value_map: ValueMap, grid: TimeGrid) -> np.ndarray:
    """``len(x)`` equal segments of ``[0, T]``, constant per segment.

    Step ``k`` belongs to segment ``floor(k * J / n_steps)`` (left-closed,
    right-open intervals).  With one segment per step this reduces exactly
    to :func:`decode_time_series`.
    """
    x = np.asarray(x, dtype=int)
    n_segments = x.size
    if n_segments < 1 or x.ndim != 1:
        raise ValueError("segment index sequence must be a non-empty vector")
    if n_segments > grid.n_steps:
        raise ValueError(f"{n_segments} segments exceed {grid.n_steps} grid steps")
    segment = (np.arange(grid.n_steps) * n_segments) // grid.n_steps
    return value_map.values(x)[segment]


@lru_cache(maxsize=None)
def _fourier_design_matrix(n_harmonics: int, total_time: float,
                           n_steps: int) -> np.ndarray:
    grid = TimeGrid(total_time, n_steps)
    columns = [np.ones(n_steps)]
    for harmonic in range(1, n_harmonics + 1):
        phase = 2.0 * np.pi * harmonic * grid.times / total_time
        columns.append(np.cos(phase))
        columns.append(np.sin(phase))
    matrix = np.column_stack(columns)
    matrix.flags.writeable = False
    return matrix


def decode_fourier(x, value_map: ValueMap, grid: TimeGrid) -> np.ndarray:
    """Truncated Fourier series sampled on the grid.

    The ``2J+1`` symbols map to coefficients ordered as the constant term
    followed by (cos, sin) pairs of harmonics 1..J.  Harmonic ``l`` uses
    angular frequency ``2 pi l / T`` so the basis is periodic on the grid
    duration.  The decoded field may leave the coefficient range; that is
    inherent to the basis and not an error.
    """
    x = np.asarray(x, dtype=int)
    if x.ndim != 1 or x.size % 2 == 0:
        raise ValueError("a Fourier encoding needs an odd number of coefficients (2J+1)")
    n_harmonics = (x.size - 1) // 2
    matrix = _fourier_design_matrix(n_harmonics, grid.total_time, grid.n_steps)
    return matrix @ value_map.values(x)


def clamped_uniform_knots(n_coeffs: int, degree: int, total_time: float) -> np.ndarray:
    """Clamped knot vector with uniform interior knots on ``[0, T]``.

    Length is ``n_coeffs + degree + 1`` with the boundary knots repeated
    ``degree + 1`` times.
    """
    if n_coeffs < degree + 1:
        raise ValueError(f"need at least degree+1 = {degree + 1} coefficients")
    interior = np.linspace(0.0, total_time, n_coeffs - degree + 1)[1:-1]
    return np.concatenate([
        np.zeros(degree + 1),
        interior,
        np.full(degree + 1, total_time),
    ])


def bspline_basis(j: int, degree: int, knots: np.ndarray, t: float) -> float:
    """Cox-de Boor value of basis function ``j`` at time ``t``.

    At the right endpoint the final span is treated as closed so the basis
    still sums to one there.
    """
    knots = np.asarray(knots, dtype=float)
    if t < knots[0] or t > knots[-1]:
        raise ValueError(f"t={t} outside the knot range [{knots[0]}, {knots[-1]}]")
    if degree == 0:
        if knots[j] <= t < knots[j + 1]:
            return 1.0
        # right-limit convention: the last non-empty span is closed at T
        if t == knots[-1] and knots[j] < knots[j + 1] and knots[j + 1] == knots[-1]:
            return 1.0
        return 0.0
    value = 0.0
    left_den = knots[j + degree] - knots[j]
    if left_den > 0:
        value += (t - knots[j]) / left_den * bspline_basis(j, degree - 1, knots, t)
    right_den = knots[j + degree + 1] - knots[j + 1]
    if right_den > 0:
        value += (knots[j + degree + 1] - t) / right_den * bspline_basis(j + 1, degree - 1, knots, t)
    return value


@lru_cache(maxsize=None)
def _spline_design_matrix(n_coeffs: int, degree: int, total_time: float,
                          n_steps: int) -> np.ndarray:
    grid = TimeGrid(total_time, n_steps)
    knots = clamped_uniform_knots(n_coeffs, degree, total_time)
    matrix = np.array([
        [bspline_basis(j, degree, knots, t) for j in range(n_coeffs)]
        for t in grid.times
    ])
    matrix.flags.writeable = False
    return matrix


def decode_spline(x, value_map: ValueMap, grid: TimeGrid, degree: int = 3) -> np.ndarray:
    """Clamped uniform B-spline with ``len(x)`` control coefficients."""
    x = np.asarray(x, dtype=int)
    if x.ndim != 1:
        raise ValueError("coefficient index sequence must be a vector")
    matrix = _spline_design_matrix(x.size, degree, grid.total_time, grid.n_steps)
    return matrix @ value_map.values(x)


def layout_variables(counts, layout: str) -> list:
    """Site ordering for multi-field problems.

    Returns one ``(field, coefficient)`` pair per TT site.  ``interleaved``
    alternates fields coefficient by coefficient (skipping exhausted
    fields); ``separate`` concatenates whole fields.  The list is a
    bijection, so its index and contents convert both ways.
    """
    counts = [int(c) for c in counts]
    if not counts or any(c < 1 for c in counts):
        raise ValueError("each field needs at least one coefficient")
    if layout not in LAYOUTS:
        raise ValueError(f"layout must be one of {LAYOUTS}")
    if layout == "separate":
        return [(f, c) for f, count in enumerate(counts) for c in range(count)]
    sites = []
    for c in range(max(counts)):
        for f, count in enumerate(counts):
            if c < count:
                sites.append((f, c))
    return sites


@dataclass(frozen=True)
class FieldSpec:
    """One named control field and its basis parameterization."""

    name: str
    basis: str                # time_series | piecewise | fourier | spline
    value_map: ValueMap
    n_coeffs: int
    degree: int = 3           # spline only

    def __post_init__(self):
        if self.basis not in ("time_series", "piecewise", "fourier", "spline"):
            raise ValueError(f"unknown basis {self.basis!r}")
        if self.n_coeffs < 1:
            raise ValueError("n_coeffs must be >= 1")
        if self.basis == "fourier" and self.n_coeffs % 2 == 0:
            raise ValueError("fourier fields need an odd coefficient count (2J+1)")
        if self.basis == "spline" and self.n_coeffs < self.degree + 1:
            raise ValueError("spline fields need at least degree+1 coefficients")


@dataclass(frozen=True)
class ControlEncoding:
    """Bidirectional map between TT index sequences and control fields on a grid."""

    fields: tuple
    grid: TimeGrid
    layout: str = "interleaved"

    def __post_init__(self):
        object.__setattr__(self, "fields", tuple(self.fields))
        if not self.fields:
            raise ValueError("at least one field required")
        sites = layout_variables([f.n_coeffs for f in self.fields], self.layout)
        object.__setattr__(self, "_sites", sites)
        for spec in self.fields:
            if spec.basis == "time_series" and spec.n_coeffs != self.grid.n_steps:
                raise ValueError(
                    f"time-series field {spec.name!r} needs n_coeffs == n_steps"
                )
            if spec.basis == "piecewise" and spec.n_coeffs > self.grid.n_steps:
                raise ValueError(
                    f"piecewise field {spec.name!r} has more segments than grid steps"
                )

    @property
    def n_sites(self) -> int:
        return len(self._sites)

    @property
    def local_dims(self) -> list:
        return [len(self.fields[f].value_map) for f, _ in self._sites]

    @property
    def site_assignment(self) -> list:
        """``(field, coefficient)`` pair per site, in site order."""
        return list(self._sites)

    def site_of(self, field: int, coeff: int) -> int:
        return self._sites.index((field, coeff))

    def split(self, x) -> list:
        """Per-field coefficient index vectors extracted from a site sequence."""
        x = np.asarray(x, dtype=int)
        if x.shape != (self.n_sites,):
            raise ValueError(f"expected {self.n_sites} sites, got {x.shape}")
        parts = [np.empty(spec.n_coeffs, dtype=int) for spec in self.fields]
        for site, (f, c) in enumerate(self._sites):
            parts[f][c] = x[site]
        return parts

    def decode(self, x) -> dict:
        """Field samples on the grid, keyed by field name."""
        decoders = {
            "time_series": lambda s, v: decode_time_series(v, s.value_map, self.grid),
            "piecewise": lambda s, v: decode_piecewise(v, s.value_map, self.grid),
            "fourier": lambda s, v: decode_fourier(v, s.value_map, self.grid),
            "spline": lambda s, v: decode_spline(v, s.value_map, self.grid, s.degree),
        }
        parts = self.split(x)
        return {
            spec.name: decoders[spec.basis](spec, part)
            for spec, part in zip(self.fields, parts)
        }

    def coefficients(self, x) -> dict:
        """Decoded coefficient values per field (before basis expansion)."""
        parts = self.split(x)
        return {
            spec.name: spec.value_map.values(part)
            for spec, part in zip(self.fields, parts)
        }


@dataclass(frozen=True)
class VectorEncoding:
    """One symbol per coordinate of a real vector; used by benchmark functions."""

    value_map: ValueMap
    dimension: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")

    @property
    def n_sites(self) -> int:
        return self.dimension

    @property
    def local_dims(self) -> list:
        return [len(self.value_map)] * self.dimension

    def decode(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=int)
        if x.shape != (self.dimension,):
            raise ValueError(f"expected {self.dimension} sites, got {x.shape}")
        return self.value_map.values(x)
