"""Uniform periodic grids, spectral differentiation and quadrature.

The real line is truncated to [-L, L) with N equispaced nodes; all profiles
of interest decay exponentially, so the periodic wrap error sits below the
tail tolerance.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

TAIL_TOL = 1e-7


class GridError(ValueError):
    pass


class TailWarning(UserWarning):
    """Boundary values exceed the configured tail tolerance."""


@dataclass(frozen=True)
class Grid:
    """Periodic grid on [-L, L) with N nodes, N even."""

    half_length: float
    num_points: int

    def __post_init__(self):
        if self.half_length <= 0.0:
            raise GridError(f"half_length must be positive, got {self.half_length}")
        if self.num_points % 2 != 0 or self.num_points < 16:
            raise GridError(
                f"num_points must be even and >= 16, got {self.num_points}"
            )

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_length / self.num_points

    @property
    def nodes(self) -> np.ndarray:
        return -self.half_length + self.spacing * np.arange(self.num_points)

    @property
    def wavenumbers(self) -> np.ndarray:
        """k_j = pi j / L in FFT ordering."""
        return np.fft.fftfreq(self.num_points, d=self.spacing) * 2.0 * np.pi


def make_grid(half_length: float, num_points: int) -> Grid:
    return Grid(half_length, num_points)


DEFAULT_GRID = Grid(40.0, 1024)


@dataclass(frozen=True)
class Field:
    """Real samples on a Grid."""

    grid: Grid
    values: np.ndarray
    periodic: bool = False  # exempt from tail checks when True

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.num_points,):
            raise GridError(
                f"values shape {v.shape} does not match grid size {self.grid.num_points}"
            )
        if not np.all(np.isfinite(v)):
            raise GridError("field values must be finite")
        object.__setattr__(self, "values", v)

    def boundary_magnitude(self) -> float:
        """Largest |value| over the outer 1% of nodes at each end."""
        n = max(1, self.grid.num_points // 100)
        v = np.abs(self.values)
        return float(max(v[:n].max(), v[-n:].max()))

    def map(self, values: np.ndarray) -> "Field":
        return Field(self.grid, values, self.periodic)


def field_from_function(grid: Grid, f, periodic: bool = False) -> Field:
    return Field(grid, np.asarray(f(grid.nodes), dtype=float), periodic)


def derivative(f: Field, order: int) -> Field:
    """Fourier-collocation derivative of integer order 1..4."""
    if order not in (1, 2, 3, 4):
        raise ValueError(f"derivative order must be in 1..4, got {order}")
    k = f.grid.wavenumbers
    mult = (1j * k) ** order
    if order % 2 == 1:
        # zero the Nyquist mode for odd derivatives (it is pure imaginary there)
        mult[f.grid.num_points // 2] = 0.0
    out = np.fft.ifft(mult * np.fft.fft(f.values)).real
    return Field(f.grid, out, f.periodic)


def _check_tail(f: Field):
    if f.periodic:
        return
    b = f.boundary_magnitude()
    if b > TAIL_TOL:
        warnings.warn(
            f"boundary magnitude {b:.3e} exceeds tail tolerance {TAIL_TOL:.1e}",
            TailWarning,
            stacklevel=3,
        )


def integrate(f: Field) -> float:
    """Trapezoid rule on the periodic grid (spectrally accurate here)."""
    _check_tail(f)
    return float(f.grid.spacing * np.sum(f.values))


def inner_product(f: Field, g: Field) -> float:
    if f.grid != g.grid:
        raise GridError("fields live on different grids")
    return float(f.grid.spacing * np.sum(f.values * g.values))


def sobolev_norm_sq(f: Field, s: int) -> float:
    """Squared H^s norm, s in {0, 1, 2}: sum_{j<=s} int (d^j f)^2."""
    if s not in (0, 1, 2):
        raise ValueError(f"s must be in 0..2, got {s}")
    h = f.grid.spacing
    total = float(h * np.sum(f.values**2))
    for j in range(1, s + 1):
        total += float(h * np.sum(derivative(f, j).values ** 2))
    return total


def h2_norm(f: Field) -> float:
    return float(np.sqrt(sobolev_norm_sq(f, 2)))


def spectral_l2_sq(f: Field) -> float:
    """Parseval cross-check of the squared L2 norm from the spectrum."""
    fh = np.fft.fft(f.values)
    n = f.grid.num_points
    return float(f.grid.spacing * np.sum(np.abs(fh) ** 2) / n)
