"""Parameter records for the exact solution families."""

from __future__ import annotations

import math
from dataclasses import dataclass


class ParameterDomainError(ValueError):
    """Raised when a parameter tuple violates its admissibility constraint."""


@dataclass(frozen=True)
class BreatherParams:
    """Four-parameter breather family: scalings (alpha, beta), quadratic
    strength mu, spatial shifts (x1, x2).  Requires alpha^2 + beta^2 - 2 mu^2 > 0."""

    alpha: float
    beta: float
    mu: float
    x1: float = 0.0
    x2: float = 0.0

    def __post_init__(self):
        if self.alpha == 0.0 or self.beta == 0.0:
            raise ParameterDomainError("alpha and beta must be nonzero")
        if self.delta_disc <= 0.0:
            raise ParameterDomainError(
                f"need alpha^2 + beta^2 - 2 mu^2 > 0, got {self.delta_disc}"
            )

    @property
    def delta_disc(self) -> float:
        """Real-valuedness discriminant alpha^2 + beta^2 - 2 mu^2."""
        return self.alpha**2 + self.beta**2 - 2.0 * self.mu**2

    @property
    def mu_max(self) -> float:
        return math.sqrt((self.alpha**2 + self.beta**2) / 2.0)

    @property
    def phase_speed_1(self) -> float:
        """Coefficient of t in the first phase y1 = x + delta*t + x1."""
        return self.alpha**2 - 3.0 * self.beta**2

    @property
    def phase_speed_2(self) -> float:
        """Coefficient of t in the second phase y2 = x + gamma*t + x2."""
        return 3.0 * self.alpha**2 - self.beta**2

    def period(self) -> tuple[float, float]:
        """Temporal period T and spatial shift after one period.

        T = 2 pi / |alpha (gamma - delta)|; the profile recurs as
        B(t + T, x) = B(t, x - L_shift) with L_shift = -gamma T.
        """
        gamma = self.phase_speed_2
        delta = self.phase_speed_1
        T = 2.0 * math.pi / abs(self.alpha * (gamma - delta))
        return T, -gamma * T

    def with_shifts(self, x1: float, x2: float) -> "BreatherParams":
        return BreatherParams(self.alpha, self.beta, self.mu, x1, x2)


@dataclass(frozen=True)
class SolitonParams:
    """Traveling-wave profile parameters: speed c > 0 and quadratic strength mu."""

    c: float
    mu: float = 0.0

    def __post_init__(self):
        if self.c <= 0.0:
            raise ParameterDomainError(f"need c > 0, got {self.c}")


@dataclass(frozen=True)
class DoublePoleParams:
    """Degenerate (alpha -> 0) limit family; requires beta^2 - 2 mu^2 > 0."""

    beta: float
    mu: float
    x1: float = 0.0
    x2: float = 0.0

    def __post_init__(self):
        if self.beta == 0.0:
            raise ParameterDomainError("beta must be nonzero")
        if self.delta0 <= 0.0:
            raise ParameterDomainError(
                f"need beta^2 - 2 mu^2 > 0, got {self.delta0}"
            )

    @property
    def delta0(self) -> float:
        return self.beta**2 - 2.0 * self.mu**2
