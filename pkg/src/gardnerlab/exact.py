"""Closed-form solution families with machine-precision derivative jets.

All derivatives (space, time, shift and scaling parameters) are obtained by
nested truncated-Taylor forward differentiation through the two building
blocks F and G, never by hand-expanded formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import Field, Grid
from .params import BreatherParams, DoublePoleParams, SolitonParams
from .series import Series, const, cos, cosh, exp, sin, sinh, sqrt, var

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Jet:
    """Value with x-derivatives through order 4 and the t-derivative."""

    value: float
    dx: float = 0.0
    dx2: float = 0.0
    dx3: float = 0.0
    dx4: float = 0.0
    dt: float = 0.0


def breather_fg(alpha, beta, mu, x1, x2, t, x):
    """The (F, G) pair of the breather formula; accepts Series arguments."""
    a2b2 = alpha * alpha + beta * beta
    disc = a2b2 - 2.0 * (mu * mu)
    dcoef = alpha * alpha - 3.0 * (beta * beta)
    gcoef = 3.0 * (alpha * alpha) - beta * beta
    y1 = x + dcoef * t + x1
    y2 = x + gcoef * t + x2
    root_ab = sqrt(a2b2)
    root_d = sqrt(disc)
    G = (beta * root_ab / (alpha * root_d)) * sin(alpha * y1) \
        - (SQRT2 * mu * beta) * exp(beta * y2) / disc
    F = cosh(beta * y2) \
        - SQRT2 * mu * beta * (alpha * cos(alpha * y1) - beta * sin(alpha * y1)) \
        / (alpha * root_ab * root_d)
    return F, G


def double_pole_fg(beta, mu, x1, x2, t, x):
    """(F, G) of the degenerate alpha -> 0 family."""
    disc0 = beta * beta - 2.0 * (mu * mu)
    y1 = x - 3.0 * (beta * beta) * t + x1
    y2 = x - (beta * beta) * t + x2
    root = sqrt(disc0)
    G = (beta * beta) * y1 / root - (SQRT2 * mu * beta) * exp(beta * y2) / disc0
    F = cosh(beta * y2) - SQRT2 * mu * (1.0 - beta * y1) / root
    return F, G


# nesting discipline: this fixed order, innermost first, outermost last
_LEVELS = ("alpha", "beta", "x1", "x2", "t", "x")


def seeds(p: BreatherParams, t, x, orders: dict):
    """Nested seeds for the requested variables.

    ``orders`` maps level names to coefficient counts; absent or 1 means the
    variable stays a plain number.  Returns (values dict, active level names
    outermost first).
    """
    cur = {
        "alpha": p.alpha,
        "beta": p.beta,
        "mu": p.mu,
        "x1": p.x1,
        "x2": p.x2,
        "t": t,
        "x": x,
    }
    active = []
    for name in _LEVELS:
        n = orders.get(name, 1)
        if n <= 1:
            continue
        for other in cur:
            if other != name and isinstance(cur[other], Series):
                cur[other] = const(cur[other], n)
        cur[name] = var(cur[name], n)
        active.append(name)
    return cur, list(reversed(active))


def extract(obj, active, **want):
    """Mixed derivative from a nested series; ``want`` gives per-level order."""
    for name in active:
        k = want.get(name, 0)
        if isinstance(obj, Series):
            obj = obj.c[k] * float(math.factorial(k)) if k < len(obj.c) else 0.0
        elif k > 0:
            return 0.0
    return obj


def _truncate(s: Series, n: int) -> Series:
    return Series(s.c[:n])


def angle_x_derivative(F: Series, G: Series) -> Series:
    """d/dx arctan(G/F) as a series in the outermost (x) variable.

    Valid to one order less than F, G; avoids the arctan branch entirely.
    """
    n = len(F.c)
    num = G.xderiv() * _truncate(F, n - 1) - _truncate(G, n - 1) * F.xderiv()
    den = _truncate(F * F + G * G, n - 1)
    return num / den


def breather_profile(cur) -> Series:
    """B = 2 sqrt(2) d/dx arctan(G/F) from seeded values (x outermost)."""
    F, G = breather_fg(cur["alpha"], cur["beta"], cur["mu"],
                       cur["x1"], cur["x2"], cur["t"], cur["x"])
    return (2.0 * SQRT2) * angle_x_derivative(F, G)


def _jet_from_series(B: Series, active) -> Jet:
    def g(**want):
        return float(extract(B, active, **want))

    return Jet(
        value=g(),
        dx=g(x=1),
        dx2=g(x=2),
        dx3=g(x=3),
        dx4=g(x=4),
        dt=g(t=1),
    )


def gardner_breather(p: BreatherParams, t: float, x: float) -> Jet:
    """Breather value with x-jets through order 4 and the t-derivative."""
    cur, active = seeds(p, t, x, {"x": 6, "t": 2})
    return _jet_from_series(breather_profile(cur), active)


def gardner_breather_values(p: BreatherParams, t: float, x: np.ndarray) -> np.ndarray:
    cur, active = seeds(p, t, np.asarray(x, dtype=float), {"x": 2})
    return np.asarray(extract(breather_profile(cur), active))


def wrapped_nodes(p: BreatherParams, t: float, x: np.ndarray,
                  half_length: float) -> np.ndarray:
    """Shift sample points by whole domain periods so the line-breather
    evaluation tracks the envelope on a periodic domain.

    The envelope travels at the group speed; once it crosses the boundary a
    periodic solution wraps around while the line formula does not.  Mapping
    the envelope coordinate back into [-L, L) keeps the two comparable (the
    discarded image tails are O(exp(-4 beta L))).
    """
    x = np.asarray(x, dtype=float)
    y2 = x + p.phase_speed_2 * t + p.x2
    return x - 2.0 * half_length * np.round(y2 / (2.0 * half_length))


def breather_xjets(p: BreatherParams, t: float, x, max_order: int = 4):
    """[B, B_x, ..., B_{(max_order)x}] evaluated at x (vectorized)."""
    cur, active = seeds(p, t, np.asarray(x, dtype=float), {"x": max_order + 2})
    B = breather_profile(cur)
    return [np.asarray(extract(B, active, x=k)) for k in range(max_order + 1)]


def breather_field(p: BreatherParams, t: float, grid: Grid) -> Field:
    return Field(grid, gardner_breather_values(p, t, grid.nodes))


def gardner_soliton(sp: SolitonParams, s) -> Jet:
    """Traveling profile Q(s) = c / (mu + sqrt(mu^2 + c/2) cosh(sqrt(c) s))."""
    c, mu = sp.c, sp.mu
    xs = var(float(s), 6)
    Q = c / (mu + math.sqrt(mu * mu + c / 2.0) * cosh(math.sqrt(c) * xs))
    jv = [float(Q.deriv_coeff(k)) for k in range(5)]
    # w(t, x) = Q(x - c t), so the time slot carries -c Q'
    return Jet(jv[0], jv[1], jv[2], jv[3], jv[4], dt=-c * jv[1])


def soliton_values(sp: SolitonParams, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    c, mu = sp.c, sp.mu
    return c / (mu + math.sqrt(mu * mu + c / 2.0) * np.cosh(math.sqrt(c) * s))


def double_pole(dp: DoublePoleParams, t: float, x):
    """Value of the degenerate breather limit."""
    xs = var(np.asarray(x, dtype=float), 2)
    F, G = double_pole_fg(dp.beta, dp.mu, dp.x1, dp.x2, t, xs)
    B = (2.0 * SQRT2) * angle_x_derivative(F, G)
    out = np.asarray(B.c[0])
    return float(out) if out.ndim == 0 else out


def mkdv_nvbc_breather(p: BreatherParams, t: float, x) -> Jet:
    """NVBC profile mu + 2 sqrt(2) d/dx arctan(g/f), g = G(t, x - 3 mu^2 t)."""
    cur, active = seeds(p, t, float(x), {"x": 6, "t": 2})
    B = nvbc_profile(cur)
    return _jet_from_series(B, active)


def nvbc_profile(cur) -> Series:
    """NVBC breather from seeded values: the Galilean-shifted (f, g) pair."""
    mu = cur["mu"]
    xarg = cur["x"] - 3.0 * (mu * mu) * cur["t"]
    F, G = breather_fg(cur["alpha"], cur["beta"], mu,
                       cur["x1"], cur["x2"], cur["t"], xarg)
    return mu + (2.0 * SQRT2) * angle_x_derivative(F, G)


def mkdv_nvbc_values(p: BreatherParams, t: float, x) -> np.ndarray:
    cur, active = seeds(p, t, np.asarray(x, dtype=float), {"x": 2})
    return np.asarray(extract(nvbc_profile(cur), active))


def _direction_jet(p, t, x, level, x_order=6):
    cur, active = seeds(p, t, float(x), {"x": x_order, "t": 2, level: 2})
    B = breather_profile(cur)

    def g(**want):
        want[level] = 1
        return float(extract(B, active, **want))

    return Jet(g(), g(x=1), g(x=2), g(x=3), g(x=4), g(t=1))


def kernel_directions(p: BreatherParams, t: float, x: float) -> tuple[Jet, Jet]:
    """Shift derivatives (d/dx1 B, d/dx2 B) spanning the kernel of the
    linearized operator."""
    return _direction_jet(p, t, x, "x1"), _direction_jet(p, t, x, "x2")


def scaling_directions(p: BreatherParams, t: float, x: float) -> tuple[Jet, Jet]:
    """Parameter derivatives (d/dalpha B, d/dbeta B)."""
    return _direction_jet(p, t, x, "alpha"), _direction_jet(p, t, x, "beta")


def _direction_values(p, t, x, level):
    cur, active = seeds(p, t, np.asarray(x, dtype=float), {"x": 2, level: 2})
    return np.asarray(extract(breather_profile(cur), active, **{level: 1}))


def kernel_direction_values(p: BreatherParams, t: float, x):
    return _direction_values(p, t, x, "x1"), _direction_values(p, t, x, "x2")


def scaling_direction_values(p: BreatherParams, t: float, x):
    return _direction_values(p, t, x, "alpha"), _direction_values(p, t, x, "beta")


def b_zero(p: BreatherParams, t: float, x: float) -> Jet:
    """(alpha * LamB + beta * LamA) / (8 alpha beta (alpha^2 + beta^2))."""
    la, lb = scaling_directions(p, t, x)
    w = 1.0 / (8.0 * p.alpha * p.beta * (p.alpha**2 + p.beta**2))

    def mix(f):
        return w * (p.alpha * f(lb) + p.beta * f(la))

    return Jet(mix(lambda j: j.value), mix(lambda j: j.dx), mix(lambda j: j.dx2),
               mix(lambda j: j.dx3), mix(lambda j: j.dx4), mix(lambda j: j.dt))


def b_zero_values(p: BreatherParams, t: float, x):
    la, lb = scaling_direction_values(p, t, x)
    w = 1.0 / (8.0 * p.alpha * p.beta * (p.alpha**2 + p.beta**2))
    return w * (p.alpha * lb + p.beta * la)


def _direction_xjets(p, t, x, level, max_order=4):
    cur, active = seeds(p, t, np.asarray(x, dtype=float),
                        {"x": max_order + 2, level: 2})
    B = breather_profile(cur)
    return [np.asarray(extract(B, active, x=k, **{level: 1}))
            for k in range(max_order + 1)]


def b_zero_xjets(p: BreatherParams, t: float, x, max_order: int = 4):
    """[B0, B0_x, ..., B0_{(max_order)x}] evaluated at x (vectorized)."""
    la = _direction_xjets(p, t, x, "alpha", max_order)
    lb = _direction_xjets(p, t, x, "beta", max_order)
    w = 1.0 / (8.0 * p.alpha * p.beta * (p.alpha**2 + p.beta**2))
    return [w * (p.alpha * b + p.beta * a) for a, b in zip(la, lb)]


def continuous_angle(F: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Continuous branch of arctan(G/F) along a sampled path, anchored so the
    left endpoint sits on the principal branch."""
    theta = np.unwrap(np.arctan2(G, F))
    theta -= 2.0 * np.pi * np.round(theta[0] / (2.0 * np.pi))
    return theta


def b_tilde_values(p: BreatherParams, t: float, x) -> np.ndarray:
    """Smooth bounded antiderivative 2 sqrt(2) arctan(G/F) with branch
    tracking along x."""
    x = np.asarray(x, dtype=float)
    F, G = breather_fg(p.alpha, p.beta, p.mu, p.x1, p.x2, t, x)
    if not np.all(np.isfinite(F)) or not np.all(np.isfinite(G)):
        raise FloatingPointError("breather building blocks overflowed")
    return (2.0 * SQRT2) * continuous_angle(np.asarray(F), np.asarray(G))


def partial_mass_values(p: BreatherParams, t: float, x) -> np.ndarray:
    """Partial mass (1/2) int_{-inf}^x B^2 in closed form:
    2 beta + d/dx log(G^2 + F^2) - mu * b_tilde, sampled along x."""
    x = np.asarray(x, dtype=float)
    cur, active = seeds(p, t, x, {"x": 2})
    F, G = breather_fg(cur["alpha"], cur["beta"], cur["mu"],
                       cur["x1"], cur["x2"], cur["t"], cur["x"])
    D = F * F + G * G
    dlog = D.xderiv() / _truncate(D, 1)
    dlog_val = np.asarray(dlog.c[0])
    return 2.0 * p.beta + dlog_val - p.mu * b_tilde_values(p, t, x)


def partial_mass(p: BreatherParams, t: float, x: float,
                 scan_from: float = -40.0, scan_points: int = 4096) -> float:
    """Pointwise partial mass; the arctan branch is tracked by a fine scan
    from the far left tail."""
    xs = np.linspace(scan_from, x, scan_points)
    return float(partial_mass_values(p, t, xs)[-1])


def breather_period(p: BreatherParams) -> tuple[float, float]:
    return p.period()
