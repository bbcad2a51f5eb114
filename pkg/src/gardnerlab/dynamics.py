"""Pseudospectral time evolution and the orbital-stability experiment."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import exact, functionals, spectral
from .fields import Field, Grid, h2_norm, sobolev_norm_sq
from .params import BreatherParams


@dataclass(frozen=True)
class SolverConfig:
    grid: Grid
    dt: float
    t_end: float
    dealias: float = 2.0 / 3.0
    integrator: str = "etdrk4"
    snapshot_stride: int = 100

    def __post_init__(self):
        if self.dt <= 0.0 or self.t_end <= 0.0:
            raise ValueError("dt and t_end must be positive")
        if not 0.0 < self.dealias <= 1.0:
            raise ValueError("dealias fraction must lie in (0, 1]")
        if self.integrator not in ("etdrk4",):
            raise ValueError(f"unknown integrator {self.integrator!r}")
        if self.snapshot_stride < 1:
            raise ValueError("snapshot_stride must be >= 1")


class BlowUpError(RuntimeError):
    """Evolution aborted because the field grew beyond the guard."""


def evolve(w0: Field, cfg: SolverConfig, mu: float):
    """Integrate w_t + (w_xx + 3 mu w^2 + w^3)_x = 0; yields (t, Field).

    The dispersive part is exact in Fourier space (symbol i k^3); the
    nonlinear flux derivative is pseudospectral with dealias cutoff.
    """
    g = cfg.grid
    k = g.wavenumbers
    lin = 1j * k**3
    mask = np.abs(k) <= cfg.dealias * np.max(np.abs(k))
    guard = 1e3 * max(float(np.max(np.abs(w0.values))), 1e-12)

    def nonlinear(vh):
        w = np.fft.ifft(vh).real
        return -1j * k * mask * np.fft.fft(3.0 * mu * w**2 + w**3)

    E, E2, Q, f1, f2, f3 = _etdrk4_coefficients(lin, cfg.dt)

    vh = np.fft.fft(w0.values)
    n_steps = int(round(cfg.t_end / cfg.dt))
    yield 0.0, Field(g, np.fft.ifft(vh).real, w0.periodic)
    for i in range(1, n_steps + 1):
        Nv = nonlinear(vh)
        a = E2 * vh + Q * Nv
        Na = nonlinear(a)
        b = E2 * vh + Q * Na
        Nb = nonlinear(b)
        c = E2 * a + Q * (2.0 * Nb - Nv)
        Nc = nonlinear(c)
        vh = E * vh + f1 * Nv + 2.0 * f2 * (Na + Nb) + f3 * Nc
        if i % cfg.snapshot_stride == 0 or i == n_steps:
            w = np.fft.ifft(vh).real
            if not np.all(np.isfinite(w)) or np.max(np.abs(w)) > guard:
                raise BlowUpError(f"solution blew up at t = {i * cfg.dt:.6g}")
            yield i * cfg.dt, Field(g, w, w0.periodic)


def _etdrk4_coefficients(lin: np.ndarray, h: float, n_contour: int = 32):
    """phi-function weights by complex contour averaging (kept complex
    per-mode; the linear symbol is purely imaginary)."""
    E = np.exp(h * lin)
    E2 = np.exp(0.5 * h * lin)
    r = np.exp(2j * np.pi * (np.arange(n_contour) + 0.5) / n_contour)
    LR = h * lin[:, None] + r[None, :]
    Q = h * np.mean((np.exp(LR / 2.0) - 1.0) / LR, axis=1)
    f1 = h * np.mean(
        (-4.0 - LR + np.exp(LR) * (4.0 - 3.0 * LR + LR**2)) / LR**3, axis=1)
    f2 = h * np.mean((2.0 + LR + np.exp(LR) * (-2.0 + LR)) / LR**3, axis=1)
    f3 = h * np.mean((-4.0 - 3.0 * LR - LR**2 + np.exp(LR) * (4.0 - LR)) / LR**3,
                     axis=1)
    return E, E2, Q, f1, f2, f3


@dataclass(frozen=True)
class ModulationState:
    x1: float
    x2: float
    converged: bool
    newton_iters: int


def _shift_jets(p: BreatherParams, t: float, x: np.ndarray):
    """B, B1, B2 and the second shift derivatives on the sample."""
    cur, active = exact.seeds(p, t, x, {"x": 2, "x1": 3, "x2": 3})
    Bs = exact.breather_profile(cur)

    def ex(**want):
        return np.asarray(exact.extract(Bs, active, **want))

    return {
        "B": ex(), "B1": ex(x1=1), "B2": ex(x2=1),
        "B11": ex(x1=2), "B12": ex(x1=1, x2=1), "B22": ex(x2=2),
    }


def modulate(w: Field, p: BreatherParams, t: float,
             guess: ModulationState | None = None,
             capture_radius: float = 0.5, max_iters: int = 50,
             tol: float = 1e-12) -> ModulationState:
    """Newton solve for shifts (x1, x2) enforcing the two orthogonality
    conditions <w - B, B1> = <w - B, B2> = 0."""
    g = w.grid
    h = g.spacing
    x1 = guess.x1 if guess is not None else p.x1
    x2 = guess.x2 if guess is not None else p.x2
    for it in range(1, max_iters + 1):
        q = p.with_shifts(x1, x2)
        jets = _shift_jets(q, t, exact.wrapped_nodes(q, t, g.nodes,
                                                    g.half_length))
        z = w.values - jets["B"]
        if it == 1:
            dist = h2_norm(Field(g, z, periodic=True))
            if dist > capture_radius:
                return ModulationState(x1, x2, False, 0)
        r1 = h * float(np.sum(z * jets["B1"]))
        r2 = h * float(np.sum(z * jets["B2"]))
        scale = h2_norm(Field(g, z, periodic=True)) + 1e-300
        n1 = math.sqrt(h * float(np.sum(jets["B1"] ** 2)))
        n2 = math.sqrt(h * float(np.sum(jets["B2"] ** 2)))
        if abs(r1) < tol * scale * n1 + 1e-14 and abs(r2) < tol * scale * n2 + 1e-14:
            return ModulationState(x1, x2, True, it - 1)
        j11 = h * float(np.sum(z * jets["B11"] - jets["B1"] * jets["B1"]))
        j12 = h * float(np.sum(z * jets["B12"] - jets["B2"] * jets["B1"]))
        j21 = h * float(np.sum(z * jets["B12"] - jets["B1"] * jets["B2"]))
        j22 = h * float(np.sum(z * jets["B22"] - jets["B2"] * jets["B2"]))
        det = j11 * j22 - j12 * j21
        if det == 0.0:
            return ModulationState(x1, x2, False, it)
        dx1 = -(j22 * r1 - j12 * r2) / det
        dx2 = -(-j21 * r1 + j11 * r2) / det
        x1 += dx1
        x2 += dx2
        # a step at roundoff scale means the residual has hit its evaluation
        # noise floor; accept rather than oscillate around it
        if abs(dx1) + abs(dx2) < 1e-11 * (1.0 + abs(x1) + abs(x2)):
            return ModulationState(x1, x2, True, it)
    return ModulationState(x1, x2, False, max_iters)


@dataclass(frozen=True)
class StabilityReport:
    eta: float
    sup_distance: float
    amplification: float
    invariant_drift: float
    modulation_speed: float
    horizon: float
    escape_time: float | None
    times: np.ndarray = field(repr=False)
    distances: np.ndarray = field(repr=False)
    shifts1: np.ndarray = field(repr=False)
    shifts2: np.ndarray = field(repr=False)
    invariants: dict = field(repr=False)


PERTURBATION_KINDS = ("random-band-limited", "kernel-aligned",
                      "scaling-aligned", "b0-aligned")


def _perturbation(kind: str, p: BreatherParams, g: Grid, seed: int) -> np.ndarray:
    if kind == "random-band-limited":
        rng = np.random.default_rng(seed)
        return spectral._band_limited_noise(g, rng)
    if kind == "kernel-aligned":
        return exact.kernel_direction_values(p, 0.0, g.nodes)[0]
    if kind == "scaling-aligned":
        return exact.scaling_direction_values(p, 0.0, g.nodes)[0]
    if kind == "b0-aligned":
        return exact.b_zero_values(p, 0.0, g.nodes)
    raise ValueError(f"unknown perturbation kind {kind!r}")


def stability_experiment(p: BreatherParams, kind: str, eta: float, seed: int,
                         horizon_periods: float, cfg: SolverConfig) -> StabilityReport:
    """Perturb the breather, evolve, modulate at snapshots and track the
    orbital distance and conserved-quantity drift."""
    if eta > 1e-2:
        raise ValueError("perturbation size eta must be <= 1e-2")
    g = cfg.grid
    T, _ = p.period()
    t_end = horizon_periods * T
    cfg = replace(cfg, t_end=t_end)

    w0v = exact.gardner_breather_values(p, 0.0, g.nodes)
    if eta > 0.0:
        pert = _perturbation(kind, p, g, seed)
        pert = pert / math.sqrt(sobolev_norm_sq(Field(g, pert, periodic=True), 2))
        w0v = w0v + eta * pert
    w0 = Field(g, w0v, periodic=True)

    evaluators = {
        "M": functionals.mass,
        "E": lambda f: functionals.energy(f, p.mu),
        "F": lambda f: functionals.f_functional(f, p.mu),
        "H": lambda f: functionals.lyapunov(f, p),
    }
    inv0 = {key: fn(w0) for key, fn in evaluators.items()}
    inv_series = {key: [] for key in evaluators}
    drift = 0.0
    times, dists, xs1, xs2 = [], [], [], []
    state = ModulationState(p.x1, p.x2, True, 0)
    escape_time = None
    for t, w in evolve(w0, cfg, p.mu):
        state = modulate(w, p, t, guess=state)
        if not state.converged:
            escape_time = t
            break
        q = p.with_shifts(state.x1, state.x2)
        xw = exact.wrapped_nodes(q, t, g.nodes, g.half_length)
        z = w.values - exact.gardner_breather_values(q, t, xw)
        dist = h2_norm(Field(g, z, periodic=True))
        times.append(t)
        dists.append(dist)
        xs1.append(state.x1)
        xs2.append(state.x2)
        for key, fn in evaluators.items():
            v = fn(w)
            inv_series[key].append(v)
            drift = max(drift, abs(v - inv0[key]) / max(abs(inv0[key]), 1e-300))

    times = np.asarray(times)
    dists = np.asarray(dists)
    xs1 = np.asarray(xs1)
    xs2 = np.asarray(xs2)
    if len(times) > 1:
        dt_snap = np.diff(times)
        speed = float(np.max(np.abs(np.diff(xs1)) / dt_snap
                             + np.abs(np.diff(xs2)) / dt_snap))
    else:
        speed = 0.0
    sup_dist = float(np.max(dists)) if dists.size else math.inf
    return StabilityReport(
        eta=eta,
        sup_distance=sup_dist,
        amplification=sup_dist / eta if eta > 0.0 else math.nan,
        invariant_drift=drift,
        modulation_speed=speed,
        horizon=horizon_periods,
        escape_time=escape_time,
        times=times,
        distances=dists,
        shifts1=xs1,
        shifts2=xs2,
        invariants={key: np.asarray(v) for key, v in inv_series.items()},
    )


def secular_slope(times: np.ndarray, distances: np.ndarray, period: float):
    """Least-squares slope of per-period-averaged distance over the second
    half of the run; returns (slope, stderr_of_slope).

    Averaging per period avoids the autocorrelation of within-period
    oscillations inflating the significance of a fitted trend.
    """
    tmid = times[-1] / 2.0
    sel = times >= tmid
    t, d = times[sel], distances[sel]
    bins = np.floor((t - t[0]) / period).astype(int)
    tm = np.array([t[bins == b].mean() for b in np.unique(bins)])
    dm = np.array([d[bins == b].mean() for b in np.unique(bins)])
    if len(tm) < 3:
        return 0.0, math.inf
    A = np.vstack([np.ones_like(tm), tm]).T
    coef, res, *_ = np.linalg.lstsq(A, dm, rcond=None)
    dof = len(tm) - 2
    sigma2 = float(res[0]) / dof if res.size and dof > 0 else 0.0
    cov = sigma2 * np.linalg.inv(A.T @ A)
    return float(coef[1]), float(math.sqrt(max(cov[1, 1], 0.0)))


def lyapunov_expansion_check(p: BreatherParams, t: float, z: Field):
    """Compare the Lyapunov increment with half the quadratic form.

    Returns (lhs, quad, remainder): the remainder should scale cubically
    with the perturbation size.
    """
    g = z.grid
    Bv = exact.gardner_breather_values(p, t, g.nodes)
    lhs = functionals.lyapunov(Field(g, Bv + z.values, periodic=True), p) \
        - functionals.lyapunov(Field(g, Bv, periodic=True), p)
    quad = 0.5 * spectral.quadratic_form(z, p, t)
    return lhs, quad, lhs - quad
