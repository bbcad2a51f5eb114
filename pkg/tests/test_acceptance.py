"""Acceptance suite: one test per acceptance criterion, each printing a
single PASS/FAIL line.  The long stability experiment runs last."""

import functools
import itertools
import math

import numpy as np

from gardnerlab import dynamics as dyn, exact, functionals, identities, spectral
from gardnerlab.fields import Field, Grid, h2_norm, sobolev_norm_sq
from gardnerlab.params import BreatherParams, SolitonParams

P0 = BreatherParams(1.0, 1.0, 0.5)
MU_FRACTIONS = (0.1, 0.5, 0.9)


def sweep_points():
    pts = []
    for a, b in itertools.product((0.5, 1.0, 2.0), repeat=2):
        mu_max = math.sqrt((a * a + b * b) / 2.0)
        for f in MU_FRACTIONS:
            pts.append(BreatherParams(a, b, f * mu_max))
    return pts


def emit(capsys, ok, label, detail):
    with capsys.disabled():
        print(f"{'PASS' if ok else 'FAIL'}: {label} -- {detail}")
    assert ok, f"{label}: {detail}"


@functools.lru_cache(maxsize=None)
def _structural_spectrum(p):
    # N=1024 resolves the kernel pair except for the narrowest (beta = 2)
    # breathers, whose fourth-derivative-weighted Fourier tails at the
    # N=1024 Nyquist limit leave an O(1e-3) kernel subspace angle; those
    # points get one refinement level.
    n = 2048 if p.beta > 1.5 else 1024
    g = Grid(40.0, n)
    return spectral.spectrum(spectral.assemble(p, 0.0, g))


def test_criterion_1_closed_forms_vs_quadrature(capsys):
    g = Grid(40.0, 2048)
    worst = 0.0
    worst_tag = None
    for p in sweep_points():
        w = Field(g, exact.gardner_breather_values(p, 0.0, g.nodes),
                  periodic=True)
        quad = {
            "breather-mass": functionals.mass(w),
            "breather-energy": functionals.energy(w, p.mu),
            "breather-F": functionals.f_functional(w, p.mu),
            "breather-H": functionals.lyapunov(w, p),
        }
        for which, qv in quad.items():
            cv = functionals.closed_form(which, p)
            rel = abs(qv - cv) / max(abs(cv), 1e-300)
            if rel > worst:
                worst, worst_tag = rel, (which, p.alpha, p.beta)
    for c in (0.5, 1.0, 2.0):
        for mu in (0.0, 0.3, 0.8):
            sp = SolitonParams(c, mu)
            w = Field(g, exact.soliton_values(sp, g.nodes), periodic=True)
            quad = {
                "soliton-mass": functionals.mass(w),
                "soliton-energy": functionals.energy(w, mu),
                "soliton-F": functionals.f_functional(w, mu),
            }
            for which, qv in quad.items():
                cv = functionals.closed_form(which, sp)
                rel = abs(qv - cv) / max(abs(cv), 1e-300)
                if rel > worst:
                    worst, worst_tag = rel, (which, c, mu)
    emit(capsys, worst <= 1e-7, "criterion 1 closed forms vs quadrature",
         f"worst relative {worst:.2e} at {worst_tag}")


def test_criterion_2_identity_suite(capsys):
    worst = 0.0
    worst_tag = None
    for p in sweep_points():
        T, _ = p.period()
        for t in (0.0, T / 4.0, T / 2.0):
            for rep in identities.run_all(p, t):
                if rep.relative > worst:
                    worst = rep.relative
                    worst_tag = (rep.identity, p.alpha, p.beta, round(t, 3))
    emit(capsys, worst <= 1e-7, "criterion 2 identity suite",
         f"nine checks, worst relative {worst:.2e} at {worst_tag}")


def test_criterion_3_spectral_structure(capsys):
    g_quad = Grid(40.0, 2048)
    bad = []
    worst_angle = 0.0
    worst_b0 = 0.0
    worst_q = 0.0
    for p in sweep_points():
        rep = _structural_spectrum(p)
        out = spectral.b_zero_check(p, 0.0, g_quad)
        b0_rel = out["sup_residual"] / out["rel_scale"]
        la, lb = exact.scaling_direction_values(p, 0.0, g_quad.nodes)
        qa = spectral.quadratic_form(Field(g_quad, la, periodic=True), p, 0.0)
        qb = spectral.quadratic_form(Field(g_quad, lb, periodic=True), p, 0.0)
        ca = functionals.quadratic_form_scaling_alpha(p)
        cb = functionals.quadratic_form_scaling_beta(p)
        ra = abs(qa - ca) / abs(ca)
        rb = abs(qb - cb) / abs(cb)
        worst_angle = max(worst_angle, rep.subspace_angle_kernel)
        worst_b0 = max(worst_b0, b0_rel)
        worst_q = max(worst_q, ra, rb)
        ok = (rep.negative_count == 1 and rep.kernel_dim_numeric == 2
              and rep.subspace_angle_kernel < 1e-4 and b0_rel < 1e-6
              and ra <= 1e-5 and rb <= 1e-5 and qa > 0.0 and qb < 0.0)
        if not ok:
            bad.append((p.alpha, p.beta, round(p.mu, 3)))
    emit(capsys, not bad, "criterion 3 spectral structure",
         f"27 points: worst angle {worst_angle:.2e}, worst B0 residual "
         f"{worst_b0:.2e}, worst Q-scaling rel {worst_q:.2e}, bad={bad}")


def test_criterion_4_wronskian_triple_agreement(capsys):
    rng = np.random.default_rng(42)
    bad = []
    worst = 0.0
    for p in sweep_points():
        neg = _structural_spectrum(p).negative_count
        T, _ = p.period()
        for _ in range(20):
            t = float(rng.uniform(0.0, T))
            s1, s2 = (float(v) for v in rng.uniform(-1.0, 1.0, 2))
            q = p.with_shifts(s1, s2)
            center = -q.phase_speed_2 * t - q.x2
            x = np.linspace(center - 25.0, center + 25.0, 4001)
            wc = spectral.wronskian_closed(q, t, x)
            wn = spectral.wronskian_numeric(q, t, x)
            rel = float(np.max(np.abs(wc - wn)) / np.max(np.abs(wn)))
            worst = max(worst, rel)
            # count sign changes above the cancellation floor of the
            # exponentially small tails
            core = wn[np.abs(wn) > 1e-9 * np.max(np.abs(wn))]
            wcount = int(np.sum(np.diff(np.sign(core)) != 0))
            fcount = spectral.f_mu_root_count(q, t, q.x1)
            if rel > 1e-8 or not (wcount == fcount == neg == 1):
                bad.append((p.alpha, p.beta, round(p.mu, 3), round(t, 3),
                            rel, wcount, fcount, neg))
    emit(capsys, not bad, "criterion 4 wronskian triple agreement",
         f"540 draws: worst closed-vs-numeric rel {worst:.2e}, bad={bad[:3]}")


def test_criterion_5_coercivity(capsys):
    g = Grid(40.0, 1024)
    bad = []
    min_nu = math.inf
    min_sigma = math.inf
    for p in sweep_points():
        nu, sigma = spectral.coercivity_estimate(p, 0.0, g, trials=200, seed=7)
        min_nu = min(min_nu, nu)
        min_sigma = min(min_sigma, sigma)
        if not (nu > 0.0 and sigma > 0.0):
            bad.append((p.alpha, p.beta, round(p.mu, 3), nu, sigma))
    emit(capsys, not bad, "criterion 5 coercivity",
         f"27 points, 200 trials each: min nu {min_nu:.3e}, "
         f"min sigma witness {min_sigma:.3e}, bad={bad}")


def _one_period_error(g, dt):
    T, _ = P0.period()
    cfg = dyn.SolverConfig(g, dt, T, snapshot_stride=10**9)
    w0 = Field(g, exact.gardner_breather_values(P0, 0.0, g.nodes),
               periodic=True)
    for t, w in dyn.evolve(w0, cfg, P0.mu):
        pass
    ref = exact.gardner_breather_values(P0, t, g.nodes)
    return t, w, h2_norm(Field(g, w.values - ref, periodic=True))


def test_criterion_6_solver_fidelity(capsys):
    g = Grid(40.0, 2048)
    t_end, w_end, err = _one_period_error(g, 1e-4)
    w0 = Field(g, exact.gardner_breather_values(P0, 0.0, g.nodes),
               periodic=True)
    drift = 0.0
    for fn in (functionals.mass,
               lambda f: functionals.energy(f, P0.mu),
               lambda f: functionals.f_functional(f, P0.mu),
               lambda f: functionals.lyapunov(f, P0)):
        v0, v1 = fn(w0), fn(w_end)
        drift = max(drift, abs(v1 - v0) / abs(v0))
    _, _, e_coarse = _one_period_error(g, 8e-4)
    _, _, e_fine = _one_period_error(g, 4e-4)
    order = math.log2(e_coarse / e_fine)
    ok = err <= 1e-6 and drift <= 1e-9 and 3.5 <= order <= 5.5
    emit(capsys, ok, "criterion 6 solver fidelity",
         f"one-period H2 error {err:.2e}, invariant drift {drift:.2e}, "
         f"dt-halving order {order:.2f}")


def test_criterion_8_lyapunov_expansion(capsys):
    g = Grid(40.0, 1024)
    rng = np.random.default_rng(1)
    z0 = spectral._band_limited_noise(g, rng)
    eps_list = np.geomspace(2e-4, 2e-3, 6)
    rems = [abs(dyn.lyapunov_expansion_check(
        P0, 0.0, Field(g, eps * z0, periodic=True))[2]) for eps in eps_list]
    slope = float(np.polyfit(np.log(eps_list), np.log(rems), 1)[0])
    g2 = Grid(40.0, 2048)
    b1, b2 = exact.kernel_direction_values(P0, 0.0, g2.nodes)
    edge = spectral.continuous_spectrum_edge(P0)
    q_rel = 0.0
    for bv in (b1, b2):
        f = Field(g2, bv, periodic=True)
        scale = edge * sobolev_norm_sq(f, 2)
        q_rel = max(q_rel, abs(spectral.quadratic_form(f, P0, 0.0)) / scale)
    ok = 2.9 <= slope <= 3.1 and q_rel <= 1e-10
    emit(capsys, ok, "criterion 8 lyapunov expansion",
         f"cubic remainder exponent {slope:.3f}, kernel Q relative {q_rel:.2e}")


def test_criterion_7_stability_experiment(capsys):
    g = Grid(40.0, 1536)
    dt = 2.5e-4
    T, _ = P0.period()
    cfg = dyn.SolverConfig(g, dt, 1.0,
                           snapshot_stride=int(round(T / 8.0 / dt)))
    eta = 1e-3
    bad = []
    max_amp = 0.0
    max_speed = 0.0
    worst_slope = -math.inf
    for seed in range(10):
        rep = dyn.stability_experiment(P0, "random-band-limited", eta, seed,
                                       50.0, cfg)
        slope, stderr = dyn.secular_slope(rep.times, rep.distances, T)
        max_amp = max(max_amp, rep.amplification)
        max_speed = max(max_speed, rep.modulation_speed / eta)
        worst_slope = max(worst_slope, slope - 2.0 * stderr)
        # one-sided slope test: dealiasing weakly damps the radiation, so a
        # small negative trend is expected; only growth counts against
        ok = (rep.escape_time is None and rep.amplification <= 50.0
              and slope <= 2.0 * stderr
              and rep.modulation_speed / eta <= 1.0)
        if not ok:
            bad.append((seed, rep.escape_time, rep.amplification, slope,
                        stderr, rep.modulation_speed / eta))
    emit(capsys, not bad, "criterion 7 stability experiment",
         f"10 seeds x 50 periods: all captured, max amplification "
         f"{max_amp:.3f}, max speed/eta {max_speed:.2e}, max one-sided slope "
         f"excess {worst_slope:.2e}, bad={bad}")
