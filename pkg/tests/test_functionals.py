"""Functionals: frozen oracles, closed forms vs quadrature, and the
complex-substitution bridge from soliton to breather values."""

import math

import numpy as np
import pytest

from gardnerlab import exact, functionals as fn
from gardnerlab.fields import DEFAULT_GRID, Field
from gardnerlab.params import BreatherParams, SolitonParams

P = BreatherParams(1.0, 1.0, 0.5)


def breather_field(p, t=0.0, grid=DEFAULT_GRID):
    return Field(grid, exact.gardner_breather_values(p, t, grid.nodes),
                 periodic=True)


# [DERIVED] quadrature oracles at alpha = beta = 1, mu = 0.5 (frozen from an
# independent high-resolution evaluation)
ORACLES = {
    "breather-mass": 5.069102192960684,
    "breather-energy": 5.201217763147003,
    "breather-F": -0.5993911184031298,
    "breather-H": 19.677017653439606,
}


def test_quadrature_oracles():
    w = breather_field(P)
    assert fn.mass(w) == pytest.approx(ORACLES["breather-mass"], rel=1e-10)
    assert fn.energy(w, P.mu) == pytest.approx(ORACLES["breather-energy"], rel=1e-10)
    assert fn.f_functional(w, P.mu) == pytest.approx(ORACLES["breather-F"], rel=1e-9)
    assert fn.lyapunov(w, P) == pytest.approx(ORACLES["breather-H"], rel=1e-10)


def test_closed_forms_match_oracles():
    for which, ref in ORACLES.items():
        assert fn.closed_form(which, P) == pytest.approx(ref, rel=1e-10)


def test_closed_vs_quadrature_random_point():
    p = BreatherParams(1.3, 0.7, 0.55)
    w = breather_field(p)
    assert fn.mass(w) == pytest.approx(fn.breather_mass_closed(p), rel=1e-9)
    assert fn.energy(w, p.mu) == pytest.approx(fn.breather_energy_closed(p), rel=1e-9)
    assert fn.f_functional(w, p.mu) == pytest.approx(fn.breather_f_closed(p), rel=1e-8)
    assert fn.lyapunov(w, p) == pytest.approx(fn.breather_lyapunov_closed(p), rel=1e-9)


def test_invariance_in_time_and_shifts():
    T, _ = P.period()
    base = fn.lyapunov(breather_field(P), P)
    for t in (T / 3.0, T / 2.0):
        assert fn.lyapunov(breather_field(P, t), P) == pytest.approx(base, rel=1e-10)
    q = P.with_shifts(0.8, -0.4)
    assert fn.lyapunov(breather_field(q), q) == pytest.approx(base, rel=1e-10)


def test_soliton_closed_forms():
    # [DERIVED] oracles at c = 1, mu = 0.5
    sp = SolitonParams(1.0, 0.5)
    assert fn.closed_form("soliton-mass", sp) == pytest.approx(
        0.64897828228792, rel=1e-10)
    assert fn.closed_form("soliton-energy", sp) == pytest.approx(
        -0.34217752552270664, rel=1e-10)
    assert fn.closed_form("soliton-F", sp) == pytest.approx(
        0.2289112372386467, rel=1e-10)


def test_soliton_closed_vs_quadrature():
    g = DEFAULT_GRID
    for sp in (SolitonParams(1.0, 0.5), SolitonParams(2.0, 0.1),
               SolitonParams(0.5, 0.0)):
        w = Field(g, exact.soliton_values(sp, g.nodes), periodic=True)
        assert fn.mass(w) == pytest.approx(
            fn.closed_form("soliton-mass", sp), rel=1e-9)
        assert fn.energy(w, sp.mu) == pytest.approx(
            fn.closed_form("soliton-energy", sp), rel=1e-9)
        assert fn.f_functional(w, sp.mu) == pytest.approx(
            fn.closed_form("soliton-F", sp), rel=1e-8)


def test_soliton_dmass_dc():
    sp = SolitonParams(1.2, 0.35)
    h = 1e-6
    fd = (fn.soliton_mass_closed(math.sqrt(sp.c + h), sp.mu)
          - fn.soliton_mass_closed(math.sqrt(sp.c - h), sp.mu)) / (2 * h)
    assert fn.soliton_dmass_dc(sp.c, sp.mu) == pytest.approx(fd, rel=1e-8)


def test_breather_from_soliton_substitution():
    """sqrt(c) = beta + i alpha with the continued arctan branch reproduces
    the breather closed forms as twice the real part."""
    for p in (P, BreatherParams(0.8, 1.4, 0.6), BreatherParams(2.0, 0.5, 0.2),
              BreatherParams(1.0, 1.0, 0.0)):
        assert fn.breather_from_soliton("mass", p) == pytest.approx(
            fn.breather_mass_closed(p), rel=1e-12)
        assert fn.breather_from_soliton("energy", p) == pytest.approx(
            fn.breather_energy_closed(p), rel=1e-12)
        assert fn.breather_from_soliton("F", p) == pytest.approx(
            fn.breather_f_closed(p), rel=1e-11, abs=1e-12)


def test_principal_branch_fails_visibly():
    """Without the branch continuation the substitution is off by a fixed
    2 sqrt(2) pi mu; this guards the documented branch choice."""
    sc = complex(P.beta, P.alpha)
    wrong = 2.0 * np.real(fn.soliton_mass_closed(sc, P.mu, continued=False))
    right = fn.breather_mass_closed(P)
    assert abs(wrong - right) == pytest.approx(
        2.0 * math.sqrt(2.0) * math.pi * P.mu, rel=1e-10)


def test_mass_derivative_closed_forms_vs_fd():
    p = BreatherParams(1.1, 0.9, 0.45)
    h = 1e-6
    fd_a = (fn.breather_mass_closed(BreatherParams(p.alpha + h, p.beta, p.mu))
            - fn.breather_mass_closed(BreatherParams(p.alpha - h, p.beta, p.mu))) / (2 * h)
    fd_b = (fn.breather_mass_closed(BreatherParams(p.alpha, p.beta + h, p.mu))
            - fn.breather_mass_closed(BreatherParams(p.alpha, p.beta - h, p.mu))) / (2 * h)
    assert fn.dmass_dalpha(p) == pytest.approx(fd_a, rel=1e-8)
    assert fn.dmass_dbeta(p) == pytest.approx(fd_b, rel=1e-8)
    fd_ea = (fn.breather_energy_closed(BreatherParams(p.alpha + h, p.beta, p.mu))
             - fn.breather_energy_closed(BreatherParams(p.alpha - h, p.beta, p.mu))) / (2 * h)
    fd_eb = (fn.breather_energy_closed(BreatherParams(p.alpha, p.beta + h, p.mu))
             - fn.breather_energy_closed(BreatherParams(p.alpha, p.beta - h, p.mu))) / (2 * h)
    assert fn.denergy_dalpha(p) == pytest.approx(fd_ea, rel=1e-8)
    assert fn.denergy_dbeta(p) == pytest.approx(fd_eb, rel=1e-8)


def test_rational_oracles():
    # [DERIVED] exact rational values at alpha = beta = 1, mu = 0.5
    assert fn.dmass_dalpha(P) == pytest.approx(-16.0 / 17.0, rel=1e-13)
    assert fn.dmass_dbeta(P) == pytest.approx(64.0 / 17.0, rel=1e-13)
    assert fn.quadratic_form_scaling_alpha(P) == pytest.approx(640.0 / 17.0, rel=1e-13)
    assert fn.quadratic_form_scaling_beta(P) == pytest.approx(-640.0 / 17.0, rel=1e-13)
    assert fn.b_zero_pairing(P) == pytest.approx(3.0 / 17.0, rel=1e-13)


def test_nvbc_functionals():
    g = DEFAULT_GRID
    u = Field(g, exact.mkdv_nvbc_values(P, 0.0, g.nodes), periodic=True)
    # [PAPER] background-profile mass is 4 beta (independent of mu)
    assert fn.mass_nvbc(u, P.mu) == pytest.approx(4.0 * P.beta, rel=1e-9)
    e = fn.energy_nvbc(u, P.mu)
    assert np.isfinite(e)


def test_closed_form_dispatch_errors():
    with pytest.raises(KeyError):
        fn.closed_form("nope", P)
    with pytest.raises(TypeError):
        fn.closed_form("breather-mass", SolitonParams(1.0, 0.1))
