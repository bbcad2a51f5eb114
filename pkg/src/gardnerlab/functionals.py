"""Conserved functionals: quadrature evaluation and closed-form values.

The quadrature side works on sampled fields; the closed-form side evaluates
the explicit parameter formulas, including the breather values generated from
the soliton ones by the complex substitution sqrt(c) = beta + i alpha
(principal branches throughout).
"""

from __future__ import annotations

import math

import numpy as np

from .fields import Field, derivative, integrate
from .params import BreatherParams, SolitonParams

SQRT2 = math.sqrt(2.0)


def mass(w: Field) -> float:
    """(1/2) int w^2."""
    return 0.5 * integrate(w.map(w.values**2))


def energy(w: Field, mu: float) -> float:
    """(1/2) int w_x^2 - mu int w^3 - (1/4) int w^4."""
    wx = derivative(w, 1).values
    v = w.values
    return integrate(w.map(0.5 * wx**2 - mu * v**3 - 0.25 * v**4))


def f_functional(w: Field, mu: float) -> float:
    """Second-energy functional: all six integral terms."""
    v = w.values
    wx = derivative(w, 1).values
    wxx = derivative(w, 2).values
    integrand = (0.5 * wxx**2
                 - 5.0 * mu * v * wx**2
                 + 2.5 * mu**2 * v**4
                 - 2.5 * v**2 * wx**2
                 + 1.5 * mu * v**5
                 + 0.25 * v**6)
    return integrate(w.map(integrand))


def lyapunov(w: Field, p: BreatherParams) -> float:
    """F + 2 (beta^2 - alpha^2) E + (alpha^2 + beta^2)^2 M."""
    return (f_functional(w, p.mu)
            + 2.0 * (p.beta**2 - p.alpha**2) * energy(w, p.mu)
            + (p.alpha**2 + p.beta**2) ** 2 * mass(w))


def mass_nvbc(u: Field, mu: float) -> float:
    """(1/2) int (u^2 - mu^2) for profiles approaching mu at infinity."""
    return 0.5 * integrate(u.map(u.values**2 - mu**2, ))


def energy_nvbc(u: Field, mu: float) -> float:
    """(1/2) int u_x^2 - (1/4) int (u^4 - mu^4)."""
    ux = derivative(u, 1).values
    return integrate(u.map(0.5 * ux**2 - 0.25 * (u.values**4 - mu**4)))


# ---------------------------------------------------------------------------
# closed forms


def _arc(sqrt_c, mu, continued: bool):
    """arctan(sqrt(c)/(sqrt(2) mu)), principal branch on the real axis.

    With ``continued=True`` the branch arctan(z) - pi/2 = -arctan(1/z) is
    used instead; that continuation is the one whose real part reproduces
    the breather closed forms under sqrt(c) = beta + i alpha.
    """
    z = sqrt_c / (SQRT2 * mu)
    if continued:
        return -np.arctan(1.0 / z)
    return np.arctan(z + 0j) if np.iscomplexobj(np.asarray(z)) else math.atan(z)


def soliton_mass_closed(sqrt_c, mu: float, continued: bool = False):
    """2 sqrt(c) - 2 sqrt(2) mu arctan(sqrt(c)/(sqrt(2) mu)); complex-capable."""
    if mu == 0.0:
        return 2.0 * sqrt_c
    return 2.0 * sqrt_c - 2.0 * SQRT2 * mu * _arc(sqrt_c, mu, continued)


def soliton_energy_closed(sqrt_c, mu: float, continued: bool = False):
    c = sqrt_c * sqrt_c
    if mu == 0.0:
        return -(2.0 / 3.0) * sqrt_c * c
    return (-(2.0 / 3.0) * sqrt_c * c + 4.0 * mu**2 * sqrt_c
            - 4.0 * SQRT2 * mu**3 * _arc(sqrt_c, mu, continued))


def soliton_f_closed(sqrt_c, mu: float, continued: bool = False):
    c = sqrt_c * sqrt_c
    base = (2.0 / 15.0) * sqrt_c * (3.0 * c * c - 10.0 * mu**2 * c + 60.0 * mu**4)
    if mu == 0.0:
        return base
    return base - 8.0 * SQRT2 * mu**5 * _arc(sqrt_c, mu, continued)


def soliton_dmass_dc(c: float, mu: float) -> float:
    """d/dc of the soliton mass: sqrt(c)/(c + 2 mu^2)."""
    return math.sqrt(c) / (c + 2.0 * mu**2)


def _arc_b(p: BreatherParams) -> float:
    return math.atan(2.0 * SQRT2 * p.mu * p.beta / p.delta_disc)


def breather_mass_closed(p: BreatherParams) -> float:
    return 4.0 * p.beta + 2.0 * SQRT2 * p.mu * _arc_b(p)


def breather_energy_closed(p: BreatherParams) -> float:
    gamma = p.phase_speed_2
    return (4.0 / 3.0) * p.beta * gamma + 8.0 * p.beta * p.mu**2 \
        + 4.0 * SQRT2 * p.mu**3 * _arc_b(p)


def breather_f_closed(p: BreatherParams) -> float:
    a, b, mu = p.alpha, p.beta, p.mu
    poly = (4.0 / 15.0) * (3.0 * b * (b**4 - 10.0 * b**2 * a**2 + 5.0 * a**4)
                           - 10.0 * mu**2 * b * (b**2 - 3.0 * a**2 - 6.0 * mu**2))
    return poly + 8.0 * SQRT2 * mu**5 * _arc_b(p)


def breather_lyapunov_closed(p: BreatherParams) -> float:
    """h1 + h2 * 2 sqrt(2) mu arctan(2 sqrt(2) mu beta / Delta)."""
    a, b, mu = p.alpha, p.beta, p.mu
    h1 = (8.0 * b / 15.0) * (4.0 * b**4 + 20.0 * a**2 * b**2
                             + 5.0 * mu**2 * (5.0 * b**2 - 3.0 * a**2 + 6.0 * mu**2))
    h2 = (a**2 + b**2) ** 2 + 4.0 * mu**2 * (b**2 - a**2 + mu**2)
    return h1 + h2 * 2.0 * SQRT2 * mu * _arc_b(p)


def breather_from_soliton(which: str, p: BreatherParams) -> float:
    """2 Re[ soliton value at sqrt(c) = beta + i alpha ] (principal branches)."""
    sc = complex(p.beta, p.alpha)
    fn = {"mass": soliton_mass_closed,
          "energy": soliton_energy_closed,
          "F": soliton_f_closed}[which]
    if p.mu == 0.0:
        return float(2.0 * np.real(fn(sc, 0.0)))
    return float(2.0 * np.real(fn(sc, p.mu, continued=True)))


def dmass_dalpha(p: BreatherParams) -> float:
    d = p.delta_disc
    return -16.0 * p.mu**2 * p.beta * p.alpha / (d * d + 8.0 * p.mu**2 * p.beta**2)


def dmass_dbeta(p: BreatherParams) -> float:
    d = p.delta_disc
    den = d * d + 8.0 * p.mu**2 * p.beta**2
    return 4.0 * (d * d + 2.0 * p.mu**2 * d + 4.0 * p.mu**2 * p.beta**2) / den


def denergy_dalpha(p: BreatherParams) -> float:
    d = p.delta_disc
    den = d * d + 8.0 * p.mu**2 * p.beta**2
    return 8.0 * p.alpha * p.beta * (1.0 - 4.0 * p.mu**4 / den)


def denergy_dbeta(p: BreatherParams) -> float:
    a, b, mu = p.alpha, p.beta, p.mu
    d = p.delta_disc
    den = d * d + 8.0 * mu**2 * b**2
    return 4.0 * (a**2 - b**2) \
        + 8.0 * mu**2 * (d * d + 2.0 * mu**2 * d + 4.0 * mu**2 * b**2) / den


def quadratic_form_scaling_alpha(p: BreatherParams) -> float:
    """Closed value of the quadratic form on the alpha-scaling direction."""
    d = p.delta_disc
    den = d * d + 8.0 * p.mu**2 * p.beta**2
    return 32.0 * p.alpha**2 * p.beta * (1.0 + 2.0 * p.mu**2 * d / den)


def quadratic_form_scaling_beta(p: BreatherParams) -> float:
    """Closed value of the quadratic form on the beta-scaling direction."""
    a, b, mu = p.alpha, p.beta, p.mu
    d = p.delta_disc
    den = d * d + 8.0 * mu**2 * b**2
    return -16.0 * b * ((a**2 - b**2)
                        + (a**2 + b**2 + 2.0 * mu**2)
                        * (d * d + 2.0 * mu**2 * d + 4.0 * mu**2 * b**2) / den)


def b_zero_pairing(p: BreatherParams) -> float:
    """Closed value of <B0, B>."""
    a, b, mu = p.alpha, p.beta, p.mu
    d = p.delta_disc
    den = d * d + 8.0 * mu**2 * b**2
    return (d * d + 2.0 * mu**2 * d) / (2.0 * b * (a**2 + b**2) * den)


_BREATHER_FORMS = {
    "breather-mass": breather_mass_closed,
    "breather-energy": breather_energy_closed,
    "breather-F": breather_f_closed,
    "breather-H": breather_lyapunov_closed,
    "dM/dalpha": dmass_dalpha,
    "dM/dbeta": dmass_dbeta,
    "dE/dalpha": denergy_dalpha,
    "dE/dbeta": denergy_dbeta,
    "Q-scaling-alpha": quadratic_form_scaling_alpha,
    "Q-scaling-beta": quadratic_form_scaling_beta,
    "B0-pairing": b_zero_pairing,
}

_SOLITON_FORMS = {
    "soliton-mass": lambda sp: float(soliton_mass_closed(math.sqrt(sp.c), sp.mu)),
    "soliton-energy": lambda sp: float(soliton_energy_closed(math.sqrt(sp.c), sp.mu)),
    "soliton-F": lambda sp: float(soliton_f_closed(math.sqrt(sp.c), sp.mu)),
    "soliton-dMdc": lambda sp: soliton_dmass_dc(sp.c, sp.mu),
}


def closed_form(which: str, p) -> float:
    """Evaluate a named closed-form quantity for breather or soliton params."""
    if which in _BREATHER_FORMS:
        if not isinstance(p, BreatherParams):
            raise TypeError(f"{which!r} needs BreatherParams")
        return _BREATHER_FORMS[which](p)
    if which in _SOLITON_FORMS:
        if not isinstance(p, SolitonParams):
            raise TypeError(f"{which!r} needs SolitonParams")
        return _SOLITON_FORMS[which](p)
    raise KeyError(f"unknown closed-form quantity {which!r}")


CLOSED_FORM_IDS = tuple(list(_BREATHER_FORMS) + list(_SOLITON_FORMS))
