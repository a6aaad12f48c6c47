"""Conformal blocks: the rectangle G_1..G_4 and hexagon H_1..H_6.

Each block is an algebraic prefactor in the cross-ratios times a
Lauricella F_D whose arguments are Mobius images of the cross-ratios,
equal to the corresponding screening integral (script-I or script-K)
dressed with the covariant factors.

Normalization: converting a screening integral over its interval to
the Euler form always produces the same constant
B(1-4/k, 1-4/k)/B(-4/k, -4/k) = 2/(8-k), which multiplies every
rectangle block here (the G_i are exact).  The hexagon prefactors are
stated only up to proportionality, so each K'_i is calibrated once per
kappa against direct quadrature at a reference configuration; the
calibration is configuration-independent, which the block-equivalence
suite verifies.

All formulas are written in "holomorphic form": |mu - nu| enters as
(mu - nu)/i and |z - x|^2 as the product of the conjugate pair, so the
blocks extend to independent (mu, nu) near the physical slice for the
finite-difference PDE checks.
"""

from __future__ import annotations

import numpy as np

from .. import quad
from ..specfun import FdArgs, lauricella_fd

_FD_TOL = 1e-11


def _cp(w, p):
    """Principal power of a quantity that is positive on the physical slice."""
    return complex(w) ** p


def _imdiff(mu, nu):
    return (complex(mu) - complex(nu)) / 1j


def _pair(a, mu, nu):
    return (complex(mu) - a) * (complex(nu) - a)


def _euler_const(kappa: float) -> float:
    # B(1-4/k, 1-4/k) / B(-4/k, -4/k)
    return 2.0 / (8.0 - kappa)


# ---------------------------------------------------------------------------
# rectangle blocks


def rect_block_G(i: int, eta: float, mu: complex, nu: complex, kappa: float,
                 rel_tol: float = _FD_TOL) -> complex:
    """G_i(eta, mu, nu), i = 1..4, via the Lauricella representation."""
    k4, k8 = 4.0 / kappa, 8.0 / kappa
    a, c = 1.0 - k4, 2.0 - k8
    bs = (k4, 1.0 - k8, 1.0 - k8)
    e_half = 0.5 - k4  # exponent of the conjugate-pair products
    pairs = _pair(0.0, mu, nu) * _pair(eta, mu, nu) * _pair(1.0, mu, nu)
    if i in (1, 4):
        pref = _cp(eta * _imdiff(mu, nu), k8 - 1.0) * _cp(1.0 - eta, 2.0 / kappa)
        pref *= _cp(pairs, e_half)
        x = (1.0 - eta, 1.0 - mu, 1.0 - nu) if i == 1 else (eta, mu, nu)
    elif i == 2:
        pref = _cp(_pair(0.0, mu, nu) * _imdiff(mu, nu) ** 2, k4 - 0.5)
        pref *= _cp(1.0 - eta, 2.0 / kappa)
        pref *= _cp(_pair(eta, mu, nu) * _pair(1.0, mu, nu), e_half)
        x = (eta, eta / mu, eta / nu)
    elif i == 3:
        pref = _cp(eta * eta * _pair(1.0, mu, nu) * _imdiff(mu, nu) ** 2, k4 - 0.5)
        pref *= _cp(_pair(0.0, mu, nu) * _pair(eta, mu, nu), e_half)
        pref *= _cp(1.0 - eta, 1.0 - 6.0 / kappa)
        x = (1.0 - eta, (1.0 - eta) / (1.0 - mu), (1.0 - eta) / (1.0 - nu))
    else:
        raise ValueError(f"G index must be 1..4, got {i}")
    fd = lauricella_fd(FdArgs(a=a, b=bs, c=c, x=x), rel_tol=rel_tol)
    return _euler_const(kappa) * pref * fd


def _rect_limit_integrand(eta, mu, kappa) -> quad.BranchedIntegrand:
    """Integrand of the script-I family at the limit configuration
    (x1..x4) = (0, eta, 1, inf), z = mu."""
    g = 8.0 / kappa - 1.0
    mu = complex(mu)
    return quad.BranchedIntegrand(
        (
            quad.BranchFactor(0.0, -4.0 / kappa),
            quad.BranchFactor(float(eta), -4.0 / kappa),
            quad.BranchFactor(1.0, -4.0 / kappa),
            quad.BranchFactor(mu, g),
            quad.BranchFactor(mu.conjugate(), g),
        )
    )


def rect_script_I_limit(i: int, eta, mu, kappa, rel_tol: float = 1e-10) -> complex:
    """Direct quadrature of script-I_i at (0, eta, 1, inf), i = 1..4.

    Intervals: i=1 over (-inf, 0), i=2 over (0, eta), i=3 over (eta, 1),
    i=4 over (1, +inf); normalized by 1/beta(-4/k, -4/k).
    """
    f = _rect_limit_integrand(eta, mu, kappa)
    if i == 2:
        val = quad.integrate_singular_segment(f, 0.0, float(eta), rel_tol=rel_tol)
    elif i == 3:
        val = quad.integrate_singular_segment(f, float(eta), 1.0, rel_tol=rel_tol)
    elif i == 4:
        val = quad.integrate_one_sided_tail(f, 1.0, +1.0, rel_tol=rel_tol)
    elif i == 1:
        val = quad.integrate_one_sided_tail(f, 0.0, -1.0, rel_tol=rel_tol)
    else:
        raise ValueError("script-I limit index must be 1..4")
    return quad.beta_recip(kappa) * val


def rect_block_G_direct(i: int, eta, mu, kappa, rel_tol: float = 1e-10) -> complex:
    """G_i from direct quadrature of its defining screening integral."""
    nu = complex(mu).conjugate()
    jp = _cp(_imdiff(mu, nu), 8.0 / kappa - 1.0)
    jp *= _cp(eta * (1.0 - eta), 2.0 / kappa) * _cp(eta, 6.0 / kappa - 1.0)
    jp *= _cp(
        _pair(0.0, mu, nu) * _pair(eta, mu, nu) * _pair(1.0, mu, nu),
        (1.0 - 8.0 / kappa) / 2.0,
    )
    return jp * rect_script_I_limit(i, eta, mu, kappa, rel_tol=rel_tol)


# ---------------------------------------------------------------------------
# hexagon blocks

_HEX_REF = (0.3, 0.5, 0.7, 0.45 + 0.35j)  # calibration configuration
_CAL_CACHE: dict = {}


def _hex_fd_params(kappa):
    k4 = 4.0 / kappa
    return dict(
        a=1.0 - k4,
        b=(k4, k4, k4, 1.0 - 12.0 / kappa, 1.0 - 12.0 / kappa),
        c=2.0 - 8.0 / kappa,
    )


def _hex_kprime_fd(i, eta, tau, sigma, mu, nu, kappa, rel_tol=_FD_TOL):
    """Algebraic prefactor times F_D for K'_i (no calibration constant)."""
    k4, k8, k12 = 4.0 / kappa, 8.0 / kappa, 12.0 / kappa
    if i == 1:
        pref = 1.0 + 0.0j
        x = (1.0 - eta, 1.0 - tau, 1.0 - sigma, 1.0 - mu, 1.0 - nu)
    elif i == 2:
        pref = _cp(eta, 1.0 - k8) * _cp(tau, -k4) * _cp(sigma, -k4)
        pref *= _cp(_pair(0.0, mu, nu), k12 - 1.0)
        x = (eta, eta / tau, eta / sigma, eta / mu, eta / nu)
    elif i == 3:
        pref = _cp(eta, 1.0 - k8) * _cp(tau, k4 - 1.0) * _cp(tau - eta, 1.0 - k8)
        pref *= _cp(sigma - eta, -k4) * _cp(1.0 - eta, -k4)
        pref *= _cp(_pair(eta, mu, nu), k12 - 1.0)
        x = (
            1.0 - eta / tau,
            sigma * (tau - eta) / (tau * (sigma - eta)),
            (tau - eta) / (tau * (1.0 - eta)),
            mu * (tau - eta) / (tau * (mu - eta)),
            nu * (tau - eta) / (tau * (nu - eta)),
        )
    elif i == 4:
        pref = _cp(tau, -k4) * _cp(tau - eta, 1.0 - k8) * _cp(sigma - eta, k4 - 1.0)
        pref *= _cp(sigma - tau, 1.0 - k8) * _cp(1.0 - tau, -k4)
        pref *= _cp(_pair(tau, mu, nu), k12 - 1.0)
        x = (
            (sigma - tau) / (sigma - eta),
            eta * (sigma - tau) / (tau * (sigma - eta)),
            (1.0 - eta) * (sigma - tau) / ((1.0 - tau) * (sigma - eta)),
            (mu - eta) * (sigma - tau) / ((mu - tau) * (sigma - eta)),
            (nu - eta) * (sigma - tau) / ((nu - tau) * (sigma - eta)),
        )
    elif i == 5:
        pref = _cp(1.0 - eta, -k4) * _cp(1.0 - tau, -k4) * _cp(1.0 - sigma, 1.0 - k8)
        pref *= _cp(_pair(1.0, mu, nu), k12 - 1.0)
        x = (
            1.0 - sigma,
            (1.0 - sigma) / (1.0 - eta),
            (1.0 - sigma) / (1.0 - tau),
            (1.0 - sigma) / (1.0 - mu),
            (1.0 - sigma) / (1.0 - nu),
        )
    elif i == 6:
        pref = 1.0 + 0.0j
        x = (eta, tau, sigma, mu, nu)
    else:
        raise ValueError(f"K' index must be 1..6, got {i}")
    fd = lauricella_fd(FdArgs(x=x, **_hex_fd_params(kappa)), rel_tol=rel_tol)
    return pref * fd


def _hex_limit_integrand(eta, tau, sigma, mu, kappa) -> quad.BranchedIntegrand:
    g = 12.0 / kappa - 1.0
    mu = complex(mu)
    facs = [
        quad.BranchFactor(float(p), -4.0 / kappa)
        for p in (0.0, eta, tau, sigma, 1.0)
    ]
    facs += [quad.BranchFactor(mu, g), quad.BranchFactor(mu.conjugate(), g)]
    return quad.BranchedIntegrand(tuple(facs))


def hex_script_K_limit(i, eta, tau, sigma, mu, kappa, rel_tol=1e-10) -> complex:
    """Direct quadrature of K'_i at (0, eta, tau, sigma, 1, inf), i = 1..6."""
    f = _hex_limit_integrand(eta, tau, sigma, mu, kappa)
    pts = [0.0, float(eta), float(tau), float(sigma), 1.0]
    if i == 1:
        val = quad.integrate_one_sided_tail(f, 0.0, -1.0, rel_tol=rel_tol)
    elif i == 6:
        val = quad.integrate_one_sided_tail(f, 1.0, +1.0, rel_tol=rel_tol)
    elif i in (2, 3, 4, 5):
        val = quad.integrate_singular_segment(f, pts[i - 2], pts[i - 1], rel_tol=rel_tol)
    else:
        raise ValueError("K' index must be 1..6")
    return quad.beta_recip(kappa) * val


def hex_block_calibration(kappa: float) -> tuple:
    """Per-kappa constants A_i with K'_i = A_i * prefactor_i * F_D."""
    key = round(float(kappa), 12)
    if key in _CAL_CACHE:
        return _CAL_CACHE[key]
    eta, tau, sigma, mu = _HEX_REF
    consts = []
    for i in range(1, 7):
        direct = hex_script_K_limit(i, eta, tau, sigma, mu, kappa)
        fd = _hex_kprime_fd(i, eta, tau, sigma, mu, np.conj(mu), kappa)
        consts.append(complex(direct) / complex(fd))
    out = tuple(consts)
    _CAL_CACHE[key] = out
    return out


def hex_block_H(i, eta, tau, sigma, mu, nu, kappa, rel_tol=_FD_TOL) -> complex:
    """H_i = (covariant dressing) x K'_i, the hexagon two-pinch block."""
    cal = hex_block_calibration(kappa)
    kp = cal[i - 1] * _hex_kprime_fd(i, eta, tau, sigma, mu, nu, kappa, rel_tol)
    return _hex_H_dressing(eta, tau, sigma, mu, nu, kappa) * kp


def _hex_H_dressing(eta, tau, sigma, mu, nu, kappa) -> complex:
    k8 = 8.0 / kappa
    dress = _cp(eta * (sigma - tau), k8 - 1.0)
    dress *= _cp(
        tau * sigma * (tau - eta) * (sigma - eta) * (1.0 - eta) * (1.0 - tau)
        * (1.0 - sigma),
        2.0 / kappa,
    )
    dress *= _cp(_imdiff(mu, nu), 24.0 / kappa - 2.0)
    pairs = (
        _pair(0.0, mu, nu)
        * _pair(eta, mu, nu)
        * _pair(tau, mu, nu)
        * _pair(sigma, mu, nu)
        * _pair(1.0, mu, nu)
    )
    return dress * _cp(pairs, 0.5 - 6.0 / kappa)


def hex_block_H_direct(i, eta, tau, sigma, mu, kappa, rel_tol=1e-10) -> complex:
    """H_i from direct quadrature (oracle route, physical slice only)."""
    nu = complex(mu).conjugate()
    return _hex_H_dressing(eta, tau, sigma, mu, nu, kappa) * hex_script_K_limit(
        i, eta, tau, sigma, mu, kappa, rel_tol=rel_tol
    )
