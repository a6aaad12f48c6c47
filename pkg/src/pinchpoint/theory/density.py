"""Pinch-point densities at bulk points of the rectangle and hexagon.

Densities are returned up to the non-universal constant C_s^2 and the
cutoff power delta^(2 Theta_s), which cancel when profiles are
normalized by their value at the polygon center (the convention used
for every comparison in this package).  The w-dependence enters
through the half-plane preimage z and the conformal covariance factor
|df/dz|^(-2 Theta_s) of the bulk operator.
"""

from __future__ import annotations

import cmath
import math

from .. import quad, scmap
from ..params import ModelParams
from ..quad import BranchFactor, BranchedIntegrand, ContourSpec, CoupledIntegrand
from .blocks import _cp
from .crossratios import CrossRatios
from .partition import RECT_ONE_PINCH_LOOPS, _cardy_F
from .weights import (
    RECT_ONE_PINCH_EVENTS,
    _rect_g_combination,
    _offset_average,
    hex_one_pp_combo_limit,
    hex_two_pp_weight_limit,
)

RECT_EVENTS = RECT_ONE_PINCH_EVENTS + ("1234",)
HEX_EVENTS = ("12:34:56", "6123:45", "123456")


class Unevaluable(ValueError):
    """The requested point is too near the boundary or a vertex."""


# ---------------------------------------------------------------------------
# rectangle


def density_rect(event: str, ffbc: int, geo: scmap.RectGeometry, w,
                 params: ModelParams) -> float:
    """Un-normalized pinch-point density at an interior rectangle point.

    ``event`` is one of the four one-pinch labels or '1234'; ``ffbc``
    selects independent (1) or mutual (2) wiring of the left/right
    sides, which changes the hypergeometric argument of the
    partition-function denominator and the boundary-loop count.
    """
    if event not in RECT_EVENTS:
        raise ValueError(f"unknown rectangle event {event!r}")
    if ffbc not in (1, 2):
        raise ValueError(f"rectangle ffbc must be 1 or 2, got {ffbc}")
    w = complex(w)
    if not geo.contains(w, margin=1e-9):
        raise Unevaluable(f"{w} is not interior to the rectangle")
    k = params.kappa
    n = params.fugacity_n
    m = geo.modulus_m
    z = scmap.rect_inverse(w, geo)
    zb = z.conjugate()
    jac = abs(scmap.rect_inverse_jacobian(w, geo))
    twoimz = 2.0 * z.imag
    if twoimz <= 0.0:
        raise Unevaluable(f"preimage of {w} collapsed onto the axis")
    denom = n * n * _cardy_F(k, 1.0 - m if ffbc == 1 else m)

    if event == "1234":
        pi_lim = m ** (1.0 - 6.0 / k) * twoimz ** (k / 8.0 - 6.0 / k - 1.0)
        pi_lim *= m ** (8.0 / k - 1.0) * (1.0 - m) ** (2.0 / k)
        pi_lim *= twoimz ** (24.0 / k - 2.0)
        pi_lim *= abs(z * (m - z) * (1.0 - z)) ** (1.0 - 12.0 / k)
        nfact = n + n * n
        theta = params.big_theta[2]
    else:

        def comb(p):
            return _rect_g_combination(event, m, z, zb, p).real

        pi_lim = m ** (1.0 - 6.0 / k) * twoimz ** (k / 8.0 - 1.0)
        pi_lim *= _offset_average(comb, params, include_n1=False)
        nfact = n ** RECT_ONE_PINCH_LOOPS[(event, ffbc)]
        theta = params.big_theta[1]
    cov = jac ** (2.0 * theta)
    return float(
        nfact * cov * (m * (1.0 - m)) ** (6.0 / k - 1.0) * pi_lim / denom
    )


# ---------------------------------------------------------------------------
# hexagon

_I2_CACHE: dict = {}


def hex_i2_integral(ms, kappa: float, rel_tol: float = 1e-8) -> float:
    """I_2 = the double screening integral over (0, m1) x (m2, m3)."""
    key = (tuple(round(float(m), 14) for m in ms), round(float(kappa), 12))
    if key in _I2_CACHE:
        return _I2_CACHE[key]
    m1, m2, m3 = (float(m) for m in ms)
    facs = tuple(
        BranchFactor(p, -4.0 / kappa) for p in (0.0, m1, m2, m3, 1.0)
    )
    f = BranchedIntegrand(facs)
    ci = CoupledIntegrand(f1=f, f2=f, coupling_exponent=8.0 / kappa)
    val = quad.double_integral(
        ci,
        ContourSpec.real_segment(0.0, m1),
        ContourSpec.real_segment(m2, m3),
        rel_tol=rel_tol,
    )
    out = complex(val).real
    _I2_CACHE[key] = out
    return out


def _hex_corner_cov(ms, z: complex, theta: float) -> float:
    """|df/dz|^(-2 Theta) for the 2/3-normalized hexagon map."""
    m1, m2, m3 = ms
    prod = abs(z * (m1 - z) * (m2 - z) * (m3 - z) * (1.0 - z))
    return (27.0 / 8.0 * prod) ** (2.0 * theta / 3.0)


def density_hex(event: str, ffbc: int, geo: scmap.HexGeometry, w,
                params: ModelParams, z: complex | None = None) -> float:
    """Un-normalized pinch-point density at an interior hexagon point.

    Events: '12:34:56' (the measured one-pinch combination, including
    its n^2-weighted partner connectivity), '6123:45' (two-pinch), and
    '123456' (three-pinch).  Only the independent wiring (ffbc = 3) is
    tabulated for the first two; the three-pinch density accepts every
    wiring.  ``z`` may carry a precomputed half-plane preimage of w.
    """
    if event not in HEX_EVENTS:
        raise ValueError(f"unknown hexagon event {event!r}")
    w = complex(w)
    if z is None:
        if not geo.contains(w, margin=1e-9):
            raise Unevaluable(f"{w} is not interior to the hexagon")
        z = scmap.hex_inverse(w, geo)
    z = complex(z)
    if z.imag <= 0.0:
        raise Unevaluable(f"preimage of {w} collapsed onto the axis")
    ms = geo.prevertices
    k = params.kappa
    n = params.fugacity_n
    delta9 = _delta9(ms)
    i2 = hex_i2_integral(ms, k)
    # beta(-4/k,-4/k)^2 * delta9^(-2/k) / I2
    common = quad.beta_recip(k) ** (-2) * delta9 ** (-2.0 / k) / i2

    if event == "12:34:56":
        if ffbc != 3:
            raise ValueError("the one-pinch combination is tabulated for ffbc 3")
        combo = hex_one_pp_combo_limit(ms, z, params)
        val = abs(combo) * _hex_corner_cov(ms, z, params.big_theta[1]) * common
        return float(val)
    if event == "6123:45":
        if ffbc != 3:
            raise ValueError("the two-pinch density is tabulated for ffbc 3")
        wt = hex_two_pp_weight_limit(ms, z, params).real
        val = (n + n * n) / n**3 * wt
        val *= _hex_corner_cov(ms, z, params.big_theta[2]) * common
        return float(val)
    # three-pinch
    if ffbc in (2, 3):
        nsum = (n + 3.0 * n * n + n**3) / n**3
    elif ffbc in (1, 4, 5):
        nsum = (2.0 * n + 2.0 * n * n + n**3) / n**3
    else:
        raise ValueError(f"hexagon ffbc must be 1..5, got {ffbc}")
    m1, m2, m3 = ms
    twoimz = 2.0 * z.imag
    pi_lim = delta9 ** (2.0 / k) * twoimz ** ((16.0 - k) ** 2 / (8.0 * k))
    pi_lim *= abs(z * (m1 - z) * (m2 - z) * (m3 - z) * (1.0 - z)) ** (
        1.0 - 16.0 / k
    )
    val = nsum * pi_lim * _hex_corner_cov(ms, z, params.big_theta[3]) * common
    return float(val)


def _delta9(ms) -> float:
    m1, m2, m3 = ms
    return (
        m1 * m2 * m3 * (m2 - m1) * (m3 - m1) * (m3 - m2)
        * (1.0 - m1) * (1.0 - m2) * (1.0 - m3)
    )
