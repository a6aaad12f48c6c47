"""Half-plane pinch-point weights.

The s = N weights are algebraic; the one-pinch rectangle weights are
linear combinations of the G blocks, the two-pinch hexagon weights of
the H blocks, and the measured hexagon one-pinch combination is a
double contour integral.  All weights are written in holomorphic form
(zbar an independent variable, equal to conj(z) on the physical slice)
so the finite-difference PDE verifiers can displace z and zbar
separately.

Removable singularities: the block combinations carry denominators
n^2 - 4 and (hexagon) n^2 - 1 whose zeros inside (4, 8) are removable;
near them (|den| < 1e-6) the weight is evaluated at kappa +- 1e-4 and
averaged, which cancels the leading linear term of the offset.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .. import quad
from ..params import ModelParams, from_kappa
from .blocks import hex_block_H, rect_block_G, _cp, _imdiff, _pair
from .crossratios import CrossRatios

RECT_ONE_PINCH_EVENTS = ("12:34", "23:41", "34:12", "41:23")
HEX_TWO_PINCH_EVENTS = (
    "6123:45",
    "1234:56",
    "2345:61",
    "3456:12",
    "4561:23",
    "5612:34",
)


def weight_pi12(x1, x2, z, params: ModelParams, zbar=None) -> complex:
    """One-pinch weight for a single arc joining x1 and x2 through z."""
    k = params.kappa
    z = complex(z)
    zbar = z.conjugate() if zbar is None else complex(zbar)
    val = _cp(x2 - x1, 2.0 / k)
    val *= _cp((z - zbar) / 1j, (8.0 - k) ** 2 / (8.0 * k))
    val *= _cp((x1 - z) * (x1 - zbar), (1.0 - 8.0 / k) / 2.0)
    val *= _cp((x2 - z) * (x2 - zbar), (1.0 - 8.0 / k) / 2.0)
    return val


def weight_pi12_halfplane_limit(z, params: ModelParams) -> float:
    """lim x2^(2 theta1) Pi_12(0, x2; z): |z - zbar|^(k/8-1) sin(arg z)^(8/k-1)."""
    z = complex(z)
    k = params.kappa
    return (2.0 * z.imag) ** (k / 8.0 - 1.0) * math.sin(cmath.phase(z)) ** (
        8.0 / k - 1.0
    )


def weight_full_polygon(N: int, xs, z, params: ModelParams, zbar=None) -> complex:
    """The algebraic s = N pinch-point weight for the 2N-gon."""
    if not 1 <= N <= 3:
        raise ValueError("exposed for N = 1..3")
    xs = [float(x) for x in xs]
    if len(xs) != 2 * N:
        raise ValueError(f"need {2 * N} boundary points")
    k = params.kappa
    z = complex(z)
    zbar = z.conjugate() if zbar is None else complex(zbar)
    val = _cp((z - zbar) / 1j, (4.0 * N + 4.0 - k) ** 2 / (8.0 * k))
    for i in range(2 * N):
        for j in range(i + 1, 2 * N):
            val *= _cp(xs[j] - xs[i], 2.0 / k)
        val *= _cp((z - xs[i]) * (zbar - xs[i]), (1.0 - 4.0 * (N + 1.0) / k) / 2.0)
    return val


def _offset_needed(params: ModelParams, include_n1: bool) -> bool:
    n2 = params.fugacity_n**2
    if abs(n2 - 4.0) < 1e-6:
        return True
    return include_n1 and abs(n2 - 1.0) < 1e-6


def _offset_average(fn, params: ModelParams, include_n1: bool):
    """Evaluate fn(params) or average over kappa +- dk at removable zeros."""
    if not _offset_needed(params, include_n1):
        return fn(params)
    dk = 1e-4
    lo = fn(from_kappa(params.kappa - dk))
    hi = fn(from_kappa(params.kappa + dk))
    return 0.5 * (lo + hi)


def _rect_g_combination(event: str, eta, mu, nu, params: ModelParams) -> complex:
    i, j = int(event[0]), int(event[1])
    k_, l_ = int(event[3]), int(event[4])
    n = params.fugacity_n
    G = {
        m: rect_block_G(m, eta, mu, nu, params.kappa) for m in (i, j, k_, l_)
    }
    num = 2.0 * G[j] + (n * n - 2.0) * G[l_] - n * G[i] - n * G[k_]
    return num / (n * n - 4.0)


def rect_one_pp_weight(event: str, xs, z, params: ModelParams, zbar=None) -> complex:
    """Pi_{ij:kl}: arc through z joins x_i, x_j; the other joins x_k, x_l."""
    if event not in RECT_ONE_PINCH_EVENTS:
        raise ValueError(f"unknown rectangle one-pinch event {event!r}")
    xs = [float(x) for x in xs]
    z = complex(z)
    zb = z.conjugate() if zbar is None else complex(zbar)
    r = CrossRatios.from_points(xs, z, zb)
    k = params.kappa

    def weight_at(p: ModelParams) -> complex:
        comb = _rect_g_combination(event, r.eta, r.mu, r.nu, p)
        pref = _cp((xs[1] - xs[0]) * (xs[3] - xs[2]), 1.0 - 6.0 / p.kappa)
        pref *= _cp((z - zb) / 1j, p.kappa / 8.0 - 1.0)
        return pref * comb

    return _offset_average(weight_at, params, include_n1=False)


def rect_one_pp_weight_contour(xs, z, params: ModelParams,
                               rel_tol: float = 1e-9) -> complex:
    """Pi_{12:34} assembled from the screening-contour route.

    Uses the decomposition over I_5 and I_6 with the coefficient
    A = -i n / sqrt(4 - n^2), continued off the real axis; serves as the
    independent cross-evaluation of the polyline quadrature against the
    Lauricella route.
    """
    xs = [float(x) for x in xs]
    z = complex(z)
    k, n = params.kappa, params.fugacity_n
    I5 = quad.rect_I(5, xs, z, k, rel_tol=rel_tol)
    I6 = quad.rect_I(6, xs, z, k, rel_tol=rel_tol)
    A = -1j * n / math.sqrt(4.0 - n * n)
    comb = A * (2j * math.sin(4.0 * math.pi / k) * I5
                + cmath.exp(4j * math.pi / k) * I6)
    # the orientation table keeps the I5/I6 continuations on the sheet
    # where the bracket is real up to the modulus convention below, so
    # the |z - zbar| power enters as a plain magnitude
    p = k / 8.0 + 8.0 / k - 2.0
    pref = (2.0 * z.imag) ** p
    for a in range(4):
        for b in range(a + 1, 4):
            pref *= _cp(xs[b] - xs[a], 2.0 / k)
        pref *= _cp((z - xs[a]) * (z.conjugate() - xs[a]), 0.5 - 4.0 / k)
    return pref * comb


def _hex_h_combination(event: str, r: CrossRatios, params: ModelParams) -> complex:
    d = event.replace(":", "")
    i, j, k_, l_, m_, n_ = (int(c) for c in d)
    n = params.fugacity_n
    H = {
        q: hex_block_H(q, r.eta, r.tau, r.sigma, r.mu, r.nu, params.kappa)
        for q in {i, j, k_, l_, m_, n_}
    }
    num = (
        n * (2.0 - n * n) * (H[i] + H[m_])
        + n * n * H[j]
        - 2.0 * n * H[k_]
        + n * n * H[l_]
        + n * n * (n * n - 3.0) * H[n_]
    )
    return num / ((n * n - 4.0) * (n * n - 1.0))


def hex_two_pp_weight(event: str, xs, z, params: ModelParams, zbar=None) -> complex:
    """Pi_{ijkl:mn}: two arcs through z join (x_i,x_j) and (x_k,x_l)."""
    if event not in HEX_TWO_PINCH_EVENTS:
        raise ValueError(f"unknown hexagon two-pinch event {event!r}")
    xs = [float(x) for x in xs]
    z = complex(z)
    zb = z.conjugate() if zbar is None else complex(zbar)
    r = CrossRatios.from_points(xs, z, zb)

    def weight_at(p: ModelParams) -> complex:
        comb = _hex_h_combination(event, r, p)
        pref = _cp(
            (xs[1] - xs[0]) * (xs[3] - xs[2]) * (xs[5] - xs[4]),
            1.0 - 6.0 / p.kappa,
        )
        pref *= _cp((z - zb) / 1j, p.kappa / 8.0 - 6.0 / p.kappa - 1.0)
        return pref * comb

    return _offset_average(weight_at, params, include_n1=True)


def hex_two_pp_weight_limit(ms, z, params: ModelParams, zbar=None) -> complex:
    """lim x6^(6/k-1) Pi_{6123:45} at (0, m1, m2, m3, 1, x6 -> inf).

    This is the combination entering the hexagon two-pinch density; the
    cross-ratios reduce to (m1, m2, m3, z, zbar).
    """
    m1, m2, m3 = (float(m) for m in ms)
    z = complex(z)
    zb = z.conjugate() if zbar is None else complex(zbar)
    r = CrossRatios(etas=(m1, m2, m3), mu=z, nu=zb)

    def weight_at(p: ModelParams) -> complex:
        comb = _hex_h_combination("6123:45", r, p)
        pref = _cp(m1 * (m3 - m2), 1.0 - 6.0 / p.kappa)
        pref *= _cp((z - zb) / 1j, p.kappa / 8.0 - 6.0 / p.kappa - 1.0)
        return pref * comb

    return _offset_average(weight_at, params, include_n1=True)


# ---------------------------------------------------------------------------
# hexagon one-pinch combination (double contour integral)


def _hex_combo_factors(pts, z, kappa):
    g = 8.0 / kappa - 1.0
    z = complex(z)
    f1 = [quad.BranchFactor(float(x), -4.0 / kappa) for x in pts]
    f1 += [quad.BranchFactor(z, g), quad.BranchFactor(z.conjugate(), g)]
    return quad.BranchedIntegrand(tuple(f1))


def hex_one_pp_double_integral(pts, z, kappa, crossing, u2_interval,
                               rel_tol=1e-7) -> complex:
    """The inner double integral: u1 from zbar to z crossing ``crossing``,
    u2 over ``u2_interval``, coupling (u2 - u1)^(8/kappa)."""
    f = _hex_combo_factors(pts, z, kappa)
    ci = quad.CoupledIntegrand(f1=f, f2=f, coupling_exponent=8.0 / kappa)
    outer = quad.ContourSpec.conjugate_polyline(z, *crossing)
    inner = quad.ContourSpec.real_segment(*u2_interval)
    return quad.double_integral(ci, outer, inner, rel_tol=rel_tol)


def hex_one_pp_combo(xs, z, params: ModelParams, crossing_right: bool = False,
                     rel_tol: float = 1e-7) -> complex:
    """Pi_{12:34:56} + n Pi_{12:36:45} for six finite boundary points.

    The u1 contour crosses (x3, x4), or (x5, x6) when ``crossing_right``
    (equivalent by the loop identity); u2 runs over [x4, x5].
    """
    xs = [float(x) for x in xs]
    z = complex(z)
    k, n = params.kappa, params.fugacity_n
    crossing = (xs[4], xs[5]) if crossing_right else (xs[2], xs[3])
    D = hex_one_pp_double_integral(xs, z, k, crossing, (xs[3], xs[4]),
                                   rel_tol=rel_tol)
    pref = n / (1j * math.sqrt(4.0 - n * n) * _beta4(k) ** 2)
    pref *= _cp((z - z.conjugate()) / 1j, k / 8.0 + 8.0 / k - 2.0)
    for a in range(6):
        for b in range(a + 1, 6):
            pref *= _cp(xs[b] - xs[a], 2.0 / k)
        pref *= _cp((z - xs[a]) * (z.conjugate() - xs[a]), 0.5 - 4.0 / k)
    return pref * D


def hex_one_pp_combo_limit(ms, z, params: ModelParams, crossing_right=False,
                           rel_tol: float = 1e-7) -> complex:
    """The x6 -> infinity limit of the one-pinch combination.

    Equals n (4-n^2)^(-1/2) |z - zbar|^(k/8+8/k-2) Delta^(2/k)
    |z (m1-z)(m2-z)(m3-z)(1-z)|^(1-8/k) |I1| / beta(-4/k,-4/k)^2 with I1
    the double integral over the five remaining branch points.
    """
    m1, m2, m3 = (float(m) for m in ms)
    z = complex(z)
    k, n = params.kappa, params.fugacity_n
    pts = (0.0, m1, m2, m3, 1.0)
    crossing = (1.0, 1.0 + 4.0 * max(1.0, abs(z))) if crossing_right else (m2, m3)
    D = hex_one_pp_double_integral(pts, z, k, crossing, (m3, 1.0),
                                   rel_tol=rel_tol)
    pref = n / (1j * math.sqrt(4.0 - n * n) * _beta4(k) ** 2)
    pref *= _cp((z - z.conjugate()) / 1j, k / 8.0 + 8.0 / k - 2.0)
    for a in range(5):
        for b in range(a + 1, 5):
            pref *= _cp(pts[b] - pts[a], 2.0 / k)
        pref *= _cp((z - pts[a]) * (z.conjugate() - pts[a]), 0.5 - 4.0 / k)
    return pref * D


def _beta4(kappa: float) -> float:
    return 1.0 / quad.beta_recip(kappa)
