"""Universal partition functions: boundary-loop counting and ffbc sums.

A pinch-point weight becomes a physical (universal) partition function
once the boundary arcs are closed into loops by the exterior arcs of
the chosen ffbc event; each closed loop contributes one factor of the
fugacity n.  The rectangle has two ffbc events (1 = left/right sides
independently wired, 2 = mutually wired); the hexagon has five, of
which 3 is the all-independent wiring and 2 the all-mutual one (1, 4,
5 are the mixed wirings).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .. import quad
from ..params import ModelParams
from ..specfun import gauss_2f1
from ..quad import BranchFactor, BranchedIntegrand, ContourSpec, CoupledIntegrand

RECT_ONE_PINCH_LOOPS = {
    ("12:34", 1): 1,
    ("34:12", 1): 1,
    ("41:23", 1): 2,
    ("23:41", 1): 2,
    ("12:34", 2): 2,
    ("34:12", 2): 2,
    ("41:23", 2): 1,
    ("23:41", 2): 1,
}

HEX_TWO_PINCH_PAIRS = {("6123:45", 3): (1, 2)}
HEX_COMBO_POWER = {("12:34:56", 3): 3}


@dataclass(frozen=True)
class PinchEvent:
    """Label of a pinch-point event: which arcs reach the bulk point."""

    s: int
    arc_spec: str
    N: int


@dataclass(frozen=True)
class FfbcEvent:
    """Wiring pattern index (rectangle 1..2, hexagon 1..5)."""

    index: int
    N: int


def universal_partition(event: str, ffbc: int, weight, params: ModelParams):
    """n^p (or the appropriate loop-count sum) times the given weight.

    ``event`` is the arc label: a rectangle one-pinch label 'ij:kl',
    the rectangle two-pinch '1234', a hexagon two-pinch 'ijkl:mn', the
    measured hexagon one-pinch combination '12:34:56', or the hexagon
    three-pinch '123456'.
    """
    n = params.fugacity_n
    key = (event, ffbc)
    if key in RECT_ONE_PINCH_LOOPS:
        return n ** RECT_ONE_PINCH_LOOPS[key] * weight
    if event == "1234" and ffbc in (1, 2):
        return (n + n * n) * weight
    if key in HEX_COMBO_POWER:
        return n ** HEX_COMBO_POWER[key] * weight
    if key in HEX_TWO_PINCH_PAIRS:
        p1, p2 = HEX_TWO_PINCH_PAIRS[key]
        return (n**p1 + n**p2) * weight
    if event == "123456":
        if ffbc in (2, 3):
            return (n + 3.0 * n * n + n**3) * weight
        if ffbc in (1, 4, 5):
            return (2.0 * n + 2.0 * n * n + n**3) * weight
    raise ValueError(f"unsupported (event, ffbc) combination {key}")


def _cardy_F(kappa: float, x: float) -> float:
    return gauss_2f1(2.0 - 12.0 / kappa, 1.0 - 4.0 / kappa, 2.0 - 8.0 / kappa, x)


def partition_ffbc_rect(m: float, ffbc: int, params: ModelParams) -> float:
    """Upsilon_ffbc for the rectangle of modulus m (crossing-sum form)."""
    if ffbc not in (1, 2):
        raise ValueError(f"rectangle ffbc must be 1 or 2, got {ffbc}")
    if not (0.0 < m < 1.0):
        raise ValueError(f"modulus must lie in (0,1), got {m}")
    from ..specfun import ellip_k

    k = params.kappa
    n = params.fugacity_n
    arg = 1.0 - m if ffbc == 1 else m
    return n * n * ellip_k(1.0 - m) ** (24.0 / k - 4.0) * _cardy_F(k, arg)


_HEX_FFBC_PAIRS = {
    # finite endpoint pairs (a, b), (c, d) of the two exterior arcs
    3: ((0.0, "m1"), ("m2", "m3")),  # all sides independently wired
    2: (("m1", "m2"), ("m3", 1.0)),  # all sides mutually wired
}


def _resolve(pair, ms):
    names = {"m1": ms[0], "m2": ms[1], "m3": ms[2]}
    return tuple(names.get(p, p) for p in pair)


def hex_ffbc_integrand(ms, kappa: float) -> BranchedIntegrand:
    facs = tuple(
        BranchFactor(float(p), -4.0 / kappa) for p in (0.0, ms[0], ms[1], ms[2], 1.0)
    )
    return BranchedIntegrand(facs)


def partition_ffbc_hex(ms, ffbc: int, params: ModelParams,
                       rel_tol: float = 1e-8) -> float:
    """Upsilon_ffbc for the hexagon with prevertices (m1, m2, m3).

    The two screening charges run over the finite exterior-arc pairs of
    the wiring.  For kappa <= 4 the endpoint exponents drop to -1 or
    below and the simple contours are replaced by Pochhammer contours;
    combined with the prescribed extra division by 4 sin^2(4 pi/kappa)
    this equals the analytically continued (finite-part) integral,
    which is what the regularized quadrature evaluates directly.
    Wirings whose exterior-arc segments are nested (the mixed ffbcs 1,
    4, 5) are outside the supported table.
    """
    if ffbc not in _HEX_FFBC_PAIRS:
        raise ValueError(
            f"hexagon ffbc {ffbc} not in the supported wiring table (2, 3)"
        )
    m1, m2, m3 = (float(m) for m in ms)
    if not (0.0 < m1 < m2 < m3 < 1.0):
        raise ValueError("need 0 < m1 < m2 < m3 < 1")
    k = params.kappa
    n = params.fugacity_n
    (a, b), (c, d) = (
        _resolve(p, (m1, m2, m3)) for p in _HEX_FFBC_PAIRS[ffbc]
    )
    f = hex_ffbc_integrand((m1, m2, m3), k)
    ci = CoupledIntegrand(f1=f, f2=f, coupling_exponent=8.0 / k)
    if k > 4.0:
        val = quad.double_integral(
            ci, ContourSpec.real_segment(a, b), ContourSpec.real_segment(c, d),
            rel_tol=rel_tol,
        )
    else:
        val = _regularized_double(ci, (a, b), (c, d), rel_tol=rel_tol)
    delta9 = (
        m1 * m2 * m3 * (m2 - m1) * (m3 - m1) * (m3 - m2)
        * (1.0 - m1) * (1.0 - m2) * (1.0 - m3)
    )
    pref = delta9 ** ((10.0 - k) / (2.0 * k))
    return pref * n**3 * quad.beta_recip(k) ** 2 * complex(val).real


def _regularized_double(ci: CoupledIntegrand, seg1, seg2, rel_tol=1e-8) -> complex:
    """Iterated finite-part integral for exponents <= -1 (dilute phase)."""
    a1, b1 = seg1
    a2, b2 = seg2
    cexp = ci.coupling_exponent

    def inner(u1):
        fac = BranchFactor(point=complex(u1), exponent=cexp, orientation=1)
        fi = BranchedIntegrand(ci.f2.factors + (fac,))
        return quad.regularized_segment(fi, a2, b2, rel_tol=rel_tol / 10.0)

    def inner_vec(u):
        import numpy as np

        return np.array([inner(complex(x)) for x in np.atleast_1d(u)])

    def inner_logderiv(u):
        import numpy as np

        u = np.atleast_1d(u)
        h = 1e-6 * max(1.0, abs(b1 - a1))
        out = []
        for x in u:
            f0 = inner(complex(x))
            out.append((inner(complex(x) + h) - inner(complex(x) - h)) / (2 * h * f0))
        return np.array(out)

    fo = BranchedIntegrand(
        ci.f1.factors, extra=inner_vec, extra_logderiv=inner_logderiv
    )
    return quad.regularized_segment(fo, a1, b1, rel_tol=rel_tol)
