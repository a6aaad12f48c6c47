"""Special functions backing the contour-integral formulas.

Gauss 2F1, the (generalized) incomplete beta, complete elliptic
integrals, complex-argument Jacobi elliptic functions, and the
Lauricella function F_D evaluated through its Euler integral.

Conventions: the elliptic parameter is always m = k^2 (the modulus
squared), matching K(m), K'(m) = K(1-m) and the aspect-ratio relation
R = K(m)/K'(m).  Toolkits disagree on this; every caller in this
package passes m, never k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, ellipj, gammaln, hyp2f1

from . import quad


class SpecFunError(ValueError):
    pass


def gauss_2f1(a: float, b: float, c: float, x: float) -> float:
    """Gauss hypergeometric 2F1(a, b; c | x) for real x in (-1, 1)."""
    if not (-1.0 < x < 1.0):
        raise SpecFunError(f"argument {x} outside (-1, 1)")
    if c <= 0.0 and c == math.floor(c):
        raise SpecFunError(f"c = {c} is a non-positive integer")
    val = float(hyp2f1(a, b, c, x))
    if not math.isfinite(val):
        raise SpecFunError(f"2F1({a},{b};{c}|{x}) did not converge: {val}")
    return val


def incomplete_beta(a: float, b: float, x: float) -> float:
    """B(a, b | x) = int_0^x t^(a-1) (1-t)^(b-1) dt, b of either sign.

    Uses B(a,b|x) = x^a / a * 2F1(a, 1-b; a+1 | x), which continues the
    integral to b <= 0 (where it diverges as x -> 1 like -(1-x)^b / b).
    """
    if a <= 0.0:
        raise SpecFunError(f"need a > 0, got {a}")
    if not (0.0 <= x < 1.0):
        raise SpecFunError(f"need 0 <= x < 1, got {x}")
    if x == 0.0:
        return 0.0
    return x**a / a * gauss_2f1(a, 1.0 - b, a + 1.0, x)


def beta_fn(a: float, b: float) -> float:
    """Euler beta for positive arguments (log-stable)."""
    return math.exp(betaln(a, b))


def ellip_k(m: float) -> float:
    """Complete elliptic integral K(m) by the arithmetic-geometric mean."""
    if not (0.0 < m < 1.0):
        raise SpecFunError(f"parameter m must lie in (0, 1), got {m}")
    a, g = 1.0, math.sqrt(1.0 - m)
    for _ in range(60):
        if abs(a - g) < 1e-16 * a:
            break
        a, g = 0.5 * (a + g), math.sqrt(a * g)
    return math.pi / (2.0 * a)


def jacobi_elliptic(u: complex, m: float, pole_tol: float = 1e-12):
    """sn, cn, dn at complex argument u for parameter m in (0, 1).

    Real-argument values come from the descending-Landen evaluation
    (scipy's ellipj); the complex argument is assembled with the
    addition theorem through the Jacobi imaginary transformation,
    sn(x + i y | m) etc. with the complementary-parameter functions of
    y.  Near the pole lattice (denominator below pole_tol) this raises.
    """
    if not (0.0 < m < 1.0):
        raise SpecFunError(f"parameter m must lie in (0, 1), got {m}")
    u = complex(u)
    x, y = u.real, u.imag
    s, c, d, _ = ellipj(x, m)
    if y == 0.0:
        return complex(s), complex(c), complex(d)
    s1, c1, d1, _ = ellipj(y, 1.0 - m)
    den = c1 * c1 + m * s * s * s1 * s1
    if abs(den) < pole_tol:
        raise SpecFunError(f"argument {u} too close to a pole of the lattice")
    sn = (s * d1 + 1j * c * d * s1 * c1) / den
    cn = (c * c1 - 1j * s * d * s1 * d1) / den
    dn = (d * c1 * d1 - 1j * m * s * c * s1) / den
    return sn, cn, dn


@dataclass(frozen=True)
class FdArgs:
    """Arguments of the Lauricella F_D of m variables.

    Usage contract: when the final two entries of x are complex
    conjugates and the earlier ones are real in (0, 1), the Euler
    integral is manifestly real.
    """

    a: float
    b: tuple
    c: float
    x: tuple

    def __post_init__(self):
        if len(self.b) != len(self.x):
            raise SpecFunError("b and x must have equal length")


def lauricella_fd(args: FdArgs, rel_tol: float = 1e-11) -> complex:
    """Lauricella F_D via adaptive Gauss-Jacobi on the Euler integral.

    F_D = B(a, c-a)^-1 int_0^1 t^(a-1) (1-t)^(c-a-1) prod (1 - x_j t)^(-b_j) dt,
    normalized so that F_D(x=0) = 1 and the one-variable case equals
    2F1(a, b1; c | x1).  Requires the Euler regime a > 0, c - a > 0
    (all uses in the dense phase satisfy it); outside it the screened
    correlators are evaluated by Pochhammer continuation instead.
    """
    a, c = float(args.a), float(args.c)
    if a <= 0.0 or c - a <= 0.0:
        raise SpecFunError(
            f"Euler regime violated (a={a}, c-a={c - a}); "
            "use the Pochhammer-regularized route"
        )
    xs = [complex(x) for x in args.x]
    bs = [float(b) for b in args.b]
    for xj in xs:
        if xj.imag == 0.0 and xj.real >= 1.0:
            raise SpecFunError(f"real argument {xj.real} >= 1 hits the cut")

    def smooth(t):
        out = np.ones_like(t, dtype=complex)
        for bj, xj in zip(bs, xs):
            out = out * np.power(1.0 - xj * t, -bj)
        return out

    integral = quad._adaptive_real(
        smooth,
        0.0,
        1.0,
        a - 1.0,
        c - a - 1.0,
        rel_tol * _fd_rough(smooth, a, c),
        rel_tol=rel_tol,
    )
    lognorm = -betaln(a, c - a)
    return complex(integral) * math.exp(lognorm)


def _fd_rough(smooth, a, c):
    rough = abs(quad._gj_apply(smooth, 0.0, 1.0, a - 1.0, c - a - 1.0, quad._N_LO))
    return max(rough, 1e-300)


def log_gamma(x: float) -> float:
    return float(gammaln(x))
