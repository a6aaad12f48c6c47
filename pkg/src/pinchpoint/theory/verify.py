"""Finite-difference verifiers for the null-state PDEs and Ward identities.

An evaluator is any callable f(xs, z, zbar) -> complex that treats z
and zbar as independent holomorphic variables (physical values have
zbar = conj z).  Derivatives are central differences with Richardson
extrapolation; residuals are normalized by the largest individual term
so they are meaningful across scales.
"""

from __future__ import annotations

import numpy as np

from ..params import ModelParams


def _d1(f, args, idx, h):
    """Richardson-extrapolated first derivative in argument ``idx``."""
    def shift(delta):
        a = list(args)
        a[idx] = a[idx] + delta
        return f(*a)

    d_h = (shift(h) - shift(-h)) / (2.0 * h)
    d_h2 = (shift(0.5 * h) - shift(-0.5 * h)) / h
    return (4.0 * d_h2 - d_h) / 3.0


def _d2(f, args, idx, h):
    def shift(delta):
        a = list(args)
        a[idx] = a[idx] + delta
        return f(*a)

    c = f(*args)
    d_h = (shift(h) - 2.0 * c + shift(-h)) / (h * h)
    d_h2 = (shift(0.5 * h) - 2.0 * c + shift(-0.5 * h)) / (0.25 * h * h)
    return (4.0 * d_h2 - d_h) / 3.0


def _flat(evaluator, xs):
    m = len(xs)

    def f(*args):
        return evaluator(list(args[:m]), args[m], args[m + 1])

    return f


def _default_h(xs, z):
    gaps = [abs(b - a) for a, b in zip(xs, xs[1:])]
    gaps.append(2.0 * abs(complex(z).imag))
    return 2e-3 * min(gaps)


def verify_null_state(evaluator, xs, z, i: int, params: ModelParams, s: int,
                      h: float | None = None) -> float:
    """Relative residual of the i-th null-state PDE (i is 1-based).

    [k/4 d_i^2 + sum_j (d_j/(x_j-x_i) - theta1/(x_j-x_i)^2)
     + d_z/(z-x_i) - Theta_s/(z-x_i)^2 + (z -> zbar)] Pi = 0.
    """
    xs = [float(x) for x in xs]
    z = complex(z)
    zb = z.conjugate()
    k = params.kappa
    th1 = params.theta1
    ths = params.big_theta[s]
    if h is None:
        h = _default_h(xs, z)
    f = _flat(evaluator, xs)
    args = tuple(xs) + (z, zb)
    m = len(xs)
    i0 = i - 1
    val = f(*args)
    terms = [0.25 * k * _d2(f, args, i0, h)]
    for j in range(m):
        if j == i0:
            continue
        dx = xs[j] - xs[i0]
        terms.append(_d1(f, args, j, h) / dx)
        terms.append(-th1 * val / dx**2)
    dz = z - xs[i0]
    dzb = zb - xs[i0]
    terms.append(_d1(f, args, m, h) / dz)
    terms.append(-ths * val / dz**2)
    terms.append(_d1(f, args, m + 1, h) / dzb)
    terms.append(-ths * val / dzb**2)
    total = sum(terms)
    scale = max(abs(t) for t in terms)
    return abs(total) / scale


def verify_ward(evaluator, xs, z, params: ModelParams, s: int,
                h: float | None = None):
    """Residuals of the translation, dilation, and special-conformal
    Ward identities, normalized by the largest term of each."""
    xs = [float(x) for x in xs]
    z = complex(z)
    zb = z.conjugate()
    th1 = params.theta1
    ths = params.big_theta[s]
    if h is None:
        h = _default_h(xs, z)
    f = _flat(evaluator, xs)
    args = tuple(xs) + (z, zb)
    m = len(xs)
    val = f(*args)
    dxi = [_d1(f, args, j, h) for j in range(m)]
    dz = _d1(f, args, m, h)
    dzb = _d1(f, args, m + 1, h)

    t1 = [dz, dzb] + dxi
    t2 = [z * dz, zb * dzb, 2.0 * ths * val] + [
        xs[j] * dxi[j] + th1 * val for j in range(m)
    ]
    t3 = [z * z * dz, zb * zb * dzb, 2.0 * ths * (z + zb) * val] + [
        xs[j] ** 2 * dxi[j] + 2.0 * th1 * xs[j] * val for j in range(m)
    ]
    out = []
    for terms in (t1, t2, t3):
        scale = max(abs(t) for t in terms)
        out.append(abs(sum(terms)) / scale)
    return tuple(out)
