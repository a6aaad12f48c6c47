"""Cross-ratio coordinates for the covariant weight formulas.

eta_i = (x_i - x_1)(x_2N - x_2N-1) / ((x_2N-1 - x_1)(x_2N - x_i)),
with mu and nu the same Mobius image of z and zbar.  zbar is kept as
an independent variable (set to conj(z) on the physical slice); the
limit x_2N -> infinity is taken analytically when xs[-1] is inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def _mobius(x, x1, xm, xn):
    """(x - x1)(xn - xm) / ((xm - x1)(xn - x)); xn may be inf."""
    if math.isinf(xn):
        return (x - x1) / (xm - x1)
    return (x - x1) * (xn - xm) / ((xm - x1) * (xn - x))


@dataclass(frozen=True)
class CrossRatios:
    """eta (and tau, sigma for N=3) real, mu/nu the bulk images."""

    etas: tuple
    mu: complex
    nu: complex

    @property
    def eta(self):
        return self.etas[0]

    @property
    def tau(self):
        return self.etas[1]

    @property
    def sigma(self):
        return self.etas[2]

    @staticmethod
    def from_points(xs, z, zbar=None) -> "CrossRatios":
        xs = [float(x) for x in xs]
        if len(xs) % 2 or len(xs) < 4:
            raise ValueError(f"need an even number >= 4 of points, got {len(xs)}")
        finite = xs[:-1] if math.isinf(xs[-1]) else xs
        if not all(a < b for a, b in zip(finite, finite[1:])):
            raise ValueError("boundary points must be strictly increasing")
        z = complex(z)
        zbar = z.conjugate() if zbar is None else complex(zbar)
        x1, xm, xn = xs[0], xs[-2], xs[-1]
        etas = tuple(_mobius(x, x1, xm, xn) for x in xs[1:-2])
        return CrossRatios(
            etas=etas,
            mu=_mobius(z, x1, xm, xn),
            nu=_mobius(zbar, x1, xm, xn),
        )
