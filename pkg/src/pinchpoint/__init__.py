"""Pinch-point densities of critical boundary clusters in polygons.

Exact contour-integral predictions for the densities of points where
s distinct boundary clusters of a critical O(n)-family model touch,
inside rectangles and hexagons with side-alternating free/wired
boundary conditions, together with a Monte Carlo engine (hull walks
and Swendsen-Wang sampling) that measures the same densities.
"""

from .params import ModelParams, from_kappa, fugacity, kac_weight, screening_count

__all__ = [
    "ModelParams",
    "from_kappa",
    "fugacity",
    "kac_weight",
    "screening_count",
]
