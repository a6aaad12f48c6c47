"""Conformal transport between the upper half-plane and the polygons.

The rectangle map is closed-form elliptic: the half-plane with marked
boundary points {0, m, 1, inf} maps to the rectangle [0, R] x [0, 1]
with R = K(m)/K'(m), and the inverse map is m sn(w K' | m)^2.  The
hexagon map is a numerically integrated Schwarz-Christoffel map with
exponents -1/3 at the five finite prevertices; the regular hexagon has
prevertices (1/3, 1/2, 2/3), which is forced by the half-plane Mobius
symmetry T(z) = -m1/(z - 1) that cyclically permutes
{0, m1, m2, m3, 1, inf} and is verified here by the equal-side oracle
rather than assumed.

Vertex conventions: vertices are numbered counterclockwise from the
bottom-left, the bottom side lies on the positive real axis starting at
the origin, and the hexagon is scaled to side length one.  Both maps'
boundary branches are the continuous limits from the half-plane
interior.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import quad
from .quad import BranchFactor, BranchedIntegrand, GeometryError
from .specfun import ellip_k, jacobi_elliptic


# ---------------------------------------------------------------------------
# rectangle


@dataclass(frozen=True)
class RectGeometry:
    aspect_R: float
    modulus_m: float
    K: float
    Kprime: float

    @property
    def vertices(self):
        R = self.aspect_R
        return (0.0 + 0.0j, R + 0.0j, R + 1.0j, 0.0 + 1.0j)

    def contains(self, w: complex, margin: float = 0.0) -> bool:
        return (margin < w.real < self.aspect_R - margin) and (
            margin < w.imag < 1.0 - margin
        )


def rect_from_aspect(R: float, tol: float = 1e-14) -> RectGeometry:
    """Solve K(m)/K(1-m) = R by bisection on the strictly monotone ratio."""
    if R <= 0.0:
        raise ValueError(f"aspect ratio must be positive, got {R}")
    lo, hi = 1e-15, 1.0 - 1e-15
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ellip_k(mid) / ellip_k(1.0 - mid) < R:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    m = 0.5 * (lo + hi)
    return RectGeometry(aspect_R=R, modulus_m=m, K=ellip_k(m), Kprime=ellip_k(1.0 - m))


def rect_inverse(w: complex, geo: RectGeometry) -> complex:
    """Half-plane preimage z = m sn(w K' | m)^2 of an interior point."""
    w = complex(w)
    if not geo.contains(w):
        raise ValueError(f"point {w} is not interior to the rectangle")
    sn, _, _ = jacobi_elliptic(w * geo.Kprime, geo.modulus_m)
    return geo.modulus_m * sn * sn


def rect_inverse_jacobian(w: complex, geo: RectGeometry) -> complex:
    """dz/dw = 2 m K' sn cn dn (w K' | m), the covariance factor."""
    sn, cn, dn = jacobi_elliptic(complex(w) * geo.Kprime, geo.modulus_m)
    return 2.0 * geo.modulus_m * geo.Kprime * sn * cn * dn


def _carlson_rf(x: complex, y: complex, z: complex, tol: float = 1e-14) -> complex:
    """Carlson symmetric integral R_F by the duplication algorithm."""
    for _ in range(200):
        lam = np.sqrt(x) * np.sqrt(y) + np.sqrt(y) * np.sqrt(z) + np.sqrt(z) * np.sqrt(x)
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        mu = (x + y + z) / 3.0
        if max(abs(x - mu), abs(y - mu), abs(z - mu)) < tol * abs(mu):
            break
    mu = (x + y + z) / 3.0
    X, Y, Z = 1.0 - x / mu, 1.0 - y / mu, 1.0 - z / mu
    e2 = X * Y + Y * Z + Z * X
    e3 = X * Y * Z
    series = (
        1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0
    )
    return series / np.sqrt(mu)


def rect_forward(z: complex, geo: RectGeometry) -> complex:
    """Map a half-plane point to the rectangle, w = sn^{-1}(sqrt(z/m)|m)/K'."""
    z = complex(z)
    m = geo.modulus_m
    s = cmath.sqrt(z / m)
    if s.imag < 0:
        s = -s
    inv_sn = s * _carlson_rf(1.0 - s * s, 1.0 - m * s * s, 1.0 + 0.0j)
    return inv_sn / geo.Kprime


# ---------------------------------------------------------------------------
# hexagon

_HEX_EXP = -1.0 / 3.0


def _hex_integrand(prevertices) -> BranchedIntegrand:
    """SC integrand: z^(-1/3) (m1-z)^(-1/3)...(1-z)^(-1/3), interior branch.

    All factors except the origin are oriented as (p - z), whose value
    stays in the closed lower half-plane throughout the upper half-plane,
    so principal branches realize the continuous interior extension.
    """
    m1, m2, m3 = prevertices
    return BranchedIntegrand(
        (
            BranchFactor(0.0, _HEX_EXP, 1),
            BranchFactor(m1, _HEX_EXP, -1),
            BranchFactor(m2, _HEX_EXP, -1),
            BranchFactor(m3, _HEX_EXP, -1),
            BranchFactor(1.0, _HEX_EXP, -1),
        )
    )


def _one_sided_tail(f: BranchedIntegrand, anchor: float, sign: float,
                    rel_tol: float = 1e-11) -> complex:
    """|integral| over (anchor, +inf) or (-inf, anchor), magnitudes only."""
    exps = sum(fac.exponent for fac in f.factors)
    decay = -exps
    alpha = f.endpoint_exponent(anchor)

    def reg(t):
        t = np.asarray(t, dtype=float)
        omt = 1.0 - t
        u = anchor + sign * t / omt
        vals = np.ones_like(u, dtype=float)
        for fac in f.factors:
            if quad._same_point(fac.point, anchor):
                continue
            vals = vals * np.abs(u - fac.point.real) ** fac.exponent
        return vals * np.power(omt, -alpha - decay)

    rough = abs(quad._gj_apply(reg, 0.0, 1.0, alpha, decay - 2.0, quad._N_LO))
    return quad._adaptive_real(
        reg, 0.0, 1.0, alpha, decay - 2.0, rel_tol * max(rough, 1e-300),
        rel_tol=rel_tol,
    )


def _side_lengths(prevertices, rel_tol: float = 1e-11):
    """|f(x_{k+1}) - f(x_k)| along the six boundary intervals (unnormalized)."""
    m1, m2, m3 = prevertices
    f = _hex_integrand(prevertices)
    pts = [0.0, m1, m2, m3, 1.0]
    sides = []
    for k in range(4):
        val = quad.integrate_singular_segment(f, pts[k], pts[k + 1], rel_tol=rel_tol)
        sides.append(abs(val))
    sides.append(abs(_one_sided_tail(f, 1.0, +1.0, rel_tol)))
    sides.append(abs(_one_sided_tail(f, 0.0, -1.0, rel_tol)))
    return np.array(sides)


@dataclass(frozen=True)
class HexGeometry:
    prevertices: tuple
    scale: float = field(repr=False)
    vertex_coords: tuple = field(repr=False)
    seed_cache: tuple = field(repr=False, default=(), compare=False)

    @property
    def integrand(self) -> BranchedIntegrand:
        return _hex_integrand(self.prevertices)

    def contains(self, w: complex, margin: float = 0.0) -> bool:
        vs = self.vertex_coords
        for k in range(6):
            a, b = vs[k], vs[(k + 1) % 6]
            d = b - a
            # interior lies to the left of each directed side
            cross = (d.real * (w.imag - a.imag) - d.imag * (w.real - a.real))
            if cross <= margin * abs(d):
                return False
        return True

    @property
    def center(self) -> complex:
        return sum(self.vertex_coords) / 6.0

    def sc_derivative(self, z: complex) -> complex:
        """df/dz of the scaled map at an interior half-plane point."""
        vals = self.integrand.value_principal(np.array([complex(z)]))
        return self.scale * complex(vals[0])


def _build_hex_geometry(prevertices, seeds: int = 28) -> HexGeometry:
    m1, m2, m3 = prevertices
    f = _hex_integrand(prevertices)
    L1 = abs(quad.integrate_singular_segment(f, 0.0, m1, rel_tol=1e-12))
    scale = 1.0 / L1
    # vertices by accumulating the rotated side lengths (angles are exact)
    lengths = _side_lengths(prevertices) * scale
    vs = [0.0 + 0.0j]
    for k in range(5):
        vs.append(vs[-1] + lengths[k] * cmath.exp(1j * k * math.pi / 3.0))
    geo = HexGeometry(
        prevertices=tuple(float(m) for m in prevertices),
        scale=scale,
        vertex_coords=tuple(vs),
    )
    closure = abs(vs[-1] + lengths[5] * cmath.exp(5j * math.pi / 3.0))
    if closure > 1e-7:
        raise GeometryError(f"hexagon does not close (defect {closure:.2e})")
    # seed pairs (z, w) for Newton inversion; the Cayley grid covers the
    # whole half-plane including the large-|z| region near vertex six
    pairs = []
    for r in (0.15, 0.35, 0.55, 0.75, 0.9):
        for th in np.linspace(0.0, 2.0 * math.pi, 13)[:-1]:
            zeta = r * cmath.exp(1j * th)
            z = 1j * (1.0 + zeta) / (1.0 - zeta)
            if z.imag < 0.02:
                continue
            try:
                w = hex_forward(z, geo)
            except (GeometryError, quad.QuadratureError):
                continue
            pairs.append((z, w))
    object.__setattr__(geo, "seed_cache", tuple(pairs))
    return geo


def hex_prevertices_regular() -> tuple:
    """Prevertices of the regular hexagon, validated by the side oracle."""
    cand = (1.0 / 3.0, 0.5, 2.0 / 3.0)
    sides = _side_lengths(cand)
    spread = float(np.max(sides) / np.min(sides) - 1.0)
    if spread > 1e-8:
        raise GeometryError(f"regular-hexagon candidate failed side test ({spread:.2e})")
    return cand


def hex_geometry_regular() -> HexGeometry:
    return _build_hex_geometry(hex_prevertices_regular())


def hex_prevertices_solve(target_side_ratios, x0=(0.2, 0.5, 0.8),
                          max_iter: int = 60, tol: float = 1e-10) -> tuple:
    """Solve the SC parameter problem for an equiangular hexagon.

    ``target_side_ratios`` are (L2/L1, ..., L6/L1); only the first three
    are independent (closure fixes the rest) and are matched by a damped
    Newton iteration in unconstrained coordinates for 0 < m1 < m2 < m3 < 1.
    """
    r = np.asarray(target_side_ratios, dtype=float)
    if len(r) != 5 or np.any(r <= 0.0):
        raise ValueError("need 5 positive side ratios (a zero side is degenerate)")
    target = r[:3]

    def to_m(u):
        e = np.exp(u)
        w = e / (1.0 + np.sum(e))
        c = np.cumsum(w)
        return c

    def residual(u):
        m = to_m(u)
        sides = _side_lengths(tuple(m), rel_tol=1e-10)
        return sides[1:4] / sides[0] - target

    u = np.zeros(3)
    m0 = np.asarray(x0, dtype=float)
    gaps = np.diff(np.concatenate(([0.0], m0, [1.0])))
    u = np.log(gaps[:3] / gaps[3])
    res = residual(u)
    for _ in range(max_iter):
        nrm = np.linalg.norm(res)
        if nrm < tol:
            return tuple(to_m(u))
        J = np.empty((3, 3))
        h = 1e-6
        for j in range(3):
            up = u.copy()
            up[j] += h
            J[:, j] = (residual(up) - res) / h
        try:
            step = np.linalg.solve(J, -res)
        except np.linalg.LinAlgError:
            raise GeometryError("singular Jacobian in prevertex solve")
        lam = 1.0
        for _ in range(30):
            cand = residual(u + lam * step)
            if np.linalg.norm(cand) < nrm:
                u = u + lam * step
                res = cand
                break
            lam *= 0.5
        else:
            raise GeometryError(f"prevertex solve stalled at residual {nrm:.3e}")
    raise GeometryError(f"prevertex solve did not converge (residual {np.linalg.norm(res):.3e})")


def _forward_path(z: complex) -> tuple:
    """Polyline from 0 to z staying clear of the real axis en route."""
    z = complex(z)
    if z.imag < 0.0:
        raise GeometryError("hex_forward needs Im z >= 0")
    if z.imag >= 0.35:
        return (0.0, 0.35j, z)
    return (0.0, 0.35j, complex(z.real, 0.35), z)


def hex_forward(z: complex, geo: HexGeometry, rel_tol: float = 1e-11) -> complex:
    """Scaled SC map: path integral of the integrand from 0 to z."""
    z = complex(z)
    if abs(z) < 1e-14:
        return 0.0 + 0.0j
    verts = [v for v in _forward_path(z)]
    # drop duplicate consecutive vertices
    path = [verts[0]]
    for v in verts[1:]:
        if abs(v - path[-1]) > 1e-14:
            path.append(v)
    f = geo.integrand
    sing_a = f.endpoint_exponent(path[0])
    sing_b = f.endpoint_exponent(path[-1])
    val = quad._path_integral(f, path, sing_a, sing_b, rel_tol)
    return geo.scale * val


def _forward_increment(z0: complex, z1: complex, geo: HexGeometry,
                       rel_tol: float = 1e-11) -> complex:
    """Integral of the SC integrand along the straight segment z0 -> z1."""
    f = geo.integrand
    quad.check_clearance(f, (z0, z1), eps_geom=1e-12)
    val = quad._path_integral(f, (z0, z1),
                              f.endpoint_exponent(z0), f.endpoint_exponent(z1),
                              rel_tol)
    return geo.scale * val


def hex_inverse(w: complex, geo: HexGeometry, tol: float = 1e-11,
                seed: tuple | None = None) -> complex:
    """Newton inversion of the hexagon map for a strictly interior point.

    ``seed`` may carry a warm-start pair (z0, w0 = f(z0)) from a nearby
    evaluation; otherwise the cached seed table is used.  Falls back to
    re-seeding before reporting failure.
    """
    w = complex(w)
    if not geo.contains(w, margin=1e-12):
        raise ValueError(f"point {w} is not interior to the hexagon")
    cands = []
    if seed is not None:
        cands.append(seed)
    cache = sorted(geo.seed_cache, key=lambda p: abs(p[1] - w))
    cands.extend(cache[:3])
    last_err = None
    for z0, w0 in cands:
        z, fz = complex(z0), complex(w0)
        ok = True
        for _ in range(60):
            err = fz - w
            if abs(err) < tol:
                return z
            dz = -err / geo.sc_derivative(z)
            # keep iterates inside the half-plane, damping as needed
            lam = 1.0
            for _ in range(40):
                z_new = z + lam * dz
                if z_new.imag > 1e-13:
                    try:
                        fz_new = fz + _forward_increment(z, z_new, geo)
                    except (GeometryError, quad.QuadratureError):
                        lam *= 0.5
                        continue
                    if abs(fz_new - w) < abs(err):
                        z, fz = z_new, fz_new
                        break
                lam *= 0.5
            else:
                ok = False
                break
        if ok and abs(fz - w) < 100 * tol:
            return z
        last_err = abs(fz - w)
    raise GeometryError(
        f"hex_inverse failed for {w}; last residual {last_err}"
    )
