"""Quadrature engine for the screened Coulomb-gas integrals.

All integrands handled here are products of power-law branch factors
``(u - p_k)^{beta_k}`` (times an optional smooth function), integrated
along real segments, complex polylines between a point and its
conjugate, closed loops, or Pochhammer-regularized segments.

Branch bookkeeping
------------------
Every factor carries an orientation: ``+1`` means the difference is
taken as ``(u - p)``, ``-1`` as ``(p - u)``.  For a contour that meets
the real axis only inside a declared crossing interval, the table
"real points left of the crossing oriented +1, right of it -1" keeps
each real-point factor's value inside a half-plane along the whole
contour; with both members of a conjugate endpoint pair oriented the
same way, the integrand obeys f(conj u) = conj f(u), which is what
makes the conjugate-symmetric contour integrals real or imaginary.
On real segments the same table makes every factor positive (complex
points enter as conjugate pairs with positive product), so those
integrals are manifestly real.

Along polylines and loops the argument of every factor is tracked
segment by segment: a straight segment subtends less than pi at any
external point, so the principal argument of w(t)/w(segment start) is
the exact continuous increment.  This also covers closed loops, where
the accumulated winding matters.

Endpoint singularities with exponents > -1 are absorbed into
Gauss-Jacobi weights.  Exponents <= -1 are handled by
``pochhammer_integral`` via analytic continuation (Taylor subtraction
at the endpoint, i.e. the Hadamard finite part, which is what the
Pochhammer double loop computes up to its standard sine prefactor).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.special import gamma as _gamma_fn
from scipy.special import roots_jacobi, roots_legendre


class QuadratureError(RuntimeError):
    """A quadrature failed to converge or was used outside its regime."""


class GeometryError(ValueError):
    """A contour violates clearance, ordering, or crossing invariants."""


_PTOL = 1e-13


def _same_point(a, b) -> bool:
    a, b = complex(a), complex(b)
    return abs(a - b) <= _PTOL * (1.0 + abs(a) + abs(b))


# ---------------------------------------------------------------------------
# node tables (read-only cache, built on demand)


@lru_cache(maxsize=4096)
def gauss_jacobi_nodes(n: int, alpha: float, beta: float):
    """Nodes/weights for the weight (1-x)^alpha (1+x)^beta on (-1, 1)."""
    if alpha == 0.0 and beta == 0.0:
        return roots_legendre(n)
    return roots_jacobi(n, alpha, beta)


# ---------------------------------------------------------------------------
# integrands


@dataclass(frozen=True)
class BranchFactor:
    point: complex
    exponent: float
    orientation: int = 1  # +1: (u - p)^beta, -1: (p - u)^beta


@dataclass(frozen=True)
class BranchedIntegrand:
    """Product of branch factors times an optional smooth extra factor.

    ``extra`` must be a vectorized callable of one complex argument;
    ``extra_logderiv`` (its logarithmic derivative) is required only by
    the regularized quadratures.
    """

    factors: tuple
    extra: object = None
    extra_logderiv: object = None

    def with_orientations(self, lo: float, hi: float) -> "BranchedIntegrand":
        """Left/right orientation table for a crossing inside (lo, hi).

        Only real points are touched; complex factors keep the
        orientation they were built with.
        """
        out = []
        for f in self.factors:
            p = complex(f.point)
            if abs(p.imag) > _PTOL * (1.0 + abs(p)):
                out.append(f)
            elif p.real <= lo + _PTOL * (1 + abs(lo)):
                out.append(replace(f, orientation=1))
            elif p.real >= hi - _PTOL * (1 + abs(hi)):
                out.append(replace(f, orientation=-1))
            else:
                raise GeometryError(
                    f"branch point {p} lies inside the crossing interval ({lo}, {hi})"
                )
        return replace(self, factors=tuple(out))

    def oriented(self, point, orientation) -> "BranchedIntegrand":
        out = [
            replace(f, orientation=orientation) if _same_point(f.point, point) else f
            for f in self.factors
        ]
        return replace(self, factors=tuple(out))

    def without(self, point) -> "BranchedIntegrand":
        return replace(
            self,
            factors=tuple(f for f in self.factors if not _same_point(f.point, point)),
        )

    def value_principal(self, u, skip=()):
        """Pointwise principal-branch product (valid on real segments)."""
        u = np.asarray(u, dtype=complex)
        out = np.ones_like(u)
        for f in self.factors:
            if any(_same_point(f.point, s) for s in skip):
                continue
            out = out * np.power(f.orientation * (u - f.point), f.exponent)
        if self.extra is not None:
            out = out * self.extra(u)
        return out

    def logderiv(self, u):
        u = np.asarray(u, dtype=complex)
        out = np.zeros_like(u)
        for f in self.factors:
            out = out + f.exponent / (u - f.point)
        if self.extra_logderiv is not None:
            out = out + self.extra_logderiv(u)
        elif self.extra is not None:
            raise QuadratureError("regularized quadrature needs extra_logderiv")
        return out

    def endpoint_exponent(self, p) -> float:
        return sum(f.exponent for f in self.factors if _same_point(f.point, p))


# ---------------------------------------------------------------------------
# contour specifications


@dataclass(frozen=True)
class ContourSpec:
    """Contour for one integration variable.

    kind 'real_segment': (a, b) on the real axis.
    kind 'polyline': vertices from start to end, crossing the real axis
        exactly once strictly inside ``crossing_interval``.
    kind 'loop': closed vertex cycle (no singular endpoints).
    kind 'pochhammer': double-loop entwining real points a and b.
    """

    kind: str
    a: complex = 0.0
    b: complex = 0.0
    vertices: tuple = ()
    crossing_interval: tuple | None = None

    @staticmethod
    def real_segment(a, b) -> "ContourSpec":
        return ContourSpec("real_segment", a=float(a), b=float(b))

    @staticmethod
    def conjugate_polyline(z, x_lo, x_hi, frac=0.5) -> "ContourSpec":
        """The standard contour from conj(z) to z crossing (x_lo, x_hi)."""
        z = complex(z)
        xc = x_lo + frac * (x_hi - x_lo)
        return ContourSpec(
            "polyline",
            a=z.conjugate(),
            b=z,
            vertices=(z.conjugate(), complex(xc), z),
            crossing_interval=(float(x_lo), float(x_hi)),
        )

    @staticmethod
    def polyline(vertices, crossing_interval) -> "ContourSpec":
        vs = tuple(complex(v) for v in vertices)
        return ContourSpec(
            "polyline",
            a=vs[0],
            b=vs[-1],
            vertices=vs,
            crossing_interval=tuple(crossing_interval),
        )

    @staticmethod
    def loop(vertices) -> "ContourSpec":
        vs = tuple(complex(v) for v in vertices)
        if not _same_point(vs[0], vs[-1]):
            vs = vs + (vs[0],)
        return ContourSpec("loop", vertices=vs)

    @staticmethod
    def pochhammer(a, b) -> "ContourSpec":
        return ContourSpec("pochhammer", a=float(a), b=float(b))


def check_clearance(f: BranchedIntegrand, vertices, eps_geom: float = 1e-9):
    """No interior point of the path may approach a non-endpoint branch point."""
    vs = [complex(v) for v in vertices]
    scale = max(1.0, max(abs(v) for v in vs))
    for k in range(len(vs) - 1):
        a, b = vs[k], vs[k + 1]
        d = b - a
        L2 = abs(d) ** 2
        if L2 == 0.0:
            raise GeometryError("zero-length polyline segment")
        for fac in f.factors:
            p = complex(fac.point)
            if _same_point(p, vs[0]) or _same_point(p, vs[-1]):
                continue
            t = min(1.0, max(0.0, ((p - a).conjugate() * d).real / L2))
            if abs(a + t * d - p) < eps_geom * scale:
                raise GeometryError(f"contour passes within eps_geom of {p}")


def _check_single_crossing(vertices, lo, hi):
    crossings = 0
    vs = [complex(v) for v in vertices]
    for k in range(len(vs) - 1):
        a, b = vs[k], vs[k + 1]
        if a.imag == 0.0 and b.imag == 0.0:
            raise GeometryError("polyline segment lies on the real axis")
        if a.imag * b.imag < 0.0:
            t = a.imag / (a.imag - b.imag)
            x = a.real + t * (b.real - a.real)
            if not (lo < x < hi):
                raise GeometryError(f"axis crossing at {x} outside ({lo}, {hi})")
            crossings += 1
        elif a.imag == 0.0 and k > 0:
            if not (lo < a.real < hi):
                raise GeometryError(f"axis vertex at {a.real} outside ({lo}, {hi})")
            crossings += 1
    if crossings != 1:
        raise GeometryError(f"polyline crosses the axis {crossings} times, need 1")


# ---------------------------------------------------------------------------
# real-segment quadrature

_N_LO, _N_HI = 24, 48
_MAX_DEPTH = 40


def _gj_apply(reg_fn, a, b, exp_a, exp_b, n):
    """int_a^b (u-a)^{exp_a} (b-u)^{exp_b} reg(u) du on real (a, b)."""
    x, w = gauss_jacobi_nodes(n, exp_b, exp_a)
    h = 0.5 * (b - a)
    u = a + (x + 1.0) * h
    return h ** (1.0 + exp_a + exp_b) * np.sum(w * reg_fn(u))


_PANEL_BUDGET = 6000


def _adaptive_real(reg_fn, a, b, exp_a, exp_b, tol_abs, rel_tol=None):
    """Adaptive Gauss-Jacobi with a per-panel error rule.

    A panel is accepted when its 24- vs 48-node difference is below
    max(tol_abs_share, rel_tol * |panel|); the relative rule keeps the
    subdivision depth bounded near integrable endpoint blowups, where a
    fixed absolute budget would force exponential refinement.
    """
    if rel_tol is None:
        rel_tol = 1e-9

    def piece(p, q, n):
        wa = exp_a if p == a else 0.0
        wb = exp_b if q == b else 0.0
        x, w = gauss_jacobi_nodes(n, wb, wa)
        h = 0.5 * (q - p)
        u = p + (x + 1.0) * h
        vals = reg_fn(u)
        if p != a and exp_a != 0.0:
            vals = vals * np.power(u - a, exp_a)
        if q != b and exp_b != 0.0:
            vals = vals * np.power(b - u, exp_b)
        return h ** (1.0 + wa + wb) * np.sum(w * vals)

    total = 0.0 + 0.0j
    stack = [(a, b, 0)]
    panels = 0
    while stack:
        p, q, depth = stack.pop()
        panels += 1
        if panels > _PANEL_BUDGET:
            raise QuadratureError("panel budget exhausted (unevaluable point?)")
        lo = piece(p, q, _N_LO)
        hi = piece(p, q, _N_HI)
        err = abs(hi - lo)
        if err <= max(tol_abs, rel_tol * abs(hi)) or depth >= _MAX_DEPTH:
            if depth >= _MAX_DEPTH and err > max(1e3 * tol_abs, 0.1 * abs(hi)):
                raise QuadratureError(
                    f"segment ({p}, {q}) unevaluable: err={err:.3g}"
                )
            total += hi
        else:
            m = 0.5 * (p + q)
            stack.append((p, m, depth + 1))
            stack.append((m, q, depth + 1))
    return total


def integrate_singular_segment(
    f: BranchedIntegrand,
    a: float,
    b: float,
    alpha: float | None = None,
    beta: float | None = None,
    rel_tol: float = 1e-8,
) -> complex:
    """Integrate f over the real segment (a, b), endpoint exponents > -1.

    ``alpha``/``beta`` are the power-law exponents at a/b; read off the
    factors when omitted.  The segment orientation table is applied, so
    the result is real whenever the complex points come in conjugate
    pairs.
    """
    a, b = float(a), float(b)
    if b <= a:
        raise GeometryError(f"need a < b, got ({a}, {b})")
    fo = f.with_orientations(a, b)
    if alpha is None:
        alpha = fo.endpoint_exponent(a)
    if beta is None:
        beta = fo.endpoint_exponent(b)
    if alpha <= -1.0 or beta <= -1.0:
        raise QuadratureError(
            f"endpoint exponent <= -1 (alpha={alpha}, beta={beta}): "
            "use pochhammer_integral"
        )

    def reg(u):
        return fo.value_principal(u, skip=(a, b))

    rough = abs(_gj_apply(reg, a, b, alpha, beta, _N_LO))
    return _adaptive_real(reg, a, b, alpha, beta, rel_tol * max(rough, 1e-300),
                          rel_tol=rel_tol)


def integrate_one_sided_tail(
    f: BranchedIntegrand, anchor: float, sign: float, rel_tol: float = 1e-8
) -> complex:
    """Integral over (anchor, +inf) for sign > 0, or (-inf, anchor) else.

    Maps the half-line to (0, 1) by u = anchor +- t/(1-t); the anchor
    exponent and the decay exponent (sum of all exponents, required
    below -1) become Gauss-Jacobi weights at the two ends.
    """
    exps = sum(fac.exponent for fac in f.factors)
    if f.extra is not None:
        raise QuadratureError("tail integration supports factor products only")
    if exps >= -1.0 - 1e-12:
        raise QuadratureError(f"integrand does not decay at infinity ({exps})")
    decay = -exps
    anchor = float(anchor)
    fo = (
        f.with_orientations(anchor, math.inf)
        if sign > 0
        else f.with_orientations(-math.inf, anchor)
    )
    alpha = fo.endpoint_exponent(anchor)
    if alpha <= -1.0:
        raise QuadratureError("tail anchor exponent <= -1")

    def reg(t):
        t = np.asarray(t, dtype=float)
        omt = 1.0 - t
        u = anchor + sign * t / omt
        vals = fo.value_principal(u, skip=(anchor,))
        return vals * np.power(omt, -alpha - decay)

    rough = abs(_gj_apply(reg, 0.0, 1.0, alpha, decay - 2.0, _N_LO))
    return _adaptive_real(
        reg, 0.0, 1.0, alpha, decay - 2.0, rel_tol * max(rough, 1e-300),
        rel_tol=rel_tol,
    )


def integrate_two_sided_tail(
    f: BranchedIntegrand, x_hi: float, x_lo: float, rel_tol: float = 1e-8
) -> complex:
    """Integral over (x_hi, +inf) plus (-inf, x_lo), through infinity.

    The factor exponents must sum below -1 (decay check; the sum is -2
    for every screened correlator used here, which also makes the
    integrand single-valued at infinity so the two tails glue into one
    analytic continuation).
    """
    exps = sum(fac.exponent for fac in f.factors)
    if f.extra is not None:
        raise QuadratureError("tail integration supports factor products only")
    if exps >= -1.0 - 1e-12:
        raise QuadratureError(f"integrand does not decay at infinity ({exps})")
    decay = -exps

    total = 0.0 + 0.0j
    for sign, anchor in ((+1.0, float(x_hi)), (-1.0, float(x_lo))):
        fo = (
            f.with_orientations(anchor, math.inf)
            if sign > 0
            else f.with_orientations(-math.inf, anchor)
        )
        alpha = fo.endpoint_exponent(anchor)
        if alpha <= -1.0:
            raise QuadratureError("tail anchor exponent <= -1")

        def reg(t, fo=fo, sign=sign, anchor=anchor, alpha=alpha):
            t = np.asarray(t, dtype=float)
            omt = 1.0 - t
            u = anchor + sign * t / omt
            vals = fo.value_principal(u, skip=(anchor,))
            # |u - anchor|^alpha = (t/omt)^alpha; t^alpha sits in the GJ
            # weight, and the t=1 weight carries (decay-2) from
            # |u|^-decay * jacobian omt^-2.
            return vals * np.power(omt, -alpha - decay)

        rough = abs(_gj_apply(reg, 0.0, 1.0, alpha, decay - 2.0, _N_LO))
        total += _adaptive_real(
            reg, 0.0, 1.0, alpha, decay - 2.0, rel_tol * max(rough, 1e-300),
            rel_tol=rel_tol,
        )
    return total


# ---------------------------------------------------------------------------
# tracked evaluation along polylines and loops


class _ArgTracker:
    """Continuously tracked factor arguments along a piecewise-linear path."""

    def __init__(self, f: BranchedIntegrand, start, first_dir):
        self.f = f
        start, first_dir = complex(start), complex(first_dir)
        self.args = []
        for fac in f.factors:
            w0 = fac.orientation * (start - fac.point)
            if _same_point(start, fac.point):
                # anchored at the path start: argument fixed by direction
                self.args.append(cmath.phase(fac.orientation * first_dir))
            else:
                self.args.append(cmath.phase(w0))
        self.pos = start

    def advance(self, nxt):
        nxt = complex(nxt)
        for k, fac in enumerate(self.f.factors):
            if _same_point(self.pos, fac.point) or _same_point(nxt, fac.point):
                continue  # anchored endpoints keep their frozen argument
            w0 = fac.orientation * (self.pos - fac.point)
            w1 = fac.orientation * (nxt - fac.point)
            self.args[k] += cmath.phase(w1 / w0)
        self.pos = nxt

    def values(self, seg_start, u, skip=()):
        """Factor product at nodes u on the current segment."""
        u = np.asarray(u, dtype=complex)
        out = np.ones_like(u)
        for k, fac in enumerate(self.f.factors):
            if any(_same_point(fac.point, s) for s in skip):
                continue
            w = fac.orientation * (u - fac.point)
            if _same_point(seg_start, fac.point):
                rel = 0.0
            else:
                w0 = fac.orientation * (seg_start - fac.point)
                rel = np.angle(w / w0)
            out = out * np.exp(
                fac.exponent * (np.log(np.abs(w)) + 1j * (self.args[k] + rel))
            )
        if self.f.extra is not None:
            out = out * self.f.extra(u)
        return out

    def endpoint_phase(self, p) -> complex:
        ph = 1.0 + 0.0j
        for k, fac in enumerate(self.f.factors):
            if _same_point(fac.point, p):
                ph *= cmath.exp(1j * fac.exponent * self.args[k])
        return ph


def _tracked_piece(tracker, A, B, p, q, sing_a, sing_b, n, inner_fn=None):
    """Quadrature over sub-piece [p, q] of tracked straight segment [A, B].

    sing_a/sing_b: exponents of factors anchored at A/B (their singular
    magnitudes are folded into the Jacobi weight when the piece touches
    that endpoint, refolded explicitly otherwise; their phases are
    constant along the segment and applied as prefactors).
    ``inner_fn(u)`` optionally multiplies the integrand (used for
    iterated integrals; called per node, not vectorized).
    """
    exp_a = sing_a if _same_point(p, A) else 0.0
    exp_b = sing_b if _same_point(q, B) else 0.0
    x, w = gauss_jacobi_nodes(n, exp_b, exp_a)
    t = 0.5 * (x + 1.0)
    u = p + t * (q - p)

    skip, phase = [], 1.0 + 0.0j
    if sing_a != 0.0:
        skip.append(A)
        phase *= tracker.endpoint_phase(A)
    if sing_b != 0.0:
        skip.append(B)
        phase *= tracker.endpoint_phase(B)
    vals = tracker.values(A, u, skip=tuple(skip))
    # refold singular magnitudes not carried by this piece's weight
    if sing_a != 0.0:
        if _same_point(p, A):
            # |u - A| = t * |q - p| exactly along the segment
            vals = vals * np.power(np.abs(q - p), sing_a) * 1.0
        else:
            vals = vals * np.power(np.abs(u - A), sing_a)
    if sing_b != 0.0:
        if _same_point(q, B):
            vals = vals * np.power(np.abs(q - p), sing_b)
        else:
            vals = vals * np.power(np.abs(u - B), sing_b)
    if inner_fn is not None:
        inner = np.empty_like(vals)
        for i, x1 in enumerate(u):
            inner[i] = inner_fn(complex(x1))
        vals = vals * inner
    h = 0.5
    pref = h ** (1.0 + exp_a + exp_b) * (q - p)
    # the weight variables are t in (0,1) scaled by |q-p| via the
    # magnitude refolds above; (q - p) supplies du including its phase
    return pref * phase * np.sum(w * vals * np.power(t, 0))


def _tracked_adaptive(tracker, A, B, sing_a, sing_b, tol_abs, rel_tol=1e-9,
                      inner_fn=None, n_lo=_N_LO, n_hi=_N_HI):
    total = 0.0 + 0.0j
    stack = [(A, B, 0)]
    panels = 0
    while stack:
        p, q, depth = stack.pop()
        panels += 1
        if panels > _PANEL_BUDGET:
            raise QuadratureError("panel budget exhausted on polyline segment")
        lo = _tracked_piece(tracker, A, B, p, q, sing_a, sing_b, n_lo, inner_fn)
        hi = _tracked_piece(tracker, A, B, p, q, sing_a, sing_b, n_hi, inner_fn)
        err = abs(hi - lo)
        if err <= max(tol_abs, rel_tol * abs(hi)) or depth >= _MAX_DEPTH:
            if depth >= _MAX_DEPTH and err > max(1e3 * tol_abs, 0.1 * abs(hi)):
                raise QuadratureError("polyline segment unevaluable")
            total += hi
        else:
            m = p + 0.5 * (q - p)
            stack.append((p, m, depth + 1))
            stack.append((m, q, depth + 1))
    return total


def _path_integral(f, vertices, sing_start, sing_end, rel_tol, inner_builder=None,
                   coupling=None):
    """Shared driver for polylines and loops (optionally iterated)."""
    vs = [complex(v) for v in vertices]
    check_clearance(f, vs)
    tracker = _ArgTracker(f, vs[0], vs[1] - vs[0])
    n_seg = len(vs) - 1

    # coupling bookkeeping for iterated integrals: tracked argument of
    # (rep - u1) with rep a representative inner point, so that outer
    # windings multiply the coupling branch by exact 2 pi k increments.
    rep = None
    if coupling is not None:
        rep = coupling["rep"]
        cexp = coupling["exponent"]
        wind = cmath.phase(rep - vs[0])

    results = []
    rough = None
    for k in range(n_seg):
        a, b = vs[k], vs[k + 1]
        sa = sing_start if k == 0 else 0.0
        sb = sing_end if k == n_seg - 1 else 0.0

        inner_fn = None
        if inner_builder is not None:
            def inner_fn(u1, a=a, wind0=(wind if coupling else 0.0)):
                val = inner_builder(u1)
                tr_arg = wind0 + cmath.phase((rep - u1) / (rep - a))
                princ = cmath.phase(rep - u1)
                kk = round((tr_arg - princ) / (2.0 * math.pi))
                if kk:
                    val *= cmath.exp(1j * cexp * 2.0 * math.pi * kk)
                return val

        seed = abs(_tracked_piece(tracker, a, b, a, b, sa, sb,
                                  12 if inner_builder else _N_LO, inner_fn))
        if rough is None or seed > rough:
            rough = seed
        tol_abs = rel_tol * max(rough, 1e-300)
        if inner_builder is not None:
            val = _tracked_adaptive(tracker, a, b, sa, sb, tol_abs,
                                    rel_tol=rel_tol, inner_fn=inner_fn,
                                    n_lo=10, n_hi=20)
        else:
            val = _tracked_adaptive(tracker, a, b, sa, sb, tol_abs,
                                    rel_tol=rel_tol)
        results.append(val)
        if coupling is not None:
            wind += cmath.phase((rep - b) / (rep - a))
        tracker.advance(b)
    return sum(results)


def integrate_complex_polyline(
    f: BranchedIntegrand, path: ContourSpec, rel_tol: float = 1e-8
) -> complex:
    """Integrate f along a polyline or closed loop with branch tracking.

    Polylines apply the crossing-interval orientation table to the real
    factors; complex factors keep their declared orientations.  Factors
    anchored at the two path endpoints may be singular (exponent > -1).
    """
    if path.kind == "loop":
        return _path_integral(f, path.vertices, 0.0, 0.0, rel_tol)
    if path.kind != "polyline":
        raise GeometryError(f"not a polyline contour: {path.kind}")
    if _same_point(path.vertices[0], path.vertices[-1]):
        return 0.0 + 0.0j
    lo, hi = path.crossing_interval
    _check_single_crossing(path.vertices, lo, hi)
    fo = f.with_orientations(lo, hi)
    sa = fo.endpoint_exponent(path.vertices[0])
    sb = fo.endpoint_exponent(path.vertices[-1])
    if sa <= -1.0 or sb <= -1.0:
        raise QuadratureError("polyline endpoint exponent <= -1")
    return _path_integral(fo, path.vertices, sa, sb, rel_tol)


# ---------------------------------------------------------------------------
# Pochhammer regularization

_TAYLOR_MAX = 3


def _g_derivatives(f: BranchedIntegrand, u: complex, order: int):
    """Derivatives at a regular point via logarithmic derivatives."""
    g = complex(f.value_principal(np.array([u]))[0])
    out = [g]
    if order >= 1:
        L = complex(f.logderiv(np.array([u]))[0])
        out.append(g * L)
    if order >= 2:
        L1 = -sum(fac.exponent / (u - fac.point) ** 2 for fac in f.factors)
        out.append(g * (L * L + L1))
    if order >= 3:
        L2 = 2.0 * sum(fac.exponent / (u - fac.point) ** 3 for fac in f.factors)
        out.append(g * (L**3 + 3.0 * L * L1 + L2))
    return out


def _finite_part_left(f, e, m, alpha, rel_tol):
    """Finite part of int_e^m (u-e)^alpha g(u) du, alpha <= -1 non-integer.

    ``f`` is the integrand with the singular endpoint factor stripped
    (g); only the left end is singular, m is a regular midpoint.
    """
    J = int(math.floor(-alpha))
    if J > _TAYLOR_MAX:
        raise QuadratureError(f"exponent {alpha} too singular")
    h = m - e
    derivs = _g_derivatives(f, e, J - 1)

    def near(s):
        s = np.asarray(s, dtype=float)
        u = e + s
        g = f.value_principal(u)
        t = np.zeros_like(g)
        for j, gj in enumerate(derivs):
            t = t + gj * np.power(s, j) / math.factorial(j)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = (g - t) * np.power(s, -float(J))
        return np.where(s == 0.0, 0.0, out)

    rough = abs(_gj_apply(near, 0.0, h, alpha + J, 0.0, _N_LO)) + 1e-300
    val = _adaptive_real(near, 0.0, h, alpha + J, 0.0, rel_tol * rough,
                         rel_tol=rel_tol)
    for j, gj in enumerate(derivs):
        val += gj * h ** (alpha + 1 + j) / (math.factorial(j) * (alpha + 1 + j))
    return val


def regularized_segment(
    f: BranchedIntegrand, a: float, b: float, rel_tol: float = 1e-8
) -> complex:
    """Analytic continuation of the segment integral in the endpoint exponents.

    Agrees with ``integrate_singular_segment`` when both endpoint
    exponents exceed -1; otherwise evaluates the Hadamard finite part
    (the value whose Pochhammer multiple is the double-loop integral).
    Integer exponents <= -1 are genuinely singular and raise.
    """
    a, b = float(a), float(b)
    fo = f.with_orientations(a, b)
    ea, eb = fo.endpoint_exponent(a), fo.endpoint_exponent(b)
    for e in (ea, eb):
        if e <= -1.0 and abs(e - round(e)) < 1e-12:
            raise QuadratureError(f"integer exponent {e} <= -1: no finite limit")
    if ea > -1.0 and eb > -1.0:
        return integrate_singular_segment(fo, a, b, rel_tol=rel_tol)
    m = 0.5 * (a + b)
    total = 0.0 + 0.0j
    if ea > -1.0:
        def reg(u):
            return fo.value_principal(u, skip=(a,))
        rough = abs(_gj_apply(reg, a, m, ea, 0.0, _N_LO)) + 1e-300
        total += _adaptive_real(reg, a, m, ea, 0.0, rel_tol * rough,
                                rel_tol=rel_tol)
    else:
        total += _finite_part_left(fo.without(a), a, m, ea, rel_tol)
    if eb > -1.0:
        def reg(u):
            return fo.value_principal(u, skip=(b,))
        rough = abs(_gj_apply(reg, m, b, 0.0, eb, _N_LO)) + 1e-300
        total += _adaptive_real(reg, m, b, 0.0, eb, rel_tol * rough,
                                rel_tol=rel_tol)
    else:
        # mirror the left-end logic through u -> a + b - u
        mirrored = BranchedIntegrand(
            tuple(
                BranchFactor(a + b - complex(fac.point), fac.exponent, fac.orientation)
                for fac in fo.without(b).factors
            )
        )
        total += _finite_part_left(mirrored, a, m, eb, rel_tol)
    return total


def pochhammer_integral(
    f: BranchedIntegrand, a: float, b: float, rel_tol: float = 1e-8
) -> complex:
    """Integral along a Pochhammer double loop entwining a and b.

    Returns 4 e^{i pi (b1 - b2)} sin(pi b1) sin(pi b2) times the
    (regularized) segment integral, b1/b2 the endpoint exponents.
    """
    fo = f.with_orientations(a, b)
    b1, b2 = fo.endpoint_exponent(a), fo.endpoint_exponent(b)
    seg = regularized_segment(fo, a, b, rel_tol=rel_tol)
    pref = (
        4.0
        * cmath.exp(1j * math.pi * (b1 - b2))
        * math.sin(math.pi * b1)
        * math.sin(math.pi * b2)
    )
    return pref * seg


# ---------------------------------------------------------------------------
# double integrals


@dataclass(frozen=True)
class CoupledIntegrand:
    """(factors in u1) x (factors in u2) x (u2 - u1)^coupling_exponent."""

    f1: BranchedIntegrand
    f2: BranchedIntegrand
    coupling_exponent: float


def double_integral(
    f: CoupledIntegrand,
    c1: ContourSpec,
    c2: ContourSpec,
    rel_tol: float = 1e-6,
) -> complex:
    """Iterated integral, u1 on c1 (outer contour), u2 on c2 (real segment).

    The contours must not intersect.  The coupling (u2 - u1)^c is
    evaluated with the principal branch in u2 for fixed u1 plus an
    exact winding correction when the outer contour crosses the real
    axis to the right of the inner segment (closed loops, or the
    deformed polylines of the loop identity).
    """
    if c2.kind != "real_segment":
        raise GeometryError("inner contour must be a real segment")
    a2, b2 = float(c2.a.real), float(c2.b.real)
    rep = 0.5 * (a2 + b2)
    cexp = f.coupling_exponent
    inner_tol = max(rel_tol / 30.0, 1e-11)

    inner_base = f.f2.with_orientations(a2, b2)
    e_a2 = inner_base.endpoint_exponent(a2)
    e_b2 = inner_base.endpoint_exponent(b2)

    def inner_builder(u1: complex) -> complex:
        fac = BranchFactor(point=u1, exponent=cexp, orientation=1)
        fi = replace(inner_base, factors=inner_base.factors + (fac,))

        def reg(u):
            return fi.value_principal(u, skip=(a2, b2))

        rough = abs(_gj_apply(reg, a2, b2, e_a2, e_b2, _N_LO))
        return _adaptive_real(
            reg, a2, b2, e_a2, e_b2, inner_tol * max(rough, 1e-300),
            rel_tol=inner_tol,
        )

    if c1.kind == "real_segment":
        a1, b1 = float(c1.a.real), float(c1.b.real)
        if not (b1 <= a2 + _PTOL or b2 <= a1 + _PTOL):
            raise GeometryError("contours intersect")
        f1o = f.f1.with_orientations(a1, b1)
        ea, eb = f1o.endpoint_exponent(a1), f1o.endpoint_exponent(b1)
        flip = 1.0 + 0.0j
        if b2 <= a1:
            # outer lies right of inner: principal (u2-u1) for real u1>u2
            # evaluates on the upper side of the cut, which is the
            # continuation used throughout (arg -> +pi).
            pass

        def reg(u):
            u = np.asarray(u, dtype=complex)
            base = f1o.value_principal(u, skip=(a1, b1))
            inner = np.array([inner_builder(complex(x)) for x in u])
            return base * inner

        rough = abs(_gj_apply(reg, a1, b1, ea, eb, 10))
        return flip * _adaptive_real(
            reg, a1, b1, ea, eb, rel_tol * max(rough, 1e-300), rel_tol=rel_tol
        )

    if c1.kind in ("polyline", "loop"):
        if c1.kind == "polyline":
            lo, hi = c1.crossing_interval
            _check_single_crossing(c1.vertices, lo, hi)
            f1o = f.f1.with_orientations(lo, hi)
            sa = f1o.endpoint_exponent(c1.vertices[0])
            sb = f1o.endpoint_exponent(c1.vertices[-1])
        else:
            f1o, sa, sb = f.f1, 0.0, 0.0
        return _path_integral(
            f1o,
            c1.vertices,
            sa,
            sb,
            rel_tol,
            inner_builder=inner_builder,
            coupling={"rep": rep, "exponent": cexp},
        )

    raise GeometryError(f"unsupported outer contour kind {c1.kind}")


# ---------------------------------------------------------------------------
# the I_i family (one screening charge, N=2) and its linear relation


def beta_recip(kappa: float) -> float:
    """1 / beta(-4/kappa, -4/kappa) = Gamma(-8/k) / Gamma(-4/k)^2."""
    return float(_gamma_fn(-8.0 / kappa) / _gamma_fn(-4.0 / kappa) ** 2)


def _rect_I_integrand(xs, z, kappa) -> BranchedIntegrand:
    z = complex(z)
    g = 8.0 / kappa - 1.0
    facs = [BranchFactor(float(x), -4.0 / kappa) for x in xs]
    facs += [BranchFactor(z, g), BranchFactor(z.conjugate(), g)]
    return BranchedIntegrand(tuple(facs))


def rect_I(i: int, xs, z, kappa, rel_tol: float = 1e-9) -> complex:
    """The screening integral I_i, i = 1..6, with x5 = z and x6 = conj z.

    I_2..I_4 run over the consecutive real segments, I_5 from x4 to z,
    I_6 from z to conj z (crossing the axis right of x4), and I_1 from
    conj z through +infinity and back from -infinity to x1; all are the
    analytic continuations of the real-axis configuration, normalized
    by 1/beta(-4/kappa, -4/kappa).
    """
    xs = [float(x) for x in xs]
    if not all(xs[k] < xs[k + 1] for k in range(3)):
        raise GeometryError("need ordered x1 < x2 < x3 < x4")
    z = complex(z)
    g = 8.0 / kappa - 1.0
    f = _rect_I_integrand(xs, z, kappa)

    if i in (2, 3, 4):
        val = integrate_singular_segment(f, xs[i - 2], xs[i - 1], rel_tol=rel_tol)
    elif i == 5:
        # all x's to the left: (u - x_j); z and conj z ahead: (z - u), (zb - u)
        fo = f.oriented(z, -1).oriented(z.conjugate(), -1)
        fo = replace(
            fo,
            factors=tuple(
                replace(fc, orientation=1) if abs(complex(fc.point).imag) < 1e-300
                else fc
                for fc in fo.factors
            ),
        )
        val = _path_integral(fo, (xs[3], z), -4.0 / kappa, g, rel_tol)
    elif i == 6:
        if abs(z.imag) < 1e-12:
            raise GeometryError("I_6 needs z off the real axis")
        xc = xs[3] + max(1.0, 2.0 * abs(z - xs[3]))
        fo = f.with_orientations(xc, math.inf)
        fo = fo.oriented(z, 1).oriented(z.conjugate(), -1)
        val = _path_integral(fo, (z, xc, z.conjugate()), g, g, rel_tol)
    elif i == 1:
        if abs(z.imag) < 1e-12:
            val = integrate_two_sided_tail(f, z.real, xs[0], rel_tol=rel_tol)
        else:
            R = xs[3] + 2.0 * max(1.0, abs(z - xs[3]))
            fo = f.with_orientations(R, math.inf)  # every point to the left
            leg = _path_integral(fo, (z.conjugate(), R), g, 0.0, rel_tol)
            tails = integrate_two_sided_tail(f, R, xs[0], rel_tol=rel_tol)
            val = leg + tails
    else:
        raise ValueError(f"i must be 1..6, got {i}")
    return beta_recip(kappa) * val


def linear_relation_check(xs, z, kappa, rel_tol: float = 1e-9) -> float:
    """Residual of I1 + q I2 + q^2 I3 + q^3 I4 + q^4 I5 - q^2 I6 = 0.

    q = exp(4 pi i / kappa); returns |lhs| / max_i |I_i|.  The relation
    comes from integrating the screening charge just above the real
    axis, where the interval-by-interval phases are exactly these
    powers of q.
    """
    q = cmath.exp(4j * math.pi / kappa)
    I = {i: rect_I(i, xs, z, kappa, rel_tol=rel_tol) for i in range(1, 7)}
    lhs = I[1] + q * I[2] + q**2 * I[3] + q**3 * I[4] + q**4 * I[5] - q**2 * I[6]
    return abs(lhs) / max(abs(v) for v in I.values())


def rect_script_I(i: int, xs, z, kappa, rel_tol: float = 1e-9) -> complex:
    """The real basis integrals: script-I_1 = I5 - q^2 I6 + I1, else I_i."""
    if i in (2, 3, 4):
        return rect_I(i, xs, z, kappa, rel_tol)
    if i == 1:
        q2 = cmath.exp(8j * math.pi / kappa)
        return (
            rect_I(5, xs, z, kappa, rel_tol)
            - q2 * rect_I(6, xs, z, kappa, rel_tol)
            + rect_I(1, xs, z, kappa, rel_tol)
        )
    raise ValueError("script-I index must be 1..4")
