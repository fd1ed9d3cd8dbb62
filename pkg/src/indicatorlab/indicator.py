"""Indicator functions of angular measures, from the closed integral formulas.

For the atom+piecewise-density measure class every integral in the defining
formulas is elementary, so evaluation is exact up to rounding: no quadrature
error enters.  For an integer order the formula only defines a periodic
function when the matching trigonometric moment of the measure vanishes;
construction is rejected otherwise.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import MomentConditionError, PreconditionError
from .measures import TWO_PI, AngularMeasure, Order
from .piecewise import TrigPiecewise
from .refine import golden_max, golden_max_batch

MOMENT_TOL = 1e-9
MIN_RESOLUTION = 64

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def default_resolution() -> int:
    """Grid resolution, overridable through INDICATORLAB_GRID."""
    try:
        n = int(os.environ.get("INDICATORLAB_GRID", "8192"))
    except ValueError:
        n = 8192
    return max(n, MIN_RESOLUTION)


def _measure_evaluator(measure: AngularMeasure, order: Order) -> Callable:
    """Vectorized closed-form evaluator of the indicator of the measure."""
    rho = order.rho
    atoms = measure.atoms
    pieces = measure.pieces
    integer = order.is_integer

    if integer:
        def fn(theta):
            t = np.mod(np.asarray(theta, dtype=float), TWO_PI)
            out = np.zeros_like(t)
            for phi, m in atoms:
                u = phi - t
                u = np.where(u > 0.0, u - TWO_PI, u)  # window (theta-2pi, theta]
                out -= m * u * np.sin(rho * u)
            for s, e, d in pieces:
                # part of the piece at or below theta enters unshifted,
                # the rest enters shifted by -2pi
                hi1 = np.minimum(e, t)
                out += d * np.where(hi1 > s, _anti_int(rho, hi1 - t) - _anti_int(rho, s - t), 0.0)
                lo2 = np.maximum(s, t)
                out += d * np.where(e > lo2,
                                    _anti_int(rho, e - TWO_PI - t) - _anti_int(rho, lo2 - TWO_PI - t),
                                    0.0)
            return out if out.ndim else float(out)
    else:
        scale = math.pi / math.sin(math.pi * rho)

        def fn(theta):
            t = np.mod(np.asarray(theta, dtype=float), TWO_PI)
            out = np.zeros_like(t)
            for phi, m in atoms:
                u = phi - t
                u = np.where(u > 0.0, u - TWO_PI, u)
                out += m * np.cos(rho * (-u - math.pi))
            for s, e, d in pieces:
                hi1 = np.minimum(e, t)
                out += d * np.where(hi1 > s,
                                    _anti_frac(rho, t, hi1) - _anti_frac(rho, t, np.full_like(t, s)),
                                    0.0)
                lo2 = np.maximum(s, t)
                out += d * np.where(e > lo2,
                                    _anti_frac(rho, t, np.full_like(t, e - TWO_PI))
                                    - _anti_frac(rho, t, lo2 - TWO_PI),
                                    0.0)
            out *= scale
            return out if out.ndim else float(out)

    return fn


def _anti_int(rho: float, u):
    """Antiderivative in phi of -(phi-theta) sin(rho (phi-theta)), u = phi-theta."""
    return -(np.sin(rho * u) / rho ** 2 - u * np.cos(rho * u) / rho)


def _anti_frac(rho: float, t, phi):
    """Antiderivative in phi of cos(rho (theta - phi - pi))."""
    return -np.sin(rho * (t - phi - math.pi)) / rho


class IndicatorFn:
    """Sampled 2pi-periodic function with an exact evaluator behind the grid.

    The grid is a cache; all refinement (maxima, level sets, integrals) goes
    back through ``fn``, which is exact for measure-built indicators and for
    everything composed from them.
    """

    def __init__(self, order: Order, fn: Callable, resolution: int,
                 breakpoints: Sequence[float] = (),
                 trig_pieces: Optional[TrigPiecewise] = None):
        if resolution < MIN_RESOLUTION:
            raise PreconditionError(
                f"grid resolution must be >= {MIN_RESOLUTION}, got {resolution}")
        self.order = order
        self.fn = fn
        self.resolution = int(resolution)
        self.theta = np.arange(self.resolution) * (TWO_PI / self.resolution)
        self.grid = np.asarray(fn(self.theta), dtype=float)
        self.breakpoints = np.array(sorted({b % TWO_PI for b in breakpoints}))
        self.trig_pieces = trig_pieces

    # -- evaluation ----------------------------------------------------------

    def __call__(self, t):
        return self.fn(t)

    @property
    def grid_step(self) -> float:
        return TWO_PI / self.resolution

    def with_trig(self, a: float, b: float) -> "IndicatorFn":
        """This function plus a*cos(rho t) + b*sin(rho t), same exactness."""
        rho = self.order.rho
        base = self.fn

        def fn(t):
            tt = np.asarray(t, dtype=float)
            return base(tt) + a * np.cos(rho * tt) + b * np.sin(rho * tt)

        return IndicatorFn(self.order, fn, self.resolution, self.breakpoints,
                           trig_pieces=None)

    def plus(self, other: Callable) -> "IndicatorFn":
        base = self.fn
        extra_bps = getattr(other, "breakpoints", ())
        bps = list(self.breakpoints) + [float(b) for b in np.atleast_1d(extra_bps)]

        def fn(t):
            tt = np.asarray(t, dtype=float)
            return base(tt) + np.asarray(other(tt), dtype=float)

        return IndicatorFn(self.order, fn, self.resolution, bps)

    # -- extrema ---------------------------------------------------------------

    def max_value(self) -> float:
        return self.refined_max()[1]

    def refined_max(self):
        """Global maximum refined by golden section on bracketing grid cells."""
        g = self.grid
        gmax = float(g.max())
        scale = 1.0 + float(np.abs(g).max())
        slack = (self.order.rho ** 2) * scale * self.grid_step ** 2 + 1e-12 * scale
        local = np.flatnonzero((g >= np.roll(g, 1)) & (g >= np.roll(g, -1)))
        local = local[g[local] >= gmax - slack][:64]
        best_t, best_v = 0.0, -math.inf
        if len(local):
            ts, vs = golden_max_batch(self.fn, self.theta[local] - self.grid_step,
                                      self.theta[local] + self.grid_step)
            k = int(np.argmax(vs))
            best_t, best_v = float(ts[k]) % TWO_PI, float(vs[k])
        if len(self.breakpoints):
            vb = np.asarray(self.fn(self.breakpoints), dtype=float)
            k = int(np.argmax(vb))
            if vb[k] > best_v:
                best_t, best_v = float(self.breakpoints[k]), float(vb[k])
        return best_t, best_v

    # -- integration -------------------------------------------------------------

    def integral(self, a: float = 0.0, b: float = TWO_PI) -> float:
        """Breakpoint-respecting composite Gauss-Legendre integral of fn."""
        if b < a:
            raise PreconditionError("integral bounds must satisfy a <= b")
        total = 0.0
        lo = a
        # integrate period chunks to keep node counts bounded
        while lo < b - 1e-15:
            hi = min(b, lo + TWO_PI)
            total += self._integral_chunk(lo, hi)
            lo = hi
        return total

    def _integral_chunk(self, a: float, b: float) -> float:
        cuts = [a, b]
        base = math.floor(a / TWO_PI)
        for shift in (base * TWO_PI, (base + 1) * TWO_PI):
            for bp in self.breakpoints:
                t = bp + shift
                if a < t < b:
                    cuts.append(t)
        cuts = np.unique(np.asarray(cuts))
        cap = min(0.25 * math.pi / self.order.rho, 0.2)
        nodes = []
        weights = []
        for lo, hi in zip(cuts, cuts[1:]):
            nsub = max(1, int(math.ceil((hi - lo) / cap)))
            edges = np.linspace(lo, hi, nsub + 1)
            half = 0.5 * (edges[1:] - edges[:-1])
            mid = 0.5 * (edges[1:] + edges[:-1])
            nodes.append((mid[:, None] + half[:, None] * _GL_X[None, :]).ravel())
            weights.append((half[:, None] * _GL_W[None, :]).ravel())
        ts = np.concatenate(nodes)
        ws = np.concatenate(weights)
        return float(np.dot(np.asarray(self.fn(ts), dtype=float), ws))


def from_callable(order: Order, fn: Callable, resolution: Optional[int] = None,
                  breakpoints: Sequence[float] = ()) -> IndicatorFn:
    """Wrap an arbitrary 2pi-periodic callable for use with the toolbox."""
    res = resolution or default_resolution()

    def wrapped(t):
        return np.asarray(fn(np.asarray(t, dtype=float)), dtype=float)

    return IndicatorFn(order, wrapped, res, breakpoints)


def _atomic_trig_pieces(measure: AngularMeasure, order: Order,
                        fn: Callable) -> Optional[TrigPiecewise]:
    """Exact piecewise a*cos+b*sin form between atoms (purely atomic measures)."""
    if measure.pieces or not measure.atoms:
        return None
    rho = order.rho
    cuts = sorted(t for t, _ in measure.atoms)
    cuts.append(cuts[0] + TWO_PI)
    pieces = []
    for lo, hi in zip(cuts, cuts[1:]):
        length = hi - lo
        if length <= 1e-12:
            continue
        dt = min(length / 3.0, 0.5 * math.pi / rho)
        t1 = lo + (length - dt) / 2.0
        t2 = t1 + dt
        m = np.array([[math.cos(rho * t1), math.sin(rho * t1)],
                      [math.cos(rho * t2), math.sin(rho * t2)]])
        v = np.array([float(fn(t1)), float(fn(t2))])
        try:
            a, b = np.linalg.solve(m, v)
        except np.linalg.LinAlgError:
            return None
        pieces.append((lo, hi, a, b, 0.0))
    return TrigPiecewise(rho, pieces)


def build_indicator(measure: AngularMeasure, order: Order,
                    resolution: Optional[int] = None) -> IndicatorFn:
    """Indicator of the measure on a uniform grid with exact pointwise values."""
    if order.is_integer:
        moment = measure.rho_moment(order)
        if abs(moment) > MOMENT_TOL:
            raise MomentConditionError(order.rho, moment)
    res = resolution or default_resolution()
    fn = _measure_evaluator(measure, order)
    bps = [t for t, _ in measure.atoms]
    for s, e, _ in measure.pieces:
        bps.extend((s, e))
    h = IndicatorFn(order, fn, res, bps,
                    trig_pieces=_atomic_trig_pieces(measure, order, fn))
    return h


def indicator_at(measure: AngularMeasure, order: Order, theta: float) -> float:
    """Closed-form indicator value at a single angle."""
    if order.is_integer:
        moment = measure.rho_moment(order)
        if abs(moment) > MOMENT_TOL:
            raise MomentConditionError(order.rho, moment)
    return float(_measure_evaluator(measure, order)(theta))


# ---------------------------------------------------------------------------
# diagnostics: the defining distributional ODE and trigonometric convexity
# ---------------------------------------------------------------------------

@dataclass
class AtomJump:
    position: float
    mass: float
    estimated: float
    expected: float

    @property
    def rel_error(self) -> float:
        return abs(self.estimated - self.expected) / abs(self.expected)


@dataclass
class OdeReport:
    smooth_residual_max: float
    max_abs_h: float
    jumps: list

    @property
    def jump_rel_error_max(self) -> float:
        return max((j.rel_error for j in self.jumps), default=0.0)


def _density_at(measure: AngularMeasure, theta: np.ndarray) -> np.ndarray:
    out = np.zeros_like(theta)
    for s, e, d in measure.pieces:
        out[(theta > s) & (theta < e)] = d
    return out


def check_ode(h: IndicatorFn, measure: AngularMeasure) -> OdeReport:
    """Check h'' + rho^2 h = 2 pi rho * measure in both its distributional parts.

    Smooth part: second central differences on grid points at least 3 steps
    from any breakpoint, against 2 pi rho times the local density.  Atoms: the
    one-sided derivative jump at step 1e-3 against 2 pi rho times the mass.
    """
    rho = h.order.rho
    g = h.grid
    step = h.grid_step
    d2 = (np.roll(g, -1) - 2.0 * g + np.roll(g, 1)) / step ** 2
    residual = d2 + rho ** 2 * g - TWO_PI * rho * _density_at(measure, h.theta)

    keep = np.ones(h.resolution, dtype=bool)
    for bp in h.breakpoints:
        dist = np.abs((h.theta - bp + math.pi) % TWO_PI - math.pi)
        keep &= dist > 3.0 * step
    smooth_max = float(np.abs(residual[keep]).max()) if keep.any() else 0.0

    jumps = []
    bps = sorted(h.breakpoints)
    for pos, mass in measure.atoms:
        gap = TWO_PI
        for bp in bps:
            d = abs((bp - pos + math.pi) % TWO_PI - math.pi)
            if d > 1e-12:
                gap = min(gap, d)
        delta = min(1e-3, gap / 3.0)
        right = (float(h.fn(pos + delta)) - float(h.fn(pos))) / delta
        left = (float(h.fn(pos)) - float(h.fn(pos - delta))) / delta
        jumps.append(AtomJump(pos, mass, right - left, TWO_PI * rho * mass))

    return OdeReport(smooth_max, float(np.abs(g).max()), jumps)


@dataclass
class ConvexityReport:
    passed: bool
    worst_value: float
    worst_pair: tuple
    tolerance: float


def _one_sided(fn, x: float, delta: float, side: int) -> float:
    """Second-order one-sided derivative; side=+1 right, -1 left."""
    s = side * delta
    return (-3.0 * float(fn(x)) + 4.0 * float(fn(x + s)) - float(fn(x + 2 * s))) / (2.0 * s)


def _effective_breakpoints(h: IndicatorFn) -> np.ndarray:
    """Declared breakpoints plus grid cells where curvature spikes (hidden kinks)."""
    g = h.grid
    step = h.grid_step
    d2 = np.abs(np.roll(g, -1) - 2.0 * g + np.roll(g, 1))
    scale = 1.0 + float(np.abs(g).max())
    smooth_bound = 16.0 * (h.order.rho ** 2) * scale * step ** 2 + 1e-12
    spikes = h.theta[d2 > smooth_bound]
    combined = set(float(b) for b in h.breakpoints) | set(float(s) for s in spikes)
    return np.array(sorted(combined))


def _safe_delta(x: float, bps: np.ndarray, default: float = 1e-5) -> float:
    if len(bps) == 0:
        return default
    dist = np.abs((bps - x + math.pi) % TWO_PI - math.pi)
    dist = dist[dist > 1e-12]
    if len(dist) == 0:
        return default
    return min(default, float(dist.min()) / 3.0)


def check_trig_convexity(h: IndicatorFn) -> ConvexityReport:
    """Test h'_+(b) - h'_-(a) + rho^2 * int_a^b h >= 0 over a pair battery.

    Pairs cover every breakpoint (declared or detected), breakpoint pairs,
    and a coarse sweep of smooth (a, b) windows at several widths.  Passing
    threshold is -1e-6 * (1 + max|h|).
    """
    rho = h.order.rho
    scale = 1.0 + float(np.abs(h.grid).max())
    tol = 1e-6 * scale
    bps = _effective_breakpoints(h)

    def pair_value(a: float, b: float) -> float:
        da = _safe_delta(a, bps)
        db = _safe_delta(b, bps)
        val = _one_sided(h.fn, b, db, +1) - _one_sided(h.fn, a, da, -1)
        if b > a:
            val += rho ** 2 * h.integral(a, b)
        return val

    worst = (math.inf, (0.0, 0.0))

    def consider(a, b):
        nonlocal worst
        v = pair_value(a, b)
        if v < worst[0]:
            worst = (v, (a, b))

    for s in bps:
        consider(float(s), float(s))
    for i, a in enumerate(bps):
        for b in bps:
            bb = b if b >= a else b + TWO_PI
            if 0.0 < bb - a <= TWO_PI:
                consider(float(a), float(bb))

    step = h.grid_step
    sweep = np.linspace(0.0, TWO_PI, 65)[:-1]
    widths = [3.0 * step, 0.25 * math.pi / rho, 0.9 * math.pi / rho,
              1.7 * math.pi / rho, math.pi]
    for a in sweep:
        for w in widths:
            consider(float(a), float(a + min(w, TWO_PI)))

    # straddle detected kinks with one grid cell
    for s in bps:
        consider(float(s - step), float(s + step))

    passed = worst[0] >= -tol
    return ConvexityReport(passed, worst[0], worst[1], tol)
