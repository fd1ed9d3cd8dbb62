"""Convex geometry of indicators: support-function folding, circumcenter,
balanced modification, maximizer sets and (local) balancedness tests."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import PreconditionError
from .indicator import IndicatorFn, check_trig_convexity, from_callable
from .measures import TWO_PI, Order
from .refine import bisect_level, golden_max, golden_max_batch

_SLACK = 1e-9


@dataclass(frozen=True)
class TrigCorrection:
    """k(t) = A cos(rho t) + B sin(rho t); complex form C = A - iB."""

    A: float = 0.0
    B: float = 0.0

    @property
    def as_complex(self) -> complex:
        return complex(self.A, -self.B)

    def __call__(self, t, rho: float):
        tt = np.asarray(t, dtype=float)
        return self.A * np.cos(rho * tt) + self.B * np.sin(rho * tt)

    @property
    def is_zero(self) -> bool:
        return self.A == 0.0 and self.B == 0.0


class IntervalSet:
    """Finite union of closed arcs of the circle; point arcs allowed.

    Arcs are stored as (start, end) with start in [0, 2pi) and
    end - start in [0, 2pi]; end may exceed 2pi for wrapping arcs, and a
    single arc of length 2pi means the full circle.
    """

    def __init__(self, arcs: Sequence[Sequence[float]] = ()):
        cleaned = []
        for s, e in arcs:
            s, e = float(s), float(e)
            length = e - s
            if length < -1e-12:
                raise PreconditionError(f"arc with negative length: ({s}, {e})")
            length = max(length, 0.0)
            if length >= TWO_PI - 1e-12:
                self.arcs = ((0.0, TWO_PI),)
                return
            s_mod = s % TWO_PI
            cleaned.append((s_mod, s_mod + length))
        cleaned.sort()
        merged: list[list[float]] = []
        for s, e in cleaned:
            if merged and s <= merged[-1][1] + 1e-12:
                merged[-1][1] = max(merged[-1][1], e)
            else:
                merged.append([s, e])
        # wrap merge: last arc reaching past 2pi may touch the first
        if len(merged) >= 2 and merged[-1][1] >= merged[0][0] + TWO_PI - 1e-12:
            merged[0][0] = merged[-1][0] - TWO_PI
            merged[0][1] = max(merged[0][1], merged[-1][1] - TWO_PI)
            merged.pop()
            s0 = merged[0][0] % TWO_PI
            merged[0] = [s0, s0 + (merged[0][1] - merged[0][0])]
            merged.sort()
        if merged and merged[0][1] - merged[0][0] >= TWO_PI - 1e-12:
            self.arcs = ((0.0, TWO_PI),)
            return
        self.arcs = tuple((s, e) for s, e in merged)

    def __repr__(self):
        return f"IntervalSet({list(self.arcs)!r})"

    def __eq__(self, other):
        return isinstance(other, IntervalSet) and self.arcs == other.arcs

    @property
    def is_empty(self) -> bool:
        return len(self.arcs) == 0

    @property
    def is_full(self) -> bool:
        return len(self.arcs) == 1 and self.arcs[0][1] - self.arcs[0][0] >= TWO_PI - 1e-12

    @property
    def total_length(self) -> float:
        return sum(e - s for s, e in self.arcs)

    def contains(self, t: float, tol: float = 1e-12) -> bool:
        tt = t % TWO_PI
        for s, e in self.arcs:
            rel = (tt - s) % TWO_PI
            if rel <= (e - s) + tol or rel >= TWO_PI - tol:
                return True
        return False

    def gaps(self):
        """Circular gaps (start, length) between consecutive arcs."""
        if self.is_empty or self.is_full:
            return []
        out = []
        n = len(self.arcs)
        for k in range(n):
            end = self.arcs[k][1]
            nxt = self.arcs[(k + 1) % n][0] + (TWO_PI if k == n - 1 else 0.0)
            out.append((end, nxt - end))
        return out

    def endpoints(self):
        pts = []
        for s, e in self.arcs:
            pts.append(s % TWO_PI)
            pts.append(e % TWO_PI)
        return sorted(set(pts))


# ---------------------------------------------------------------------------
# maximizer sets and superlevel sets
# ---------------------------------------------------------------------------

def superlevel_set(h: IndicatorFn, level: float, refine: bool = True) -> IntervalSet:
    """{t : h(t) >= level} with endpoints bisected to 1e-9 radians."""
    g = h.grid
    inside = g >= level
    n = h.resolution
    arcs = []
    if inside.all():
        return IntervalSet([(0.0, TWO_PI)])
    if inside.any():
        # group circular runs of inside points
        idx = np.flatnonzero(inside)
        splits = np.flatnonzero(np.diff(idx) > 1)
        runs = np.split(idx, splits + 1)
        if len(runs) > 1 and idx[0] == 0 and idx[-1] == n - 1:
            runs[0] = np.concatenate([runs[-1] - n, runs[0]])
            runs.pop()
        for run in runs:
            i_lo, i_hi = run[0], run[-1]
            t_lo = h.theta[i_lo % n] - (TWO_PI if i_lo < 0 else 0.0)
            t_hi = h.theta[i_hi % n]
            if refine:
                t_lo = -bisect_level(lambda u: h.fn(-u), level, -t_lo, -(t_lo - h.grid_step))
                t_hi = bisect_level(h.fn, level, t_hi, t_hi + h.grid_step)
            arcs.append((t_lo, t_hi))
    # strict local maxima that might clear the level inside a single grid
    # cell; a sub-cell peak can exceed its grid neighbours by at most the
    # curvature allowance, so anything further below the level is hopeless
    scale = 1.0 + float(np.abs(g).max())
    allowance = 2.0 * (h.order.rho ** 2) * scale * h.grid_step ** 2
    cand = ((g > np.roll(g, 1)) & (g > np.roll(g, -1)) & ~inside
            & (g >= level - allowance))
    gmax_idx = np.flatnonzero(cand)
    if len(gmax_idx) > 128:
        gmax_idx = gmax_idx[np.argsort(g[gmax_idx])[::-1][:128]]
    for i in gmax_idx:
        lo = h.theta[i] - h.grid_step
        hi = h.theta[i] + h.grid_step
        t, v = golden_max(h.fn, lo, hi)
        if v >= level:
            a = -bisect_level(lambda u: h.fn(-u), level, -t, -(t - h.grid_step)) if refine else t
            b = bisect_level(h.fn, level, t, t + h.grid_step) if refine else t
            arcs.append((a, b))
    return IntervalSet(arcs)


def max_set(h: IndicatorFn, tol: Optional[float] = None) -> IntervalSet:
    """Set of near-maximizers {t : h(t) >= max h - tol}."""
    _, m = h.refined_max()
    if tol is None:
        tol = 1e-6 * (1.0 + abs(m))
    if tol <= 0:
        raise PreconditionError("max_set tolerance must be positive")
    return superlevel_set(h, m - tol)


# ---------------------------------------------------------------------------
# balancedness
# ---------------------------------------------------------------------------

def _image_arcs(M: IntervalSet, rho: float) -> IntervalSet:
    """Image of the set under t -> rho t on the circle (arcs map to arcs)."""
    arcs = []
    for s, e in M.arcs:
        length = rho * (e - s)
        if length >= TWO_PI:
            return IntervalSet([(0.0, TWO_PI)])
        arcs.append((rho * s, rho * s + length))
    return IntervalSet(arcs)


def is_balanced(M: IntervalSet, order: Order) -> bool:
    """Origin in the convex hull of {exp(i rho t) : t in M}.

    Equivalent to: the image point set on the unit circle has no angular gap
    larger than pi (gap = pi means antipodal extremes, which still qualify).
    """
    if M.is_empty:
        raise PreconditionError("balancedness is undefined for an empty set")
    img = _image_arcs(M, order.rho)
    if img.is_full:
        return True
    max_gap = max(length for _, length in img.gaps())
    return max_gap <= math.pi + _SLACK


def _candidate_points(M: IntervalSet, order: Order):
    """Arc endpoints plus half-period translates of endpoints landing in M."""
    pts = set(M.endpoints())
    hp = order.half_period
    base = list(pts)
    for e in base:
        for cand in (e + hp, e - hp):
            if M.contains(cand, tol=1e-12):
                pts.add(cand % TWO_PI)
    return sorted(pts)


def is_locally_balanced(M: IntervalSet, order: Order):
    """Three-point window test; returns (bool, witness triple or None).

    A triple (a, b, g) of points of M with b - a <= pi/rho, g - b < pi/rho and
    g - a >= pi/rho (inequalities closed with 1e-9 slack) certifies that the
    origin is caught inside a window of length 2pi/rho.
    """
    if M.is_empty:
        raise PreconditionError("local balancedness is undefined for an empty set")
    hp = order.half_period
    if M.is_full:
        return True, (0.0, hp, min(2 * hp, TWO_PI))
    if hp >= TWO_PI - _SLACK:
        # window longer than the circle: any point repeats into a valid triple
        a = M.endpoints()[0]
        j = math.floor(hp / TWO_PI)
        k = math.ceil(hp / TWO_PI)
        if j < 1:
            j = 1
        return True, (a, a + TWO_PI * j, a + TWO_PI * k)
    cands = _candidate_points(M, order)
    lifts = []
    for c in cands:
        lifts.extend((c, c + TWO_PI, c + 2 * TWO_PI))
    lifts.sort()
    for a in cands:
        window = [x for x in lifts if a - _SLACK <= x <= a + 2 * hp + _SLACK]
        for b in window:
            if not (-_SLACK <= b - a <= hp + _SLACK):
                continue
            for g in window:
                if g < b - _SLACK:
                    continue
                if (g - b < hp + _SLACK) and (g - a >= hp - _SLACK):
                    return True, (a, b, g)
    return False, None


def coverable_by_sparse_intervals(M: IntervalSet, order: Order) -> bool:
    """Dual covering test: can M be covered by open intervals of length < pi/rho
    with pairwise gaps > pi/rho?  True exactly when M is NOT locally balanced."""
    if M.is_empty:
        raise PreconditionError("covering test is undefined for an empty set")
    hp = order.half_period
    if M.is_full:
        return False
    if hp >= TWO_PI - _SLACK:
        return False
    arcs = list(M.arcs)
    n = len(arcs)
    gaps = [g for _, g in M.gaps()]
    # arcs separated by a gap <= pi/rho are forced into the same cover interval
    boundaries = [k for k in range(n) if gaps[k] > hp + _SLACK]
    if not boundaries:
        # everything merges into one circular cluster: coverable only when the
        # whole set fits in one open interval of length < pi/rho whose own
        # wrap-around gap still exceeds pi/rho
        span = TWO_PI - max(gaps)
        return span < hp - _SLACK and span < TWO_PI - hp - _SLACK
    spans = []
    for idx, b in enumerate(boundaries):
        b_next = boundaries[(idx + 1) % len(boundaries)]
        first = (b + 1) % n
        count = (b_next - b) % n or n
        start = arcs[first][0]
        lift = 0.0
        prev_k = first
        end = arcs[first][1]
        for j in range(1, count):
            k = (first + j) % n
            if k < prev_k:
                lift = TWO_PI
            end = arcs[k][1] + lift
            prev_k = k
        spans.append(end - start)
    return all(span < hp - _SLACK for span in spans)


# ---------------------------------------------------------------------------
# h* folding, circumcenter, balanced modification
# ---------------------------------------------------------------------------

def build_h_star(h: IndicatorFn) -> IndicatorFn:
    """Fold an integer-order function onto order 1:
    h*(t) = max_j h((t + 2 pi j) / rho), the support function of the folded body."""
    if not h.order.is_integer:
        raise PreconditionError("h* folding requires an integer order")
    rho = h.order.int_value
    base = h.fn

    def fn(t):
        tt = np.asarray(t, dtype=float)
        vals = [np.asarray(base((tt + TWO_PI * j) / rho)) for j in range(rho)]
        return np.maximum.reduce(vals)

    bps = sorted({(rho * b) % TWO_PI for b in h.breakpoints})
    return IndicatorFn(Order(1.0), fn, h.resolution, bps)


@dataclass
class CircumData:
    center: complex
    radius: float
    contact_set: IntervalSet


def circumcenter(hstar: IndicatorFn, check: bool = True,
                 value_tol: float = 1e-8) -> CircumData:
    """Chebyshev/circumcenter of the convex body with support function hstar.

    Minimizes F(c) = max_t (hstar(t) - <c, (cos t, sin t)>), a convex piecewise
    smooth function of c, by cutting planes over an LP relaxation; the
    returned radius is the certified maximum at the optimal center.
    """
    if hstar.order.rho != 1.0:
        raise PreconditionError("circumcenter expects an order-1 support function")
    if check:
        rep = check_trig_convexity(hstar)
        if not rep.passed:
            raise PreconditionError(
                f"support function is not 1-trigonometrically convex "
                f"(worst violation {rep.worst_value:.3e} at {rep.worst_pair})")

    grid_t = hstar.theta
    grid_v = hstar.grid
    coarse = max(1, hstar.resolution // 1024)
    ts = np.unique(np.concatenate([grid_t[::coarse], np.asarray(hstar.breakpoints)]))
    vs = np.asarray(hstar.fn(ts), dtype=float)
    step = hstar.grid_step

    def refined_peaks(cx: float, cy: float):
        """Exact local maxima of the centered support, best first."""
        cg = grid_v - cx * np.cos(grid_t) - cy * np.sin(grid_t)
        loc = np.flatnonzero((cg >= np.roll(cg, 1)) & (cg >= np.roll(cg, -1)))
        loc = loc[np.argsort(cg[loc])[::-1]][:8]

        def centered(t):
            tt = np.asarray(t, dtype=float)
            return np.asarray(hstar.fn(tt)) - cx * np.cos(tt) - cy * np.sin(tt)

        ts, vs = golden_max_batch(centered, grid_t[loc] - step, grid_t[loc] + step)
        peaks = list(zip(ts.tolist(), vs.tolist()))
        for b in hstar.breakpoints:
            peaks.append((float(b), float(centered(float(b)))))
        peaks.sort(key=lambda p: -p[1])
        return peaks

    center = np.zeros(2)
    radius = float(vs.max())
    scale = 1.0 + float(np.abs(grid_v).max())
    prev_radius = math.inf
    stagnant = 0
    for _ in range(25):
        a_ub = np.column_stack([-np.cos(ts), -np.sin(ts), -np.ones_like(ts)])
        res = linprog(c=[0.0, 0.0, 1.0], A_ub=a_ub, b_ub=-vs,
                      bounds=[(None, None)] * 3, method="highs")
        if not res.success:
            raise RuntimeError(f"circumcenter LP failed: {res.message}")
        cx, cy, r = res.x
        peaks = refined_peaks(cx, cy)
        center = np.array([cx, cy])
        radius = peaks[0][1]
        if radius <= r + value_tol:
            break
        # flat (quadratic) directions stall the LP lower bound long after the
        # value has converged: stop once the certified max stops moving
        stagnant = stagnant + 1 if abs(radius - prev_radius) <= 1e-11 * scale else 0
        if stagnant >= 2:
            break
        prev_radius = radius
        new_ts = np.asarray([t % TWO_PI for t, _ in peaks])
        ts = np.unique(np.concatenate([ts, new_ts]))
        vs = np.asarray(hstar.fn(ts), dtype=float)

    cx, cy = center

    # with exactly two contact directions the enclosing circle is pinned by a
    # diameter: the value is flat (quadratic) along the perpendicular axis and
    # the LP locates the center only to ~sqrt(value_tol) there; bisection on
    # the subgradient sign along that axis pins it down
    scale_v = 1.0 + float(np.abs(grid_v).max())
    top = [p for p in peaks if p[1] >= radius - 1e-8 * scale_v]
    dirs: list = []
    for t, _ in top:
        if all(abs((t - s + math.pi) % TWO_PI - math.pi) > 0.2 for s in dirs):
            dirs.append(t % TWO_PI)
    gap = abs((dirs[0] - dirs[1] + math.pi) % TWO_PI - math.pi) if len(dirs) == 2 else 0.0
    if len(dirs) == 2 and abs(gap - math.pi) < 0.1:
        t0 = dirs[0]
        v = np.array([-math.sin(t0), math.cos(t0)])

        def flat_sign(s: float) -> float:
            c_try = center + s * v
            cg = grid_v - c_try[0] * np.cos(grid_t) - c_try[1] * np.sin(grid_t)
            i = int(np.argmax(cg))
            t_hat, _ = golden_max(
                lambda t: float(hstar.fn(t)) - c_try[0] * math.cos(t)
                - c_try[1] * math.sin(t),
                grid_t[i] - step, grid_t[i] + step)
            return v[0] * math.cos(t_hat) + v[1] * math.sin(t_hat)

        lo, hi = -2e-2 * scale_v, 2e-2 * scale_v
        if flat_sign(lo) > 0.0 > flat_sign(hi):
            while hi - lo > 1e-9:
                mid = 0.5 * (lo + hi)
                if flat_sign(mid) > 0.0:
                    lo = mid
                else:
                    hi = mid
            center = center + 0.5 * (lo + hi) * v
            cx, cy = center
            radius = refined_peaks(cx, cy)[0][1]

    def centered(t):
        tt = np.asarray(t, dtype=float)
        return np.asarray(hstar.fn(tt)) - cx * np.cos(tt) - cy * np.sin(tt)

    probe = from_callable(Order(1.0), centered, hstar.resolution, hstar.breakpoints)
    contact = max_set(probe)
    return CircumData(complex(cx, cy), radius, contact)


def balanced_modification(h: IndicatorFn):
    """Subtract the trig correction that centers the folded body.

    Non-integer orders return (h, zero correction).  For integer orders the
    result is balanced: the maximizer set of the output traps the origin in
    the convex hull of its image directions (post-checked).
    """
    if not h.order.is_integer:
        return h, TrigCorrection(0.0, 0.0)
    data = circumcenter(build_h_star(h), check=False)
    a, b = data.center.real, data.center.imag
    if abs(a) < 1e-13 and abs(b) < 1e-13:
        return h, TrigCorrection(0.0, 0.0)
    h_hat = h.with_trig(-a, -b)
    if not is_balanced(max_set(h_hat), h.order):
        raise RuntimeError(
            "balanced modification postcheck failed: maximizer set of the "
            "corrected function is not balanced (numerical inconsistency)")
    return h_hat, TrigCorrection(a, b)


# ---------------------------------------------------------------------------
# brute-force minimax oracle over the two-parameter trig family
# ---------------------------------------------------------------------------

def trig_shift_minimax(h: IndicatorFn, n_ab: int = 101, span: Optional[float] = None,
                       levels: int = 3, grid_n: int = 1024):
    """min over (A, B) of max_t [h(t) + A cos(rho t) + B sin(rho t)] by a
    zooming brute-force grid sweep; independent of the circumcenter route.

    Returns (value, (A, B)).
    """
    rho = h.order.rho
    step = max(1, h.resolution // grid_n)
    theta = h.theta[::step]
    base = h.grid[::step]
    if span is None:
        span = 2.0 * float(np.abs(h.grid).max()) + 1e-12
    ct = np.cos(rho * theta)
    st = np.sin(rho * theta)

    a0, b0 = 0.0, 0.0
    half = span
    n_side = n_ab
    for level in range(levels):
        # the wide first sweep only locates the basin (the objective is convex
        # in (A, B)), so a thinned t-grid suffices there; zoom levels recenter
        # on each argmin and rescan at full resolution
        sl = slice(None, None, 2) if level == 0 else slice(None)
        avals = np.linspace(a0 - half, a0 + half, n_side)
        bvals = np.linspace(b0 - half, b0 + half, n_side)
        vals = (base[None, None, sl]
                + np.multiply.outer(avals, ct[sl])[:, None, :]
                + np.multiply.outer(bvals, st[sl])[None, :, :]).max(axis=2)
        i, j = np.unravel_index(np.argmin(vals), vals.shape)
        a0, b0 = float(avals[i]), float(bvals[j])
        half = 2.0 * (2.0 * half / (n_side - 1))
        n_side = 31 if level == 0 else n_side
    # exact maximum over t at the winning shift
    shifted = h.with_trig(a0, b0)
    return shifted.refined_max()[1], (a0, b0)
