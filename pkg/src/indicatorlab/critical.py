"""Critical zero-set type, bounds for the critical uniqueness type, and the
reducing-multiplier construction that certifies upper bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .balance import (IntervalSet, balanced_modification,
                      coverable_by_sparse_intervals, is_locally_balanced,
                      max_set, superlevel_set)
from .errors import CoverConstructionError, PreconditionError
from .indicator import IndicatorFn, build_indicator, check_trig_convexity, from_callable
from .measures import TWO_PI, AngularMeasure, Order
from .piecewise import TrigPiecewise
from .refine import max_on_arc

_SLACK = 1e-9


class MultiplierFn:
    """Continuous piecewise rho-trigonometric competitor function.

    A valid multiplier must be continuous (junction mismatch <= 1e-9) and
    rho-trigonometrically convex; only then does max(h + k) certify an upper
    bound for the critical uniqueness type.
    """

    def __init__(self, order: Order, profile: TrigPiecewise):
        self.order = order
        self.profile = profile

    def __call__(self, t):
        return self.profile(t)

    @property
    def breakpoints(self):
        return self.profile.breakpoints

    def validate(self, resolution: int = 4096) -> None:
        mismatch = self.profile.junction_mismatch()
        if mismatch > 1e-9:
            raise PreconditionError(
                f"multiplier is discontinuous: junction mismatch {mismatch:.3e}")
        sampled = from_callable(self.order, self.profile, resolution,
                                self.profile.breakpoints)
        rep = check_trig_convexity(sampled)
        if not rep.passed:
            raise PreconditionError(
                "multiplier is not trigonometrically convex "
                f"(violation {rep.worst_value:.3e} at {rep.worst_pair}); "
                "an invalid multiplier certifies nothing")

    def scaled(self, c: float) -> "MultiplierFn":
        """Multiplier for the c-scaled measure: coefficients multiply by c."""
        if c <= 0:
            raise PreconditionError("multiplier scale must be positive")
        return MultiplierFn(self.order, TrigPiecewise(
            self.order.rho,
            [(p.start, p.end, c * p.a, c * p.b, p.t0) for p in self.profile.pieces]))

    def to_dict(self) -> dict:
        return self.profile.to_dict()

    @classmethod
    def from_dict(cls, order: Order, data: dict) -> "MultiplierFn":
        return cls(order, TrigPiecewise(order.rho, [
            (p["start"], p["end"], p.get("a", 0.0), p.get("b", 0.0), p.get("t0", 0.0))
            for p in data["pieces"]]))


@dataclass
class TypeReport:
    sigma_z: float
    sigma_u_lower: float
    sigma_u_upper: float
    equality: bool
    method_notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (-1e-9 <= self.sigma_u_lower <= self.sigma_u_upper + 1e-9
                <= self.sigma_z + 2e-9):
            raise PreconditionError(
                f"inconsistent type report: lower={self.sigma_u_lower}, "
                f"upper={self.sigma_u_upper}, sigma_z={self.sigma_z}")


# ---------------------------------------------------------------------------
# exact zero-set type
# ---------------------------------------------------------------------------

def zero_set_type_from_indicator(h: IndicatorFn):
    """sigma_z together with the balanced representative it was read from."""
    h_hat, corr = balanced_modification(h)
    return h_hat.refined_max()[1], h_hat, corr


def zero_set_type(measure: AngularMeasure, order: Order,
                  resolution: Optional[int] = None) -> float:
    """Critical zero-set type: max h for non-integer order, circumradius of the
    folded body (= max of the balanced representative) for integer order."""
    h = build_indicator(measure, order, resolution)
    return zero_set_type_from_indicator(h)[0]


# ---------------------------------------------------------------------------
# lower bounds for the uniqueness type
# ---------------------------------------------------------------------------

def half_period_average_bound(h: IndicatorFn) -> float:
    """(1/2) max_t [h(t) + h(t + pi/rho)]; valid for rho > 1/2."""
    rho = h.order.rho
    if rho <= 0.5:
        raise PreconditionError(
            "the averaged-shift lower bound is only asserted for rho > 1/2")
    hp = h.order.half_period
    base = h.fn

    def avg(t):
        tt = np.asarray(t, dtype=float)
        return 0.5 * (np.asarray(base(tt)) + np.asarray(base(tt + hp)))

    probe = from_callable(h.order, avg, h.resolution,
                          list(h.breakpoints) + [(b - hp) % TWO_PI for b in h.breakpoints])
    return probe.refined_max()[1]


def superlevel_balance_bound(h_hat: IndicatorFn, tol: float = 1e-6) -> float:
    """Largest level whose superlevel set of the balanced representative is
    locally balanced (bisection; the set shrinks as the level rises).

    Levels below the floating-point floor are reported as 0: the level-0
    superlevel bound is trivial anyway.
    """
    if h_hat.order.rho <= 0.5:
        raise PreconditionError(
            "the superlevel lower bound is only asserted for rho > 1/2")
    _, top = h_hat.refined_max()

    def balanced_at(level: float) -> bool:
        S = superlevel_set(h_hat, level)
        if S.is_empty:
            return False
        return not coverable_by_sparse_intervals(S, h_hat.order)

    set_tol = 1e-6 * (1.0 + abs(top))
    if balanced_at(top - set_tol):
        return top
    dust = 1e-9 * (1.0 + abs(top))
    if not balanced_at(dust):
        return 0.0
    lo, hi = dust, top
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if balanced_at(mid):
            lo = mid
        else:
            hi = mid
    return lo


def types_coincide(h_hat: IndicatorFn) -> bool:
    """Whether the uniqueness type provably equals the zero-set type."""
    rho = h_hat.order.rho
    if rho <= 0.5 + 1e-12 or abs(rho - 1.0) <= 1e-12:
        return True
    return is_locally_balanced(max_set(h_hat), h_hat.order)[0]


# ---------------------------------------------------------------------------
# reducing multiplier
# ---------------------------------------------------------------------------

def _cluster_cover(M: IntervalSet, order: Order):
    """Pad the forced clusters of an unbalanced maximizer set into an open
    cover with interval lengths < pi/rho and gaps > pi/rho."""
    hp = order.half_period
    arcs = list(M.arcs)
    n = len(arcs)
    gaps = [g for _, g in M.gaps()]
    boundaries = [k for k in range(n) if gaps[k] > hp + _SLACK]
    if not boundaries:
        raise CoverConstructionError(
            f"all gaps of the maximizer set are <= pi/rho = {hp:.6g}; "
            "the set should have been locally balanced")
    intervals = []
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
        intervals.append((start, end))
    intervals.sort()
    slack = math.inf
    for (s, e) in intervals:
        if e - s >= hp - _SLACK:
            raise CoverConstructionError(
                f"cluster [{s:.6g}, {e:.6g}] spans {e - s:.6g} >= pi/rho = {hp:.6g}")
        slack = min(slack, hp - (e - s))
    for idx, (s, e) in enumerate(intervals):
        nxt = intervals[(idx + 1) % len(intervals)][0] + (TWO_PI if idx == len(intervals) - 1 else 0.0)
        gap = nxt - e
        if gap <= hp + _SLACK:
            raise CoverConstructionError(
                f"cluster gap {gap:.6g} <= pi/rho = {hp:.6g} between cover parts")
        slack = min(slack, gap - hp)
    eps = slack / 4.0
    return [(s - eps, e + eps) for s, e in intervals], eps


def reducing_multiplier(h_hat: IndicatorFn) -> Optional[MultiplierFn]:
    """Competitor that strictly lowers the maximum when the maximizer set of
    the balanced representative is not locally balanced; None otherwise.

    The construction covers the maximizer clusters by padded intervals I_j,
    dips by sine arcs inside them and bridges the complementary intervals with
    clipped sine bumps, staying trigonometrically convex throughout.
    """
    order = h_hat.order
    rho = order.rho
    if rho <= 0.5:
        raise PreconditionError("reduction requires rho > 1/2")
    M = max_set(h_hat)
    if is_locally_balanced(M, order)[0]:
        return None
    _, a = h_hat.refined_max()

    # deepen the covered superlevel while it stays unbalanced: the deeper the
    # level, the larger the certified drop (the maximizer-set tolerance alone
    # would make the margin vanish)
    scale = 1.0 + abs(a)
    depth = 1e-6 * scale
    margin_target = 1e-4 * scale
    best_set = M
    delta = depth
    while delta < 0.25 * scale:
        trial = 4.0 * delta
        S = superlevel_set(h_hat, a - trial)
        if not coverable_by_sparse_intervals(S, order):
            break
        best_set, delta = S, trial
        cover_try, eps_try = _cluster_cover(S, order)
        if 0.5 * trial * math.sin(min(rho * eps_try, 0.5 * math.pi)) >= margin_target:
            break
    cover, eps = _cluster_cover(best_set, order)
    hp = order.half_period
    # supremum off the (unpadded) cluster spans bounds the bridge region
    b = -math.inf
    for idx, (s, e) in enumerate(cover):
        nxt = cover[(idx + 1) % len(cover)][0] + (TWO_PI if idx == len(cover) - 1 else 0.0)
        lo, hi = e - eps, nxt + eps  # complement of the unpadded spans
        _, v = max_on_arc(h_hat.fn, lo, hi, n=max(64, int((hi - lo) / h_hat.grid_step)))
        b = max(b, v)
    if not b < a:
        raise CoverConstructionError(
            f"off-cover supremum {b:.6g} does not drop below the maximum {a:.6g}")
    c = 0.5 * (a - b)

    pieces = []
    for idx, (alpha, beta) in enumerate(cover):
        nxt_alpha = cover[(idx + 1) % len(cover)][0] + (TWO_PI if idx == len(cover) - 1 else 0.0)
        mid = 0.5 * (alpha + beta)
        # inside the cover: max(sin rho(t-beta), sin rho(alpha-t)) is negative
        pieces.append((alpha, mid, 0.0, -c, alpha))
        pieces.append((mid, beta, 0.0, c, beta))
        # bridge to the next cover interval with clipped sine bumps
        L = nxt_alpha - beta
        if L > 2.0 * hp:
            pieces.append((beta, beta + hp, 0.0, c, beta))
            pieces.append((beta + hp, nxt_alpha - hp, 0.0, 0.0, 0.0))
            pieces.append((nxt_alpha - hp, nxt_alpha, 0.0, -c, nxt_alpha))
        else:
            bridge_mid = 0.5 * (beta + nxt_alpha)
            pieces.append((beta, bridge_mid, 0.0, c, beta))
            pieces.append((bridge_mid, nxt_alpha, 0.0, -c, nxt_alpha))

    k = MultiplierFn(order, TrigPiecewise(rho, pieces))
    k.validate()
    reduced = upper_bound_from_multiplier(h_hat, k, validate=False)
    margin = c * math.sin(min(rho * eps, 0.5 * math.pi))
    if reduced > a - margin + 1e-9 * (1.0 + abs(a)):
        raise CoverConstructionError(
            f"constructed multiplier reduced the maximum to {reduced:.9g}, "
            f"above the certified bound {a - margin:.9g}")
    return k


def upper_bound_from_multiplier(h_hat: IndicatorFn, k: MultiplierFn,
                                validate: bool = True) -> float:
    """max(h_hat + k): a certified upper bound for the uniqueness type."""
    if validate:
        k.validate()
    return h_hat.plus(k).refined_max()[1]


# ---------------------------------------------------------------------------
# assembled report
# ---------------------------------------------------------------------------

def type_report(measure: AngularMeasure, order: Order,
                multipliers: Sequence[MultiplierFn] = (),
                resolution: Optional[int] = None) -> TypeReport:
    """Full classification: sigma_z exactly, sigma_u as an interval that
    collapses whenever the equality criterion or matching bounds close it."""
    h = build_indicator(measure, order, resolution)
    sigma_z, h_hat, _ = zero_set_type_from_indicator(h)
    notes = {"sigma_z": "max of balanced representative"
             if order.is_integer else "max of indicator"}

    equality = types_coincide(h_hat)
    if equality:
        notes["equality"] = ("asserted for rho <= 1/2 or rho = 1"
                             if order.rho <= 0.5 + 1e-12 or abs(order.rho - 1.0) <= 1e-12
                             else "maximizer set locally balanced")
        return TypeReport(sigma_z, sigma_z, sigma_z, True, notes)

    lower = 0.0
    if order.rho > 0.5:
        a_bound = half_period_average_bound(h)
        s_bound = superlevel_balance_bound(h_hat)
        lower = max(a_bound, s_bound)
        notes["lower"] = {"averaged_shift": a_bound, "superlevel": s_bound}

    upper = sigma_z
    notes["upper"] = {"zero_multiplier": sigma_z}
    generic = reducing_multiplier(h_hat)
    if generic is not None:
        val = upper_bound_from_multiplier(h_hat, generic, validate=False)
        upper = min(upper, val)
        notes["upper"]["generic_reduction"] = val
    for i, k in enumerate(multipliers):
        val = upper_bound_from_multiplier(h_hat, k)
        upper = min(upper, val)
        notes["upper"][f"supplied_{i}"] = val

    # bounds may cross by tolerance dust only; keep the report ordered
    lower = min(lower, sigma_z)
    upper = min(max(upper, lower), sigma_z)
    return TypeReport(sigma_z, lower, upper, False, notes)
