"""Closed-form density ranges with their extremal measures, node envelopes,
and the merge-inequality check used to certify the extremal configuration."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from scipy.integrate import quad

from .errors import PreconditionError
from .indicator import IndicatorFn, from_callable
from .measures import TWO_PI, AngularMeasure, Order, uniform_measure
from .piecewise import TrigPiecewise

CRITICAL_FAMILY = "7"
SATURATED_FAMILY = "als1"
_FAMILIES = {CRITICAL_FAMILY, SATURATED_FAMILY}


def _frac(x: float) -> float:
    f = x - math.floor(x)
    if f > 1.0 - 1e-12:  # e.g. 2*rho = 4.0 - 1e-16
        f = 0.0
    return f


def _shift_bracket(rho: float) -> int:
    """Integer part of rho - 1/2 with the half-integer boundary resolved
    downward: fractional parts in [0, 1/2] round to [rho] - 1."""
    fr = _frac(rho)
    if fr <= 0.5 + 1e-12:
        return int(math.floor(rho + 1e-12)) - 1
    return int(math.floor(rho))


@dataclass(frozen=True)
class NodeConfig:
    """Nondecreasing node angles spanning exactly one period."""

    nodes: tuple

    def __post_init__(self):
        nodes = tuple(float(x) for x in self.nodes)
        if len(nodes) < 2:
            raise PreconditionError("a node configuration needs at least two nodes")
        if any(b < a - 1e-12 for a, b in zip(nodes, nodes[1:])):
            raise PreconditionError("nodes must be nondecreasing")
        if abs((nodes[-1] - nodes[0]) - TWO_PI) > 1e-9:
            raise PreconditionError("node span must be exactly one period")
        object.__setattr__(self, "nodes", nodes)

    def gaps(self):
        return [b - a for a, b in zip(self.nodes, self.nodes[1:])]

    def max_gap(self) -> float:
        return max(self.gaps())


@dataclass
class DensityRange:
    order: Order
    lower: float
    upper: float
    lower_measure: AngularMeasure
    upper_measure: AngularMeasure
    lower_indicator: IndicatorFn
    lower_profile: TrigPiecewise
    nodes: Optional[NodeConfig] = None


def node_envelope(order: Order, config: NodeConfig,
                  resolution: Optional[int] = None):
    """Largest function below 1 that is cos-supported on every node:
    between consecutive nodes it is the max of the two adjacent cosine caps.

    Returns (IndicatorFn, TrigPiecewise); requires node gaps <= pi/rho.
    """
    rho = order.rho
    if config.max_gap() > order.half_period + 1e-9:
        raise PreconditionError(
            f"node gap {config.max_gap():.6g} exceeds pi/rho = {order.half_period:.6g}")
    pieces = []
    for a, b in zip(config.nodes, config.nodes[1:]):
        if b - a <= 1e-14:
            continue
        mid = 0.5 * (a + b)
        pieces.append((a, mid, 1.0, 0.0, a))
        pieces.append((mid, b, 1.0, 0.0, b))
    profile = TrigPiecewise(rho, pieces)
    h = from_callable(order, profile, resolution,
                      breakpoints=[p[0] % TWO_PI for p in pieces])
    return h, profile


def envelope_measure(order: Order, config: NodeConfig) -> AngularMeasure:
    """Measure whose indicator is the node envelope: one atom per positive
    gap, at the gap midpoint, of mass sin(rho * gap / 2) / pi."""
    rho = order.rho
    atoms = []
    for a, b in zip(config.nodes, config.nodes[1:]):
        gap = b - a
        if gap <= 1e-14:
            continue
        atoms.append((0.5 * (a + b), math.sin(0.5 * rho * gap) / math.pi))
    return AngularMeasure(atoms=tuple(atoms))


def _lower_profile_critical(order: Order) -> TrigPiecewise:
    rho = order.rho
    if rho <= 0.5:
        # cos(rho t) on [-pi, pi]
        return TrigPiecewise(rho, [(0.0, math.pi, 1.0, 0.0, 0.0),
                                   (math.pi, TWO_PI, 1.0, 0.0, TWO_PI)])
    if rho <= 1.0:
        # sin(rho |t|) on [-pi, pi]
        return TrigPiecewise(rho, [(0.0, math.pi, 0.0, 1.0, 0.0),
                                   (math.pi, TWO_PI, 0.0, -1.0, TWO_PI)])
    delta = rho - _shift_bracket(rho)
    cut = TWO_PI - delta * math.pi / rho
    return TrigPiecewise(rho, [(0.0, cut, 0.0, 1.0, 0.0),
                               (cut, TWO_PI, 0.0, -1.0, TWO_PI)])


def critical_density_range(order: Order,
                           resolution: Optional[int] = None) -> DensityRange:
    """Density range of sets that are critical for type 1: zero sets at type 1
    and uniqueness sets below it.  Closed-form bounds with extremal measures."""
    rho = order.rho
    upper = rho
    if rho <= 0.5:
        lower = math.sin(math.pi * rho) / math.pi
        lower_measure = AngularMeasure(atoms=((math.pi, lower),))
    elif rho <= 1.0:
        lower = (1.0 + abs(math.cos(math.pi * rho))) / math.pi
        lower_measure = AngularMeasure(atoms=(
            (0.0, 1.0 / math.pi),
            (math.pi, abs(math.cos(rho * math.pi)) / math.pi)))
    else:
        lower = (1.0 + abs(math.cos(math.pi * rho))) / math.pi
        delta = rho - _shift_bracket(rho)
        lower_measure = AngularMeasure(atoms=(
            (0.0, 1.0 / math.pi),
            (-delta * math.pi / rho, abs(math.cos(rho * math.pi)) / math.pi)))
    profile = _lower_profile_critical(order)
    h = from_callable(order, profile, resolution,
                      breakpoints=[p.start % TWO_PI for p in profile.pieces])
    return DensityRange(order, lower, upper, lower_measure, uniform_measure(rho),
                        h, profile)


def saturated_node_config(order: Order) -> NodeConfig:
    """Extremal node configuration: first gap {2 rho} pi / rho, then steps of
    pi / rho until the period closes."""
    rho = order.rho
    fr = _frac(2.0 * rho)
    n_steps = int(math.floor(2.0 * rho + 1e-12))
    nodes = [0.0, fr * math.pi / rho]
    for _ in range(n_steps):
        nodes.append(nodes[-1] + math.pi / rho)
    return NodeConfig(tuple(nodes))


def saturated_density_range(order: Order,
                            resolution: Optional[int] = None) -> DensityRange:
    """Density range of maximal non-uniqueness sets: non-uniqueness at type 1
    that any added positive-density regular set upgrades to uniqueness."""
    rho = order.rho
    upper = rho
    if rho <= 0.5:
        base = critical_density_range(order, resolution)
        return DensityRange(order, base.lower, upper, base.lower_measure,
                            base.upper_measure, base.lower_indicator,
                            base.lower_profile)
    fr = _frac(2.0 * rho)
    lower = (math.sin(0.5 * math.pi * fr) + math.floor(2.0 * rho + 1e-12)) / math.pi
    config = saturated_node_config(order)
    h, profile = node_envelope(order, config, resolution)
    measure = envelope_measure(order, config)
    return DensityRange(order, lower, upper, measure, uniform_measure(rho),
                        h, profile, nodes=config)


def density_range(family: str, order: Order,
                  resolution: Optional[int] = None) -> DensityRange:
    if family not in _FAMILIES:
        raise PreconditionError(
            f"unknown bound family {family!r}; expected one of {sorted(_FAMILIES)}")
    if family == CRITICAL_FAMILY:
        return critical_density_range(order, resolution)
    return saturated_density_range(order, resolution)


# ---------------------------------------------------------------------------
# merge inequality for three max-nodes
# ---------------------------------------------------------------------------

@dataclass
class MergeCheck:
    lhs: float
    rhs: float
    quad_lhs: float
    closed_quad_gap: float
    passed: bool


def three_node_chain_integral(order: Order, alpha: float, beta: float,
                              gamma: float) -> float:
    """Closed form of the integral over [alpha, gamma] of the three-cap chain:
    (4/rho) sin(rho (gamma-alpha)/4) cos(rho (alpha+gamma-2 beta)/4)."""
    rho = order.rho
    return (4.0 / rho) * math.sin(0.25 * rho * (gamma - alpha)) \
        * math.cos(0.25 * rho * (alpha + gamma - 2.0 * beta))


def merge_inequality_check(order: Order, alpha: float, beta: float,
                           gamma: float) -> MergeCheck:
    """Verify that pushing the middle node to alpha + pi/rho cannot increase
    the chain integral, and that the closed form matches quadrature to 1e-8.

    Requires alpha < gamma - pi/rho < beta < alpha + pi/rho < gamma.
    """
    rho = order.rho
    hp = order.half_period
    if not (alpha < gamma - hp < beta < alpha + hp < gamma):
        raise PreconditionError(
            "nodes must satisfy alpha < gamma - pi/rho < beta < alpha + pi/rho < gamma")
    lhs = three_node_chain_integral(order, alpha, beta, gamma)
    beta_star = alpha + hp
    rhs = three_node_chain_integral(order, alpha, beta_star, gamma)

    m1 = 0.5 * (alpha + beta)
    m2 = 0.5 * (beta + gamma)
    q = 0.0
    for lo, hi, center in ((alpha, m1, alpha), (m1, m2, beta), (m2, gamma, gamma)):
        val, _ = quad(lambda t, c=center: math.cos(rho * (t - c)), lo, hi,
                      epsabs=1e-12, epsrel=1e-12)
        q += val
    gap = abs(q - lhs)
    passed = (lhs >= rhs - 1e-12) and (gap <= 1e-8)
    return MergeCheck(lhs, rhs, q, gap, passed)


# ---------------------------------------------------------------------------
# interpolation between the extremal profiles
# ---------------------------------------------------------------------------

def _lower_profile(family: str, order: Order) -> TrigPiecewise:
    if family not in _FAMILIES:
        raise PreconditionError(
            f"unknown bound family {family!r}; expected one of {sorted(_FAMILIES)}")
    if family == CRITICAL_FAMILY or order.rho <= 0.5:
        return _lower_profile_critical(order)
    config = saturated_node_config(order)
    pieces = []
    for a, b in zip(config.nodes, config.nodes[1:]):
        if b - a <= 1e-14:
            continue
        mid = 0.5 * (a + b)
        pieces.append((a, mid, 1.0, 0.0, a))
        pieces.append((mid, b, 1.0, 0.0, b))
    return TrigPiecewise(order.rho, pieces)


def clipped_density(order: Order, d: float, family: str = CRITICAL_FAMILY) -> float:
    """Density of the profile clipped from below at level d in [-1, 1]:
    (rho / 2 pi) * integral of max(extremal profile, d); exact quadrature."""
    if not -1.0 <= d <= 1.0:
        raise PreconditionError(f"clip level must lie in [-1, 1], got {d!r}")
    profile = _lower_profile(family, order)
    return order.rho / TWO_PI * profile.clipped_integral(d)
