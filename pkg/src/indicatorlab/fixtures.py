"""Named measure fixtures resolvable by the CLI and service via
``fixture:<name>``, plus the known-good multipliers attached to some of them.

Atom positions are built as exact rational multiples of pi so golden values
do not pick up decimal drift.
"""
from __future__ import annotations

import math
from typing import Callable, Optional

from .critical import MultiplierFn
from .density import critical_density_range, saturated_density_range
from .errors import MeasureError, PreconditionError
from .measures import TWO_PI, AngularMeasure, Order, uniform_measure
from .piecewise import TrigPiecewise

PI = math.pi


def _example1(rho: float, n: int = 4) -> AngularMeasure:
    n = int(n)
    if n < 1:
        raise MeasureError("example1 needs n >= 1")
    return AngularMeasure(atoms=tuple(((2 * j + 1) * PI / n, 1.0 / n)
                                      for j in range(1, n + 1)))


def _example2(rho: float) -> AngularMeasure:
    order = Order(rho)
    if not order.is_integer or order.int_value < 3:
        raise MeasureError("example2 is defined for integer rho >= 3")
    return AngularMeasure(atoms=((PI / rho, 1.0), (2 * PI / rho, 1.0),
                                 (4 * PI / rho, 1.0), (5 * PI / rho, 1.0)))


def _example3(rho: float) -> AngularMeasure:
    return AngularMeasure(atoms=((0.0, 1.0), (2 * PI / 3, 1.0), (4 * PI / 3, 1.0)))


def _example4(rho: float) -> AngularMeasure:
    if rho <= 1.0 or Order(rho).is_integer:
        raise MeasureError("example4 is defined for non-integer rho > 1")
    return AngularMeasure(atoms=((-PI / (2 * rho), 1.0), (PI / (2 * rho), 1.0)))


def _example5(rho: float) -> AngularMeasure:
    return AngularMeasure(atoms=((PI, 1.0),))


def _example6(rho: float, width: float = 1.0) -> AngularMeasure:
    """Constant-width triangle-of-arcs body: density width/2pi on the three
    sectors of directions facing the arcs.  Derived, not quoted."""
    if width <= 0:
        raise MeasureError("example6 needs a positive width")
    d = width / TWO_PI
    arcs = []
    for k in range(3):
        center = 3 * PI / 2 + 2 * PI * k / 3
        lo = (center - PI / 6) % TWO_PI
        hi = lo + PI / 3
        if hi <= TWO_PI:
            arcs.append((lo, hi, d))
        else:
            arcs.append((lo, TWO_PI, d))
            arcs.append((0.0, hi - TWO_PI, d))
    return AngularMeasure(pieces=tuple(arcs))


def _uniform(rho: float, mass: float = 1.0) -> AngularMeasure:
    return uniform_measure(mass)


def _theorem7_star(rho: float) -> AngularMeasure:
    return critical_density_range(Order(rho), resolution=64).lower_measure


def _als1_star(rho: float) -> AngularMeasure:
    return saturated_density_range(Order(rho), resolution=64).lower_measure


_REGISTRY: dict[str, dict] = {
    "example1": {"builder": _example1, "params": {"n": 4},
                 "doc": "n equal atoms at (2j+1) pi/n"},
    "example2": {"builder": _example2, "params": {},
                 "doc": "four unit atoms at pi/rho, 2pi/rho, 4pi/rho, 5pi/rho"},
    "example3": {"builder": _example3, "params": {},
                 "doc": "unit atoms at 0, 2pi/3, 4pi/3"},
    "example4": {"builder": _example4, "params": {},
                 "doc": "unit atoms at +-pi/(2 rho)"},
    "example5": {"builder": _example5, "params": {},
                 "doc": "single unit atom at pi"},
    "example6": {"builder": _example6, "params": {"width": 1.0},
                 "doc": "constant-width body of three circular arcs (derived density)"},
    "uniform": {"builder": _uniform, "params": {"mass": 1.0},
                "doc": "rotation-invariant measure of the given mass"},
    "theorem7_star": {"builder": _theorem7_star, "params": {},
                      "doc": "minimal-density extremal measure of the critical family"},
    "als1_star": {"builder": _als1_star, "params": {},
                  "doc": "minimal-density extremal measure of the saturated family"},
}


def list_fixtures() -> list[dict]:
    return [{"name": name, "params": dict(entry["params"]), "doc": entry["doc"]}
            for name, entry in sorted(_REGISTRY.items())]


def resolve_measure(source: str, rho: float, params: Optional[dict] = None) -> AngularMeasure:
    """Resolve ``fixture:<name>`` into a measure; params fill builder keywords."""
    if not source.startswith("fixture:"):
        raise MeasureError(f"not a fixture reference: {source!r}")
    name = source[len("fixture:"):]
    if name not in _REGISTRY:
        known = ", ".join(sorted(_REGISTRY))
        raise MeasureError(f"unknown fixture {name!r}; known fixtures: {known}")
    entry = _REGISTRY[name]
    kwargs = dict(entry["params"])
    for key, value in (params or {}).items():
        if key not in kwargs:
            raise MeasureError(
                f"fixture {name!r} does not take parameter {key!r}")
        kwargs[key] = type(kwargs[key])(value) if not isinstance(kwargs[key], float) else float(value)
    return entry["builder"](rho, **kwargs)


# ---------------------------------------------------------------------------
# known-good multipliers for the non-equality fixtures
# ---------------------------------------------------------------------------

def _mult_example2(rho: float) -> MultiplierFn:
    order = Order(rho)
    pieces = [(0.0, 3 * PI / rho, 0.0, PI, 0.0),
              (3 * PI / rho, 6 * PI / rho, 0.0, -PI, 0.0)]
    if 6 * PI / rho < TWO_PI - 1e-12:
        pieces.append((6 * PI / rho, TWO_PI, 0.0, 0.0, 0.0))
    return MultiplierFn(order, TrigPiecewise(rho, pieces))


def _mult_example3(rho: float) -> MultiplierFn:
    # half of the example3 indicator advanced by a third of its period
    order = Order(rho)
    amp = PI / math.sqrt(3.0)
    pieces = [(-PI / 3 + 2 * PI * j / 3, PI / 3 + 2 * PI * j / 3, amp, 0.0, 2 * PI * j / 3)
              for j in range(4)]
    clipped = [(max(s, 0.0), min(e, TWO_PI), a, b, t0) for s, e, a, b, t0 in pieces
               if min(e, TWO_PI) - max(s, 0.0) > 1e-12]
    return MultiplierFn(order, TrigPiecewise(rho, clipped))


def _mult_example4(rho: float) -> MultiplierFn:
    order = Order(rho)
    tau = min(3 * PI / (2 * rho), PI)
    pieces = [(0.0, tau, -PI, 0.0, 0.0),
              (TWO_PI - tau, TWO_PI, -PI, 0.0, TWO_PI)]
    if TWO_PI - tau > tau + 1e-12:
        pieces.append((tau, TWO_PI - tau, 0.0, 0.0, 0.0))
    return MultiplierFn(order, TrigPiecewise(rho, pieces))


def _mult_example5(rho: float) -> MultiplierFn:
    order = Order(rho)
    if order.is_integer or not 0.5 < rho < 1.0:
        raise PreconditionError("the example5 multiplier assumes rho in (1/2, 1)")
    coeff = -PI * math.cos(PI * rho) / math.sin(PI * rho)
    return MultiplierFn(order, TrigPiecewise(rho, [(0.0, TWO_PI, coeff, 0.0, PI)]))


_MULTIPLIERS: dict[str, Callable[[float], MultiplierFn]] = {
    "example2": _mult_example2,
    "example3": _mult_example3,
    "example4": _mult_example4,
    "example5": _mult_example5,
}


def fixture_multipliers(source: str, rho: float) -> list[MultiplierFn]:
    """Registered multipliers for a fixture reference (empty when none)."""
    if not source.startswith("fixture:"):
        return []
    name = source[len("fixture:"):]
    builder = _MULTIPLIERS.get(name)
    if builder is None:
        return []
    try:
        return [builder(rho)]
    except PreconditionError:
        return []
