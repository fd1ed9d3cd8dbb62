"""Randomized point sets with prescribed angular statistics, empirical density
verification, tail-sum diagnostics, and classification against the type-1
growth threshold of Fock-type spaces."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .critical import MultiplierFn, type_report
from .errors import MeasureError, MomentConditionError, PreconditionError
from .indicator import MOMENT_TOL
from .measures import TWO_PI, AngularMeasure, Order

CRITICAL_TOL = 1e-6


@dataclass(frozen=True)
class RadialSequence:
    """Nondecreasing moduli with target counting density n(R) / R^rho -> density."""

    radii: np.ndarray
    density: float
    order: Order

    def count_at(self, R: float) -> int:
        """Number of moduli <= R."""
        return int(np.searchsorted(self.radii, R, side="right"))

    def density_settling_radius(self, tol: float = 0.1) -> float:
        """Smallest checkpoint radius beyond which n(R)/R^rho stays within
        tol of the target density (reported diagnostic, sampled at moduli)."""
        rho = self.order.rho
        ratios = np.arange(1, len(self.radii) + 1) / self.radii ** rho
        off = np.abs(ratios / self.density - 1.0) > tol
        if not off.any():
            return float(self.radii[0])
        last_bad = int(np.flatnonzero(off)[-1])
        if last_bad + 1 >= len(self.radii):
            return float("inf")
        return float(self.radii[last_bad + 1])


def power_radii(order: Order, density: float, n: int) -> RadialSequence:
    """l_k = (k / density)^(1/rho), which makes n(R) = floor(density R^rho)."""
    if density <= 0:
        raise PreconditionError("density must be positive")
    k = np.arange(1, int(n) + 1, dtype=float)
    return RadialSequence((k / density) ** (1.0 / order.rho), float(density), order)


@dataclass(frozen=True)
class RandomSet:
    """Moduli paired with i.i.d. angles drawn from the base measure."""

    moduli: np.ndarray
    angles: np.ndarray
    seed: int
    base_measure: AngularMeasure
    order: Order
    density: float

    def points(self) -> np.ndarray:
        return self.moduli * np.exp(1j * self.angles)


def randomize(radial: RadialSequence, measure: AngularMeasure, order: Order,
              seed: int) -> RandomSet:
    """Attach angles sampled from the measure to the radial sequence.

    For an integer order the normalized measure must have vanishing matching
    moment, otherwise the randomization almost surely fails the tail-sum
    convergence requirement and is rejected.
    """
    if measure.total_mass <= 0:
        raise MeasureError("base measure must have positive mass")
    prob = measure.normalized()
    if order.is_integer:
        moment = prob.rho_moment(order)
        if abs(moment) > MOMENT_TOL:
            raise MomentConditionError(order.rho, moment)
    angles = prob.sample(seed, len(radial.radii))
    return RandomSet(radial.radii, angles, seed, prob, order, radial.density)


@dataclass
class DensityCell:
    R: float
    alpha: float
    beta: float
    ratio: float
    predicted: float

    @property
    def deviation(self) -> float:
        return self.ratio - self.predicted


def empirical_density_table(rset: RandomSet, arcs: Sequence[Sequence[float]],
                            checkpoints: Sequence[float]) -> list[DensityCell]:
    """Rows (R, alpha, beta, n(R; alpha, beta)/R^rho, density * measure(arc))."""
    rho = rset.order.rho
    cells = []
    sorted_idx = np.argsort(rset.moduli)
    moduli = rset.moduli[sorted_idx]
    angles = rset.angles[sorted_idx]
    for alpha, beta in arcs:
        length = beta - alpha
        if not 0 < length <= TWO_PI:
            raise PreconditionError(f"arc ({alpha}, {beta}) has invalid length")
        rel = np.mod(angles - alpha, TWO_PI)
        in_arc = (rel > 0) & (rel < length)
        predicted_unit = rset.base_measure.arc_mass(alpha, beta)
        for R in checkpoints:
            n_in = int(np.count_nonzero(in_arc[: np.searchsorted(moduli, R, side="right")]))
            cells.append(DensityCell(float(R), float(alpha), float(beta),
                                     n_in / R ** rho,
                                     rset.density * predicted_unit))
    return cells


def lindelof_partial_sums(rset: RandomSet, checkpoints: Sequence[float]) -> np.ndarray:
    """S(R) = sum over |point| <= R of point^(-rho) at each checkpoint."""
    rho = rset.order.rho
    idx = np.argsort(rset.moduli)
    moduli = rset.moduli[idx]
    angles = rset.angles[idx]
    terms = moduli ** (-rho) * np.exp(-1j * rho * angles)
    csum = np.concatenate([[0.0 + 0.0j], np.cumsum(terms)])
    out = []
    for R in checkpoints:
        out.append(csum[np.searchsorted(moduli, R, side="right")])
    return np.asarray(out)


def tail_spread(sums: np.ndarray, start: int = 0) -> float:
    """max |S_j - S_i| over checkpoint pairs with start <= i < j."""
    tail = np.asarray(sums)[start:]
    if len(tail) < 2:
        return 0.0
    diffs = np.abs(tail[None, :] - tail[:, None])
    return float(diffs.max())


def dyadic_oscillations(sums: np.ndarray) -> np.ndarray:
    """|S(R_{k+1}) - S(R_k)| for consecutive (dyadic) checkpoints."""
    s = np.asarray(sums)
    return np.abs(np.diff(s))


# ---------------------------------------------------------------------------
# classification against the type-1 threshold
# ---------------------------------------------------------------------------

ZERO_SET = "zero_set"
NOT_ZERO_SET = "not_zero_set"
UNIQUENESS = "uniqueness_set"
NOT_UNIQUENESS = "not_uniqueness_set"
CRITICAL = "critical"
INDETERMINATE = "indeterminate"

AS_ZERO_SET = "as_zero_set"
AS_NOT_ZERO_NOT_UNIQUENESS = "as_not_zero_not_uniqueness"
AS_UNIQUENESS = "as_uniqueness"
AS_CRITICAL = "critical_indeterminate"


@dataclass
class FockClassification:
    density: float
    sigma_z: float
    sigma_u_lower: float
    sigma_u_upper: float
    zero_verdict: str
    uniqueness_verdict: str
    label: str
    notes: dict = field(default_factory=dict)


def classify(measure: AngularMeasure, order: Order, density: float,
             multipliers: Sequence[MultiplierFn] = (),
             resolution: Optional[int] = None) -> FockClassification:
    """Classify the density-scaled randomization against growth type 1.

    The zero-set verdict compares sigma_z of the scaled measure with 1; the
    uniqueness verdict compares the sigma_u bracket with 1 and is derived from
    the uniqueness-type bracket, not from the zero-set criterion.  Values
    within 1e-6 of the threshold are reported as critical.
    """
    if abs(measure.total_mass - 1.0) > 1e-9:
        raise MeasureError(
            f"classification expects a probability measure; total mass is "
            f"{measure.total_mass:.12g}")
    if density <= 0:
        raise PreconditionError("density must be positive")
    report = type_report(measure.scale(density), order,
                         multipliers=[k.scaled(density) for k in multipliers],
                         resolution=resolution)

    sz = report.sigma_z
    lo, hi = report.sigma_u_lower, report.sigma_u_upper
    if sz < 1.0 - CRITICAL_TOL:
        zero_verdict = ZERO_SET
    elif sz > 1.0 + CRITICAL_TOL:
        zero_verdict = NOT_ZERO_SET
    else:
        zero_verdict = CRITICAL

    if hi < 1.0 - CRITICAL_TOL:
        uniq_verdict = NOT_UNIQUENESS
    elif lo > 1.0 + CRITICAL_TOL:
        uniq_verdict = UNIQUENESS
    else:
        uniq_verdict = CRITICAL if hi - lo <= 2 * CRITICAL_TOL else INDETERMINATE

    if zero_verdict == ZERO_SET:
        label = AS_ZERO_SET
    elif uniq_verdict == UNIQUENESS:
        label = AS_UNIQUENESS
    elif zero_verdict == NOT_ZERO_SET and uniq_verdict == NOT_UNIQUENESS:
        label = AS_NOT_ZERO_NOT_UNIQUENESS
    else:
        label = AS_CRITICAL

    notes = {
        "threshold": "growth type 1; almost-sure dichotomy by the zero-one law",
        "zero_verdict": "sigma_z of the density-scaled measure vs 1",
        "uniqueness_verdict": "sigma_u bracket of the density-scaled measure vs 1",
        "method": dict(report.method_notes),
    }
    return FockClassification(density, sz, lo, hi, zero_verdict, uniq_verdict,
                              label, notes)
