"""Finite nonnegative angular measures on [0, 2pi).

A measure is a finite list of atoms plus a piecewise-constant density.  This
class is closed under everything the library needs (scaling, sums, sampling)
and every integral against it has a closed form.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MeasureError, PreconditionError

TWO_PI = 2.0 * math.pi

_MERGE_TOL = 1e-13


def _mod_2pi(theta: float) -> float:
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:  # fmod artifacts at the boundary
        t -= TWO_PI
    return t


@dataclass(frozen=True)
class Order:
    """Growth order rho > 0, with the integer dichotomy resolved at 1e-12."""

    rho: float

    def __post_init__(self):
        if not (self.rho > 0.0 and math.isfinite(self.rho)):
            raise MeasureError(f"order must be a positive real, got {self.rho!r}")

    @property
    def is_integer(self) -> bool:
        return abs(self.rho - round(self.rho)) <= 1e-12

    @property
    def int_value(self) -> int:
        if not self.is_integer:
            raise PreconditionError(f"order {self.rho:g} is not an integer")
        return int(round(self.rho))

    @property
    def half_period(self) -> float:
        """pi / rho, the balancedness length scale."""
        return math.pi / self.rho


@dataclass(frozen=True)
class AngularMeasure:
    """Atoms (position, mass) plus constant-density pieces (start, end, density).

    Positions are reduced mod 2pi at construction and duplicate atoms are
    merged by summing masses.  Pieces must have pairwise-disjoint interiors
    inside [0, 2pi].
    """

    atoms: tuple = field(default=())
    pieces: tuple = field(default=())

    def __post_init__(self):
        atoms = []
        for theta, mass in self.atoms:
            theta = float(theta)
            mass = float(mass)
            if not math.isfinite(mass) or mass < 0.0:
                raise MeasureError(f"atom mass must be finite and >= 0, got {mass!r}")
            if not math.isfinite(theta):
                raise MeasureError(f"atom position must be finite, got {theta!r}")
            if mass > 0.0:
                atoms.append((_mod_2pi(theta), mass))
        atoms.sort()
        merged = []
        for theta, mass in atoms:
            if merged and theta - merged[-1][0] <= _MERGE_TOL:
                merged[-1][1] += mass
            else:
                merged.append([theta, mass])
        # wrap-around duplicate (2pi - eps vs 0)
        if len(merged) >= 2 and (merged[0][0] + TWO_PI) - merged[-1][0] <= _MERGE_TOL:
            merged[0][1] += merged.pop()[1]

        pieces = []
        for start, end, density in self.pieces:
            start, end, density = float(start), float(end), float(density)
            if not (0.0 <= start < end <= TWO_PI + 1e-12):
                raise MeasureError(
                    f"piece must satisfy 0 <= start < end <= 2pi, got ({start}, {end})"
                )
            if not math.isfinite(density) or density < 0.0:
                raise MeasureError(f"piece density must be finite and >= 0, got {density!r}")
            end = min(end, TWO_PI)
            if density > 0.0:
                pieces.append((start, end, density))
        pieces.sort()
        for (s0, e0, _), (s1, _, _) in zip(pieces, pieces[1:]):
            if s1 < e0 - 1e-12:
                raise MeasureError(
                    f"pieces overlap: [{s0:g}, {e0:g}] and [{s1:g}, ...]"
                )

        object.__setattr__(self, "atoms", tuple((t, m) for t, m in merged))
        object.__setattr__(self, "pieces", tuple(pieces))

    # -- basic functionals ------------------------------------------------

    @property
    def total_mass(self) -> float:
        mass = sum(m for _, m in self.atoms)
        mass += sum(d * (e - s) for s, e, d in self.pieces)
        return mass

    def rho_moment(self, order: Order) -> complex:
        """Integral of exp(i*rho*theta) against the measure, in closed form."""
        rho = order.rho
        total = complex(0.0)
        for theta, mass in self.atoms:
            total += mass * complex(math.cos(rho * theta), math.sin(rho * theta))
        for s, e, d in self.pieces:
            total += d * (np.exp(1j * rho * e) - np.exp(1j * rho * s)) / (1j * rho)
        return total

    def arc_mass(self, alpha: float, beta: float) -> float:
        """Mass of the open arc (alpha, beta), read mod 2pi; beta - alpha in (0, 2pi]."""
        length = beta - alpha
        if not 0.0 < length <= TWO_PI + 1e-12:
            raise MeasureError(f"arc length must lie in (0, 2pi], got {length!r}")
        a = _mod_2pi(alpha)
        mass = 0.0
        for theta, m in self.atoms:
            rel = math.fmod(theta - a, TWO_PI)
            if rel < 0:
                rel += TWO_PI
            if 0.0 < rel < length:
                mass += m
        for s, e, d in self.pieces:
            rel_lo = math.fmod(s - a, TWO_PI)
            if rel_lo < 0:
                rel_lo += TWO_PI
            rel_hi = rel_lo + (e - s)
            # the piece occupies [rel_lo, rel_hi) in arc-relative coordinates,
            # possibly wrapping past 2pi
            mass += d * max(0.0, min(rel_hi, length) - rel_lo)
            if rel_hi > TWO_PI:
                mass += d * max(0.0, min(rel_hi - TWO_PI, length))
        return mass

    # -- algebra -----------------------------------------------------------

    def scale(self, c: float) -> "AngularMeasure":
        if not (c > 0.0 and math.isfinite(c)):
            raise MeasureError(f"scale factor must be positive, got {c!r}")
        return AngularMeasure(
            atoms=tuple((t, c * m) for t, m in self.atoms),
            pieces=tuple((s, e, c * d) for s, e, d in self.pieces),
        )

    def __add__(self, other: "AngularMeasure") -> "AngularMeasure":
        return AngularMeasure(self.atoms + other.atoms, self.pieces + other.pieces)

    def normalized(self) -> "AngularMeasure":
        mass = self.total_mass
        if mass <= 0.0:
            raise MeasureError("cannot normalize a measure with zero total mass")
        return self.scale(1.0 / mass)

    # -- sampling ----------------------------------------------------------

    def sample(self, seed: int, n: int) -> np.ndarray:
        """n i.i.d. draws from the normalized measure; deterministic in seed."""
        mass = self.total_mass
        if mass <= 0.0:
            raise MeasureError("cannot sample from a measure with zero total mass")
        rng = np.random.default_rng(seed)
        weights = [m for _, m in self.atoms] + [d * (e - s) for s, e, d in self.pieces]
        p = np.asarray(weights) / mass
        idx = rng.choice(len(weights), size=n, p=p)
        out = np.empty(n)
        n_atoms = len(self.atoms)
        for k, (theta, _) in enumerate(self.atoms):
            out[idx == k] = theta
        for k, (s, e, _) in enumerate(self.pieces):
            mask = idx == n_atoms + k
            cnt = int(mask.sum())
            if cnt:
                out[mask] = s + (e - s) * rng.random(cnt)
        return out

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "atoms": [{"theta": t, "mass": m} for t, m in self.atoms],
            "pieces": [{"start": s, "end": e, "density": d} for s, e, d in self.pieces],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AngularMeasure":
        try:
            atoms = tuple((a["theta"], a["mass"]) for a in data.get("atoms", []))
            pieces = tuple(
                (p["start"], p["end"], p["density"]) for p in data.get("pieces", [])
            )
        except (KeyError, TypeError) as exc:
            raise MeasureError(f"malformed measure JSON: {exc}") from exc
        return cls(atoms=atoms, pieces=pieces)

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "AngularMeasure":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MeasureError(f"measure file is not valid JSON: {exc}") from exc
        return cls.from_dict(data)


def uniform_measure(mass: float = 1.0) -> AngularMeasure:
    """Rotation-invariant measure of the given total mass."""
    if mass <= 0:
        raise MeasureError("uniform measure needs positive mass")
    return AngularMeasure(pieces=((0.0, TWO_PI, mass / TWO_PI),))
