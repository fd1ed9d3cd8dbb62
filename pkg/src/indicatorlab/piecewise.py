"""Piecewise functions built from a*cos(rho*(t-t0)) + b*sin(rho*(t-t0)) pieces.

Everything here is exact: evaluation, extrema, integrals, and integrals of the
pointwise max with a constant all reduce to elementary antiderivatives, so no
quadrature tolerance enters downstream identities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TrigPiece:
    start: float
    end: float
    a: float
    b: float
    t0: float

    @property
    def amplitude(self) -> float:
        return math.hypot(self.a, self.b)

    @property
    def phase(self) -> float:
        # a cos x + b sin x = amplitude * cos(x - phase)
        return math.atan2(self.b, self.a)

    def value(self, rho: float, t):
        x = rho * (np.asarray(t, dtype=float) - self.t0)
        return self.a * np.cos(x) + self.b * np.sin(x)

    def antiderivative(self, rho: float, t: float) -> float:
        x = rho * (t - self.t0)
        return (self.a * math.sin(x) - self.b * math.cos(x)) / rho


class TrigPiecewise:
    """2pi-periodic function given by trig pieces tiling one period.

    Pieces must be contiguous: piece k ends where piece k+1 starts, and the
    last piece ends exactly one period after the first starts.  Gaps passed to
    the constructor are filled with zero pieces.
    """

    def __init__(self, rho: float, pieces: Iterable[Sequence[float]]):
        if rho <= 0:
            raise PreconditionError("rho must be positive")
        raw = sorted(
            (TrigPiece(float(s), float(e), float(a), float(b), float(t0))
             for s, e, a, b, t0 in pieces if e - s > 1e-15),
            key=lambda p: p.start,
        )
        if not raw:
            raw = [TrigPiece(0.0, TWO_PI, 0.0, 0.0, 0.0)]
        base = raw[0].start
        span = raw[-1].end - base
        if span > TWO_PI + 1e-9:
            raise PreconditionError("pieces span more than one period")
        filled: list[TrigPiece] = []
        cursor = base
        for p in raw:
            if p.start < cursor - 1e-9:
                raise PreconditionError(
                    f"pieces overlap near t = {p.start:.6g}"
                )
            if p.start > cursor + 1e-15:
                filled.append(TrigPiece(cursor, p.start, 0.0, 0.0, 0.0))
            filled.append(p)
            cursor = p.end
        if cursor < base + TWO_PI - 1e-15:
            filled.append(TrigPiece(cursor, base + TWO_PI, 0.0, 0.0, 0.0))
        self.rho = float(rho)
        self.pieces = tuple(filled)
        self.base = base
        self._starts = np.array([p.start for p in self.pieces])

    # -- evaluation --------------------------------------------------------

    def _reduce(self, t):
        t = np.asarray(t, dtype=float)
        return self.base + np.mod(t - self.base, TWO_PI)

    def __call__(self, t):
        tr = self._reduce(t)
        idx = np.clip(np.searchsorted(self._starts, tr, side="right") - 1, 0,
                      len(self.pieces) - 1)
        out = np.empty_like(tr)
        for k, p in enumerate(self.pieces):
            mask = idx == k
            if np.any(mask):
                out[mask] = p.value(self.rho, tr[mask])
        return out if out.ndim else float(out)

    @property
    def breakpoints(self) -> np.ndarray:
        return np.array(sorted({p.start % TWO_PI for p in self.pieces}))

    def junction_mismatch(self) -> float:
        """Largest |value jump| across piece boundaries (wrap included).

        Each piece is evaluated on its own domain: on the circle the end of
        the last piece meets the start of the first one.
        """
        worst = 0.0
        n = len(self.pieces)
        for k, p in enumerate(self.pieces):
            q = self.pieces[(k + 1) % n]
            left = p.value(self.rho, p.end)
            right = q.value(self.rho, q.start)
            worst = max(worst, abs(float(left) - float(right)))
        return worst

    # -- exact extrema and integrals ----------------------------------------

    def max_value(self) -> float:
        best = -math.inf
        rho = self.rho
        for p in self.pieces:
            best = max(best, float(p.value(rho, p.start)), float(p.value(rho, p.end)))
            amp, ph = p.amplitude, p.phase
            if amp == 0.0:
                continue
            # interior critical point exists iff rho*(t - t0) - phase hits a
            # multiple of 2pi inside the piece
            k_lo = math.ceil((rho * (p.start - p.t0) - ph) / TWO_PI)
            k_hi = math.floor((rho * (p.end - p.t0) - ph) / TWO_PI)
            if k_hi >= k_lo:
                best = max(best, amp)
        return best

    def min_value(self) -> float:
        neg = TrigPiecewise(self.rho, [(p.start, p.end, -p.a, -p.b, p.t0)
                                       for p in self.pieces])
        return -neg.max_value()

    def integral(self) -> float:
        rho = self.rho
        return sum(p.antiderivative(rho, p.end) - p.antiderivative(rho, p.start)
                   for p in self.pieces)

    def clipped_integral(self, level: float) -> float:
        """Exact integral over one period of max(f(t), level)."""
        rho = self.rho
        total = 0.0
        for p in self.pieces:
            total += _clipped_piece_integral(p, rho, level)
        return total

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {"pieces": [{"start": p.start, "end": p.end, "a": p.a, "b": p.b,
                            "t0": p.t0} for p in self.pieces]}

    @classmethod
    def from_dict(cls, rho: float, data: dict) -> "TrigPiecewise":
        try:
            pieces = [(p["start"], p["end"], p["a"], p["b"], p.get("t0", 0.0))
                      for p in data["pieces"]]
        except (KeyError, TypeError) as exc:
            raise PreconditionError(f"malformed piecewise-trig JSON: {exc}") from exc
        return cls(rho, pieces)


def _clipped_piece_integral(p: TrigPiece, rho: float, level: float) -> float:
    """Integral of max(a cos rho(t-t0) + b sin rho(t-t0), level) over [start, end]."""
    amp, ph = p.amplitude, p.phase
    lo, hi = p.start, p.end
    if amp == 0.0:
        return max(0.0, level) * (hi - lo)
    if level <= -amp:
        return p.antiderivative(rho, hi) - p.antiderivative(rho, lo)
    if level >= amp:
        return level * (hi - lo)
    # crossings of amp*cos(x - ph) = level in x = rho*(t - t0)
    c = math.acos(max(-1.0, min(1.0, level / amp)))
    x_lo, x_hi = rho * (lo - p.t0), rho * (hi - p.t0)
    crossings = []
    k_lo = math.floor((x_lo - ph - c) / TWO_PI) - 1
    k_hi = math.ceil((x_hi - ph + c) / TWO_PI) + 1
    for k in range(k_lo, k_hi + 1):
        for x in (ph - c + TWO_PI * k, ph + c + TWO_PI * k):
            if x_lo < x < x_hi:
                crossings.append(x)
    xs = [x_lo] + sorted(crossings) + [x_hi]
    total = 0.0
    for u, v in zip(xs, xs[1:]):
        mid = 0.5 * (u + v)
        f_mid = amp * math.cos(mid - ph)
        if f_mid >= level:
            total += (amp * (math.sin(v - ph) - math.sin(u - ph))) / rho
        else:
            total += level * (v - u) / rho
    return total
