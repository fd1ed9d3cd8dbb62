"""Small 1-D refinement utilities: golden-section maxima and level bisection."""
from __future__ import annotations

import math

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(fn, lo: float, hi: float, tol: float = 3e-8):
    """Maximum of a unimodal scalar function on [lo, hi]; returns (argmax, max)."""
    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = float(fn(c)), float(fn(d))
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = float(fn(c))
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = float(fn(d))
    t = 0.5 * (a + b)
    return t, float(fn(t))


def golden_max_batch(fn, lo, hi, tol: float = 3e-8):
    """Golden-section maxima over many brackets at once; fn must be vectorized.

    Returns (argmax array, max array); one fn call per iteration regardless of
    the number of brackets.
    """
    a = np.asarray(lo, dtype=float).copy()
    b = np.asarray(hi, dtype=float).copy()
    if len(a) == 0:
        return a, a
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = np.asarray(fn(c), dtype=float)
    fd = np.asarray(fn(d), dtype=float)
    span = float(np.max(b - a))
    while span > tol:
        left = fc >= fd
        a2 = np.where(left, a, c)
        b2 = np.where(left, d, b)
        keep_t = np.where(left, c, d)
        keep_f = np.where(left, fc, fd)
        probe = np.where(left, b2 - _INVPHI * (b2 - a2), a2 + _INVPHI * (b2 - a2))
        fp = np.asarray(fn(probe), dtype=float)
        a, b = a2, b2
        c = np.where(left, probe, keep_t)
        fc = np.where(left, fp, keep_f)
        d = np.where(left, keep_t, probe)
        fd = np.where(left, keep_f, fp)
        span = float(np.max(b - a))
    t = 0.5 * (a + b)
    return t, np.asarray(fn(t), dtype=float)


def max_on_arc(fn, lo: float, hi: float, n: int = 256):
    """Grid-plus-golden maximum of fn over [lo, hi] (no unimodality assumed)."""
    if hi <= lo:
        return lo, float(fn(lo))
    ts = np.linspace(lo, hi, max(int(n), 8))
    vs = np.asarray(fn(ts), dtype=float)
    order = np.argsort(vs)[::-1]
    best_t, best_v = float(ts[order[0]]), float(vs[order[0]])
    step = ts[1] - ts[0]
    seen = 0
    for i in order:
        if vs[i] < best_v - 1e-6 * (1.0 + abs(best_v)) and seen >= 3:
            break
        a = max(lo, ts[i] - step)
        b = min(hi, ts[i] + step)
        t, v = golden_max(fn, a, b)
        if v > best_v:
            best_t, best_v = t, v
        seen += 1
    return best_t, best_v


def bisect_level(fn, level: float, t_inside: float, t_outside: float,
                 tol: float = 1e-9) -> float:
    """Boundary point of {fn >= level} between an inside and an outside point."""
    a, b = float(t_inside), float(t_outside)
    if not float(fn(a)) >= level:
        raise ValueError("t_inside does not satisfy fn >= level")
    for _ in range(200):
        if abs(b - a) <= tol:
            break
        m = 0.5 * (a + b)
        if float(fn(m)) >= level:
            a = m
        else:
            b = m
    return a
