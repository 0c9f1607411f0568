"""Scalar search primitives: bisection for monotone root finding and
golden-section minimization on an interval."""

from __future__ import annotations

from typing import Callable

_INV_PHI = 0.6180339887498949  # (sqrt(5) - 1) / 2


def bisect_increasing(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    rtol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Root of a strictly increasing function on [lo, hi].

    Requires fn(lo) <= 0 <= fn(hi); returns an endpoint if it already has the
    root's sign.
    """
    f_lo, f_hi = fn(lo), fn(hi)
    if f_lo > 0 or f_hi < 0:
        raise ValueError(f"root not bracketed: f({lo})={f_lo}, f({hi})={f_hi}")
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rtol * max(1.0, abs(lo), abs(hi)):
            return mid
        f_mid = fn(mid)
        if f_mid == 0:
            return mid
        if f_mid < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_section_min(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-9,
    max_iter: int = 200,
) -> float:
    """Location of a minimum of fn on [lo, hi] assuming local unimodality."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    f_c, f_d = fn(c), fn(d)
    for _ in range(max_iter):
        if b - a <= tol * max(1.0, abs(a), abs(b)):
            break
        if f_c < f_d:
            b, d, f_d = d, c, f_c
            c = b - _INV_PHI * (b - a)
            f_c = fn(c)
        else:
            a, c, f_c = c, d, f_d
            d = a + _INV_PHI * (b - a)
            f_d = fn(d)
    return 0.5 * (a + b)
