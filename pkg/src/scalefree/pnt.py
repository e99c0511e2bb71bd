"""Relative-error scans of the prime number theorem main term.

The comparator is ``eps(x) = ln(x) / x``; the relative error at ``x`` is
``pi(x) * eps(x) - 1``.  ``li(x) = integral_2^x dt / ln t`` is carried
alongside as the standard reference.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy import integrate

from .export import csv_text
from .sieve import PiTable, sieve_pi

__all__ = [
    "ScanRow",
    "ErrorScan",
    "FitResult",
    "RHReport",
    "GOLDEN_NU",
    "log_grid",
    "default_grid",
    "li2",
    "pnt_scan",
    "scan_range",
    "fit_exponent",
    "rh_bound_check",
    "SCAN_HEADER",
]

GOLDEN_NU = (math.sqrt(5.0) - 1.0) / 2.0
SCAN_HEADER = ("x", "pi", "eps", "relerr", "li", "li_err")


class ScanRow(NamedTuple):
    x: int
    pi: int
    eps: float
    relerr: float
    li: float
    li_err: float


@dataclass(frozen=True)
class ErrorScan:
    rows: tuple[ScanRow, ...]
    window: tuple[int, int]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    def to_csv(self) -> str:
        return csv_text(SCAN_HEADER, self.rows)


@dataclass(frozen=True)
class FitResult:
    exponent: float
    intercept: float
    r2: float
    window: tuple[float, float]
    n: int

    def to_dict(self) -> dict:
        return {"exponent": self.exponent, "intercept": self.intercept, "r2": self.r2,
                "x_min": self.window[0], "x_max": self.window[1]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def log_grid(x_min: float, x_max: float, points: int) -> list[int]:
    """``points`` log-spaced values rounded to integers (duplicates dropped)."""
    if not 2 <= x_min < x_max:
        raise ValueError("need 2 <= x_min < x_max")
    if points < 2:
        raise ValueError("need at least 2 grid points")
    g = np.rint(np.logspace(math.log10(x_min), math.log10(x_max), points)).astype(np.int64)
    return sorted({int(v) for v in g})


def default_grid(x_min: float = 1e3, x_max: float = 1e8, per_decade: int = 40) -> list[int]:
    decades = math.log10(x_max) - math.log10(x_min)
    return log_grid(x_min, x_max, int(round(decades * per_decade)) + 1)


def _li_segment(a: float, b: float) -> float:
    # substitute t = e^u to tame the integrand
    val, _ = integrate.quad(lambda u: math.exp(u) / u, math.log(a), math.log(b),
                            epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def li2(xs: Sequence[float]) -> np.ndarray:
    """``integral_2^x dt/ln t`` for each ``x``, accumulated piecewise over sorted points."""
    xs = np.asarray(xs, dtype=float)
    if np.any(xs < 2):
        raise ValueError("li2 needs x >= 2")
    order = np.argsort(xs, kind="stable")
    out = np.empty_like(xs)
    acc, prev = 0.0, 2.0
    for i in order:
        x = xs[i]
        if x > prev:
            acc += _li_segment(prev, x)
            prev = x
        out[i] = acc
    return out


def pnt_scan(table: PiTable, grid: Sequence[int]) -> ErrorScan:
    """Relative error and li offset at every grid point tabulated in ``table``."""
    xs = sorted({int(x) for x in grid})
    if not xs:
        raise ValueError("empty grid")
    if xs[0] < 2:
        raise ValueError("grid points must be >= 2")
    if xs[-1] > table.limit:
        raise ValueError(f"grid point {xs[-1]} exceeds the table limit {table.limit}")
    lis = li2(xs)
    rows = []
    for x, li in zip(xs, lis):
        pi = table.pi(x)
        eps = math.log(x) / x
        rows.append(ScanRow(x, pi, eps, pi * eps - 1.0, float(li), float(li) - pi))
    return ErrorScan(tuple(rows), (xs[0], xs[-1]))


def scan_range(x_min: float, x_max: float, points: int, threads: int | None = None) -> ErrorScan:
    """Sieve once up to ``x_max`` and scan a log grid."""
    grid = log_grid(x_min, x_max, points)
    table = sieve_pi(grid[-1], checkpoints=grid, threads=threads)
    return pnt_scan(table, grid)


def fit_exponent(scan: ErrorScan, window: tuple[float, float] | None = None) -> FitResult:
    """Least-squares slope of ``ln(relerr)`` against ``ln(x)`` inside ``window``."""
    lo, hi = window if window is not None else scan.window
    rows = [r for r in scan.rows if lo <= r.x <= hi]
    if len(rows) < 3:
        raise ValueError(f"need at least 3 rows in [{lo}, {hi}], got {len(rows)}")
    y = np.array([r.relerr for r in rows])
    if np.any(y <= 0):
        raise ValueError("relative error must be positive throughout the fit window")
    lx = np.log([float(r.x) for r in rows])
    ly = np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return FitResult(float(slope), float(intercept), min(1.0, max(0.0, r2)),
                     (float(lo), float(hi)), len(rows))


class RHReport(NamedTuple):
    exponent: float
    t: tuple[float, ...]
    ratios: tuple[float, ...]
    holds: bool
    monotone: bool
    violated: bool


def rh_bound_check(nu: float, sigma: float, t_grid: Sequence[float], M: float = 1.0) -> RHReport:
    """Check ``t**nu <= M t**(1/2 - sigma)`` on ``t_grid``.

    Ratios are ``t**(nu - 1/2 + sigma) / M``.  ``monotone`` refers to the
    grid ordered by decreasing ``t``.  A nonpositive exponent is reported as
    ``violated`` rather than raised.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if M <= 0:
        raise ValueError("M must be positive")
    t = np.asarray(sorted(t_grid, reverse=True), dtype=float)
    if t.size == 0 or np.any(t <= 0) or np.any(t > 1):
        raise ValueError("t grid must lie in (0, 1]")
    e = nu - 0.5 + sigma
    ratios = t**e / M
    holds = bool(np.all(ratios <= 1.0))
    monotone = bool(np.all(np.diff(ratios) < 0)) if t.size > 1 else True
    return RHReport(e, tuple(t.tolist()), tuple(ratios.tolist()), holds, monotone, e <= 0)
