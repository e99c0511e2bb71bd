"""Growing and local modes: the prime ladder, golden-ratio scaling, and the
asymptotic correction ``eps(t) * pi(1/t) * (1 - t**nu)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import count
from typing import Iterator, NamedTuple

from .export import csv_text

__all__ = [
    "NU",
    "GoldenCF",
    "LadderState",
    "golden_cf",
    "cf_convergents",
    "prime_ladder_walk",
    "ladder_to_csv",
    "solve_rescaled",
    "rescaled_residual",
    "asymptotic_correction",
]

NU = (math.sqrt(5.0) - 1.0) / 2.0


class GoldenCF(NamedTuple):
    value: float
    error_ratios: tuple[float, ...]


def cf_convergents(iters: int) -> list[Fraction]:
    """Exact iterates of ``x -> 1/(1+x)`` from ``x = 0``: ``[0, 1, 1/2, 2/3, 3/5, ...]``."""
    xs = [Fraction(0)]
    for _ in range(iters):
        xs.append(1 / (1 + xs[-1]))
    return xs


def golden_cf(iters: int) -> GoldenCF:
    """Truncated continued fraction ``1/(1+1/(1+...))`` with ``iters`` levels.

    Returns the value and the successive error ratios
    ``|x_{k+1} - nu| / |x_k - nu|``, computed exactly (to 60 digits) so the
    ratios stay meaningful after the float value has converged.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    xs = cf_convergents(iters)
    with localcontext() as ctx:
        ctx.prec = 60 + 2 * iters // 4
        nu = (Decimal(5).sqrt() - 1) / 2
        errs = [abs(Decimal(x.numerator) / Decimal(x.denominator) - nu) for x in xs]
        ratios = tuple(float(errs[k + 1] / errs[k]) for k in range(iters))
    return GoldenCF(float(xs[-1]), ratios)


# ---------------------------------------------------------------------------
# prime ladder
# ---------------------------------------------------------------------------

def _postponed_sieve() -> Iterator[int]:
    # incremental Eratosthenes; composites are scheduled lazily from a
    # recursive supply of base primes
    yield 2
    yield 3
    yield 5
    yield 7
    sieve: dict[int, int] = {}
    base = _postponed_sieve()
    next(base)
    p = next(base)
    q = p * p
    for c in count(9, 2):
        if c in sieve:
            step = sieve.pop(c)
        elif c < q:
            yield c
            continue
        else:
            step = 2 * p
            p = next(base)
            q = p * p
        m = c + step
        while m in sieve:
            m += step
        sieve[m] = step


_LADDER: list[int] = []
_LADDER_SOURCE = _postponed_sieve()


def _rungs_upto(x: float) -> list[int]:
    while not _LADDER or _LADDER[-1] <= x:
        _LADDER.append(next(_LADDER_SOURCE))
    lo, hi = 0, len(_LADDER)
    while lo < hi:
        mid = (lo + hi) // 2
        if _LADDER[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return _LADDER[:lo]


@dataclass(frozen=True)
class LadderState:
    current_prime: int
    inversion_count: int
    cf_exponent: float
    trajectory: tuple[tuple[int, int, float], ...]


def prime_ladder_walk(x_max: float) -> LadderState:
    """Walk the growing mode through every primal scale ``1/p`` with ``p <= x_max``.

    Each crossing is one inversion: the count goes up by one and the local
    exponent gains one continued-fraction level, so after ``k`` crossings it
    equals ``F_k / F_{k+1}``.  The rungs come from an incremental sieve that
    shares no code with :mod:`scalefree.sieve`.
    """
    if x_max < 2:
        raise ValueError(f"x_max must be >= 2, got {x_max}")
    x = 0.0
    events = []
    for n, p in enumerate(_rungs_upto(x_max), start=1):
        x = 1.0 / (1.0 + x)
        events.append((p, n, x))
    last = events[-1]
    return LadderState(last[0], last[1], last[2], tuple(events))


def ladder_to_csv(state: LadderState) -> str:
    return csv_text(("prime", "inversion_count", "cf_exponent"), state.trajectory)


# ---------------------------------------------------------------------------
# rescaled equation and asymptotics
# ---------------------------------------------------------------------------

def solve_rescaled(C: float, t: float) -> float:
    """``tau(t) = C / ln t``, the solution of ``ln t * dtau/d(ln t) = -tau``."""
    if t <= 0:
        raise ValueError("t must be positive")
    if t == 1.0:
        raise ValueError("t = 1 is singular")
    return C / math.log(t)


def rescaled_residual(C: float, t: float) -> float:
    """``ln t * dtau/d(ln t) + tau`` with the analytic derivative ``-C / ln(t)**2``."""
    lt = math.log(t)
    tau = solve_rescaled(C, t)
    return lt * (-C / (lt * lt)) + tau


def asymptotic_correction(t: float, pi_value: int, nu: float = NU) -> float:
    """``t ln(1/t) * pi(1/t) * (1 - t**nu)``; tends to 1 as ``t -> 0`` iff the main term holds."""
    if not 0.0 < t < 1.0:
        raise ValueError("t must lie in (0, 1)")
    if pi_value <= 0:
        raise ValueError("pi_value must be positive")
    return t * math.log(1.0 / t) * pi_value * (1.0 - t**nu)
