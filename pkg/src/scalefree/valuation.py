"""Relative infinitesimals and their scale-dependent absolute values.

A positive real ``t_e`` below a scale ``delta`` is given the value
``log_{1/delta}(delta / t_e)``.  Values that are ``lambda * delta * delta**k``
converge to ``k`` as ``delta -> 0``; :class:`ValuedInfinitesimal` keeps that
limit symbolically so products are exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .padic import PAdicNumber, padic_abs

__all__ = [
    "ValuedInfinitesimal",
    "UltraScalar",
    "AdelicProduct",
    "rel_abs",
    "infinitesimal_value",
    "ultra_norm",
    "invert_to_infinitesimal",
    "sym_product",
    "adelic_compose",
    "constant_to_log_variable_check",
]


def rel_abs(t_e: float, delta: float) -> float:
    """Absolute value of the infinitesimal ``t_e`` relative to the scale ``delta``.

    >>> rel_abs(0.01, 0.1)
    1.0
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"scale must lie in (0, 1), got {delta}")
    if t_e <= 0.0:
        raise ValueError(f"t_e must be positive, got {t_e}")
    if t_e >= delta:
        raise ValueError(f"t_e={t_e} is not below the scale {delta}")
    return math.log(delta / t_e) / math.log(1.0 / delta)


def infinitesimal_value(t: float, delta: float) -> float:
    """Semi-norm on the signed interval ``(-delta, delta)``; ``|0| = 0``."""
    if t == 0.0:
        return 0.0
    return rel_abs(abs(t), delta)


@dataclass(frozen=True)
class ValuedInfinitesimal:
    """Symbolic infinitesimal ``lam * delta**(1 + k + xi)``.

    ``k`` is the limiting absolute value; ``xi`` is an inert correction
    exponent carried for bookkeeping.
    """

    lam: float
    k: float
    xi: float = 0.0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if self.xi < 0:
            raise ValueError("xi must be nonnegative")

    def limit_value(self) -> float:
        return self.k

    def realize(self, delta: float) -> float:
        return self.lam * delta ** (1.0 + self.k + self.xi)

    def scale_bound(self) -> float:
        """Largest scale below which :meth:`realize` is an infinitesimal."""
        if self.k + self.xi == 0:
            return 1.0 if self.lam < 1 else 0.0
        return min(1.0, self.lam ** (-1.0 / (self.k + self.xi)))

    def correction(self, delta: float) -> float:
        """The lambda-dependent term ``ln(1/lam) / ln(1/delta)``."""
        return math.log(1.0 / self.lam) / math.log(1.0 / delta)

    def value(self, delta: float) -> float:
        """Finite-scale absolute value ``k + xi + correction(delta)``."""
        return rel_abs(self.realize(delta), delta)


def sym_product(a: ValuedInfinitesimal, b: ValuedInfinitesimal) -> ValuedInfinitesimal:
    """Product of two valued infinitesimals: lambdas multiply, limits add."""
    return ValuedInfinitesimal(a.lam * b.lam, a.k + b.k, a.xi + b.xi)


@dataclass(frozen=True)
class UltraScalar:
    regime: str
    value: float
    delta: float | None = None

    def to_dict(self) -> dict:
        return {"regime": self.regime, "value": self.value, "delta": self.delta}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def ultra_norm(r: float, delta: float, big: float) -> UltraScalar:
    """Extended norm on the reals.

    Magnitudes in ``[delta, big]`` keep their Euclidean value.  Below
    ``delta`` the relative value applies; above ``big`` the number is
    inverted first.  Zero has norm 0.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"scale must lie in (0, 1), got {delta}")
    if big < 1.0 / delta:
        raise ValueError(f"largeness threshold {big} is below 1/delta = {1.0 / delta}")
    m = abs(r)
    if m == 0.0:
        return UltraScalar("infinitesimal", 0.0, delta)
    if m < delta:
        return UltraScalar("infinitesimal", rel_abs(m, delta), delta)
    if m > big:
        return UltraScalar("infinite", rel_abs(1.0 / m, delta), delta)
    return UltraScalar("finite", m, None)


def invert_to_infinitesimal(t: float, delta: float, lam: float) -> tuple[float, float]:
    """Map a real ``t > delta`` to ``t~ = lam * delta**2 / t``.

    Also returns the exponent ``mu`` with ``t~/delta = (delta/t)**mu``.  ``mu``
    grows without bound as ``t`` approaches ``delta`` from above.
    """
    if not delta > 0:
        raise ValueError("scale must be positive")
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if t <= delta:
        raise ValueError(f"t={t} must exceed the scale {delta}")
    t_tilde = lam * delta * delta / t
    if t_tilde >= delta:
        raise ValueError(f"lambda={lam} too large: t~={t_tilde} is not below {delta}")
    mu = 1.0 + math.log(1.0 / lam) / math.log(t / delta)
    return t_tilde, mu


class AdelicProduct(NamedTuple):
    abs_value: Fraction
    components: tuple[PAdicNumber, ...]


def adelic_compose(base: PAdicNumber, units: Sequence[PAdicNumber] = ()) -> AdelicProduct:
    """Compose ``base * prod(1 + tau_q)`` over increasing primes ``q > base.p``.

    Unit factors have absolute value 1 at their own prime, so the composite
    keeps ``|base|_p``.
    """
    prev = base.p
    for u in units:
        if u.p <= prev:
            raise ValueError(f"unit primes must increase past {prev}, got {u.p}")
        if padic_abs(u) != 1:
            raise ValueError(f"factor {u!r} is not a unit (|.|_{u.p} = {padic_abs(u)})")
        prev = u.p
    return AdelicProduct(padic_abs(base), (base, *units))


def constant_to_log_variable_check(phi0: float, k: float, delta: float,
                                   samples: int = 16, span: tuple[float, float] = (0.01, 0.1)) -> float:
    """Log-log slope of ``phi = phi0 * delta**(k s)`` against ``t = delta**(1 - s)``.

    ``s`` runs over ``samples`` points of ``span``.  A locally constant
    ``phi`` near the scale becomes a power of ``t`` with exponent ``-k``.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"scale must lie in (0, 1), got {delta}")
    if samples < 3:
        raise ValueError("need at least 3 samples")
    lo, hi = span
    if not hi > lo:
        raise ValueError("degenerate grid")
    if not phi0 > 0:
        raise ValueError("phi0 must be positive")
    s = np.linspace(lo, hi, samples)
    log_t = (1.0 - s) * math.log(delta)
    log_phi = math.log(phi0) + k * s * math.log(delta)
    slope, _ = np.polyfit(log_t, log_phi, 1)
    return float(slope)
