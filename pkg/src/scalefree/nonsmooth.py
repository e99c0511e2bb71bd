"""Iterated nonsmooth solutions of ``t dtau/dt = tau`` near ``t = 1``.

Write ``t = 1 - eta``.  The left branch is built from the level variables

    eta_{n+1} = alpha_{n+1} * eta_n**2 - eps_{n+1},

as ``tau(1 - eta) = C * prod_{i<L} 1/(1 + eta_i) * (1 - eta_L)``: every level
contributes a factor ``1/t~_{i+}`` and the last level is closed by the
standard solution of its own self-similar equation.  With ``alpha = 1`` and
``eps = 0`` the product telescopes to ``1 - eta`` exactly.  The right branch
is always the standard ``tau(t) = t``.

Level variables may go negative (``eps_{n+1} > alpha_{n+1} eta_n**2`` is
normal near ``t = 1``); a schedule is rejected only when some ``|eta_n|``
reaches 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb
from typing import Callable, Mapping, NamedTuple, Sequence

import numpy as np

from .export import csv_text

__all__ = [
    "RescalingSchedule",
    "IterationTrace",
    "InfeasibleScheduleError",
    "NonsmoothSolution",
    "ProbeResult",
    "ExtendedUnity",
    "iterate_schedule",
    "evaluate_solution",
    "parity_transform",
    "discontinuity_probe",
    "probe_noise_floor",
    "extended_unity",
    "chained_sigmas",
    "trace_to_csv",
]

UNIT_ROUNDOFF = 2.0**-53


class InfeasibleScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class RescalingSchedule:
    alphas: tuple[float, ...]
    epsilons: tuple[float, ...]
    levels: int
    eta0: float

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))
        if self.levels < 0:
            raise ValueError("levels must be >= 0")
        if len(self.alphas) < self.levels or len(self.epsilons) < self.levels:
            raise ValueError("alphas and epsilons need at least `levels` entries")
        if any(a < 1.0 for a in self.alphas):
            raise ValueError("alphas must be >= 1")
        if any(e < 0.0 for e in self.epsilons):
            raise ValueError("epsilons must be >= 0")
        if not -1.0 < self.eta0 < 1.0:
            raise ValueError("eta0 must lie in (-1, 1)")

    @classmethod
    def build(cls, eta0: float, levels: int, alphas: Sequence[float] = (),
              epsilons: Sequence[float] = ()) -> "RescalingSchedule":
        """Pad short ``alphas``/``epsilons`` with the trivial values 1 and 0."""
        a = list(alphas)[:levels] + [1.0] * max(0, levels - len(alphas))
        e = list(epsilons)[:levels] + [0.0] * max(0, levels - len(epsilons))
        return cls(tuple(a), tuple(e), levels, eta0)

    @classmethod
    def trivial(cls, eta0: float, levels: int) -> "RescalingSchedule":
        return cls.build(eta0, levels)

    def with_eta0(self, eta0: float) -> "RescalingSchedule":
        return RescalingSchedule(self.alphas, self.epsilons, self.levels, eta0)

    @property
    def is_trivial(self) -> bool:
        return all(a == 1.0 for a in self.alphas[:self.levels]) and \
            all(e == 0.0 for e in self.epsilons[:self.levels])


@dataclass(frozen=True)
class IterationTrace:
    etas: tuple[float, ...]
    t_plus: tuple[float, ...]
    partial_products: tuple[float, ...]
    C: float

    @property
    def eta0(self) -> float:
        return self.etas[0]

    @property
    def levels(self) -> int:
        return len(self.etas) - 1

    @property
    def final_product(self) -> float:
        return self.partial_products[-1]

    def left_value(self) -> float:
        """``C * prod_{i<L} 1/(1+eta_i) * (1 - eta_L)``."""
        head = self.partial_products[-2] if len(self.etas) > 1 else 1.0
        return self.C * head * (1.0 - self.etas[-1])


def _levels(schedule: RescalingSchedule) -> list[float]:
    etas = [schedule.eta0]
    eta = schedule.eta0
    for n in range(schedule.levels):
        eta = schedule.alphas[n] * eta * eta - schedule.epsilons[n]
        if not -1.0 < eta < 1.0:
            raise InfeasibleScheduleError(
                f"level {n + 1}: eta={eta} left (-1, 1); schedule infeasible")
        etas.append(eta)
    return etas


def _continuity_constant(schedule: RescalingSchedule) -> float:
    etas = _levels(schedule.with_eta0(0.0))
    value = 1.0
    for e in etas[:-1]:
        value /= 1.0 + e
    return 1.0 / (value * (1.0 - etas[-1]))


def iterate_schedule(schedule: RescalingSchedule) -> IterationTrace:
    """Run the level recursion and record ``eta_n``, ``1 + eta_n`` and running products."""
    etas = _levels(schedule)
    products = []
    running = 1.0
    for e in etas:
        running /= 1.0 + e
        products.append(running)
    return IterationTrace(tuple(etas), tuple(1.0 + e for e in etas), tuple(products),
                          _continuity_constant(schedule))


def evaluate_solution(trace: IterationTrace, t: float, side: str) -> float:
    """Evaluate the solution at ``t`` from the trace computed at ``eta0 = |t - 1|``."""
    if not 0.0 < t < 2.0:
        raise ValueError(f"t={t} outside (0, 2)")
    if side == "right":
        return t
    if side != "left":
        raise ValueError("side must be 'left' or 'right'")
    if not math.isclose(abs(t - 1.0), trace.eta0, rel_tol=1e-12, abs_tol=1e-15):
        raise ValueError(f"trace was computed at eta0={trace.eta0}, not |t-1|={abs(t - 1.0)}")
    return trace.left_value()


@dataclass(frozen=True)
class NonsmoothSolution:
    """Callable two-branch solution for a fixed rescaling schedule.

    ``reflected=True`` gives the parity image: the left branch becomes the
    standard solution and the right branch is the left-branch construction
    evaluated at ``eta0 = 1 - t < 0``.
    """

    alphas: tuple[float, ...] = ()
    epsilons: tuple[float, ...] = ()
    levels: int = 30
    reflected: bool = False

    def schedule(self, eta0: float) -> RescalingSchedule:
        return RescalingSchedule.build(eta0, self.levels, self.alphas, self.epsilons)

    @property
    def C(self) -> float:
        return _continuity_constant(self.schedule(0.0))

    def branch(self, s: float) -> float:
        """Left-branch construction at signed ``eta0 = s``."""
        return iterate_schedule(self.schedule(s)).left_value()

    def evaluate(self, t: float, side: str) -> float:
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        if not 0.0 < t < 2.0:
            raise ValueError(f"t={t} outside (0, 2)")
        constructed = "right" if self.reflected else "left"
        return self.branch(1.0 - t) if side == constructed else t

    def __call__(self, t: float) -> float:
        return self.evaluate(t, "right" if t >= 1.0 else "left")

    def parity(self) -> "NonsmoothSolution":
        return NonsmoothSolution(self.alphas, self.epsilons, self.levels, not self.reflected)

    @property
    def is_trivial(self) -> bool:
        return self.schedule(0.0).is_trivial


def parity_transform(solution: NonsmoothSolution, etas: Sequence[float] | None = None):
    """Reflect ``t_+ <-> t_-`` and measure the sup deviation on ``1 +/- eta``.

    Returns ``(reflected_solution, max_deviation)``.  The default grid is
    ``eta`` in ``[0.01, 0.1]``.
    """
    if etas is None:
        etas = np.linspace(0.01, 0.1, 46)
    ref = solution.parity()
    dev = 0.0
    for eta in etas:
        for t in (1.0 + eta, 1.0 - eta):
            dev = max(dev, abs(ref(t) - solution(t)))
    return ref, dev


class ProbeResult(NamedTuple):
    jump: float
    right: float
    left: float
    noise_floor: float


def _one_sided_derivative(f: Callable[[float], float], side: str, order: int, h: float,
                          extrapolation: int) -> float:
    s = 1.0 if side == "right" else -1.0
    table = []
    for k in range(extrapolation):
        step = h / 2**k
        acc = 0.0
        for j in range(order + 1):
            acc += (-1) ** (order - j) * comb(order, j) * f(1.0 + s * j * step)
        table.append(acc / (s * step) ** order)
    for j in range(1, extrapolation):
        table = [(2**j * table[i + 1] - table[i]) / (2**j - 1) for i in range(len(table) - 1)]
    return table[0]


def _richardson_weights(extrapolation: int) -> np.ndarray:
    rows = list(np.eye(extrapolation))
    for j in range(1, extrapolation):
        rows = [(2**j * rows[i + 1] - rows[i]) / (2**j - 1) for i in range(len(rows) - 1)]
    return rows[0]


def probe_noise_floor(order: int = 2, h: float = 5e-3, levels: int = 30,
                      extrapolation: int = 4, scale: float = 1.0) -> float:
    """First-order rounding bound on the jump returned by :func:`discontinuity_probe`.

    Each function value is assumed good to ``(2 L + 8) u`` relative
    (``u`` = unit roundoff), with magnitude at most ``scale``.  The bound is
    the l1 norm of the combined stencil times that error, for both sides.
    Trivial schedules measure comfortably below it.
    """
    w = _richardson_weights(extrapolation)
    stencil = sum(comb(order, j) for j in range(order + 1))
    l1 = sum(abs(w[k]) * stencil / (h / 2**k) ** order for k in range(extrapolation))
    return float(2.0 * l1 * (2 * levels + 8) * UNIT_ROUNDOFF * scale)


def discontinuity_probe(solution: NonsmoothSolution, order: int = 2, h: float = 5e-3,
                        extrapolation: int = 4) -> ProbeResult:
    """Right-minus-left one-sided derivative of the given order at ``t = 1``.

    One-sided forward differences with steps ``h, h/2, ...`` are combined by a
    Richardson table that removes error terms up to ``h**(extrapolation-1)``.
    """
    if not 1e-6 < h < 1e-2:
        raise ValueError(f"step h={h} outside the stable range (1e-6, 1e-2)")
    if order < 1:
        raise ValueError("order must be >= 1")
    right = _one_sided_derivative(lambda t: solution.evaluate(t, "right"), "right", order, h,
                                  extrapolation)
    left = _one_sided_derivative(lambda t: solution.evaluate(t, "left"), "left", order, h,
                                 extrapolation)
    floor = probe_noise_floor(order, h, solution.levels, extrapolation)
    return ProbeResult(right - left, right, left, floor)


class ExtendedUnity(NamedTuple):
    T: float
    log_deviation: float
    bound: float


def chained_sigmas(eta: float, primes: Sequence[int], alphas: Mapping[int, float] | None = None,
                   epsilons: Mapping[int, float] | None = None) -> dict[int, float]:
    """``sigma_p = alpha_p * (eta_prev - eps_p/alpha_p)**2`` along ``primes``.

    ``eta_prev`` starts at ``eta`` and is then the sigma of the preceding
    prime in the window.
    """
    alphas = alphas or {}
    epsilons = epsilons or {}
    out = {}
    prev = eta
    for p in primes:
        a = alphas.get(p, 1.0)
        e = epsilons.get(p, 0.0)
        prev = a * (prev - e / a) ** 2
        out[p] = prev
    return out


def extended_unity(eta: float, sigma_schedule: Mapping[int, float | Callable[[float], float]],
                   prime_window: Sequence[int]) -> ExtendedUnity:
    """``T(eta) = (1 + eta) * prod_{q in window} (1 + sigma_q(eta))``.

    Also reports ``|ln T - ln(1 + eta)|`` and its bound ``sum sigma_q``.
    """
    if not 0.0 <= eta < 1.0:
        raise ValueError("eta must lie in [0, 1)")
    sigmas = []
    for q in prime_window:
        s = sigma_schedule[q]
        s = float(s(eta)) if callable(s) else float(s)
        if s < 0:
            raise ValueError(f"sigma_{q} = {s} is negative")
        if sigmas and s > sigmas[-1]:
            raise ValueError(f"sigma_{q} = {s} exceeds the preceding prime's value")
        sigmas.append(s)
    T = 1.0 + eta
    for s in sigmas:
        T *= 1.0 + s
    dev = math.fsum(math.log1p(s) for s in sigmas)
    return ExtendedUnity(T, dev, math.fsum(sigmas))


def trace_to_csv(trace: IterationTrace) -> str:
    rows = ((n, e, tp, pp) for n, (e, tp, pp) in
            enumerate(zip(trace.etas, trace.t_plus, trace.partial_products)))
    return csv_text(("level", "eta", "t_plus", "partial_product"), rows)
