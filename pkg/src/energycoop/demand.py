"""Packet arrivals and the energy demand they induce at a sensor node.

Arrivals in a window of length ``tau`` are Poisson with mean ``mu * tau``;
each packet costs ``a`` energy units, so demand levels are ``a * k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_MASS_TOL = 1e-12
# Hard stop for the truncation scan; mu*tau up to 1e4 needs far fewer terms.
_MAX_TERMS = 10_000_000


@dataclass(frozen=True)
class TrafficProcess:
    """Poisson packet traffic over one observation window.

    Attributes:
        arrival_rate: Packets per unit time (``mu``).
        window: Window length (``tau``).
        energy_per_packet: Energy units spent per packet (``a``).
    """

    arrival_rate: float
    window: float = 1.0
    energy_per_packet: float = 1.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.arrival_rate) or self.arrival_rate < 0:
            raise ValueError(f"arrival_rate must be finite and >= 0, got {self.arrival_rate}")
        if not math.isfinite(self.window) or self.window <= 0:
            raise ValueError(f"window must be finite and > 0, got {self.window}")
        if not math.isfinite(self.energy_per_packet) or self.energy_per_packet <= 0:
            raise ValueError(
                f"energy_per_packet must be finite and > 0, got {self.energy_per_packet}"
            )
        if not math.isfinite(self.traffic_quantity):
            raise ValueError("traffic quantity mu*tau overflowed")

    @property
    def traffic_quantity(self) -> float:
        """Expected packet count ``mu * tau``."""
        return self.arrival_rate * self.window

    @classmethod
    def from_quantity(cls, traffic_quantity: float, energy_per_packet: float = 1.0) -> "TrafficProcess":
        return cls(arrival_rate=traffic_quantity, window=1.0, energy_per_packet=energy_per_packet)


@dataclass(frozen=True)
class DemandDistribution:
    """Discrete demand law over strictly increasing levels.

    ``probabilities`` are stored as given; for a truncated Poisson law they
    sum to slightly less than one.
    """

    support: tuple[float, ...]
    probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.support) == 0:
            raise ValueError("support must not be empty")
        if len(self.support) != len(self.probabilities):
            raise ValueError("support and probabilities must have equal length")
        for lo, hi in zip(self.support, self.support[1:]):
            if not hi > lo:
                raise ValueError("support must be strictly increasing")
        for p in self.probabilities:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability {p} outside [0, 1]")
        total = math.fsum(self.probabilities)
        if total > 1.0 + 1e-12:
            raise ValueError(f"probabilities sum to {total} > 1")

    @classmethod
    def point_mass(cls, level: float) -> "DemandDistribution":
        return cls(support=(float(level),), probabilities=(1.0,))

    @property
    def levels(self) -> np.ndarray:
        return np.asarray(self.support, dtype=float)

    @property
    def pmf(self) -> np.ndarray:
        return np.asarray(self.probabilities, dtype=float)

    @property
    def total_mass(self) -> float:
        return math.fsum(self.probabilities)

    def cumulative(self) -> np.ndarray:
        """Cumulative mass at each support level."""
        return np.cumsum(self.pmf)

    def mean(self) -> float:
        return float(np.dot(self.levels, self.pmf))


def packet_pmf(proc: TrafficProcess, k: int) -> float:
    """Probability of exactly ``k`` arrivals in the window, via log-gamma."""
    if k < 0 or int(k) != k:
        raise ValueError(f"packet count must be a non-negative integer, got {k}")
    k = int(k)
    lam = proc.traffic_quantity
    if lam == 0.0:
        return 1.0 if k == 0 else 0.0
    return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1))


def demand_distribution(proc: TrafficProcess, mass_tol: float = DEFAULT_MASS_TOL) -> DemandDistribution:
    """Truncate the Poisson demand law once cumulative mass reaches ``1 - mass_tol``.

    Probabilities are not renormalised.
    """
    if not 0.0 < mass_tol <= 1e-6:
        raise ValueError(f"mass_tol must lie in (0, 1e-6], got {mass_tol}")
    lam = proc.traffic_quantity
    target = 1.0 - mass_tol
    probs: list[float] = []
    cum = 0.0
    k = 0
    while True:
        p = packet_pmf(proc, k)
        probs.append(p)
        cum += p
        # Past the mode the terms only shrink; stop once they no longer move the sum.
        if cum >= target or (k > lam and cum + p == cum):
            break
        k += 1
        if k > _MAX_TERMS:
            raise ValueError("Poisson truncation did not terminate")
    a = proc.energy_per_packet
    support = tuple(a * i for i in range(len(probs)))
    return DemandDistribution(support=support, probabilities=tuple(probs))


def demand_cdf(dist: DemandDistribution, level: float) -> float:
    """Mass at or below ``level`` (right-continuous step function)."""
    idx = int(np.searchsorted(dist.levels, level, side="right"))
    if idx == 0:
        return 0.0
    return math.fsum(dist.probabilities[:idx])
