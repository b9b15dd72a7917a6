"""Band-limited AWGN link: rate, required transmit power, demander efficiency.

Everything is SI (W, Hz, bit/s). Energy and power are numerically equal
because one slot lasts ``slot_seconds`` (1 s by default).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

MICRO = 1e-6


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) * 1e-3


@dataclass(frozen=True)
class ChannelParams:
    """Link parameters.

    Attributes:
        bandwidth: ``b_i`` in Hz.
        noise_psd: ``N_0`` in W/Hz.
        rate_threshold: ``r_b`` in bit/s.
        slot_seconds: Slot length used when converting power to energy.
    """

    bandwidth: float
    noise_psd: float
    rate_threshold: float = 0.0
    slot_seconds: float = 1.0

    def __post_init__(self) -> None:
        for name in ("bandwidth", "noise_psd", "rate_threshold", "slot_seconds"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
        if self.bandwidth <= 0:
            raise ValueError(f"bandwidth must be > 0, got {self.bandwidth}")
        if self.noise_psd <= 0:
            raise ValueError(f"noise_psd must be > 0, got {self.noise_psd}")
        if self.rate_threshold < 0:
            raise ValueError(f"rate_threshold must be >= 0, got {self.rate_threshold}")
        if self.slot_seconds <= 0:
            raise ValueError(f"slot_seconds must be > 0, got {self.slot_seconds}")

    @classmethod
    def mote_defaults(cls) -> "ChannelParams":
        """40 kbit/s over 10 MHz with -50 dBm/Hz noise (Berkeley mote figures)."""
        return cls(bandwidth=10e6, noise_psd=dbm_to_watts(-50.0), rate_threshold=40e3)


def achievable_rate(ch: ChannelParams, power: float) -> float:
    """Shannon rate ``b log2(1 + P / (b N0))`` for transmit power ``power`` (W)."""
    if power < 0:
        raise ValueError(f"transmit power must be >= 0, got {power}")
    return ch.bandwidth * math.log1p(power / (ch.bandwidth * ch.noise_psd)) / math.log(2.0)


def required_power(ch: ChannelParams) -> float:
    """Transmit power (W) needed to sustain ``ch.rate_threshold``."""
    # expm1 keeps precision when r_b << b_i
    return ch.bandwidth * ch.noise_psd * math.expm1(ch.rate_threshold / ch.bandwidth * math.log(2.0))


def demander_efficiency(ch: ChannelParams) -> float:
    """Bits delivered per joule at the rate threshold."""
    if ch.rate_threshold <= 0:
        raise ValueError("demander efficiency is undefined at zero rate")
    return ch.rate_threshold / required_power(ch)


def market_constant(ch: ChannelParams) -> float:
    """Demander efficiency expressed per micro-joule, the market's price intercept."""
    return demander_efficiency(ch) * MICRO
