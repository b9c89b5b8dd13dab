"""Deterministic communication-latency formulas: TTI-quantised transmission,
OFDM downlink rate, satellite propagation and cloud access latency."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DivisionDomain, InvalidSample


@dataclass(frozen=True)
class PayloadSpec:
    """Data volume moved for one task: request up, response down, in bits."""

    uplink_bits: float
    downlink_bits: float = 0.0

    def __post_init__(self):
        if self.uplink_bits < 0 or self.downlink_bits < 0:
            raise InvalidSample("payload sizes must be >= 0")


@dataclass(frozen=True)
class LinkSpec:
    """A point-to-point link: rates in bits/s, TTI in seconds.

    Propagation is either given directly (one-way seconds) or derived from a
    satellite distance and medium speed. Fog-to-fog links leave both unset;
    their propagation is negligible.
    """

    uplink_rate: float
    downlink_rate: float
    tti: float = 0.001
    propagation_one_way: float | None = None
    distance_to_satellite: float | None = None
    medium_speed: float | None = None

    def __post_init__(self):
        if self.uplink_rate <= 0 or self.downlink_rate <= 0:
            raise InvalidSample("link rates must be > 0")
        if self.tti <= 0:
            raise InvalidSample("tti must be > 0")
        if self.distance_to_satellite is not None and self.distance_to_satellite < 0:
            raise InvalidSample("distance must be >= 0")
        if self.medium_speed is not None and self.medium_speed <= 0:
            raise InvalidSample("medium speed must be > 0")

    def propagation_round_trip(self) -> float:
        """Round-trip propagation seconds; 0 when the link defines none."""
        if self.propagation_one_way is not None:
            return 2.0 * self.propagation_one_way
        if self.distance_to_satellite is not None:
            return propagation_latency(self.distance_to_satellite, self.medium_speed or 0.0)
        return 0.0


@dataclass(frozen=True)
class SubchannelAllocation:
    """OFDM subchannel grant: per-channel (allocated, linear SINR) pairs."""

    subchannel_bandwidth: float
    allocations: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.subchannel_bandwidth <= 0:
            raise InvalidSample("subchannel bandwidth must be > 0")
        for allocated, sinr in self.allocations:
            if not math.isfinite(sinr) or sinr < 0:
                raise InvalidSample("SINR must be finite and >= 0")

    @property
    def total_bandwidth(self) -> float:
        return self.subchannel_bandwidth * len(self.allocations)


def transmission_ttis(payload_bits: float, rate: float, tti: float) -> int:
    """Number of whole TTIs needed to push ``payload_bits`` through the channel."""
    if rate <= 0 or tti <= 0 or rate * tti == 0:
        raise DivisionDomain("rate and tti must be > 0")
    if payload_bits < 0:
        raise InvalidSample("payload must be >= 0")
    return math.ceil(payload_bits / (rate * tti))


def round_trip_transmission(payload: PayloadSpec, link: LinkSpec) -> float:
    """Uplink plus downlink transmission latency in seconds."""
    up = transmission_ttis(payload.uplink_bits, link.uplink_rate, link.tti)
    down = transmission_ttis(payload.downlink_bits, link.downlink_rate, link.tti)
    return (up + down) * link.tti


def ofdm_downlink_rate(alloc: SubchannelAllocation) -> float:
    """Aggregate Shannon rate over the allocated subchannels, bits/s."""
    total = 0.0
    for allocated, sinr in alloc.allocations:
        if allocated:
            total += math.log2(1.0 + sinr)
    return alloc.subchannel_bandwidth * total


def propagation_latency(distance: float, medium_speed: float) -> float:
    """Round-trip propagation time 2*d/s in seconds."""
    if medium_speed <= 0:
        raise DivisionDomain("medium speed must be > 0")
    if distance < 0:
        raise InvalidSample("distance must be >= 0")
    return 2.0 * distance / medium_speed


def cloud_comm_latency(round_trip: float, propagation: float) -> float:
    """Total communication latency: transmission round trip plus propagation."""
    if round_trip < 0 or propagation < 0:
        raise InvalidSample("latencies must be >= 0")
    return round_trip + propagation
