"""fogfed: probabilistic scheduling and discrete-event simulation for
federated fog computing."""

from .distributions import (
    CentralInterval,
    Empirical,
    LatencyDistribution,
    Normal,
    PointMass,
    central_interval,
    convolve,
    fit_normal,
    intervals_overlap,
    success_probability,
)

__all__ = [
    "CentralInterval",
    "Empirical",
    "LatencyDistribution",
    "Normal",
    "PointMass",
    "central_interval",
    "convolve",
    "fit_normal",
    "intervals_overlap",
    "success_probability",
]

__version__ = "0.1.0"
