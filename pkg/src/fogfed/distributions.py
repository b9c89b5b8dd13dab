"""Latency distributions: the currency every scheduling decision trades in.

Three kinds are supported: ``Normal`` (parametric), ``Empirical`` (atoms with
optional weights, e.g. trace samples or convolution grids) and ``PointMass``
(degenerate). All are immutable values; operations return new objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import InsufficientData, InvalidSample

#: Resolution of the uniform grid used for empirical convolution results.
GRID_POINTS = 2048

# Quantile clip used when an unbounded normal operand must be gridded.
_TAIL_EPS = 1e-9


class LatencyDistribution:
    """Common interface; concrete kinds are Normal, Empirical, PointMass."""

    kind: str

    def cdf(self, x):
        raise NotImplementedError

    def quantile(self, q):
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    def shifted(self, offset: float) -> "LatencyDistribution":
        raise NotImplementedError


@dataclass(frozen=True)
class Normal(LatencyDistribution):
    """Gaussian latency model. ``stddev`` may be 0 (degenerate).

    The distribution is never truncated at zero: a normal fitted to latency
    data may put mass below 0, and CDF queries there return the true normal
    CDF so that success probabilities stay consistent.
    """

    mean: float
    stddev: float

    kind = "normal"

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.stddev)):
            raise InvalidSample("normal parameters must be finite")
        if self.stddev < 0:
            raise InvalidSample("stddev must be >= 0")

    @property
    def std(self) -> float:
        return self.stddev

    def cdf(self, x):
        if self.stddev == 0:
            return np.where(np.asarray(x, dtype=float) >= self.mean, 1.0, 0.0)[()]
        return ndtr((np.asarray(x, dtype=float) - self.mean) / self.stddev)[()]

    def quantile(self, q):
        if self.stddev == 0:
            return np.full_like(np.asarray(q, dtype=float), self.mean)[()]
        return (self.mean + self.stddev * ndtri(np.asarray(q, dtype=float)))[()]

    def sample(self, rng, size):
        return rng.normal(self.mean, self.stddev, size)

    def shifted(self, offset):
        return Normal(self.mean + offset, self.stddev)


@dataclass(frozen=True)
class PointMass(LatencyDistribution):
    """All mass at a single latency value (e.g. zero transfer cost)."""

    value: float

    kind = "point_mass"

    def __post_init__(self):
        if not math.isfinite(self.value) or self.value < 0:
            raise InvalidSample("point mass must be finite and >= 0")

    @property
    def mean(self) -> float:
        return self.value

    @property
    def std(self) -> float:
        return 0.0

    def cdf(self, x):
        return np.where(np.asarray(x, dtype=float) >= self.value, 1.0, 0.0)[()]

    def quantile(self, q):
        return np.full_like(np.asarray(q, dtype=float), self.value)[()]

    def sample(self, rng, size):
        return np.full(size, self.value)

    def shifted(self, offset):
        return PointMass(self.value + offset)


class Empirical(LatencyDistribution):
    """Discrete distribution over observed or gridded latency atoms.

    Unweighted atoms are plain samples (equal mass); weighted atoms arise from
    grid-based convolution. Atoms are stored sorted ascending.
    """

    kind = "empirical"

    def __init__(self, samples, weights=None):
        values = np.asarray(samples, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise InvalidSample("empirical distribution needs at least one sample")
        if not np.all(np.isfinite(values)):
            raise InvalidSample("empirical samples must all be finite")
        order = np.argsort(values, kind="stable")
        values = values[order]
        if weights is None:
            w = np.full(values.size, 1.0 / values.size)
            uniform = True
        else:
            w = np.asarray(weights, dtype=float)[order]
            if w.size != values.size or np.any(w < 0) or w.sum() <= 0:
                raise InvalidSample("weights must be non-negative and sum > 0")
            w = w / w.sum()
            uniform = False
        values.setflags(write=False)
        w.setflags(write=False)
        self._values = values
        self._weights = w
        self._uniform = uniform
        self._cumw = np.cumsum(w)
        self._cumw.setflags(write=False)

    @property
    def samples(self) -> np.ndarray:
        return self._values

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def mean(self) -> float:
        return float(np.dot(self._values, self._weights))

    @property
    def std(self) -> float:
        m = self.mean
        return float(math.sqrt(max(np.dot(self._weights, (self._values - m) ** 2), 0.0)))

    def cdf(self, x):
        idx = np.searchsorted(self._values, np.asarray(x, dtype=float), side="right")
        out = np.where(idx > 0, self._cumw[np.maximum(idx - 1, 0)], 0.0)
        return out[()]

    def quantile(self, q):
        q = np.asarray(q, dtype=float)
        if self._uniform:
            return np.quantile(self._values, q)[()]
        # Inverse of the piecewise-linear CDF through the atom grid; adequate
        # at grid resolution, where interpolation conventions differ by < one
        # grid pitch.
        return np.interp(q, self._cumw, self._values)[()]

    def sample(self, rng, size):
        if self._uniform:
            return rng.choice(self._values, size=size, replace=True)
        return rng.choice(self._values, size=size, replace=True, p=self._weights)

    def shifted(self, offset):
        return Empirical(self._values + offset, self._weights)

    def __eq__(self, other):
        return (
            isinstance(other, Empirical)
            and np.array_equal(self._values, other._values)
            and np.array_equal(self._weights, other._weights)
        )

    def __repr__(self):
        return f"Empirical(n={self._values.size}, mean={self.mean:.6g})"


@dataclass(frozen=True)
class CentralInterval:
    """Central probability-mass interval of a latency distribution."""

    lower: float
    upper: float
    level: float

    def __post_init__(self):
        if not 0 < self.level < 1:
            raise InvalidSample("interval level must be in (0, 1)")
        if self.lower > self.upper:
            raise InvalidSample("interval lower bound exceeds upper bound")


def fit_normal(samples) -> Normal:
    """Fit a Normal by sample mean and unbiased (n-1) standard deviation."""
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        raise InsufficientData("need at least 2 samples to fit a normal")
    if not np.all(np.isfinite(x)):
        raise InvalidSample("samples must be finite")
    return Normal(float(x.mean()), float(x.std(ddof=1)))


def _atoms(dist) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(dist, Empirical):
        return dist.samples, dist.weights
    if isinstance(dist, PointMass):
        return np.array([dist.value]), np.array([1.0])
    raise TypeError(f"no atoms for {dist!r}")


def _to_grid(values: np.ndarray, weights: np.ndarray) -> Empirical:
    """Snap weighted atoms onto a GRID_POINTS uniform grid (zero-mass points dropped)."""
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        return Empirical([lo], [1.0])
    grid = np.linspace(lo, hi, GRID_POINTS)
    pitch = (hi - lo) / (GRID_POINTS - 1)
    idx = np.rint((values - lo) / pitch).astype(np.intp)
    mass = np.bincount(idx, weights=weights, minlength=GRID_POINTS)
    keep = mass > 0
    return Empirical(grid[keep], mass[keep])


def _normal_plus_atoms(normal: Normal, values, weights) -> Empirical:
    """Exact mixture CDF of Normal + discrete atoms, discretised onto the grid."""
    lo = float(values.min()) + normal.quantile(_TAIL_EPS)
    hi = float(values.max()) + normal.quantile(1 - _TAIL_EPS)
    grid = np.linspace(lo, hi, GRID_POINTS)
    edges = np.concatenate(([-np.inf], (grid[:-1] + grid[1:]) / 2, [np.inf]))
    # CDF of the sum at each edge: sum_j w_j * Phi((e - v_j - mu) / sigma)
    z = (edges[:, None] - values[None, :] - normal.mean) / normal.stddev
    cdf_at_edges = ndtr(z) @ weights
    mass = np.diff(cdf_at_edges)
    return Empirical(grid, mass)


def convolve(a: LatencyDistribution, b: LatencyDistribution) -> LatencyDistribution:
    """Distribution of the sum of independent draws from ``a`` and ``b``.

    Normal pairs convolve analytically; a point-mass operand shifts the other
    operand; any empirical operand produces an empirical result on a uniform
    GRID_POINTS grid spanning the support of the sum. Commutes exactly.
    """
    if isinstance(a, PointMass):
        return b.shifted(a.value)
    if isinstance(b, PointMass):
        return a.shifted(b.value)
    if isinstance(a, Normal) and isinstance(b, Normal):
        return Normal(a.mean + b.mean, math.hypot(a.stddev, b.stddev))
    if isinstance(a, Normal) or isinstance(b, Normal):
        normal, emp = (a, b) if isinstance(a, Normal) else (b, a)
        if normal.stddev == 0:
            return emp.shifted(normal.mean)
        values, weights = _atoms(emp)
        return _normal_plus_atoms(normal, values, weights)
    va, wa = _atoms(a)
    vb, wb = _atoms(b)
    sums = (va[:, None] + vb[None, :]).ravel()
    mass = (wa[:, None] * wb[None, :]).ravel()
    return _to_grid(sums, mass)


def success_probability(dist: LatencyDistribution, deadline: float) -> float:
    """P(latency <= deadline) under ``dist``."""
    if not math.isfinite(deadline):
        raise InvalidSample("deadline must be finite")
    return float(dist.cdf(deadline))


def central_interval(dist: LatencyDistribution, level: float) -> CentralInterval:
    """The central ``level`` mass interval [Q((1-level)/2), Q((1+level)/2)]."""
    if not 0 < level < 1:
        raise InvalidSample("level must be in (0, 1)")
    lo = float(dist.quantile((1 - level) / 2))
    hi = float(dist.quantile((1 + level) / 2))
    return CentralInterval(lo, hi, level)


def intervals_overlap(a: CentralInterval, b: CentralInterval) -> bool:
    """Closed-interval overlap; touching endpoints count as overlapping."""
    return a.lower <= b.upper and b.lower <= a.upper
