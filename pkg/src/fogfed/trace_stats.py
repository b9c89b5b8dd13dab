"""Statistics toolkit for execution-time traces: normality and goodness-of-fit
testing, MIPS, and resampled confidence intervals for harmonic means.

The K-S test fits family parameters from the tested sample itself, which is
the procedure used for the benchmark traces this package targets. That biases
p-values upward (the Lilliefors effect); see README for the caveat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.special import ndtr, ndtri

from .errors import (
    DegenerateSample,
    DivisionDomain,
    InsufficientData,
    InvalidParameter,
    InvalidSample,
    UnfittableFamily,
)

FAMILIES = ("normal", "student_t", "lognormal", "exponential")

#: Significance threshold for accepting a fitted family.
DEFAULT_SIGNIFICANCE = 0.05


@dataclass(frozen=True)
class TraceSample:
    """One benchmark measurement: an inference attempt on a machine type."""

    app_type: str
    machine_type: str
    attempt: int
    inference_time_ms: float

    def __post_init__(self):
        if not self.inference_time_ms > 0:
            raise InvalidSample("inference time must be > 0")


@dataclass(frozen=True)
class FitResult:
    """Goodness-of-fit verdict for one candidate family."""

    family: str
    statistic: float
    p_value: float
    accepted: bool
    params: tuple = ()


@dataclass(frozen=True)
class ResampledCI:
    """Confidence interval for a harmonic mean from a resampling method."""

    method: str
    lower: float
    upper: float
    level: float

    def __post_init__(self):
        if self.lower > self.upper:
            raise InvalidParameter("CI lower bound exceeds upper bound")


# ---------------------------------------------------------------------------
# Shapiro-Wilk (Royston AS R94 approximation, 3 <= n <= 5000)
# ---------------------------------------------------------------------------

# Royston's polynomial corrections for the two largest order-statistic weights.
_SW_C1 = (-2.706056, 4.434685, -2.071190, -0.147981, 0.221157, 0.0)
_SW_C2 = (-3.582633, 5.682633, -1.752461, -0.293762, 0.042981, 0.0)


def _sw_weights(n: int) -> np.ndarray:
    m = ndtri((np.arange(1, n + 1) - 0.375) / (n + 0.25))
    mm = float(np.dot(m, m))
    a = np.empty(n)
    if n == 3:
        a[:] = (-math.sqrt(0.5), 0.0, math.sqrt(0.5))
        return a
    u = 1.0 / math.sqrt(n)
    c = m / math.sqrt(mm)
    an = float(np.polyval(_SW_C1, u)) + c[-1]
    if n > 5:
        an1 = float(np.polyval(_SW_C2, u)) + c[-2]
        phi = (mm - 2 * m[-1] ** 2 - 2 * m[-2] ** 2) / (1 - 2 * an**2 - 2 * an1**2)
        a[2:-2] = m[2:-2] / math.sqrt(phi)
        a[-1], a[-2] = an, an1
        a[0], a[1] = -an, -an1
    else:
        phi = (mm - 2 * m[-1] ** 2) / (1 - 2 * an**2)
        a[1:-1] = m[1:-1] / math.sqrt(phi)
        a[-1], a[0] = an, -an
    return a


def shapiro_wilk(samples) -> tuple[float, float]:
    """Shapiro-Wilk normality test; returns (W, p).

    Low W (equivalently p below the significance threshold) rejects the null
    hypothesis that the samples are normally distributed.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n < 3:
        raise InsufficientData("Shapiro-Wilk needs at least 3 samples")
    if n > 5000:
        raise InvalidParameter("Shapiro-Wilk approximation is valid up to n=5000")
    if not np.all(np.isfinite(x)):
        raise InvalidSample("samples must be finite")
    ssq = float(np.sum((x - x.mean()) ** 2))
    if ssq == 0:
        raise DegenerateSample("all samples identical")
    a = _sw_weights(n)
    w_stat = min(float(np.dot(a, x)) ** 2 / ssq, 1.0)

    if n == 3:
        p = 6.0 / math.pi * (math.asin(math.sqrt(w_stat)) - math.asin(math.sqrt(0.75)))
        return w_stat, float(min(max(p, 0.0), 1.0))
    if n <= 11:
        g = -2.273 + 0.459 * n
        mu = 0.5440 - 0.39978 * n + 0.025054 * n**2 - 0.0006714 * n**3
        sigma = math.exp(1.3822 - 0.77857 * n + 0.062767 * n**2 - 0.0020322 * n**3)
        arg = g - math.log(max(1.0 - w_stat, 1e-300))
        if arg <= 0:
            return w_stat, 0.0
        z = (-math.log(arg) - mu) / sigma
    else:
        ln_n = math.log(n)
        mu = -1.5861 - 0.31082 * ln_n - 0.083751 * ln_n**2 + 0.0038915 * ln_n**3
        sigma = math.exp(-0.4803 - 0.082676 * ln_n + 0.0030302 * ln_n**2)
        z = (math.log(max(1.0 - w_stat, 1e-300)) - mu) / sigma
    return w_stat, float(1.0 - ndtr(z))


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov goodness of fit
# ---------------------------------------------------------------------------


def kolmogorov_sf(t: float) -> float:
    """Asymptotic Kolmogorov survival function Q(t) = 2*sum (-1)^(j-1) exp(-2 j^2 t^2)."""
    if t < 0.2:
        # True survival is 1 - O(1e-7) here; the series converges too slowly.
        return 1.0
    total = 0.0
    for j in range(1, 101):
        term = (-1) ** (j - 1) * math.exp(-2.0 * j * j * t * t)
        total += term
        if abs(term) < 1e-12:
            break
    return float(min(max(2.0 * total, 0.0), 1.0))


def ks_statistic(samples, cdf) -> float:
    """Largest vertical distance between the sample EDF and ``cdf``."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n < 1:
        raise InsufficientData("K-S needs at least 1 sample")
    f = np.asarray(cdf(x), dtype=float)
    steps = np.arange(1, n + 1) / n
    return float(max(np.max(steps - f), np.max(f - (steps - 1.0 / n))))


def _fit_family(x: np.ndarray, family: str):
    """Returns (cdf callable, parameter tuple) for the family fitted to x."""
    n = x.size
    if family == "normal":
        if n < 2:
            raise UnfittableFamily("normal fit needs >= 2 samples")
        mu, sd = float(x.mean()), float(x.std(ddof=1))
        if sd == 0:
            raise UnfittableFamily("degenerate sample")
        return lambda v: ndtr((v - mu) / sd), (mu, sd)
    if family == "lognormal":
        if n < 2:
            raise UnfittableFamily("lognormal fit needs >= 2 samples")
        if np.any(x <= 0):
            raise UnfittableFamily("lognormal requires positive samples")
        lx = np.log(x)
        mu, sd = float(lx.mean()), float(lx.std(ddof=1))
        if sd == 0:
            raise UnfittableFamily("degenerate sample")
        return lambda v: ndtr((np.log(np.maximum(v, 1e-300)) - mu) / sd), (mu, sd)
    if family == "exponential":
        loc = float(x.min())
        scale = float(x.mean() - loc)
        if scale <= 0:
            raise UnfittableFamily("degenerate sample")
        return lambda v: 1.0 - np.exp(-np.maximum(v - loc, 0.0) / scale), (loc, scale)
    if family == "student_t":
        if n < 3:
            raise UnfittableFamily("student-t fit needs >= 3 samples")
        mu, sd = float(x.mean()), float(x.std(ddof=1))
        if sd == 0:
            raise UnfittableFamily("degenerate sample")
        z = (x - mu) / sd
        best_df, best_ll = 3, -np.inf
        for df in range(3, 101):
            scale = math.sqrt((df - 2) / df)
            ll = float(np.sum(stats.t.logpdf(z, df, scale=scale)))
            if ll > best_ll:
                best_df, best_ll = df, ll
        scale = sd * math.sqrt((best_df - 2) / best_df)
        return (
            lambda v: stats.t.cdf(v, best_df, loc=mu, scale=scale),
            (best_df, mu, scale),
        )
    raise InvalidParameter(f"unknown family {family!r}; pick one of {FAMILIES}")


def ks_test(samples, family: str, significance: float = DEFAULT_SIGNIFICANCE) -> FitResult:
    """Fit ``family`` to the samples, then K-S test the fit.

    The returned p-value uses the asymptotic Kolmogorov distribution on
    sqrt(n) * D and the fit is accepted when p exceeds ``significance``.
    """
    x = np.asarray(samples, dtype=float)
    if x.size < 1:
        raise InsufficientData("K-S needs at least 1 sample")
    if not np.all(np.isfinite(x)):
        raise InvalidSample("samples must be finite")
    cdf, params = _fit_family(x, family)
    d = ks_statistic(x, cdf)
    p = kolmogorov_sf(math.sqrt(x.size) * d)
    return FitResult(family, d, p, accepted=p > significance, params=params)


def best_fit(samples, significance: float = DEFAULT_SIGNIFICANCE) -> list[FitResult]:
    """K-S results for every candidate family, best (highest p) first.

    Unfittable families are skipped; an empty acceptance set means no
    candidate distribution fits the trace.
    """
    results = []
    for family in FAMILIES:
        try:
            results.append(ks_test(samples, family, significance))
        except UnfittableFamily:
            continue
    results.sort(key=lambda r: -r.p_value)
    return results


# ---------------------------------------------------------------------------
# Rate metrics and resampled confidence intervals
# ---------------------------------------------------------------------------


def compute_mips(instruction_count: float, exec_time: float) -> float:
    """Million instructions per second: n / (t * 1e6)."""
    if exec_time <= 0:
        raise DivisionDomain("execution time must be > 0")
    if instruction_count <= 0:
        raise InvalidSample("instruction count must be > 0")
    return instruction_count / (exec_time * 1e6)


def harmonic_mean(samples) -> float:
    """n / sum(1/x); the right central tendency for rate-based metrics."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0 or np.any(x <= 0) or not np.all(np.isfinite(x)):
        raise InvalidSample("harmonic mean requires positive finite samples")
    return float(x.size / np.sum(1.0 / x))


def jackknife_pseudo_values(samples) -> np.ndarray:
    """Leave-one-out harmonic means y_i = (p-1) / sum_{j != i} 1/x_j."""
    x = np.asarray(samples, dtype=float)
    inv = 1.0 / x
    return (x.size - 1) / (inv.sum() - inv)


def jackknife_ci(samples, level: float = 0.95) -> ResampledCI:
    """Jackknife CI for the harmonic mean.

    The pseudo-value mean centres the interval; the jackknife standard error
    sqrt((p-1)/p * sum (y_i - ybar)^2) sets its width via Student's t.
    """
    x = np.asarray(samples, dtype=float)
    if x.size < 3:
        raise InsufficientData("jackknife needs at least 3 samples")
    if np.any(x <= 0) or not np.all(np.isfinite(x)):
        raise InvalidSample("samples must be positive and finite")
    if not 0 < level < 1:
        raise InvalidParameter("level must be in (0, 1)")
    y = jackknife_pseudo_values(x)
    ybar = float(y.mean())
    se = math.sqrt((x.size - 1) / x.size * float(np.sum((y - ybar) ** 2)))
    half = float(stats.t.ppf((1 + level) / 2, x.size - 1)) * se
    return ResampledCI("jackknife", ybar - half, ybar + half, level)


def bootstrap_ci(samples, k: int = 100, alpha: float = 0.05, seed=None) -> ResampledCI:
    """Percentile bootstrap CI for the harmonic mean.

    Draws ``k`` resamples with replacement, sorts their harmonic means and
    picks the ceil(alpha/2 * k)-th and ceil((1-alpha/2) * k)-th values
    (1-indexed) as the bounds. Deterministic for a given ``seed``.
    """
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        raise InsufficientData("bootstrap needs at least 2 samples")
    if np.any(x <= 0) or not np.all(np.isfinite(x)):
        raise InvalidSample("samples must be positive and finite")
    if k < 10:
        raise InvalidParameter("resample count k must be >= 10")
    if not 0 < alpha < 1:
        raise InvalidParameter("alpha must be in (0, 1)")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, x.size, size=(k, x.size))
    hms = x.size / (1.0 / x[idx]).sum(axis=1)
    hms.sort()
    lo_rank = math.ceil(alpha / 2 * k)
    hi_rank = math.ceil((1 - alpha / 2) * k)
    return ResampledCI("bootstrap", float(hms[lo_rank - 1]), float(hms[hi_rank - 1]), 1 - alpha)
