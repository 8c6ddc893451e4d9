"""Empirical CDF, KS and CDF-MSE statistics, and best-fit ranking."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import dists
from .dists import DistParams, Family, SampleSet
from .errors import RcsKitError

log = logging.getLogger(__name__)

#: Families fitted by default (the generalized gamma has no fitter).
DEFAULT_FAMILIES: tuple[Family, ...] = (
    Family.NORMAL,
    Family.LOGNORMAL,
    Family.GAMMA,
    Family.WEIBULL,
    Family.RAYLEIGH,
    Family.EXPONENTIAL,
)


@dataclass(frozen=True)
class EmpiricalCdf:
    """Right-continuous step CDF of a sample: F(x) = #{values <= x} / n."""

    sorted_values: np.ndarray
    n: int

    @classmethod
    def from_sample(cls, data: SampleSet | np.ndarray) -> "EmpiricalCdf":
        values = data.values if isinstance(data, SampleSet) else np.asarray(data, float)
        return cls(sorted_values=np.sort(values), n=values.size)

    def __call__(self, x: float | np.ndarray) -> float | np.ndarray:
        counts = np.searchsorted(self.sorted_values, x, side="right")
        out = counts / self.n
        return float(out) if np.isscalar(x) else out


@dataclass(frozen=True)
class GofReport:
    """One fitted candidate with its goodness-of-fit scores."""

    family: Family
    params: DistParams
    ks_stat: float
    mse: float


def ks_statistic(data: SampleSet | np.ndarray, fitted: DistParams) -> float:
    """Two-sided sup distance between the empirical step CDF and the fit.

    Both edges of each step are checked: at the i-th sorted sample the
    empirical CDF jumps from (i-1)/n to i/n.
    """
    values = data.values if isinstance(data, SampleSet) else np.asarray(data, float)
    if values.size == 0:
        raise ValueError("ks_statistic requires a nonempty sample")
    x = np.sort(values)
    n = x.size
    f_fit = np.asarray(dists.cdf(fitted, x))
    d_plus = float(np.max(np.arange(1, n + 1) / n - f_fit))
    d_minus = float(np.max(f_fit - np.arange(0, n) / n))
    return max(d_plus, d_minus, 0.0)


def mse_statistic(data: SampleSet | np.ndarray, fitted: DistParams) -> float:
    """Mean squared CDF deviation at the sample points, with F(x_(i)) = i/n."""
    values = data.values if isinstance(data, SampleSet) else np.asarray(data, float)
    if values.size == 0:
        raise ValueError("mse_statistic requires a nonempty sample")
    x = np.sort(values)
    n = x.size
    f_fit = np.asarray(dists.cdf(fitted, x))
    steps = np.arange(1, n + 1) / n
    return float(np.mean((steps - f_fit) ** 2))


def _thread_cap() -> int:
    raw = os.environ.get("RCSKIT_THREADS", "")
    if raw:
        cap = int(raw)
        if cap < 1:
            raise ValueError(f"RCSKIT_THREADS must be >= 1, got {raw}")
        return cap
    return os.cpu_count() or 1


def _score_family(family: Family, data: SampleSet | np.ndarray) -> GofReport:
    params = dists.mle_fit(family, data)
    return GofReport(
        family=family,
        params=params,
        ks_stat=ks_statistic(data, params),
        mse=mse_statistic(data, params),
    )


def rank_fits(
    data: SampleSet | np.ndarray,
    families: tuple[Family, ...] | list[Family] = DEFAULT_FAMILIES,
) -> list[GofReport]:
    """Fit and score each candidate family, best (lowest KS) first.

    Ties break on MSE, then on family declaration order.  Families whose fit
    fails (e.g. a positive-support family given a zero) are dropped with a
    logged diagnostic instead of failing the whole ranking.
    """
    values = data.values if isinstance(data, SampleSet) else np.asarray(data, float)
    if values.size < 2:
        raise ValueError("rank_fits requires at least 2 samples")
    if not families:
        raise ValueError("rank_fits requires at least one candidate family")

    def attempt(family: Family) -> GofReport | None:
        try:
            return _score_family(family, data)
        except RcsKitError as exc:
            log.warning("skipping %s: %s", family.value, exc)
            return None

    workers = min(_thread_cap(), len(families))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(attempt, families))
    else:
        results = [attempt(family) for family in families]
    reports = [r for r in results if r is not None]
    reports.sort(key=lambda r: (r.ks_stat, r.mse, r.family.rank_order))
    return reports
