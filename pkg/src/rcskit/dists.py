"""Parametric RCS amplitude distributions: evaluation, ML fitting, sampling.

Six base families (normal, lognormal, gamma, Weibull, Rayleigh, exponential)
plus the three-parameter generalized gamma, which contains gamma (power = 1)
and Weibull (shape = power) as special cases.

Parameter conventions follow the measurement-table convention: gamma uses
shape A / scale B, Weibull scale A / shape B, the exponential parameter is
the MEAN (not the rate), and the lognormal mu/sigma describe the natural log
of the variable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy import special

from .errors import (
    DegenerateSample,
    InvalidParams,
    NonConvergence,
    NonPositiveSample,
)


class Family(enum.Enum):
    """Closed set of candidate distribution families."""

    NORMAL = "normal"
    LOGNORMAL = "lognormal"
    GAMMA = "gamma"
    WEIBULL = "weibull"
    RAYLEIGH = "rayleigh"
    EXPONENTIAL = "exponential"
    GENERALIZED_GAMMA = "generalized_gamma"

    @property
    def rank_order(self) -> int:
        """Position in declaration order; used as a deterministic tie-breaker."""
        return list(Family).index(self)


# (name, must_be_positive) per family, in canonical JSON order.
PARAM_SPECS: dict[Family, tuple[tuple[str, bool], ...]] = {
    Family.NORMAL: (("mu", False), ("sigma", True)),
    Family.LOGNORMAL: (("mu", False), ("sigma", True)),
    Family.GAMMA: (("A", True), ("B", True)),
    Family.WEIBULL: (("A", True), ("B", True)),
    Family.RAYLEIGH: (("B", True),),
    Family.EXPONENTIAL: (("lambda", True),),
    Family.GENERALIZED_GAMMA: (("a", True), ("d", True), ("p", True)),
}

#: Families whose support is the positive half line.
POSITIVE_SUPPORT = frozenset(
    {
        Family.LOGNORMAL,
        Family.GAMMA,
        Family.WEIBULL,
        Family.RAYLEIGH,
        Family.EXPONENTIAL,
        Family.GENERALIZED_GAMMA,
    }
)


@dataclass(frozen=True)
class DistParams:
    """A family tag plus its named parameter values, validated on construction."""

    family: Family
    values: Mapping[str, float]

    def __post_init__(self) -> None:
        spec = PARAM_SPECS[self.family]
        expected = tuple(name for name, _ in spec)
        got = tuple(self.values)
        if set(got) != set(expected):
            raise InvalidParams(
                f"{self.family.value} expects parameters {expected}, got {got}"
            )
        for name, positive in spec:
            value = float(self.values[name])
            if not math.isfinite(value):
                raise InvalidParams(f"{self.family.value} parameter {name} must be finite")
            if positive and not value > 0.0:
                raise InvalidParams(
                    f"{self.family.value} parameter {name} must be > 0, got {value}"
                )
        object.__setattr__(self, "values", {k: float(self.values[k]) for k, _ in spec})

    def __getitem__(self, name: str) -> float:
        return self.values[name]

    def as_dict(self) -> dict[str, float]:
        return dict(self.values)


@dataclass(frozen=True)
class SampleSet:
    """A nonempty vector of RCS observations plus capture metadata."""

    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("SampleSet requires a nonempty 1-D vector")
        if not np.all(np.isfinite(arr)):
            raise ValueError("SampleSet values must be finite")
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size


def _as_values(data: SampleSet | np.ndarray) -> np.ndarray:
    if isinstance(data, SampleSet):
        return data.values
    return np.asarray(data, dtype=float)


def pdf(params: DistParams, x: float | np.ndarray) -> float | np.ndarray:
    """Probability density at x; zero outside the support."""
    scalar = np.isscalar(x)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    v = params.values
    out = np.zeros_like(x)
    if params.family is Family.NORMAL:
        mu, sig = v["mu"], v["sigma"]
        z = (x - mu) / sig
        out = np.exp(-0.5 * z * z) / (sig * math.sqrt(2.0 * math.pi))
    else:
        pos = x > 0.0
        xp = x[pos]
        if params.family is Family.LOGNORMAL:
            mu, sig = v["mu"], v["sigma"]
            z = (np.log(xp) - mu) / sig
            out[pos] = np.exp(-0.5 * z * z) / (xp * sig * math.sqrt(2.0 * math.pi))
        elif params.family is Family.GAMMA:
            a, b = v["A"], v["B"]
            logpdf = (a - 1.0) * np.log(xp) - xp / b - special.gammaln(a) - a * math.log(b)
            out[pos] = np.exp(logpdf)
        elif params.family is Family.WEIBULL:
            scale, shape = v["A"], v["B"]
            z = xp / scale
            out[pos] = (shape / scale) * z ** (shape - 1.0) * np.exp(-(z**shape))
        elif params.family is Family.RAYLEIGH:
            b = v["B"]
            out[pos] = (xp / (b * b)) * np.exp(-(xp * xp) / (2.0 * b * b))
        elif params.family is Family.EXPONENTIAL:
            # Support includes the origin: pdf(0) = 1/mean.
            mean = v["lambda"]
            nonneg = x >= 0.0
            out[nonneg] = np.exp(-x[nonneg] / mean) / mean
        elif params.family is Family.GENERALIZED_GAMMA:
            a, d, p = v["a"], v["d"], v["p"]
            logpdf = (
                math.log(p)
                - d * math.log(a)
                - special.gammaln(d / p)
                + (d - 1.0) * np.log(xp)
                - (xp / a) ** p
            )
            out[pos] = np.exp(logpdf)
        else:  # pragma: no cover
            raise InvalidParams(f"unknown family {params.family}")
    return float(out[0]) if scalar else out


def cdf(params: DistParams, x: float | np.ndarray) -> float | np.ndarray:
    """Cumulative distribution at x (0 below the support, limits 0 and 1)."""
    scalar = np.isscalar(x)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    v = params.values
    out = np.zeros_like(x)
    if params.family is Family.NORMAL:
        mu, sig = v["mu"], v["sigma"]
        out = 0.5 * (1.0 + special.erf((x - mu) / (sig * math.sqrt(2.0))))
    else:
        pos = x > 0.0
        xp = x[pos]
        if params.family is Family.LOGNORMAL:
            mu, sig = v["mu"], v["sigma"]
            out[pos] = 0.5 * (1.0 + special.erf((np.log(xp) - mu) / (sig * math.sqrt(2.0))))
        elif params.family is Family.GAMMA:
            out[pos] = special.gammainc(v["A"], xp / v["B"])
        elif params.family is Family.WEIBULL:
            out[pos] = -np.expm1(-((xp / v["A"]) ** v["B"]))
        elif params.family is Family.RAYLEIGH:
            b = v["B"]
            out[pos] = -np.expm1(-(xp * xp) / (2.0 * b * b))
        elif params.family is Family.EXPONENTIAL:
            out[pos] = -np.expm1(-xp / v["lambda"])
        elif params.family is Family.GENERALIZED_GAMMA:
            a, d, p = v["a"], v["d"], v["p"]
            out[pos] = special.gammainc(d / p, (xp / a) ** p)
        else:  # pragma: no cover
            raise InvalidParams(f"unknown family {params.family}")
    return float(out[0]) if scalar else out


def loglik(params: DistParams, data: SampleSet | np.ndarray) -> float:
    """Total log-likelihood of the data under the given parameters."""
    x = _as_values(data)
    dens = pdf(params, x)
    dens = np.atleast_1d(np.asarray(dens))
    if np.any(dens <= 0.0):
        return -math.inf
    return float(np.sum(np.log(dens)))


def _check_fit_data(family: Family, x: np.ndarray) -> None:
    if x.size == 0:
        raise ValueError("cannot fit an empty sample")
    if family in POSITIVE_SUPPORT and np.any(x <= 0.0):
        raise NonPositiveSample(
            f"{family.value} requires strictly positive samples; "
            f"min value is {x.min()!r}"
        )
    if np.ptp(x) == 0.0:
        raise DegenerateSample("sample has zero variance")


def _fit_gamma(x: np.ndarray, tol: float = 1e-12, max_iter: int = 200) -> DistParams:
    # Profile likelihood: solve log(A) - digamma(A) = log(mean) - mean(log x)
    # by Newton iteration from the method-of-moments seed, then B = mean / A.
    mean = float(np.mean(x))
    mean_log = float(np.mean(np.log(x)))
    s = math.log(mean) - mean_log
    if s <= 0.0:
        raise DegenerateSample("gamma fit requires dispersion (log-mean gap > 0)")
    a = (3.0 - s + math.sqrt((s - 3.0) ** 2 + 24.0 * s)) / (12.0 * s)
    for _ in range(max_iter):
        g = math.log(a) - special.digamma(a) - s
        if abs(g) < tol:
            break
        gp = 1.0 / a - special.polygamma(1, a)
        step = g / gp
        a_next = a - step
        if a_next <= 0.0:
            a_next = a / 2.0
        if abs(a_next - a) <= 1e-15 * a:
            a = a_next
            break
        a = a_next
    else:
        raise NonConvergence(f"gamma shape solve exceeded {max_iter} iterations")
    return DistParams(Family.GAMMA, {"A": a, "B": mean / a})


def _weibull_profile(shape: float, x: np.ndarray, log_x: np.ndarray, mean_log: float) -> tuple[float, float]:
    # Root function of the profile likelihood in the shape parameter and its
    # derivative; the function is strictly increasing, so the root is unique.
    xb = x**shape
    s0 = float(np.sum(xb))
    s1 = float(np.sum(xb * log_x))
    s2 = float(np.sum(xb * log_x * log_x))
    f = s1 / s0 - 1.0 / shape - mean_log
    fp = (s2 * s0 - s1 * s1) / (s0 * s0) + 1.0 / (shape * shape)
    return f, fp


def _fit_weibull(
    x: np.ndarray,
    tol: float = 1e-12,
    max_iter: int = 200,
    lo: float = 1e-3,
    hi: float = 1e3,
) -> DistParams:
    # Bisection-safeguarded Newton solve for the shape on [lo, hi]; the scale
    # follows in closed form.  The profile root function is scale invariant,
    # so work on x / max(x) to keep x**shape in range at extreme shapes.
    scale_ref = float(np.max(x))
    x = x / scale_ref
    log_x = np.log(x)
    mean_log = float(np.mean(log_x))
    if _weibull_profile(lo, x, log_x, mean_log)[0] > 0.0 or _weibull_profile(hi, x, log_x, mean_log)[0] < 0.0:
        raise NonConvergence("weibull shape root is not bracketed by [1e-3, 1e3]")
    # Moment seed: Var(log x) = pi^2 / (6 B^2) for Weibull data.
    sd_log = float(np.std(log_x))
    shape = math.pi / (sd_log * math.sqrt(6.0)) if sd_log > 0.0 else 1.0
    shape = min(max(shape, lo), hi)
    a, b = lo, hi
    converged = False
    for _ in range(max_iter):
        f, fp = _weibull_profile(shape, x, log_x, mean_log)
        if abs(f) < tol:
            converged = True
            break
        if f > 0.0:
            b = shape
        else:
            a = shape
        candidate = shape - f / fp
        # Fall back to bisection whenever the Newton step leaves the bracket.
        nxt = candidate if a < candidate < b else 0.5 * (a + b)
        if abs(nxt - shape) <= 1e-15 * shape:
            shape = nxt
            converged = True
            break
        shape = nxt
    if not converged:
        raise NonConvergence(f"weibull shape solve exceeded {max_iter} iterations")
    scale = scale_ref * float(np.mean(x**shape)) ** (1.0 / shape)
    return DistParams(Family.WEIBULL, {"A": scale, "B": shape})


def mle_fit(family: Family, data: SampleSet | np.ndarray) -> DistParams:
    """Maximum-likelihood parameters for one family.

    Normal/lognormal/exponential/Rayleigh use closed forms (normal variance
    is the 1/N MLE form); gamma and Weibull use iterative profile solves.
    """
    x = _as_values(data)
    _check_fit_data(family, x)
    if family is Family.NORMAL:
        return DistParams(
            Family.NORMAL, {"mu": float(np.mean(x)), "sigma": float(np.std(x))}
        )
    if family is Family.LOGNORMAL:
        lx = np.log(x)
        return DistParams(
            Family.LOGNORMAL, {"mu": float(np.mean(lx)), "sigma": float(np.std(lx))}
        )
    if family is Family.EXPONENTIAL:
        return DistParams(Family.EXPONENTIAL, {"lambda": float(np.mean(x))})
    if family is Family.RAYLEIGH:
        return DistParams(
            Family.RAYLEIGH, {"B": math.sqrt(float(np.sum(x * x)) / (2.0 * x.size))}
        )
    if family is Family.GAMMA:
        return _fit_gamma(x)
    if family is Family.WEIBULL:
        return _fit_weibull(x)
    raise InvalidParams(f"ML fitting is not provided for {family.value}")


def sample(params: DistParams, count: int, seed) -> SampleSet:
    """Deterministic draws via standard transforms of a seeded generator."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    v = params.values
    family = params.family
    if family is Family.NORMAL:
        out = rng.normal(v["mu"], v["sigma"], count)
    elif family is Family.LOGNORMAL:
        out = np.exp(rng.normal(v["mu"], v["sigma"], count))
    elif family is Family.GAMMA:
        out = rng.gamma(v["A"], v["B"], count)
    elif family is Family.WEIBULL:
        out = v["A"] * rng.weibull(v["B"], count)
    elif family is Family.RAYLEIGH:
        out = rng.rayleigh(v["B"], count)
    elif family is Family.EXPONENTIAL:
        out = rng.exponential(v["lambda"], count)
    elif family is Family.GENERALIZED_GAMMA:
        # If G ~ Gamma(d/p, 1) then a * G^(1/p) has the generalized-gamma law.
        a, d, p = v["a"], v["d"], v["p"]
        out = a * rng.gamma(d / p, 1.0, count) ** (1.0 / p)
    else:  # pragma: no cover
        raise InvalidParams(f"unknown family {family}")
    return SampleSet(values=out, metadata={"family": family.value, "count": count})
