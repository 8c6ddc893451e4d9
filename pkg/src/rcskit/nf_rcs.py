"""Near-field bistatic RCS models inside a double-path-loss model.

Three nested cross-section models share an angular factor cos(theta_b)^m:

    order 1:  a1 d^2
    order 2:  a1 d^2 + a2 lambda d^3
    order 3:  a1 d^2 + a2 lambda d^3 + a3 lambda^2 d^4

and enter the dB path-loss model  PL = alpha + 20 n log10(d) - 10 log10(sigma).

Fitting minimizes squared dB residuals.  The intercept and path-loss
exponent are profiled out linearly inside the objective; the remaining
coordinates (m, log10 a1, a2, a3) are searched by bounded multi-start
Nelder-Mead with the lower-order optimum always included as a start, which
makes the achieved loss non-increasing in model order.

For the order-1 model only the combinations (alpha - 10 log10 a1) and
(n - 1) are identifiable, so the fit solves the reparameterized linear
problem exactly and reports a1 = 1 with a degeneracy flag.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegenerateGeometry, InsufficientData, NonConvergence, NonPositiveRcs
from .geometry import SPEED_OF_LIGHT, BistaticGeometry, bistatic_angle_deg, bistatic_distance

ALPHA_BOUNDS = (0.0, 120.0)
N_BOUNDS = (0.5, 4.0)
M_BOUNDS = (-20.0, 5.0)
LOG10_A1_BOUNDS = (-3.0, 3.0)  # a1 in [1e-3, 1e3]
A23_BOUNDS = (-10.0, 10.0)
FTOL = 1e-9
MAX_EVAL = 5000
N_STARTS = 16


class ModelOrder(enum.Enum):
    SIGMA1 = "sigma1"
    SIGMA2 = "sigma2"
    SIGMA3 = "sigma3"

    @property
    def n_coeffs(self) -> int:
        return {"sigma1": 1, "sigma2": 2, "sigma3": 3}[self.value]


@dataclass(frozen=True)
class NfRcsModel:
    """Cross-section model coefficients; a2/a3 are None below their order."""

    order: ModelOrder
    a1: float
    m: float
    a2: float | None = None
    a3: float | None = None

    def __post_init__(self) -> None:
        k = self.order.n_coeffs
        if (self.a2 is None) != (k < 2):
            raise ValueError(f"a2 must be {'absent' if k < 2 else 'set'} for {self.order.value}")
        if (self.a3 is None) != (k < 3):
            raise ValueError(f"a3 must be {'absent' if k < 3 else 'set'} for {self.order.value}")


@dataclass(frozen=True)
class PlObservation:
    """One path-loss measurement: target offset (m), carrier (Hz), PL (dB)."""

    y_m: float
    frequency_hz: float
    pl_db: float

    def __post_init__(self) -> None:
        if not (self.y_m > 0.0 and math.isfinite(self.y_m)):
            raise ValueError(f"y_m must be > 0, got {self.y_m}")
        if not (self.frequency_hz > 0.0 and math.isfinite(self.frequency_hz)):
            raise ValueError(f"frequency_hz must be > 0, got {self.frequency_hz}")
        if not math.isfinite(self.pl_db):
            raise ValueError(f"pl_db must be finite, got {self.pl_db}")


@dataclass(frozen=True)
class PathLossFit:
    """Fitted path-loss record for one frequency and one model order."""

    alpha: float
    n: float
    model: NfRcsModel
    x_sigma: float
    mfe_percent: float
    frequency_hz: float
    geom_a: float
    sse: float
    a1_degenerate: bool = False


def sigma_model_eval(model: NfRcsModel, d: float, wavelength: float, theta_b_deg: float) -> float:
    """Cross section (m^2) of the model at distance d, wavelength, and angle."""
    if not d > 0.0:
        raise ValueError(f"d must be > 0, got {d}")
    if not -90.0 < theta_b_deg < 90.0:
        raise ValueError(f"bistatic angle must be < 90 deg, got {theta_b_deg}")
    cos_tb = math.cos(math.radians(theta_b_deg))
    poly = model.a1 * d * d
    if model.order.n_coeffs >= 2:
        poly += model.a2 * wavelength * d**3
    if model.order.n_coeffs >= 3:
        poly += model.a3 * wavelength**2 * d**4
    if not poly > 0.0:
        raise NonPositiveRcs(
            f"{model.order.value} polynomial is nonpositive ({poly}) at d={d}"
        )
    return poly * cos_tb**model.m


def predict_pl(
    alpha: float,
    n: float,
    model: NfRcsModel,
    d: float,
    wavelength: float,
    theta_b_deg: float,
) -> float:
    """Deterministic path loss alpha + 20 n log10(d) - 10 log10(sigma), in dB."""
    sigma = sigma_model_eval(model, d, wavelength, theta_b_deg)
    return alpha + 20.0 * n * math.log10(d) - 10.0 * math.log10(sigma)


def mfe_percent(measured: list[float] | np.ndarray, modeled: list[float] | np.ndarray) -> float:
    """Mean absolute relative fitting error between dB curves, in percent."""
    meas = np.asarray(measured, dtype=float)
    mod = np.asarray(modeled, dtype=float)
    if meas.shape != mod.shape or meas.ndim != 1 or meas.size == 0:
        raise ValueError("measured and modeled must be equal-length nonempty vectors")
    if np.any(meas == 0.0):
        raise ZeroDivisionError("measured path loss contains a zero value")
    return float(np.mean(np.abs((meas - mod) / meas)) * 100.0)


def shadowing_std(residuals: list[float] | np.ndarray) -> float:
    """Population standard deviation of dB residuals about their mean."""
    r = np.asarray(residuals, dtype=float)
    if r.size < 2:
        raise InsufficientData("shadowing_std requires at least 2 residuals")
    return float(np.std(r))


@dataclass(frozen=True)
class _FitData:
    """Per-dataset precomputation shared by all fit stages."""

    pl: np.ndarray
    l10d: np.ndarray
    l10c: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    b3: np.ndarray
    d: np.ndarray
    theta_deg: np.ndarray
    wavelength: float
    frequency_hz: float
    geom_a: float


def _prepare(observations: list[PlObservation], geom_a: float) -> _FitData:
    if len(observations) < 8:
        raise InsufficientData(f"need >= 8 observations, got {len(observations)}")
    freqs = {obs.frequency_hz for obs in observations}
    f0 = observations[0].frequency_hz
    if any(abs(f - f0) > 1e-9 * f0 for f in freqs):
        raise ValueError(f"fit_pl expects a single frequency per call, got {sorted(freqs)}")
    if not geom_a >= 0.0:
        raise ValueError(f"geom_a must be >= 0, got {geom_a}")
    y = np.array([obs.y_m for obs in observations], dtype=float)
    pl = np.array([obs.pl_db for obs in observations], dtype=float)
    geoms = [BistaticGeometry(geom_a, float(yj)) for yj in y]
    d = np.array([bistatic_distance(g) for g in geoms])
    theta = np.array([bistatic_angle_deg(g) for g in geoms])
    if np.any(theta >= 90.0):
        raise ValueError("bistatic angle >= 90 deg (target offset below half baseline)")
    d_min, d_max = float(d.min()), float(d.max())
    if d_max == d_min:
        raise DegenerateGeometry("all observation distances are equal")
    if d_max < 2.0 * d_min:
        raise DegenerateGeometry(
            f"distance span {d_max / d_min:.3f}:1 is below the required 2:1"
        )
    wavelength = SPEED_OF_LIGHT / f0
    cos_tb = np.cos(np.radians(theta))
    return _FitData(
        pl=pl,
        l10d=np.log10(d),
        l10c=np.log10(cos_tb),
        b1=d * d,
        b2=wavelength * d**3,
        b3=wavelength**2 * d**4,
        d=d,
        theta_deg=theta,
        wavelength=wavelength,
        frequency_hz=f0,
        geom_a=geom_a,
    )


def _kernel_args(data: _FitData, order: int) -> tuple:
    return (
        order,
        data.pl,
        data.l10d,
        data.l10c,
        data.b1,
        data.b2,
        data.b3,
        ALPHA_BOUNDS[0],
        ALPHA_BOUNDS[1],
        N_BOUNDS[0],
        N_BOUNDS[1],
    )


def _search_bounds(order: int) -> tuple[list[float], list[float]]:
    lower = [M_BOUNDS[0], LOG10_A1_BOUNDS[0]]
    upper = [M_BOUNDS[1], LOG10_A1_BOUNDS[1]]
    for _ in range(order - 1):
        lower.append(A23_BOUNDS[0])
        upper.append(A23_BOUNDS[1])
    return lower, upper


def _order1_linear(data: _FitData) -> tuple[list[float], bool]:
    # The order-1 model is linear in (alpha - 10 log10 a1, 20(n-1), -10m);
    # solve it exactly.  Returns the search point (m, log10 a1 = 0) and
    # whether the solution lies inside the parameter box.
    design = np.column_stack([np.ones_like(data.l10d), data.l10d, data.l10c])
    coef, *_ = np.linalg.lstsq(design, data.pl, rcond=None)
    alpha_p, n_p, m = float(coef[0]), float(coef[1]) / 20.0, -float(coef[2]) / 10.0
    in_box = (
        ALPHA_BOUNDS[0] <= alpha_p <= ALPHA_BOUNDS[1]
        and N_BOUNDS[0] <= n_p + 1.0 <= N_BOUNDS[1]
        and M_BOUNDS[0] <= m <= M_BOUNDS[1]
    )
    return [min(max(m, M_BOUNDS[0]), M_BOUNDS[1]), 0.0], in_box


def _multistarts(order: int, nested: list[float], m_seed: float) -> list[list[float]]:
    # Deterministic start list: the nested lower-order optimum first, then a
    # moment-seeded grid over the coefficient coordinates.
    starts = [list(nested)]
    if order == 2:
        for u in (-2.0, -1.0, 0.0, 1.0, 2.0):
            for a2 in (-1.0, 0.0, 1.0):
                starts.append([m_seed, u, a2])
    elif order == 3:
        for u in (-2.0, 0.0, 2.0):
            for a2 in (-1.0, 1.0):
                for a3 in (-0.05, 0.05):
                    starts.append([m_seed, u, a2, a3])
        starts.append([m_seed, -1.0, 0.0, 0.0])
        starts.append([m_seed, 1.0, 0.0, 0.0])
        starts.append([m_seed, 0.0, 0.0, 0.01])
    else:  # order == 1 fallback when the linear solution leaves the box
        for m in (-16.0, -8.0, -4.0, -1.0, 1.0):
            starts.append([m, 0.0])
    return starts[:N_STARTS]


def _run_order(data: _FitData, order: int, nested_x: list[float] | None) -> tuple[list[float], float]:
    kernel = _kernels.active
    args = _kernel_args(data, order)
    lower, upper = _search_bounds(order)

    if order == 1:
        linear, in_box = _order1_linear(data)
        if in_box:
            sse = kernel.pl_eval(linear, *args)[0]
            return linear, float(sse)
        starts = _multistarts(1, linear, linear[0])
    else:
        assert nested_x is not None
        nested = list(nested_x) + [0.0]
        m_seed = nested_x[0]
        starts = _multistarts(order, nested, m_seed)

    best_x: list[float] | None = None
    best_f = math.inf
    for x0 in starts:
        x, f, _, _ = kernel.nm_minimize(
            np.asarray(x0, dtype=float), np.asarray(lower), np.asarray(upper),
            *args, FTOL, MAX_EVAL,
        )
        if f < best_f:
            best_x, best_f = list(x), float(f)
    if best_x is None or not math.isfinite(best_f):
        raise NonConvergence(f"all {len(starts)} starts failed for order {order}")
    return best_x, best_f


def _build_fit(data: _FitData, order: int, x: list[float], degenerate: bool) -> PathLossFit:
    kernel = _kernels.active
    sse, alpha, n = kernel.pl_eval(x, *_kernel_args(data, order))
    model_order = (ModelOrder.SIGMA1, ModelOrder.SIGMA2, ModelOrder.SIGMA3)[order - 1]
    model = NfRcsModel(
        order=model_order,
        a1=10.0 ** x[1],
        m=x[0],
        a2=x[2] if order >= 2 else None,
        a3=x[3] if order >= 3 else None,
    )
    modeled = np.array(
        [
            predict_pl(alpha, n, model, float(dj), data.wavelength, float(tj))
            for dj, tj in zip(data.d, data.theta_deg)
        ]
    )
    residuals = data.pl - modeled
    return PathLossFit(
        alpha=alpha,
        n=n,
        model=model,
        x_sigma=shadowing_std(residuals),
        mfe_percent=mfe_percent(data.pl, modeled),
        frequency_hz=data.frequency_hz,
        geom_a=data.geom_a,
        sse=float(sse),
        a1_degenerate=degenerate,
    )


def fit_pl_all(
    observations: list[PlObservation],
    geom_a: float,
    up_to: ModelOrder = ModelOrder.SIGMA3,
) -> list[PathLossFit]:
    """Fit the nested model chain (orders 1..k) on one single-frequency dataset.

    Each order's start list contains the previous order's optimum, so the
    achieved squared-dB loss never increases with order.  Because the loss
    is the squared residual while the reported fitting error is a weighted
    absolute one, a lower-loss fit can still report a marginally worse
    error; in that case the nested embedding of the lower-order solution is
    adopted instead, keeping the reported error non-increasing as well.
    """
    data = _prepare(observations, geom_a)
    fits: list[PathLossFit] = []
    x_prev: list[float] | None = None
    for order in range(1, up_to.n_coeffs + 1):
        x, _ = _run_order(data, order, x_prev)
        fit = _build_fit(data, order, x, degenerate=(order == 1))
        if fits and fit.mfe_percent > fits[-1].mfe_percent:
            x = list(x_prev) + [0.0]
            fit = _build_fit(data, order, x, degenerate=fits[-1].a1_degenerate)
        fits.append(fit)
        x_prev = x
    return fits


def fit_pl(
    observations: list[PlObservation],
    geom_a: float,
    order: ModelOrder,
) -> PathLossFit:
    """Fit one model order (lower orders are fitted internally as warm starts)."""
    return fit_pl_all(observations, geom_a, up_to=order)[-1]
