"""Radar-equation forward model, calibration factor, and RCS inversion.

Powers are carried in watts throughout; dB conversions happen only at I/O
boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CalibrationMismatch

_FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class LinkParams:
    """Transmit power (W), antenna gains (linear), wavelength (m), loss (linear)."""

    tx_power: float
    tx_gain: float
    rx_gain: float
    wavelength: float
    system_loss: float

    def __post_init__(self) -> None:
        for name in ("tx_power", "tx_gain", "rx_gain", "wavelength", "system_loss"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise ValueError(f"{name} must be > 0, got {value}")


@dataclass(frozen=True)
class CalibrationFactor:
    """System factor K mapping RCS (m^2) to received target power (W).

    Defined per (wavelength, distance) pair; reuse at a different pair is
    refused beyond a relative tolerance of 1e-6.
    """

    k_value: float
    wavelength: float
    distance: float

    MATCH_RTOL = 1e-6

    def __post_init__(self) -> None:
        for name in ("k_value", "wavelength", "distance"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise ValueError(f"{name} must be > 0, got {value}")

    def require_match(self, wavelength: float, distance: float) -> None:
        """Raise CalibrationMismatch unless (wavelength, distance) matches."""
        if not math.isclose(wavelength, self.wavelength, rel_tol=self.MATCH_RTOL):
            raise CalibrationMismatch(
                f"calibration wavelength {self.wavelength} != requested {wavelength}"
            )
        if not math.isclose(distance, self.distance, rel_tol=self.MATCH_RTOL):
            raise CalibrationMismatch(
                f"calibration distance {self.distance} != requested {distance}"
            )


def target_power_forward(link: LinkParams, distance: float, rcs_m2: float) -> float:
    """Received target power Pt*GTx*GRx*sigma*lambda^2*L / ((4 pi)^3 d^4)."""
    if not (distance > 0.0):
        raise ValueError(f"distance must be > 0, got {distance}")
    if rcs_m2 < 0.0:
        raise ValueError(f"rcs_m2 must be >= 0, got {rcs_m2}")
    lam2 = link.wavelength * link.wavelength
    d4 = distance**4
    return (
        link.tx_power * link.tx_gain * link.rx_gain * rcs_m2 * lam2 * link.system_loss
        / (_FOUR_PI**3 * d4)
    )


def free_space_rx_power(link: LinkParams, distance: float) -> float:
    """One-way Friis received power at the given distance."""
    if not (distance > 0.0):
        raise ValueError(f"distance must be > 0, got {distance}")
    lam2 = link.wavelength * link.wavelength
    return (
        link.tx_power * link.tx_gain * link.rx_gain * lam2 * link.system_loss
        / (_FOUR_PI**2 * distance**2)
    )


def calibrate(p_rx_measured: float, distance: float, wavelength: float) -> CalibrationFactor:
    """Form the system factor K = P_rx / (4 pi d^2) from a free-space reference."""
    if not (p_rx_measured > 0.0):
        raise ValueError(f"p_rx_measured must be > 0, got {p_rx_measured}")
    if not (distance > 0.0):
        raise ValueError(f"distance must be > 0, got {distance}")
    if not (wavelength > 0.0):
        raise ValueError(f"wavelength must be > 0, got {wavelength}")
    k = p_rx_measured / (_FOUR_PI * distance * distance)
    return CalibrationFactor(k_value=k, wavelength=wavelength, distance=distance)


def invert_rcs(cal: CalibrationFactor, p_tar: float) -> float:
    """Recover RCS (m^2) from target power via sigma = P_tar / K."""
    if p_tar < 0.0:
        raise ValueError(f"p_tar must be >= 0, got {p_tar}")
    return p_tar / cal.k_value
