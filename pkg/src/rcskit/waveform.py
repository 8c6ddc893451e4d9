"""Constant-amplitude probe generation, CIR extraction, and power accounting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ZcSequence:
    """Zadoff-Chu probe: unit-amplitude samples with ideal periodic autocorrelation."""

    length: int
    root: int
    samples: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.samples) != self.length:
            raise ValueError("sample vector length does not match declared length")


@dataclass(frozen=True)
class CirCapture:
    """Complex channel-impulse-response taps plus capture metadata."""

    taps: np.ndarray
    frequency_hz: float
    scenario_tag: str

    def __post_init__(self) -> None:
        if not (self.frequency_hz > 0.0 and math.isfinite(self.frequency_hz)):
            raise ValueError(f"frequency_hz must be > 0, got {self.frequency_hz}")
        if not np.all(np.isfinite(self.taps)):
            raise ValueError("CIR taps must be finite")


@dataclass(frozen=True)
class PowerBudget:
    """Power accounting P_tar = P_tot - P_back - P_noise, clamped at zero."""

    p_tot: float
    p_back: float
    p_noise: float
    p_tar: float
    clamped: bool


def zc_generate(length: int, root: int) -> ZcSequence:
    """Generate the length-N root-u Zadoff-Chu sequence.

    x[n] = exp(-j pi u n (n + N mod 2) / N); requires gcd(u, N) = 1 for the
    ideal periodic autocorrelation.
    """
    if length < 1 or root < 1:
        raise ValueError("length and root must be positive integers")
    if math.gcd(root, length) != 1:
        raise ValueError(f"root {root} is not coprime with length {length}")
    n = np.arange(length)
    phase = -np.pi * root * n * (n + (length % 2)) / length
    return ZcSequence(length=length, root=root, samples=np.exp(1j * phase))


def cir_extract(
    received: np.ndarray,
    probe: ZcSequence,
    *,
    frequency_hz: float,
    scenario_tag: str = "",
) -> CirCapture:
    """Estimate the periodic CIR by circular cross-correlation with the probe.

    taps[k] = (1/N) sum_n received[n] * conj(probe[(n - k) mod N]); for a
    received signal formed by circular convolution of the probe with channel
    g, the taps reproduce g.
    """
    received = np.asarray(received, dtype=complex)
    if received.shape != (probe.length,):
        raise ValueError(
            f"received length {received.shape} does not match probe length {probe.length}"
        )
    taps = np.fft.ifft(np.fft.fft(received) * np.conj(np.fft.fft(probe.samples)))
    taps /= probe.length
    return CirCapture(taps=taps, frequency_hz=frequency_hz, scenario_tag=scenario_tag)


def total_power(cir: CirCapture | np.ndarray) -> float:
    """Sum of squared tap magnitudes."""
    taps = cir.taps if isinstance(cir, CirCapture) else np.asarray(cir)
    return float(np.sum(np.abs(taps) ** 2))


#: Measurement-floor default used when no noise-only capture is available.
NOISE_FLOOR_DB_DEFAULT = -72.0


def noise_floor_power(floor_db: float = NOISE_FLOOR_DB_DEFAULT) -> float:
    """Linear noise power for a configured dB floor.

    The preferred P_noise estimate is total_power() of a noise-only capture;
    this constant-floor form covers setups where only the floor is known.
    """
    return 10.0 ** (floor_db / 10.0)


def target_power(p_tot: float, p_back: float, p_noise: float) -> PowerBudget:
    """Subtract background and noise power from the total capture power.

    Over-subtraction (a negative remainder) is clamped to zero and flagged
    rather than raised; real captures routinely produce small negatives.
    """
    raw = p_tot - p_back - p_noise
    clamped = raw < 0.0
    return PowerBudget(
        p_tot=p_tot,
        p_back=p_back,
        p_noise=p_noise,
        p_tar=0.0 if clamped else raw,
        clamped=clamped,
    )
