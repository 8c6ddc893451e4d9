"""Bistatic scene geometry: distances, bistatic angle, near-field boundary."""

from __future__ import annotations

import math
from dataclasses import dataclass

SPEED_OF_LIGHT = 299_792_458.0  # m/s


@dataclass(frozen=True)
class BistaticGeometry:
    """Planar Tx/Rx/target placement.

    Tx sits at (-half_baseline, 0), Rx at (+half_baseline, 0) and the target
    at (0, target_offset), all in meters.  half_baseline == 0 is accepted as
    the ideal monostatic limit.
    """

    half_baseline: float
    target_offset: float

    def __post_init__(self) -> None:
        if not (self.half_baseline >= 0.0 and math.isfinite(self.half_baseline)):
            raise ValueError(f"half_baseline must be >= 0, got {self.half_baseline}")
        if not (self.target_offset > 0.0 and math.isfinite(self.target_offset)):
            raise ValueError(f"target_offset must be > 0, got {self.target_offset}")


@dataclass(frozen=True)
class TargetExtent:
    """Largest physical dimension of a target, in meters."""

    largest_dimension: float

    def __post_init__(self) -> None:
        if not (self.largest_dimension > 0.0 and math.isfinite(self.largest_dimension)):
            raise ValueError(f"largest_dimension must be > 0, got {self.largest_dimension}")


def bistatic_distance(geom: BistaticGeometry) -> float:
    """Common Tx-target / Rx-target distance sqrt(a^2 + y^2)."""
    return math.hypot(geom.half_baseline, geom.target_offset)


def bistatic_angle_deg(geom: BistaticGeometry) -> float:
    """Tx-target-Rx opening angle in degrees, via arccos(1 - 2 (a/d)^2).

    Decreases monotonically with target offset; 0 in the monostatic limit.
    """
    ratio = geom.half_baseline / bistatic_distance(geom)
    return math.degrees(math.acos(1.0 - 2.0 * ratio * ratio))


def near_field_distance(extent: TargetExtent, frequency_hz: float) -> float:
    """Near-field boundary 2 S^2 / wavelength for the given carrier."""
    if not (frequency_hz > 0.0 and math.isfinite(frequency_hz)):
        raise ValueError(f"frequency_hz must be > 0, got {frequency_hz}")
    s = extent.largest_dimension
    return 2.0 * s * s * frequency_hz / SPEED_OF_LIGHT
