"""Bistatic RCS characterization toolkit.

Synthetic channel sounding with calibrated radar-equation inversion,
maximum-likelihood distribution fitting with KS/MSE ranking, and near-field
deterministic RCS models fitted inside a double-path-loss model.
"""

__version__ = "0.1.0"

from . import geometry, link_budget, waveform, dists, gof, nf_rcs, montecarlo  # noqa: F401,E402
from ._kernels import get_backend  # noqa: F401
