"""
Revival detection on an oscillating observable
"""

import logging

import numpy as np
from scipy.ndimage import maximum_filter1d
from scipy.signal import find_peaks

from .errors import InvalidArgumentError

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 200
PROMINENCE_FRACTION = 0.5


def revival_envelope(values, window: int) -> np.ndarray:
    """Moving-window maximum (2*window+1 samples) of |y - mean(y)|"""
    values = np.asarray(values, dtype=float)
    deviation = np.abs(values - values.mean())
    return maximum_filter1d(deviation, size=2 * window + 1, mode="nearest")


def detect_revivals(values, tau, window: int = DEFAULT_WINDOW) -> list[float]:
    """
    Times at which the oscillation amplitude of `values` peaks.

    Carrier oscillations are flattened by the moving maximum, so each revival
    shows up as one plateau; a plateau reports its middle sample and plateaus
    touching either end of the grid are ignored. Only envelope peaks with a
    prominence of at least half the envelope range count.

    Args:
        values: samples of the observable
        tau: matching time grid
        window: half-width of the moving maximum, in samples; also the minimum peak spacing

    Returns:
        Peak times in increasing order, empty for a featureless series
    """
    values = np.asarray(values, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if window < 1:
        raise InvalidArgumentError(f"window must be >= 1, got {window!r}")
    if values.size < window:
        raise InvalidArgumentError(f"series of {values.size} samples is shorter than the window {window}")
    if tau.shape != values.shape:
        raise InvalidArgumentError("tau and values must have the same length")

    envelope = revival_envelope(values, window)
    spread = float(np.ptp(envelope))
    if spread == 0.0:
        return []
    peaks, _ = find_peaks(envelope, distance=window, prominence=PROMINENCE_FRACTION * spread)
    logger.debug("found %d revival peaks with window %d", peaks.size, window)
    return tau[peaks].tolist()
