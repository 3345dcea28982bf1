"""
Photon-number distributions used as initial field preparations
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.special import gammaln, pdtrc

from .errors import InvalidArgumentError, InvalidToleranceError

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-12

DistributionKind = Literal["fock", "coherent", "thermal"]
KINDS: tuple[str, ...] = ("fock", "coherent", "thermal")


def _check_tolerance(epsilon: float):
    if not 0.0 < epsilon < 1.0:
        raise InvalidToleranceError(f"tolerance must lie in (0, 1), got {epsilon!r}")


def _check_mean(nbar: float):
    if not (math.isfinite(nbar) and nbar >= 0.0):
        raise InvalidArgumentError(f"mean photon number must be a finite non-negative number, got {nbar!r}")


def poisson_weights(nbar: float, count: int) -> np.ndarray:
    """
    Poisson weights p_0..p_{count-1} of mean nbar.

    The recurrence is anchored at the mode (evaluated in log space) and run
    forward and backward from there, so large means do not underflow p_0
    into a zero row.
    """
    weights = np.zeros(count)
    if count == 0:
        return weights
    if nbar == 0.0:
        weights[0] = 1.0
        return weights

    anchor = min(int(math.floor(nbar)), count - 1)
    weights[anchor] = math.exp(anchor * math.log(nbar) - nbar - gammaln(anchor + 1))
    for n in range(anchor, count - 1):
        weights[n + 1] = weights[n] * nbar / (n + 1)
    for n in range(anchor, 0, -1):
        weights[n - 1] = weights[n] * n / nbar
    return weights


def geometric_weights(nbar: float, count: int) -> np.ndarray:
    """Bose-Einstein weights nbar^n / (nbar+1)^(n+1) for n < count"""
    weights = np.zeros(count)
    if count == 0:
        return weights
    ratio = nbar / (nbar + 1.0)
    weights[0] = 1.0 / (nbar + 1.0)
    for n in range(count - 1):
        weights[n + 1] = weights[n] * ratio
    return weights


@dataclass(frozen=True, eq=False)
class PhotonDistribution:
    """Truncated photon-number distribution of one cavity mode.

    Attributes:
        kind: "fock", "coherent" or "thermal"
        parameter: N for Fock, the mean photon number otherwise
        weights: read-only array p_0..p_{n_max}
        tail_bound: guaranteed upper bound on the omitted probability
    """
    kind: DistributionKind
    parameter: float
    weights: np.ndarray = field(repr=False)
    tail_bound: float

    @property
    def n_max(self) -> int:
        return len(self.weights) - 1

    @property
    def mass(self) -> float:
        return float(math.fsum(self.weights))

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.weights)), self.weights))

    @property
    def is_pure(self) -> bool:
        return self.kind != "thermal"

    @property
    def label(self) -> str:
        if self.kind == "fock":
            return f"fock:{int(self.parameter)}"
        return f"{self.kind}:{self.parameter:g}"

    def amplitudes(self, size: int | None = None) -> np.ndarray:
        """Real non-negative amplitudes sqrt(p_n) of the pure state, padded to `size` entries.

        Only Fock and coherent (alpha real) preparations are pure states.
        """
        if not self.is_pure:
            raise InvalidArgumentError(f"{self.label} is a mixed state and has no amplitude vector")
        return np.sqrt(self.padded_weights(size))

    def padded_weights(self, size: int | None = None) -> np.ndarray:
        """Weights p_0..p_{size-1}, continuing the law past n_max when size is larger"""
        if size is None or size <= len(self.weights):
            return np.array(self.weights[:size])
        if self.kind == "coherent":
            return poisson_weights(self.parameter, size)
        if self.kind == "thermal":
            return geometric_weights(self.parameter, size)
        padded = np.zeros(size)
        padded[:len(self.weights)] = self.weights
        return padded


def _frozen(weights: np.ndarray) -> np.ndarray:
    weights.setflags(write=False)
    return weights


def fock_dist(N: int) -> PhotonDistribution:
    """Point mass at N photons"""
    if isinstance(N, bool) or int(N) != N or N < 0:
        raise InvalidArgumentError(f"Fock photon number must be a non-negative integer, got {N!r}")
    N = int(N)
    weights = np.zeros(N + 1)
    weights[N] = 1.0
    return PhotonDistribution("fock", float(N), _frozen(weights), 0.0)


def coherent_cutoff(nbar: float, epsilon: float = DEFAULT_EPSILON) -> int:
    """Smallest n_max whose omitted Poisson tail P(n > n_max) is below epsilon"""
    _check_tolerance(epsilon)
    _check_mean(nbar)
    cap = int(math.ceil(nbar + 20.0 * math.sqrt(nbar + 1.0) + 30.0))
    tails = pdtrc(np.arange(cap + 1), nbar)
    below = np.flatnonzero(tails < epsilon)
    if below.size == 0:
        raise InvalidToleranceError(
            f"tolerance {epsilon:g} cannot be met below the cutoff cap {cap} for mean {nbar:g}")
    return int(below[0])


def coherent_dist(nbar: float, epsilon: float = DEFAULT_EPSILON) -> PhotonDistribution:
    """Poisson distribution of a coherent state |alpha>, nbar = |alpha|^2"""
    n_max = coherent_cutoff(nbar, epsilon)
    weights = poisson_weights(nbar, n_max + 1)
    tail = float(pdtrc(n_max, nbar))
    logger.debug("coherent(%g): n_max=%d, tail=%.3e", nbar, n_max, tail)
    return PhotonDistribution("coherent", float(nbar), _frozen(weights), tail)


def thermal_cutoff(nbar: float, epsilon: float = DEFAULT_EPSILON) -> int:
    """Smallest n_max with (nbar/(nbar+1))^(n_max+1) < epsilon"""
    _check_tolerance(epsilon)
    _check_mean(nbar)
    ratio = nbar / (nbar + 1.0)
    if ratio == 0.0:
        return 0
    n_max = max(0, int(math.floor(math.log(epsilon) / math.log(ratio))) - 1)
    # the log estimate can be off by one either way
    while ratio ** (n_max + 1) >= epsilon:
        n_max += 1
    while n_max > 0 and ratio ** n_max < epsilon:
        n_max -= 1
    return n_max


def thermal_dist(nbar: float, epsilon: float = DEFAULT_EPSILON) -> PhotonDistribution:
    """Bose-Einstein distribution of a thermal (chaotic) field"""
    n_max = thermal_cutoff(nbar, epsilon)
    weights = geometric_weights(nbar, n_max + 1)
    tail = (nbar / (nbar + 1.0)) ** (n_max + 1)
    logger.debug("thermal(%g): n_max=%d, tail=%.3e", nbar, n_max, tail)
    return PhotonDistribution("thermal", float(nbar), _frozen(weights), tail)


def parse_distribution(text: str, epsilon: float = DEFAULT_EPSILON) -> PhotonDistribution:
    """Build a distribution from a spec such as "fock:5", "coherent:10.5" or "thermal:10.1"."""
    kind, sep, value = text.strip().partition(":")
    kind = kind.strip().lower()
    if not sep or kind not in KINDS:
        raise InvalidArgumentError(
            f"distribution spec {text!r} must look like fock:N, coherent:nbar or thermal:nbar")
    try:
        number = float(value)
    except ValueError:
        raise InvalidArgumentError(f"distribution spec {text!r} has a non-numeric parameter") from None
    if kind == "fock":
        if not number.is_integer():
            raise InvalidArgumentError(f"Fock photon number must be an integer, got {value!r}")
        return fock_dist(int(number))
    if kind == "coherent":
        return coherent_dist(number, epsilon)
    return thermal_dist(number, epsilon)
