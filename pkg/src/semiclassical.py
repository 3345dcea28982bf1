"""
Partially classical limit: mode 2 replaced by a classical drive of amplitude Omega_L

Only one two-branch block {|1;N>, |2;N-1>} is ever populated, so the dynamics
are strictly periodic. Time is tau' = g |Omega_L| t / delta.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import InternalConsistencyError, InvalidArgumentError, InvalidParameterError

logger = logging.getLogger(__name__)

RADICAND_FLOOR = 1e-15


@dataclass(frozen=True)
class SemiclassicalParams:
    g: float = 1.0
    drive: float = 1.0
    delta: float = 10.0

    def __post_init__(self):
        if not self.g > 0.0:
            raise InvalidParameterError(f"g must be positive, got {self.g!r}")
        if not self.delta > 0.0:
            raise InvalidParameterError(f"delta must be positive, got {self.delta!r}")

    @classmethod
    def from_ratio(cls, r_prime: float, g: float = 1.0, delta: float = 10.0) -> "SemiclassicalParams":
        return cls(g, r_prime * g, delta)

    @property
    def r_prime(self) -> float:
        return abs(self.drive) / self.g

    @property
    def coupling(self) -> float:
        """lambda = g |Omega_L| / delta"""
        return self.g * abs(self.drive) / self.delta

    def scaled_time(self, t):
        return self.coupling * np.asarray(t, dtype=float)


def _check(N: int, r_prime: float, minimum: int):
    if int(N) != N or N < minimum:
        raise InvalidArgumentError(f"mode-1 Fock number must be an integer >= {minimum}, got {N!r}")
    if not r_prime > 0.0:
        raise InvalidArgumentError(f"r' must be positive, got {r_prime!r}")


def _angle(N: int, r_prime: float, tau_prime):
    return (N + r_prime ** 2) / (2.0 * r_prime) * np.asarray(tau_prime, dtype=float)


def _transfer(N: int, r_prime: float) -> float:
    # largest reachable level-2 population, 4 r'^2 N / (N + r'^2)^2
    return 4.0 * r_prime ** 2 * N / (N + r_prime ** 2) ** 2


def _scalar(value):
    return value[()] if np.ndim(value) == 0 else value


def period(N: int, r_prime: float) -> float:
    """Common period 2 pi r' / (N + r'^2) of W' and N'"""
    _check(N, r_prime, 0)
    return 2.0 * math.pi * r_prime / (N + r_prime ** 2)


def inversion_sc(N: int, r_prime: float, tau_prime):
    """
    Atomic inversion with mode 1 in |N> and a classical mode 2.

    W' = 2 a sin^2(theta) - 1 with a = 4 r'^2 N / (N + r'^2)^2, so r'^2 = N gives
    complete inversion.
    """
    _check(N, r_prime, 0)
    theta = _angle(N, r_prime, tau_prime)
    return _scalar(2.0 * _transfer(N, r_prime) * np.sin(theta) ** 2 - 1.0)


def negativity_sc(N: int, r_prime: float, tau_prime):
    """Negativity of the pure atom-mode 1 state, [2 r' sqrt(N) / (N + r'^2)] sqrt(sin^2 - a sin^4)"""
    _check(N, r_prime, 1)
    theta = _angle(N, r_prime, tau_prime)
    sin2 = np.sin(theta) ** 2
    radicand = np.asarray(sin2 - _transfer(N, r_prime) * sin2 ** 2)
    if np.any(radicand < -RADICAND_FLOOR):
        raise InternalConsistencyError(f"negative radicand {radicand.min():.3e} in the negativity")
    radicand = np.where(np.abs(radicand) < RADICAND_FLOOR, 0.0, radicand)
    prefactor = 2.0 * r_prime * math.sqrt(N) / (N + r_prime ** 2)
    return _scalar(prefactor * np.sqrt(radicand))


def linear_entropy_sc(N: int, r_prime: float, tau_prime):
    # pure bipartite state: 1 - Tr(rho_A^2) = 2 p (1 - p) = 2 N'^2
    return _scalar(2.0 * np.asarray(negativity_sc(N, r_prime, tau_prime)) ** 2)
