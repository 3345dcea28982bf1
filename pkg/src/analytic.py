"""
Closed-form dynamics of the Raman coupled model with two quantized modes

Time is the scaled time tau = g1*t throughout, so every frequency returned
here is expressed in units of g1. Functions taking `tau` accept a scalar or
a numpy array and return the same shape.
"""

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateInputError, DispersiveLimitWarning, InternalConsistencyError,
                     InvalidArgumentError, InvalidParameterError, InvalidStateError)
from .states import DEFAULT_EPSILON, PhotonDistribution, coherent_dist

logger = logging.getLogger(__name__)

DEFAULT_DELTA_OVER_G1 = 10.0
DISPERSIVE_LIMIT = 0.2
NORMALIZATION_TOLERANCE = 1e-10
# sin() evaluations kept in memory at once when summing over photon numbers
CHUNK_ELEMENTS = 2_000_000


@dataclass(frozen=True)
class ModelParams:
    """Couplings, detuning and mode frequencies of the effective Hamiltonian.

    All values share one frequency unit; g1 sets the time unit (tau = g1*t).

    Args:
        g1, g2: couplings of the 1-3 and 2-3 transitions
        delta: detuning of the upper level
        omega1, omega2: mode frequencies (0 in the interaction picture)
        stark_shifts: keep the intensity-dependent shift terms
    """
    g1: float = 1.0
    g2: float = 1.0
    delta: float = DEFAULT_DELTA_OVER_G1
    omega1: float = 0.0
    omega2: float = 0.0
    stark_shifts: bool = True

    def __post_init__(self):
        for name in ("g1", "g2", "delta"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise InvalidParameterError(f"{name} must be positive and finite, got {value!r}")
        if self.g1 / self.delta > DISPERSIVE_LIMIT or self.g2 / self.delta > DISPERSIVE_LIMIT:
            message = (f"g/delta = {max(self.g1, self.g2) / self.delta:.3g} exceeds {DISPERSIVE_LIMIT}; "
                       "the effective Hamiltonian needs g/delta << 1")
            logger.warning(message)
            warnings.warn(message, DispersiveLimitWarning, stacklevel=3)

    @classmethod
    def from_ratio(cls, r: float, delta_over_g1: float = DEFAULT_DELTA_OVER_G1,
                   omega1: float = 0.0, omega2: float = 0.0, stark_shifts: bool = True) -> "ModelParams":
        """Parameters in units of g1 (g1 = 1, g2 = r)"""
        return cls(1.0, r, delta_over_g1, omega1, omega2, stark_shifts)

    @property
    def r(self) -> float:
        return self.g2 / self.g1

    @property
    def delta_over_g1(self) -> float:
        return self.delta / self.g1

    # Hamiltonian rates divided by g1
    @property
    def shift1(self) -> float:
        return self.g1 ** 2 / (self.delta * self.g1)

    @property
    def shift2(self) -> float:
        return self.g2 ** 2 / (self.delta * self.g1)

    @property
    def exchange(self) -> float:
        return self.g1 * self.g2 / (self.delta * self.g1)

    @property
    def phase_rates(self) -> tuple[float, float]:
        """Per-photon rates of the free phase nu, for mode 1 and mode 2"""
        rate1 = self.omega1 / self.g1
        rate2 = self.omega2 / self.g1
        if self.stark_shifts:
            rate1 -= self.shift1 / 2.0
            rate2 -= self.shift2 / 2.0
        return rate1, rate2


@dataclass(frozen=True)
class EvolutionCoeffs:
    """Amplitudes of |1;n1,n2> (k1) and |2;n1-1,n2+1> (k2) for an atom starting in level 1"""
    k1: np.ndarray
    k2: np.ndarray
    omega: np.ndarray

    @property
    def unitarity_defect(self):
        return np.abs(np.abs(self.k1) ** 2 + np.abs(self.k2) ** 2 - 1.0)


@dataclass(frozen=True)
class ReducedState:
    """Atom-mode 1 state in the two-branch basis {|1;N>, |2;N-1>} after tracing out mode 2.

    Attributes:
        pop_1N: weight of |1;N>
        pop_2Nm1: weight of |2;N-1>
        coherence: coefficient of |1;N><2;N-1|
        free_phase: the unit factor F(tau) carried by the coherence
    """
    pop_1N: np.ndarray
    pop_2Nm1: np.ndarray
    coherence: np.ndarray
    free_phase: np.ndarray

    @property
    def negativity(self):
        return np.abs(self.coherence)

    @property
    def atomic_linear_entropy(self):
        return 2.0 * self.pop_2Nm1 * (1.0 - self.pop_2Nm1)

    def embedded(self, N: int, mode1_dim: int) -> np.ndarray:
        """Full atom-mode 1 matrix on dims (2, mode1_dim), index = atom*mode1_dim + n1"""
        if mode1_dim < N + 1:
            raise InvalidArgumentError(f"mode-1 dimension {mode1_dim} cannot hold |{N}>")
        upper, lower = N, mode1_dim + N - 1
        entries = np.zeros((2 * mode1_dim, 2 * mode1_dim), dtype=complex)
        entries[upper, upper] = self.pop_1N
        entries[lower, lower] = self.pop_2Nm1
        entries[upper, lower] = self.coherence
        entries[lower, upper] = np.conj(self.coherence)
        return entries


@dataclass(frozen=True)
class TripartiteCoefficients:
    """Coefficients A, B, C of the evolved tripartite density operator, indexed [n1, n2, m1, m2]"""
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def trace(self) -> float:
        return float(np.real(np.einsum("abab->", self.A) + np.einsum("abab->", self.B)))

    def excited_population(self) -> float:
        return float(np.real(np.einsum("abab->", self.B)))


def _check_photon_numbers(*numbers):
    for n in numbers:
        if np.any(np.asarray(n) < 0):
            raise InvalidArgumentError("photon numbers must be non-negative")


def _check_times(tau):
    if np.any(tau < 0):
        raise InvalidArgumentError("scaled time must be non-negative")


def rabi_frequency(n1, n2, params: ModelParams):
    """
    Rabi frequency of the block {|1;n1,n2>, |2;n1-1,n2+1>} in units of g1.

    With the Stark shifts it is [g1^2 n1 + g2^2 (n2+1)] / (2 delta), linear in
    both photon numbers; without them it falls back to g1 g2 sqrt(n1(n2+1)) / delta.
    """
    _check_photon_numbers(n1, n2)
    n1 = np.asarray(n1, dtype=float)
    n2 = np.asarray(n2, dtype=float)
    if params.stark_shifts:
        omega = (params.shift1 * n1 + params.shift2 * (n2 + 1.0)) / 2.0
    else:
        omega = params.exchange * np.sqrt(n1 * (n2 + 1.0))
    return omega[()] if omega.ndim == 0 else omega


def _mixing(n1, n2, params: ModelParams):
    # (detuning bracket of k1, transfer amplitude of k2)
    n1 = np.asarray(n1, dtype=float)
    n2 = np.asarray(n2, dtype=float)
    if not params.stark_shifts:
        shape = np.broadcast(n1, n2).shape
        return np.zeros(shape), np.ones(shape)
    r2 = params.r ** 2
    denominator = n1 + r2 * (n2 + 1.0)
    bracket = (n1 - r2 * (n2 + 1.0)) / denominator
    amplitude = 2.0 * params.r * np.sqrt(n1 * (n2 + 1.0)) / denominator
    return bracket, amplitude


def evolution_coeffs(n1, n2, params: ModelParams, tau) -> EvolutionCoeffs:
    """k1, k2 for an atom prepared in level 1 with n1, n2 photons, at scaled time tau"""
    tau = np.asarray(tau, dtype=float)
    _check_times(tau)
    omega = rabi_frequency(n1, n2, params)
    bracket, amplitude = _mixing(n1, n2, params)
    angle = omega * tau
    k1 = np.cos(angle) + 1j * bracket * np.sin(angle)
    k2 = 1j * amplitude * np.sin(angle)
    return EvolutionCoeffs(k1, k2, np.asarray(omega))


def free_phase(params: ModelParams, tau):
    """F(tau) = exp(-i (omega2 - g2^2/2delta) tau), the phase carried by the atom-mode 1 coherence"""
    _, rate2 = params.phase_rates
    return np.exp(-1j * rate2 * np.asarray(tau, dtype=float))


def rephasing_time(params: ModelParams, mode: int = 2) -> float:
    """Revival period caused by the photon-number spread of `mode` (1 or 2), in scaled time"""
    if mode not in (1, 2):
        raise InvalidArgumentError(f"mode must be 1 or 2, got {mode!r}")
    if not params.stark_shifts:
        raise InvalidArgumentError("without Stark shifts the Rabi frequencies do not rephase exactly")
    step = params.shift1 if mode == 1 else params.shift2
    return 2.0 * math.pi / step


def product_density(dist1: PhotonDistribution, dist2: PhotonDistribution) -> np.ndarray:
    """rho0[n1, n2, m1, m2] of two diagonal (Fock-mixture) field preparations"""
    return np.einsum("ac,bd->abcd", np.diag(dist1.weights), np.diag(dist2.weights)).astype(complex)


def pure_product_density(amplitudes1, amplitudes2) -> np.ndarray:
    """rho0[n1, n2, m1, m2] of the pure product state sum a1_n a2_m |n, m>"""
    psi = np.outer(amplitudes1, amplitudes2)
    return np.einsum("ab,cd->abcd", psi, psi.conj())


def tripartite_coefficients(rho0: np.ndarray, params: ModelParams, tau: float) -> TripartiteCoefficients:
    """
    Evolve an initial product-form density operator (atom in level 1).

    Args:
        rho0: array rho0[n1, n2, m1, m2] of the field coefficients
        params: model parameters
        tau: scaled time (scalar)

    Returns:
        TripartiteCoefficients with A, B, C of the same shape as rho0
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.ndim != 4 or rho0.shape[:2] != rho0.shape[2:]:
        raise InvalidStateError(f"rho0 must have shape (d1, d2, d1, d2), got {rho0.shape}")
    if not np.allclose(rho0, np.conj(rho0.transpose(2, 3, 0, 1)), rtol=0.0, atol=1e-12):
        raise InvalidStateError("rho0 is not Hermitian")
    trace = np.einsum("abab->", rho0)
    if abs(trace - 1.0) > NORMALIZATION_TOLERANCE:
        raise InvalidStateError(f"rho0 has trace {trace.real:.12g}, expected 1")

    d1, d2 = rho0.shape[:2]
    n1 = np.arange(d1)[:, None]
    n2 = np.arange(d2)[None, :]
    coeffs = evolution_coeffs(n1, n2, params, tau)
    rate1, rate2 = params.phase_rates
    nu = ((n1[None, None] - n1[:, :, None, None]) * rate1
          + (n2[None, None] - n2[:, :, None, None]) * rate2)
    weighted = rho0 * np.exp(1j * nu * tau)
    k1, k2 = coeffs.k1, coeffs.k2
    return TripartiteCoefficients(
        A=weighted * k1[:, :, None, None] * np.conj(k1)[None, None],
        B=weighted * k2[:, :, None, None] * np.conj(k2)[None, None],
        C=weighted * k1[:, :, None, None] * np.conj(k2)[None, None],
    )


def _chunked_sum(tau: np.ndarray, frequencies: np.ndarray, weights: np.ndarray, kernel) -> np.ndarray:
    # sum_k weights_k * kernel(frequencies_k * tau) for every tau, bounded memory
    flat = tau.ravel()
    out = np.empty(flat.shape)
    rows = max(1, CHUNK_ELEMENTS // max(1, frequencies.size))
    for start in range(0, flat.size, rows):
        block = flat[start:start + rows]
        out[start:start + rows] = kernel(np.outer(block, frequencies)) @ weights
    return out.reshape(tau.shape)


def _sin_squared(angle):
    return np.sin(angle) ** 2


def atomic_inversion(dist1: PhotonDistribution, dist2: PhotonDistribution, params: ModelParams, tau):
    """
    Population inversion W = 2 P(level 2) - 1 for product field preparations.

    Only the photon-number distributions enter: every |1;n1,n2> evolves in its
    own invariant block, so field coherences drop out of the populations.
    """
    tau = np.asarray(tau, dtype=float)
    _check_times(tau)
    n1, n2 = np.meshgrid(np.arange(dist1.n_max + 1), np.arange(dist2.n_max + 1), indexing="ij")
    weights = np.outer(dist1.weights, dist2.weights)
    _, amplitude = _mixing(n1, n2, params)
    transfer = (weights * amplitude ** 2).ravel()
    keep = transfer > 0.0
    omega = np.asarray(rabi_frequency(n1, n2, params)).ravel()[keep]
    logger.debug("inversion over %d photon-number pairs", int(keep.sum()))
    excited = _chunked_sum(tau, omega, transfer[keep], _sin_squared)
    inversion = 2.0 * excited - 1.0
    return inversion[()] if inversion.ndim == 0 else inversion


def _require_mode1_photon(N: int):
    if int(N) != N or N < 0:
        raise InvalidArgumentError(f"mode-1 Fock number must be a non-negative integer, got {N!r}")
    if N == 0:
        raise DegenerateInputError("N = 0 has no |2;N-1> branch; the atom-mode 1 state stays separable")


def reduced_atom_mode1_field(N: int, field: PhotonDistribution, params: ModelParams, tau) -> ReducedState:
    """
    Atom-mode 1 state for mode 1 in |N> and mode 2 in a pure state, after tracing out mode 2.

    The sums run one index past the field cutoff since the coherence couples
    mode-2 numbers n and n+1.
    """
    _require_mode1_photon(N)
    tau = np.asarray(tau, dtype=float)
    _check_times(tau)
    size = field.n_max + 2
    amplitudes = field.amplitudes(size)
    n = np.arange(size)
    coeffs = evolution_coeffs(N, n, params, tau[..., None])
    k1, k2 = coeffs.k1, coeffs.k2
    weights = amplitudes ** 2
    pop_1N = np.abs(k1) ** 2 @ weights
    pop_2Nm1 = np.abs(k2) ** 2 @ weights
    phase = free_phase(params, tau)
    cross = amplitudes[1:] * amplitudes[:-1]
    coherence = phase * np.sum(cross * k1[..., 1:] * np.conj(k2[..., :-1]), axis=-1)

    mass = math.fsum(weights)
    if np.any(np.abs(pop_1N + pop_2Nm1 - mass) > 1e-12):
        raise InternalConsistencyError("branch populations do not add up to the field norm")
    if np.any(np.abs(coherence) ** 2 > pop_1N * pop_2Nm1 + 1e-12):
        raise InternalConsistencyError("atom-mode 1 coherence exceeds the positivity bound")
    return ReducedState(pop_1N[()], pop_2Nm1[()], coherence[()], phase[()])


def reduced_atom_mode1(N: int, nbar: float, params: ModelParams, tau,
                       epsilon: float = DEFAULT_EPSILON) -> ReducedState:
    """Atom-mode 1 state for |1> x |N> x |alpha>, alpha = sqrt(nbar) real, traced over mode 2"""
    return reduced_atom_mode1_field(N, coherent_dist(nbar, epsilon), params, tau)


def negativity(N: int, nbar: float, params: ModelParams, tau, epsilon: float = DEFAULT_EPSILON):
    """
    Negativity of the atom-mode 1 state for mode 2 initially coherent.

    Closed form: N(tau) = sqrt(nbar) * sqrt(S_re^2 + S_im^2), where the two sums
    run over the Poisson weights w_n and pair the Rabi phases of n and n+1.
    With the Stark shifts the prefactor becomes 2 r sqrt(nbar N) and every term
    is divided by N + r^2 (n+1).
    """
    _require_mode1_photon(N)
    tau = np.asarray(tau, dtype=float)
    _check_times(tau)
    dist = coherent_dist(nbar, epsilon)
    size = dist.n_max + 2
    weights = dist.padded_weights(size)[:-1]
    n = np.arange(size - 1)
    omega_n = np.asarray(rabi_frequency(N, n, params))
    omega_next = np.asarray(rabi_frequency(N, n + 1, params))
    bracket_next, _ = _mixing(N, n + 1, params)
    _, amplitude = _mixing(N, n, params)
    factor = weights * amplitude / np.sqrt(n + 1.0)

    angle_n = tau[..., None] * omega_n
    angle_next = tau[..., None] * omega_next
    s_re = (np.sin(angle_n) * np.sin(angle_next)) @ (factor * bracket_next)
    s_im = (np.sin(angle_n) * np.cos(angle_next)) @ factor
    value = math.sqrt(nbar) * np.sqrt(s_re ** 2 + s_im ** 2)
    return value[()] if np.ndim(value) == 0 else value


def excited_population(N: int, nbar: float, params: ModelParams, tau, epsilon: float = DEFAULT_EPSILON):
    """p2(tau): probability of atomic level 2 for |1> x |N> x |alpha>"""
    _require_mode1_photon(N)
    tau = np.asarray(tau, dtype=float)
    _check_times(tau)
    dist = coherent_dist(nbar, epsilon)
    n = np.arange(dist.n_max + 2)
    weights = dist.padded_weights(n.size)
    _, amplitude = _mixing(N, n, params)
    omega = np.asarray(rabi_frequency(N, n, params))
    return _chunked_sum(tau, omega, weights * amplitude ** 2, _sin_squared)


def linear_entropy(N: int, nbar: float, params: ModelParams, tau, epsilon: float = DEFAULT_EPSILON):
    """Linear entropy of the atom, 1 - Tr(rho_A^2) = 2 p2 - 2 p2^2"""
    p2 = excited_population(N, nbar, params, tau, epsilon)
    value = 2.0 * p2 - 2.0 * p2 ** 2
    return value[()] if np.ndim(value) == 0 else value
