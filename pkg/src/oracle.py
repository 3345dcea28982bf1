"""
Brute-force evolution of the effective Hamiltonian on a truncated Fock space

The Hamiltonian is assembled from its raw matrix elements and diagonalised
block by block; nothing here reuses the closed-form coefficients, so the
results serve as an independent check of the analytic module.

Basis ordering: amplitudes are indexed [atom, n1, n2] with atom 0 for level 1
and atom 1 for level 2; flat indices follow numpy's C order.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh, eigvalsh

from .analytic import ModelParams, NORMALIZATION_TOLERANCE
from .errors import InvalidArgumentError, InvalidStateError, TruncationError
from .states import PhotonDistribution

logger = logging.getLogger(__name__)

LEAKAGE_LIMIT = 1e-10
HERMITICITY_TOLERANCE = 1e-12
POSITIVITY_FLOOR = -1e-10
NEGATIVE_EIGENVALUE_FLOOR = 1e-12
CHUNK_ELEMENTS = 4_000_000


@dataclass(frozen=True, eq=False)
class BlockSet:
    """Invariant subspaces of the Hamiltonian on a truncated space.

    Pairs {|1;n1,n2>, |2;n1-1,n2+1>} are stored as 2x2 matrices together with
    their eigendecomposition; every basis state without a partner inside the
    cutoffs is a 1x1 block.
    """
    dims: tuple[int, int, int]
    upper: np.ndarray = field(repr=False)
    lower: np.ndarray = field(repr=False)
    matrices: np.ndarray = field(repr=False)
    single: np.ndarray = field(repr=False)
    single_energy: np.ndarray = field(repr=False)
    energies: np.ndarray = field(repr=False)
    vectors: np.ndarray = field(repr=False)

    def splittings(self) -> np.ndarray:
        return self.energies[:, 1] - self.energies[:, 0]

    def block_of(self, n1: int, n2: int) -> np.ndarray:
        """Matrix of the block containing |1;n1,n2> (2x2 or 1x1)"""
        index = np.ravel_multi_index((0, n1, n2), self.dims)
        found = np.flatnonzero(self.upper == index)
        if found.size:
            return self.matrices[found[0]]
        return self.single_energy[self.single == index].reshape(1, 1)


@dataclass(frozen=True, eq=False)
class TruncatedState:
    """Pure tripartite state; amplitudes have shape (2, n1_max+1, n2_max+1)"""
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.ndim != 3 or self.amplitudes.shape[0] != 2:
            raise InvalidStateError(f"amplitudes must have shape (2, d1, d2), got {self.amplitudes.shape}")
        if abs(self.norm - 1.0) > NORMALIZATION_TOLERANCE:
            raise InvalidStateError(f"state norm {self.norm:.12g} differs from 1")
        self.amplitudes.setflags(write=False)

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.amplitudes.shape

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def boundary_leakage(self) -> tuple[float, float]:
        """Probability on the n1 = n1_max and n2 = n2_max layers"""
        probabilities = self.probabilities
        return float(probabilities[:, -1, :].sum()), float(probabilities[:, :, -1].sum())

    @property
    def excited_population(self) -> float:
        return float(self.probabilities[1].sum())

    @property
    def inversion(self) -> float:
        return 2.0 * self.excited_population - 1.0


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Density operator on a tensor product of factors with dimensions `dims`"""
    entries: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        size = math.prod(self.dims)
        if entries.shape != (size, size):
            raise InvalidStateError(f"entries of shape {entries.shape} do not match dims {self.dims}")
        if not np.allclose(entries, entries.conj().T, rtol=0.0, atol=HERMITICITY_TOLERANCE):
            raise InvalidStateError("density matrix is not Hermitian")
        trace = np.trace(entries).real
        if abs(trace - 1.0) > NORMALIZATION_TOLERANCE:
            raise InvalidStateError(f"density matrix has trace {trace:.12g}")
        smallest = eigvalsh(entries)[0]
        if smallest < POSITIVITY_FLOOR:
            raise InvalidStateError(f"density matrix has eigenvalue {smallest:.3e}")

    @classmethod
    def pure(cls, vector, dims) -> "DensityMatrix":
        vector = np.asarray(vector, dtype=complex).ravel()
        return cls(np.outer(vector, vector.conj()), dims)


def _flat(dims, atom, n1, n2):
    return np.ravel_multi_index((np.broadcast_to(atom, np.shape(n1)), n1, n2), dims)


def build_blocks(params: ModelParams, n1_max: int, n2_max: int) -> BlockSet:
    """
    Decompose the effective Hamiltonian (in units of g1) into invariant blocks.

    Diagonal entries carry the free-field energy and, when enabled, the Stark
    shifts -g1^2 n1/delta and -g2^2 (n2+1)/delta; the exchange element is
    -g1 g2 sqrt(n1 (n2+1)) / delta. Level 2 sits at E2 = omega1 - omega2.
    """
    if n1_max < 1 or n2_max < 1:
        raise InvalidArgumentError(f"cutoffs must be >= 1, got n1_max={n1_max}, n2_max={n2_max}")
    dims = (2, n1_max + 1, n2_max + 1)
    g1, g2, delta = params.g1, params.g2, params.delta
    w1, w2 = params.omega1 / g1, params.omega2 / g1
    stark = 1.0 if params.stark_shifts else 0.0
    level2 = w1 - w2

    n1, n2 = np.meshgrid(np.arange(1, n1_max + 1), np.arange(n2_max), indexing="ij")
    n1, n2 = n1.ravel(), n2.ravel()
    upper = _flat(dims, 0, n1, n2)
    lower = _flat(dims, 1, n1 - 1, n2 + 1)

    free = w1 * n1 + w2 * n2
    first = free - stark * g1 ** 2 * n1 / (delta * g1)
    second = level2 + w1 * (n1 - 1) + w2 * (n2 + 1) - stark * g2 ** 2 * (n2 + 1) / (delta * g1)
    exchange = -g1 * g2 * np.sqrt(n1 * (n2 + 1.0)) / (delta * g1)
    matrices = np.stack([np.stack([first, exchange], axis=-1),
                         np.stack([exchange, second], axis=-1)], axis=-2)

    paired = np.zeros(math.prod(dims), dtype=bool)
    paired[upper] = True
    paired[lower] = True
    single = np.flatnonzero(~paired)
    atom, m1, m2 = np.unravel_index(single, dims)
    single_energy = np.where(
        atom == 0,
        w1 * m1 + w2 * m2 - stark * g1 ** 2 * m1 / (delta * g1),
        level2 + w1 * m1 + w2 * m2 - stark * g2 ** 2 * m2 / (delta * g1))

    energies, vectors = np.linalg.eigh(matrices)
    logger.debug("built %d pair blocks and %d single states for dims %s", len(upper), len(single), dims)
    return BlockSet(dims, upper, lower, matrices, single, single_energy, energies, vectors)


def _support_limit(weights: np.ndarray) -> int:
    occupied = np.flatnonzero(weights > 0.0)
    return int(occupied[-1]) if occupied.size else 0


def _truncated_amplitudes(dist: PhotonDistribution, size: int) -> np.ndarray:
    # mixed preparations enter as sqrt(p_n); exact for populations only
    weights = np.zeros(size)
    kept = min(size, dist.n_max + 1)
    weights[:kept] = dist.weights[:kept]
    return np.sqrt(weights)


def initial_state(dist1: PhotonDistribution, dist2: PhotonDistribution,
                  n1_max: int | None = None, n2_max: int | None = None) -> TruncatedState:
    """|1> x field1 x field2 on a truncated space; default cutoffs keep both boundary layers empty"""
    suggested1, suggested2 = dist1.n_max + 1, dist2.n_max + 2
    n1_max = suggested1 if n1_max is None else n1_max
    n2_max = suggested2 if n2_max is None else n2_max
    if n1_max < 1 or n2_max < 1:
        raise InvalidArgumentError(f"cutoffs must be >= 1, got n1_max={n1_max}, n2_max={n2_max}")

    # weight that starts on, or is one exchange away from, a boundary layer
    leakage1 = math.fsum(dist1.weights[n1_max:])
    if leakage1 >= LEAKAGE_LIMIT:
        raise TruncationError("n1_max", n1_max, leakage1, suggested1)
    leakage2 = math.fsum(dist2.weights[n2_max - 1:])
    if leakage2 >= LEAKAGE_LIMIT:
        raise TruncationError("n2_max", n2_max, leakage2, suggested2)

    amplitudes = np.zeros((2, n1_max + 1, n2_max + 1), dtype=complex)
    amplitudes[0] = np.outer(_truncated_amplitudes(dist1, n1_max + 1), _truncated_amplitudes(dist2, n2_max + 1))
    logger.debug("initial %s x %s on dims %s, field mass %.15f", dist1.label, dist2.label,
                 amplitudes.shape, dist1.mass * dist2.mass)
    return TruncatedState(amplitudes)


def _evolve_flat(initial: np.ndarray, blocks: BlockSet, taus: np.ndarray) -> np.ndarray:
    # initial: flat amplitudes (D,); returns (T, D)
    out = np.zeros((taus.size, initial.size), dtype=complex)
    pairs = np.stack([initial[blocks.upper], initial[blocks.lower]], axis=-1)
    coefficients = np.einsum("kba,kb->ka", blocks.vectors.conj(), pairs)
    phases = np.exp(-1j * taus[:, None, None] * blocks.energies[None])
    evolved = np.einsum("kab,tkb->tka", blocks.vectors, phases * coefficients[None])
    out[:, blocks.upper] = evolved[..., 0]
    out[:, blocks.lower] = evolved[..., 1]
    out[:, blocks.single] = initial[blocks.single] * np.exp(-1j * taus[:, None] * blocks.single_energy[None])
    return out


def _check_leakage(probabilities: np.ndarray, initial: TruncatedState):
    # probabilities: (T, 2, d1, d2)
    _, d1, d2 = initial.dims
    start = initial.probabilities
    leak1 = float(probabilities[:, :, -1, :].sum(axis=(1, 2)).max(initial=0.0))
    if leak1 >= LEAKAGE_LIMIT:
        raise TruncationError("n1_max", d1 - 1, leak1, _support_limit(start.sum(axis=(0, 2))) + 1)
    leak2 = float(probabilities[:, :, :, -1].sum(axis=(1, 2)).max(initial=0.0))
    if leak2 >= LEAKAGE_LIMIT:
        raise TruncationError("n2_max", d2 - 1, leak2, _support_limit(start.sum(axis=(0, 1))) + 2)


def evolve_state(initial: TruncatedState, blocks: BlockSet, tau: float) -> TruncatedState:
    """Exact evolution to scaled time tau, block by block"""
    if initial.dims != blocks.dims:
        raise InvalidArgumentError(f"state dims {initial.dims} do not match block dims {blocks.dims}")
    if tau < 0:
        raise InvalidArgumentError("scaled time must be non-negative")
    flat = _evolve_flat(initial.amplitudes.ravel(), blocks, np.array([float(tau)]))
    amplitudes = flat.reshape((1,) + initial.dims)
    _check_leakage(np.abs(amplitudes) ** 2, initial)
    return TruncatedState(amplitudes[0].copy())


def inversion_series(initial: TruncatedState, blocks: BlockSet, taus) -> np.ndarray:
    """W(tau) = 2 P(level 2) - 1 along a time grid, evaluated in bounded-memory chunks"""
    if initial.dims != blocks.dims:
        raise InvalidArgumentError(f"state dims {initial.dims} do not match block dims {blocks.dims}")
    taus = np.asarray(taus, dtype=float).ravel()
    flat = initial.amplitudes.ravel()
    rows = max(1, CHUNK_ELEMENTS // flat.size)
    result = np.empty(taus.size)
    for start in range(0, taus.size, rows):
        chunk = taus[start:start + rows]
        probabilities = (np.abs(_evolve_flat(flat, blocks, chunk)) ** 2).reshape((chunk.size,) + initial.dims)
        _check_leakage(probabilities, initial)
        result[start:start + rows] = 2.0 * probabilities[:, 1].sum(axis=(1, 2)) - 1.0
    return result


def _check_keep(keep, rank: int) -> tuple[int, ...]:
    keep = tuple(sorted(set(int(k) for k in keep)))
    if not keep:
        raise InvalidArgumentError("partial trace needs at least one factor to keep")
    if keep[0] < 0 or keep[-1] >= rank:
        raise InvalidArgumentError(f"factors {keep} out of range for {rank} factors")
    return keep


def partial_trace(state: TruncatedState | DensityMatrix, keep) -> DensityMatrix:
    """Reduced density matrix on the factors listed in `keep` (kept in ascending order)"""
    if isinstance(state, TruncatedState):
        dims = state.dims
        keep = _check_keep(keep, len(dims))
        traced = [axis for axis in range(len(dims)) if axis not in keep]
        psi = state.amplitudes
        reduced = np.tensordot(psi, psi.conj(), axes=(traced, traced))
    else:
        dims = state.dims
        keep = _check_keep(keep, len(dims))
        rank = len(dims)
        tensor = state.entries.reshape(dims + dims)
        letters = "abcdefghijklmnopqrstuvwxyz"
        rows = list(letters[:rank])
        cols = list(letters[rank:2 * rank])
        for axis in range(rank):
            if axis not in keep:
                cols[axis] = rows[axis]
        output = "".join(rows[a] for a in keep) + "".join(cols[a] for a in keep)
        reduced = np.einsum("".join(rows) + "".join(cols) + "->" + output, tensor)
    kept_dims = tuple(dims[a] for a in keep)
    size = math.prod(kept_dims)
    return DensityMatrix(reduced.reshape(size, size), kept_dims)


def partial_transpose(rho: DensityMatrix, transpose_factor: int = 1) -> np.ndarray:
    if len(rho.dims) != 2:
        raise InvalidArgumentError(f"partial transpose needs a bipartite state, got dims {rho.dims}")
    if transpose_factor not in (0, 1):
        raise InvalidArgumentError(f"transpose_factor must be 0 or 1, got {transpose_factor!r}")
    a, b = rho.dims
    tensor = rho.entries.reshape(a, b, a, b)
    swapped = tensor.transpose(2, 1, 0, 3) if transpose_factor == 0 else tensor.transpose(0, 3, 2, 1)
    return swapped.reshape(a * b, a * b)


def pt_negativity(rho: DensityMatrix, transpose_factor: int = 1) -> float:
    """Sum of |negative eigenvalues| of the partial transpose; values above -1e-12 count as zero"""
    spectrum = eigvalsh(partial_transpose(rho, transpose_factor))
    negative = spectrum[spectrum < -NEGATIVE_EIGENVALUE_FLOOR]
    return float(-negative.sum())


def matrix_linear_entropy(rho: DensityMatrix) -> float:
    """1 - Tr(rho^2)"""
    purity = float(np.sum(np.abs(rho.entries) ** 2))
    return max(0.0, 1.0 - purity)


def semiclassical_block(N: int, r_prime: float) -> np.ndarray:
    """Two-branch block of the classically driven Hamiltonian on {|1;N>, |2;N-1>}, in units of g|Omega_L|/delta"""
    if int(N) != N or N < 1:
        raise InvalidArgumentError(f"N must be a positive integer, got {N!r}")
    if not r_prime > 0.0:
        raise InvalidArgumentError(f"r' must be positive, got {r_prime!r}")
    root = math.sqrt(N)
    return np.array([[-N / r_prime, -root], [-root, -r_prime]])


def semiclassical_state(N: int, r_prime: float, tau_prime: float) -> DensityMatrix:
    """Atom-mode 1 state |1;N> evolved under the driven Hamiltonian, on dims (2, N+1)"""
    energies, vectors = eigh(semiclassical_block(N, r_prime))
    branch = vectors @ (np.exp(-1j * energies * tau_prime) * vectors[0].conj())
    psi = np.zeros(2 * (N + 1), dtype=complex)
    psi[N] = branch[0]
    psi[(N + 1) + N - 1] = branch[1]
    return DensityMatrix.pure(psi, (2, N + 1))
