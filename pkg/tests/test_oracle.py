import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.analytic import (ModelParams, atomic_inversion, pure_product_density, rabi_frequency, reduced_atom_mode1,
                          tripartite_coefficients)
from src.errors import InvalidArgumentError, InvalidStateError, TruncationError
from src.oracle import (DensityMatrix, TruncatedState, build_blocks, evolve_state, initial_state,
                        inversion_series, matrix_linear_entropy, partial_trace, pt_negativity)
from src.states import coherent_dist, fock_dist, thermal_dist

BELL = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2)


def _random_density(rng, dim):
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = raw @ raw.conj().T
    return rho / np.trace(rho).real


class TestBlocks:
    def test_empty_mode1_is_single(self, unit_params):
        blocks = build_blocks(unit_params, 3, 3)
        for n2 in range(4):
            assert blocks.block_of(0, n2).shape == (1, 1)

    def test_exchange_element(self, unit_params):
        block = build_blocks(unit_params, 2, 2).block_of(1, 0)
        assert block.shape == (2, 2)
        assert block[0, 1] == pytest.approx(-0.1, rel=1e-15)
        assert block[1, 0] == block[0, 1]

    def test_partner_outside_cutoff(self, unit_params):
        assert build_blocks(unit_params, 2, 2).block_of(1, 2).shape == (1, 1)

    @pytest.mark.parametrize("omegas", [(0.0, 0.0), (3.0, 1.7)])
    def test_splitting_is_twice_rabi_frequency(self, omegas):
        params = ModelParams(g1=1.0, g2=1.023, delta=10.0, omega1=omegas[0], omega2=omegas[1])
        blocks = build_blocks(params, 31, 31)
        _, n1, n2 = np.unravel_index(blocks.upper, blocks.dims)
        np.testing.assert_allclose(blocks.splittings(), 2 * rabi_frequency(n1, n2, params), rtol=0, atol=1e-12)

    def test_every_state_in_one_block(self, fig3_params):
        blocks = build_blocks(fig3_params, 4, 6)
        members = np.concatenate([blocks.upper, blocks.lower, blocks.single])
        assert sorted(members.tolist()) == list(range(2 * 5 * 7))

    def test_rejects_small_cutoffs(self, unit_params):
        with pytest.raises(InvalidArgumentError):
            build_blocks(unit_params, 0, 3)


class TestEvolution:
    def test_zero_time_is_identity(self, fig3_params):
        state = initial_state(fock_dist(5), coherent_dist(5.0))
        blocks = build_blocks(fig3_params, *[d - 1 for d in state.dims[1:]])
        np.testing.assert_allclose(evolve_state(state, blocks, 0.0).amplitudes, state.amplitudes, atol=1e-15)

    def test_single_photon_transfer(self, unit_params):
        state = initial_state(fock_dist(1), fock_dist(0))
        blocks = build_blocks(unit_params, 2, 2)
        omega = rabi_frequency(1, 0, unit_params)
        for tau in (1.0, 7.5, 15.7):
            evolved = evolve_state(state, blocks, tau)
            assert evolved.probabilities[1, 0, 1] == pytest.approx(math.sin(omega * tau) ** 2, abs=1e-14)

    def test_norm_conservation(self, fig3_params):
        state = initial_state(fock_dist(5), coherent_dist(5.0))
        blocks = build_blocks(fig3_params, *[d - 1 for d in state.dims[1:]])
        for tau in np.linspace(0, 500, 26):
            assert abs(evolve_state(state, blocks, tau).norm - state.norm) < 1e-12

    def test_excitation_pattern(self, fig3_params):
        state = initial_state(fock_dist(5), coherent_dist(5.0))
        blocks = build_blocks(fig3_params, *[d - 1 for d in state.dims[1:]])
        probabilities = evolve_state(state, blocks, 33.0).probabilities
        # level 1 keeps n1 = 5, level 2 holds n1 = 4 only
        assert probabilities[0, np.arange(7) != 5].sum() == 0.0
        assert probabilities[1, np.arange(7) != 4].sum() == 0.0
        assert probabilities[1, 4, 0] == 0.0

    def test_inversion_matches_closed_form(self, fig3_params):
        dist1, dist2 = fock_dist(5), coherent_dist(5.0)
        state = initial_state(dist1, dist2)
        blocks = build_blocks(fig3_params, *[d - 1 for d in state.dims[1:]])
        tau = np.linspace(0, 150, 600)
        np.testing.assert_allclose(inversion_series(state, blocks, tau),
                                   atomic_inversion(dist1, dist2, fig3_params, tau), rtol=0, atol=1e-10)

    def test_mixed_field_inversion(self):
        params = ModelParams.from_ratio(1.012, 10.0)
        dist1, dist2 = coherent_dist(3.0), thermal_dist(2.0)
        state = initial_state(dist1, dist2)
        blocks = build_blocks(params, *[d - 1 for d in state.dims[1:]])
        tau = np.linspace(0, 120, 300)
        np.testing.assert_allclose(inversion_series(state, blocks, tau),
                                   atomic_inversion(dist1, dist2, params, tau), rtol=0, atol=1e-10)

    def test_without_stark_shifts(self):
        params = ModelParams.from_ratio(1.1, 10.0, stark_shifts=False)
        dist1, dist2 = fock_dist(3), coherent_dist(2.0)
        state = initial_state(dist1, dist2)
        blocks = build_blocks(params, *[d - 1 for d in state.dims[1:]])
        tau = np.linspace(0, 90, 200)
        np.testing.assert_allclose(inversion_series(state, blocks, tau),
                                   atomic_inversion(dist1, dist2, params, tau), rtol=0, atol=1e-10)

    def test_reduced_state_matches_closed_form(self, fig3_params):
        state = initial_state(fock_dist(5), coherent_dist(5.0))
        blocks = build_blocks(fig3_params, *[d - 1 for d in state.dims[1:]])
        for tau in (0.0, 12.0, 30.0, 61.0):
            reduced = partial_trace(evolve_state(state, blocks, tau), (0, 1))
            expected = reduced_atom_mode1(5, 5.0, fig3_params, tau).embedded(5, state.dims[1])
            np.testing.assert_allclose(reduced.entries, expected, rtol=0, atol=1e-10)

    def test_state_inversion_matches_series(self, fig3_params):
        state = initial_state(fock_dist(5), coherent_dist(5.0))
        blocks = build_blocks(fig3_params, *[d - 1 for d in state.dims[1:]])
        taus = [0.0, 12.0, 30.0, 61.0]
        series = inversion_series(state, blocks, taus)
        for tau, expected in zip(taus, series):
            assert evolve_state(state, blocks, tau).inversion == pytest.approx(expected, abs=1e-14)
        assert state.inversion == -1.0

    def test_dims_must_match(self, fig3_params):
        state = initial_state(fock_dist(1), fock_dist(0))
        with pytest.raises(InvalidArgumentError):
            evolve_state(state, build_blocks(fig3_params, 3, 3), 1.0)


def _padded_amplitudes(dist, size):
    return np.sqrt(np.pad(dist.weights, (0, size - dist.weights.size)))


class TestTripartiteCoefficients:
    """A, B, C against psi psi^dagger of the exactly evolved state, with nonzero mode frequencies"""

    @pytest.fixture
    def params(self):
        return ModelParams(g1=1.0, g2=1.2, delta=12.0, omega1=3.0, omega2=1.7)

    @pytest.mark.parametrize("tau", [0.7, 5.0, 23.0])
    def test_match_evolved_state(self, params, tau):
        dist1, dist2 = coherent_dist(1.5), coherent_dist(0.8)
        state = initial_state(dist1, dist2)
        _, d1, d2 = state.dims
        blocks = build_blocks(params, d1 - 1, d2 - 1)
        rho0 = pure_product_density(_padded_amplitudes(dist1, d1), _padded_amplitudes(dist2, d2))
        coefficients = tripartite_coefficients(rho0, params, tau)

        psi = evolve_state(state, blocks, tau).amplitudes
        level1 = psi[0]
        # level-2 partner of |1; n1, n2> is |2; n1 - 1, n2 + 1>
        level2 = np.zeros((d1, d2), dtype=complex)
        level2[1:, :-1] = psi[1, :-1, 1:]
        np.testing.assert_allclose(coefficients.A, np.einsum("ab,cd->abcd", level1, level1.conj()), rtol=0, atol=1e-12)
        np.testing.assert_allclose(coefficients.B, np.einsum("ab,cd->abcd", level2, level2.conj()), rtol=0, atol=1e-12)
        np.testing.assert_allclose(coefficients.C, np.einsum("ab,cd->abcd", level1, level2.conj()), rtol=0, atol=1e-12)
        assert coefficients.trace() == pytest.approx(1.0, abs=1e-10)


class TestTruncation:
    def test_small_mode2_cutoff(self):
        with pytest.raises(TruncationError) as caught:
            initial_state(fock_dist(5), coherent_dist(5.0), n2_max=2)
        assert caught.value.cutoff_name == "n2_max"
        assert caught.value.suggested == coherent_dist(5.0).n_max + 2
        assert "n2_max" in str(caught.value)

    def test_small_mode1_cutoff(self):
        with pytest.raises(TruncationError) as caught:
            initial_state(fock_dist(5), fock_dist(0), n1_max=5)
        assert caught.value.cutoff_name == "n1_max"

    def test_leak_during_evolution(self, unit_params):
        amplitudes = np.zeros((2, 3, 3), dtype=complex)
        amplitudes[0, 1, 1] = 1.0
        state = TruncatedState(amplitudes)
        with pytest.raises(TruncationError) as caught:
            evolve_state(state, build_blocks(unit_params, 2, 2), 5.0)
        assert caught.value.cutoff_name == "n2_max"

    def test_default_cutoffs_keep_boundary_empty(self):
        state = initial_state(coherent_dist(4.0), thermal_dist(1.0))
        assert state.boundary_leakage() == (0.0, 0.0)


class TestDensityMatrix:
    def test_rejects_non_hermitian(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.array([[0.5, 0.2], [0.0, 0.5]]), (2,))

    def test_rejects_bad_trace(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.eye(2), (2,))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.array([[1.2, 0.0], [0.0, -0.2]]), (2,))

    def test_rejects_dims_mismatch(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.eye(4) / 4, (2, 3))


class TestPartialTrace:
    def test_product_state(self):
        rng = np.random.default_rng(7)
        a, b = _random_density(rng, 2), _random_density(rng, 3)
        rho = DensityMatrix(np.kron(a, b), (2, 3))
        np.testing.assert_allclose(partial_trace(rho, (0,)).entries, a, atol=1e-14)
        np.testing.assert_allclose(partial_trace(rho, (1,)).entries, b, atol=1e-14)

    def test_entangled_pure_state(self):
        p = 0.3
        psi = np.array([math.sqrt(1 - p), 0.0, 0.0, math.sqrt(p)])
        atom = partial_trace(DensityMatrix.pure(psi, (2, 2)), (0,))
        np.testing.assert_allclose(np.linalg.eigvalsh(atom.entries), [p, 1 - p], atol=1e-15)

    def test_state_and_matrix_agree(self, fig3_params):
        state = initial_state(fock_dist(2), coherent_dist(1.0))
        evolved = evolve_state(state, build_blocks(fig3_params, *[d - 1 for d in state.dims[1:]]), 9.0)
        full = DensityMatrix.pure(evolved.amplitudes, evolved.dims)
        for keep in [(0,), (1,), (2,), (0, 1), (0, 2)]:
            np.testing.assert_allclose(partial_trace(evolved, keep).entries, partial_trace(full, keep).entries,
                                       atol=1e-14)

    def test_empty_keep(self):
        with pytest.raises(InvalidArgumentError):
            partial_trace(DensityMatrix(np.eye(2) / 2, (2,)), ())


class TestNegativity:
    def test_bell_state(self):
        assert pt_negativity(DensityMatrix.pure(BELL, (2, 2))) == pytest.approx(0.5, abs=1e-12)

    def test_bell_state_in_truncated_space(self):
        psi = np.zeros(2 * 6)
        psi[0] = psi[6 + 1] = 1 / math.sqrt(2)
        rho = DensityMatrix.pure(psi, (2, 6))
        assert pt_negativity(rho) == pytest.approx(0.5, abs=1e-12)
        assert pt_negativity(rho, 0) == pytest.approx(pt_negativity(rho, 1), abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.integers(2, 8))
    def test_separable_states_have_no_negativity(self, seed, dim):
        rng = np.random.default_rng(seed)
        rho = DensityMatrix(np.kron(_random_density(rng, 2), _random_density(rng, dim)), (2, dim))
        assert pt_negativity(rho) == 0.0

    def test_requires_bipartite(self):
        with pytest.raises(InvalidArgumentError):
            pt_negativity(DensityMatrix(np.eye(8) / 8, (2, 2, 2)))

    def test_fock_mode2_gives_mixedness_without_entanglement(self, unit_params):
        state = initial_state(fock_dist(5), fock_dist(4))
        blocks = build_blocks(unit_params, *[d - 1 for d in state.dims[1:]])
        quarter = (math.pi / 4) / rabi_frequency(5, 4, unit_params)
        for tau in np.linspace(0, 60, 31):
            evolved = evolve_state(state, blocks, tau)
            assert pt_negativity(partial_trace(evolved, (0, 1))) < 1e-12
        mid = evolve_state(state, blocks, quarter)
        assert matrix_linear_entropy(partial_trace(mid, (0,))) > 0.3


class TestLinearEntropy:
    def test_pure_state(self):
        assert matrix_linear_entropy(DensityMatrix.pure(BELL, (2, 2))) == pytest.approx(0.0, abs=1e-15)

    def test_maximally_mixed_qubit(self):
        assert matrix_linear_entropy(DensityMatrix(np.eye(2) / 2, (2,))) == pytest.approx(0.5)
