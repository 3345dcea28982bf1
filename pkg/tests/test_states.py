import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import poisson

from src.errors import InvalidArgumentError, InvalidToleranceError
from src.states import (coherent_dist, fock_dist, parse_distribution, poisson_weights,
                        thermal_cutoff, thermal_dist)


class TestFock:
    def test_vacuum(self):
        dist = fock_dist(0)
        assert dist.n_max == 0
        assert dist.weights.tolist() == [1.0]
        assert dist.tail_bound == 0.0

    @pytest.mark.parametrize("N", [2, 5])
    def test_point_mass(self, N):
        dist = fock_dist(N)
        assert dist.n_max == N
        assert dist.weights[N] == 1.0
        assert dist.weights[:N].sum() == 0.0
        assert dist.label == f"fock:{N}"

    @pytest.mark.parametrize("N", [-1, 2.5, True])
    def test_rejects_bad_numbers(self, N):
        with pytest.raises(InvalidArgumentError):
            fock_dist(N)

    def test_weights_are_read_only(self):
        with pytest.raises(ValueError):
            fock_dist(3).weights[0] = 0.5


class TestCoherent:
    def test_vacuum(self):
        dist = coherent_dist(0.0)
        assert dist.n_max == 0
        assert dist.weights[0] == pytest.approx(1.0)

    def test_unit_mean(self):
        dist = coherent_dist(1.0)
        assert dist.weights[0] == pytest.approx(math.exp(-1.0), rel=1e-14)
        assert dist.weights[1] == pytest.approx(math.exp(-1.0), rel=1e-14)

    def test_cutoff_is_smallest_meeting_tolerance(self):
        dist = coherent_dist(10.5, 1e-12)
        assert 1.0 - dist.mass < 1e-12
        assert dist.tail_bound < 1e-12
        assert poisson.sf(dist.n_max - 1, 10.5) >= 1e-12

    def test_mean_is_truncation_limited(self):
        dist = coherent_dist(10.5, 1e-12)
        assert abs(dist.mean - 10.5) < 10 * 1e-12 * dist.n_max

    def test_matches_poisson_law(self):
        dist = coherent_dist(7.3)
        expected = poisson.pmf(np.arange(dist.n_max + 1), 7.3)
        np.testing.assert_allclose(dist.weights, expected, rtol=1e-12, atol=1e-300)

    def test_large_mean_has_no_underflow(self):
        weights = poisson_weights(900.0, 1200)
        assert math.fsum(weights) == pytest.approx(1.0, abs=1e-9)

    def test_amplitudes_extend_past_cutoff(self):
        dist = coherent_dist(5.0)
        amplitudes = dist.amplitudes(dist.n_max + 3)
        assert amplitudes.size == dist.n_max + 3
        assert amplitudes[-1] > 0.0
        np.testing.assert_allclose(amplitudes[:dist.n_max + 1] ** 2, dist.weights, rtol=1e-14)

    @pytest.mark.parametrize("epsilon", [0.0, 1.0, -1e-3, 2.0])
    def test_invalid_tolerance(self, epsilon):
        with pytest.raises(InvalidToleranceError):
            coherent_dist(3.0, epsilon)

    def test_negative_mean(self):
        with pytest.raises(InvalidArgumentError):
            coherent_dist(-1.0)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.0, 50.0), st.floats(1e-13, 1e-3))
    def test_truncation_invariants(self, nbar, epsilon):
        dist = coherent_dist(nbar, epsilon)
        assert np.all(dist.weights >= 0.0)
        assert dist.tail_bound < epsilon
        assert 1.0 - dist.mass < epsilon + 1e-13


class TestThermal:
    def test_vacuum(self):
        dist = thermal_dist(0.0)
        assert dist.n_max == 0
        assert dist.weights.tolist() == [1.0]

    def test_geometric_law(self):
        dist = thermal_dist(1.0)
        np.testing.assert_allclose(dist.weights[:3], [0.5, 0.25, 0.125], rtol=1e-15)

    def test_closed_form_cutoff(self):
        ratio = 10.1 / 11.1
        n_max = thermal_cutoff(10.1, 1e-12)
        assert ratio ** (n_max + 1) < 1e-12 <= ratio ** n_max
        assert thermal_dist(10.1, 1e-12).n_max == n_max

    @pytest.mark.parametrize("nbar", [0.5, 1.0, 10.1])
    def test_tail_formula_matches_summation(self, nbar):
        weights = thermal_dist(nbar).weights
        ratio = nbar / (nbar + 1.0)
        for k in range(min(40, weights.size)):
            assert abs(ratio ** (k + 1) - (1.0 - math.fsum(weights[:k + 1]))) < 1e-14

    def test_is_mixed(self):
        dist = thermal_dist(2.0)
        assert not dist.is_pure
        with pytest.raises(InvalidArgumentError):
            dist.amplitudes()


class TestParse:
    def test_kinds(self):
        assert parse_distribution("fock:5").label == "fock:5"
        assert parse_distribution("coherent:10.5").label == "coherent:10.5"
        assert parse_distribution(" Thermal:10.1 ").kind == "thermal"

    @pytest.mark.parametrize("text", ["fock", "fock:2.5", "squeezed:1", "coherent:abc", ""])
    def test_rejects(self, text):
        with pytest.raises(InvalidArgumentError):
            parse_distribution(text)
