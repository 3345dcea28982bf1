import numpy as np
import pytest

from src.errors import ScenarioError, TruncationError, VerificationError
from src.presets import get_preset
from src.runner import VerificationReport, oracle_columns, run_scenario, verify
from src.scenario import Scenario
from src.semiclassical import inversion_sc, negativity_sc


class TestRunScenario:
    @pytest.mark.parametrize("name", ["fig1a", "fig1b", "fig2", "fig3", "fig4"])
    def test_initial_values(self, name):
        series = run_scenario(get_preset(name).with_overrides(steps=2))
        assert series.tau[0] == 0.0
        assert series.column("inversion")[0] == pytest.approx(-1.0, abs=1e-15)
        for column in ("negativity", "linear-entropy"):
            if column in series.columns:
                assert series.column(column)[0] == pytest.approx(0.0, abs=1e-15)

    def test_columns_follow_observables(self):
        scenario = get_preset("fig3").with_overrides(steps=20, observables=("linear-entropy", "inversion"))
        series = run_scenario(scenario)
        assert series.names == ["linear-entropy", "inversion"]
        assert series.metadata["observables"] == "linear-entropy,inversion"

    def test_workers_agree(self):
        scenario = get_preset("fig3").with_overrides(steps=401)
        single = run_scenario(scenario)
        pooled = run_scenario(scenario, workers=3)
        np.testing.assert_array_equal(pooled.tau, single.tau)
        for name in single.names:
            np.testing.assert_allclose(pooled.column(name), single.column(name), rtol=0, atol=1e-14)

    def test_semiclassical(self):
        series = run_scenario(get_preset("fig4").with_overrides(steps=300))
        np.testing.assert_array_equal(series.column("inversion"), inversion_sc(2, 1.41, series.tau))
        np.testing.assert_array_equal(series.column("negativity"), negativity_sc(2, 1.41, series.tau))

    def test_fock_mode2_has_no_negativity(self):
        scenario = Scenario(mode2="fock:4", observables=("negativity", "linear-entropy"), tau_max=40.0, steps=81)
        series = run_scenario(scenario)
        assert not series.column("negativity").any()
        assert series.column("linear-entropy").max() > 0.3


class TestVerify:
    def test_entanglement_preset(self):
        report = verify(get_preset("fig3").with_overrides(steps=40))
        assert report.passed, report.lines()
        assert set(report.deviations) == {"inversion", "negativity", "linear-entropy"}
        assert report.lines()[0].startswith("fig3: n1_max=6")

    def test_fock_fields(self):
        scenario = Scenario(mode1="fock:3", mode2="fock:2", r=0.9,
                            observables=("inversion", "negativity", "linear-entropy"), tau_max=100.0, steps=30)
        assert verify(scenario).passed

    def test_thermal_inversion(self):
        assert verify(get_preset("fig1b").with_overrides(steps=60, tau_max=80.0)).passed

    def test_explicit_cutoffs(self):
        scenario = get_preset("fig2").with_overrides(steps=10)
        _, cutoffs = oracle_columns(scenario, scenario.grid(), 9, 30)
        assert cutoffs == (9, 30)

    def test_small_cutoff(self):
        with pytest.raises(TruncationError):
            verify(get_preset("fig2").with_overrides(steps=10), n2_max=2)

    def test_semiclassical_is_rejected(self):
        with pytest.raises(ScenarioError):
            verify(get_preset("fig4"))


class TestReport:
    def test_failure(self):
        report = VerificationReport("demo", {"inversion": 1e-12, "negativity": 2e-6}, 1e-9, (6, 20))
        assert not report.passed
        assert report.failures() == ["negativity"]
        assert report.lines()[2].endswith("FAIL")
        with pytest.raises(VerificationError, match="negativity"):
            report.raise_for_failure()

    def test_success(self):
        report = VerificationReport("demo", {"inversion": 1e-12}, 1e-9, (6, 20))
        report.raise_for_failure()
        assert report.lines()[1].endswith("ok")
