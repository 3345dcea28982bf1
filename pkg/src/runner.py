"""
Scenario evaluation and analytic-versus-oracle verification
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytic, oracle, semiclassical
from .errors import ScenarioError, VerificationError
from .scenario import Scenario
from .timeseries import TimeSeries

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
CHUNKS_PER_WORKER = 4


def _quantum_columns(scenario: Scenario, tau: np.ndarray) -> dict[str, np.ndarray]:
    dist1, dist2 = scenario.distributions()
    params = scenario.model_params()
    columns = {}
    reduced = None
    for name in scenario.observables:
        if name == "inversion":
            columns[name] = analytic.atomic_inversion(dist1, dist2, params, tau)
            continue
        N = int(dist1.parameter)
        if dist2.kind == "coherent":
            if name == "negativity":
                columns[name] = analytic.negativity(N, dist2.parameter, params, tau, scenario.epsilon)
            else:
                columns[name] = analytic.linear_entropy(N, dist2.parameter, params, tau, scenario.epsilon)
            continue
        if reduced is None:
            reduced = analytic.reduced_atom_mode1_field(N, dist2, params, tau)
        columns[name] = reduced.negativity if name == "negativity" else reduced.atomic_linear_entropy
    return columns


_SEMICLASSICAL = {
    "inversion": semiclassical.inversion_sc,
    "negativity": semiclassical.negativity_sc,
    "linear-entropy": semiclassical.linear_entropy_sc,
}


def _columns(scenario: Scenario, tau: np.ndarray) -> dict[str, np.ndarray]:
    if scenario.model == "semiclassical":
        N = scenario.fock_number
        return {name: np.asarray(_SEMICLASSICAL[name](N, scenario.r, tau)) for name in scenario.observables}
    return {name: np.asarray(values) for name, values in _quantum_columns(scenario, tau).items()}


def run_scenario(scenario: Scenario, workers: int = 1) -> TimeSeries:
    """Evaluate every requested observable on the scenario's uniform grid.

    With several workers the grid is split into contiguous chunks evaluated in
    a thread pool; results are reassembled in grid order.
    """
    tau = scenario.grid()
    logger.info("running %s (%s) on %d points up to tau=%g", scenario.name, scenario.model, tau.size, tau[-1])
    if workers <= 1:
        columns = _columns(scenario, tau)
    else:
        chunks = [chunk for chunk in np.array_split(tau, workers * CHUNKS_PER_WORKER) if chunk.size]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda chunk: _columns(scenario, chunk), chunks))
        columns = {name: np.concatenate([part[name] for part in parts]) for name in scenario.observables}
    logger.info("finished %s", scenario.name)
    return TimeSeries(tau, columns, scenario.metadata())


@dataclass(frozen=True)
class VerificationReport:
    scenario: str
    deviations: dict[str, float]
    tolerance: float
    cutoffs: tuple[int, int]

    @property
    def passed(self) -> bool:
        return all(value <= self.tolerance for value in self.deviations.values())

    def failures(self) -> list[str]:
        return [name for name, value in self.deviations.items() if value > self.tolerance]

    def lines(self) -> list[str]:
        rows = [f"{self.scenario}: n1_max={self.cutoffs[0]} n2_max={self.cutoffs[1]} tolerance={self.tolerance:.1e}"]
        for name, value in self.deviations.items():
            status = "ok" if value <= self.tolerance else "FAIL"
            rows.append(f"  {name:<16} max |analytic - oracle| = {value:.3e}  {status}")
        return rows

    def raise_for_failure(self):
        if not self.passed:
            raise VerificationError(f"{self.scenario}: deviation above {self.tolerance:.1e} for "
                                    f"{', '.join(self.failures())}")


def oracle_columns(scenario: Scenario, tau: np.ndarray, n1_max: int | None = None,
                   n2_max: int | None = None) -> tuple[dict[str, np.ndarray], tuple[int, int]]:
    """Observables from brute-force evolution on the truncated space"""
    dist1, dist2 = scenario.distributions()
    state = oracle.initial_state(dist1, dist2, n1_max, n2_max)
    _, d1, d2 = state.dims
    blocks = oracle.build_blocks(scenario.model_params(), d1 - 1, d2 - 1)
    columns = {}
    if "inversion" in scenario.observables:
        columns["inversion"] = oracle.inversion_series(state, blocks, tau)

    entangled = [name for name in scenario.observables if name != "inversion"]
    if entangled:
        values = {name: np.empty(tau.size) for name in entangled}
        for i, t in enumerate(tau):
            evolved = oracle.evolve_state(state, blocks, t)
            if "negativity" in values:
                values["negativity"][i] = oracle.pt_negativity(oracle.partial_trace(evolved, (0, 1)))
            if "linear-entropy" in values:
                values["linear-entropy"][i] = oracle.matrix_linear_entropy(oracle.partial_trace(evolved, (0,)))
        columns.update(values)
    return {name: columns[name] for name in scenario.observables}, (d1 - 1, d2 - 1)


def verify(scenario: Scenario, n1_max: int | None = None, n2_max: int | None = None,
           tolerance: float = DEFAULT_TOLERANCE, workers: int = 1) -> VerificationReport:
    """Run the closed forms and the oracle on the same grid and compare them"""
    if scenario.model != "quantum":
        raise ScenarioError("verification compares against the quantum oracle; use model=quantum")
    analytic_series = run_scenario(scenario, workers)
    expected, cutoffs = oracle_columns(scenario, analytic_series.tau,
                                       n1_max if n1_max is not None else scenario.n1_max,
                                       n2_max if n2_max is not None else scenario.n2_max)
    deviations = {name: float(np.max(np.abs(analytic_series.column(name) - expected[name])))
                  for name in scenario.observables}
    report = VerificationReport(scenario.name, deviations, tolerance, cutoffs)
    logger.info("verification of %s %s", scenario.name, "passed" if report.passed else "failed")
    return report
