"""
Scenario description: model, field preparations, grid and observables
"""

import logging
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Literal

import numpy as np

from .analytic import DEFAULT_DELTA_OVER_G1, ModelParams, rephasing_time
from .errors import RamanscopeError, ScenarioError
from .semiclassical import period
from .states import DEFAULT_EPSILON, PhotonDistribution, parse_distribution

logger = logging.getLogger(__name__)

DEFAULT_STEPS = 4000
QUANTUM_PERIODS = 2.5
SEMICLASSICAL_PERIODS = 3.0

Model = Literal["quantum", "semiclassical"]
MODELS: tuple[str, ...] = ("quantum", "semiclassical")
OBSERVABLES: tuple[str, ...] = ("inversion", "negativity", "linear-entropy")
ENTANGLEMENT_OBSERVABLES = ("negativity", "linear-entropy")


@dataclass(frozen=True)
class Scenario:
    """One simulation request.

    `r` is g2/g1 for the quantum model and r' = |Omega_L|/g for the semiclassical
    one. `tau_max = None` picks a default span from the model's natural period. `note`
    is free text copied into the output metadata.
    """
    model: Model = "quantum"
    mode1: str = "fock:5"
    mode2: str | None = "coherent:5"
    r: float = 1.0
    delta_over_g1: float = DEFAULT_DELTA_OVER_G1
    observables: tuple[str, ...] = ("inversion",)
    tau_max: float | None = None
    steps: int = DEFAULT_STEPS
    epsilon: float = DEFAULT_EPSILON
    n1_max: int | None = None
    n2_max: int | None = None
    stark_shifts: bool = True
    name: str = "custom"
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "observables", tuple(self.observables))
        if self.model == "semiclassical":
            # mode 2 is a classical drive described by r alone
            object.__setattr__(self, "mode2", None)
        if self.model not in MODELS:
            raise ScenarioError(f"model must be one of {', '.join(MODELS)}, got {self.model!r}")
        if not self.observables:
            raise ScenarioError("at least one observable is required")
        unknown = [name for name in self.observables if name not in OBSERVABLES]
        if unknown:
            raise ScenarioError(f"unknown observables {unknown}; choose from {', '.join(OBSERVABLES)}")
        if len(set(self.observables)) != len(self.observables):
            raise ScenarioError(f"observables listed twice: {list(self.observables)}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ScenarioError(f"steps must be an integer >= 2, got {self.steps!r}")
        if self.tau_max is not None and not (math.isfinite(self.tau_max) and self.tau_max > 0):
            raise ScenarioError(f"tau_max must be positive, got {self.tau_max!r}")
        if not (math.isfinite(self.r) and self.r > 0):
            raise ScenarioError(f"r must be positive, got {self.r!r}")
        for name in ("n1_max", "n2_max"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ScenarioError(f"{name} must be >= 1, got {value!r}")

        # parse once so malformed specs fail here
        try:
            dist1, dist2 = self.distributions()
        except RamanscopeError as exc:
            raise ScenarioError(str(exc)) from exc

        wanted = [name for name in self.observables if name in ENTANGLEMENT_OBSERVABLES]
        if self.model == "semiclassical":
            if dist1.kind != "fock":
                raise ScenarioError(f"the semiclassical model takes mode 1 in a Fock state, got {self.mode1!r}")
            if wanted and dist1.parameter < 1:
                raise ScenarioError(f"{', '.join(wanted)} needs N >= 1 photons in mode 1")
            return

        if dist2 is None:
            raise ScenarioError("the quantum model needs a mode-2 preparation")
        if wanted:
            if dist1.kind != "fock" or dist1.parameter < 1:
                raise ScenarioError(
                    f"{', '.join(wanted)} needs mode 1 in a Fock state with N >= 1 "
                    f"(atom-mode 1 state after tracing out mode 2), got {self.mode1!r}")
            if not dist2.is_pure:
                raise ScenarioError(
                    f"{', '.join(wanted)} needs mode 2 in a pure preparation (coherent or fock), got {self.mode2!r}")

    def distributions(self) -> tuple[PhotonDistribution, PhotonDistribution | None]:
        dist1 = parse_distribution(self.mode1, self.epsilon)
        dist2 = None if self.mode2 is None else parse_distribution(self.mode2, self.epsilon)
        return dist1, dist2

    @property
    def fock_number(self) -> int:
        return int(parse_distribution(self.mode1, self.epsilon).parameter)

    def model_params(self) -> ModelParams:
        return ModelParams.from_ratio(self.r, self.delta_over_g1, stark_shifts=self.stark_shifts)

    def natural_period(self) -> float:
        """Revival period (quantum) or oscillation period (semiclassical) in scaled time"""
        if self.model == "semiclassical":
            return period(self.fock_number, self.r)
        if not self.stark_shifts:
            raise ScenarioError("without Stark shifts there is no revival period; give tau_max explicitly")
        dist1, dist2 = self.distributions()
        params = self.model_params()
        spread = [mode for mode, dist in ((1, dist1), (2, dist2)) if dist.kind != "fock"]
        return max(rephasing_time(params, mode) for mode in spread or [1])

    def resolved_tau_max(self) -> float:
        if self.tau_max is not None:
            return float(self.tau_max)
        periods = SEMICLASSICAL_PERIODS if self.model == "semiclassical" else QUANTUM_PERIODS
        return periods * self.natural_period()

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.resolved_tau_max(), int(self.steps))

    def metadata(self) -> dict[str, str]:
        """All scenario fields as strings, for self-describing output files"""
        values = asdict(self)
        values["observables"] = ",".join(self.observables)
        values["tau_max"] = repr(self.resolved_tau_max())
        values["time_unit"] = "g1*t" if self.model == "quantum" else "g*|Omega_L|*t/delta"
        return {key: "" if value is None else str(value) for key, value in values.items()}

    def with_overrides(self, **changes) -> "Scenario":
        changes = {key: value for key, value in changes.items() if value is not None}
        return replace(self, **changes)


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ScenarioError(f"expected a boolean, got {text!r}")


def _optional(convert):
    def parse(text: str):
        return None if text.strip().lower() in ("", "none") else convert(text)
    return parse


_CONVERTERS = {
    "model": str.strip,
    "mode1": str.strip,
    "mode2": _optional(str.strip),
    "r": float,
    "delta_over_g1": float,
    "observables": lambda text: tuple(part.strip() for part in text.split(",") if part.strip()),
    "tau_max": _optional(float),
    "steps": int,
    "epsilon": float,
    "n1_max": _optional(int),
    "n2_max": _optional(int),
    "stark_shifts": _parse_bool,
    "name": str.strip,
    "note": str.strip,
}


def scenario_fields(values: dict[str, str]) -> dict:
    """Convert string values keyed like the command-line flags into Scenario field values"""
    known = {f.name for f in fields(Scenario)}
    converted = {}
    for raw_key, text in values.items():
        key = raw_key.strip().replace("-", "_")
        if key not in known:
            raise ScenarioError(f"unknown scenario key {raw_key!r}")
        try:
            converted[key] = _CONVERTERS[key](text)
        except ValueError as exc:
            raise ScenarioError(f"bad value for {raw_key!r}: {text!r}") from exc
    return converted


def load_config(path: str | Path) -> dict[str, str]:
    """Read a key=value scenario file; '#' starts a comment"""
    values = {}
    with open(path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise ScenarioError(f"{path}:{number}: expected key=value, got {line!r}")
            values[key.strip()] = value.strip()
    logger.info("loaded %d scenario keys from %s", len(values), path)
    return values
