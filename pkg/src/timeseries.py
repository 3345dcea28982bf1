"""
Observable time series and their CSV representation

File layout: '# key=value' metadata lines, one header row 'tau,<observable>...',
then comma-separated rows printed with 17 significant digits.
"""

import logging
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError

logger = logging.getLogger(__name__)

VALUE_FORMAT = "%.17g"


@dataclass(frozen=True, eq=False)
class TimeSeries:
    tau: np.ndarray
    columns: dict[str, np.ndarray]
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=float)
        if tau.ndim != 1 or tau.size == 0:
            raise InvalidArgumentError("tau must be a non-empty one-dimensional grid")
        if np.any(np.diff(tau) <= 0):
            raise InvalidArgumentError("tau must be strictly increasing")
        columns = {}
        for name, values in self.columns.items():
            if not name or "," in name or name == "tau":
                raise InvalidArgumentError(f"invalid column name {name!r}")
            values = np.asarray(values, dtype=float)
            if values.shape != tau.shape:
                raise InvalidArgumentError(f"column {name!r} has {values.size} values for {tau.size} times")
            columns[name] = values
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "columns", columns)

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    def column(self, name: str) -> np.ndarray:
        try:
            return self.columns[name]
        except KeyError:
            raise InvalidArgumentError(
                f"no column {name!r}; available: {', '.join(self.columns) or 'none'}") from None

    def __len__(self) -> int:
        return self.tau.size


def write_csv(series: TimeSeries, path: str | Path) -> Path:
    """Write atomically: a temporary file in the target directory is renamed over `path`"""
    path = Path(path)
    if path.suffix.lower() != ".csv":
        path = path.with_name(path.name + ".csv")
    path.parent.mkdir(parents=True, exist_ok=True)
    data = np.column_stack([series.tau] + [series.columns[name] for name in series.names])
    header = ",".join(["tau"] + series.names)

    handle = tempfile.NamedTemporaryFile("w", dir=path.parent, prefix=f".{path.name}.", suffix=".tmp",
                                         delete=False, encoding="utf-8", newline="\n")
    try:
        with handle:
            for key, value in series.metadata.items():
                handle.write(f"# {key}={value}\n")
            handle.write(header + "\n")
            np.savetxt(handle, data, fmt=VALUE_FORMAT, delimiter=",")
        os.replace(handle.name, path)
    except BaseException:
        Path(handle.name).unlink(missing_ok=True)
        raise
    logger.info("wrote %d rows to %s", len(series), path)
    return path


def read_csv(path: str | Path) -> TimeSeries:
    metadata = {}
    with open(path, encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    position = 0
    while position < len(lines) and lines[position].startswith("#"):
        key, _, value = lines[position][1:].strip().partition("=")
        metadata[key.strip()] = value
        position += 1
    if position == len(lines):
        raise InvalidArgumentError(f"{path}: missing column header")
    names = [name.strip() for name in lines[position].split(",")]
    if not names or names[0] != "tau":
        raise InvalidArgumentError(f"{path}: first column must be 'tau', got {names[0]!r}")
    rows = [line for line in lines[position + 1:] if line.strip()]
    data = np.loadtxt(rows, delimiter=",", ndmin=2) if rows else np.empty((0, len(names)))
    if data.shape[1] != len(names):
        raise InvalidArgumentError(f"{path}: {data.shape[1]} values per row for {len(names)} columns")
    return TimeSeries(data[:, 0], {name: data[:, i] for i, name in enumerate(names[1:], start=1)}, metadata)
