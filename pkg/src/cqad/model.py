"""Shared domain types and unit conventions.

Unit convention used by every module in this package:

* frequencies, rates and couplings are linear quantities in MHz
  (stored value = angular value / 2 pi),
* time is in microseconds,
* a population decay rate r therefore damps as exp(-2 pi r t), so
  T1 = 1 / (2 pi r),
* Hamiltonian matrices are in rad/us, collapse operators in sqrt(rad/us).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class QubitParams:
    """Transmon parameters: f01 and anharmonicity ec in MHz, population
    decay rate gamma in MHz (T1 = 1/(2 pi gamma))."""

    f01: float
    ec: float
    gamma: float = 0.0


@dataclass(frozen=True)
class ModeParams:
    """One mechanical mode: 1-based index, frequency f and linewidth kappa
    in MHz, signed coupling g in MHz."""

    index: int
    f: float
    kappa: float
    g: float


@dataclass(frozen=True)
class SystemParams:
    """Qubit plus an ordered list of mechanical modes."""

    qubit: QubitParams
    modes: tuple[ModeParams, ...]

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))

    def mode(self, index: int) -> ModeParams:
        for m in self.modes:
            if m.index == index:
                return m
        raise ValueError(f"modes: no mode with index {index}")


def validate(params: SystemParams) -> SystemParams:
    """Check all invariants; return params unchanged or raise ValueError
    naming the first violated field."""
    q = params.qubit
    if not q.f01 > 0:
        raise ValueError(f"qubit.f01: must be positive, got {q.f01}")
    if not q.ec > 0:
        raise ValueError(f"qubit.ec: must be positive, got {q.ec}")
    if q.gamma < 0:
        raise ValueError(f"qubit.gamma: must be non-negative, got {q.gamma}")
    seen_idx: set[int] = set()
    prev_idx = 0
    for pos, m in enumerate(params.modes):
        path = f"modes[{pos}]"
        if m.index < 1:
            raise ValueError(f"{path}.index: must be >= 1, got {m.index}")
        if m.index in seen_idx:
            raise ValueError(f"{path}.index: duplicate mode index {m.index}")
        if m.index <= prev_idx:
            raise ValueError(f"{path}.index: indices must be ascending")
        seen_idx.add(m.index)
        prev_idx = m.index
        if not m.f > 0:
            raise ValueError(f"{path}.f: must be positive, got {m.f}")
        if not m.kappa > 0:
            raise ValueError(f"{path}.kappa: non-positive rate {m.kappa}")
    freqs = [m.f for m in params.modes]
    for i in range(len(freqs)):
        for j in range(i + 1, len(freqs)):
            if freqs[i] == freqs[j]:
                raise ValueError(
                    f"modes[{j}].f: duplicate mode frequency {freqs[j]}"
                )
    return params


@dataclass(frozen=True)
class HilbertSpec:
    """Truncation of the composite Hilbert space: qubit levels first, then
    one truncation per mode. Total dimension is capped."""

    qubit_levels: int = 2
    mode_levels: tuple[int, ...] = ()
    dim_cap: int = 4096

    def __post_init__(self):
        object.__setattr__(self, "mode_levels", tuple(self.mode_levels))
        if self.qubit_levels < 2:
            raise ValueError(f"qubit_levels: must be >= 2, got {self.qubit_levels}")
        for k, n in enumerate(self.mode_levels):
            if n < 2:
                raise ValueError(f"mode_levels[{k}]: must be >= 2, got {n}")
        if self.total_dim > self.dim_cap:
            raise ValueError(
                f"total dimension {self.total_dim} exceeds cap {self.dim_cap}"
            )

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.qubit_levels, *self.mode_levels)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly labelled sampled trace: times in us (strictly ascending),
    real values of equal length."""

    times: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or v.ndim != 1 or t.size != v.size:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if t.size == 0:
            raise ValueError("empty series")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("times must be strictly ascending")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return int(self.times.size)


# --- SystemParams configuration file (hierarchical JSON) ---

def params_to_dict(params: SystemParams) -> dict:
    return {
        "qubit": {
            "f01_mhz": params.qubit.f01,
            "ec_mhz": params.qubit.ec,
            "gamma_mhz": params.qubit.gamma,
        },
        "modes": [
            {"index": m.index, "f_mhz": m.f, "kappa_mhz": m.kappa, "g_mhz": m.g}
            for m in params.modes
        ],
    }


def params_from_dict(data: dict) -> SystemParams:
    try:
        q = data["qubit"]
        qubit = QubitParams(
            f01=float(q["f01_mhz"]),
            ec=float(q["ec_mhz"]),
            gamma=float(q["gamma_mhz"]),
        )
        modes = tuple(
            ModeParams(
                index=int(m["index"]),
                f=float(m["f_mhz"]),
                kappa=float(m["kappa_mhz"]),
                g=float(m["g_mhz"]),
            )
            for m in data["modes"]
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed system config: missing key {exc}") from exc
    return validate(SystemParams(qubit=qubit, modes=modes))


def dumps_params(params: SystemParams) -> str:
    """Canonical serialization; parse -> dump round-trips byte-identically."""
    return json.dumps(params_to_dict(params), indent=2, sort_keys=True) + "\n"


def loads_params(text: str) -> SystemParams:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed system config: {exc}") from exc
    return params_from_dict(data)


def load_params(path: str | Path) -> SystemParams:
    return loads_params(Path(path).read_text())


def save_params(params: SystemParams, path: str | Path) -> None:
    Path(path).write_text(dumps_params(params))
