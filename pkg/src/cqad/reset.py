"""Intrinsic reset protocol study: reset-time sweeps versus coupling
strength and the Purcell-effect cost of the reset mode at the idle point.

The reset dynamics is the resonant single-excitation evolution of the qubit
with one lossy mode; ground-state population is 1 - P_e of the qubit
subsystem. Sweeps use the closed-form solution by default, with the master
equation engine available as a cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import engine
from .analytic import pe_exact
from .model import ModeParams, QubitParams, SystemParams, TimeSeries


def default_ratios(n: int = 81) -> tuple[float, ...]:
    """Log-spaced g/kappa grid over [1e-2, 1e2]."""
    return tuple(float(x) for x in np.geomspace(1e-2, 1e2, n))


@dataclass(frozen=True)
class ResetConfig:
    gamma: float = 0.2  # qubit intrinsic, MHz
    kappa_r: float = 2.5  # reset mode linewidth, MHz
    delta_r: float = 300.0  # idle detuning, MHz
    ratios: tuple[float, ...] = field(default_factory=default_ratios)
    thresholds: tuple[float, ...] = (0.99, 0.999)
    t_max: float = 20.0  # us
    dt: float = 0.001  # us

    def __post_init__(self):
        object.__setattr__(self, "ratios", tuple(self.ratios))
        object.__setattr__(self, "thresholds", tuple(self.thresholds))
        if any(r <= 0 for r in self.ratios):
            raise ValueError("ratios must be positive")
        if any(not 0 < th < 1 for th in self.thresholds):
            raise ValueError("thresholds must lie in (0, 1)")
        if self.t_max <= 0 or self.dt <= 0:
            raise ValueError("t_max and dt must be positive")
        if self.gamma < 0 or self.kappa_r <= 0:
            raise ValueError("gamma must be >= 0 and kappa_r > 0")

    def times(self) -> np.ndarray:
        return np.arange(0.0, self.t_max + 0.5 * self.dt, self.dt)


@dataclass(frozen=True)
class ResetSweepRow:
    ratio: float
    reset_times: tuple[float, ...]  # one per threshold; inf when unreached


def reset_time(pg: TimeSeries, threshold: float) -> float:
    """Earliest sampled time after which the ground population never again
    falls below the threshold; inf when the trace cannot certify one."""
    if not 0 < threshold < 1:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    values = pg.values
    if np.any(values < -1e-6) or np.any(values > 1.0 + 1e-6):
        raise ValueError("ground population outside [0, 1]")
    below = np.nonzero(values < threshold)[0]
    if below.size == 0:
        return float(pg.times[0])
    last = int(below[-1])
    if last == values.size - 1:
        return math.inf
    return float(pg.times[last + 1])


def _pg_exact(ratio: float, cfg: ResetConfig, times: np.ndarray) -> TimeSeries:
    pe = pe_exact(times, ratio * cfg.kappa_r, cfg.gamma, cfg.kappa_r)
    return TimeSeries(times, np.clip(1.0 - pe, 0.0, 1.0), label=f"pg_ratio{ratio:g}")


def _pg_engine(ratio: float, cfg: ResetConfig, times: np.ndarray) -> TimeSeries:
    # frequencies are inert here: the resonant run pins f_q to the mode
    params = SystemParams(
        qubit=QubitParams(f01=4500.0, ec=171.0, gamma=cfg.gamma),
        modes=(ModeParams(index=1, f=4500.0, kappa=cfg.kappa_r, g=ratio * cfg.kappa_r),),
    )
    pe = engine.simulate_resonant_pe(params, resonant_index=1, times=times)
    return TimeSeries(times, np.clip(1.0 - pe.values, 0.0, 1.0), label=pe.label)


def sweep_reset(cfg: ResetConfig, method: str = "exact") -> list[ResetSweepRow]:
    """Reset time per threshold for every coupling ratio g/kappa_r."""
    if method not in ("exact", "engine"):
        raise ValueError(f"unknown method {method!r}")
    times = cfg.times()
    pg_of = _pg_exact if method == "exact" else _pg_engine
    rows = []
    for ratio in cfg.ratios:
        pg = pg_of(ratio, cfg, times)
        rows.append(
            ResetSweepRow(
                ratio=ratio,
                reset_times=tuple(reset_time(pg, th) for th in cfg.thresholds),
            )
        )
    return rows


def purcell_impact(g_r: float, kappa_r: float, delta_r: float, gamma: float) -> float:
    """Idle-point decoherence cost of the reset mode, as the ratio
    gamma_purcell / gamma = g^2 kappa / (delta^2 gamma)."""
    if delta_r == 0:
        raise ValueError("delta_r must be nonzero")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return (g_r * g_r) * kappa_r / (delta_r * delta_r * gamma)


def impact_crossings(cfg: ResetConfig, levels) -> list[float]:
    """Coupling ratios g_r/kappa_r at which the Purcell impact reaches each
    level (closed-form inversion of purcell_impact)."""
    out = []
    for level in levels:
        if level <= 0:
            raise ValueError(f"levels must be positive, got {level}")
        g_r = math.sqrt(level * cfg.gamma * cfg.delta_r**2 / cfg.kappa_r)
        out.append(g_r / cfg.kappa_r)
    return out
