"""Closed-form physics: dispersive shifts, Purcell rates, damped
single-excitation dynamics, the sinusoidal coupling profile, and coupling
regime classification.

All rates/frequencies linear MHz, time in us (see model module).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import TWO_PI, SystemParams

POLE_EPS_MHZ = 1.0

OVERDAMPED_WEAK = "overdamped-weak"
TRANSITION = "transition"
STRONG = "strong"
STRONG_FACTOR = 10.0


def chi_dispersive(g: float, delta: float, ec: float, pole_eps: float = POLE_EPS_MHZ) -> float:
    """Transmon dispersive shift chi = -g^2 ec / (delta (delta - ec)), MHz.

    delta = f01 - f_mode. Positive exactly in the straddling window
    0 < delta < ec. Raises near the poles delta = 0 and delta = ec.
    """
    if abs(delta) < pole_eps:
        raise ValueError(f"detuning {delta} MHz within {pole_eps} MHz of the delta=0 pole")
    if abs(delta - ec) < pole_eps:
        raise ValueError(
            f"detuning {delta} MHz within {pole_eps} MHz of the delta=ec pole"
        )
    return -(g * g) * ec / (delta * (delta - ec))


def stark_shift(chi: float, nbar: float) -> float:
    """Qubit frequency shift 2*chi*nbar for mean phonon number nbar."""
    if nbar < 0:
        raise ValueError(f"nbar must be non-negative, got {nbar}")
    return 2.0 * chi * nbar


def purcell_idle(params: SystemParams, f_idle: float, gamma0: float) -> float:
    """Multimode Purcell-limited decay rate at the idle frequency:
    sum_m (g_m / (f_m - f_idle))^2 kappa_m + gamma0, all MHz."""
    total = gamma0
    for m in params.modes:
        delta = m.f - f_idle
        if abs(delta) < 1e-9:
            raise ValueError(f"f_idle resonant with mode {m.index} at {m.f} MHz")
        total += (m.g / delta) ** 2 * m.kappa
    return total


def gamma_prime(params: SystemParams, resonant_index: int) -> float:
    """Qubit decay rate when parked on one mode: the intrinsic rate plus the
    Purcell contribution of every other mode, MHz."""
    res = params.mode(resonant_index)
    total = params.qubit.gamma
    for m in params.modes:
        if m.index == resonant_index:
            continue
        delta = m.f - res.f
        if abs(delta) < 1e-9:
            raise ValueError(
                f"mode {m.index} degenerate with resonant mode {resonant_index}"
            )
        total += (m.g / delta) ** 2 * m.kappa
    return total


def pe_paper(t, g: float, gamma_p: float, kappa: float):
    """Transition-regime excited-state probability in product form:
    cos^2(2 pi g t) times exp[-2 pi t (gamma'+kappa)/2
    + ((kappa-gamma')/(4g)) sin(4 pi g t)].

    Approximate: the oscillation sits at g, not at the damping-shifted Rabi
    frequency (see pe_exact). Requires g != 0; the g -> 0 limit is
    exp(-2 pi gamma' t) and must be taken by the caller.
    """
    if g == 0:
        raise ValueError("pe_paper undefined at g=0; use the exponential limit")
    if gamma_p < 0 or kappa < 0:
        raise ValueError("rates must be non-negative")
    t = np.asarray(t, dtype=float)
    envelope = np.exp(
        -TWO_PI * t * (gamma_p + kappa) / 2.0
        + ((kappa - gamma_p) / (4.0 * g)) * np.sin(2.0 * TWO_PI * g * t)
    )
    out = envelope * np.cos(TWO_PI * g * t) ** 2
    return out if out.ndim else float(out)


def pe_exact(t, g: float, gamma_p: float, kappa: float):
    """Exact damped Jaynes-Cummings excited-state probability in the
    single-excitation sector.

    Amplitudes obey c_e' = -(Gq/2) c_e - i G c_1, c_1' = -(Gk/2) c_1 - i G c_e
    with Gq = 2 pi gamma_p, Gk = 2 pi kappa, G = 2 pi g. The 2x2 generator
    gives c_e(t) = exp(-(Gq+Gk)t/4) [cosh(mu t) + (d/mu) sinh(mu t)] with
    d = (Gk-Gq)/4 and mu = sqrt(d^2 - G^2); both the underdamped (mu
    imaginary) and overdamped (mu real) branches are covered continuously,
    including the exceptional point mu = 0 where the bracket becomes 1 + d t.
    """
    if gamma_p < 0 or kappa < 0:
        raise ValueError("rates must be non-negative")
    t = np.asarray(t, dtype=float)
    ga = math.pi * gamma_p  # Gq/2 in rad/us
    gb = math.pi * kappa
    big_g = TWO_PI * g
    mean = 0.5 * (ga + gb)
    d = 0.5 * (gb - ga)
    mu = np.sqrt(complex(d * d - big_g * big_g))
    if mu == 0:
        amp = 1.0 + d * t
    else:
        z = mu * t
        amp = np.cosh(z) + d * np.sinh(z) / mu
    out = np.exp(-2.0 * mean * t) * np.abs(amp) ** 2
    return out if out.ndim else float(out)


def coupling_profile(m: int, g0: float, phi: float) -> float:
    """Mode-index dependence of the coupling for a transducer near the
    cavity midpoint: g0 * sin(pi m / 2 + phi). Period 4 in m."""
    if m < 1:
        raise ValueError(f"mode index must be >= 1, got {m}")
    return g0 * math.sin(math.pi * m / 2.0 + phi)


@dataclass(frozen=True)
class RegimeLabel:
    """Coupling regime with the oscillation discriminant g - |kappa-gamma'|/4
    (negative means no Rabi oscillation: the exact solution is overdamped)."""

    regime: str
    discriminant: float


def classify_regime(g: float, gamma_p: float, kappa: float) -> RegimeLabel:
    """Classify the damped Jaynes-Cummings dynamics.

    overdamped-weak: g below the exceptional point |kappa - gamma'|/4 (the
    excited population decays without oscillating); strong: g at least
    10x the larger dissipation rate; transition: in between.
    """
    if gamma_p < 0 or kappa < 0:
        raise ValueError("rates must be non-negative")
    ep = abs(kappa - gamma_p) / 4.0
    disc = g - ep
    if g < ep:
        return RegimeLabel(OVERDAMPED_WEAK, disc)
    if g >= STRONG_FACTOR * max(gamma_p, kappa):
        return RegimeLabel(STRONG, disc)
    return RegimeLabel(TRANSITION, disc)
