"""Operators on the truncated composite Hilbert space.

Tensor factor order is fixed: qubit first, then modes ascending by index.
Basis index 0 of the qubit is the ground state, so the qubit lowering
operator equals destroy(qubit_levels). With sigma_z = diag(+1, -1) in the
(g, e) ordering, the excited state has <sigma_z> = -1; the state-dependent
mode shift is built so that the qubit transition moves by +2*chi per phonon.
"""
from __future__ import annotations

import math

import numpy as np

from .analytic import chi_dispersive
from .model import TWO_PI, HilbertSpec, SystemParams, validate


def destroy(levels: int) -> np.ndarray:
    """Bosonic lowering operator on `levels` Fock states."""
    if levels < 2:
        raise ValueError(f"levels must be >= 2, got {levels}")
    a = np.zeros((levels, levels), dtype=complex)
    for n in range(1, levels):
        a[n - 1, n] = math.sqrt(n)
    return a


def embed(op: np.ndarray, slot: int, spec: HilbertSpec) -> np.ndarray:
    """Place `op` on tensor factor `slot` (0 = qubit, k = mode k), identity
    elsewhere."""
    dims = spec.dims
    if not 0 <= slot < len(dims):
        raise ValueError(f"slot {slot} out of range for {len(dims)} factors")
    if op.shape != (dims[slot], dims[slot]):
        raise ValueError(
            f"operator dim {op.shape[0]} does not match slot dim {dims[slot]}"
        )
    out = np.array([[1.0 + 0.0j]])
    for k, d in enumerate(dims):
        out = np.kron(out, op if k == slot else np.eye(d, dtype=complex))
    return out


def hamiltonian_full(
    params: SystemParams, spec: HilbertSpec, frame_freq: float
) -> np.ndarray:
    """Multimode transmon-SAWR Hamiltonian in a frame rotating at
    `frame_freq` (MHz), in rad/us:

        2 pi (f_q - f0) b'b - pi ec b'b'bb
        + sum_m [2 pi (f_m - f0) a'a + 2 pi g_m (b a' + b' a)]
    """
    params = validate(params)
    if len(spec.mode_levels) != len(params.modes):
        raise ValueError(
            f"spec has {len(spec.mode_levels)} modes, params has {len(params.modes)}"
        )
    b = embed(destroy(spec.qubit_levels), 0, spec)
    bd = b.conj().T
    nq = bd @ b
    h = TWO_PI * (params.qubit.f01 - frame_freq) * nq
    h -= math.pi * params.qubit.ec * (bd @ bd @ b @ b)
    for k, m in enumerate(params.modes):
        a = embed(destroy(spec.mode_levels[k]), k + 1, spec)
        ad = a.conj().T
        h += TWO_PI * (m.f - frame_freq) * (ad @ a)
        h += TWO_PI * m.g * (b @ ad + bd @ a)
    return h


def hamiltonian_dispersive(
    params: SystemParams,
    spec: HilbertSpec,
    resonant_index: int,
    frame_freq: float | None = None,
) -> np.ndarray:
    """Two-level model with an exchange coupling to one mode and
    state-dependent shifts 2 pi chi_n per phonon on the others.

    The qubit frequency is params.qubit.f01 (the caller sets it to the mode
    frequency for resonant evolution); chi_n uses detuning f01 - f_n.
    Frame defaults to the resonant mode frequency.
    """
    params = validate(params)
    if spec.qubit_levels != 2:
        raise ValueError(f"dispersive model needs qubit_levels=2, got {spec.qubit_levels}")
    if len(spec.mode_levels) != len(params.modes):
        raise ValueError(
            f"spec has {len(spec.mode_levels)} modes, params has {len(params.modes)}"
        )
    res = params.mode(resonant_index)
    if frame_freq is None:
        frame_freq = res.f
    sm = embed(destroy(2), 0, spec)
    sp = sm.conj().T
    # qubit transition raised by +2 pi (f_q - f0) relative to ground
    zq = 2.0 * (sp @ sm) - embed(np.eye(2, dtype=complex), 0, spec)
    h = math.pi * (params.qubit.f01 - frame_freq) * zq
    for k, m in enumerate(params.modes):
        a = embed(destroy(spec.mode_levels[k]), k + 1, spec)
        ad = a.conj().T
        h += TWO_PI * (m.f - frame_freq) * (ad @ a)
        if m.index == resonant_index:
            h += TWO_PI * m.g * (sm @ ad + sp @ a)
        else:
            chi = chi_dispersive(m.g, params.qubit.f01 - m.f, params.qubit.ec)
            h += TWO_PI * chi * (zq @ ad @ a)
    return h


def collapse_ops(
    params: SystemParams, spec: HilbertSpec, qubit_gamma: float | None = None
) -> list[np.ndarray]:
    """One collapse operator per dissipation channel, for the standard
    dissipator D[L]rho = L rho L' - (L'L rho + rho L'L)/2:

        sqrt(2 pi gamma) * (qubit lowering),  sqrt(2 pi kappa_m) * a_m.

    Channels with zero rate are omitted. `qubit_gamma` overrides the stored
    intrinsic rate (used for the Purcell-dressed rate of the reduced model).
    """
    params = validate(params)
    if len(spec.mode_levels) != len(params.modes):
        raise ValueError(
            f"spec has {len(spec.mode_levels)} modes, params has {len(params.modes)}"
        )
    gamma = params.qubit.gamma if qubit_gamma is None else qubit_gamma
    if gamma < 0:
        raise ValueError(f"qubit_gamma: must be non-negative, got {gamma}")
    ops = []
    if gamma > 0:
        ops.append(math.sqrt(TWO_PI * gamma) * embed(destroy(spec.qubit_levels), 0, spec))
    for k, m in enumerate(params.modes):
        ops.append(
            math.sqrt(TWO_PI * m.kappa) * embed(destroy(spec.mode_levels[k]), k + 1, spec)
        )
    return ops


def initial_state(spec: HilbertSpec, qubit_excited: bool) -> np.ndarray:
    """Pure density operator |e,0,...,0><e,0,...,0| (or the global ground
    state): qubit excited flag, all modes in vacuum."""
    dim = spec.total_dim
    # index of |q=0 or 1, 0, ..., 0> in the row-major tensor layout
    idx = int(np.prod(spec.mode_levels)) if qubit_excited else 0
    rho = np.zeros((dim, dim), dtype=complex)
    rho[idx, idx] = 1.0
    return rho


def excitation_number(spec: HilbertSpec) -> np.ndarray:
    """Total excitation operator b'b + sum_m a'a (conserved by the RWA
    Hamiltonians up to dissipation)."""
    q = destroy(spec.qubit_levels)
    n = embed(q.conj().T @ q, 0, spec)
    for k, levels in enumerate(spec.mode_levels):
        a = destroy(levels)
        n += embed(a.conj().T @ a, k + 1, spec)
    return n
