"""Lindblad master-equation integration and observable extraction.

The density operator is vectorized and stepped with an adaptive explicit
Runge-Kutta method (DOP853). Trace, Hermiticity and positivity are checked
at every requested output time; violations beyond tolerance raise instead
of being silently repaired.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp

from . import operators
from .analytic import gamma_prime
from .model import TWO_PI, HilbertSpec, SystemParams, TimeSeries, validate

TRACE_TOL = 1e-8
HERM_TOL = 1e-10
EIG_TOL = -1e-8


class EvolutionError(RuntimeError):
    """Integration failure or a density-operator invariant violation."""


@dataclass(frozen=True)
class EvolveOptions:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_step: float = math.inf
    store_states: bool = True

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")


def check_density(rho: np.ndarray, where: str = "") -> None:
    """Raise EvolutionError naming the violated invariant, if any."""
    tag = f" at {where}" if where else ""
    drift = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
    if drift > TRACE_TOL:
        raise EvolutionError(f"trace drift {drift:.3e} exceeds {TRACE_TOL}{tag}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERM_TOL:
        raise EvolutionError(f"Hermiticity residual {herm:.3e} exceeds {HERM_TOL}{tag}")
    lo = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if lo < EIG_TOL:
        raise EvolutionError(f"negative eigenvalue {lo:.3e} below {EIG_TOL}{tag}")


def evolve(
    h: np.ndarray,
    collapse: list[np.ndarray],
    rho0: np.ndarray,
    times,
    opts: EvolveOptions = EvolveOptions(),
) -> list[np.ndarray]:
    """Integrate drho/dt = -i[H,rho] + sum_k D[L_k]rho and return the states
    at the requested times (which must be ascending and start at 0)."""
    times = np.asarray(times, dtype=float)
    if times.size == 0 or times[0] != 0.0:
        raise ValueError("times must be ascending and start at 0")
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise ValueError("times must be strictly ascending")
    dim = h.shape[0]
    if h.shape != (dim, dim) or rho0.shape != (dim, dim):
        raise ValueError("H and rho0 dimensions disagree")
    for L in collapse:
        if L.shape != (dim, dim):
            raise ValueError("collapse operator dimension disagrees with H")
    check_density(rho0, "t=0")

    l_dag = [L.conj().T for L in collapse]
    l_dag_l = [ld @ L for L, ld in zip(collapse, l_dag)]

    def rhs(_t, y):
        rho = y.reshape(dim, dim)
        out = -1j * (h @ rho - rho @ h)
        for L, ld, ldl in zip(collapse, l_dag, l_dag_l):
            out += L @ rho @ ld - 0.5 * (ldl @ rho + rho @ ldl)
        return out.ravel()

    if times.size == 1:
        return [rho0.copy()]
    sol = solve_ivp(
        rhs,
        (times[0], times[-1]),
        rho0.astype(complex).ravel(),
        method="DOP853",
        t_eval=times,
        rtol=opts.rel_tol,
        atol=opts.abs_tol,
        max_step=opts.max_step,
    )
    if not sol.success:
        reached = sol.t[-1] if sol.t.size else times[0]
        raise EvolutionError(f"integrator stopped at t={reached:.6g} us: {sol.message}")
    states = []
    for k in range(times.size):
        rho = sol.y[:, k].reshape(dim, dim)
        check_density(rho, f"t={times[k]:.6g} us")
        states.append(0.5 * (rho + rho.conj().T))  # discard sub-tolerance asymmetry
    return states if opts.store_states else [states[-1]]


def expect(op: np.ndarray, rho: np.ndarray) -> float:
    """Tr(rho op) for a Hermitian observable."""
    if op.shape != rho.shape:
        raise ValueError("operator and state dimensions disagree")
    if np.max(np.abs(op - op.conj().T)) > 1e-10 * max(1.0, np.max(np.abs(op))):
        raise ValueError("observable is not Hermitian")
    val = complex(np.trace(rho @ op))
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise EvolutionError(f"expectation has imaginary residue {val.imag:.3e}")
    return val.real


def simulate_resonant_pe(
    params: SystemParams,
    resonant_index: int,
    times,
    spec: HilbertSpec | None = None,
    include_spectators: bool = False,
    opts: EvolveOptions = EvolveOptions(),
) -> TimeSeries:
    """Excited-state population during resonant evolution with one mode.

    The qubit frequency is pinned to the resonant mode, the initial state is
    |e, vacuum>, and the qubit decay rate is dressed with the Purcell
    contribution of the detuned modes. Those modes start in vacuum and,
    having no exchange coupling in the two-level model, stay there, so the
    default reduced simulation (qubit + resonant mode only) is exact;
    include_spectators keeps them in the state space as a cross-check.
    """
    params = validate(params)
    res = params.mode(resonant_index)
    g_prime = gamma_prime(params, resonant_index)
    qubit = params.qubit

    if include_spectators:
        if spec is None:
            spec = HilbertSpec(qubit_levels=2, mode_levels=(2,) * len(params.modes))
        disp_params = SystemParams(qubit=replace(qubit, f01=res.f), modes=params.modes)
        h = operators.hamiltonian_dispersive(disp_params, spec, resonant_index)
        k_res = [m.index for m in params.modes].index(resonant_index)
        a_res = operators.embed(
            operators.destroy(spec.mode_levels[k_res]), k_res + 1, spec
        )
        collapse = [
            math.sqrt(TWO_PI * g_prime) * operators.embed(operators.destroy(2), 0, spec),
            math.sqrt(TWO_PI * res.kappa) * a_res,
        ]
    else:
        spec = HilbertSpec(qubit_levels=2, mode_levels=(2,))
        sm = operators.embed(operators.destroy(2), 0, spec)
        a = operators.embed(operators.destroy(2), 1, spec)
        h = TWO_PI * res.g * (sm @ a.conj().T + sm.conj().T @ a)
        collapse = [
            math.sqrt(TWO_PI * g_prime) * sm,
            math.sqrt(TWO_PI * res.kappa) * a,
        ]

    rho0 = operators.initial_state(spec, qubit_excited=True)
    sm = operators.embed(operators.destroy(2), 0, spec)
    proj_e = sm.conj().T @ sm
    states = evolve(h, collapse, rho0, times, opts)
    pe = np.array([expect(proj_e, r) for r in states])
    return TimeSeries(np.asarray(times, dtype=float), pe, label=f"pe_mode{resonant_index}")
