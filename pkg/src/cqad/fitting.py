"""Least-squares parameter extraction for measured and synthetic traces.

The core is a small deterministic Levenberg-Marquardt loop (damped
Gauss-Newton with a finite-difference Jacobian). Convergence: relative cost
change below 1e-10 or gradient infinity-norm below 1e-12. On top of it sit
the analysis fits: exponential decay, damped resonant evolution, the
sinusoidal coupling profile, and the (closed-form) Purcell-rate line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import find_peaks

from .analytic import coupling_profile, pe_paper
from .model import TWO_PI, SystemParams, TimeSeries

COST_TOL = 1e-10
GRAD_TOL = 1e-12
MAX_ITER = 200


class FitError(RuntimeError):
    """Ill-posed fit input or a degenerate/singular problem."""


@dataclass(frozen=True)
class FitResult:
    param_names: tuple[str, ...]
    values: np.ndarray
    stderr: np.ndarray
    residual_rms: float
    iterations: int
    converged: bool
    note: str = ""

    def __getitem__(self, name: str) -> float:
        return float(self.values[self.param_names.index(name)])


def _jacobian(model, t, theta, bounds):
    n, p = t.size, theta.size
    jac = np.empty((n, p))
    f0 = model(t, *theta)
    for j in range(p):
        step = 1e-7 * max(abs(theta[j]), 1.0)
        up = theta.copy()
        up[j] += step
        lo_b, hi_b = bounds[j]
        if up[j] > hi_b:  # one-sided step away from the bound
            up[j] = theta[j] - step
            jac[:, j] = (f0 - model(t, *up)) / step
        else:
            jac[:, j] = (model(t, *up) - f0) / step
    return jac


def least_squares(
    model,
    data: TimeSeries,
    init,
    bounds=None,
    *,
    param_names=None,
    max_iter: int = MAX_ITER,
) -> FitResult:
    """Fit model(t, *theta) to data by damped Gauss-Newton descent.

    Bounds are closed intervals (use +-inf for open sides); steps are
    projected back into the box. Deterministic: identical inputs give
    bit-identical results.
    """
    theta = np.asarray(init, dtype=float).copy()
    p = theta.size
    if data.times.size <= p:
        raise FitError(f"need more than {p} data points, got {data.times.size}")
    if bounds is None:
        bounds = [(-math.inf, math.inf)] * p
    bounds = [(float(a), float(b)) for a, b in bounds]
    for j, (a, b) in enumerate(bounds):
        if not a <= theta[j] <= b:
            raise FitError(f"initial guess {theta[j]} outside bounds for parameter {j}")
    if param_names is None:
        param_names = tuple(f"p{j}" for j in range(p))

    t, y = data.times, data.values
    resid = model(t, *theta) - y
    cost = 0.5 * float(resid @ resid)
    lam = 1e-3
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        jac = _jacobian(model, t, theta, bounds)
        grad = jac.T @ resid
        if np.max(np.abs(grad)) < GRAD_TOL:
            converged = True
            break
        jtj = jac.T @ jac
        diag = np.diag(jtj).copy()
        if np.any(diag == 0.0):
            dead = int(np.argmin(diag))
            raise FitError(f"singular Jacobian: parameter {param_names[dead]} has no effect")
        accepted = False
        new_cost = cost
        while lam < 1e12:
            step = np.linalg.solve(jtj + lam * np.diag(diag), -grad)
            cand = np.clip(theta + step, [a for a, _ in bounds], [b for _, b in bounds])
            r_new = model(t, *cand) - y
            c_new = 0.5 * float(r_new @ r_new)
            if c_new <= cost:
                theta, resid, new_cost = cand, r_new, c_new
                lam = max(lam / 3.0, 1e-12)
                accepted = True
                break
            lam *= 10.0
        if not accepted:
            converged = True  # no descent direction left: at a (local) optimum
            break
        if abs(cost - new_cost) <= COST_TOL * max(cost, 1e-300):
            cost = new_cost
            converged = True
            break
        cost = new_cost

    jac = _jacobian(model, t, theta, bounds)
    rms = math.sqrt(float(resid @ resid) / t.size)
    dof = t.size - p
    jtj = jac.T @ jac
    try:
        cov = np.linalg.inv(jtj) * (float(resid @ resid) / dof if dof > 0 else math.nan)
        stderr = np.sqrt(np.abs(np.diag(cov)))
    except np.linalg.LinAlgError:
        stderr = np.full(p, math.inf)
    return FitResult(
        param_names=tuple(param_names),
        values=theta,
        stderr=stderr,
        residual_rms=rms,
        iterations=it,
        converged=converged,
    )


def fit_exponential(data: TimeSeries) -> FitResult:
    """Fit amp * exp(-t/t1) + offset; returns (amplitude, t1_us, offset)."""
    if data.times.size < 4:
        raise FitError("need at least 4 points for an exponential fit")
    t, y = data.times, data.values
    tail = max(3, t.size // 4)
    b0 = float(np.mean(y[-tail:]))
    a0 = float(y[0] - b0)
    spread = float(np.max(y) - np.min(y))
    if a0 <= 0.05 * max(spread, 1e-30) or spread == 0.0:
        raise FitError("non-decaying data: cannot seed a decay time")
    target = b0 + a0 / math.e
    below = np.nonzero(y <= target)[0]
    if below.size == 0:
        raise FitError("non-decaying data: trace never falls to 1/e of its start")
    t1_0 = max(float(t[below[0]] - t[0]), float(t[1] - t[0]))

    def model(tt, amp, t1, off):
        return amp * np.exp(-tt / t1) + off

    return least_squares(
        model,
        data,
        init=[a0, t1_0, b0],
        bounds=[(-math.inf, math.inf), (1e-9, math.inf), (-math.inf, math.inf)],
        param_names=("amplitude", "t1_us", "offset"),
    )


def _spectral_peak(t: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Dominant oscillation frequency (cycles/us) and its prominence over
    the median spectrum, on a uniform resampling of the data.

    Only interior local maxima count: a decaying envelope contributes a
    monotone low-frequency lobe with no local peak, so an overdamped trace
    reports no frequency."""
    n = max(t.size, 64)
    tt = np.linspace(t[0], t[-1], n)
    yy = np.interp(tt, t, y)
    spec = np.abs(np.fft.rfft(yy - np.mean(yy)))
    freqs = np.fft.rfftfreq(n, d=(tt[1] - tt[0]))
    if spec.size < 4:
        return 0.0, 0.0
    idx, props = find_peaks(spec[1:], prominence=0.0)
    if idx.size == 0:
        return 0.0, 0.0
    best = int(np.argmax(props["prominences"]))
    k = int(idx[best]) + 1
    floor = float(np.median(spec[1:]))
    prominence = float(props["prominences"][best]) / max(floor, 1e-30)
    return float(freqs[k]), prominence


def fit_resonant(data: TimeSeries, gamma_p_fixed: float) -> FitResult:
    """Fit amp * pe(t; g, kappa) + offset to a resonant-evolution trace with
    the dressed qubit rate held fixed; returns (g_mhz, kappa_mhz, amplitude,
    offset) with g_mhz the unsigned coupling.

    |g| is seeded at half the dominant spectral frequency (the population
    oscillates at 2g); kappa is seeded from the envelope decay. A trace with
    no resolvable spectral peak is fit anyway but flagged non-oscillatory.
    """
    t, y = data.times, data.values
    if t.size < 8:
        raise FitError("need at least 8 points for a resonant fit")
    f_peak, prominence = _spectral_peak(t, y)
    oscillatory = prominence > 8.0 and f_peak > 0
    head = float(np.mean(y[: max(3, t.size // 8)]))
    tail = float(np.mean(y[-max(3, t.size // 8):]))
    decaying = head - tail > 0.05 * max(abs(head), 1e-30)
    if not oscillatory and not decaying:
        raise FitError("no spectral peak and no decay: nothing to fit")

    off0 = float(np.min(y))
    amp0 = max(float(y[0] - off0), 1e-6)
    span = float(t[-1] - t[0])
    g0 = f_peak / 2.0 if oscillatory else 0.5 / span
    # population envelope decays at 2 pi (gamma' + kappa)/2
    seg = max(4, t.size // 3)
    e1 = float(np.mean(np.abs(y[:seg] - off0)))
    e2 = float(np.mean(np.abs(y[-seg:] - off0)))
    dt_seg = float(np.mean(t[-seg:]) - np.mean(t[:seg]))
    lam = math.log(max(e1, 1e-30) / max(e2, 1e-30)) / max(dt_seg, 1e-30)
    kappa0 = max(lam / math.pi - gamma_p_fixed, 0.05)

    def model(tt, g, kappa, amp, off):
        return amp * pe_paper(tt, max(g, 1e-12), gamma_p_fixed, kappa) + off

    result = least_squares(
        model,
        data,
        init=[g0, kappa0, amp0, off0],
        bounds=[(1e-9, math.inf), (0.0, math.inf), (0.0, math.inf), (-math.inf, math.inf)],
        param_names=("g_mhz", "kappa_mhz", "amplitude", "offset"),
    )
    if not oscillatory:
        result = replace(result, note="non-oscillatory trace: |g| poorly constrained")
    return result


def fit_coupling_profile(gs) -> FitResult:
    """Fit signed couplings (mode index, g) to g0*sin(pi m/2 + phi).

    Seeded on a phase grid (g0 is solved linearly per phase) to dodge local
    minima; returns g0 > 0 and phi in (-pi, pi].
    """
    pts = [(int(m), float(g)) for m, g in gs]
    if len(pts) < 3:
        raise FitError(f"need at least 3 couplings, got {len(pts)}")
    m_arr = np.array([m for m, _ in pts], dtype=float)
    y = np.array([g for _, g in pts])

    best = None
    for phi in np.linspace(-math.pi, math.pi, 49):
        s = np.sin(math.pi * m_arr / 2.0 + phi)
        denom = float(s @ s)
        if denom < 1e-12:
            continue
        g0 = float(s @ y) / denom
        cost = float(np.sum((g0 * s - y) ** 2))
        if best is None or cost < best[0]:
            best = (cost, g0, phi)
    _, g0_seed, phi_seed = best

    def model(mm, g0, phi):
        return g0 * np.sin(math.pi * mm / 2.0 + phi)

    data = TimeSeries(m_arr, y, label="couplings")
    result = least_squares(
        model, data, init=[g0_seed, phi_seed], param_names=("g0_mhz", "phi_rad")
    )
    g0, phi = result.values
    if g0 < 0:  # canonical branch: positive amplitude
        g0, phi = -g0, phi + math.pi
    phi = math.remainder(phi, TWO_PI)
    if phi <= -math.pi:
        phi += TWO_PI
    elif phi > math.pi:
        phi -= TWO_PI
    return replace(result, values=np.array([g0, phi]))


def fit_purcell(points, profile, params: SystemParams, f_idle: float) -> FitResult:
    """Fit idle-point decay rates versus coupling scale s to
    gamma(s) = s^2 * sum_m (profile_m / (f_m - f_idle))^2 kappa_m + gamma0.

    Linear in (s^2, gamma), so solved in closed form; returns
    (gamma0_mhz, coupling_scale).
    """
    pts = [(float(s), float(g)) for s, g in points]
    if len(pts) < 2:
        raise FitError("need at least 2 sweep points")
    s2 = np.array([s * s for s, _ in pts])
    y = np.array([g for _, g in pts])
    if np.ptp(s2) == 0.0:
        raise FitError("degenerate design: all coupling scales equal")
    coeff = 0.0
    for gm, m in zip(profile, params.modes):
        delta = m.f - f_idle
        if abs(delta) < 1e-9:
            raise ValueError(f"f_idle resonant with mode {m.index}")
        coeff += (gm / delta) ** 2 * m.kappa
    if coeff <= 0:
        raise FitError("coupling profile is identically zero")
    design = np.column_stack([s2, np.ones_like(s2)])
    sol, *_ = np.linalg.lstsq(design, y, rcond=None)
    slope, gamma0 = float(sol[0]), float(sol[1])
    scale = math.sqrt(max(slope, 0.0) / coeff)
    resid = design @ sol - y
    rms = math.sqrt(float(resid @ resid) / y.size)
    dof = y.size - 2
    if dof > 0:
        cov = np.linalg.inv(design.T @ design) * float(resid @ resid) / dof
        err_slope, err_g0 = np.sqrt(np.abs(np.diag(cov)))
        err_scale = 0.5 * err_slope / max(slope, 1e-30) * scale
    else:
        err_scale = err_g0 = math.nan
    return FitResult(
        param_names=("gamma0_mhz", "coupling_scale"),
        values=np.array([gamma0, scale]),
        stderr=np.array([err_g0, err_scale]),
        residual_rms=rms,
        iterations=1,
        converged=True,
    )
