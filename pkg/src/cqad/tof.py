"""Time-of-flight geometry extraction for the acoustic Fabry-Perot cavity
and a 1-d envelope-level delay-line echo simulator.

Geometry relations: v_e = p * f_center, d0 = dt1 * v_e / 2 (transducer to
effective mirror plane, which sits one penetration depth L_p behind the
grating edge, so d0 = d1 + L_p), single-electrode reflectivity
r_s = p / (4 L_p), and cavity length L_c = dt2 * v_e / 2 from the echo
spacing.

The echo model sums bounce paths between the two effective mirror planes:
each reflection multiplies the amplitude by -reflectivity (the gratings
invert the wave), propagation attenuates as exp(-2 pi loss t). Carrier-free:
only the envelope is tracked, so interference appears as signed overlap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .model import TWO_PI, TimeSeries

# stop following a bounce path once it is this faint relative to the
# strongest arrival
PATH_CUTOFF = 1e-4


@dataclass(frozen=True)
class TofInput:
    """Measured quantities: transducer period p (nm), center mode frequency
    (MHz), transducer-to-grating distance d1 (um), first rise-to-dip
    interval dt1 (ns) and echo spacing dt2 (ns)."""

    p_nm: float
    f_center_mhz: float
    d1_um: float
    dt1_ns: float
    dt2_ns: float

    def __post_init__(self):
        for name in ("p_nm", "f_center_mhz", "d1_um", "dt1_ns", "dt2_ns"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name}: must be positive")
        if not self.dt1_ns < self.dt2_ns:
            raise ValueError("dt1_ns must be smaller than dt2_ns")


@dataclass(frozen=True)
class TofGeometry:
    """Derived resonator geometry: velocity (m/s), effective transducer-to-
    mirror distance d0 (um), penetration depth (um), single-electrode
    reflectivity, cavity length (um)."""

    v_e_mps: float
    d0_um: float
    l_p_um: float
    r_s: float
    l_c_um: float


def saw_velocity(p_nm: float, f_center_mhz: float) -> float:
    """Propagation speed v_e = p * f_center in m/s (= um/us)."""
    if p_nm <= 0 or f_center_mhz <= 0:
        raise ValueError("period and frequency must be positive")
    return p_nm * 1e-3 * f_center_mhz


def geometry_from_timing(inp: TofInput) -> TofGeometry:
    """Resonator geometry from the timing observables."""
    v = saw_velocity(inp.p_nm, inp.f_center_mhz)  # um/us
    d0 = 0.5 * inp.dt1_ns * 1e-3 * v
    l_p = d0 - inp.d1_um
    if l_p <= 0:
        raise ValueError(
            f"non-positive penetration depth: d0={d0:.3f} um <= d1={inp.d1_um} um"
        )
    r_s = inp.p_nm * 1e-3 / (4.0 * l_p)
    l_c = 0.5 * inp.dt2_ns * 1e-3 * v
    return TofGeometry(v_e_mps=v, d0_um=d0, l_p_um=l_p, r_s=r_s, l_c_um=l_c)


@dataclass(frozen=True)
class EchoModel:
    """Delay-line cavity for the echo simulator: effective mirror planes at
    0 and l_c_um, transducers at x_in/x_out (um from the left plane),
    amplitude reflectivity in (0, 1], propagation loss (MHz-equivalent
    amplitude rate), velocity (m/s), output sampling step (ns)."""

    l_c_um: float
    x_in_um: float
    x_out_um: float
    mirror_reflectivity: float
    loss_per_us: float
    v_e_mps: float
    sample_dt_ns: float

    def __post_init__(self):
        if self.l_c_um <= 0:
            raise ValueError("l_c_um: must be positive")
        for name in ("x_in_um", "x_out_um"):
            x = getattr(self, name)
            if not 0 < x < self.l_c_um:
                raise ValueError(f"{name}: must lie strictly inside the cavity")
        if not 0 < self.mirror_reflectivity <= 1:
            raise ValueError("mirror_reflectivity: must be in (0, 1]")
        if self.loss_per_us < 0:
            raise ValueError("loss_per_us: must be non-negative")
        if self.v_e_mps <= 0:
            raise ValueError("v_e_mps: must be positive")
        if self.sample_dt_ns <= 0:
            raise ValueError("sample_dt_ns: must be positive")


def _arrivals(model: EchoModel, total_time_us: float) -> list[tuple[float, float]]:
    """(time us, signed amplitude) of every bounce-path arrival at x_out."""
    v = model.v_e_mps  # um/us
    r = model.mirror_reflectivity
    out: list[tuple[float, float]] = []
    # two launch directions, half amplitude each
    fronts = [(0.0, model.x_in_um, +1, 0.5), (0.0, model.x_in_um, -1, 0.5)]
    while fronts:
        t0, x0, direction, amp = fronts.pop()
        if t0 > total_time_us or abs(amp) < PATH_CUTOFF * 0.5:
            continue
        # crossing of the output transducer on this leg
        if direction > 0 and x0 <= model.x_out_um:
            t_cross = t0 + (model.x_out_um - x0) / v
        elif direction < 0 and x0 >= model.x_out_um:
            t_cross = t0 + (x0 - model.x_out_um) / v
        else:
            t_cross = None
        if t_cross is not None and t_cross <= total_time_us:
            out.append((t_cross, amp * math.exp(-TWO_PI * model.loss_per_us * t_cross)))
        # reflect at the mirror ahead
        mirror_x = model.l_c_um if direction > 0 else 0.0
        t_mirror = t0 + abs(mirror_x - x0) / v
        fronts.append((t_mirror, mirror_x, -direction, -r * amp))
    return sorted(out)


def simulate_echo(
    model: EchoModel,
    pulse_len_ns: float,
    envelope: str = "gaussian",
    total_time_ns: float = 500.0,
) -> TimeSeries:
    """Synthesize the output-transducer envelope for one input pulse.

    pulse_len_ns is the FWHM of a Gaussian or the full width of a
    rectangular envelope. Echoes are individually resolvable only for pulses
    below the cavity round trip 2 L_c / v_e; pulses up to twice the round
    trip are accepted (overlapping groups are the point of the short-pulse
    comparison) and anything longer is rejected.
    """
    if envelope not in ("gaussian", "rectangular"):
        raise ValueError(f"unknown envelope {envelope!r}")
    v = model.v_e_mps
    round_trip_ns = 2.0 * model.l_c_um / v * 1e3
    if not pulse_len_ns < 2.0 * round_trip_ns:
        raise ValueError(
            f"pulse length {pulse_len_ns} ns must be below twice the round trip "
            f"{round_trip_ns:.1f} ns"
        )
    total_us = total_time_ns * 1e-3
    arrivals = _arrivals(model, total_us)
    n = int(round(total_time_ns / model.sample_dt_ns)) + 1
    t_us = np.arange(n) * model.sample_dt_ns * 1e-3
    signal = np.zeros(n)
    w_us = pulse_len_ns * 1e-3
    for t_k, a_k in arrivals:
        tau = t_us - t_k
        if envelope == "gaussian":
            sigma = w_us / (2.0 * math.sqrt(2.0 * math.log(2.0)))
            signal += a_k * np.exp(-0.5 * (tau / sigma) ** 2)
        else:
            signal += a_k * ((tau >= -w_us / 2) & (tau <= w_us / 2))
    return TimeSeries(t_us, signal, label="echo_envelope")


def echo_peak_times(
    ts: TimeSeries,
    min_height_frac: float = 0.2,
    min_spacing_us: float | None = None,
) -> np.ndarray:
    """Times (us) of the principal echo peaks of |signal|.

    `min_spacing_us` groups the interference lobes within one arrival
    bundle: only the tallest sample within that distance survives (set it
    to roughly half the expected echo spacing)."""
    mag = np.abs(ts.values)
    top = float(np.max(mag))
    if top == 0.0:
        return np.array([])
    distance = None
    if min_spacing_us is not None:
        dt = float(ts.times[1] - ts.times[0]) if len(ts) > 1 else min_spacing_us
        distance = max(1, int(round(min_spacing_us / dt)))
    idx, _ = find_peaks(mag, height=min_height_frac * top, distance=distance)
    return ts.times[idx]


def has_early_sub_echo(
    ts: TimeSeries, model: EchoModel, min_prominence: float = 0.08
) -> bool:
    """True when the short mirror round trip is resolved as a dip riding on
    the first arrival group.

    Looks inside one round trip around the direct arrival for an interior
    local minimum of the normalized signal whose prominence exceeds
    `min_prominence` (relative to the group maximum).
    """
    v = model.v_e_mps
    t_direct = abs(model.x_out_um - model.x_in_um) / v
    round_trip = 2.0 * model.l_c_um / v
    lo = t_direct - 0.45 * round_trip
    hi = t_direct + 0.45 * round_trip
    sel = (ts.times >= lo) & (ts.times <= hi)
    window = ts.values[sel]
    if window.size < 5:
        return False
    top = float(np.max(np.abs(window)))
    if top == 0.0:
        return False
    idx, _ = find_peaks(-window / top, prominence=min_prominence)
    # only dips after the leading edge count: require a maximum before them
    i_first_max = int(np.argmax(window))
    return bool(np.any(idx > i_first_max))
