"""Time-domain traces: spin polarization under a chopped pump laser and its
conversion to a dispersive reflection-phase trace.

Both laser-on buildup and laser-off decay are mono-exponential, so every
segment is evaluated in closed form (no integrator error):

    laser on:  dp/dt = (p_sat - p)/t1_light
    laser off: dp/dt = -p/t1_dark
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .params import CavityParams, ChopperCycle, SpinEnsembleParams
from .physics import ensemble_dispersive_shift, reflection_phase, transition_frequency


@dataclass(frozen=True)
class PolarizationTrace:
    times: np.ndarray   # s, uniform spacing
    p: np.ndarray       # polarization in [0, 1]

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        p = np.asarray(self.p, dtype=float)
        if t.shape != p.shape or t.ndim != 1:
            raise InvalidParameterError("times and p must be 1-D arrays of equal length")
        if len(t) >= 2:
            dts = np.diff(t)
            if np.any(dts <= 0) or not np.allclose(dts, dts[0], rtol=1e-9, atol=0):
                raise InvalidParameterError("times must be strictly increasing and uniform")
        if np.any((p < -1e-12) | (p > 1 + 1e-12)):
            raise InvalidParameterError("polarization must stay within [0, 1]")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class PhaseTrace:
    times: np.ndarray
    phase: np.ndarray   # rad
    b_field: float      # gauss
    offset_subtracted: bool


def polarization_trace(cycle: ChopperCycle, ens: SpinEnsembleParams,
                       p_sat=1.0, p_initial=0.0) -> PolarizationTrace:
    """Sampled polarization p(t) over ``cycle.n_periods`` chopper periods.

    Segments are joined continuously; samples are exact closed-form values.
    """
    if not 0 < p_sat <= 1:
        raise InvalidParameterError(f"p_sat must be in (0, 1], got {p_sat}")
    if not 0 <= p_initial <= 1:
        raise InvalidParameterError(f"p_initial must be in [0, 1], got {p_initial}")

    n = int(round(cycle.n_periods * cycle.period / cycle.dt))
    times = np.arange(n) * cycle.dt
    p = np.empty(n)

    t_on = cycle.duty * cycle.period
    in_period = times % cycle.period
    period_idx = np.minimum((times // cycle.period).astype(int), cycle.n_periods - 1)

    # polarization at the start of each period / each dark segment
    p_period = np.empty(cycle.n_periods)
    p_dark = np.empty(cycle.n_periods)
    p0 = p_initial
    for i in range(cycle.n_periods):
        p_period[i] = p0
        p_end_on = p_sat + (p0 - p_sat) * np.exp(-t_on / ens.t1_light)
        p_dark[i] = p_end_on
        p0 = p_end_on * np.exp(-(cycle.period - t_on) / ens.t1_dark)

    on = in_period < t_on
    p[on] = p_sat + (p_period[period_idx[on]] - p_sat) * np.exp(
        -in_period[on] / ens.t1_light
    )
    off = ~on
    p[off] = p_dark[period_idx[off]] * np.exp(
        -(in_period[off] - t_on) / ens.t1_dark
    )
    return PolarizationTrace(times, np.clip(p, 0.0, 1.0))


def phase_trace(trace: PolarizationTrace, ens: SpinEnsembleParams,
                cav: CavityParams, b_field, subtract_offset=True,
                linearized=True) -> PhaseTrace:
    """Dispersive reflection-phase trace for a probe parked on the cavity.

    Each sample maps the instantaneous ensemble pull delta_c(t) (polarization
    p(t)) through the reflection-phase response at fractional detuning
    delta_c/f_c. ``linearized`` (default) uses the small-shift slope
    4*beta*Q/(1-beta^2) + k; otherwise the full nonlinear response is used.
    """
    omega0 = transition_frequency(b_field, ens)
    delta_c = ensemble_dispersive_shift(ens, cav.omega_c, omega0, trace.p)
    x = delta_c / cav.omega_c
    if linearized:
        phase = (cav.resonant_slope + cav.k) * x + cav.phi0
    else:
        phase = reflection_phase(cav, x)
    if subtract_offset:
        phase = phase - np.mean(phase)
    return PhaseTrace(trace.times, phase, float(b_field), bool(subtract_offset))
