"""Closed-form cavity/spin physics: dispersive shifts, the Gaussian-broadened
ensemble shift via the Dawson function, the reflection-phase model, and the
photon-budget numbers for an optimized device.

All frequencies are plain Hz; 2*pi factors cancel in every formula below that
the literature writes in angular frequencies (they appear squared in the
numerator and once in each of two denominator factors), so the expressions
are evaluated directly with Hz values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, InvalidParameterError
from .params import CavityParams, OptimizedDeviceParams, SpinEnsembleParams

SQRT2 = math.sqrt(2.0)


def transition_frequency(b_field, ens: SpinEnsembleParams):
    """Mean spin transition frequency (Hz) at field ``b_field`` (gauss).

    Linear Zeeman model for the lower (m_s = -1) branch with the field along
    [001]: f0 = D - gamma * projection_factor * B. Monotone decreasing in B.
    """
    b = np.asarray(b_field, dtype=float)
    if np.any(b < 0):
        raise DomainError("b_field must be >= 0")
    out = ens.zfs - ens.gamma * ens.projection_factor * b
    return float(out) if np.isscalar(b_field) else out


def dispersive_shift_single(g, delta):
    """Single-spin dispersive cavity pull g^2/delta (Hz).

    Valid to first order in g/delta; the resonant point delta = 0 is outside
    the dispersive approximation and rejected.
    """
    d = np.asarray(delta, dtype=float)
    if np.any(d == 0.0):
        raise DomainError("delta = 0: dispersive approximation invalid on resonance")
    out = np.asarray(g, dtype=float) ** 2 / d
    return float(out) if out.ndim == 0 else out


def dawson(x):
    """Dawson integral D(x) = exp(-x^2) * int_0^x exp(t^2) dt.

    Odd, peaks at ~0.541 near x = 0.924, decays as 1/(2x) for large |x|.
    """
    out = special.dawsn(np.asarray(x, dtype=float))
    return float(out) if out.ndim == 0 else out


def ensemble_dispersive_shift(ens: SpinEnsembleParams, omega_c, mean_omega0,
                              polarization):
    """Cavity pull (Hz) from a Gaussian-broadened ensemble of ``n_spins``.

    The principal-value average of g^2/(omega_c - omega0) over a Gaussian
    distribution of transition frequencies (std sigma_f = 1/(2*pi*T2*))
    evaluates in closed form through the Dawson function:

        shift = p * N * g^2 * (sqrt(2)/sigma_f) * D(x),
        x = (omega_c - mean_omega0) / (sqrt(2) * sigma_f).

    Finite for all detunings (including zero), odd in the detuning, and
    reduces to p*N*g^2/Delta in the narrow-line limit sigma_f -> 0.
    """
    p = np.asarray(polarization, dtype=float)
    if np.any((p < 0) | (p > 1)):
        raise InvalidParameterError("polarization must lie in [0, 1]")
    sigma = ens.sigma_f
    x = (np.asarray(omega_c, dtype=float) - np.asarray(mean_omega0, dtype=float)) / (
        SQRT2 * sigma
    )
    out = p * ens.n_spins * ens.g**2 * (SQRT2 / sigma) * special.dawsn(x)
    return float(out) if np.ndim(out) == 0 else out


def ensemble_shift_oracle(ens: SpinEnsembleParams, omega_c, mean_omega0,
                          polarization, n_grid=1_000_000):
    """Ensemble shift by direct principal-value quadrature (verification path).

    Midpoint rule on a grid symmetric about the pole at omega0 = omega_c,
    summing paired +/- offsets so the singular contributions cancel exactly.
    The grid spans the Gaussian out to mean +/- 8 sigma. Converges to
    ``ensemble_dispersive_shift`` as n_grid grows.
    """
    if n_grid < 1000:
        raise InvalidParameterError("n_grid must be >= 1000")
    sigma = ens.sigma_f
    delta = float(omega_c) - float(mean_omega0)
    half_width = abs(delta) + 8.0 * sigma
    n_half = n_grid // 2
    h = half_width / n_half
    u = (np.arange(n_half) + 0.5) * h
    # density of omega0, evaluated at omega_c -/+ u; pole terms pair as
    # [rho(omega_c - u) - rho(omega_c + u)] / u
    norm = 1.0 / (math.sqrt(2.0 * math.pi) * sigma)
    rho_minus = norm * np.exp(-0.5 * ((delta - u) / sigma) ** 2)
    rho_plus = norm * np.exp(-0.5 * ((delta + u) / sigma) ** 2)
    integral = float(np.sum((rho_minus - rho_plus) / u) * h)
    return polarization * ens.n_spins * ens.g**2 * integral


def reflection_phase(cav: CavityParams, delta):
    """Reflection phase arg(S11) (rad) of a single-port resonator.

    ``delta`` is the probe-cavity *fractional* detuning (f - f_c)/f_c, the
    normalization in which Q*delta is dimensionless:

        arg(S11) = 4*beta*Q*delta / ((2*Q*delta)^2 + (1 - beta^2))
                   + k*delta + phi0.

    With k = phi0 = 0 the response is odd in delta, has slope
    4*beta*Q/(1-beta^2) at delta = 0 and decays to zero far off resonance.
    """
    d = np.asarray(delta, dtype=float)
    qd = cav.q * d
    out = (
        4.0 * cav.beta * qd / ((2.0 * qd) ** 2 + (1.0 - cav.beta**2))
        + cav.k * d
        + cav.phi0
    )
    return float(out) if out.ndim == 0 else out


def optimized_phase_shift(p: OptimizedDeviceParams):
    """Maximum dispersive reflection-phase shift pi*Q*N*g^2/(omega_0*Delta) (rad)."""
    return math.pi * p.q * p.n_spins * p.g**2 / (p.omega_0 * p.delta)


@dataclass(frozen=True)
class PhotonBudget:
    flux: float               # required photon flux N/T2 (photons/s)
    avg_photons: float        # mean intracavity photon number
    rabi_from_photons: float  # g*sqrt(avg_photons) (Hz), reported for comparison


def photon_budget(p: OptimizedDeviceParams) -> PhotonBudget:
    """Microwave photon budget for readout at the spin projection limit.

    flux = N/T2; avg_photons = N*Q/(f_c*T2) with f_c ~ f_0 (the angular-
    frequency form 2*pi*N*Q/(omega_c*T2) with omega_c = 2*pi*f_c). The Rabi
    frequency g*sqrt(avg_photons) is reported alongside, not asserted against
    any external figure.
    """
    flux = p.n_spins / p.t2
    avg = p.n_spins * p.q / (p.omega_0 * p.t2)
    return PhotonBudget(flux, avg, p.g * math.sqrt(avg))
