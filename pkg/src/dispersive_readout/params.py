"""Immutable parameter containers for the cavity, the spin ensemble, the
chopper cycle, the phase-noise model and the lock-in detector.

Unit convention: all frequencies are stored as ordinary frequencies in Hz.
Angular-frequency factors of 2*pi enter only inside the formulas that need
them and are written out explicitly there.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import InvalidParameterError

# Cosine of the angle between any NV axis and a field along [001];
# all four orientations are degenerate in this geometry.
PROJECTION_001 = 1.0 / math.sqrt(3.0)


@dataclass(frozen=True)
class CavityParams:
    """Reflection-measured resonator: resonance frequency, quality factor,
    port coupling coefficient and background phase terms.

    ``k`` is the background phase slope in rad per unit *fractional*
    detuning (f - f_c)/f_c, the same normalization in which Q*delta is
    dimensionless inside the reflection-phase model.
    """

    omega_c: float          # resonance frequency (Hz)
    q: float                # quality factor
    beta: float             # port coupling coefficient; beta = 1 is critical
    k: float = 0.0          # background phase slope (rad / fractional detuning)
    phi0: float = 0.0       # phase offset (rad)
    beta_exclusion: float = 1e-3  # half-width of rejected band around beta = 1

    def __post_init__(self):
        if not self.omega_c > 0:
            raise InvalidParameterError(f"omega_c must be > 0, got {self.omega_c}")
        if not self.q > 0:
            raise InvalidParameterError(f"Q must be > 0, got {self.q}")
        if self.beta < 0:
            raise InvalidParameterError(f"beta must be >= 0, got {self.beta}")
        if abs(self.beta - 1.0) < self.beta_exclusion:
            raise InvalidParameterError(
                f"beta = {self.beta} lies within {self.beta_exclusion} of the "
                "critical-coupling singularity at beta = 1"
            )

    @property
    def resonant_slope(self):
        """Slope of the resonant phase term at zero detuning: 4*beta*Q/(1-beta^2)."""
        return 4.0 * self.beta * self.q / (1.0 - self.beta**2)


@dataclass(frozen=True)
class SpinEnsembleParams:
    """NV-like spin ensemble: size, single-spin coupling, Zeeman model and
    relaxation/dephasing times."""

    n_spins: float          # number of spins
    g: float                # single-spin coupling (Hz)
    t2_star: float          # inhomogeneous dephasing time (s)
    t1_dark: float          # longitudinal relaxation time, laser off (s)
    t1_light: float         # polarization time constant, laser on (s)
    zfs: float = 2.87e9     # zero-field splitting D (Hz)
    gamma: float = 2.8e6    # gyromagnetic ratio (Hz/gauss)
    projection_factor: float = PROJECTION_001  # cos(NV axis, field)

    def __post_init__(self):
        if not self.n_spins >= 1:
            raise InvalidParameterError(f"n_spins must be >= 1, got {self.n_spins}")
        if not self.g > 0:
            raise InvalidParameterError(f"g must be > 0, got {self.g}")
        for name in ("t2_star", "t1_dark", "t1_light"):
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"{name} must be > 0")
        if not 0 < self.projection_factor <= 1:
            raise InvalidParameterError(
                f"projection_factor must be in (0, 1], got {self.projection_factor}"
            )
        if not self.zfs > 0:
            raise InvalidParameterError(f"zfs must be > 0, got {self.zfs}")
        if not self.gamma > 0:
            raise InvalidParameterError(f"gamma must be > 0, got {self.gamma}")

    @property
    def sigma_f(self):
        """Gaussian inhomogeneous linewidth 1/(2*pi*T2*) in Hz."""
        return 1.0 / (2.0 * math.pi * self.t2_star)


@dataclass(frozen=True)
class OptimizedDeviceParams:
    """Projected parameters of an optimized readout device.

    Defaults are the optimized-device operating point used throughout the
    performance estimates (g/2pi = 0.3 Hz, omega_0/2pi = 1e10 Hz, Q = 1e4,
    Delta/2pi = 1e7 Hz, T2 = 1 ms, N = 1e14 spins).
    """

    g: float = 0.3          # coupling (Hz)
    omega_0: float = 1e10   # spin transition frequency (Hz)
    q: float = 1e4          # quality factor
    delta: float = 1e7      # spin-cavity detuning (Hz)
    t2: float = 1e-3        # coherence time (s)
    n_spins: float = 1e14   # number of spins

    def __post_init__(self):
        for name in ("g", "omega_0", "q", "delta", "t2", "n_spins"):
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"{name} must be > 0")


@dataclass(frozen=True)
class ChopperCycle:
    """Square modulation of the pump laser: alternating on/off segments."""

    period: float = 4e-3    # full chopper period (s)
    duty: float = 0.5       # fraction of the period with the laser on
    n_periods: int = 5
    dt: float = 4e-6        # sample interval (s)

    def __post_init__(self):
        if not self.period > 0:
            raise InvalidParameterError(f"period must be > 0, got {self.period}")
        if not 0 <= self.duty <= 1:
            raise InvalidParameterError(f"duty must be in [0, 1], got {self.duty}")
        if not self.n_periods >= 1:
            raise InvalidParameterError("n_periods must be >= 1")
        if not self.dt < self.period / 20:
            raise InvalidParameterError(
                f"dt = {self.dt} must resolve the period: dt < period/20"
            )


@dataclass(frozen=True)
class PSDSegment:
    f_break: float          # anchor frequency (Hz)
    exponent: float         # power-law exponent (0 white, -1, -3, ...)
    level: float            # S_phi at f_break (rad^2/Hz)


@dataclass(frozen=True)
class PhaseNoisePSD:
    """Piecewise power-law one-sided phase-noise spectral density.

    Segment i applies from its breakpoint up to the next one (the first
    segment extends down to f_min, the last up to f_max):
    S_phi(f) = level_i * (f / f_break_i)^exponent_i.
    Continuity across breakpoints is enforced at construction.
    """

    segments: tuple
    f_min: float
    f_max: float

    def __post_init__(self):
        segments = tuple(
            s if isinstance(s, PSDSegment) else PSDSegment(**s) for s in self.segments
        )
        object.__setattr__(self, "segments", segments)
        if len(segments) == 0:
            raise InvalidParameterError("PSD needs at least one segment")
        if not 0 < self.f_min < self.f_max:
            raise InvalidParameterError("require 0 < f_min < f_max")
        breaks = [s.f_break for s in segments]
        if any(b2 <= b1 for b1, b2 in zip(breaks, breaks[1:])):
            raise InvalidParameterError("segment breakpoints must be strictly increasing")
        for s in segments:
            if not s.level > 0:
                raise InvalidParameterError("segment levels must be > 0")
        for lo, hi in zip(segments, segments[1:]):
            left = lo.level * (hi.f_break / lo.f_break) ** lo.exponent
            if not math.isclose(left, hi.level, rel_tol=1e-6):
                raise InvalidParameterError(
                    f"PSD discontinuous at {hi.f_break} Hz: "
                    f"{left} from below vs {hi.level} from above"
                )

    @classmethod
    def from_dict(cls, d):
        known = {"f_min_hz", "f_max_hz", "segments"}
        unknown = set(d) - known
        if unknown:
            raise InvalidParameterError(f"unknown PSD keys: {sorted(unknown)}")
        segs = []
        for s in d["segments"]:
            extra = set(s) - {"f_break_hz", "exponent", "level_rad2_per_hz"}
            if extra:
                raise InvalidParameterError(f"unknown PSD segment keys: {sorted(extra)}")
            segs.append(
                PSDSegment(s["f_break_hz"], s["exponent"], s["level_rad2_per_hz"])
            )
        return cls(tuple(segs), d["f_min_hz"], d["f_max_hz"])

    @classmethod
    def from_json(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        return {
            "f_min_hz": self.f_min,
            "f_max_hz": self.f_max,
            "segments": [
                {
                    "f_break_hz": s.f_break,
                    "exponent": s.exponent,
                    "level_rad2_per_hz": s.level,
                }
                for s in self.segments
            ],
        }


@dataclass(frozen=True)
class LockinConfig:
    """Digital lock-in: sine reference at f_mod, zero phase."""

    f_mod: float            # modulation frequency (Hz)
    fs: float               # sample rate (Hz)
    duration: float         # total record length (s), integer modulation periods

    def __post_init__(self):
        if not self.fs > 10 * self.f_mod:
            raise InvalidParameterError(
                f"fs = {self.fs} must exceed 10*f_mod = {10 * self.f_mod}"
            )
        n_cycles = self.duration * self.f_mod
        if abs(n_cycles - round(n_cycles)) > 1e-9 * max(1.0, n_cycles):
            raise InvalidParameterError(
                "duration must be an integer number of modulation periods"
            )

    @property
    def n_samples(self):
        return int(round(self.fs * self.duration))
