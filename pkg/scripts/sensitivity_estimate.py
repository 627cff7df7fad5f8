"""Project the magnetometer performance of the optimized device: dispersive
phase swing, photon budget, analytic sensitivity at a reference phase-noise
density, the spin-projection-noise limit, and a Monte-Carlo check of the
lock-in noise floor against the analytic density.

Usage: python3 scripts/sensitivity_estimate.py [--seeds 50]
"""

import argparse
import math

import numpy as np

from dispersive_readout import (
    LockinConfig,
    OptimizedDeviceParams,
    PhaseNoisePSD,
    PSDSegment,
    optimized_phase_shift,
    photon_budget,
    sensitivity,
    shot_noise_limit,
    simulate_readout,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=50)
    args = ap.parse_args()

    p = OptimizedDeviceParams()
    print(f"max dispersive phase swing : {optimized_phase_shift(p):.3f} rad")

    budget = photon_budget(p)
    print(f"required photon flux       : {budget.flux:.3e} /s")
    print(f"average photon number      : {budget.avg_photons:.3e}")
    print(f"implied Rabi frequency     : {budget.rabi_from_photons:.3e} Hz")

    s_phi = 1e-6  # rad/sqrt(Hz), demonstrated interferometric stabilization
    print(f"\nsensitivity @ {s_phi:.0e} rad/rtHz : "
          f"{sensitivity(p, s_phi):.3e} T/rtHz")
    lim = shot_noise_limit(p.n_spins, p.t2)
    print(f"spin-projection limit      : {lim.eta_spin:.3e} T/rtHz")
    print(f"optical (x150) estimate    : {lim.optical_estimate:.3e} T/rtHz")

    # Monte-Carlo: white phase noise, square-wave signal at f_mod
    level = s_phi**2
    psd = PhaseNoisePSD((PSDSegment(1.0, 0.0, level),), 0.1, 5e5)
    cfg = LockinConfig(f_mod=1e4, fs=1e6, duration=1e-2)
    floors = [simulate_readout(p, psd, cfg, 0.01, seed).noise_floor
              for seed in range(args.seeds)]
    mc = float(np.sqrt(np.mean(np.square(floors))))
    print(f"\nMC phase-noise floor       : {mc:.3e} rad/rtHz "
          f"(analytic {math.sqrt(level):.3e})")
    print(f"MC-implied sensitivity     : {sensitivity(p, mc):.3e} T/rtHz")


if __name__ == "__main__":
    main()
