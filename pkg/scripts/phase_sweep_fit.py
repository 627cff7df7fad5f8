"""Sweep the resonator reflection phase across resonance, add measurement
noise, and recover Q and the coupling coefficient by least squares.

Usage: python3 scripts/phase_sweep_fit.py [--noise 0.01] [--seed 0]
"""

import argparse
import math

import numpy as np

from dispersive_readout import CavityParams, fit_reflection_phase, reflection_phase


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--noise", type=float, default=0.01,
                    help="noise sigma as a fraction of the peak phase")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cav = CavityParams(omega_c=2.8175e9, q=6.0e3, beta=0.74)
    half_width = math.sqrt(1 - cav.beta**2) / (2 * cav.q)
    x = np.linspace(-10 * half_width, 10 * half_width, 401)
    y = reflection_phase(cav, x)

    rng = np.random.default_rng(args.seed)
    noisy = y + rng.normal(0, args.noise * np.max(np.abs(y)), size=len(y))

    result = fit_reflection_phase(x, noisy, init={"q": 5.0e3, "beta": 0.6})
    print(result.summary())
    print(f"true: q = {cav.q:.4g}, beta = {cav.beta:.4g}")


if __name__ == "__main__":
    main()
