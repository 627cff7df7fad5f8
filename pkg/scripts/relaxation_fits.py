"""Simulate the chopped-pump polarization dynamics and recover both
relaxation times by fitting exponentials to the last pump-on and pump-off
half cycles.

Usage: python3 scripts/relaxation_fits.py
"""

import numpy as np

from dispersive_readout import (
    ChopperCycle,
    SpinEnsembleParams,
    fit_exponential,
    polarization_trace,
)


def main():
    ens = SpinEnsembleParams(n_spins=2.0e12, g=2.4e-2, t2_star=18e-9,
                             t1_dark=740e-6, t1_light=427e-6)
    cycle = ChopperCycle(period=4e-3, duty=0.5, n_periods=6, dt=2e-6)
    trace = polarization_trace(cycle, ens)

    per = int(round(cycle.period / cycle.dt))
    half = per // 2
    last = trace.p[5 * per:6 * per]
    t = trace.times[:half]

    on = fit_exponential(t, last[:half],
                         init={"amplitude": -0.5, "tau": 3e-4, "offset": 1.0})
    off = fit_exponential(t, last[half:],
                          init={"amplitude": 0.5, "tau": 1e-3, "offset": 0.0})

    print("pump on (spin-polarizing):")
    print(on.summary())
    print(f"  true T1(light) = {ens.t1_light * 1e6:.0f} us\n")
    print("pump off (thermalizing):")
    print(off.summary())
    print(f"  true T1(dark)  = {ens.t1_dark * 1e6:.0f} us")
    print(f"\nsteady-state contrast over last period: "
          f"{np.ptp(last):.4f}")


if __name__ == "__main__":
    main()
