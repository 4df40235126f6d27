#!/usr/bin/env python3
"""Print the SI design report for the baseline setup and a separation scan.

Library-level companion to `qif-mzi design`: shows how the kick and the
interaction phase move with the beam separation and where the 2 pi
tuning points sit.
"""

import math

from qif_mzi import ExperimentInputs, derive_setup, to_model, tune_separation

BASELINE = ExperimentInputs(
    separation=2e-3,
    length=4e-2,
    speed=2e6,
    waist_transverse=1e-5,
    waist_longitudinal=2e-7,
)


def run() -> None:
    setup = derive_setup(BASELINE)
    print("baseline setup (d = 2 mm, L = 4 cm, v = 2e6 m/s):")
    print(f"  delta / W        = {setup.delta_over_width:.4f}")
    print(f"  alpha            = {setup.alpha / math.pi:+.4f} pi")
    print(f"  fringe spacing   = {setup.fringe_spacing:.3e} m")
    print(f"  long. spread     = {setup.longitudinal_spread:.3e} m")
    for check in setup.validity:
        print("  " + check.describe())

    print("\nseparation scan (kick ~ 1/d^2, phase ~ 1/d):")
    for factor in (0.5, 1.0, 2.0, 4.0):
        scan = derive_setup(
            ExperimentInputs(
                separation=factor * BASELINE.separation,
                length=BASELINE.length,
                speed=BASELINE.speed,
                waist_transverse=BASELINE.waist_transverse,
                waist_longitudinal=BASELINE.waist_longitudinal,
            )
        )
        print(
            f"  d = {scan.inputs.separation * 1e3:6.2f} mm   delta/W = {scan.delta_over_width:.4f}"
            f"   alpha = {scan.alpha / math.pi:+8.4f} pi"
        )

    tuned = tune_separation(BASELINE)
    print(
        f"\nnearest 2 pi tuning: d = {tuned.separation * 1e3:.4f} mm "
        f"gives |alpha| = {tuned.n_multiple} x 2 pi"
    )
    params = to_model(tuned.setup, phi=0.75 * math.pi)
    print(f"bridged model parameters: delta/W = {params.delta_over_width:.4f}, alpha = {params.alpha:+.4f} rad")


if __name__ == "__main__":
    run()
