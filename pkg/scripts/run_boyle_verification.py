#!/usr/bin/env python3
"""Verify the inverse pressure-volume law on Boyle's 1662 measurements.

Prints the constancy indices, the estimated constant, and the separation
angle / height of the three candidate models; optionally writes
plot-ready overlay and histogram files.

Usage:
    python scripts/run_boyle_verification.py [--plot-data-dir out/]
"""

import argparse
from pathlib import Path

from implicitreg import boyle_plot_data, boyle_summary


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--plot-data-dir", type=Path, default=None)
    args = parser.parse_args()

    s = boyle_summary()
    print(f"observations: {s.n}")
    print(f"constancy(volume)          = {s.constancy_volume:.7f}")
    print(f"constancy(pressure)        = {s.constancy_pressure:.7f}")
    print(f"constancy(volume*pressure) = {s.constancy_product:.7f}")
    print(f"estimated constant k = {s.product_estimate:.4f} (self-weighting mean)")
    print()
    print(f"{'model':<20}{'theta_T':>9}{'h':>11}{'complex x-solves':>18}")
    for row in s.rows:
        print(f"{row.model:<20}{row.theta_t:>9.2f}{row.height:>11.5f}"
              f"{row.complex_x:>18}")
    print()
    print("the product of volume and pressure is the most constant quantity,")
    print("and the non-response model separates best near 90 degrees with the")
    print("smallest height: the inverse law holds up to measurement error")

    if args.plot_data_dir is not None:
        args.plot_data_dir.mkdir(parents=True, exist_ok=True)
        for filename, content in boyle_plot_data().items():
            (args.plot_data_dir / filename).write_text(content)
        print(f"\nplot data written to {args.plot_data_dir}/")


if __name__ == "__main__":
    main()
