"""Write the payoff surfaces and slices for the three-player game at q = r = 0.2.

    python scripts/figure_data.py [--out-dir data] [--points 101]

Produces surface_ad.csv, surface_pd.csv, surface_dp.csv (full (p, theta) grids),
slice_theta_max.csv (theta = pi/2, all channels) and slice_p_half.csv (p = 0.5, all channels).
"""

import argparse
import math
from pathlib import Path

import numpy as np

from qcoopgames.cli import render, surface_rows
from qcoopgames.game import StrategyProfile

PROFILE = StrategyProfile(0.2, 0.2)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="data")
    ap.add_argument("--points", type=int, default=101)
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ps = np.linspace(0, 1, args.points)
    thetas = np.linspace(0, math.pi / 2, args.points)

    jobs = {f"surface_{k}.csv": (k, ps, thetas) for k in ("ad", "pd", "dp")}
    jobs["slice_theta_max.csv"] = ("all", ps, np.array([math.pi / 2]))
    jobs["slice_p_half.csv"] = ("all", np.array([0.5]), thetas)
    for name, (channel, p_grid, theta_grid) in jobs.items():
        rows = surface_rows(3, channel, PROFILE, p_grid, theta_grid)
        (out / name).write_text(render(rows, "csv"))
        print(f"{out / name}: {len(rows)} rows")


if __name__ == "__main__":
    main()
