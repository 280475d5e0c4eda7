"""Tabulate the lockstep maximizer, its value and the Nash deviation gain.

    python scripts/equilibrium_table.py [--grid-points 101]
"""

import argparse
import math

from qcoopgames.channels import Channel, NoiseModel
from qcoopgames.equilibrium import SearchConfig, find_extremum_over_p, maximize_cooperator_payoff
from qcoopgames.game import standard_game


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid-points", type=int, default=101)
    args = ap.parse_args()
    cfg = SearchConfig(grid_points=args.grid_points)

    print(f"{'game':<5}{'chan':<5}{'p':>6}{'theta':>8}{'argmax':>10}{'value':>12}{'nash_gain':>12}")
    for players in (3, 4):
        spec = standard_game(players)
        for kind in Channel:
            for p in (0.0, 0.25, 0.5, 0.9):
                for theta in (0.0, math.pi / 4, math.pi / 2):
                    rep = maximize_cooperator_payoff(spec, NoiseModel(kind, p), theta, cfg)
                    print(f"{players}p   {kind.value:<5}{p:>6.2f}{theta:>8.4f}"
                          f"{rep.argmax.q:>10.4f}{rep.value:>12.6f}{rep.nash_violation:>12.3e}")

    print()
    for players in (3, 4):
        ext = find_extremum_over_p(players, Channel.AD, math.pi / 2, cfg)
        print(f"{players}p AD theta=pi/2: maximized payoff is smallest at p* = {ext.p:.6f} (value {ext.value:.6f})")


if __name__ == "__main__":
    main()
