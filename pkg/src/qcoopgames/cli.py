"""Command line interface: ``qcoopgames {payoff,surface,verify,equilibrium}``.

Exit codes: 0 success, 1 invalid input or unwritable output, 2 failed check.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import checks
from .analytic import closed_form_payoffs
from .channels import Channel, NoiseModel
from .equilibrium import SearchConfig, maximize_cooperator_payoff
from .game import StrategyProfile, batch_payoffs, noisy_state, play, standard_game

EXIT_OK, EXIT_INVALID, EXIT_CHECK = 0, 1, 2
OUTPUT_DIR_ENV = "QCOOPGAMES_OUTPUT_DIR"
CSV_HEADER = ["players", "channel", "p", "theta", "q", "r", "s", "P_A", "P_B", "P_C", "P_D"]
# user-typed angles such as 1.5708 overshoot pi/2 slightly
THETA_SLACK = 5e-5


class UsageError(Exception):
    pass


class CheckFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def fmt(x) -> str:
    return "" if x is None else f"{x:.12g}"


def _theta(args) -> float:
    theta = math.radians(args.theta_deg) if args.theta_deg is not None else args.theta
    if not -THETA_SLACK <= theta <= math.pi / 2 + THETA_SLACK:
        raise UsageError(f"--theta must lie in [0, pi/2], got {theta}")
    return min(max(theta, 0.0), math.pi / 2)


def _unit(name: str, x: float | None) -> float | None:
    if x is not None and not 0.0 <= x <= 1.0:
        raise UsageError(f"--{name} must lie in [0, 1], got {x}")
    return x


def _profile(args) -> StrategyProfile:
    _unit("q", args.q)
    _unit("r", args.r)
    _unit("s", args.s)
    if args.players == 4 and args.s is None:
        raise UsageError("--s is required for the four-player game")
    if args.players == 3 and args.s is not None:
        raise UsageError("--s is only valid for the four-player game")
    return StrategyProfile(args.q, args.r, args.s)


def _channels(name: str) -> list[tuple[str, Channel, bool]]:
    """(label, kind, noiseless) triples for a CLI channel name."""
    if name == "all":
        return [(k.value, k, False) for k in Channel]
    if name == "nd":
        return [("nd", Channel.AD, True)]
    return [(name, Channel(name), False)]


def _add_game_args(p: argparse.ArgumentParser, channels: list[str]):
    p.add_argument("--players", type=int, choices=(3, 4), required=True)
    p.add_argument("--channel", choices=channels, required=True)


def _add_theta(p: argparse.ArgumentParser, required: bool):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--theta", type=float, help="entanglement angle in radians, [0, pi/2]")
    g.add_argument("--theta-deg", type=float, help="entanglement angle in degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcoopgames", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pay = sub.add_parser("payoff", help="payoffs for one parameter point")
    _add_game_args(pay, ["ad", "pd", "dp", "nd"])
    pay.add_argument("--p", type=float, default=0.0)
    _add_theta(pay, required=True)
    pay.add_argument("--q", type=float, required=True)
    pay.add_argument("--r", type=float, required=True)
    pay.add_argument("--s", type=float)
    pay.add_argument("--analytic", action="store_true", help="also print closed-form values")

    surf = sub.add_parser("surface", help="payoffs over a (p, theta) grid")
    _add_game_args(surf, ["ad", "pd", "dp", "nd", "all"])
    surf.add_argument("--q", type=float, required=True)
    surf.add_argument("--r", type=float, required=True)
    surf.add_argument("--s", type=float)
    surf.add_argument("--p-grid", type=float, nargs=3, metavar=("MIN", "MAX", "COUNT"),
                      default=[0.0, 1.0, 101])
    surf.add_argument("--theta-grid", type=float, nargs=3, metavar=("MIN", "MAX", "COUNT"),
                      default=[0.0, math.pi / 2, 101])
    surf.add_argument("--format", choices=("csv", "json"), default="csv")
    surf.add_argument("--output", help=f"file path, '-' for stdout (default: ${OUTPUT_DIR_ENV} or stdout)")

    ver = sub.add_parser("verify", help="run the invariant suite")
    ver.add_argument("--seed", type=int, default=42)
    ver.add_argument("--samples", type=int, default=1000)

    eq = sub.add_parser("equilibrium", help="maximize the cooperator payoff and check Nash stability")
    _add_game_args(eq, ["ad", "pd", "dp", "nd"])
    eq.add_argument("--p", type=float, default=0.0)
    _add_theta(eq, required=True)
    eq.add_argument("--grid-points", type=int, default=101)
    eq.add_argument("--tol", type=float, default=1e-6)
    eq.add_argument("--seed", type=int, default=0)
    eq.add_argument("--mode", choices=("lockstep", "joint"), default="lockstep")
    return parser


def cmd_payoff(args, out) -> int:
    profile = _profile(args)
    theta = _theta(args)
    _unit("p", args.p)
    [(label, kind, noiseless)] = _channels(args.channel)
    p = 0.0 if noiseless else args.p
    spec = standard_game(args.players)
    numeric = play(spec, NoiseModel(kind, p), theta, profile)
    names = [f"P_{c}" for c in "ABCD"[: args.players]]
    if args.analytic:
        exact = closed_form_payoffs(args.players, kind, p, theta, *profile.params())
        print(f"{'player':<6} {'numeric':>20} {'analytic':>20} {'abs_diff':>10}", file=out)
        for name, a, b in zip(names, numeric, exact):
            print(f"{name:<6} {a:>20.12g} {b:>20.12g} {abs(a - b):>10.2e}", file=out)
    else:
        for name, a in zip(names, numeric):
            print(f"{name} {a:.12g}", file=out)
    return EXIT_OK


def _grid(name: str, triple, lo: float, hi: float) -> np.ndarray:
    a, b, count = triple
    if count != int(count) or count < 1:
        raise UsageError(f"--{name} count must be a positive integer, got {count}")
    count = int(count)
    if count == 1 and a != b:
        raise UsageError(f"--{name} with a single point needs MIN == MAX")
    if not (lo <= a <= hi and lo <= b <= hi and a <= b):
        raise UsageError(f"--{name} range must satisfy {lo} <= MIN <= MAX <= {hi:.6g}")
    return np.linspace(a, b, count)


def surface_rows(players: int, channel: str, profile: StrategyProfile, p_grid, theta_grid):
    """Rows of the sweep in grid order: p outermost, then theta, then channel."""
    spec = standard_game(players)
    chans = _channels(channel)
    rows = []
    for p in p_grid:
        for theta in theta_grid:
            for label, kind, noiseless in chans:
                pv = 0.0 if noiseless else float(p)
                rho = noisy_state(players, NoiseModel(kind, pv), float(theta))
                pay = batch_payoffs(spec, rho, [profile.params()])[0]
                if abs(pay.sum()) > 1e-12:
                    raise CheckFailure(f"zero-sum violated at p={pv}, theta={theta}: {pay.sum():.3e}")
                pay = list(pay) + [None] * (4 - players)
                rows.append([players, label, pv, float(theta), profile.q, profile.r, profile.s, *pay])
    return rows


def render(rows, fmt_name: str) -> str:
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in rows:
            w.writerow([row[0], row[1], *(fmt(v) for v in row[2:])])
        return buf.getvalue()
    records = [
        {k: (v if k in ("players", "channel") or v is None else float(fmt(v)))
         for k, v in zip(CSV_HEADER, row)}
        for row in rows
    ]
    return json.dumps({"columns": CSV_HEADER, "rows": records}, indent=1) + "\n"


def cmd_surface(args, out) -> int:
    profile = _profile(args)
    p_grid = _grid("p-grid", args.p_grid, 0.0, 1.0)
    theta_grid = _grid("theta-grid", args.theta_grid, 0.0, math.pi / 2 + THETA_SLACK)
    theta_grid = np.minimum(theta_grid, math.pi / 2)
    if args.channel == "nd":
        p_grid = np.array([0.0])
    text = render(surface_rows(args.players, args.channel, profile, p_grid, theta_grid), args.format)

    target = args.output
    if target is None and os.environ.get(OUTPUT_DIR_ENV):
        target = str(Path(os.environ[OUTPUT_DIR_ENV]) / f"surface_{args.players}p_{args.channel}.{args.format}")
    if target is None or target == "-":
        out.write(text)
        return EXIT_OK
    try:
        with open(target, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {target}: {exc}") from exc
    print(f"wrote {target}", file=out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    results = checks.run_checks(seed=args.seed, samples=args.samples)
    for res in results:
        print(res.line(), file=out)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("failing checks: " + ", ".join(failed), file=out)
        return EXIT_CHECK
    print(f"all {len(results)} checks passed (seed={args.seed}, samples={args.samples})", file=out)
    return EXIT_OK


def cmd_equilibrium(args, out) -> int:
    theta = _theta(args)
    _unit("p", args.p)
    [(label, kind, noiseless)] = _channels(args.channel)
    try:
        config = SearchConfig(grid_points=args.grid_points, refine_tol=args.tol,
                              seed=args.seed, mode=args.mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    model = NoiseModel(kind, 0.0 if noiseless else args.p)
    rep = maximize_cooperator_payoff(standard_game(args.players), model, theta, config)
    params = " ".join(f"{n}={v:.6g}" for n, v in zip("qrs", rep.argmax.params()))
    print(f"argmax: {params}", file=out)
    print(f"value: {rep.value:.12g}", file=out)
    print(f"stationarity_residual: {rep.stationarity_residual:.3e}", file=out)
    print(f"nash_violation: {rep.nash_violation:.3e}", file=out)
    print(f"flat: {'yes' if rep.flat else 'no'}", file=out)
    return EXIT_OK


COMMANDS = {
    "payoff": cmd_payoff,
    "surface": cmd_surface,
    "verify": cmd_verify,
    "equilibrium": cmd_equilibrium,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, ValueError) as exc:
        print(f"qcoopgames {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CheckFailure as exc:
        print(f"qcoopgames {args.command}: check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
