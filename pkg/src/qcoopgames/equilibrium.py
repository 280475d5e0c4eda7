"""Grid + golden-section searches over strategy parameters, and Nash checks.

The cooperators' maximization is done in lockstep by default: every strategy
parameter takes the same value x and the cooperator payoff is maximized over
x.  Over the full strategy box the cooperator payoff is maximized on the
boundary (at theta = 0 it reduces to q + r - 2qr, which is 1 at (1, 0)), so a
joint maximization does not recover the symmetric critical point at 1/2.  The
``"joint"`` mode is kept for exploring that.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .channels import Channel, NoiseModel
from .game import GameSpec, StrategyProfile, batch_payoffs, noisy_state, standard_game

INV_PHI = (math.sqrt(5) - 1) / 2
TIE_ATOL = 1e-12
FLAT_ATOL = 1e-12
FD_STEP = 1e-4


@dataclass(frozen=True)
class SearchConfig:
    grid_points: int = 101
    refine_tol: float = 1e-6
    seed: int = 0
    mode: str = "lockstep"
    restarts: int = 4  # random restarts for the joint mode

    def __post_init__(self):
        if self.grid_points < 3:
            raise ValueError(f"grid_points must be at least 3, got {self.grid_points}")
        if not self.refine_tol > 0:
            raise ValueError(f"refine_tol must be positive, got {self.refine_tol}")
        if self.mode not in ("lockstep", "joint"):
            raise ValueError(f"unknown search mode {self.mode!r}")

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.grid_points)

    @property
    def step(self) -> float:
        return 1.0 / (self.grid_points - 1)


@dataclass(frozen=True)
class EquilibriumReport:
    argmax: StrategyProfile
    value: float
    stationarity_residual: float
    nash_violation: float
    flat: bool = False


class PExtremum(NamedTuple):
    p: float
    value: float
    flat: bool
    interior: bool


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float) -> float:
    """Maximizer of a unimodal ``f`` on [a, b] to within ``tol``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (a + b) / 2


def _pick(values: np.ndarray, points: np.ndarray) -> int:
    """Index of the best value; ties go to the point nearest the box centre, then lexicographically smallest."""
    best = np.flatnonzero(values >= values.max() - TIE_ATOL)
    dist = np.linalg.norm(points[best] - 0.5, axis=1)
    near = best[dist <= dist.min() + 1e-12]
    return int(near[0])  # points are generated in lexicographic order


class _Surface:
    """Payoffs of one game for a fixed noisy state; caches the channel output."""

    def __init__(self, spec: GameSpec, model: NoiseModel, theta: float):
        self.spec = spec
        self.rho = noisy_state(spec.players, model, theta)
        self.dims = spec.players - 1

    def __call__(self, params) -> np.ndarray:
        return batch_payoffs(self.spec, self.rho, params)

    def cooperator(self, x) -> float:
        return float(self(np.asarray(x, dtype=float).reshape(1, -1))[0, 0])


def _stationarity(surface: _Surface, x: np.ndarray) -> float:
    worst = 0.0
    for k in range(len(x)):
        lo, hi = x.copy(), x.copy()
        lo[k] = max(0.0, x[k] - FD_STEP)
        hi[k] = min(1.0, x[k] + FD_STEP)
        grad = (surface.cooperator(hi) - surface.cooperator(lo)) / (hi[k] - lo[k])
        worst = max(worst, abs(grad))
    return worst


def _lockstep(surface: _Surface, config: SearchConfig):
    xs = config.grid
    values = surface(np.repeat(xs[:, None], surface.dims, axis=1))[:, 0]
    i = _pick(values, xs[:, None])
    x, val = xs[i], values[i]
    flat = np.ptp(values) <= FLAT_ATOL
    if flat:
        return np.full(surface.dims, x), val, True
    f = lambda t: surface.cooperator([t] * surface.dims)
    lo, hi = max(0.0, x - config.step), min(1.0, x + config.step)
    xr = golden_section_max(f, lo, hi, config.refine_tol)
    if f(xr) > val + TIE_ATOL:
        x, val = xr, f(xr)
    return np.full(surface.dims, x), val, False


def _coordinate_refine(surface: _Surface, x: np.ndarray, config: SearchConfig):
    x = x.copy()
    val = surface.cooperator(x)
    for _ in range(50):
        before = val
        for k in range(len(x)):
            def f(t, k=k):
                y = x.copy()
                y[k] = t
                return surface.cooperator(y)

            lo, hi = max(0.0, x[k] - config.step), min(1.0, x[k] + config.step)
            t = golden_section_max(f, lo, hi, config.refine_tol)
            if f(t) > val + TIE_ATOL:
                x[k], val = t, f(t)
        if val - before <= config.refine_tol**2:
            break
    return x, val


def _joint(surface: _Surface, config: SearchConfig):
    xs = config.grid
    points = np.array(list(itertools.product(xs, repeat=surface.dims)))
    values = np.concatenate(
        [surface(points[i : i + 20000])[:, 0] for i in range(0, len(points), 20000)]
    )
    i = _pick(values, points)
    if np.ptp(values) <= FLAT_ATOL:
        return points[i], values[i], True
    best_x, best_val = _coordinate_refine(surface, points[i], config)
    if values[i] >= best_val:
        best_x, best_val = points[i], values[i]
    rng = np.random.default_rng(config.seed)
    for j in rng.choice(len(points), size=min(config.restarts, len(points)), replace=False):
        x, val = _coordinate_refine(surface, points[j], config)
        if val > best_val + TIE_ATOL:
            best_x, best_val = x, val
    return best_x, best_val, False


def maximize_cooperator_payoff(
    spec: GameSpec, model: NoiseModel, theta: float, config: SearchConfig = SearchConfig()
) -> EquilibriumReport:
    surface = _Surface(spec, model, theta)
    search = _lockstep if config.mode == "lockstep" else _joint
    x, value, flat = search(surface, config)
    profile = StrategyProfile.from_params(x)
    return EquilibriumReport(
        argmax=profile,
        value=float(value),
        stationarity_residual=_stationarity(surface, np.asarray(x, dtype=float)),
        nash_violation=_nash(surface, profile, config),
        flat=bool(flat),
    )


def _nash(surface: _Surface, profile: StrategyProfile, config: SearchConfig) -> float:
    base_params = np.array(profile.params())
    base = surface(base_params[None, :])[0]
    xs = config.grid
    gain = 0.0
    # decision-makers: the cooperating pair (q, payoff of A), C (r), D (s)
    for col, player in zip(range(surface.dims), (0, 2, 3)):
        params = np.tile(base_params, (len(xs), 1))
        params[:, col] = xs
        gain = max(gain, float(np.max(surface(params)[:, player]) - base[player]))
    return gain


def nash_check(
    spec: GameSpec,
    model: NoiseModel,
    theta: float,
    profile: StrategyProfile,
    config: SearchConfig = SearchConfig(),
) -> float:
    """Largest payoff gain any single decision-maker finds by deviating on the grid."""
    if profile.players != spec.players:
        raise ValueError(f"{profile.players}-player profile used with a {spec.players}-player game")
    return _nash(_Surface(spec, model, theta), profile, config)


def find_extremum_over_p(
    players: int, kind: Channel, theta: float, config: SearchConfig = SearchConfig()
) -> PExtremum:
    """Minimize the maximized cooperator payoff over the decoherence parameter."""
    spec = standard_game(players)
    kind = Channel(kind)

    def best(p: float) -> float:
        return maximize_cooperator_payoff(spec, NoiseModel(kind, p), theta, config).value

    ps = config.grid
    values = np.array([best(p) for p in ps])
    if np.ptp(values) <= FLAT_ATOL:
        return PExtremum(0.0, float(values[0]), True, False)
    i = int(np.argmin(values))  # argmin takes the smallest p on ties
    p, val = ps[i], values[i]
    lo, hi = max(0.0, p - config.step), min(1.0, p + config.step)
    pr = golden_section_max(lambda t: -best(t), lo, hi, config.refine_tol)
    if best(pr) < val - TIE_ATOL:
        p, val = pr, best(pr)
    return PExtremum(float(p), float(val), False, 0.0 < p < 1.0)
