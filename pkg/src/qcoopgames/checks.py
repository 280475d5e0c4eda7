"""Seeded invariant suite run by ``qcoopgames verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import closed_form_payoffs
from .channels import Channel, NoiseModel, apply_channel, check_completeness, lift_kraus
from .game import GameSpec, StrategyProfile, play, standard_game

P_LEVELS = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<34} max_dev={self.max_deviation:.3e}  tol={self.tolerance:.0e}"


def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_tuple(players: int, rng: np.random.Generator, p=None, theta=None):
    """(p, theta, profile) drawn uniformly from the parameter box."""
    p = rng.uniform(0, 1) if p is None else p
    theta = rng.uniform(0, math.pi / 2) if theta is None else theta
    profile = StrategyProfile.from_params(rng.uniform(0, 1, size=players - 1))
    return p, theta, profile


def _channel_checks(rng) -> list[CheckResult]:
    complete, trace = 0.0, 0.0
    for kind in Channel:
        for n in range(1, 5):
            for p in P_LEVELS:
                kraus = lift_kraus(NoiseModel(kind, p), n)
                complete = max(complete, check_completeness(kraus))
                rho = random_density_matrix(2**n, rng)
                trace = max(trace, abs(np.trace(apply_channel(rho, kraus)) - 1))
    return [
        CheckResult("kraus_completeness", complete, 1e-12),
        CheckResult("trace_preservation", trace, 1e-12),
    ]


def run_checks(seed: int = 42, samples: int = 1000, specs: dict[int, GameSpec] | None = None):
    specs = specs or {n: standard_game(n) for n in (3, 4)}
    rng = np.random.default_rng(seed)
    results = _channel_checks(rng)

    zero_sum = 0.0
    for players, spec in specs.items():
        for kind in Channel:
            dev = 0.0
            for _ in range(samples):
                p, theta, profile = random_tuple(players, rng)
                numeric = play(spec, NoiseModel(kind, p), theta, profile)
                exact = closed_form_payoffs(players, kind, p, theta, *profile.params())
                dev = max(dev, float(np.max(np.abs(numeric - exact))))
                zero_sum = max(zero_sum, abs(float(numeric.sum())))
            results.append(CheckResult(f"oracle_equivalence_{players}p_{kind.value}", dev, 1e-10))
    results.append(CheckResult("zero_sum", zero_sum, 1e-12))

    half, dp_zero, coincide, flat0 = 0.0, 0.0, 0.0, 0.0
    for players, spec in specs.items():
        centre = StrategyProfile.from_params([0.5] * (players - 1))
        for p in np.linspace(0, 1, 21):
            for theta in np.linspace(0, math.pi / 2, 21):
                coop = play(spec, NoiseModel(Channel.PD, p), theta, centre)[0]
                half = max(half, abs(coop - 0.5))
        for _ in range(100):
            _, theta, profile = random_tuple(players, rng)
            out = play(spec, NoiseModel(Channel.DP, 0.75), theta, profile)
            dp_zero = max(dp_zero, float(np.max(np.abs(out))))
            ad = play(spec, NoiseModel(Channel.AD, 1.0), theta, profile)
            pd = play(spec, NoiseModel(Channel.PD, 1.0), theta, profile)
            coincide = max(coincide, float(np.max(np.abs(ad - pd))))
        for _ in range(20):
            _, _, profile = random_tuple(players, rng)
            for kind in (Channel.AD, Channel.PD):
                rows = np.array(
                    [play(spec, NoiseModel(kind, p), 0.0, profile) for p in np.linspace(0, 1, 11)]
                )
                flat0 = max(flat0, float(np.max(np.ptp(rows, axis=0))))
    results += [
        CheckResult("pd_cooperator_half", half, 1e-12),
        CheckResult("dp_zero_at_three_quarters", dp_zero, 1e-12),
        CheckResult("ad_pd_coincide_at_p1", coincide, 1e-12),
        CheckResult("theta0_p_independence", flat0, 1e-12),
    ]
    return results
