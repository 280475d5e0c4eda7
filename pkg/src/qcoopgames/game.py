"""Three- and four-player cooperative games played through a noise channel.

Basis convention: computational index ``i`` (0-based) encodes the players'
bits with player A as the most significant bit, so for three players index
3 is |011>, where A disagrees with both B and C.  Weight tables are stored
per player as rows over these indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qlinalg
from .channels import NoiseModel, apply_channel, lift_kraus
from .qlinalg import IDENTITY_2, SIGMA_X

ATOL = 1e-12
MIN_NORM = 1e-15
PLAYER_NAMES = ("A", "B", "C", "D")


class DegenerateStrategyError(ValueError):
    """The strategy operators annihilate the state, so it cannot be renormalized."""


def _unit_interval(name: str, x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x}")
    return x


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = qlinalg.as_matrix(self.matrix)
        dim = m.shape[0]
        if m.shape[1] != dim or dim < 2 or dim & (dim - 1):
            raise ValueError(f"density matrix must be 2^n x 2^n, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > ATOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > ATOL:
            raise ValueError(f"density matrix trace is {np.trace(m).real}, not 1")
        if np.min(np.diag(m).real) < -ATOL:
            raise ValueError("density matrix has a negative population")
        object.__setattr__(self, "matrix", m)

    @property
    def qubits(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    @property
    def populations(self) -> np.ndarray:
        return np.diag(self.matrix).real.copy()


@dataclass(frozen=True)
class StrategyProfile:
    """Cooperator parameter ``q`` and solo parameters ``r`` (player C) and ``s`` (player D)."""

    q: float
    r: float
    s: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "q", _unit_interval("q", self.q))
        object.__setattr__(self, "r", _unit_interval("r", self.r))
        if self.s is not None:
            object.__setattr__(self, "s", _unit_interval("s", self.s))

    @property
    def players(self) -> int:
        return 3 if self.s is None else 4

    def params(self) -> tuple[float, ...]:
        return (self.q, self.r) if self.s is None else (self.q, self.r, self.s)

    @classmethod
    def from_params(cls, params) -> "StrategyProfile":
        return cls(*params)


def _weights(players: int, wins: dict[str, list[int]], losses: dict[str, list[int]], stake: int):
    table = np.zeros((players, 2**players))
    for k, name in enumerate(PLAYER_NAMES[:players]):
        # tables are quoted with 1-based outcome labels
        for i in wins[name]:
            table[k, i - 1] = 1
        for i in losses[name]:
            table[k, i - 1] = -stake
    return table


THREE_PLAYER_WEIGHTS = _weights(
    3,
    wins={"A": [2, 3, 6, 7], "B": [2, 4, 5, 7], "C": [3, 4, 5, 6]},
    losses={"A": [4, 5], "B": [3, 6], "C": [2, 7]},
    stake=2,
)

FOUR_PLAYER_WEIGHTS = _weights(
    4,
    wins={
        "A": [2, 3, 5, 12, 14, 15],
        "B": [2, 3, 8, 9, 14, 15],
        "C": [2, 5, 8, 9, 12, 15],
        "D": [3, 5, 8, 9, 12, 14],
    },
    losses={"A": [8, 9], "B": [5, 12], "C": [3, 14], "D": [2, 15]},
    stake=3,
)


@dataclass(frozen=True, eq=False)
class GameSpec:
    """Payoff weights, one row per player over the computational basis.

    The zero-sum property of the table is not enforced here so that broken
    tables can be fed to the verification suite; see :meth:`zero_sum_defect`.
    """

    players: int
    weights: np.ndarray

    def __post_init__(self):
        if self.players not in (3, 4):
            raise ValueError(f"only 3- and 4-player games are defined, got {self.players}")
        w = np.array(self.weights, dtype=float)
        if w.shape != (self.players, 2**self.players):
            raise ValueError(f"weights must have shape {(self.players, 2**self.players)}")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def qubits(self) -> int:
        return self.players

    def zero_sum_defect(self) -> float:
        return float(np.max(np.abs(self.weights.sum(axis=0))))


def standard_game(players: int) -> GameSpec:
    if players == 3:
        return GameSpec(3, THREE_PLAYER_WEIGHTS)
    if players == 4:
        return GameSpec(4, FOUR_PLAYER_WEIGHTS)
    raise ValueError(f"only 3- and 4-player games are defined, got {players}")


def check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= math.pi / 2 + 1e-15:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta}")
    return min(theta, math.pi / 2)


def initial_state(players: int, theta: float) -> DensityMatrix:
    """cos(theta/2)|0...0> + sin(theta/2)|1...1> as a density matrix."""
    if players not in (3, 4):
        raise ValueError(f"only 3- and 4-player games are defined, got {players}")
    theta = check_theta(theta)
    psi = np.zeros(2**players, dtype=np.complex128)
    psi[0] = math.cos(theta / 2)
    psi[-1] = math.sin(theta / 2)
    return DensityMatrix(qlinalg.projector(psi))


def cooperator_op(q: float) -> np.ndarray:
    q = _unit_interval("q", q)
    return qlinalg.as_matrix(
        math.sqrt(q) * np.eye(4) + math.sqrt(1 - q) * np.kron(SIGMA_X, SIGMA_X)
    )


def solo_op(x: float) -> np.ndarray:
    x = _unit_interval("strategy parameter", x)
    return qlinalg.as_matrix(math.sqrt(x) * IDENTITY_2 + math.sqrt(1 - x) * SIGMA_X)


def strategy_operator(profile: StrategyProfile) -> np.ndarray:
    factors = [cooperator_op(profile.q), solo_op(profile.r)]
    if profile.s is not None:
        factors.append(solo_op(profile.s))
    return qlinalg.kron_all(*factors)


def noisy_state(players: int, model: NoiseModel, theta: float) -> DensityMatrix:
    rho = initial_state(players, theta)
    return DensityMatrix(apply_channel(rho, lift_kraus(model, players)))


def final_state(rho_noisy: DensityMatrix, profile: StrategyProfile) -> DensityMatrix:
    if rho_noisy.qubits != profile.players:
        raise ValueError(
            f"{rho_noisy.qubits}-qubit state does not match a {profile.players}-player profile"
        )
    u = strategy_operator(profile)
    out = u @ rho_noisy.matrix @ u.conj().T
    norm = np.trace(out).real
    if norm < MIN_NORM:
        raise DegenerateStrategyError(
            f"strategy profile {profile.params()} annihilates the state (trace {norm:.3g})"
        )
    out = out / norm
    # exact symmetrization removes rounding asymmetry of the sandwich
    return DensityMatrix((out + out.conj().T) / 2)


def payoffs(rho_final: DensityMatrix, spec: GameSpec) -> np.ndarray:
    """Per-player payoff: weighted sum of the final populations."""
    if rho_final.qubits != spec.qubits:
        raise ValueError(f"{rho_final.qubits}-qubit state does not match a {spec.players}-player game")
    return spec.weights @ rho_final.populations


def play(spec: GameSpec, model: NoiseModel, theta: float, profile: StrategyProfile) -> np.ndarray:
    """Prepare, decohere, apply the strategies, measure; returns payoffs A, B, C(, D)."""
    if profile.players != spec.players:
        raise ValueError(f"{profile.players}-player profile used with a {spec.players}-player game")
    rho = noisy_state(spec.players, model, theta)
    return payoffs(final_state(rho, profile), spec)


def _stack_solo(x: np.ndarray) -> np.ndarray:
    a, b = np.sqrt(x), np.sqrt(1 - x)
    out = np.zeros((x.size, 2, 2))
    out[:, 0, 0] = out[:, 1, 1] = a
    out[:, 0, 1] = out[:, 1, 0] = b
    return out


def _stack_cooperator(q: np.ndarray) -> np.ndarray:
    xx = np.kron(SIGMA_X, SIGMA_X).real
    return np.sqrt(q)[:, None, None] * np.eye(4) + np.sqrt(1 - q)[:, None, None] * xx


def batch_payoffs(spec: GameSpec, rho_noisy: DensityMatrix, params) -> np.ndarray:
    """Payoffs for many strategy profiles against one noisy state.

    ``params`` has shape (count, players - 1) with columns q, r(, s).  Returns
    an array of shape (count, players).  Equivalent to calling
    :func:`final_state` and :func:`payoffs` per row.
    """
    params = np.atleast_2d(np.asarray(params, dtype=float))
    if params.shape[1] != spec.players - 1:
        raise ValueError(f"expected {spec.players - 1} strategy parameters per profile")
    if np.any((params < 0) | (params > 1)):
        raise ValueError("strategy parameters must lie in [0, 1]")
    u = _stack_cooperator(params[:, 0])
    for col in range(1, params.shape[1]):
        solo = _stack_solo(params[:, col])
        n, d = u.shape[0], u.shape[1]
        u = np.einsum("nij,nkl->nikjl", u, solo).reshape(n, 2 * d, 2 * d)
    # strategy operators are real, so diag(U rho U^T) = rowsum((U rho) * U)
    pops = np.einsum("nij,jk,nik->ni", u, rho_noisy.matrix, u, optimize=True).real
    norm = pops.sum(axis=1)
    if np.any(norm < MIN_NORM):
        bad = params[np.argmin(norm)]
        raise DegenerateStrategyError(f"strategy profile {tuple(bad)} annihilates the state")
    return (pops / norm[:, None]) @ spec.weights.T
