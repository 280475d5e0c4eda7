"""Single-qubit noise channels, their n-qubit product lifts, and Kraus evolution."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import qlinalg
from .qlinalg import IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z


class Channel(str, enum.Enum):
    AD = "ad"  # amplitude damping
    PD = "pd"  # phase damping
    DP = "dp"  # depolarizing

    @property
    def label(self) -> str:
        return self.value.upper()


@dataclass(frozen=True)
class NoiseModel:
    kind: Channel
    p: float

    def __post_init__(self):
        object.__setattr__(self, "kind", Channel(self.kind))
        p = float(self.p)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"decoherence parameter p must lie in [0, 1], got {self.p}")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Kraus operators of a channel on ``qubits`` qubits, stacked as (count, dim, dim)."""

    qubits: int
    operators: np.ndarray

    def __post_init__(self):
        ops = np.array(self.operators, dtype=np.complex128)
        dim = 2**self.qubits
        if self.qubits < 1 or ops.ndim != 3 or ops.shape[0] == 0 or ops.shape[1:] != (dim, dim):
            raise ValueError(
                f"expected a non-empty stack of {dim}x{dim} operators, got shape {ops.shape}"
            )
        ops.flags.writeable = False
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return 2**self.qubits

    def __len__(self) -> int:
        return self.operators.shape[0]

    def __iter__(self):
        return iter(self.operators)


def single_qubit_kraus(model: NoiseModel) -> KrausSet:
    p = model.p
    if model.kind is Channel.AD:
        ops = [[[1, 0], [0, np.sqrt(1 - p)]], [[0, np.sqrt(p)], [0, 0]]]
    elif model.kind is Channel.PD:
        ops = [[[1, 0], [0, np.sqrt(1 - p)]], [[0, 0], [0, np.sqrt(p)]]]
    else:
        w = np.sqrt(p / 3)
        ops = [np.sqrt(1 - p) * IDENTITY_2, w * SIGMA_X, w * SIGMA_Y, w * SIGMA_Z]
    return KrausSet(1, np.array(ops, dtype=np.complex128))


@lru_cache(maxsize=256)
def lift_kraus(model: NoiseModel, n: int) -> KrausSet:
    """All ``m**n`` tensor products of the single-qubit operators.

    Ordering is lexicographic in the per-qubit operator indices, first qubit
    most significant: for AD on two qubits the order is E0E0, E0E1, E1E0, E1E1.
    """
    if n < 1:
        raise ValueError(f"qubit count must be positive, got {n}")
    single = single_qubit_kraus(model).operators
    ops = single
    for _ in range(n - 1):
        m, d = ops.shape[0], ops.shape[1]
        ops = np.einsum("aij,bkl->abikjl", ops, single).reshape(m * single.shape[0], 2 * d, 2 * d)
    return KrausSet(n, ops)


def apply_channel(rho, kraus: KrausSet) -> np.ndarray:
    """Return sum_k E_k rho E_k^dagger."""
    rho = qlinalg.as_matrix(getattr(rho, "matrix", rho))
    if rho.shape != (kraus.dim, kraus.dim):
        raise ValueError(f"state of shape {rho.shape} does not match {kraus.dim}-dim channel")
    ops = kraus.operators
    out = (ops @ rho @ ops.conj().transpose(0, 2, 1)).sum(axis=0)
    out.flags.writeable = False
    return out


def check_completeness(kraus: KrausSet) -> float:
    """Max entrywise deviation of sum_k E_k^dagger E_k from the identity."""
    ops = kraus.operators
    total = np.einsum("kji,kjl->il", ops.conj(), ops)
    return float(np.max(np.abs(total - np.eye(kraus.dim))))
