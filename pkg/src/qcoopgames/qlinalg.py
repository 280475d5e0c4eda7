"""Small dense complex linear algebra on numpy arrays.

Every function accepts anything ``numpy.asarray`` understands and returns a
fresh, read-only ``complex128`` array, so results can be shared between
sweep workers without copying.
"""

from __future__ import annotations

import numpy as np

ATOL = 1e-12


def as_matrix(a) -> np.ndarray:
    """Validate ``a`` as a finite 2-D complex matrix and return a frozen copy."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    m.flags.writeable = False
    return m


def _freeze(m: np.ndarray) -> np.ndarray:
    m.flags.writeable = False
    return m


def _square(a: np.ndarray, op: str) -> None:
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{op} needs a square matrix, got shape {a.shape}")


def kron(a, b) -> np.ndarray:
    """Kronecker product; ``a`` is the most significant (leftmost) factor."""
    return _freeze(np.kron(as_matrix(a), as_matrix(b)))


def kron_all(*factors) -> np.ndarray:
    out = as_matrix(factors[0])
    for f in factors[1:]:
        out = kron(out, f)
    return out


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    return _freeze(a @ b)


def adjoint(a) -> np.ndarray:
    return _freeze(as_matrix(a).conj().T.copy())


def trace(a) -> complex:
    a = as_matrix(a)
    _square(a, "trace")
    return complex(np.trace(a))


def diagonal(a) -> np.ndarray:
    a = as_matrix(a)
    _square(a, "diagonal")
    return _freeze(np.diag(a).copy())


def identity(dim: int) -> np.ndarray:
    return _freeze(np.eye(dim, dtype=np.complex128))


def ket(index: int, qubits: int) -> np.ndarray:
    """Computational basis column vector |index> with the first qubit most significant."""
    v = np.zeros((2**qubits, 1), dtype=np.complex128)
    v[index, 0] = 1.0
    return _freeze(v)


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=np.complex128).reshape(-1, 1)
    return _freeze(v @ v.conj().T)


IDENTITY_2 = identity(2)
SIGMA_X = as_matrix([[0, 1], [1, 0]])
SIGMA_Y = as_matrix([[0, -1j], [1j, 0]])
SIGMA_Z = as_matrix([[1, 0], [0, -1]])
