"""Sorter unitaries on ``system ⊗ port`` and their application to registers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .hilbert import StateVector, check_dim, LayoutError, DimensionError

UNITARY_TOL = 1e-10


class NotUnitaryError(ValueError):
    pass


def is_unitary(m, tol: float = UNITARY_TOL) -> bool:
    """True iff ``max |M†M - I| <= tol`` entrywise."""
    mat = m.matrix if isinstance(m, LinearMap) else np.asarray(m)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"unitarity needs a square matrix, got shape {mat.shape}")
    gram = mat.conj().T @ mat
    return bool(np.max(np.abs(gram - np.eye(mat.shape[0]))) <= tol)


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Dense complex matrix with no unitarity requirement."""

    matrix: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.ndim != 2:
            raise ValueError(f"matrix must be 2-D, got shape {mat.shape}")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def rank(self) -> int:
        return int(np.linalg.matrix_rank(self.matrix))


@dataclass(frozen=True, eq=False)
class Unitary(LinearMap):
    """Square matrix checked against ``U†U = I`` at construction."""

    def __post_init__(self):
        super().__post_init__()
        if not is_unitary(self.matrix, UNITARY_TOL):
            raise NotUnitaryError(f"{self.label or 'matrix'} is not unitary within {UNITARY_TOL}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other: "Unitary") -> "Unitary":
        if not isinstance(other, Unitary):
            return NotImplemented
        return Unitary(self.matrix @ other.matrix, f"{self.label}·{other.label}")


def identity(d: int) -> Unitary:
    return Unitary(np.eye(d), f"I_{d}")


def kron(a: Unitary, b: Unitary) -> Unitary:
    return Unitary(np.kron(a.matrix, b.matrix), f"{a.label}⊗{b.label}")


def power(u: Unitary, k: int) -> np.ndarray:
    """``U**k`` by repeated multiplication (k is small; keeps permutations exact)."""
    if k < 0:
        raise ValueError("negative powers are not supported; use adjoint")
    out = np.eye(u.dim, dtype=np.complex128)
    for _ in range(k):
        out = u.matrix @ out
    return out


def pauli_x(d: int) -> Unitary:
    """Cyclic shift ``X_D |j> = |j ⊕ 1>``."""
    d = check_dim(d)
    m = np.zeros((d, d), dtype=np.complex128)
    j = np.arange(d)
    m[(j + 1) % d, j] = 1.0
    return Unitary(m, f"X_{d}")


def adjoint(u: Unitary) -> Unitary:
    label = u.label[:-1] if u.label.endswith("†") else u.label + "†"
    return Unitary(u.matrix.conj().T, label)


def controlled(u: Unitary, control_dim: int) -> Unitary:
    """``C(U)|s>|k> = |s> U^s |k>``: control first, target second."""
    d = check_dim(control_dim)
    n = u.dim
    m = np.zeros((d * n, d * n), dtype=np.complex128)
    block = np.eye(n, dtype=np.complex128)
    for s in range(d):
        m[s * n:(s + 1) * n, s * n:(s + 1) * n] = block
        block = u.matrix @ block
    return Unitary(m, f"C({u.label})")


def controlled_rev(u: Unitary, control_dim: int) -> Unitary:
    """``C̃(U)|s>|k> = (U^k |s>)|k>``: target first, control second."""
    d = check_dim(control_dim)
    n = u.dim
    m = np.zeros((n * d, n * d), dtype=np.complex128)
    block = np.eye(n, dtype=np.complex128)
    for k in range(d):
        # rows/cols (s, k) sit at s*d + k
        m[k::d, k::d] = block
        block = u.matrix @ block
    return Unitary(m, f"C~({u.label})")


def swap(d: int) -> Unitary:
    d = check_dim(d)
    m = np.zeros((d * d, d * d), dtype=np.complex128)
    s, n = np.divmod(np.arange(d * d), d)
    m[n * d + s, s * d + n] = 1.0
    return Unitary(m, f"SWAP_{d}")


def sqs(d: int) -> Unitary:
    """Single-input-port sorter ``|s>|k> -> |s>|s ⊕ k>``."""
    d = check_dim(d)
    out = controlled(pauli_x(d), d)
    return Unitary(out.matrix, f"SQS_{d}")


def mqs(d: int) -> Unitary:
    """Multi-input-port sorter ``|s>|k> -> |s ⊖ k>|s>``, built as ``C(X)·C̃(X†)``."""
    d = check_dim(d)
    x = pauli_x(d)
    out = controlled(x, d) @ controlled_rev(adjoint(x), d)
    return Unitary(out.matrix, f"MQS_{d}")


def perfect_sorter_map(d: int) -> LinearMap:
    """The would-be ``|s>|k> -> |s>|s>`` device. Not unitary for any D."""
    d = check_dim(d)
    m = np.zeros((d * d, d * d), dtype=np.complex128)
    s, k = np.divmod(np.arange(d * d), d)
    m[s * d + s, s * d + k] = 1.0
    return LinearMap(m, f"PERFECT_{d}")


@dataclass(frozen=True)
class GateApplication:
    gate: Unitary
    targets: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))

    def check(self, dims: Sequence[int]) -> None:
        if not self.targets:
            raise LayoutError("gate application needs at least one target register")
        if len(set(self.targets)) != len(self.targets):
            raise LayoutError(f"target registers must be distinct: {self.targets}")
        for t in self.targets:
            if not 0 <= t < len(dims):
                raise LayoutError(f"target register {t} out of range for {len(dims)} registers")
        span = int(np.prod([dims[t] for t in self.targets]))
        if span != self.gate.dim:
            raise DimensionError(
                f"gate of dimension {self.gate.dim} does not fit registers {self.targets} (span {span})"
            )


def apply(app: GateApplication, state: StateVector) -> StateVector:
    """Act with ``app.gate`` on its target registers, identity elsewhere."""
    app.check(state.dims)
    amps = kernels.apply_gate(state.amplitudes, state.dims, app.targets, app.gate.matrix)
    return StateVector(state.layout, amps)
