"""Composite quDit Hilbert spaces with a mixed-radix basis index.

The first register of a layout is the most significant digit, so the ket
``|a>|b>|c>`` over dims ``(d0, d1, d2)`` lives at index ``(a*d1 + b)*d2 + c``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-10

SYSTEM = "system"
PORT = "port"
ROLES = (SYSTEM, PORT)


class DimensionError(ValueError):
    """Raised for invalid or mismatched register dimensions."""


class LayoutError(ValueError):
    """Raised when a state, label list or register index does not fit a layout."""


def check_dim(d: int) -> int:
    if isinstance(d, bool) or int(d) != d:
        raise DimensionError(f"dimension must be an integer, got {d!r}")
    d = int(d)
    if d < 2:
        raise DimensionError(f"dimension must be >= 2, got {d}")
    return d


@dataclass(frozen=True)
class BasisLabel:
    value: int
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "dim", check_dim(self.dim))
        if not 0 <= self.value < self.dim:
            raise LayoutError(f"label {self.value} out of range for dimension {self.dim}")

    def __int__(self):
        return self.value


def _same_dim(s: BasisLabel, k: BasisLabel) -> int:
    if s.dim != k.dim:
        raise DimensionError(f"labels live in different dimensions ({s.dim} vs {k.dim})")
    return s.dim


def mod_add(s: BasisLabel, k: BasisLabel) -> BasisLabel:
    """``s ⊕ k``: addition modulo the common dimension."""
    d = _same_dim(s, k)
    return BasisLabel((s.value + k.value) % d, d)


def mod_sub(s: BasisLabel, k: BasisLabel) -> BasisLabel:
    """``s ⊖ k``: subtraction modulo the common dimension, result in [0, D)."""
    d = _same_dim(s, k)
    return BasisLabel((s.value - k.value) % d, d)


@dataclass(frozen=True)
class Register:
    role: str
    dim: int
    party: str | None = None

    def __post_init__(self):
        if self.role not in ROLES:
            raise LayoutError(f"register role must be one of {ROLES}, got {self.role!r}")
        object.__setattr__(self, "dim", check_dim(self.dim))


@dataclass(frozen=True)
class RegisterLayout:
    registers: tuple[Register, ...]

    def __post_init__(self):
        regs = tuple(self.registers)
        if not regs:
            raise LayoutError("a layout needs at least one register")
        object.__setattr__(self, "registers", regs)

    @classmethod
    def from_dims(cls, dims: Iterable[int], role: str = SYSTEM) -> "RegisterLayout":
        return cls(tuple(Register(role, d) for d in dims))

    def __len__(self):
        return len(self.registers)

    def __add__(self, other: "RegisterLayout") -> "RegisterLayout":
        return RegisterLayout(self.registers + other.registers)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(r.dim for r in self.registers)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64))

    def check_registers(self, indices: Sequence[int], allow_empty: bool = False) -> tuple[int, ...]:
        idx = tuple(int(i) for i in indices)
        if not idx and not allow_empty:
            raise LayoutError("register list is empty")
        if len(set(idx)) != len(idx):
            raise LayoutError(f"register indices must be distinct: {idx}")
        for i in idx:
            if not 0 <= i < len(self.registers):
                raise LayoutError(f"register index {i} out of range for {len(self.registers)} registers")
        return idx

    def encode(self, labels: Sequence[int]) -> int:
        """Mixed-radix index of a label tuple."""
        labels = [int(v) for v in labels]
        if len(labels) != len(self.registers):
            raise LayoutError(f"expected {len(self.registers)} labels, got {len(labels)}")
        index = 0
        for v, d in zip(labels, self.dims):
            if not 0 <= v < d:
                raise LayoutError(f"label {v} out of range for dimension {d}")
            index = index * d + v
        return index

    def decode(self, index: int) -> tuple[int, ...]:
        index = int(index)
        if not 0 <= index < self.total_dim:
            raise LayoutError(f"index {index} out of range for total dimension {self.total_dim}")
        labels = []
        for d in reversed(self.dims):
            index, v = divmod(index, d)
            labels.append(v)
        return tuple(reversed(labels))

    def select(self, indices: Sequence[int]) -> "RegisterLayout":
        return RegisterLayout(tuple(self.registers[i] for i in self.check_registers(indices)))


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over a :class:`RegisterLayout` (read-only)."""

    layout: RegisterLayout
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.size != self.layout.total_dim:
            raise LayoutError(
                f"{amps.size} amplitudes do not match layout total dimension {self.layout.total_dim}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.layout.dims

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= tol

    def normalized(self) -> "StateVector":
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.layout, self.amplitudes / nrm)

    def amplitude(self, labels: Sequence[int]) -> complex:
        return complex(self.amplitudes[self.layout.encode(labels)])

    def basis_labels(self, tol: float = 1e-12) -> tuple[int, ...] | None:
        """Labels of the single basis ket this state equals up to phase, else None."""
        mags = np.abs(self.amplitudes)
        i = int(np.argmax(mags))
        if abs(mags[i] - 1.0) > tol:
            return None
        rest = np.delete(mags, i)
        if rest.size and rest.max() > tol:
            return None
        return self.layout.decode(i)

    def permute(self, order: Sequence[int]) -> "StateVector":
        """Reorder registers: new register ``j`` is old register ``order[j]``."""
        order = self.layout.check_registers(order)
        if len(order) != len(self.layout):
            raise LayoutError("permutation must mention every register once")
        tensor = self.amplitudes.reshape(self.dims).transpose(order)
        return StateVector(self.layout.select(order), tensor.reshape(-1))


def basis_state(labels: Sequence[int | BasisLabel], layout: RegisterLayout) -> StateVector:
    values = []
    for lab, d in zip(labels, layout.dims):
        if isinstance(lab, BasisLabel) and lab.dim != d:
            raise DimensionError(f"label dimension {lab.dim} does not match register dimension {d}")
        values.append(int(lab))
    if len(labels) != len(layout):
        raise LayoutError(f"expected {len(layout)} labels, got {len(labels)}")
    amps = np.zeros(layout.total_dim, dtype=np.complex128)
    amps[layout.encode(values)] = 1.0
    return StateVector(layout, amps)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    return StateVector(a.layout + b.layout, np.kron(a.amplitudes, b.amplitudes))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if a.dims != b.dims:
        raise LayoutError(f"layouts differ: {a.dims} vs {b.dims}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))
