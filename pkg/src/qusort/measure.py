"""Computational-basis measurement: marginals, collapse and seeded shots."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .hilbert import NORM_TOL, LayoutError, StateVector
from .rng import check_seed

DEFAULT_SEED = 42
DENSE_LIMIT = 256  # keep explicit zeros for label spaces up to this size


class ImpossibleOutcomeError(ValueError):
    """Collapse was requested onto an outcome of probability zero."""


@dataclass(frozen=True)
class OutcomeDistribution:
    registers: tuple[int, ...]
    probs: dict[tuple[int, ...], float]

    def __post_init__(self):
        object.__setattr__(self, "registers", tuple(self.registers))
        probs = {tuple(int(v) for v in k): float(p) for k, p in self.probs.items()}
        if any(p < 0 for p in probs.values()):
            raise ValueError("probabilities must be non-negative")
        total = sum(probs.values())
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probs", dict(sorted(probs.items())))

    def __getitem__(self, labels) -> float:
        return self.probs.get(tuple(labels), 0.0)

    def items(self):
        return self.probs.items()

    def support(self) -> list[tuple[int, ...]]:
        return [k for k, p in self.probs.items() if p > 0.0]


@dataclass(frozen=True)
class ShotRecord:
    seed: int
    shots: int
    counts: dict[tuple[int, ...], int]

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not add up to the number of shots")


@dataclass(frozen=True, eq=False)
class CollapseResult:
    """Post-measurement branch.

    ``post_state`` is normalized with its largest amplitude made real and
    positive; ``phase`` restores the dropped global phase, so the projected
    (unnormalized) vector equals ``sqrt(probability) * phase * post_state``.
    """

    outcome: tuple[int, ...]
    probability: float
    post_state: StateVector = field(repr=False)
    phase: complex = 1.0


def marginal(state: StateVector, registers: Sequence[int]) -> OutcomeDistribution:
    regs = state.layout.check_registers(registers)
    dims = [state.dims[r] for r in regs]
    flat = kernels.marginal_probs(state.amplitudes, state.dims, regs)
    labels = itertools.product(*(range(d) for d in dims))
    if flat.size <= DENSE_LIMIT:
        probs = dict(zip(labels, flat.tolist()))
    else:
        nz = np.flatnonzero(flat)
        probs = {tuple(int(v) for v in np.unravel_index(i, dims)): float(flat[i]) for i in nz}
    return OutcomeDistribution(regs, probs)


def _projection_mask(state: StateVector, registers, outcome) -> np.ndarray:
    mask = np.zeros(state.dims, dtype=bool)
    index = [slice(None)] * len(state.dims)
    for r, v in zip(registers, outcome):
        if not 0 <= v < state.dims[r]:
            raise LayoutError(f"outcome label {v} out of range for register {r}")
        index[r] = v
    mask[tuple(index)] = True
    return mask.reshape(-1)


def collapse(state: StateVector, registers: Sequence[int], outcome: Sequence[int]) -> CollapseResult:
    regs = state.layout.check_registers(registers)
    outcome = tuple(int(v) for v in outcome)
    if len(outcome) != len(regs):
        raise LayoutError(f"outcome {outcome} does not match registers {regs}")
    projected = np.where(_projection_mask(state, regs, outcome), state.amplitudes, 0.0)
    prob = float(np.vdot(projected, projected).real)
    if prob == 0.0:
        raise ImpossibleOutcomeError(f"outcome {outcome} on registers {regs} has probability 0")
    post = projected / np.sqrt(prob)
    lead = post[int(np.argmax(np.abs(post)))]
    phase = complex(lead / abs(lead))
    post_state = StateVector(state.layout, post / phase)
    return CollapseResult(outcome, prob, post_state, phase)


def sample(dist: OutcomeDistribution, shots: int, seed: int = DEFAULT_SEED) -> ShotRecord:
    """Draw ``shots`` outcomes by inverse CDF over label tuples in ascending order."""
    if int(shots) != shots or shots < 1:
        raise ValueError(f"shots must be a positive integer, got {shots!r}")
    seed = check_seed(seed)
    labels = list(dist.probs)  # already sorted ascending
    cdf = np.cumsum(np.array([dist.probs[k] for k in labels], dtype=np.float64))
    counts = kernels.sample_counts(cdf, int(shots), seed)
    return ShotRecord(seed, int(shots), {k: int(c) for k, c in zip(labels, counts)})
