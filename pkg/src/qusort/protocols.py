"""Remote output-port determination with multi-input-port sorters.

Every runner lays registers out party-major:
``(system_A, port_A, system_B, port_B[, system_C, port_C])``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .gates import GateApplication, apply, mqs
from .hilbert import (
    NORM_TOL,
    PORT,
    SYSTEM,
    Register,
    RegisterLayout,
    StateVector,
    basis_state,
    check_dim,
    tensor,
)
from .measure import (
    DEFAULT_SEED,
    CollapseResult,
    OutcomeDistribution,
    ShotRecord,
    collapse,
    marginal,
    sample,
)

PARTIES = ("A", "B", "C")
GHZ = "ghz"
W = "w"


class ConfigError(ValueError):
    pass


def _check_port(name: str, value, d: int) -> int:
    if isinstance(value, bool) or int(value) != value or not 0 <= int(value) < d:
        raise ConfigError(f"{name} must be an integer port label in [0, {d}), got {value!r}")
    return int(value)


@dataclass(frozen=True)
class BipartiteConfig:
    dim: int
    alphas: tuple[complex, ...]
    m: int = 0
    n: int = 0

    def __post_init__(self):
        try:
            d = check_dim(self.dim)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        alphas = tuple(complex(a) for a in self.alphas)
        if len(alphas) != d:
            raise ConfigError(f"expected {d} amplitudes, got {len(alphas)}")
        total = sum(abs(a) ** 2 for a in alphas)
        if abs(total - 1.0) > NORM_TOL:
            raise ConfigError(f"amplitudes are not normalized: sum |alpha|^2 = {total!r}")
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "m", _check_port("m", self.m, d))
        object.__setattr__(self, "n", _check_port("n", self.n, d))


@dataclass(frozen=True)
class TripartiteConfig:
    which: str
    m: int = 0
    n: int = 0
    p: int = 0

    def __post_init__(self):
        which = str(self.which).lower()
        if which not in (GHZ, W):
            raise ConfigError(f"state must be '{GHZ}' or '{W}', got {self.which!r}")
        object.__setattr__(self, "which", which)
        for name in ("m", "n", "p"):
            object.__setattr__(self, name, _check_port(name, getattr(self, name), 2))

    @property
    def inputs(self) -> tuple[int, int, int]:
        return (self.m, self.n, self.p)


@dataclass(frozen=True, eq=False)
class ProtocolResult:
    name: str
    port_registers: tuple[int, ...]
    joint_port_distribution: OutcomeDistribution
    alice_marginal: OutcomeDistribution
    certainty: bool
    branches: list[CollapseResult]
    final_state: StateVector = field(repr=False)
    shots: ShotRecord | None = None


def entangled_state(alphas: Sequence[complex]) -> StateVector:
    """``sum_j alpha_j |j>_A |j>_B`` on two system registers."""
    alphas = np.asarray(alphas, dtype=np.complex128).reshape(-1)
    d = check_dim(alphas.size)
    total = float(np.sum(np.abs(alphas) ** 2))
    if abs(total - 1.0) > NORM_TOL:
        raise ConfigError(f"amplitudes are not normalized: sum |alpha|^2 = {total!r}")
    amps = np.zeros(d * d, dtype=np.complex128)
    amps[np.arange(d) * (d + 1)] = alphas
    layout = RegisterLayout((Register(SYSTEM, d, "A"), Register(SYSTEM, d, "B")))
    return StateVector(layout, amps)


def _three_qubit(amps: dict[tuple[int, int, int], float]) -> StateVector:
    layout = RegisterLayout(tuple(Register(SYSTEM, 2, p) for p in PARTIES))
    vec = np.zeros(8, dtype=np.complex128)
    for labels, a in amps.items():
        vec[layout.encode(labels)] = a
    return StateVector(layout, vec)


def ghz_state() -> StateVector:
    a = 1 / np.sqrt(2)
    return _three_qubit({(0, 0, 0): a, (1, 1, 1): a})


def w_state() -> StateVector:
    a = 1 / np.sqrt(3)
    return _three_qubit({(0, 0, 1): a, (0, 1, 0): a, (1, 0, 0): a})


def certainty_verdict(dist: OutcomeDistribution, tol: float = 0.0) -> bool:
    """Does the first coordinate (Alice) pin down the whole joint outcome?

    Entries with probability ``<= tol`` count as absent.
    """
    seen: dict[int, tuple[int, ...]] = {}
    for labels, p in dist.items():
        if p <= tol:
            continue
        prior = seen.setdefault(labels[0], labels)
        if prior != labels:
            return False
    return True


def _attach_ports(systems: StateVector, inputs: Sequence[int]) -> StateVector:
    """``systems ⊗ |inputs>`` reordered party-major."""
    parties = len(inputs)
    d = systems.dims[0]
    port_layout = RegisterLayout(tuple(Register(PORT, d, PARTIES[i]) for i in range(parties)))
    joint = tensor(systems, basis_state(list(inputs), port_layout))
    order = [r for i in range(parties) for r in (i, parties + i)]
    return joint.permute(order)


def _run(name: str, systems: StateVector, inputs: Sequence[int], shots, seed) -> ProtocolResult:
    d = systems.dims[0]
    state = _attach_ports(systems, inputs)
    sorter = mqs(d)
    for party in range(len(inputs)):
        state = apply(GateApplication(sorter, (2 * party, 2 * party + 1)), state)
    ports = tuple(2 * party + 1 for party in range(len(inputs)))
    joint = marginal(state, ports)
    alice = marginal(state, ports[:1])
    branches = [collapse(state, ports[:1], k) for k, p in alice.items() if p > 0.0]
    record = sample(joint, shots, seed) if shots else None
    return ProtocolResult(
        name=name,
        port_registers=ports,
        joint_port_distribution=joint,
        alice_marginal=alice,
        certainty=certainty_verdict(joint),
        branches=branches,
        final_state=state,
        shots=record,
    )


def run_bipartite(cfg: BipartiteConfig, shots: int | None = None, seed: int = DEFAULT_SEED) -> ProtocolResult:
    """Both parties push their half of the entangled pair through an MQS."""
    return _run("bipartite", entangled_state(cfg.alphas), (cfg.m, cfg.n), shots, seed)


def run_tripartite(cfg: TripartiteConfig, shots: int | None = None, seed: int = DEFAULT_SEED) -> ProtocolResult:
    systems = ghz_state() if cfg.which == GHZ else w_state()
    return _run(cfg.which, systems, cfg.inputs, shots, seed)
