"""Self-check harness behind ``qusort verify``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gates
from .gates import UNITARY_TOL, adjoint, controlled, controlled_rev, is_unitary, pauli_x, perfect_sorter_map

# Check names double as stable identifiers in CLI output.
CHECKS = (
    "unitarity",
    "eq5-factorization",
    "eq4-theorem",
    "sqs-mqs-k0",
    "perfect-sorter-nonunitary",
)


@dataclass(frozen=True)
class CheckRow:
    dim: int
    results: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.results.values())


def _column(u: np.ndarray, d: int, s: int, k: int) -> np.ndarray:
    return u[:, s * d + k]


def check_dim(d: int) -> CheckRow:
    # looked up on the module so tests can swap in a faulty builder
    mqs = gates.mqs(d)
    sqs = gates.sqs(d)
    x = pauli_x(d)
    xd = adjoint(x)

    builders = [x, xd, controlled(x, d), controlled_rev(xd, d), gates.swap(d), sqs, mqs]
    unitarity = all(is_unitary(b, UNITARY_TOL) for b in builders)

    product = controlled(x, d).matrix @ controlled_rev(xd, d).matrix
    factorization = bool(np.array_equal(np.round(product, 12), np.round(mqs.matrix, 12)))

    theorem = True
    ident = np.eye(d)
    for k in range(d):
        pre = np.kron(gates.power(xd, k), ident)
        via_sqs = sqs.matrix @ pre
        for s in range(d):
            if not np.allclose(_column(via_sqs, d, s, k), _column(mqs.matrix, d, s, k), atol=1e-12, rtol=0):
                theorem = False

    k0 = all(
        np.array_equal(_column(sqs.matrix, d, s, 0), _column(mqs.matrix, d, s, 0))
        and _column(mqs.matrix, d, s, 0)[s * d + s] == 1
        for s in range(d)
    )

    nonunitary = not is_unitary(perfect_sorter_map(d), 1e-6)

    return CheckRow(
        d,
        {
            "unitarity": unitarity,
            "eq5-factorization": factorization,
            "eq4-theorem": theorem,
            "sqs-mqs-k0": k0,
            "perfect-sorter-nonunitary": nonunitary,
        },
    )


def run_checks(max_dim: int = 8) -> list[CheckRow]:
    if max_dim < 2:
        raise ValueError("max_dim must be >= 2")
    return [check_dim(d) for d in range(2, max_dim + 1)]


def first_failure(rows: list[CheckRow]) -> tuple[int, str] | None:
    for row in rows:
        for name in CHECKS:
            if not row.results[name]:
                return row.dim, name
    return None
