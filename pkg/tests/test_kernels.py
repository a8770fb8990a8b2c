"""Both kernel backends must agree with each other and with the oracles."""

import numpy as np
import pytest

import oracles
from qusort import kernels

pytestmark = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")

CASES = [
    ((2, 2, 2, 2), (0, 1)),
    ((3, 3, 3, 3), (3, 0)),
    ((2, 3, 4), (2, 1)),
    ((4, 2, 3), (1,)),
    ((2, 2, 2, 2, 2, 2), (5, 2, 0)),
]


def _unitary(rng, n):
    return np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))[0]


@pytest.mark.parametrize("dims,targets", CASES)
def test_apply_backends_agree_with_oracle(dims, targets):
    rng = np.random.default_rng(sum(dims))
    span = int(np.prod([dims[t] for t in targets]))
    gate = _unitary(rng, span)
    v = oracles.random_state(rng, int(np.prod(dims)))
    expected = oracles.full_operator(gate, dims, targets) @ v
    a = kernels.apply_gate_numba(v, np.array(dims), np.array(targets), gate)
    b = kernels.apply_gate_numpy(v, dims, targets, gate)
    assert np.max(np.abs(a - expected)) < 1e-12
    assert np.max(np.abs(b - expected)) < 1e-12


def test_apply_backends_bit_identical_on_permutations():
    rng = np.random.default_rng(5)
    perm = np.eye(9)[rng.permutation(9)].astype(complex)
    v = oracles.random_state(rng, 81)
    a = kernels.apply_gate_numba(v, np.array((3, 3, 3, 3)), np.array((2, 1)), perm)
    b = kernels.apply_gate_numpy(v, (3, 3, 3, 3), (2, 1), perm)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("dims,regs", [((2, 3, 4), (2, 0)), ((3, 3, 3, 3), (1, 3)), ((2, 2, 2), (0, 1, 2))])
def test_marginal_backends_agree(dims, regs):
    rng = np.random.default_rng(3)
    v = oracles.random_state(rng, int(np.prod(dims)))
    a = kernels.marginal_numba(v, np.array(dims), np.array(regs))
    b = kernels.marginal_numpy(v, dims, regs)
    # brute force
    p = np.abs(v.reshape(dims)) ** 2
    expected = np.zeros([dims[r] for r in regs])
    for idx in np.ndindex(*dims):
        expected[tuple(idx[r] for r in regs)] += p[idx]
    np.testing.assert_allclose(a, expected.reshape(-1), atol=1e-14)
    np.testing.assert_allclose(b, expected.reshape(-1), atol=1e-14)


@pytest.mark.parametrize("seed", [0, 42, 2**64 - 1])
def test_sampling_backends_bit_identical(seed):
    cdf = np.cumsum([0.1, 0.0, 0.25, 0.0, 0.3, 0.35])
    a = kernels.sample_counts_numba(cdf, 20_000, np.uint64(seed))
    b = kernels.sample_counts_numpy(cdf, 20_000, seed)
    assert np.array_equal(a, b)
    assert a[1] == 0 and a[3] == 0 and a.sum() == 20_000


def test_sampling_never_lands_past_last_positive_bin():
    # cdf that falls short of 1 by round-off; trailing zero bin must stay empty
    cdf = np.array([0.5, 0.9999999999999, 0.9999999999999])
    for impl in (lambda: kernels.sample_counts_numba(cdf, 50_000, np.uint64(1)), lambda: kernels.sample_counts_numpy(cdf, 50_000, 1)):
        counts = impl()
        assert counts[2] == 0 and counts.sum() == 50_000


def test_backend_flag():
    assert kernels.BACKEND in ("numba", "numpy")
