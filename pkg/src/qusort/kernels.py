"""Hot loops: gate application, marginal accumulation and inverse-CDF sampling.

Each kernel exists twice: a numba ``@njit`` version that walks mixed-radix
indices directly, and a pure-numpy version built from reshape/moveaxis.
Set ``QUSORT_NO_NUMBA=1`` (or uninstall numba) to force the numpy path.
Both paths agree bit-for-bit on permutation gates and on sampling; for
general gates they agree to floating-point round-off.
"""

from __future__ import annotations

import os

import numpy as np

from .rng import GOLDEN, INV_2_53, MIX1, MIX2, uniforms

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("QUSORT_NO_NUMBA", "").strip() not in ("1", "true", "yes")
BACKEND = "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------- numpy path


def apply_gate_numpy(amps, dims, targets, gate):
    nt = len(targets)
    tensor = np.asarray(amps).reshape(tuple(dims))
    front = list(range(nt))
    tensor = np.moveaxis(tensor, list(targets), front)
    shape = tensor.shape
    out = gate @ tensor.reshape(gate.shape[1], -1)
    out = np.moveaxis(out.reshape(shape), front, list(targets))
    return np.ascontiguousarray(out).reshape(-1)


def marginal_numpy(amps, dims, registers):
    probs = (np.abs(np.asarray(amps)) ** 2).reshape(tuple(dims))
    keep = list(registers)
    others = tuple(r for r in range(len(dims)) if r not in keep)
    reduced = probs.sum(axis=others) if others else probs
    # remaining axes are in ascending register order; reorder to the request
    ascending = sorted(keep)
    reduced = np.transpose(reduced, [ascending.index(r) for r in keep])
    return np.ascontiguousarray(reduced).reshape(-1)


def _cdf_lookup(cdf, u):
    idx = np.searchsorted(cdf, u, side="right")
    last = int(np.flatnonzero(np.diff(np.concatenate(([0.0], cdf))) > 0)[-1])
    return np.minimum(idx, last)


def sample_counts_numpy(cdf, shots, seed):
    idx = _cdf_lookup(cdf, uniforms(seed, shots))
    return np.bincount(idx, minlength=cdf.size).astype(np.int64)


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def _strides(dims):
        nreg = dims.size
        strides = np.empty(nreg, np.int64)
        s = 1
        for r in range(nreg - 1, -1, -1):
            strides[r] = s
            s *= dims[r]
        return strides

    @njit(cache=True)
    def _digit_offsets(dims, strides, regs):
        """Flat offsets of every label combination on ``regs`` (first most significant)."""
        size = 1
        for r in regs:
            size *= dims[r]
        out = np.zeros(size, np.int64)
        for g in range(size):
            rem = g
            for t in range(regs.size - 1, -1, -1):
                r = regs[t]
                out[g] += (rem % dims[r]) * strides[r]
                rem //= dims[r]
        return out

    @njit(cache=True)
    def apply_gate_numba(amps, dims, targets, gate):
        nreg = dims.size
        strides = _strides(dims)
        is_target = np.zeros(nreg, np.bool_)
        for t in targets:
            is_target[t] = True
        rest = np.empty(nreg - targets.size, np.int64)
        j = 0
        for r in range(nreg):
            if not is_target[r]:
                rest[j] = r
                j += 1
        offsets = _digit_offsets(dims, strides, targets)
        bases = _digit_offsets(dims, strides, rest)
        gdim = gate.shape[0]
        # column-compressed nonzeros: sorter gates are permutations
        col_ptr = np.zeros(gdim + 1, np.int64)
        for g in range(gdim):
            cnt = 0
            for gp in range(gdim):
                if gate[gp, g] != 0:
                    cnt += 1
            col_ptr[g + 1] = col_ptr[g] + cnt
        rows = np.empty(col_ptr[gdim], np.int64)
        vals = np.empty(col_ptr[gdim], np.complex128)
        for g in range(gdim):
            q = col_ptr[g]
            for gp in range(gdim):
                if gate[gp, g] != 0:
                    rows[q] = offsets[gp]
                    vals[q] = gate[gp, g]
                    q += 1
        out = np.zeros(amps.size, np.complex128)
        for b in bases:
            for g in range(gdim):
                a = amps[b + offsets[g]]
                if a == 0:
                    continue
                for q in range(col_ptr[g], col_ptr[g + 1]):
                    out[b + rows[q]] += vals[q] * a
        return out

    @njit(cache=True)
    def marginal_numba(amps, dims, registers):
        nreg = dims.size
        strides = _strides(dims)
        kept = np.zeros(nreg, np.bool_)
        for r in registers:
            kept[r] = True
        rest = np.empty(nreg - registers.size, np.int64)
        j = 0
        for r in range(nreg):
            if not kept[r]:
                rest[j] = r
                j += 1
        offsets = _digit_offsets(dims, strides, registers)
        bases = _digit_offsets(dims, strides, rest)
        out = np.zeros(offsets.size, np.float64)
        for g in range(offsets.size):
            acc = 0.0
            for b in bases:
                a = amps[b + offsets[g]]
                acc += a.real * a.real + a.imag * a.imag
            out[g] = acc
        return out

    @njit(cache=True)
    def sample_counts_numba(cdf, shots, seed):
        n = cdf.size
        last = 0
        prev = 0.0
        for j in range(n):
            if cdf[j] > prev:
                last = j
            prev = cdf[j]
        counts = np.zeros(n, np.int64)
        state = np.uint64(seed)
        golden = np.uint64(GOLDEN)
        m1 = np.uint64(MIX1)
        m2 = np.uint64(MIX2)
        for _ in range(shots):
            state = state + golden
            z = state
            z = (z ^ (z >> np.uint64(30))) * m1
            z = (z ^ (z >> np.uint64(27))) * m2
            z = z ^ (z >> np.uint64(31))
            u = np.float64(z >> np.uint64(11)) * INV_2_53
            # first j with u < cdf[j]
            lo = 0
            hi = n
            while lo < hi:
                mid = (lo + hi) // 2
                if u < cdf[mid]:
                    hi = mid
                else:
                    lo = mid + 1
            if lo > last:
                lo = last
            counts[lo] += 1
        return counts


# ---------------------------------------------------------------- dispatch


def apply_gate(amps: np.ndarray, dims, targets, gate: np.ndarray) -> np.ndarray:
    """Apply ``gate`` to the registers ``targets`` of a flat amplitude array."""
    if USE_NUMBA:
        return apply_gate_numba(
            np.ascontiguousarray(amps, dtype=np.complex128),
            np.asarray(dims, dtype=np.int64),
            np.asarray(targets, dtype=np.int64),
            np.ascontiguousarray(gate, dtype=np.complex128),
        )
    return apply_gate_numpy(amps, dims, targets, gate)


def marginal_probs(amps: np.ndarray, dims, registers) -> np.ndarray:
    """Flat Born-rule marginal over ``registers`` (mixed-radix, request order)."""
    if USE_NUMBA:
        return marginal_numba(
            np.ascontiguousarray(amps, dtype=np.complex128),
            np.asarray(dims, dtype=np.int64),
            np.asarray(registers, dtype=np.int64),
        )
    return marginal_numpy(amps, dims, registers)


def sample_counts(cdf: np.ndarray, shots: int, seed: int) -> np.ndarray:
    """Histogram of ``shots`` inverse-CDF draws from the SplitMix64 stream."""
    cdf = np.ascontiguousarray(cdf, dtype=np.float64)
    if USE_NUMBA:
        return sample_counts_numba(cdf, int(shots), np.uint64(seed))
    return sample_counts_numpy(cdf, int(shots), seed)
