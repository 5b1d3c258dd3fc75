"""Jitted inner loops for Monte Carlo decoding.

Generator and parity-check columns are packed into uint64 words.  Per
pattern, one elimination over the unerased generator columns settles every
erased bit (recoverable iff its column stays in their span) and one
elimination over the erased parity-check columns settles every unerased
bit's indirect recovery (unrecoverable iff its check column falls in their
span).  Neither side needs a leave-one-out solve, which keeps the
per-pattern cost at N basis operations.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _reduce(basis, used, vec, nwords):
    """XOR-reduce vec against the echelon basis in place.

    Returns -1 when vec reaches zero (it was in the span); otherwise the
    index of the free pivot slot matching the residue left in vec.
    """
    top = nwords - 1
    while True:
        while top >= 0 and vec[top] == 0:
            top -= 1
        if top < 0:
            return -1
        x = vec[top]
        t = 0
        if x >> np.uint64(32):
            x >>= np.uint64(32)
            t += 32
        if x >> np.uint64(16):
            x >>= np.uint64(16)
            t += 16
        if x >> np.uint64(8):
            x >>= np.uint64(8)
            t += 8
        if x >> np.uint64(4):
            x >>= np.uint64(4)
            t += 4
        if x >> np.uint64(2):
            x >>= np.uint64(2)
            t += 2
        if x >> np.uint64(1):
            t += 1
        pivot = top * 64 + t
        if not used[pivot]:
            return pivot
        for w in range(top + 1):
            vec[w] ^= basis[pivot, w]


@njit(cache=True)
def _insert(basis, used, vec, nwords):
    """Add vec to the basis unless it already lies in the span.

    Returns 1 when the rank grew.
    """
    pivot = _reduce(basis, used, vec, nwords)
    if pivot >= 0:
        for w in range(nwords):
            basis[pivot, w] = vec[w]
        used[pivot] = True
        return 1
    return 0


@njit(cache=True)
def run_trials(gcols, hcols, kdim, rdim, erased, d_lb):
    """Decode a block of erasure patterns; returns integer aggregates.

    gcols: (n, wk) uint64, generator columns over kdim bits.
    hcols: (n, wr) uint64, parity-check columns over rdim = N-K bits.
    erased: (trials, n) bool.
    d_lb: lower bound on the minimum distance, for the per-trial check
          d_lb * block_failure <= bit_failures <= n * block_failure.

    Once a basis saturates its ambient dimension, every membership test on
    that side is forced, so both the remaining inserts and the reductions
    are skipped.

    Returns (sum_indirect, sumsq_indirect, sum_direct, sumsq_direct,
    block_failures, sandwich_violations).
    """
    trials, n = erased.shape
    wk = gcols.shape[1]
    wr = hcols.shape[1]
    basis_g = np.zeros((64 * wk, wk), dtype=np.uint64)
    basis_h = np.zeros((64 * wr, wr), dtype=np.uint64)
    used_g = np.zeros(64 * wk, dtype=np.bool_)
    used_h = np.zeros(64 * wr, dtype=np.bool_)
    scratch_g = np.zeros(wk, dtype=np.uint64)
    scratch_h = np.zeros(wr, dtype=np.uint64)

    sum_ind = np.int64(0)
    sumsq_ind = np.int64(0)
    sum_dir = np.int64(0)
    sumsq_dir = np.int64(0)
    blocks = np.int64(0)
    violations = np.int64(0)

    for t in range(trials):
        used_g[:] = False
        used_h[:] = False
        rank_g = 0
        rank_h = 0
        for j in range(n):
            if erased[t, j]:
                if rank_h < rdim:
                    for w in range(wr):
                        scratch_h[w] = hcols[j, w]
                    rank_h += _insert(basis_h, used_h, scratch_h, wr)
            else:
                if rank_g < kdim:
                    for w in range(wk):
                        scratch_g[w] = gcols[j, w]
                    rank_g += _insert(basis_g, used_g, scratch_g, wk)

        n_dir = 0
        n_ind = 0
        g_full = rank_g == kdim
        h_full = rank_h == rdim
        for j in range(n):
            if erased[t, j]:
                if g_full:
                    continue
                for w in range(wk):
                    scratch_g[w] = gcols[j, w]
                if _reduce(basis_g, used_g, scratch_g, wk) >= 0:
                    n_dir += 1
                    n_ind += 1
            else:
                if h_full:
                    n_ind += 1
                    continue
                for w in range(wr):
                    scratch_h[w] = hcols[j, w]
                if _reduce(basis_h, used_h, scratch_h, wr) < 0:
                    n_ind += 1

        if n_dir > 0:
            blocks += 1
            if n_dir < d_lb:
                violations += 1
        sum_ind += n_ind
        sumsq_ind += n_ind * n_ind
        sum_dir += n_dir
        sumsq_dir += n_dir * n_dir

    return sum_ind, sumsq_ind, sum_dir, sumsq_dir, blocks, violations
