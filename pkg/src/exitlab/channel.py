"""Erasure patterns and exact MAP decoding on the erasure channel.

On an erasure channel, a bit is recoverable exactly when its generator
column lies in the GF(2) span of the unerased columns, so decoding reduces
to one Gaussian elimination per pattern.  A second, independent decoder
based directly on codeword coverage is kept as a cross-check; linearity
makes the failure set independent of the transmitted codeword, so no
codeword is ever sampled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .codes import EnumerationBudgetError, LinearCode
from .gf2 import BitVector


@dataclass(frozen=True)
class ErasurePattern:
    """Length-n bitmask; a set bit marks an erased position."""

    n: int
    erased: BitVector

    def __post_init__(self):
        if self.erased.n != self.n:
            raise ValueError("mask length mismatch")

    @classmethod
    def from_indices(cls, n: int, indices) -> "ErasurePattern":
        return cls(n, BitVector.from_indices(n, indices))

    @classmethod
    def none(cls, n: int) -> "ErasurePattern":
        return cls(n, BitVector(n, 0))

    @classmethod
    def full(cls, n: int) -> "ErasurePattern":
        return cls(n, BitVector(n, (1 << n) - 1))

    def weight(self) -> int:
        return self.erased.weight()

    def is_erased(self, i: int) -> bool:
        return bool(self.erased.get(i))

    def indices(self) -> list[int]:
        return self.erased.indices()


@dataclass(frozen=True)
class DecodeReport:
    """Per-bit and block MAP failure indicators for one pattern."""

    bit_failed: BitVector
    block_failed: bool
    num_bit_failures: int


def decode(code: LinearCode, pattern: ErasurePattern) -> DecodeReport:
    """Exact bit-MAP decoding outcome for one erasure pattern.

    Erased bit i fails exactly when generator column i is outside the span
    of the unerased columns; unerased bits never fail.
    """
    if pattern.n != code.n:
        raise ValueError(f"pattern length {pattern.n} != code length {code.n}")
    cols = code.columns()
    mask = pattern.erased.bits
    basis: dict[int, int] = {}
    for j in range(code.n):
        if not (mask >> j) & 1:
            gf2.xor_basis_insert(basis, cols[j])
    failed = 0
    for j in range(code.n):
        if (mask >> j) & 1 and not gf2.xor_basis_contains(basis, cols[j]):
            failed |= 1 << j
    nfail = failed.bit_count()
    return DecodeReport(bit_failed=BitVector(code.n, failed),
                        block_failed=nfail > 0,
                        num_bit_failures=nfail)


def decode_by_covering(code: LinearCode, pattern: ErasurePattern) -> DecodeReport:
    """Brute-force decoder: bit i fails iff the erasures cover a codeword
    that is nonzero at i.  Exponential in K; the oracle for `decode`."""
    if pattern.n != code.n:
        raise ValueError(f"pattern length {pattern.n} != code length {code.n}")
    if code.k > 22:
        raise EnumerationBudgetError(f"K={code.k} too large for brute force")
    mask = pattern.erased.bits
    failed = 0
    for cw in code.iter_codewords():
        if cw and cw & ~mask == 0:
            failed |= cw
    failed &= mask
    nfail = failed.bit_count()
    return DecodeReport(bit_failed=BitVector(code.n, failed),
                        block_failed=nfail > 0,
                        num_bit_failures=nfail)


def indirect_recovery_fails(code: LinearCode, i: int, pattern: ErasurePattern) -> bool:
    """Can bit i not be recovered from the other positions alone?

    Bit i is treated as erased on top of the given pattern, so the answer
    does not depend on position i's own channel state.
    """
    if not 0 <= i < code.n:
        raise IndexError(f"bit {i} out of range")
    if pattern.is_erased(i):
        raise ValueError("pattern must not mark bit i itself")
    cols = code.columns()
    mask = pattern.erased.bits | (1 << i)
    basis: dict[int, int] = {}
    for j in range(code.n):
        if not (mask >> j) & 1:
            gf2.xor_basis_insert(basis, cols[j])
    return not gf2.xor_basis_contains(basis, cols[i])


def sample_pattern(n: int, p: float, rng: np.random.Generator) -> ErasurePattern:
    """One BEC(p) erasure pattern drawn from the given stream."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("erasure probability must lie in [0, 1]")
    draws = rng.random(n)
    bits = 0
    for j in range(n):
        if draws[j] < p:
            bits |= 1 << j
    return ErasurePattern(n, BitVector(n, bits))
