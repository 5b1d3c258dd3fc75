"""Exact EXIT functions, influences, and conditional entropy for small codes.

For bit i, the failure set is the up-closure (under adding erasures) of the
supports of codewords through i, restricted to the other N-1 positions.  The
whole analysis reduces to exact integer counts of that set by weight:

    a_w = number of weight-w erasure patterns on the other positions that
          prevent indirect recovery of bit i,

from which the EXIT polynomial, its derivative, influences, and the exact
area all follow.  Membership tables are built by a superset-closure sweep
over the 2^(N-1) subset lattice, and independently checkable against the
per-pattern rank decoder.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .channel import ErasurePattern, indirect_recovery_fails
from .codes import EnumerationBudgetError, LinearCode

EXACT_BUDGET_N = 22


class ExitPolynomial:
    """Weight profile of the recovery-failure set for one bit.

    counts[w] is the exact number of weight-w failure patterns over the
    M = N-1 other positions; evaluation at erasure rate p sums
    counts[w] * p^w * (1-p)^(M-w).
    """

    __slots__ = ("m", "counts")

    def __init__(self, m: int, counts):
        counts = tuple(int(c) for c in counts)
        if len(counts) != m + 1:
            raise ValueError("need one count per weight 0..M")
        self.m = m
        self.counts = counts

    def evaluate(self, p):
        p = np.asarray(p, dtype=float)
        acc = np.zeros_like(p)
        for w, c in enumerate(self.counts):
            if c:
                acc = acc + c * p ** w * (1.0 - p) ** (self.m - w)
        return float(acc) if acc.ndim == 0 else acc

    def area(self) -> Fraction:
        """Exact integral over [0, 1], term by term in rational arithmetic."""
        total = Fraction(0)
        for w, c in enumerate(self.counts):
            if c:
                total += Fraction(c, (self.m + 1) * comb(self.m, w))
        return total

    def monomial_coeffs(self) -> tuple[int, ...]:
        return _expand_counts(self.counts, self.m)

    def derivative_monomial_coeffs(self) -> tuple[int, ...]:
        c = self.monomial_coeffs()
        return tuple((k + 1) * c[k + 1] for k in range(self.m))

    def __eq__(self, other) -> bool:
        return (isinstance(other, ExitPolynomial)
                and self.m == other.m and self.counts == other.counts)

    def __hash__(self) -> int:
        return hash((self.m, self.counts))

    def __repr__(self) -> str:
        return f"ExitPolynomial(m={self.m}, counts={self.counts})"


@dataclass(frozen=True)
class InfluenceProfile:
    """Pivotal-pattern weight counts for each other position j.

    counts[j][w] is the number of weight-w patterns on which position j is
    pivotal for the indirect recovery of bit i.
    """

    i: int
    m: int
    counts: dict[int, tuple[int, ...]]

    def influence_evaluate(self, j: int, p):
        p = np.asarray(p, dtype=float)
        acc = np.zeros_like(p)
        for w, c in enumerate(self.counts[j]):
            if c:
                acc = acc + c * p ** w * (1.0 - p) ** (self.m - w)
        return float(acc) if acc.ndim == 0 else acc

    def total_monomial_coeffs(self) -> tuple[int, ...]:
        total = [0] * (self.m + 1)
        for cj in self.counts.values():
            for k, v in enumerate(_expand_counts(cj, self.m)):
                total[k] += v
        return tuple(total)


def _expand_counts(counts, exponent_total: int) -> tuple[int, ...]:
    """Monomial coefficients of sum_w counts[w] p^w (1-p)^(E-w), exact."""
    out = [0] * (exponent_total + 1)
    for w, c in enumerate(counts):
        if not c:
            continue
        for t in range(exponent_total - w + 1):
            out[w + t] += c * comb(exponent_total - w, t) * (-1) ** t
    return tuple(out)


def _check_budget(code: LinearCode):
    if code.n > EXACT_BUDGET_N:
        raise EnumerationBudgetError(
            f"N={code.n} exceeds the exact-enumeration budget N<={EXACT_BUDGET_N}")


def _compress(mask: int, i: int) -> int:
    """Drop bit i, shifting the higher bits down one slot."""
    return (mask & ((1 << i) - 1)) | ((mask >> (i + 1)) << i)


@lru_cache(maxsize=64)
def _omega_table(code: LinearCode, i: int) -> np.ndarray:
    """Failure-set membership over all subsets of the other N-1 positions.

    Index bit b corresponds to position b when b < i and position b+1
    otherwise.  Built by marking codeword supports through bit i and
    closing upward (more erasures never help).
    """
    _check_budget(code)
    m = code.n - 1
    marked = np.zeros(1 << m, dtype=bool)
    for cw in code.iter_codewords():
        if (cw >> i) & 1:
            marked[_compress(cw & ~(1 << i), i)] = True
    for b in range(m):
        view = marked.reshape(-1, 2, 1 << b)
        view[:, 1, :] |= view[:, 0, :]
    marked.setflags(write=False)
    return marked


def omega_table(code: LinearCode, i: int) -> np.ndarray:
    """Copy of the membership table for external inspection."""
    return _omega_table(code, i).copy()


@lru_cache(maxsize=8)
def _weights(m: int) -> np.ndarray:
    w = np.bitwise_count(np.arange(1 << m, dtype=np.uint32)).astype(np.uint8)
    w.setflags(write=False)
    return w


def exit_polynomial_exact(code: LinearCode, i: int) -> ExitPolynomial:
    """Exact weight profile of the indirect-recovery failure set of bit i."""
    if not 0 <= i < code.n:
        raise IndexError(f"bit {i} out of range")
    m = code.n - 1
    marked = _omega_table(code, i)
    counts = np.bincount(_weights(m)[marked], minlength=m + 1)
    return ExitPolynomial(m, counts)


def influence_profile_exact(code: LinearCode, i: int) -> InfluenceProfile:
    """Pivotal-pattern weight counts of every other position for bit i."""
    if not 0 <= i < code.n:
        raise IndexError(f"bit {i} out of range")
    m = code.n - 1
    marked = _omega_table(code, i)
    weights = _weights(m)
    idx = np.arange(1 << m)
    counts: dict[int, tuple[int, ...]] = {}
    for j in range(code.n):
        if j == i:
            continue
        b = j if j < i else j - 1
        pivotal = marked != marked[idx ^ (1 << b)]
        counts[j] = tuple(int(c) for c in
                          np.bincount(weights[pivotal], minlength=m + 1))
    return InfluenceProfile(i=i, m=m, counts=counts)


def margulis_russo_check(code: LinearCode, i: int) -> bool:
    """Does d/dp of bit i's EXIT polynomial equal its total influence?

    Compared coefficient-by-coefficient in exact integer arithmetic.
    """
    h = exit_polynomial_exact(code, i)
    prof = influence_profile_exact(code, i)
    lhs = h.derivative_monomial_coeffs() + (0,)
    return lhs == prof.total_monomial_coeffs()


def area_exact(code: LinearCode) -> Fraction:
    """Exact area under the bit-averaged EXIT function.

    Equals K/N for every binary linear code; returned as a Fraction so the
    identity can be asserted with zero tolerance.
    """
    total = Fraction(0)
    for i in range(code.n):
        total += exit_polynomial_exact(code, i).area()
    return total / code.n


def average_exit_exact(code: LinearCode, p):
    """Bit-averaged EXIT function evaluated at erasure rate(s) p."""
    polys = [exit_polynomial_exact(code, i) for i in range(code.n)]
    vals = [poly.evaluate(p) for poly in polys]
    return sum(vals) / code.n


def exit_vector_exact(code: LinearCode, i: int, p_vec) -> float:
    """EXIT function of bit i under per-position erasure rates.

    The value never depends on p_vec[i].
    """
    p_vec = np.asarray(p_vec, dtype=float)
    if p_vec.shape != (code.n,):
        raise ValueError("need one erasure probability per position")
    m = code.n - 1
    marked = _omega_table(code, i)
    probs = np.ones(1)
    for b in range(m):
        pos = b if b < i else b + 1
        probs = np.concatenate([probs * (1.0 - p_vec[pos]), probs * p_vec[pos]])
    return float(probs @ marked)


def conditional_entropy_exact(code: LinearCode, p_vec) -> float:
    """Entropy (bits) of the codeword given the channel output at rates p_vec.

    For each erasure set A the residual uncertainty is the dimension of the
    subcode supported inside A (the solution-space dimension of the unerased
    columns); the expectation runs over all 2^N patterns.
    """
    _check_budget(code)
    p_vec = np.asarray(p_vec, dtype=float)
    if p_vec.shape != (code.n,):
        raise ValueError("need one erasure probability per position")
    if np.any((p_vec < 0) | (p_vec > 1)):
        raise ValueError("erasure probabilities must lie in [0, 1]")
    n = code.n
    cnt = np.zeros(1 << n, dtype=np.int64)
    masks = np.fromiter(code.iter_codewords(), dtype=np.int64, count=1 << code.k)
    cnt[masks] += 1
    for b in range(n):
        view = cnt.reshape(-1, 2, 1 << b)
        view[:, 1, :] += view[:, 0, :]
    dims = np.log2(cnt)  # exact: subcode sizes are powers of two
    probs = np.ones(1)
    for b in range(n):
        probs = np.concatenate([probs * (1.0 - p_vec[b]), probs * p_vec[b]])
    return float(probs @ dims)


def boundary_g(code: LinearCode, i: int, positions) -> int:
    """Number of single-flip neighbors outside the failure set.

    positions lists the erased coordinates (excluding i); returns 0 when the
    pattern is itself outside the failure set.
    """
    if not 0 <= i < code.n:
        raise IndexError(f"bit {i} out of range")
    m = code.n - 1
    mask = 0
    for pos in positions:
        if pos == i or not 0 <= pos < code.n:
            raise ValueError(f"position {pos} invalid for bit {i}")
        mask |= 1 << pos
    x = _compress(mask, i)
    marked = _omega_table(code, i)
    if not marked[x]:
        return 0
    return sum(1 for b in range(m) if not marked[x ^ (1 << b)])


def indirect_failure_by_table(code: LinearCode, i: int,
                              pattern: ErasurePattern) -> bool:
    """Table-backed equivalent of the rank-based indirect recovery test."""
    if pattern.is_erased(i):
        raise ValueError("pattern must not mark bit i itself")
    marked = _omega_table(code, i)
    return bool(marked[_compress(pattern.erased.bits, i)])


__all__ = [
    "EXACT_BUDGET_N", "ExitPolynomial", "InfluenceProfile",
    "exit_polynomial_exact", "influence_profile_exact",
    "margulis_russo_check", "area_exact", "average_exit_exact",
    "exit_vector_exact", "conditional_entropy_exact", "boundary_g",
    "omega_table", "indirect_failure_by_table", "indirect_recovery_fails",
]
