"""Linear block codes over GF(2).

A :class:`LinearCode` canonicalizes its generator to reduced row echelon
form, so two codes are equal exactly when they have the same row space.
Exhaustive operations (minimum distance, codeword sweeps) walk the 2^K
codewords in Gray-code order, one row XOR per step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from . import gf2
from .gf2 import BitMatrix, BitVector

ENUMERATION_BUDGET = 24


class EnumerationBudgetError(RuntimeError):
    """Raised when an exhaustive sweep would exceed its 2^K budget."""


@dataclass(frozen=True)
class CodeStats:
    d_min: int | None
    d_min_dual: int | None
    is_proper: bool
    d_min_exact: bool = True
    d_min_dual_exact: bool = True


class LinearCode:
    """An (N, K) binary linear code held as a canonical RREF generator.

    d_min_known carries an exact minimum distance established at
    construction (e.g. by a closed form); d_min_designed carries a lower
    bound.  Both are optional and purely informational.
    """

    __slots__ = ("n", "k", "gen", "name", "d_min_known", "d_min_designed",
                 "_dual", "_columns")

    def __init__(self, n: int, rows: Iterable, name: str = "",
                 d_min_known: int | None = None,
                 d_min_designed: int | None = None):
        mat = rows if isinstance(rows, BitMatrix) else BitMatrix(n, rows)
        if mat.ncols != n:
            raise ValueError("generator width does not match code length")
        self.gen = gf2.rref(mat)
        self.n = n
        self.k = self.gen.nrows
        self.name = name or f"[{self.n},{self.k}]"
        self.d_min_known = d_min_known
        self.d_min_designed = d_min_designed
        self._dual: "LinearCode | None" = None
        self._columns: tuple[int, ...] | None = None

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)

    def columns(self) -> tuple[int, ...]:
        """Generator columns packed as ints (bit r = row r); cached."""
        if self._columns is None:
            self._columns = tuple(self.gen.columns())
        return self._columns

    def dual(self) -> "LinearCode":
        """The (N, N-K) code spanning the null space of the generator."""
        if self._dual is None:
            self._dual = LinearCode(self.n, gf2.null_space(self.gen),
                                    name=f"dual({self.name})")
        return self._dual

    def is_proper(self) -> bool:
        """True when no position is zero in every codeword."""
        return all(c != 0 for c in self.columns())

    def iter_codewords(self, start: int = 0, stop: int | None = None) -> Iterator[int]:
        """Codewords as packed ints, in Gray-code order over message space.

        The [start, stop) window indexes the Gray sweep, so disjoint
        windows partition the 2^K codewords for parallel callers.
        """
        total = 1 << self.k
        if stop is None:
            stop = total
        if not 0 <= start <= stop <= total:
            raise ValueError("invalid enumeration window")
        rows = self.gen.row_bits
        gray = start ^ (start >> 1)
        cw = 0
        for r in range(self.k):
            if (gray >> r) & 1:
                cw ^= rows[r]
        for idx in range(start, stop):
            yield cw
            if idx + 1 == stop:
                break
            flip = (idx + 1) & -(idx + 1)
            cw ^= rows[flip.bit_length() - 1]

    def min_distance_exhaustive(self, budget: int = ENUMERATION_BUDGET,
                                start: int = 0, stop: int | None = None) -> int:
        """Minimum weight over all nonzero codewords, by full enumeration."""
        if self.k == 0:
            raise ValueError("the zero code has no nonzero codeword")
        if self.k > budget:
            raise EnumerationBudgetError(
                f"K={self.k} exceeds enumeration budget 2^{budget}")
        best = None
        for cw in self.iter_codewords(start, stop):
            if cw == 0:
                continue
            w = cw.bit_count()
            if best is None or w < best:
                best = w
                if best == 1:
                    break
        if best is None:
            raise ValueError("enumeration window contained no nonzero codeword")
        return best

    def extend_overall_parity(self) -> "LinearCode":
        """Append one bit making every codeword's overall parity even."""
        rows = [bits | ((bits.bit_count() & 1) << self.n)
                for bits in self.gen.row_bits]
        return LinearCode(self.n + 1, rows, name=f"ext({self.name})")

    def puncture(self, pos: int) -> "LinearCode":
        """Delete coordinate pos; the dimension may drop by one."""
        if not 0 <= pos < self.n:
            raise IndexError(f"position {pos} out of range")
        low = (1 << pos) - 1
        rows = [(bits & low) | ((bits >> (pos + 1)) << pos)
                for bits in self.gen.row_bits]
        return LinearCode(self.n - 1, rows, name=f"punct({self.name},{pos})")

    def contains(self, word: int) -> bool:
        """Membership via the parity checks of the dual."""
        return all((word & h).bit_count() % 2 == 0
                   for h in self.dual().gen.row_bits)

    def stats(self, budget: int = 20) -> CodeStats:
        """Exhaustive statistics where affordable, falling back to bounds."""
        d, d_exact = self._distance_or_bound(budget)
        dd, dd_exact = self.dual()._distance_or_bound(budget)
        return CodeStats(d_min=d, d_min_dual=dd, is_proper=self.is_proper(),
                         d_min_exact=d_exact, d_min_dual_exact=dd_exact)

    def _distance_or_bound(self, budget: int) -> tuple[int | None, bool]:
        if self.k == 0:
            return None, True
        if self.d_min_known is not None:
            return self.d_min_known, True
        if self.k <= budget:
            return self.min_distance_exhaustive(budget), True
        return self.d_min_designed, False

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "k": self.k,
            "generator": [BitVector(self.n, bits).to_string()
                          for bits in self.gen.row_bits],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "LinearCode":
        code = cls(int(data["n"]),
                   [BitVector.from_string(row) for row in data["generator"]],
                   name=str(data.get("name", "")))
        if code.k != int(data["k"]):
            raise ValueError(
                f"generator rank {code.k} does not match declared k={data['k']}")
        return code

    def __eq__(self, other) -> bool:
        return (isinstance(other, LinearCode)
                and self.n == other.n and self.gen == other.gen)

    def __hash__(self) -> int:
        return hash((self.n, self.gen))

    def __repr__(self) -> str:
        return f"LinearCode(name={self.name!r}, n={self.n}, k={self.k})"


def save_code(code: LinearCode, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(code.to_json_dict(), fh, indent=2)
        fh.write("\n")


def load_code(path) -> LinearCode:
    with open(path, encoding="utf-8") as fh:
        return LinearCode.from_json_dict(json.load(fh))
