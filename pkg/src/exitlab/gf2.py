"""Bit-packed linear algebra over GF(2).

Vectors are arbitrary-width Python integers (bit ``i`` holds coordinate
``i``) carried together with an explicit length; matrices are immutable
tuples of such rows.  Everything downstream (decoding, entropies, duals)
reduces to rank, span membership, and row-space comparison, so that is
the whole surface.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class BitVector:
    """Fixed-length vector over GF(2), packed into a single int."""

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: int = 0):
        if n < 0:
            raise ValueError("length must be nonnegative")
        self.n = n
        self.bits = bits & ((1 << n) - 1)

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "BitVector":
        bits = 0
        for i in indices:
            if not 0 <= i < n:
                raise IndexError(f"index {i} out of range for length {n}")
            bits |= 1 << i
        return cls(n, bits)

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        """Parse '0'/'1' characters; character 0 is coordinate 0."""
        bits = 0
        for i, ch in enumerate(s):
            if ch == "1":
                bits |= 1 << i
            elif ch != "0":
                raise ValueError(f"invalid bit character {ch!r}")
        return cls(len(s), bits)

    def get(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(f"index {i} out of range for length {self.n}")
        return (self.bits >> i) & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def indices(self) -> list[int]:
        return [i for i in range(self.n) if (self.bits >> i) & 1]

    def to_string(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.n))

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return BitVector(self.n, self.bits ^ other.bits)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.n == other.n
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.n, self.bits))

    def __repr__(self) -> str:
        return f"BitVector({self.n}, 0b{self.to_string()[::-1] or '0'})"


class BitMatrix:
    """Immutable matrix over GF(2); rows stored as packed ints."""

    __slots__ = ("nrows", "ncols", "row_bits")

    def __init__(self, ncols: int, rows: Iterable):
        packed = []
        for r in rows:
            if isinstance(r, BitVector):
                if r.n != ncols:
                    raise ValueError("row length mismatch")
                packed.append(r.bits)
            else:
                packed.append(int(r) & ((1 << ncols) - 1) if ncols else 0)
        self.ncols = ncols
        self.nrows = len(packed)
        self.row_bits = tuple(packed)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, [1 << i for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(ncols, [0] * nrows)

    def row(self, i: int) -> BitVector:
        return BitVector(self.ncols, self.row_bits[i])

    def row_data(self) -> list[BitVector]:
        return [BitVector(self.ncols, b) for b in self.row_bits]

    def column_bits(self, j: int) -> int:
        """Column j packed into an int (bit r = entry in row r)."""
        if not 0 <= j < self.ncols:
            raise IndexError(f"column {j} out of range")
        col = 0
        for r, bits in enumerate(self.row_bits):
            col |= ((bits >> j) & 1) << r
        return col

    def columns(self) -> list[int]:
        return [self.column_bits(j) for j in range(self.ncols)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.ncols == other.ncols
            and self.row_bits == other.row_bits
        )

    def __hash__(self) -> int:
        return hash((self.ncols, self.row_bits))

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"


def rank(m: BitMatrix) -> int:
    """Dimension of the row space, by forward elimination on a copy."""
    return len(_echelon(list(m.row_bits)))


def _echelon(rows: list[int]) -> list[int]:
    """Fully reduce in place; returns the nonzero rows in pivot order.

    Pivot of each surviving row is its lowest set bit, and pivots appear
    in no other row, so the result is the reduced row echelon form.
    """
    done = 0
    nrows = len(rows)
    width = max(rows, default=0).bit_length()
    for col in range(width):
        pivot = next((r for r in range(done, nrows) if (rows[r] >> col) & 1), None)
        if pivot is None:
            continue
        rows[done], rows[pivot] = rows[pivot], rows[done]
        for r in range(nrows):
            if r != done and (rows[r] >> col) & 1:
                rows[r] ^= rows[done]
        done += 1
        if done == nrows:
            break
    return rows[:done]


def rref(m: BitMatrix) -> BitMatrix:
    """Reduced row echelon form with zero rows dropped."""
    rows = list(m.row_bits)
    return BitMatrix(m.ncols, _echelon(rows))


def transpose(m: BitMatrix) -> BitMatrix:
    return BitMatrix(m.nrows, [m.column_bits(j) for j in range(m.ncols)])


def column_in_span(m: BitMatrix, target_col: int, allowed_cols) -> bool:
    """Is column ``target_col`` in the GF(2) span of the allowed columns?"""
    allowed = set(allowed_cols)
    if target_col in allowed:
        raise ValueError("target column must not be among the allowed columns")
    if not 0 <= target_col < m.ncols:
        raise IndexError(f"column {target_col} out of range")
    for j in allowed:
        if not 0 <= j < m.ncols:
            raise IndexError(f"column {j} out of range")
    basis: dict[int, int] = {}
    for j in allowed:
        xor_basis_insert(basis, m.column_bits(j))
    return xor_basis_contains(basis, m.column_bits(target_col))


def row_space_equal(a: BitMatrix, b: BitMatrix) -> bool:
    """Do the two matrices span the same subspace of GF(2)^ncols?"""
    if a.ncols != b.ncols:
        raise ValueError("column count mismatch")
    ra = rank(a)
    rb = rank(b)
    if ra != rb:
        return False
    joint = BitMatrix(a.ncols, a.row_bits + b.row_bits)
    return rank(joint) == ra


def null_space(m: BitMatrix) -> BitMatrix:
    """Basis for {x : m @ x = 0}, one row per free column."""
    rows = list(m.row_bits)
    basis_rows = _echelon(rows)
    pivots = [(r & -r).bit_length() - 1 for r in basis_rows]
    pivot_set = set(pivots)
    out = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        vec = 1 << free
        for p, row in zip(pivots, basis_rows):
            if (row >> free) & 1:
                vec |= 1 << p
        out.append(vec)
    return BitMatrix(m.ncols, out)


def mat_vec(m: BitMatrix, x: int) -> int:
    """Matrix-vector product; x and the result are packed column vectors."""
    y = 0
    for r, row in enumerate(m.row_bits):
        y |= ((row & x).bit_count() & 1) << r
    return y


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.ncols != b.nrows:
        raise ValueError("inner dimension mismatch")
    bcols = b.columns()
    out_rows = []
    for arow in a.row_bits:
        bits = 0
        for j, col in enumerate(bcols):
            bits |= ((arow & col).bit_count() & 1) << j
        out_rows.append(bits)
    return BitMatrix(b.ncols, out_rows)


def inverse(m: BitMatrix) -> BitMatrix:
    """Inverse of a square matrix; raises ValueError when singular."""
    if m.nrows != m.ncols:
        raise ValueError("matrix is not square")
    n = m.nrows
    # Augment each row with an identity block above bit n.
    rows = [bits | (1 << (n + i)) for i, bits in enumerate(m.row_bits)]
    done = 0
    for col in range(n):
        pivot = None
        for r in range(done, n):
            if (rows[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            raise ValueError("matrix is singular")
        rows[done], rows[pivot] = rows[pivot], rows[done]
        for r in range(n):
            if r != done and (rows[r] >> col) & 1:
                rows[r] ^= rows[done]
        done += 1
    # Full reduction of an invertible matrix leaves the identity in the
    # low block, with row i pivoting on column i.
    return BitMatrix(n, [r >> n for r in rows])


def xor_basis_insert(basis: dict[int, int], v: int) -> bool:
    """Insert v into an echelon basis keyed by top set bit.

    Returns True when v was independent (and is now part of the basis).
    """
    while v:
        top = v.bit_length() - 1
        held = basis.get(top)
        if held is None:
            basis[top] = v
            return True
        v ^= held
    return False


def xor_basis_contains(basis: dict[int, int], v: int) -> bool:
    """Membership of v in the span of an echelon basis."""
    while v:
        held = basis.get(v.bit_length() - 1)
        if held is None:
            return False
        v ^= held
    return True
