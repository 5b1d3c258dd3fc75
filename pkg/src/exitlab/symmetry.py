"""Code automorphisms and constructive double-transitivity witnesses.

For Reed-Muller codes, affine maps of the evaluation points induce
automorphisms; for extended BCH codes, affine maps of a field labelling of
the coordinates do.  Both constructions can pin one coordinate while moving
any second onto any third, and every witness built here is checkable with
``is_automorphism``.
"""

from __future__ import annotations

from . import gf2
from .codes import LinearCode
from .families import rm_column_of_point, rm_point_of_column
from .gf2 import BitMatrix
from .gf2m import FieldContext, gf_div, gf_mul


class Permutation:
    """Bijection on [0, n), stored as an image table."""

    __slots__ = ("mapping",)

    def __init__(self, mapping):
        mapping = tuple(int(x) for x in mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise ValueError("mapping is not a bijection on range(n)")
        self.mapping = mapping

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @property
    def n(self) -> int:
        return len(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other))(x) = self(other(x))."""
        if self.n != other.n:
            raise ValueError("size mismatch")
        return Permutation(self.mapping[other.mapping[x]] for x in range(self.n))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for x, y in enumerate(self.mapping):
            inv[y] = x
        return Permutation(inv)

    def permute_columns(self, mat: BitMatrix) -> BitMatrix:
        """Move column j to column self(j) in every row."""
        if mat.ncols != self.n:
            raise ValueError("width mismatch")
        rows = []
        for bits in mat.row_bits:
            out = 0
            for j in range(self.n):
                if (bits >> j) & 1:
                    out |= 1 << self.mapping[j]
            rows.append(out)
        return BitMatrix(mat.ncols, rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.mapping == other.mapping

    def __hash__(self) -> int:
        return hash(self.mapping)

    def __repr__(self) -> str:
        return f"Permutation({list(self.mapping)})"


def is_automorphism(code: LinearCode, perm: Permutation) -> bool:
    """Does permuting the coordinates preserve the set of codewords?"""
    if perm.n != code.n:
        raise ValueError("permutation length must equal the code length")
    return gf2.row_space_equal(code.gen, perm.permute_columns(code.gen))


def rm_affine_permutation(m: int, transform: BitMatrix, offset: int) -> Permutation:
    """Coordinate permutation induced by x -> transform@x + offset on points.

    transform must be an invertible m-by-m matrix; offset is a packed point.
    The result is an automorphism of every Reed-Muller code with m variables.
    """
    if transform.nrows != m or transform.ncols != m:
        raise ValueError("transform must be m-by-m")
    if gf2.rank(transform) != m:
        raise ValueError("transform is singular")
    n = 1 << m
    mapping = [0] * n
    for c in range(n):
        image = gf2.mat_vec(transform, rm_point_of_column(c, m)) ^ offset
        mapping[c] = rm_column_of_point(image, m)
    return Permutation(mapping)


def _extend_to_basis(v: int, m: int) -> list[int]:
    """Complete {v} to a basis of GF(2)^m, greedily in coordinate order."""
    basis: dict[int, int] = {}
    gf2.xor_basis_insert(basis, v)
    vecs = [v]
    for idx in range(m):
        if gf2.xor_basis_insert(basis, 1 << idx):
            vecs.append(1 << idx)
    return vecs


def _columns_matrix(cols: list[int], m: int) -> BitMatrix:
    rows = []
    for r in range(m):
        bits = 0
        for c, col in enumerate(cols):
            bits |= ((col >> r) & 1) << c
        rows.append(bits)
    return BitMatrix(m, rows)


def rm_double_transitivity_witness(m: int, i: int, j: int, k: int) -> Permutation:
    """Affine automorphism of RM codes fixing coordinate i, sending j to k."""
    n = 1 << m
    for x in (i, j, k):
        if not 0 <= x < n:
            raise IndexError(f"coordinate {x} out of range")
    if i == j or i == k:
        raise ValueError("coordinate i must differ from j and k")
    if j == k:
        return Permutation.identity(n)
    a = rm_point_of_column(i, m)
    u = rm_point_of_column(j, m) ^ a
    w = rm_point_of_column(k, m) ^ a
    basis_u = _columns_matrix(_extend_to_basis(u, m), m)
    basis_w = _columns_matrix(_extend_to_basis(w, m), m)
    transform = gf2.mat_mul(basis_w, gf2.inverse(basis_u))
    offset = gf2.mat_vec(transform, a) ^ a
    return rm_affine_permutation(m, transform, offset)


def ebch_coordinate_label(ctx: FieldContext, c: int) -> int:
    """Field element labelling coordinate c of the length-2^m extended code.

    Coordinates 0..N-2 (the cyclic part) are labelled alpha^(c+1); the
    parity coordinate N-1 is labelled 0.
    """
    n = 1 << ctx.m
    if not 0 <= c < n:
        raise IndexError(f"coordinate {c} out of range")
    return 0 if c == n - 1 else ctx.alpha_pow(c + 1)


def ebch_coordinate_of_label(ctx: FieldContext, e: int) -> int:
    n = 1 << ctx.m
    if e == 0:
        return n - 1
    return (ctx.log[e] - 1) % ctx.order


def affine_field_permutation(ctx: FieldContext, beta: int, gamma: int) -> Permutation:
    """Coordinate permutation induced by z -> beta*z + gamma on labels."""
    if beta == 0:
        raise ValueError("beta must be nonzero")
    n = 1 << ctx.m
    mapping = [0] * n
    for c in range(n):
        z = ebch_coordinate_label(ctx, c)
        mapping[c] = ebch_coordinate_of_label(ctx, gf_mul(ctx, beta, z) ^ gamma)
    return Permutation(mapping)


def ebch_double_transitivity_witness(m: int, i: int, j: int, k: int) -> Permutation:
    """Affine-map automorphism of eBCH codes fixing i and sending j to k."""
    ctx = FieldContext(m)
    n = 1 << m
    for x in (i, j, k):
        if not 0 <= x < n:
            raise IndexError(f"coordinate {x} out of range")
    if i == j or i == k:
        raise ValueError("coordinate i must differ from j and k")
    if j == k:
        return affine_field_permutation(ctx, 1, 0)
    ti = ebch_coordinate_label(ctx, i)
    tj = ebch_coordinate_label(ctx, j)
    tk = ebch_coordinate_label(ctx, k)
    beta = gf_div(ctx, ti ^ tk, ti ^ tj)
    gamma = gf_mul(ctx, ti, gf_div(ctx, tk ^ tj, ti ^ tj))
    return affine_field_permutation(ctx, beta, gamma)


def double_transitivity_witness(family: str, m: int, i: int, j: int, k: int) -> Permutation:
    """Witness permutation with image(i)=i and image(j)=k for the family."""
    if family == "rm":
        return rm_double_transitivity_witness(m, i, j, k)
    if family == "ebch":
        return ebch_double_transitivity_witness(m, i, j, k)
    raise ValueError(f"unknown family {family!r}; expected 'rm' or 'ebch'")
