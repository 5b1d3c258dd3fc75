"""GF(2^m) arithmetic and the GF(2)[x] machinery for cyclic-code generators.

Field elements are ints in [0, 2^m) in the polynomial basis; multiplication
runs on exp/log tables built once per :class:`FieldContext`.  Binary
polynomials are ints with the coefficient of x^i at bit i.
"""

from __future__ import annotations

from functools import reduce

# Lexicographically-least primitive polynomial per extension degree,
# written as an int with the x^m term included.  Validated at context
# construction, so a bad entry cannot survive silently.
PRIMITIVE_POLYS = {
    1: 0b11,                # x + 1
    2: 0b111,               # x^2 + x + 1
    3: 0b1011,              # x^3 + x + 1
    4: 0b10011,             # x^4 + x + 1
    5: 0b100101,            # x^5 + x^2 + 1
    6: 0b1000011,           # x^6 + x + 1
    7: 0b10000011,          # x^7 + x + 1
    8: 0b100011101,         # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,        # x^9 + x^4 + 1
    10: 0b10000001001,      # x^10 + x^3 + 1
    11: 0b100000000101,     # x^11 + x^2 + 1
    12: 0b1000001010011,    # x^12 + x^6 + x^4 + x + 1
    13: 0b10000000011011,   # x^13 + x^4 + x^3 + x + 1
    14: 0b100010001000011,  # x^14 + x^10 + x^6 + x + 1
    15: 0b1000000000000011,  # x^15 + x + 1
    16: 0b10001000000001011,  # x^16 + x^12 + x^3 + x + 1
}


class Poly2:
    """Polynomial over GF(2), coefficients packed into an int."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: int):
        if coeffs < 0:
            raise ValueError("coefficient mask must be nonnegative")
        self.coeffs = coeffs

    @classmethod
    def from_exponents(cls, exponents) -> "Poly2":
        return cls(reduce(lambda a, e: a | (1 << e), exponents, 0))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return self.coeffs.bit_length() - 1

    def is_zero(self) -> bool:
        return self.coeffs == 0

    def __mul__(self, other: "Poly2") -> "Poly2":
        return Poly2(clmul(self.coeffs, other.coeffs))

    def __mod__(self, other: "Poly2") -> "Poly2":
        return Poly2(poly_divmod(self.coeffs, other.coeffs)[1])

    def __add__(self, other: "Poly2") -> "Poly2":
        return Poly2(self.coeffs ^ other.coeffs)

    def divides(self, other: "Poly2") -> bool:
        return poly_divmod(other.coeffs, self.coeffs)[1] == 0

    def exponents(self) -> list[int]:
        return [e for e in range(self.coeffs.bit_length()) if (self.coeffs >> e) & 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly2) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("Poly2", self.coeffs))

    def __repr__(self) -> str:
        if self.coeffs == 0:
            return "Poly2(0)"
        terms = []
        for e in reversed(self.exponents()):
            terms.append("1" if e == 0 else ("x" if e == 1 else f"x^{e}"))
        return "Poly2(" + " + ".join(terms) + ")"


def clmul(a: int, b: int) -> int:
    """Carry-less (GF(2)[x]) product of two coefficient masks."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    """Quotient and remainder of GF(2)[x] division."""
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = b.bit_length()
    q = 0
    while a.bit_length() >= db:
        shift = a.bit_length() - db
        q |= 1 << shift
        a ^= b << shift
    return q, a


class FieldContext:
    """GF(2^m) with exp/log tables for a validated primitive polynomial."""

    __slots__ = ("m", "order", "primitive_poly", "exp", "log")

    def __init__(self, m: int, primitive_poly: int | None = None):
        if not 1 <= m <= 16:
            raise ValueError("extension degree must be in [1, 16]")
        if primitive_poly is None:
            primitive_poly = PRIMITIVE_POLYS[m]
        if primitive_poly.bit_length() - 1 != m or not primitive_poly & 1:
            raise ValueError("defining polynomial must be monic of degree m with nonzero constant term")
        self.m = m
        self.order = (1 << m) - 1
        self.primitive_poly = primitive_poly
        exp = [0] * (2 * max(self.order, 1))
        log = [0] * (1 << m)
        x = 1
        for e in range(self.order):
            exp[e] = x
            if x == 1 and e > 0:
                raise ValueError("polynomial is not primitive: x has order %d < %d" % (e, self.order))
            log[x] = e
            x <<= 1
            if x >> m:
                x ^= primitive_poly
        if x != 1:
            raise ValueError("polynomial is not primitive")
        for e in range(self.order, len(exp)):
            exp[e] = exp[e - self.order]
        self.exp = tuple(exp)
        self.log = tuple(log)

    def alpha_pow(self, e: int) -> int:
        """alpha^e, exponent taken mod 2^m - 1."""
        if self.order == 0:
            return 1
        return self.exp[e % self.order]


def gf_mul(ctx: FieldContext, a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return ctx.exp[ctx.log[a] + ctx.log[b]]


def gf_inv(ctx: FieldContext, a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    if a == 1:
        return 1
    return ctx.exp[ctx.order - ctx.log[a]]


def gf_div(ctx: FieldContext, a: int, b: int) -> int:
    return gf_mul(ctx, a, gf_inv(ctx, b))


def gf_pow(ctx: FieldContext, a: int, e: int) -> int:
    if a == 0:
        return 0 if e else 1
    return ctx.exp[(ctx.log[a] * e) % ctx.order]


def poly_eval_in_field(ctx: FieldContext, poly: Poly2, point: int) -> int:
    """Evaluate a GF(2)[x] polynomial at a field element (Horner)."""
    acc = 0
    for e in range(poly.degree, -1, -1):
        acc = gf_mul(ctx, acc, point) ^ ((poly.coeffs >> e) & 1)
    return acc


def cyclotomic_coset(ctx: FieldContext, s: int) -> frozenset[int]:
    """Orbit of s under doubling mod 2^m - 1."""
    if not 0 <= s < max(ctx.order, 1):
        raise ValueError(f"exponent {s} out of range [0, {ctx.order})")
    if ctx.order == 0:
        return frozenset({0})
    coset = set()
    t = s
    while t not in coset:
        coset.add(t)
        t = (2 * t) % ctx.order
    return frozenset(coset)


def minimal_polynomial(ctx: FieldContext, s: int) -> Poly2:
    """Monic GF(2) polynomial whose roots are exactly the coset of alpha^s."""
    coset = cyclotomic_coset(ctx, s)
    # Expand prod (x + alpha^j) with GF(2^m) coefficients; conjugate-closed
    # root sets always collapse the coefficients into {0, 1}.
    coeffs = [1]
    for j in sorted(coset):
        root = ctx.alpha_pow(j)
        nxt = [0] * (len(coeffs) + 1)
        for t, c in enumerate(coeffs):
            nxt[t] ^= gf_mul(ctx, c, root)
            nxt[t + 1] ^= c
        coeffs = nxt
    mask = 0
    for t, c in enumerate(coeffs):
        if c not in (0, 1):
            raise AssertionError("minimal polynomial coefficient escaped GF(2)")
        mask |= c << t
    return Poly2(mask)


def bch_generator_poly(ctx: FieldContext, v: int) -> Poly2:
    """Lowest-degree GF(2) polynomial with roots alpha^1 .. alpha^v."""
    if not 1 <= v <= ctx.order:
        raise ValueError(f"designed-distance parameter v={v} out of range [1, {ctx.order}]")
    seen: set[int] = set()
    gen = Poly2(1)
    for s in range(1, v + 1):
        rep = s % ctx.order  # alpha^order = 1, the exponent-0 root
        if rep in seen:
            continue
        coset = cyclotomic_coset(ctx, rep)
        seen |= coset
        gen = gen * minimal_polynomial(ctx, rep)
    return gen
