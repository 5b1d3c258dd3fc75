"""Constructions of the code families under study.

Reed-Muller codes are built by evaluating all monomials of bounded degree
over the points of {0,1}^m; BCH codes come from cyclotomic-coset generator
polynomials, and eBCH appends an overall parity bit.  Rate schedules pick
the member of each family whose rate best tracks a target as the length
grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .codes import LinearCode
from .gf2m import FieldContext, bch_generator_poly


def repetition(n: int) -> LinearCode:
    """The [n, 1] repetition code."""
    if n < 1:
        raise ValueError("length must be positive")
    return LinearCode(n, [(1 << n) - 1], name=f"repetition({n})",
                      d_min_known=n)


def single_parity_check(n: int) -> LinearCode:
    """The [n, n-1] even-weight code."""
    if n < 2:
        raise ValueError("length must be at least 2")
    rows = [(1 << i) | (1 << (n - 1)) for i in range(n - 1)]
    return LinearCode(n, rows, name=f"spc({n})", d_min_known=2)


def rm_point_of_column(c: int, m: int) -> int:
    """Evaluation point for generator column c, packed with x_t at bit t.

    Columns 0..2^m-2 hold the points 1..2^m-1 in binary order; the last
    column holds the all-zero point.
    """
    n = 1 << m
    if not 0 <= c < n:
        raise IndexError(f"column {c} out of range")
    return c + 1 if c < n - 1 else 0


def rm_column_of_point(x: int, m: int) -> int:
    n = 1 << m
    if not 0 <= x < n:
        raise ValueError(f"point {x} out of range")
    return x - 1 if x else n - 1


def reed_muller(v: int, m: int) -> LinearCode:
    """The length-2^m code of degree-<=v multilinear polynomial evaluations."""
    if not 0 <= v <= m:
        raise ValueError(f"order v={v} must satisfy 0 <= v <= m={m}")
    if m > 20:
        raise ValueError("m > 20 exceeds the construction budget")
    n = 1 << m
    points = [rm_point_of_column(c, m) for c in range(n)]
    rows = []
    for deg in range(v + 1):
        for subset in combinations(range(m), deg):
            mask = 0
            for t in subset:
                mask |= 1 << t
            bits = 0
            for c, pt in enumerate(points):
                if pt & mask == mask:
                    bits |= 1 << c
            rows.append(bits)
    return LinearCode(n, rows, name=f"RM({v},{m})", d_min_known=1 << (m - v))


def bch(v: int, m: int) -> LinearCode:
    """Primitive narrow-sense BCH code of length 2^m - 1.

    Generator rows are the cyclic shifts of the generator polynomial, so
    the stored code is the full cyclic code of designed distance v + 1.
    """
    ctx = FieldContext(m)
    gen_poly = bch_generator_poly(ctx, v)
    n = (1 << m) - 1
    k = n - gen_poly.degree
    if k <= 0:
        raise ValueError(f"BCH({v},{m}) has dimension 0")
    rows = [gen_poly.coeffs << i for i in range(k)]
    return LinearCode(n, rows, name=f"BCH({v},{m})", d_min_designed=v + 1)


def ebch(v: int, m: int) -> LinearCode:
    """Extended BCH code: overall parity bit appended, same dimension."""
    base = bch(v, m)
    ext = base.extend_overall_parity()
    return LinearCode(ext.n, ext.gen, name=f"eBCH({v},{m})",
                      d_min_designed=v + 1)


def q_function(t: float) -> float:
    """Upper tail of the standard normal."""
    return 0.5 * math.erfc(t / math.sqrt(2.0))


def q_inverse(y: float, tol: float = 1e-9) -> float:
    """Inverse of q_function by bisection to absolute tolerance tol."""
    if not 0.0 < y < 1.0:
        raise ValueError("q_inverse requires 0 < y < 1")
    lo, hi = -40.0, 40.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if q_function(mid) > y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class RateEntry:
    m: int
    v: int
    n: int
    k: int
    rate: Fraction
    d_designed: int | None = None
    feasible: bool = True


@dataclass
class RateSchedule:
    target_rate: float
    family: str
    entries: list[RateEntry] = field(default_factory=list)

    def build(self, i: int) -> LinearCode:
        e = self.entries[i]
        if not e.feasible:
            raise ValueError(f"entry m={e.m} is infeasible for rate {self.target_rate}")
        if self.family == "rm":
            return reed_muller(e.v, e.m)
        if self.family == "bch":
            return bch(e.v, e.m)
        raise ValueError(f"unknown family {self.family!r}")


def rm_rate_sequence(r: float, m_list) -> RateSchedule:
    """Reed-Muller orders tracking target rate r via the Gaussian quantile.

    v is floor(m/2 + sqrt(m)/2 * Qinv(1-r)) clamped to [0, m]; the binomial
    CDF then drives the achieved rate to r as m grows.
    """
    if not 0.0 < r < 1.0:
        raise ValueError("target rate must lie in (0, 1)")
    qi = q_inverse(1.0 - r)
    sched = RateSchedule(target_rate=r, family="rm")
    for m in m_list:
        v = max(math.floor(m / 2 + math.sqrt(m) / 2 * qi), 0)
        v = min(v, m)
        k = sum(math.comb(m, i) for i in range(v + 1))
        sched.entries.append(RateEntry(m=m, v=v, n=1 << m, k=k,
                                       rate=Fraction(k, 1 << m)))
    return sched


def bch_rate_sequence(r: float, m_list) -> RateSchedule:
    """Smallest BCH designed distance whose generator degree reaches N(1-r).

    Because consecutive generator degrees differ by at most m, the chosen
    degree lands in [N(1-r), N(1-r) + m] and the rate in [r - m/N, r].
    Entries where that forces dimension 0 are flagged infeasible.
    """
    if not 0.0 < r < 1.0:
        raise ValueError("target rate must lie in (0, 1)")
    sched = RateSchedule(target_rate=r, family="bch")
    for m in m_list:
        ctx = FieldContext(m)
        n = (1 << m) - 1
        threshold = n * (1.0 - r)
        covered: set[int] = set()
        deg = 0
        v = None
        for s in range(1, n + 1):
            if s not in covered:
                coset = set()
                t = s
                while t not in coset:
                    coset.add(t)
                    t = (2 * t) % n
                covered |= coset
                deg += len(coset)
            if deg >= threshold:
                v = s
                break
        assert v is not None  # deg reaches n once every coset is absorbed
        k = n - deg
        sched.entries.append(RateEntry(m=m, v=v, n=n, k=k,
                                       rate=Fraction(k, n),
                                       d_designed=v + 1,
                                       feasible=k > 0))
    return sched
