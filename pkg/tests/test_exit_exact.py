from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest

from exitlab.channel import ErasurePattern, indirect_recovery_fails
from exitlab.codes import EnumerationBudgetError, LinearCode
from exitlab.exit_exact import (ExitPolynomial, area_exact,
                                average_exit_exact, boundary_g,
                                conditional_entropy_exact,
                                exit_polynomial_exact, exit_vector_exact,
                                indirect_failure_by_table,
                                influence_profile_exact, margulis_russo_check,
                                omega_table)
from exitlab.families import reed_muller, repetition, single_parity_check
from exitlab.gf2 import BitVector


class TestExitPolynomial:
    def test_spc3_counts(self):
        poly = exit_polynomial_exact(single_parity_check(3), 0)
        assert poly.counts == (0, 2, 1)
        p = np.linspace(0, 1, 11)
        assert np.allclose(poly.evaluate(p), 1 - (1 - p) ** 2)

    def test_repetition3_counts(self):
        poly = exit_polynomial_exact(repetition(3), 0)
        assert poly.counts == (0, 0, 1)
        assert poly.evaluate(0.25) == pytest.approx(0.0625)

    def test_rm13_counts(self):
        for i in range(8):
            poly = exit_polynomial_exact(reed_muller(1, 3), i)
            assert poly.counts == (0, 0, 0, 7, 28, 21, 7, 1)

    def test_endpoint_values(self, suite):
        for code in suite:
            if code.k == 0:
                continue
            poly = exit_polynomial_exact(code, 0)
            assert poly.evaluate(1.0) == pytest.approx(1.0)
            if code.d_min_known is not None and code.d_min_known >= 2:
                assert poly.evaluate(0.0) == 0.0
                assert poly.counts[0] == 0

    def test_proper_codes_have_top_count_one(self, suite):
        for code in suite:
            if code.k == 0 or not code.is_proper():
                continue
            poly = exit_polynomial_exact(code, 0)
            assert poly.counts[-1] == 1

    def test_monotone_shadow_property(self, suite):
        for code in suite:
            for i in range(code.n):
                poly = exit_polynomial_exact(code, i)
                fracs = [Fraction(c, comb(poly.m, w))
                         for w, c in enumerate(poly.counts)]
                assert all(a <= b for a, b in zip(fracs, fracs[1:]))

    def test_strictly_increasing(self, suite):
        grid = np.linspace(0.0, 1.0, 21)
        rationals = [Fraction(t, 8) for t in range(9)]
        for code in suite:
            if code.k == 0 or code.k == code.n:
                continue
            for i in range(code.n):
                poly = exit_polynomial_exact(code, i)
                vals = poly.evaluate(grid)
                assert np.all(np.diff(vals) >= 0)
                exact = [sum(c * p ** w * (1 - p) ** (poly.m - w)
                             for w, c in enumerate(poly.counts))
                         for p in rationals]
                assert all(a < b for a, b in zip(exact, exact[1:]))

    def test_budget_rejected(self):
        wide = LinearCode(23, [1 << i for i in range(23)])
        with pytest.raises(EnumerationBudgetError):
            exit_polynomial_exact(wide, 0)

    def test_table_matches_rank_decoder(self):
        codes = [single_parity_check(5), repetition(4), reed_muller(1, 3),
                 LinearCode(7, [0b1011001, 0b0110100, 0b1101010], name="r73")]
        for code in codes:
            for i in range(code.n):
                for bits in range(1 << code.n):
                    if (bits >> i) & 1:
                        continue
                    pat = ErasurePattern(code.n, BitVector(code.n, bits))
                    assert (indirect_failure_by_table(code, i, pat)
                            == indirect_recovery_fails(code, i, pat))


class TestInfluences:
    def test_spc3_influence_is_one_minus_p(self):
        prof = influence_profile_exact(single_parity_check(3), 0)
        assert prof.counts[1] == (1, 1, 0)
        p = np.linspace(0, 1, 9)
        assert np.allclose(prof.influence_evaluate(1, p), 1 - p)

    def test_repetition3_influence_is_p(self):
        prof = influence_profile_exact(repetition(3), 0)
        assert prof.counts[1] == (0, 1, 1)
        p = np.linspace(0, 1, 9)
        assert np.allclose(prof.influence_evaluate(1, p), p)

    def test_rm13_influences_all_equal(self):
        for i in (0, 7):
            prof = influence_profile_exact(reed_muller(1, 3), i)
            vals = list(prof.counts.values())
            assert all(v == vals[0] for v in vals)


class TestMargulisRusso:
    def test_spc3(self):
        assert margulis_russo_check(single_parity_check(3), 0)

    def test_repetition3(self):
        assert margulis_russo_check(repetition(3), 0)

    def test_rm14_exact(self):
        code = reed_muller(1, 4)
        assert all(margulis_russo_check(code, i) for i in range(16))


class TestArea:
    def test_spc3(self):
        assert area_exact(single_parity_check(3)) == Fraction(2, 3)

    def test_repetition3(self):
        assert area_exact(repetition(3)) == Fraction(1, 3)

    def test_rm13(self):
        assert area_exact(reed_muller(1, 3)) == Fraction(1, 2)


class TestConditionalEntropy:
    def test_repetition2_product_form(self):
        code = repetition(2)
        rng = np.random.default_rng(8)
        for _ in range(5):
            p = rng.random(2)
            assert conditional_entropy_exact(code, p) == pytest.approx(p[0] * p[1])

    def test_extremes(self, suite):
        for code in suite[:12]:
            assert conditional_entropy_exact(code, np.ones(code.n)) == pytest.approx(code.k)
            assert conditional_entropy_exact(code, np.zeros(code.n)) == pytest.approx(0.0)

    def test_partial_derivative_matches_exit_vector(self):
        codes = [single_parity_check(3), repetition(3), reed_muller(1, 3)]
        delta = 1e-5
        rng = np.random.default_rng(17)
        for code in codes:
            for _ in range(5):
                p = 0.1 + 0.8 * rng.random(code.n)
                i = int(rng.integers(code.n))
                hi, lo = p.copy(), p.copy()
                hi[i] += delta
                lo[i] -= delta
                fd = (conditional_entropy_exact(code, hi)
                      - conditional_entropy_exact(code, lo)) / (2 * delta)
                assert abs(fd - exit_vector_exact(code, i, p)) <= 1e-6

    def test_exit_vector_ignores_own_coordinate(self):
        code = reed_muller(1, 3)
        p = np.full(8, 0.4)
        q = p.copy()
        q[3] = 0.99
        assert exit_vector_exact(code, 3, p) == exit_vector_exact(code, 3, q)

    def test_vector_exit_at_uniform_point_matches_scalar(self):
        code = reed_muller(1, 3)
        poly = exit_polynomial_exact(code, 2)
        assert exit_vector_exact(code, 2, np.full(8, 0.3)) == pytest.approx(poly.evaluate(0.3))


class TestBoundary:
    def test_spc3_single_neighbor_outside(self):
        assert boundary_g(single_parity_check(3), 0, [1]) == 1

    def test_outside_the_set_is_zero(self):
        assert boundary_g(single_parity_check(3), 0, []) == 0

    def test_min_boundary_is_one_for_good_dual_distance(self):
        # [7,4] Hamming code: dual distance 4 >= 3, so the minimum
        # boundary count over the whole failure-set boundary collapses to 1
        code = reed_muller(1, 3).puncture(7)
        assert code.dual().min_distance_exhaustive() >= 3
        mins = []
        for i in range(code.n):
            table = omega_table(code, i)
            m = code.n - 1
            idx = np.arange(1 << m)
            g = np.zeros(1 << m, dtype=int)
            for b in range(m):
                g += table & ~table[idx ^ (1 << b)]
            boundary = g[table & (g > 0)]
            mins.append(int(boundary.min()))
        assert min(mins) == 1

    def test_position_validation(self):
        with pytest.raises(ValueError):
            boundary_g(single_parity_check(3), 0, [0])


class TestAverage:
    def test_average_matches_bitwise_mean(self):
        code = single_parity_check(4)
        p = 0.37
        direct = np.mean([exit_polynomial_exact(code, i).evaluate(p)
                          for i in range(4)])
        assert average_exit_exact(code, p) == pytest.approx(direct)
