import math

import numpy as np
import pytest
from scipy.stats import spearmanr

from exitlab._kernels import run_trials
from exitlab.channel import ErasurePattern, decode, indirect_recovery_fails
from exitlab.codes import LinearCode
from exitlab.exit_exact import average_exit_exact, exit_polynomial_exact
from exitlab.families import reed_muller, repetition, single_parity_check
from exitlab.gf2 import BitVector
from exitlab.montecarlo import (McCurve, _packed_code, delta_m_bound,
                                estimate_p_t, h_tail_bound, isotonic_fit,
                                read_curve_csv, run_curve, threshold_report,
                                width_bound_lemma13, width_bound_thm7,
                                write_curve_csv)


def reference_counts(code, erased_row):
    """Per-pattern direct/indirect failure counts from the pure decoders."""
    n = code.n
    bits = 0
    for j in range(n):
        if erased_row[j]:
            bits |= 1 << j
    pat = ErasurePattern(n, BitVector(n, bits))
    report = decode(code, pat)
    n_ind = 0
    for i in range(n):
        if pat.is_erased(i):
            n_ind += bool(report.bit_failed.get(i))
        else:
            n_ind += indirect_recovery_fails(code, i, pat)
    return report.num_bit_failures, n_ind, report.block_failed


class TestKernelAgainstReference:
    @pytest.mark.parametrize("code", [
        single_parity_check(5),
        repetition(6),
        reed_muller(1, 3),
        reed_muller(2, 4),
        repetition(70),                      # multiword parity-check side
        reed_muller(1, 7),                   # N=128, K=8
        LinearCode(20, [0b10011010011010010101, 0b01101101100101100110,
                        0b11110000111100001111, 0b00001111000011110000,
                        0b10101010101010101010], name="r20"),
    ])
    def test_counts_match(self, code):
        rng = np.random.default_rng(code.n)
        gcols, hcols = _packed_code(code)
        for p in (0.2, 0.5, 0.8):
            erased = rng.random((40, code.n)) < p
            si, sqi, sd, sqd, bl, viol = run_trials(
                gcols, hcols, np.int64(code.k), np.int64(code.n - code.k),
                erased, np.int64(1))
            assert viol == 0
            ref = [reference_counts(code, erased[t]) for t in range(40)]
            assert sd == sum(r[0] for r in ref)
            assert sqd == sum(r[0] ** 2 for r in ref)
            assert si == sum(r[1] for r in ref)
            assert sqi == sum(r[1] ** 2 for r in ref)
            assert bl == sum(r[2] for r in ref)

    def test_wide_generator_side(self):
        # K > 64 forces two words on the generator side
        import random
        bits = random.Random(99)
        rng = np.random.default_rng(99)
        rows = [bits.getrandbits(90) for _ in range(70)]
        code = LinearCode(90, rows)
        assert code.k > 64
        gcols, hcols = _packed_code(code)
        erased = rng.random((20, 90)) < 0.5
        si, sqi, sd, sqd, bl, viol = run_trials(
            gcols, hcols, np.int64(code.k), np.int64(code.n - code.k),
            erased, np.int64(1))
        ref = [reference_counts(code, erased[t]) for t in range(20)]
        assert (sd, si, bl) == (sum(r[0] for r in ref),
                               sum(r[1] for r in ref),
                               sum(r[2] for r in ref))


class TestRunCurve:
    def test_endpoint_rows_exact(self):
        curve = run_curve(reed_muller(1, 3), [0.0, 1.0], 500, 3)
        assert curve.h_hat[0] == 0.0 and curve.pb_hat[0] == 0.0 and curve.pB_hat[0] == 0.0
        assert curve.h_hat[1] == 1.0 and curve.pB_hat[1] == 1.0

    def test_deterministic_and_chunk_invariant(self):
        code = reed_muller(1, 4)
        a = run_curve(code, [0.3, 0.5], 4000, 42)
        b = run_curve(code, [0.3, 0.5], 4000, 42)
        c = run_curve(code, [0.3, 0.5], 4000, 42, chunk=123)
        for key in ("h_hat", "h_ci", "pb_hat", "pb_ci", "pB_hat", "pB_ci"):
            assert np.array_equal(getattr(a, key), getattr(b, key))
            assert np.array_equal(getattr(a, key), getattr(c, key))

    def test_seed_changes_results(self):
        code = reed_muller(1, 4)
        a = run_curve(code, [0.5], 2000, 1)
        b = run_curve(code, [0.5], 2000, 2)
        assert not np.array_equal(a.h_hat, b.h_hat)

    def test_calibration_against_exact(self):
        code = reed_muller(1, 4)
        grid = [0.25, 0.5, 0.75]
        curve = run_curve(code, grid, 30_000, 7)
        exact = np.array([average_exit_exact(code, p) for p in grid])
        assert np.all(np.abs(curve.h_hat - exact) <= 3 * curve.h_ci + 1e-12)

    def test_bit_erasure_identity(self):
        # grid starts where 20k trials actually resolve the failure rate;
        # far below threshold both counters are zero and the CIs collapse
        code = reed_muller(1, 4)
        grid = np.arange(0.3, 0.95, 0.1)
        curve = run_curve(code, grid, 20_000, 11)
        combined = curve.pb_ci + curve.p_grid * curve.h_ci
        assert np.all(np.abs(curve.pb_hat - curve.p_grid * curve.h_hat)
                      <= 3 * combined + 1e-12)

    def test_block_bit_inequalities(self):
        code = reed_muller(1, 4)
        curve = run_curve(code, [0.3, 0.5, 0.7], 20_000, 13)
        d = curve.d_min_used
        assert np.all(curve.pb_hat <= curve.pB_hat + 1e-12)
        assert np.all(curve.pB_hat <= code.n * curve.pb_hat / d + 1e-12)
        assert np.all(curve.pB_hat <= code.n * curve.pb_hat + 1e-12)

    def test_raw_estimates_trend_upward(self):
        code = reed_muller(1, 3)
        grid = np.linspace(0.05, 0.90, 20)
        curve = run_curve(code, grid, 10_000, 5)
        rho = spearmanr(curve.p_grid, curve.h_hat).statistic
        assert rho > 0.9

    def test_sandwich_abort_diagnostic(self):
        code = reed_muller(1, 3)
        with pytest.raises(RuntimeError, match="sandwich"):
            run_curve(code, [0.9], 200, 3, d_min=code.n + 1)

    def test_validation(self):
        code = repetition(3)
        with pytest.raises(ValueError):
            run_curve(code, [0.5, 0.4], 10, 1)
        with pytest.raises(ValueError):
            run_curve(code, [1.5], 10, 1)
        with pytest.raises(ValueError):
            run_curve(code, [0.5], 0, 1)
        with pytest.raises(ValueError):
            run_curve(code, [], 10, 1)


class TestThresholdEstimation:
    @staticmethod
    def exact_curve(code, grid):
        vals = np.array([average_exit_exact(code, p) for p in grid])
        zeros = np.zeros_like(vals)
        return McCurve(p_grid=np.asarray(grid, float), trials=1, h_hat=vals,
                       h_ci=zeros, pb_hat=zeros, pb_ci=zeros, pB_hat=zeros,
                       pB_ci=zeros, n=code.n)

    def test_spc_closed_form_crossing(self):
        grid = np.linspace(0.01, 0.99, 197)
        curve = self.exact_curve(single_parity_check(3), grid)
        assert estimate_p_t(curve, 0.5) == pytest.approx(1 - math.sqrt(0.5), abs=5e-3)

    def test_rm13_self_dual_midpoint(self):
        code = reed_muller(1, 3)
        poly = exit_polynomial_exact(code, 0)
        assert poly.counts == (0, 0, 0, 7, 28, 21, 7, 1)
        assert poly.evaluate(0.5) == pytest.approx(64 / 128)
        curve = self.exact_curve(code, np.linspace(0.05, 0.95, 181))
        assert estimate_p_t(curve, 0.5) == pytest.approx(0.5, abs=5e-3)

    def test_noisy_monotone_recovers_crossing(self):
        rng = np.random.default_rng(21)
        grid = np.arange(0.05, 0.951, 0.02)
        clean = 1 / (1 + np.exp(-(grid - 0.45) / 0.05))
        crossing = 0.45  # logistic midpoint
        noisy = np.clip(clean + rng.normal(0, 0.03, grid.size), 0, 1)
        curve = McCurve(p_grid=grid, trials=1, h_hat=noisy,
                        h_ci=np.zeros_like(grid), pb_hat=np.zeros_like(grid),
                        pb_ci=np.zeros_like(grid), pB_hat=np.zeros_like(grid),
                        pB_ci=np.zeros_like(grid), n=None)
        assert abs(estimate_p_t(curve, 0.5) - crossing) <= 0.02

    def test_no_crossing_warns_and_clips(self):
        grid = np.array([0.1, 0.2, 0.3])
        low = McCurve(p_grid=grid, trials=1, h_hat=np.array([0.0, 0.01, 0.02]),
                      h_ci=np.zeros(3), pb_hat=np.zeros(3), pb_ci=np.zeros(3),
                      pB_hat=np.zeros(3), pB_ci=np.zeros(3))
        with pytest.warns(UserWarning):
            assert estimate_p_t(low, 0.5) == 0.3

    def test_isotonic_fit_matches_naive_pav(self):
        def naive_pav(y):
            blocks = [[v] for v in y]
            i = 0
            while i < len(blocks) - 1:
                if np.mean(blocks[i]) > np.mean(blocks[i + 1]):
                    blocks[i:i + 2] = [blocks[i] + blocks[i + 1]]
                    i = max(i - 1, 0)
                else:
                    i += 1
            out = []
            for blk in blocks:
                out.extend([np.mean(blk)] * len(blk))
            return np.array(out)

        rng = np.random.default_rng(2)
        for _ in range(25):
            y = rng.random(int(rng.integers(2, 30)))
            assert np.allclose(isotonic_fit(y), naive_pav(y))

    def test_threshold_report_fields(self):
        curve = self.exact_curve(reed_muller(1, 3), np.linspace(0.05, 0.95, 91))
        report = threshold_report(curve, 0.1, lemma13_params=(0.0, 1.0, math.log(7)))
        assert report.p_eps_hat <= report.p_1_minus_eps_hat
        assert report.width_hat == pytest.approx(
            report.p_1_minus_eps_hat - report.p_eps_hat)
        assert report.width_bound_thm7 == pytest.approx(width_bound_thm7(7, 0.1))
        assert report.width_bound_lemma13 == pytest.approx(
            width_bound_thm7(7, 0.1))
        assert report.thm7_constant == 1.0
        assert not report.p_eps_at_edge and not report.p_1_minus_eps_at_edge
        payload = report.to_json_dict()
        assert payload["eps"] == 0.1
        assert set(payload) >= {"p_eps_hat", "p_1_minus_eps_hat", "width_hat",
                                "width_bound_thm7"}


class TestBounds:
    def test_thm7_examples(self):
        assert width_bound_thm7(10, 0.5) == 0.0
        assert width_bound_thm7(127, 0.1) == pytest.approx(
            2 * math.log(9) / math.log(127))
        assert width_bound_thm7(127, 0.1) == pytest.approx(0.9072, abs=2e-4)

    def test_thm7_decreasing_in_m(self):
        vals = [width_bound_thm7(m, 0.1) for m in (10, 100, 1000, 10_000)]
        assert vals == sorted(vals, reverse=True)

    def test_thm7_validation(self):
        with pytest.raises(ValueError):
            width_bound_thm7(1, 0.1)
        with pytest.raises(ValueError):
            width_bound_thm7(10, 0.6)

    def test_lemma13_collapses_to_thm7(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            m = int(rng.integers(2, 10_000))
            eps = float(rng.uniform(1e-4, 0.5))
            assert width_bound_lemma13(0.0, 1.0, math.log(m), eps, 1 - eps) \
                == pytest.approx(width_bound_thm7(m, eps), abs=1e-12)

    def test_lemma13_arithmetic_example(self):
        val = width_bound_lemma13(0.05, 0.9, 10.0, 0.1, 0.9)
        assert val == pytest.approx(0.05 + 0.1 + 2 * math.log(9) / 10, abs=1e-12)
        assert val == pytest.approx(0.5894, abs=2e-4)

    def test_lemma13_validation(self):
        with pytest.raises(ValueError):
            width_bound_lemma13(0.5, 0.4, 1.0, 0.1, 0.9)
        with pytest.raises(ValueError):
            width_bound_lemma13(0.0, 1.0, 0.0, 0.1, 0.9)
        with pytest.raises(ValueError):
            width_bound_lemma13(0.0, 1.0, 1.0, 0.9, 0.1)

    def test_tail_bound_at_midpoint_is_one(self):
        assert h_tail_bound(0.0, 1.0, 5.0, 0.4, 0.4) == 1.0

    def test_tail_bound_decays(self):
        vals = [h_tail_bound(0.0, 1.0, 10.0, 0.5, d) for d in (0.5, 0.4, 0.3, 0.2)]
        assert vals == sorted(vals, reverse=True)
        assert vals[0] == 1.0

    def test_delta_m_examples(self):
        # second term vanishes as N grows with r fixed
        vals = [delta_m_bound(0.25, 0.5, 1 << m) for m in (10, 20, 40, 60, 500)]
        assert vals == sorted(vals, reverse=True)
        assert vals[-1] == pytest.approx(0.25 / 0.75, abs=0.02)
        assert delta_m_bound(0.5, 0.5, 1 << 20) == pytest.approx(1.2, abs=1e-3)

    def test_delta_m_schedule_goes_to_zero(self):
        # eps_m = 1/log(r log N_m) drives the whole bound down the table
        r = 0.5
        vals = []
        for m in range(10, 61, 10):
            n_m = float(2 ** m)
            eps_m = 1.0 / math.log(r * math.log(n_m))
            vals.append(delta_m_bound(eps_m, r, int(min(n_m, 2**62))))
        assert vals == sorted(vals, reverse=True)
        assert vals[-1] < vals[0] / 2

    def test_delta_m_validation(self):
        with pytest.raises(ValueError):
            delta_m_bound(0.0, 0.5, 100)
        with pytest.raises(ValueError):
            delta_m_bound(0.5, 1.0, 100)
        with pytest.raises(ValueError):
            delta_m_bound(0.5, 0.5, 2)


class TestCsv:
    def test_roundtrip_and_schema(self, tmp_path):
        curve = run_curve(reed_muller(1, 3), [0.2, 0.5, 0.8], 1000, 17)
        path = tmp_path / "curve.csv"
        write_curve_csv(curve, path)
        header = path.read_text().splitlines()[0]
        assert header == "p,trials,h_hat,h_ci,pb_hat,pb_ci,pB_hat,pB_ci"
        again = read_curve_csv(path)
        assert again.trials == 1000
        for key in ("p_grid", "h_hat", "h_ci", "pb_hat", "pb_ci", "pB_hat", "pB_ci"):
            assert np.array_equal(getattr(again, "p_grid" if key == "p_grid" else key),
                                  getattr(curve, "p_grid" if key == "p_grid" else key))

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("p,trials,h_hat,h_ci,pb_hat,pb_ci,pB_hat,pB_ci\n")
        with pytest.raises(ValueError):
            read_curve_csv(path)
