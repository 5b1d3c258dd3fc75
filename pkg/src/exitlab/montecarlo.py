"""Monte Carlo recovery curves, threshold estimation, and analytic bounds.

Estimates per erasure rate p over many sampled patterns:

* h_hat  - fraction of bits whose indirect recovery (own erasure ignored)
           fails, averaged over bits and trials;
* pb_hat - fraction of bits the full decoder leaves unresolved;
* pB_hat - fraction of trials with any unresolved bit.

Randomness is counter-based: grid point g of a run with master seed s draws
from an independent stream keyed (s, g), consumed in fixed-size blocks, so
results are bit-identical across replays regardless of scheduling.  The CSV
schema is ``p,trials,h_hat,h_ci,pb_hat,pb_ci,pB_hat,pB_ci``, one row per
grid point, shortest round-trip decimals.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import isotonic_regression

from ._kernels import run_trials
from .codes import LinearCode

DEFAULT_CHUNK = 1 << 13

# Constant in the total-influence differential inequality under equal
# influences; the transition-width bound carries a factor 2/C.
WIDTH_BOUND_C = 1.0

Z_95 = 1.96


@dataclass
class McCurve:
    """Per-grid-point estimates with 95% normal-approximation half-widths."""

    p_grid: np.ndarray
    trials: int
    h_hat: np.ndarray
    h_ci: np.ndarray
    pb_hat: np.ndarray
    pb_ci: np.ndarray
    pB_hat: np.ndarray
    pB_ci: np.ndarray
    n: int | None = None
    d_min_used: int | None = None
    name: str = ""


def _pack_columns(col_ints, nbits: int) -> np.ndarray:
    nwords = max(1, (nbits + 63) // 64)
    out = np.zeros((len(col_ints), nwords), dtype=np.uint64)
    mask = (1 << 64) - 1
    for j, col in enumerate(col_ints):
        for w in range(nwords):
            out[j, w] = (col >> (64 * w)) & mask
    return out


@lru_cache(maxsize=32)
def _packed_code(code: LinearCode) -> tuple[np.ndarray, np.ndarray]:
    gcols = _pack_columns(code.columns(), max(code.k, 1))
    hcols = _pack_columns(code.dual().columns(), max(code.n - code.k, 1))
    return gcols, hcols


def _resolve_d_min(code: LinearCode, d_min: int | None) -> int:
    if d_min is not None:
        return d_min
    if code.d_min_known is not None:
        return code.d_min_known
    if 0 < code.k <= 16:
        return code.min_distance_exhaustive()
    if code.d_min_designed is not None:
        return code.d_min_designed
    return 1


def run_curve(code: LinearCode, p_grid, trials: int, master_seed: int,
              d_min: int | None = None, chunk: int = DEFAULT_CHUNK) -> McCurve:
    """Sample `trials` patterns per grid point and decode them all.

    Every trial is checked against the deterministic sandwich
    d_min * block <= bit failures <= N * block; a violation aborts, since
    it can only mean a decoder defect.
    """
    p_grid = np.asarray(p_grid, dtype=float)
    if p_grid.ndim != 1 or p_grid.size == 0:
        raise ValueError("grid must be a nonempty 1-d sequence")
    if np.any((p_grid < 0) | (p_grid > 1)):
        raise ValueError("grid values must lie in [0, 1]")
    if np.any(np.diff(p_grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    if trials < 1:
        raise ValueError("need at least one trial")
    if not 0 <= master_seed < 2 ** 63:
        raise ValueError("master seed must fit in a nonnegative 63-bit int")

    gcols, hcols = _packed_code(code)
    d_lb = _resolve_d_min(code, d_min)
    n = code.n

    h_hat = np.zeros(p_grid.size)
    h_ci = np.zeros(p_grid.size)
    pb_hat = np.zeros(p_grid.size)
    pb_ci = np.zeros(p_grid.size)
    pB_hat = np.zeros(p_grid.size)
    pB_ci = np.zeros(p_grid.size)

    for gi, p in enumerate(p_grid):
        rng = np.random.Generator(np.random.Philox(key=[master_seed, gi]))
        sum_ind = sumsq_ind = sum_dir = sumsq_dir = blocks = 0
        done = 0
        while done < trials:
            batch = min(chunk, trials - done)
            erased = rng.random((batch, n)) < p
            si, sqi, sd, sqd, bl, viol = run_trials(
                gcols, hcols, np.int64(code.k), np.int64(code.n - code.k),
                erased, np.int64(d_lb))
            if viol:
                raise RuntimeError(
                    f"sandwich violation at p={p}: {viol} of {batch} trials "
                    f"had a block failure with fewer than {d_lb} bit failures")
            sum_ind += int(si)
            sumsq_ind += int(sqi)
            sum_dir += int(sd)
            sumsq_dir += int(sqd)
            blocks += int(bl)
            done += batch

        h_hat[gi], h_ci[gi] = _mean_ci(sum_ind, sumsq_ind, trials, n)
        pb_hat[gi], pb_ci[gi] = _mean_ci(sum_dir, sumsq_dir, trials, n)
        phat = blocks / trials
        pB_hat[gi] = phat
        pB_ci[gi] = Z_95 * math.sqrt(phat * (1.0 - phat) / trials)

    return McCurve(p_grid=p_grid, trials=trials, h_hat=h_hat, h_ci=h_ci,
                   pb_hat=pb_hat, pb_ci=pb_ci, pB_hat=pB_hat, pB_ci=pB_ci,
                   n=n, d_min_used=d_lb, name=code.name)


def _mean_ci(total: int, total_sq: int, trials: int, n: int) -> tuple[float, float]:
    """Mean and 95% half-width of per-trial fractions count/n."""
    mean = total / (trials * n)
    if trials < 2:
        return mean, 0.0
    var = (total_sq / (n * n) - trials * mean * mean) / (trials - 1)
    var = max(var, 0.0)
    return mean, Z_95 * math.sqrt(var / trials)


def write_curve_csv(curve: McCurve, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["p", "trials", "h_hat", "h_ci", "pb_hat", "pb_ci",
                         "pB_hat", "pB_ci"])
        for i, p in enumerate(curve.p_grid):
            writer.writerow([repr(float(p)), curve.trials,
                             repr(float(curve.h_hat[i])), repr(float(curve.h_ci[i])),
                             repr(float(curve.pb_hat[i])), repr(float(curve.pb_ci[i])),
                             repr(float(curve.pB_hat[i])), repr(float(curve.pB_ci[i]))])


def read_curve_csv(path) -> McCurve:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            rows.append(row)
    if not rows:
        raise ValueError(f"empty curve file {path}")
    cols = {key: np.array([float(r[key]) for r in rows])
            for key in ("p", "h_hat", "h_ci", "pb_hat", "pb_ci", "pB_hat", "pB_ci")}
    return McCurve(p_grid=cols["p"], trials=int(rows[0]["trials"]),
                   h_hat=cols["h_hat"], h_ci=cols["h_ci"],
                   pb_hat=cols["pb_hat"], pb_ci=cols["pb_ci"],
                   pB_hat=cols["pB_hat"], pB_ci=cols["pB_ci"])


def isotonic_fit(y) -> np.ndarray:
    """Nondecreasing least-squares fit (pool adjacent violators)."""
    return isotonic_regression(np.asarray(y, dtype=float)).x


def _first_crossing(ps: np.ndarray, iso: np.ndarray, t: float) -> tuple[float, bool]:
    above = np.nonzero(iso >= t)[0]
    if above.size == 0:
        return float(ps[-1]), True
    idx = int(above[0])
    if idx == 0:
        return float(ps[0]), bool(iso[0] > t)
    y0, y1 = iso[idx - 1], iso[idx]
    frac = (t - y0) / (y1 - y0)
    return float(ps[idx - 1] + frac * (ps[idx] - ps[idx - 1])), False


def estimate_p_t(curve: McCurve, t: float) -> float:
    """Smallest erasure rate where the monotonized h_hat reaches t.

    The raw estimates are isotonically regressed first, then linearly
    interpolated to the crossing.  A curve that never brackets t yields the
    nearer grid edge and a warning.
    """
    if not 0.0 < t < 1.0:
        raise ValueError("threshold level t must lie in (0, 1)")
    iso = isotonic_fit(curve.h_hat)
    value, at_edge = _first_crossing(curve.p_grid, iso, t)
    if at_edge:
        warnings.warn(f"no crossing of t={t} inside the grid; "
                      f"returning edge value {value}", stacklevel=2)
    return value


@dataclass
class ThresholdReport:
    """Measured transition location/width plus the analytic width bounds."""

    eps: float
    p_eps_hat: float
    p_1_minus_eps_hat: float
    width_hat: float
    width_bound_thm7: float
    width_bound_lemma13: float | None = None
    thm7_constant: float = WIDTH_BOUND_C
    p_eps_at_edge: bool = False
    p_1_minus_eps_at_edge: bool = False

    def to_json_dict(self) -> dict:
        return {
            "eps": self.eps,
            "p_eps_hat": self.p_eps_hat,
            "p_1_minus_eps_hat": self.p_1_minus_eps_hat,
            "width_hat": self.width_hat,
            "width_bound_thm7": self.width_bound_thm7,
            "width_bound_lemma13": self.width_bound_lemma13,
            "thm7_constant": self.thm7_constant,
            "p_eps_at_edge": self.p_eps_at_edge,
            "p_1_minus_eps_at_edge": self.p_1_minus_eps_at_edge,
        }


def threshold_report(curve: McCurve, eps: float, m_count: int | None = None,
                     lemma13_params: tuple[float, float, float] | None = None
                     ) -> ThresholdReport:
    """Estimate the eps-to-(1-eps) transition width and attach the bounds.

    m_count is the influence count M = N - 1; it defaults to the curve's
    code length minus one.  lemma13_params, when given, is (a, b, w).
    """
    if not 0.0 < eps <= 0.5:
        raise ValueError("eps must lie in (0, 1/2]")
    if m_count is None:
        if curve.n is None:
            raise ValueError("curve has no code length; pass m_count")
        m_count = curve.n - 1
    iso = isotonic_fit(curve.h_hat)
    p_lo, lo_edge = _first_crossing(curve.p_grid, iso, eps)
    p_hi, hi_edge = _first_crossing(curve.p_grid, iso, 1.0 - eps)
    bound13 = None
    if lemma13_params is not None:
        a, b, w = lemma13_params
        bound13 = width_bound_lemma13(a, b, w, eps, 1.0 - eps)
    return ThresholdReport(eps=eps, p_eps_hat=p_lo, p_1_minus_eps_hat=p_hi,
                           width_hat=p_hi - p_lo,
                           width_bound_thm7=width_bound_thm7(m_count, eps),
                           width_bound_lemma13=bound13,
                           p_eps_at_edge=lo_edge, p_1_minus_eps_at_edge=hi_edge)


def width_bound_thm7(m_count: int, eps: float) -> float:
    """Transition-width bound (2/C) log((1-eps)/eps) / log M under equal
    influences over M coordinates."""
    if m_count < 2:
        raise ValueError("need at least two coordinates")
    if not 0.0 < eps <= 0.5:
        raise ValueError("eps must lie in (0, 1/2]")
    return (2.0 / WIDTH_BOUND_C) * math.log((1.0 - eps) / eps) / math.log(m_count)


def width_bound_lemma13(a: float, b: float, w: float,
                        eps1: float, eps2: float) -> float:
    """Width bound a + (1-b) + (1/w)[log(eps2/(1-eps2)) + log((1-eps1)/eps1)]
    for a curve satisfying the logistic differential inequality on (a, b)."""
    if not 0.0 <= a < b <= 1.0:
        raise ValueError("need 0 <= a < b <= 1")
    if w <= 0.0:
        raise ValueError("w must be positive")
    if not 0.0 < eps1 <= eps2 <= 1.0:
        raise ValueError("need 0 < eps1 <= eps2 <= 1")
    if eps2 == 1.0:
        return math.inf
    return (a + (1.0 - b)
            + (math.log(eps2 / (1.0 - eps2)) + math.log((1.0 - eps1) / eps1)) / w)


def h_tail_bound(a: float, b: float, w: float, p_half: float, delta: float) -> float:
    """Exponential lower-tail bound exp(-w([p_half - delta] - [a + 1 - b]))."""
    if not 0.0 <= a < b <= 1.0:
        raise ValueError("need 0 <= a < b <= 1")
    if w <= 0.0:
        raise ValueError("w must be positive")
    if not 0.0 <= delta <= p_half:
        raise ValueError("need 0 <= delta <= p_half")
    return math.exp(-w * ((p_half - delta) - (a + 1.0 - b)))


def delta_m_bound(eps_m: float, r_m: float, n_m: int) -> float:
    """Rate-inflation term eps/(1-eps) + 2 log(1/eps) / (r log(N-1))."""
    if not 0.0 < eps_m < 1.0:
        raise ValueError("eps_m must lie in (0, 1)")
    if not 0.0 < r_m < 1.0:
        raise ValueError("r_m must lie in (0, 1)")
    if n_m < 3:
        raise ValueError("n_m must be at least 3")
    return (eps_m / (1.0 - eps_m)
            + 2.0 * math.log(1.0 / eps_m) / (r_m * math.log(n_m - 1)))
