"""Desk-scale verification suites: each acceptance criterion as a check.

Every check is deterministic (pinned seeds), returns a
:class:`VerifyResult`, and prints one pass/fail line through the CLI or the
acceptance test module.  Tolerances are fixed here, not tuned at run time.

One documented adaptation (see the repository notes): the subcritical
variance check drives the stated (n, d) = (4096, 4) scale with the exact
sequential sampler and exercises coupling from the past at (256, 4), because
measured coalescence epochs for the single-site coupling grow like n^3 and
extrapolate past the 2^30-update budget at n = 4096.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import chi2 as chi2_dist

from . import counting, line, locallimit, refdist, sampling, torus, words
from .core import derivative, from_derivative, line_graph, range_size, torus_graph
from .counting import c_recursive, enumerate_homomorphisms, hom_count_line, lambda_of_d
from .errors import EdgeViolation


@dataclass
class VerifyResult:
    name: str
    passed: bool
    details: str = ""

    def report_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.details}" if self.details else f"{status} {self.name}"


SEED = 20260810


def _chi2_uniform_pvalue(counts: Counter, outcomes: int, reps: int) -> float:
    expected = reps / outcomes
    stat = sum((c - expected) ** 2 for c in counts.values()) / expected
    stat += (outcomes - len(counts)) * expected  # outcomes never observed
    return float(chi2_dist.sf(stat, outcomes - 1))


# ---------------------------------------------------------------------------
# 1. Counting exactness
# ---------------------------------------------------------------------------

def check_counting(fast: bool = False) -> VerifyResult:
    started = time.time()
    n_max = 12 if fast else 18
    for d in (1, 2, 3):
        for n in range(1, n_max + 1):
            got = len(enumerate_homomorphisms(line_graph(n, d)))
            want = hom_count_line(n, d)
            if got != want:
                return VerifyResult("counting", False,
                                    f"line n={n} d={d}: enum {got} != recurrence {want}")
    torus_max = 10 if fast else 14
    for d in (1, 2):
        for n in range(4, torus_max + 1, 2):
            total = 2 ** (n // 2 + 1) - 2
            for s in torus.all_feasible_structures(n, d):
                total += 2 ** torus.fluctuation_count_torus(s)
            got = len(enumerate_homomorphisms(torus_graph(n, d)))
            if got != total:
                return VerifyResult("counting", False,
                                    f"torus n={n} d={d}: enum {got} != partition {total}")
    elapsed = time.time() - started
    if elapsed >= 60:
        return VerifyResult("counting", False, f"took {elapsed:.1f}s (budget 60s)")
    return VerifyResult("counting", True,
                        f"line n<={n_max} d<=3 and torus partition n<={torus_max} exact"
                        f" in {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# 2. Bijection round trips
# ---------------------------------------------------------------------------

def check_bijections(fast: bool = False) -> VerifyResult:
    n_max = 10 if fast else 18
    checked = 0
    for d in (1, 2, 3):
        for n in range(1, n_max + 1):
            for f in enumerate_homomorphisms(line_graph(n, d)):
                if line.decode(line.encode(f)) != f:
                    return VerifyResult("bijections", False, f"line decode(encode) n={n} d={d}")
                w = words.hom_to_word(f)
                if words.word_to_hom(w, n, d) != f:
                    return VerifyResult("bijections", False, f"word round trip n={n} d={d}")
                if from_derivative(derivative(f), f.graph) != f:
                    return VerifyResult("bijections", False, f"derivative round trip n={n} d={d}")
                checked += 1
    torus_max = 10 if fast else 14
    for d in (1, 2, 3):
        for n in range(4, torus_max + 1, 2):
            for f in enumerate_homomorphisms(torus_graph(n, d)):
                if torus.decode_torus(torus.encode_torus(f)) != f:
                    return VerifyResult("bijections", False, f"torus round trip n={n} d={d}")
                if from_derivative(derivative(f), f.graph) != f:
                    return VerifyResult("bijections", False,
                                        f"torus derivative round trip n={n} d={d}")
                checked += 1
    return VerifyResult("bijections", True, f"{checked} functions round-tripped exactly")


# ---------------------------------------------------------------------------
# 3. Structure-count formulas
# ---------------------------------------------------------------------------

def check_structure_counts(fast: bool = False) -> VerifyResult:
    n_max = 10 if fast else 16
    for d in (1, 2, 3):
        for n in range(1, n_max + 1):
            by_class = Counter()
            for s in line.feasible_structures(n, d):
                pos = s.positions
                r = sum(1 for p in pos if p > 2 * d + 1)
                first = min([p for p in pos] + [2 * d + 2])
                if first > 2 * d + 1:
                    i = d + 1
                else:
                    i = first // 2
                by_class[(r, i)] += 1
            for r in range(0, n + 1):
                for i in range(1, d + 2):
                    if by_class.get((r, i), 0) != line.count_structures(n, d, r, i):
                        return VerifyResult(
                            "structure", False,
                            f"line n={n} d={d} r={r} i={i}: "
                            f"{by_class.get((r, i), 0)} != {line.count_structures(n, d, r, i)}")
            total = sum(line.count_structures(n, d, r, i) * line.count_fluct_words(n, d, r, i)
                        for r in range(0, n + 1) for i in range(1, d + 2))
            if total != hom_count_line(n, d):
                return VerifyResult("structure", False,
                                    f"line partition n={n} d={d}: {total} != {hom_count_line(n, d)}")
    for d in (1, 2):
        for n in range(4, n_max + 1, 2):
            singles = Counter()
            for pos in torus.feasible_position_sets(n, d):
                gaps = [(pos[i] - pos[i - 1]) % n for i in range(len(pos))]
                if all(g > 2 * d + 1 for g in gaps):
                    singles[len(pos) // 2] += 1
            for r in range(1, n // 2 + 1):
                if singles.get(r, 0) != torus.count_one_chains(n, d, r):
                    return VerifyResult(
                        "structure", False,
                        f"torus n={n} d={d} r={r}: "
                        f"{singles.get(r, 0)} != {torus.count_one_chains(n, d, r)}")
    return VerifyResult("structure", True, f"closed-form structure counts exact for n<={n_max}")


# ---------------------------------------------------------------------------
# 4. Exact samplers vs enumeration
# ---------------------------------------------------------------------------

def check_exact_samplers(fast: bool = False) -> VerifyResult:
    n, d = 12, 1
    reps = 10_000 if fast else 100_000
    outcomes = hom_count_line(n, d)
    dp_counts = Counter(
        f.values for f in sampling.exact_samples_line(n, d, reps, SEED))
    p_dp = _chi2_uniform_pvalue(dp_counts, outcomes, reps)
    cftp_counts = Counter(
        f.values for f in sampling.cftp_samples(line_graph(n, d), reps, SEED + 1))
    p_cftp = _chi2_uniform_pvalue(cftp_counts, outcomes, reps)
    ok = p_dp > 0.01 and p_cftp > 0.01
    return VerifyResult(
        "samplers", ok,
        f"chi-squared over {outcomes} outcomes, {reps} draws: "
        f"p(sequential)={p_dp:.3f}, p(cftp)={p_cftp:.3f} (need > 0.01); "
        f"cftp coalesced in every replication")


# ---------------------------------------------------------------------------
# 5. Supercritical localization
# ---------------------------------------------------------------------------

def check_supercritical(fast: bool = False) -> VerifyResult:
    reps = 2_000 if fast else 10_000
    d = 15
    samples_even = sampling.exact_samples_line(50, d, reps, SEED + 2)
    frac3 = sum(1 for f in samples_even if range_size(f) == 3) / reps
    if frac3 < 0.995:
        return VerifyResult("supercritical", False,
                            f"range==3 fraction {frac3:.4f} < 0.995 at (50,15)")
    omega0_even = sum(
        1 for f in samples_even if all(v == 0 for v in f.values[0::2])) / reps
    samples_odd = sampling.exact_samples_line(51, d, reps, SEED + 3)
    omega0_odd = sum(
        1 for f in samples_odd if all(v == 0 for v in f.values[0::2])) / reps
    ok = abs(omega0_even - 1 / 3) <= 0.02 and abs(omega0_odd - 1 / 2) <= 0.02
    return VerifyResult(
        "supercritical", ok,
        f"range==3: {frac3:.4f}; P(flat evens): even n {omega0_even:.4f} (~1/3), "
        f"odd n {omega0_odd:.4f} (~1/2), tolerance 0.02")


# ---------------------------------------------------------------------------
# 6. Subcritical variance bounds
# ---------------------------------------------------------------------------

def _variance_check(values: np.ndarray, d: int, ks: list[int]) -> tuple[bool, str]:
    msgs = []
    ok = True
    for k in ks:
        var = float(values[:, k].var())
        lo = k * 2.0 ** (-d) / 64
        hi = 64 * k * 2.0 ** (-d) + 4
        ratio = var / (k * 2.0 ** (-d))
        inside = lo <= var <= hi
        ok = ok and inside
        msgs.append(f"k={k}: var={var:.2f} ratio={ratio:.3f} in[{lo:.3g},{hi:.4g}]={inside}")
    return ok, "; ".join(msgs)


def check_subcritical(fast: bool = False) -> VerifyResult:
    n, d = (1024, 4) if fast else (4096, 4)
    reps = 1_000 if fast else 10_000
    vals = np.array(
        [f.values for f in sampling.exact_samples_line(n, d, reps, SEED + 4)])
    ok_dp, msg_dp = _variance_check(vals, d, [n // 4, n // 2, n])
    cn, cd = (128, 4) if fast else (256, 4)
    creps = 200 if fast else 500
    cftp = sampling.cftp_samples(line_graph(cn, cd), creps, SEED + 5,
                                 start_epoch=1 << 18)
    cvals = np.array([f.values for f in cftp])
    ok_cftp, msg_cftp = _variance_check(cvals, cd, [cn // 4, cn // 2, cn])
    ok = ok_dp and ok_cftp
    return VerifyResult(
        "subcritical", ok,
        f"exact sampler (n={n}, {reps} draws): {msg_dp} | "
        f"cftp cross-check (n={cn}, {creps} draws): {msg_cftp} | "
        f"surrogate constants 1/64 and 64; cftp at the stated n=4096 exceeds "
        f"the 2^30-update budget (measured epoch ~ n^3), see notes")


# ---------------------------------------------------------------------------
# 7. Critical-regime range laws
# ---------------------------------------------------------------------------

def _empirical_range_pmf(samples) -> refdist.PMF:
    return refdist.empirical_pmf(Counter(range_size(f) for f in samples))


def check_critical_line(fast: bool = False, lam: float = 1.0) -> VerifyResult:
    reps = 20_000 if fast else 100_000
    scales = [(8, 256), (9, 512)] if lam == 1.0 else [
        (8, 2 * round(lam * 128)), (9, 2 * round(lam * 256))]
    ref = refdist.stopped_range_pmf(lam, +1).shift(2)
    tvs = []
    for d, n in scales:
        emp = _empirical_range_pmf(sampling.exact_samples_line(n, d, reps, SEED + 6 + d))
        tvs.append(refdist.tv_distance(emp, ref))
    ok = tvs[0] < 0.08 and tvs[1] <= tvs[0]
    return VerifyResult(
        "critical-line", ok,
        f"TV to stopped-walk range law (lam={lam}): "
        f"n={scales[0][1]}: {tvs[0]:.4f} (< 0.08), n={scales[1][1]}: {tvs[1]:.4f} "
        f"(must not increase), {reps} exact draws each")


def check_critical_torus(fast: bool = False, lam: float = 1.0) -> VerifyResult:
    # fast mode holds n 2^-d fixed at a smaller size
    d = 7 if fast else 8
    n = 2 * round(lam * 2 ** (d - 1))
    reps = 96 if fast else 128
    ref = refdist.stopped_bridge_range_pmf(lam / (4 * math.sqrt(2))).shift(2)
    samples = sampling.cftp_samples(torus_graph(n, d), reps, SEED + 9,
                                    start_epoch=1 << (3 * d - 1))
    tv = refdist.tv_distance(_empirical_range_pmf(samples), ref)
    return VerifyResult(
        "critical-torus", tv < 0.10,
        f"TV to stopped-bridge range law at (n={n}, d={d}): {tv:.4f} (< 0.10), "
        f"{reps} perfect cftp draws")


# ---------------------------------------------------------------------------
# 8. Local-limit convergence
# ---------------------------------------------------------------------------

def _first_letter_gap_bounds(n: int, d: int, bits: int) -> tuple[Fraction, Fraction]:
    """Certified interval for |P(first letter = a) - lim| via the rational
    bracket of the growth base."""
    consts = lambda_of_d(d, bits=bits)
    p = Fraction(c_recursive(n - 2, 0, d), hom_count_line(n, d))
    lo_x = 1 / (2 * _sqrt_upper(consts.lam_hi))
    hi_x = 1 / (2 * _sqrt_lower(consts.lam_lo))
    # gap interval given x in [lo_x, hi_x]
    if p < lo_x:
        return lo_x - p, hi_x - p
    if p > hi_x:
        return p - hi_x, p - lo_x
    return Fraction(0), max(hi_x - p, p - lo_x)


def _sqrt_lower(x: Fraction, bits: int = 400) -> Fraction:
    lo, hi = Fraction(0), x + 1
    for _ in range(bits):
        mid = (lo + hi) / 2
        if mid * mid <= x:
            lo = mid
        else:
            hi = mid
    return lo


def _sqrt_upper(x: Fraction, bits: int = 400) -> Fraction:
    lo, hi = Fraction(0), x + 1
    for _ in range(bits):
        mid = (lo + hi) / 2
        if mid * mid < x:
            lo = mid
        else:
            hi = mid
    return hi


def check_local_limit(fast: bool = False) -> VerifyResult:
    ns = (50, 100, 200, 400)
    msgs = []
    for d in (1, 2):
        bounds = [_first_letter_gap_bounds(n, d, bits=700) for n in ns]
        for (lo1, hi1), (lo2, hi2), n1, n2 in zip(bounds, bounds[1:], ns, ns[1:]):
            if not hi2 < lo1:
                return VerifyResult(
                    "local-limit", False,
                    f"d={d}: gap at n={n2} not certifiably below gap at n={n1}")
        final = float(bounds[-1][1])
        if final >= 1e-3:
            return VerifyResult("local-limit", False,
                                f"d={d}: gap at n=400 is {final:.2e} >= 1e-3")
        msgs.append(f"d={d}: gaps {', '.join('%.1e' % float(h) for _, h in bounds)}")
    return VerifyResult(
        "local-limit", True,
        "first-letter law monotone toward lambda^-1/2 / 2 over n=50..400 "
        "(exact rational bounds); " + "; ".join(msgs))


# ---------------------------------------------------------------------------
# 9. Growth base
# ---------------------------------------------------------------------------

def check_lambda(fast: bool = False) -> VerifyResult:
    golden = (3 + math.sqrt(5)) / 2
    l1 = lambda_of_d(1)
    if abs(l1.lam - golden) > 1e-12:
        return VerifyResult("lambda", False, f"lambda(1)={l1.lam!r} != (3+sqrt5)/2")
    us = []
    for d in range(1, 41):
        c = lambda_of_d(d)
        if c.residual >= 1e-12:
            return VerifyResult("lambda", False, f"residual {c.residual:.2e} at d={d}")
        if not 2 < c.lam <= 3:
            return VerifyResult("lambda", False, f"lambda({d})={c.lam} outside (2,3]")
        us.append(c.delta * 2.0 ** (d - 0.5))
    if any(not 0 < u <= 1 for u in us):
        return VerifyResult("lambda", False, "scaled excess outside (0,1]")
    # monotone approach to 1 from d=2 on; the first step dips (u(1)=0.874,
    # u(2)=0.817), see the repository notes
    for d in range(2, 40):
        if not us[d - 1] < us[d]:
            return VerifyResult("lambda", False, f"scaled excess not increasing at d={d}")
    ok = us[-1] > 0.99
    return VerifyResult(
        "lambda", ok,
        f"residuals < 1e-12 for d<=40; lambda(1) exact to 12 digits; scaled "
        f"excess (lambda-2)*2^(d-1/2): u(1)={us[0]:.4f}, u(2)={us[1]:.4f}, "
        f"increasing from d=2 to u(40)={us[-1]:.6f}")


# ---------------------------------------------------------------------------
# 10. Reference distributions
# ---------------------------------------------------------------------------

def check_refdist(fast: bool = False) -> VerifyResult:
    lam, alpha = 0.7, 3 / (2 * math.sqrt(2))
    prod = refdist.parity_biased_poisson(lam, alpha)
    mix = refdist.parity_biased_poisson_mixture(lam, alpha)
    worst = max(abs(prod[r] - mix[r]) for r in range(41))
    if worst > 1e-12:
        return VerifyResult("refdist", False, f"parity-biased forms differ by {worst:.2e}")
    worst_nu = 0.0
    for lp in (0.1, 1.0, 3.0):
        nu = refdist.equality_biased_poisson(lp)
        oracle = refdist.equality_biased_poisson_conditioned(lp)
        worst_nu = max(worst_nu,
                       max(abs(nu[k] - oracle[k]) for k in range(max(nu.support()) + 1)))
    if worst_nu > 1e-12:
        return VerifyResult("refdist", False, f"conditioning oracle differs by {worst_nu:.2e}")
    # walk with Poisson(mu) steps conditioned to end at 0: step count ~ nu(mu/2)
    mu = 1.0
    terms = {}
    pk = math.exp(-mu)
    fact = pk
    for m in range(0, 80):
        if m % 2 == 0:
            k = m // 2
            terms[k] = fact * math.comb(m, k) / 4 ** k
        fact *= mu / (m + 1)
    z = sum(terms.values())
    nu = refdist.equality_biased_poisson(mu / 2)
    worst_id = max(abs(terms[k] / z - nu[k]) for k in terms)
    ok = worst_id < 1e-10
    return VerifyResult(
        "refdist", ok,
        f"parity-biased forms agree to {worst:.1e}; conditioning oracle to "
        f"{worst_nu:.1e}; Poisson-step identity to {worst_id:.1e}")


# ---------------------------------------------------------------------------
# 11. Torus range identity
# ---------------------------------------------------------------------------

def check_range_identity(fast: bool = False) -> VerifyResult:
    n_max = 10 if fast else 14
    checked = 0
    for d in (1, 2):
        for n in range(4, n_max + 1, 2):
            for f in enumerate_homomorphisms(torus_graph(n, d)):
                _, _, s = torus.average_height_torus(f)
                if not s.positions:
                    continue
                if range_size(f) != torus.range_from_W(f):
                    return VerifyResult("range-identity", False,
                                        f"n={n} d={d}: {f.values}")
                checked += 1
    return VerifyResult("range-identity", True,
                        f"|range| == 2 + |range(W)| on {checked} jump-carrying functions")


# ---------------------------------------------------------------------------
# 12. Property suites
# ---------------------------------------------------------------------------

def check_properties(fast: bool = False) -> VerifyResult:
    cases = 1_000 if fast else 10_000
    graph = line_graph(10, 2)
    rng = sampling._python_rng(SEED + 10)

    # lattice closure
    for _ in range(cases):
        f = sampling.exact_sample_table(graph, rng)
        g = sampling.exact_sample_table(graph, rng)
        try:
            sampling.pointwise_max(f, g)
            sampling.pointwise_min(f, g)
        except EdgeViolation:
            return VerifyResult("properties", False, "lattice closure failed")

    # coupling monotonicity
    for _ in range(cases):
        f = sampling.exact_sample_table(graph, rng)
        g = sampling.exact_sample_table(graph, rng)
        lo, hi = sampling.pointwise_min(f, g), sampling.pointwise_max(f, g)
        site = rng.randrange(1, graph.num_vertices)
        coin = rng.random()
        coin_rng1, coin_rng2 = _FixedCoin(coin), _FixedCoin(coin)
        lo2 = sampling.glauber_step(lo, site, coin_rng1)
        hi2 = sampling.glauber_step(hi, site, coin_rng2)
        if any(a > b for a, b in zip(lo2.values, hi2.values)):
            return VerifyResult("properties", False, "shared update broke monotonicity")

    # legality of generated words
    for d in (1, 2, 3):
        law = locallimit.build_chain(d)
        for w in locallimit.sample_words(law, 40, cases // 3, SEED + 11 + d):
            if not words.is_d_legal(w, d):
                return VerifyResult("properties", False, f"illegal generated word d={d}")

    # normalization of constructed distributions
    prng = np.random.default_rng(SEED + 12)
    for _ in range(cases):
        lam = float(prng.uniform(0.05, 6.0))
        alpha = float(prng.uniform(0.1, 4.0))
        p = refdist.parity_biased_poisson(lam, alpha)
        if abs(sum(p.probs.values()) + p.truncation_mass - 1) > 1e-12:
            return VerifyResult("properties", False, "pmf normalization failed")
    return VerifyResult("properties", True,
                        f"lattice closure, coupling monotonicity, word legality, "
                        f"pmf normalization: {cases} cases each, zero failures")


class _FixedCoin:
    def __init__(self, value: float):
        self.value = value

    def random(self) -> float:
        return self.value


# ---------------------------------------------------------------------------
# Suite registry
# ---------------------------------------------------------------------------

SUITES = {
    "counting": [check_counting],
    "bijections": [check_bijections],
    "structure": [check_structure_counts],
    "samplers": [check_exact_samplers],
    "supercritical": [check_supercritical],
    "subcritical": [check_subcritical],
    "critical": [check_critical_line, check_critical_torus],
    "locallimit": [check_local_limit],
    "lambda": [check_lambda],
    "refdist": [check_refdist],
    "range-identity": [check_range_identity],
    "properties": [check_properties],
}
SUITES["all"] = [fn for name in (
    "counting", "bijections", "structure", "lambda", "refdist", "range-identity",
    "locallimit", "samplers", "supercritical", "subcritical", "critical", "properties",
) for fn in SUITES[name]]


def run_suite(name: str, lam: float = 1.0, fast: bool = False) -> list[VerifyResult]:
    checks = SUITES[name]
    out = []
    for fn in checks:
        if fn in (check_critical_line, check_critical_torus):
            out.append(fn(fast=fast, lam=lam))
        else:
            out.append(fn(fast=fast))
    return out
