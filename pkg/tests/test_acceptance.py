"""Acceptance suite: one recorded pass/fail line per criterion.

Monte-Carlo cells run at 10^6 trials and the fourth-power-free counts go to
39 digits, so the whole file takes several minutes on one core.
"""
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from walklab import analytic as an
from walklab import arith
from walklab import reproduce as rp
from walklab import stochastic as st
from walklab import theorems as th
from walklab.arith import Prime
from walklab.search import WalkPolicy, enumerate_truncatable, insert_anywhere_walk, validate_walk

TRIALS = rp.DEFAULT_TRIALS


def _fails(*results):
    out = []
    for r in results:
        out += [f"{r.table_id} {f}" for f in r.failures()]
    return out


def _summary(ok, fails, extra=""):
    if ok:
        return extra or "all cells match"
    shown = "; ".join(fails[:6]) + (f"; ... {len(fails) - 6} more" if len(fails) > 6 else "")
    return (extra + "; " if extra else "") + shown


def test_01_truncatable_primes(acceptance_line):
    t0 = time.perf_counter()
    lc = enumerate_truncatable(10, Prime())
    dt = time.perf_counter() - t0
    members = [x for k in lc.members for x in lc.members[k]]
    got = (len(members), max(members), lc.depth)
    ok = got == (83, 73939133, 8) and dt < 1.0
    acceptance_line(1, "truncatable primes", ok, f"count {got[0]}, max {got[1]}, depth {got[2]}, {dt:.2f} s")
    assert ok


def test_02_walk_examples(acceptance_line):
    t0 = time.perf_counter()
    res = rp.walk_examples()
    dt = time.perf_counter() - t0
    ok = res.ok and dt < 5.0
    lengths = ", ".join(f"{c.row} {c.computed}" for c in res.cells if c.col == "length")
    acceptance_line(2, "walk examples", ok, _summary(ok, _fails(res), f"{lengths}; {dt:.1f} s"))
    assert ok


def test_03_range_search(acceptance_line):
    full = rp.prime_range_summary(2, 10**6)
    mod3 = rp.prime_range_summary(2, 10**6, 2)
    ok = (full.max_length == 11 and full.argmax == [409, 68041]
          and mod3.max_length == 10 and 809243 in mod3.argmax)
    acceptance_line(3, "exhaustive range search", ok,
                    f"max {full.max_length} from {full.argmax}; 2 mod 3 max {mod3.max_length} from {mod3.argmax}")
    assert ok


def test_04_level_counts(acceptance_line):
    res = rp.level_count_table()
    acceptance_line(4, "square-free level counts", res.ok,
                    _summary(res.ok, _fails(res), f"{len(res.cells)} counts checked"))
    assert res.ok


def test_05_exact_bounds(acceptance_line):
    res = rp.bounds_table()
    e2 = [c for c in res.cells if c.row == "squarefree base 2"]
    extra = "E_2 rationals " + ("exact" if all(c.ok for c in e2) else "differ")
    acceptance_line(5, "exact bounds", res.ok, _summary(res.ok, _fails(res), extra))
    assert res.ok


def test_06_analytic_grids(acceptance_line):
    t0 = time.perf_counter()
    tables = [rp.table_1(), rp.table_7(), rp.table_8()]
    cf = rp.closed_forms()
    anchors = [cf.cell("greedy-series-b10-r1", "value"), cf.cell("anywhere-b10-r1", "value")]
    dt = time.perf_counter() - t0
    fails = _fails(*tables) + [f"{c.row}: {c.computed:.6f} vs {c.reference}" for c in anchors if not c.ok]
    ok = not fails
    cells = sum(len(t.cells) for t in tables)
    acceptance_line(6, "analytic grids and anchors", ok,
                    _summary(ok, fails, f"{cells} grid cells, anchors {anchors[0].computed:.6f} / "
                                        f"{anchors[1].computed:.4f}, {dt:.1f} s"))
    assert ok


CLOSED_FORM_KEYS = ["iid-squarefree-mean", "iid-squarefree-variance", "P1", "P2", "one-minus-fixed-point",
                    "refined-squarefree-mean", "iid-fourthfree-mean", "iid-fourthfree-variance", "fermat-heuristic"]


def test_07_closed_forms(acceptance_line):
    cf = rp.closed_forms()
    cells = [cf.cell(k, "value") for k in CLOSED_FORM_KEYS]
    fails = [f"{c.row}: {c.computed:.6g} vs {c.reference} (tol {c.tolerance:.3g})" for c in cells if not c.ok]
    fails += [f"{k.name}: {k.detail}" for k in cf.checks if not k.ok]
    approx = cf.cell("fermat-heuristic-approx", "value")
    ok = not fails
    acceptance_line(7, "closed forms", ok,
                    _summary(ok, fails, f"{len(cells)} values; 2/ln 2 approximation {approx.computed:.4f}"))
    assert ok


def test_08_monte_carlo(acceptance_line):
    t0 = time.perf_counter()
    exact = [rp.reproduce(t, TRIALS) for t in ("T2", "T6", "T9", "T11")]
    freq = [rp.reproduce(t, TRIALS) for t in ("T3", "T4", "T5", "T10")]
    dt = time.perf_counter() - t0
    orderings = [k for r in freq for k in r.checks]
    order_ok = all(k.ok for k in orderings)
    fails = _fails(*exact) + [f"{r.table_id} {f}" for r in freq for f in r.failures()]
    ok = not fails
    acceptance_line(8, "Monte-Carlo tables", ok,
                    _summary(ok, fails, f"{TRIALS} trials/cell, {len(orderings)} ordering checks "
                                        f"{'pass' if order_ok else 'FAIL'}, {dt:.0f} s"))
    assert ok


def test_09_theorem_bench(acceptance_line):
    t0 = time.perf_counter()
    census = th.fibonacci_walk_census(WalkPolicy(10))
    reports = [census, th.pisano_and_power10(62, 20)]
    reports += [th.small_base_prime_walks(b, start_max=10**4) for b in (2, 4, 5)]
    reports += [th.square_walk_check(m, 2, 10**5) for m in ("OddBlock", "EvenBlock")]
    reports += [th.cunningham_gap(p, 2, 1000) for p in (2, 3, 5, 11)]
    dt = time.perf_counter() - t0
    five = len(census.witnesses) == 5 and all(len(w[1]["walk"]) == 2 for w in census.witnesses)
    bad = [f"{r.claim_id}: {r.status}" for r in reports if not r.ok]
    ok = not bad and five and dt < 60
    acceptance_line(9, "theorem bench", ok,
                    _summary(ok, bad, f"{len(reports)} checks Verified, {len(census.witnesses)} one-digit "
                                      f"Fibonacci walks of length 2, {dt:.1f} s"))
    assert ok


def test_10_properties(acceptance_line, prime_oracle, squarefree_oracle):
    rng = np.random.default_rng(2024)
    notes, ok = [], True

    xs = [int(v) for v in rng.integers(1, 10**15, 2000)]
    inverse = all(arith.truncate_right(arith.append_block(x, b, [d % b]), b) == x
                  for x, b, d in zip(xs, rng.integers(2, 37, 2000).tolist(), rng.integers(0, 36, 2000).tolist()))
    ok &= inverse
    notes.append(f"truncate/append inverse {'ok' if inverse else 'BROKEN'}")

    # both the fast sieves and the scalar tests against independent sieves
    sample = rng.integers(0, 10**6, 20000)
    prime_ok = (np.array_equal(arith.prime_sieve(10**6)[: 10**6], prime_oracle)
                and all(arith.is_prime(int(n)) == bool(prime_oracle[n]) for n in sample))
    sf_ok = (np.array_equal(arith.power_free_mask(np.arange(10**6, dtype=np.int64), 2), squarefree_oracle)
             and all(arith.is_power_free(int(n), 2) == bool(squarefree_oracle[n]) for n in sample if n))
    ok &= prime_ok and sf_ok
    notes.append(f"sieve oracle primality {'ok' if prime_ok else 'BROKEN'}, square-free {'ok' if sf_ok else 'BROKEN'}")

    p = 0.45
    model = st.ModelSpec("geom", 10, tuple(range(10)), st.ConstantP(p), "blind", count_start=False)
    res = st.simulate(model, 1, 200_000, 9)
    kmax = 14
    obs = [res.length_histogram.get(k, 0) for k in range(kmax)]
    obs.append(res.trials - sum(obs))
    expct = [res.trials * p**k * (1 - p) for k in range(kmax)] + [res.trials * p**kmax]
    pval = stats.chisquare(obs, expct).pvalue
    ok &= pval > 1e-3
    notes.append(f"geometric chi-square p={pval:.3f}")

    m = st.MODELS["refined-greedy"]()
    a = json.dumps(st.simulate(m, 3, 70_000, 5, parallelism=1).to_dict(), sort_keys=True)
    b = json.dumps(st.simulate(m, 3, 70_000, 5, parallelism=2).to_dict(), sort_keys=True)
    ok &= a == b
    notes.append(f"parallelism 1 vs 2 {'byte-identical' if a == b else 'DIFFER'}")

    t0 = time.perf_counter()
    w = insert_anywhere_walk(7, rounds=40, max_steps=60)
    dt = time.perf_counter() - t0
    walk_ok = (w.length >= 60 and dt < 600
               and not validate_walk(w, Prime(40), WalkPolicy(10, "insert-anywhere")))
    ok &= walk_ok
    notes.append(f"insert-anywhere walk from 7 length {w.length} in {dt:.1f} s")
    acceptance_line(10, "property suites", bool(ok), "; ".join(notes))
    assert ok
