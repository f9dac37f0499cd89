import json

import pytest
from hypothesis import given, settings, strategies as st

from walklab.arith import PowerFree, Prime
from walklab.levelcount import LevelCounter
from walklab.search import (LevelCounts, Walk, WalkPolicy, WalkSearcher, best_walks_over_range,
                            enumerate_truncatable, extend_right_unbounded, insert_anywhere_walk,
                            longest_walk, parse_policy, validate_walk, walk_from_values)

A10 = WalkPolicy(10)


def brute_longest(x, pred, digits, depth=30):
    kids = [x * 10 + d for d in digits if pred(x * 10 + d)]
    if not kids or depth == 0:
        return 1
    return 1 + max(brute_longest(k, pred, digits, depth - 1) for k in kids)


def test_walk_from_3():
    w = longest_walk(3, Prime(), A10)
    assert w.length == 8 and w.final == 37337999
    assert validate_walk(w, Prime(), A10) == []


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5, 7, 11, 13, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73]))
def test_longest_matches_brute_force(p):
    assert longest_walk(p, Prime(), A10).length == brute_longest(p, Prime(), range(10))


def test_ties_break_lexicographically():
    s = WalkSearcher(Prime(), A10)
    w = s.longest(2)
    for mv, v in zip(w.moves, w.values[1:]):
        assert v % 10 == mv[1][0]
    assert w.length == brute_longest(2, Prime(), range(10))


def test_depth_cap_flag():
    w = WalkSearcher(Prime(), A10, depth_cap=3).longest(3)
    assert w.length == 4 and w.cap_reached


def test_walk_json_round_trip():
    w = insert_anywhere_walk(7, 40, 12)
    back = Walk.from_dict(json.loads(json.dumps(w.to_dict())))
    assert back == w


def test_validate_catches_tampering():
    w = longest_walk(19, Prime(), A10)
    w.values[3] += 2
    assert validate_walk(w, Prime(), A10)


def test_walk_from_values_rejects_unreachable():
    with pytest.raises(ValueError):
        walk_from_values([3, 37, 3737], A10)


def test_policy_parsing():
    assert parse_policy("append-right:1379").digits == (1, 3, 7, 9)
    assert parse_policy("append-exact:2").n == 2
    assert parse_policy("append-atmost:3").mode == "append-atmost"
    assert parse_policy("insert-anywhere").mode == "insert-anywhere"
    with pytest.raises(ValueError):
        parse_policy("append-left")
    with pytest.raises(ValueError):
        WalkPolicy(10, "append-right", (10,))


def test_block_moves_include_leading_zeros():
    p = WalkPolicy(2, "append-atmost", None, 2)
    vals = [v for _, v in p.moves(3)]
    assert sorted(vals) == [6, 7, 12, 13, 14, 15]


def test_range_summary_small():
    s = best_walks_over_range(2, 100, Prime(), A10)
    assert s.max_length == 9 and s.argmax == [19]
    assert sum(s.starts_by_digits.values()) == 25
    allm = best_walks_over_range(2, 100, Prime(), A10, frequency_mode="all")
    assert allm.max_length == s.max_length
    assert abs(sum(allm.digit_frequency.values()) - 1) < 1e-12


def test_truncatable_primes():
    lc = enumerate_truncatable(10, Prime())
    assert sum(lc.totals()) == 83 and lc.depth == 8
    assert max(lc.members[8]) == 73939133
    assert LevelCounts.from_dict(json.loads(json.dumps(lc.to_dict()))).per_length == lc.per_length


def test_truncatable_primes_parallel_agrees():
    assert enumerate_truncatable(10, Prime(), parallelism=2).per_length == \
        enumerate_truncatable(10, Prime()).per_length


def brute_levels(base, n, k_max):
    pf = PowerFree(n)
    level = [x for x in range(1, base) if pf(x)]
    out = [len(level)]
    for _ in range(k_max - 1):
        level = [y for x in level for y in range(x * base, x * base + base) if pf(y)]
        out.append(len(level))
    return out


@pytest.mark.parametrize("base,n,k", [(2, 2, 22), (10, 2, 6), (3, 2, 13), (2, 3, 18), (10, 4, 5)])
def test_level_counter_vs_explicit(base, n, k):
    # force the recursive counter by keeping the explicit part tiny
    lc = LevelCounter(base, n, explicit_limit=200)
    assert lc.explicit_depth < k
    assert [lc.level(j)[0] for j in range(1, k + 1)] == brute_levels(base, n, k)


def test_level_counter_parity():
    lc = LevelCounter(10, 2, explicit_limit=500)
    full = LevelCounter(10, 2, explicit_limit=10**6)
    for k in range(1, 6):
        assert lc.level(k) == full.level(k)


def test_membership_matches_levels():
    lc = LevelCounter(10, 2, explicit_limit=300)
    full = set(LevelCounter(10, 2, explicit_limit=10**6).members(5).tolist())
    for x in range(10000, 10400):
        assert lc.is_member(x) == (x in full)


def test_extend_right_unbounded():
    e = extend_right_unbounded(23)
    assert e.found and e.q // 10**e.n == 23
    assert Prime()(e.q)


def test_insert_anywhere_first_found_deterministic():
    a = insert_anywhere_walk(7, 40, 17)
    b = insert_anywhere_walk(7, 40, 17)
    assert a.values == b.values
    assert validate_walk(a, Prime(40), WalkPolicy(10, "insert-anywhere")) == []
    r = insert_anywhere_walk(7, 40, 15, strategy="random", seed=3)
    assert r.values == insert_anywhere_walk(7, 40, 15, strategy="random", seed=3).values
