import json

import pytest

from walklab import arith, theorems as th
from walklab.search import WalkPolicy


def test_cunningham_term():
    assert th.cunningham_term(2, 8) == 767
    assert th.cunningham_term(3, 1) == 7


@pytest.mark.parametrize("p", [2, 3, 5, 11])
def test_cunningham_gap(p):
    r = th.cunningham_gap(p, 2, 1000)
    assert r.ok
    params, ev = r.witnesses[0]
    a, b = th.cunningham_term(p, params["i"]), th.cunningham_term(p, params["i"] + 1)
    assert ev["terms"] == [a, b]
    for t, f in zip(ev["terms"], ev["factors"]):
        assert 1 < f < t and t % f == 0


def _oracle_census(N, fibs):
    """Longest Fibonacci walks from one-digit Fibonacci starts, by brute force."""
    fibset = set(fibs)
    top = max(fibs)

    def longest(x):
        best = 1
        for m in range(1, N + 1):
            for blk in range(10**m):
                y = x * 10**m + blk
                if y > top:
                    break
                if y in fibset:
                    best = max(best, 1 + longest(y))
        return best
    return {x: longest(x) for x in sorted({f for f in fibs if 1 <= f <= 9})}


def test_fibonacci_census_vs_oracle():
    fibs = arith.fib_list(120)
    got = th.fibonacci_walk_census(WalkPolicy(10, "append-right"))
    assert got.ok
    oracle = _oracle_census(1, fibs)
    length2 = [x for x, n in oracle.items() if n == 2]
    assert max(oracle.values()) == 2
    # 1 -> 13, 2 -> 21, 3 -> 34, 5 -> 55, 8 -> 89
    assert length2 == [1, 2, 3, 5, 8]
    assert [w[0] for w in got.witnesses] == length2
    assert [w[1]["walk"][1] for w in got.witnesses] == [13, 21, 34, 55, 89]


def test_pisano():
    r = th.pisano_and_power10(300, 20)
    assert r.ok
    a, b = 0, 1
    for k in range(1, 61):
        a, b = b, (a + b) % 10
    assert (a, b) == (0, 1)  # period 60 mod 10


@pytest.mark.parametrize("base", [2, 4, 5])
def test_small_bases(base):
    r = th.small_base_prime_walks(base, start_max=2000)
    assert r.ok and r.witnesses


@pytest.mark.parametrize("mode", ["OddBlock", "EvenBlock", "Mixed"])
def test_square_walks(mode):
    assert th.square_walk_check(mode, 2, 10**4).ok


def test_even_square_zero_walk():
    assert th.even_square_zero_walk().ok


def test_fibo_bound_floor():
    assert th.fibo_length_bound(1, 30) >= 1


def test_registry_round_trip():
    for cid in th.CLAIMS:
        r = th.run_claim(cid)
        assert r.status == th.VERIFIED, cid
        back = th.VerificationReport.from_dict(json.loads(json.dumps(r.to_dict())))
        assert back.to_dict() == r.to_dict()
    with pytest.raises(KeyError):
        th.run_claim("nonsense")
