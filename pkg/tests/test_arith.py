import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from walklab import arith
from walklab.arith import (InconclusiveError, PowerFree, Prime, append_block, digit_count, from_digits,
                           insert_digit, insert_moves, is_power_free, is_prime, parse_predicate, primality,
                           to_digits, truncate_right)

bases = st.integers(2, 36)


@given(st.integers(1, 10**40), bases, st.integers(0, 35))
def test_truncate_undoes_append(x, b, d):
    d %= b
    assert truncate_right(append_block(x, b, [d]), b) == x


@given(st.integers(1, 10**40), bases)
def test_digits_round_trip(x, b):
    ds = to_digits(x, b)
    assert ds[0] != 0
    assert from_digits(ds, b) == x
    assert digit_count(x, b) == len(ds)


@given(st.integers(1, 10**30), bases, st.lists(st.integers(0, 35), min_size=1, max_size=5))
def test_append_block_keeps_leading_zeros(x, b, blk):
    blk = [d % b for d in blk]
    y = append_block(x, b, blk)
    assert to_digits(y, b) == to_digits(x, b) + blk


@given(st.integers(1, 10**12), st.integers(0, 9))
def test_insert_digit_positions(x, d):
    k = digit_count(x)
    for pos in range(k + 1):
        y = insert_digit(x, 10, pos, d)
        ds = to_digits(x)
        assert to_digits(y) == ds[:pos] + [d] + ds[pos:] or (pos == 0 and d == 0)


def test_insert_moves_skip_leading_zero():
    vals = [v for _, _, v in insert_moves(7)]
    assert 7 not in vals  # a leading 0 would leave the value unchanged
    assert 17 in vals and 70 in vals and 71 in vals


def test_primality_agrees_with_sieve(prime_oracle):
    got = arith.prime_sieve(10**6)
    assert np.array_equal(got[: 10**6], prime_oracle)
    mask = arith.prime_mask(range(10**5))
    assert np.array_equal(mask, prime_oracle[: 10**5])


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6 - 1))
def test_scalar_prime_matches_oracle(prime_oracle, n):
    assert is_prime(n) == bool(prime_oracle[n])


def test_squarefree_agrees_with_sieve(squarefree_oracle):
    assert np.array_equal(arith.power_free_sieve(10**6, 2)[: 10**6], squarefree_oracle)
    x = np.arange(10**6, dtype=np.int64)
    assert np.array_equal(arith.power_free_mask(x, 2), squarefree_oracle)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 10**6 - 1))
def test_scalar_squarefree_matches_oracle(squarefree_oracle, n):
    assert is_power_free(n, 2) == bool(squarefree_oracle[n])


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10**15), st.integers(2, 5))
def test_power_free_matches_factorisation(x, n):
    expect = all(e < n for e in sympy.factorint(x).values())
    assert is_power_free(x, n) == expect


def test_large_composites_and_primes():
    m61 = 2**61 - 1
    assert is_prime(m61)
    assert primality(m61).kind == "Prime"
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7
    big = 2**127 - 1
    v = primality(big, 40)
    assert v and v.kind == "ProbablePrime" and v.error_bound <= 4.0**-40


def test_power_free_undecidable_cofactor():
    p = sympy.nextprime(10**12)
    q = sympy.nextprime(p)
    with pytest.raises(InconclusiveError):
        is_power_free(p * q, 2, trial_bound=1000)


def test_power_free_large_square_detected():
    p = sympy.nextprime(10**9)
    assert not is_power_free(p * p * 3, 2)
    assert is_power_free(p * 3, 2)


def test_fibonacci_helpers():
    assert arith.fib_list(10) == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34]
    assert arith.fib(100) == 354224848179261915075
    assert all(arith.is_fibonacci(arith.fib(k)) for k in range(300))
    assert not any(arith.is_fibonacci(x) for x in (4, 6, 7, 9, 10, 12))


def test_parse_predicate():
    assert parse_predicate("prime") == Prime()
    assert parse_predicate("squarefree") == PowerFree(2)
    assert parse_predicate("powerfree:4") == PowerFree(4)
    assert parse_predicate("square")(49)
    assert parse_predicate("fibonacci")(144)
    with pytest.raises(ValueError):
        parse_predicate("happy")
    with pytest.raises(ValueError):
        PowerFree(1)


def test_invalid_base():
    with pytest.raises(ValueError):
        to_digits(5, 1)
