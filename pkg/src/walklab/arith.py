"""Integer kernel: digit views, append/insert/truncate moves and membership predicates.

Scalars are plain Python ints (arbitrary precision); array helpers at the bottom
work on numpy int64 and are exact for values below 2**62.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

# Sorenson & Webster: the first 13 prime bases are deterministic below this bound.
MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
DETERMINISTIC_LIMIT = 3317044064679887385961981
DEFAULT_ROUNDS = 40
DEFAULT_TRIAL_BOUND = 10**7

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


class InconclusiveError(ArithmeticError):
    """Raised when an exact test cannot classify its input within the configured bounds."""


# ---------------------------------------------------------------- digits

def _check_base(base: int) -> None:
    if not 2 <= base <= 36:
        raise ValueError(f"base must be in [2, 36], got {base}")


def to_digits(x: int, base: int = 10) -> list[int]:
    """Base-b digits of x, most significant first. to_digits(0) == [0]."""
    _check_base(base)
    if x < 0:
        raise ValueError("negative input")
    if x == 0:
        return [0]
    out = []
    while x:
        x, d = divmod(x, base)
        out.append(d)
    return out[::-1]


def from_digits(digits: Sequence[int], base: int = 10) -> int:
    _check_base(base)
    v = 0
    for d in digits:
        if not 0 <= d < base:
            raise ValueError(f"digit {d} out of range for base {base}")
        v = v * base + d
    return v


def digit_count(x: int, base: int = 10) -> int:
    if x < base:
        return 1
    if base == 10:
        return len(str(x))
    n = 0
    while x:
        x //= base
        n += 1
    return n


def append_block(x: int, base: int, block: Sequence[int]) -> int:
    """x followed by the digits of block; leading zeros in block are kept."""
    _check_base(base)
    for d in block:
        if not 0 <= d < base:
            raise ValueError(f"digit {d} out of range for base {base}")
    return x * base ** len(block) + from_digits(block, base) if block else x


def truncate_right(x: int, base: int = 10) -> int:
    if x < base:
        raise ValueError("single-digit input has nothing to truncate")
    return x // base


def insert_digit(x: int, base: int, position: int, digit: int) -> int:
    """Insert digit so that it becomes digit number `position` (0 = most significant)."""
    ds = to_digits(x, base)
    if not 0 <= position <= len(ds):
        raise ValueError("position out of range")
    if not 0 <= digit < base:
        raise ValueError("digit out of range")
    return from_digits(ds[:position] + [digit] + ds[position:], base)


def insert_moves(x: int, base: int = 10) -> list[tuple[int, int, int]]:
    """All (position, digit, value) single-digit insertions, first occurrence of each value.

    Scan order is position-major, digit-minor, so a value reachable in several
    ways is attributed to its leftmost insertion. A zero in front is skipped.
    """
    if x < 1:
        raise ValueError("x must be positive")
    ds = to_digits(x, base)
    seen = set()
    out = []
    for pos in range(len(ds) + 1):
        for d in range(base):
            if pos == 0 and d == 0:
                continue
            v = from_digits(ds[:pos] + [d] + ds[pos:], base)
            if v not in seen:
                seen.add(v)
                out.append((pos, d, v))
    return out


def insert_digit_variants(x: int, base: int = 10) -> set[int]:
    return {v for _, _, v in insert_moves(x, base)}


# ---------------------------------------------------------------- roots and small helpers

def iroot(x: int, n: int) -> int:
    """floor(x ** (1/n)) for x >= 0, exact."""
    if x < 0:
        raise ValueError("negative input")
    if x < 2 or n == 1:
        return x
    if n == 2:
        return math.isqrt(x)
    r = int(round(x ** (1.0 / n))) if x < 1 << 1000 else 1 << (x.bit_length() // n + 1)
    # Newton from above
    r = max(r + 1, 1)
    while True:
        s = ((n - 1) * r + x // r ** (n - 1)) // n
        if s >= r:
            break
        r = s
    while r**n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r


def is_perfect_power(x: int, n: int) -> bool:
    return x >= 0 and iroot(x, n) ** n == x


def is_square(x: int) -> bool:
    return x >= 0 and math.isqrt(x) ** 2 == x


# ---------------------------------------------------------------- primality

@dataclass(frozen=True)
class PrimalityVerdict:
    kind: str  # "Composite" | "Prime" | "ProbablePrime"
    error_bound: float = 0.0

    def __bool__(self) -> bool:
        return self.kind != "Composite"


COMPOSITE = PrimalityVerdict("Composite")
PRIME = PrimalityVerdict("Prime")


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def primality(n: int, rounds: int = DEFAULT_ROUNDS) -> PrimalityVerdict:
    """Miller-Rabin. Deterministic below DETERMINISTIC_LIMIT, otherwise `rounds` bases."""
    if n < 2:
        return COMPOSITE
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return PRIME if n == p else COMPOSITE
    if n < 97 * 97:
        return PRIME
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < DETERMINISTIC_LIMIT:
        for a in MR_BASES:
            if not _strong_probable_prime(n, a, d, s):
                return COMPOSITE
        return PRIME
    # bases derived from n itself so repeated calls agree
    rng = random.Random(n)
    for i in range(rounds):
        a = MR_BASES[i] if i < len(MR_BASES) else rng.randrange(2, n - 1)
        if not _strong_probable_prime(n, a, d, s):
            return COMPOSITE
    return PrimalityVerdict("ProbablePrime", 4.0 ** (-rounds))


def is_prime(n: int, rounds: int = DEFAULT_ROUNDS) -> bool:
    return primality(n, rounds).kind != "Composite"


# ---------------------------------------------------------------- sieves

@lru_cache(maxsize=8)
def prime_sieve(limit: int) -> np.ndarray:
    """Boolean array s with s[i] True iff i is prime, for 0 <= i < limit."""
    s = np.ones(max(limit, 2), dtype=bool)
    s[:2] = False
    for p in range(2, math.isqrt(limit - 1) + 1 if limit > 1 else 0):
        if s[p]:
            s[p * p::p] = False
    s.flags.writeable = False
    return s[:limit]


@lru_cache(maxsize=8)
def primes_below(limit: int) -> np.ndarray:
    return np.flatnonzero(prime_sieve(limit)).astype(np.int64)


@lru_cache(maxsize=4)
def power_free_sieve(limit: int, n: int = 2) -> np.ndarray:
    """Boolean array: True iff i is n-th-power-free, for 0 <= i < limit (0 is not)."""
    s = np.ones(limit, dtype=bool)
    s[0] = False
    for p in primes_below(iroot(max(limit - 1, 1), n) + 1).tolist():
        q = p**n
        s[::q] = False
    s.flags.writeable = False
    return s


@lru_cache(maxsize=4)
def mobius_sieve(limit: int) -> np.ndarray:
    """mu(i) for 0 <= i < limit (mu(0) set to 0)."""
    mu = np.ones(limit, dtype=np.int8)
    mu[0] = 0
    for p in primes_below(limit).tolist():
        mu[::p] *= -1
        mu[:: p * p] = 0
    mu.flags.writeable = False
    return mu


# ---------------------------------------------------------------- power-free test

_BLOCK = 2048


@lru_cache(maxsize=1)
def _trial_primes(bound: int) -> list[int]:
    return primes_below(bound).tolist()


@lru_cache(maxsize=4)
def _prime_blocks(bound: int) -> list[tuple[list[int], int]]:
    ps = _trial_primes(bound)
    return [(ps[i:i + _BLOCK], math.prod(ps[i:i + _BLOCK])) for i in range(0, len(ps), _BLOCK)]


def is_power_free(x: int, n: int = 2, trial_bound: int = DEFAULT_TRIAL_BOUND) -> bool:
    """Exact test that no p**n divides x.

    Primes below trial_bound are removed via gcds against block products.  The
    remaining cofactor c has only large prime factors; when c < trial_bound**(n+1)
    it can only fail by being a perfect n-th power.  A prime cofactor is free.
    Anything else raises InconclusiveError.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if x < 0:
        x = -x
    if x == 0:
        return False
    c = x
    for p in _SMALL_PRIMES:
        if c % p == 0:
            e = 0
            while c % p == 0:
                c //= p
                e += 1
            if e >= n:
                return False
    checked = 98  # every prime below this has been removed
    if checked**n > c:
        return True
    for block, prod in _prime_blocks(trial_bound):
        if block[-1] < 98:
            continue
        g = math.gcd(c, prod)
        if g > 1:
            for p in block:
                if g % p == 0:
                    e = 0
                    while c % p == 0:
                        c //= p
                        e += 1
                    if e >= n:
                        return False
        checked = block[-1] + 1
        if checked**n > c:
            return True
    if c == 1 or checked**n > c:
        return True
    if c < checked ** (n + 1):
        return not is_perfect_power(c, n)
    if is_perfect_power(c, n):
        return False
    if primality(c).kind == "Prime":
        return True
    raise InconclusiveError(f"cofactor of {x} with no prime factor below {checked} is unclassified")


def is_fibonacci(x: int) -> bool:
    if x < 0:
        return False
    t = 5 * x * x
    return is_square(t + 4) or is_square(t - 4)


def fib(n: int) -> int:
    """F_n by fast doubling; F_0 = 0, F_1 = 1."""
    if n < 0:
        raise ValueError("n must be >= 0")

    def pair(k: int) -> tuple[int, int]:
        if k == 0:
            return 0, 1
        a, b = pair(k >> 1)
        c = a * (2 * b - a)
        d = a * a + b * b
        return (d, c + d) if k & 1 else (c, d)

    return pair(n)[0]


def fib_list(count: int) -> list[int]:
    out = [0, 1]
    while len(out) < count:
        out.append(out[-1] + out[-2])
    return out[:count]


# ---------------------------------------------------------------- predicates

@dataclass(frozen=True)
class Prime:
    rounds: int = DEFAULT_ROUNDS

    def __call__(self, x: int) -> bool:
        return is_prime(x, self.rounds)

    def verdict(self, x: int) -> PrimalityVerdict:
        return primality(x, self.rounds)

    @property
    def name(self) -> str:
        return "prime"


@dataclass(frozen=True)
class PowerFree:
    n: int = 2
    trial_bound: int = DEFAULT_TRIAL_BOUND

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("PowerFree needs n >= 2")

    def __call__(self, x: int) -> bool:
        return is_power_free(x, self.n, self.trial_bound)

    @property
    def name(self) -> str:
        return "squarefree" if self.n == 2 else f"powerfree:{self.n}"


@dataclass(frozen=True)
class PerfectSquare:
    def __call__(self, x: int) -> bool:
        return is_square(x)

    @property
    def name(self) -> str:
        return "square"


@dataclass(frozen=True)
class Fibonacci:
    def __call__(self, x: int) -> bool:
        return is_fibonacci(x)

    @property
    def name(self) -> str:
        return "fibonacci"


Predicate = Prime | PowerFree | PerfectSquare | Fibonacci


def parse_predicate(text: str, rounds: int = DEFAULT_ROUNDS) -> Predicate:
    text = text.strip().lower()
    if text == "prime":
        return Prime(rounds)
    if text == "squarefree":
        return PowerFree(2)
    if text.startswith("powerfree:"):
        return PowerFree(int(text.split(":", 1)[1]))
    if text == "square":
        return PerfectSquare()
    if text == "fibonacci":
        return Fibonacci()
    raise ValueError(f"unknown predicate {text!r}")


def test(x: int, pred: Predicate):
    """Boolean membership, or a PrimalityVerdict when pred is Prime."""
    if isinstance(pred, Prime):
        return pred.verdict(x)
    return pred(x)


# ---------------------------------------------------------------- vectorised masks

def _nth_power_mask(c: np.ndarray, n: int) -> np.ndarray:
    """True where c > 1 is a perfect n-th power (int64, c < 2**62)."""
    r = np.rint(np.power(c.astype(np.float64), 1.0 / n)).astype(np.int64)
    hit = np.zeros(c.shape, dtype=bool)
    for delta in (-1, 0, 1):
        rr = np.maximum(r + delta, 0)
        hit |= rr**n == c
    return hit & (c > 1)


def power_free_mask(values: np.ndarray, n: int = 2) -> np.ndarray:
    """Exact n-th-power-free mask for a 1-d int64 array with 0 <= v < 2**62.

    Divides out every prime p with p**(n+1) <= max; the leftover cofactor then
    fails only by being a perfect n-th power.
    """
    v = np.asarray(values, dtype=np.int64)
    if v.size == 0:
        return np.zeros(0, dtype=bool)
    top = int(v.max())
    if top >= 1 << 62:
        raise OverflowError("power_free_mask needs values below 2**62")
    if top < 1 << 24:
        return power_free_sieve(max(top + 1, 2), n)[v]
    bad = v == 0
    c = v.copy()
    c[bad] = 1
    plimit = iroot(top, n + 1) + 1
    for p in primes_below(plimit + 1).tolist():
        idx = np.flatnonzero(c % p == 0)
        if idx.size == 0:
            continue
        sub = c[idx]
        e = np.zeros(idx.size, dtype=np.int64)
        live = np.ones(idx.size, dtype=bool)
        while live.any():
            sub[live] //= p
            e[live] += 1
            live &= sub % p == 0
        c[idx] = sub
        bad[idx[e >= n]] = True
    bad |= _nth_power_mask(c, n)
    return ~bad


def power_free_mask_bounded(values: np.ndarray, n: int, bound: int) -> np.ndarray:
    """Mask of values with no p**n divisor for primes p < bound (int64 only).

    This is a sieve-bounded proxy for n-th-power-freeness used where exact
    testing of long random walks is infeasible.
    """
    v = np.asarray(values, dtype=np.int64)
    ok = v != 0
    for p in primes_below(bound).tolist():
        q = p**n
        if q >= 1 << 62:
            break
        ok &= v % q != 0
    return ok


def prime_mask(values: Iterable[int], rounds: int = DEFAULT_ROUNDS) -> np.ndarray:
    vals = list(values)
    return np.fromiter((is_prime(int(x), rounds) for x in vals), dtype=bool, count=len(vals))
