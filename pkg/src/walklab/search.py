"""Exhaustive searches over actual sequences.

Longest walks under a move policy, range summaries (Tables of mean longest length
and appended-digit frequencies), breadth-first enumeration of right-truncatable
sets with exact per-length counts, next-prime extension and insert-anywhere walks.
"""
from __future__ import annotations

import math
import random
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from . import arith
from .arith import PowerFree, Predicate, Prime, PrimalityVerdict, digit_count, from_digits, to_digits
from .levelcount import LevelCounter

Move = tuple[int, tuple[int, ...]]  # (position, block)


# ---------------------------------------------------------------- policies

@dataclass(frozen=True)
class WalkPolicy:
    """How digits may be added to a walk element.

    mode is one of "append-right" (one digit from `digits`), "append-exact"
    (a block of exactly n digits, leading zeros allowed), "append-atmost"
    (1..n digits) and "insert-anywhere" (one digit at any position).
    """

    base: int = 10
    mode: str = "append-right"
    digits: Optional[tuple[int, ...]] = None
    n: int = 1

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be >= 2")
        if self.mode not in ("append-right", "append-exact", "append-atmost", "insert-anywhere"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.digits is not None:
            ds = tuple(sorted(set(self.digits)))
            if not ds or ds[0] < 0 or ds[-1] >= self.base:
                raise ValueError("digit set must be a nonempty subset of [0, base)")
            object.__setattr__(self, "digits", ds)
        if self.n < 1:
            raise ValueError("block length must be >= 1")

    def digit_set(self) -> tuple[int, ...]:
        return self.digits if self.digits is not None else tuple(range(self.base))

    def moves(self, x: int) -> Iterable[tuple[Move, int]]:
        """Legal (move, value) pairs from x, in lexicographic move order."""
        b = self.base
        if self.mode == "insert-anywhere":
            for pos, d, v in arith.insert_moves(x, b):
                yield (pos, (d,)), v
            return
        k = digit_count(x, b)
        if self.mode == "append-right":
            for d in self.digit_set():
                yield (k, (d,)), x * b + d
            return
        lengths = [self.n] if self.mode == "append-exact" else range(1, self.n + 1)
        blocks = []
        for m in lengths:
            for v in range(b**m):
                blocks.append(tuple(to_digits(v, b)) if m == 1 else _padded(v, b, m))
        for blk in sorted(blocks):
            yield (k, blk), x * b ** len(blk) + from_digits(blk, b)

    def describe(self) -> str:
        if self.mode == "append-right":
            if self.digits is None:
                return "append-right"
            return "append-right:" + "".join(str(d) for d in self.digits)
        if self.mode == "insert-anywhere":
            return "insert-anywhere"
        return f"{self.mode}:{self.n}"


def _padded(v: int, b: int, m: int) -> tuple[int, ...]:
    ds = to_digits(v, b)
    return tuple([0] * (m - len(ds)) + ds)


def parse_policy(text: str, base: int = 10) -> WalkPolicy:
    text = text.strip().lower()
    head, _, arg = text.partition(":")
    if head == "append-right":
        return WalkPolicy(base, head, tuple(int(c, 36) for c in arg) if arg else None)
    if head in ("append-exact", "append-atmost"):
        return WalkPolicy(base, head, None, int(arg or 1))
    if head == "insert-anywhere":
        return WalkPolicy(base, head)
    raise ValueError(f"unknown policy {text!r}")


# ---------------------------------------------------------------- walks

@dataclass
class Walk:
    start: int
    moves: list[Move] = field(default_factory=list)
    values: list[int] = field(default_factory=list)
    cap_reached: bool = False
    verdicts: Optional[list[PrimalityVerdict]] = None

    @property
    def length(self) -> int:
        return len(self.values)

    @property
    def final(self) -> int:
        return self.values[-1]

    def appended_digits(self) -> list[int]:
        return [d for _, blk in self.moves for d in blk]

    def to_dict(self) -> dict:
        out = {
            "start": self.start,
            "moves": [[p, list(b)] for p, b in self.moves],
            "values": [str(v) for v in self.values],
            "length": self.length,
            "cap_reached": self.cap_reached,
        }
        if self.verdicts is not None:
            out["verdicts"] = [{"kind": v.kind, "error_bound": v.error_bound} for v in self.verdicts]
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Walk":
        verdicts = None
        if "verdicts" in d:
            verdicts = [PrimalityVerdict(v["kind"], v["error_bound"]) for v in d["verdicts"]]
        return cls(int(d["start"]), [(p, tuple(b)) for p, b in d["moves"]],
                   [int(v) for v in d["values"]], d["cap_reached"], verdicts)


def walk_from_values(values: list[int], policy: WalkPolicy) -> Walk:
    """Recover the moves of a walk given as values; raises if a step is not a legal move."""
    moves = []
    for a, b in zip(values, values[1:]):
        for mv, v in policy.moves(a):
            if v == b:
                moves.append(mv)
                break
        else:
            raise ValueError(f"{b} is not reachable from {a} under {policy.describe()}")
    return Walk(values[0], moves, list(values))


def validate_walk(walk: Walk, pred: Predicate, policy: WalkPolicy) -> list[str]:
    """Independent re-check of a walk; returns a list of problems (empty when sound)."""
    problems = []
    if not walk.values or walk.values[0] != walk.start:
        problems.append("values do not begin with start")
    for i, v in enumerate(walk.values):
        if not pred(v):
            problems.append(f"element {i} = {v} fails {pred.name}")
    b = policy.base
    for i, (mv, (a, nxt)) in enumerate(zip(walk.moves, zip(walk.values, walk.values[1:]))):
        pos, blk = mv
        if policy.mode == "insert-anywhere":
            got = arith.insert_digit(a, b, pos, blk[0])
        else:
            got = arith.append_block(a, b, list(blk))
        if got != nxt:
            problems.append(f"move {i} gives {got}, walk has {nxt}")
        if policy.mode == "append-right" and blk[0] not in policy.digit_set():
            problems.append(f"move {i} uses digit {blk[0]} outside the digit set")
    if len(walk.moves) != len(walk.values) - 1:
        problems.append("move count does not match value count")
    return problems


class _Cached:
    """Memoised predicate with a sieve shortcut for small primes."""

    def __init__(self, pred: Predicate, sieve_limit: int = 0):
        self.pred = pred
        self.cache: dict[int, bool] = {}
        self.sieve = None
        if isinstance(pred, Prime) and sieve_limit:
            self.sieve = arith.prime_sieve(sieve_limit)
        elif isinstance(pred, PowerFree) and sieve_limit:
            self.sieve = arith.power_free_sieve(sieve_limit, pred.n)

    def __call__(self, x: int) -> bool:
        if self.sieve is not None and x < self.sieve.size:
            return bool(self.sieve[x])
        hit = self.cache.get(x)
        if hit is None:
            hit = self.pred(x)
            self.cache[x] = hit
        return hit


class WalkSearcher:
    """Depth-first longest-walk search with results memoised by value.

    The memo is shared across starts, so a range search visits each reachable
    value once.  Ties are broken by the lexicographically smallest move list.
    """

    def __init__(self, pred: Predicate, policy: WalkPolicy, depth_cap: int = 64, sieve_limit: int = 0):
        if depth_cap < 1:
            raise ValueError("depth_cap must be >= 1")
        self.pred = pred
        self.policy = policy
        self.depth_cap = depth_cap
        self.member = _Cached(pred, sieve_limit)
        # value -> (steps, first move, next value, capped, budget used)
        self.memo: dict[int, tuple[int, Optional[Move], Optional[int], bool, int]] = {}

    def _best(self, x: int, budget: int) -> tuple[int, Optional[Move], Optional[int], bool]:
        got = self.memo.get(x)
        if got is not None:
            steps, mv, nxt, capped, used = got
            if (not capped and steps <= budget) or (capped and used == budget):
                return steps, mv, nxt, capped
        if budget == 0:
            kids = any(self.member(v) for _, v in self.policy.moves(x))
            return 0, None, None, kids
        best = (0, None, None, False)
        for mv, v in self.policy.moves(x):
            if not self.member(v):
                continue
            steps, _, _, capped = self._best(v, budget - 1)
            if steps + 1 > best[0]:
                best = (steps + 1, mv, v, capped)
                if steps + 1 == budget:
                    break  # cannot do better
        self.memo[x] = (*best, budget)
        return best

    def longest(self, start: int) -> Walk:
        if not self.member(start):
            raise ValueError(f"start {start} does not satisfy {self.pred.name}")
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 4 * self.depth_cap + 1000))
        try:
            steps, _, _, capped = self._best(start, self.depth_cap)
        finally:
            sys.setrecursionlimit(old)
        walk = Walk(start, [], [start], capped)
        x, budget = start, self.depth_cap
        while True:
            got = self._best(x, budget)
            if got[1] is None:
                break
            walk.moves.append(got[1])
            walk.values.append(got[2])
            x, budget = got[2], budget - 1
        assert walk.length == steps + 1
        return walk

    def length(self, start: int) -> int:
        return self._best(start, self.depth_cap)[0] + 1


def longest_walk(start: int, pred: Predicate, policy: WalkPolicy, depth_cap: int = 64) -> Walk:
    """Maximum-length walk from start found by full DFS (see WalkSearcher)."""
    return WalkSearcher(pred, policy, depth_cap).longest(start)


# ---------------------------------------------------------------- range summaries

@dataclass
class RangeSummary:
    max_length: int
    argmax: list[int]
    mean_by_digits: dict[int, float]
    starts_by_digits: dict[int, int]
    digit_counts: dict[int, int]
    frequency_mode: str

    @property
    def digit_frequency(self) -> dict[int, float]:
        tot = sum(self.digit_counts.values())
        return {d: (c / tot if tot else 0.0) for d, c in sorted(self.digit_counts.items())}

    def to_dict(self) -> dict:
        return {
            "max_length": self.max_length,
            "argmax": self.argmax,
            "mean_by_digits": {str(k): v for k, v in sorted(self.mean_by_digits.items())},
            "starts_by_digits": {str(k): v for k, v in sorted(self.starts_by_digits.items())},
            "digit_counts": {str(k): v for k, v in sorted(self.digit_counts.items())},
            "digit_frequency": {str(k): v for k, v in self.digit_frequency.items()},
            "frequency_mode": self.frequency_mode,
        }


def _maximal_digit_counts(searcher: WalkSearcher, x: int, budget: int, memo: dict) -> tuple[int, Counter]:
    """(number of maximal walks from x, digit totals summed over them)."""
    key = x
    if key in memo:
        return memo[key]
    steps = searcher._best(x, budget)[0]
    if steps == 0:
        memo[key] = (1, Counter())
        return memo[key]
    n_walks, digits = 0, Counter()
    for mv, v in searcher.policy.moves(x):
        if not searcher.member(v):
            continue
        if searcher._best(v, budget - 1)[0] + 1 != steps:
            continue
        c, dc = _maximal_digit_counts(searcher, v, budget - 1, memo)
        n_walks += c
        digits.update(dc)
        for d in mv[1]:
            digits[d] += c
    memo[key] = (n_walks, digits)
    return memo[key]


def best_walks_over_range(start_lo: int, start_hi: int, pred: Predicate, policy: WalkPolicy,
                          depth_cap: int = 64, start_filter: Optional[Callable[[int], bool]] = None,
                          frequency_mode: str = "reported", searcher: Optional[WalkSearcher] = None
                          ) -> RangeSummary:
    """Longest walk from every qualifying start in [start_lo, start_hi), aggregated.

    frequency_mode "reported" counts the digits of the single reported walk per
    start; "all" weights every maximal walk from each start equally.
    """
    if start_lo >= start_hi:
        raise ValueError("empty range")
    if frequency_mode not in ("reported", "all"):
        raise ValueError("frequency_mode must be 'reported' or 'all'")
    s = searcher or WalkSearcher(pred, policy, depth_cap, sieve_limit=min(max(start_hi, 10**6) * policy.base, 10**8))
    b = policy.base
    best_len, argmax = 0, []
    sums: Counter = Counter()
    counts: Counter = Counter()
    digits: Counter = Counter()
    all_memo: dict = {}
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * depth_cap + 1000))
    try:
        for x in _qualifying(start_lo, start_hi, s):
            if start_filter is not None and not start_filter(x):
                continue
            if frequency_mode == "reported":
                w = s.longest(x)
                n = w.length
                digits.update(w.appended_digits())
            else:
                n = s.length(x)
                nw, dc = _maximal_digit_counts(s, x, s.depth_cap, all_memo)
                for d, c in dc.items():
                    digits[d] += c / nw
            r = digit_count(x, b)
            sums[r] += n
            counts[r] += 1
            if n > best_len:
                best_len, argmax = n, [x]
            elif n == best_len:
                argmax.append(x)
    finally:
        sys.setrecursionlimit(old)
    return RangeSummary(best_len, argmax, {r: sums[r] / counts[r] for r in sorted(counts)},
                        dict(sorted(counts.items())), dict(sorted(digits.items())), frequency_mode)


def _qualifying(lo: int, hi: int, s: WalkSearcher) -> Iterable[int]:
    sieve = s.member.sieve
    if sieve is not None and hi <= sieve.size:
        yield from (int(x) for x in np.flatnonzero(sieve[lo:hi]) + lo)
    else:
        yield from (x for x in range(lo, hi) if s.member(x))


# ---------------------------------------------------------------- truncatable enumeration

@dataclass
class LevelCounts:
    base: int
    per_length: list[tuple[int, int, int, int]]  # (k, total, odd, even)
    members: dict[int, list[int]] = field(default_factory=dict)

    def totals(self) -> list[int]:
        return [t for _, t, _, _ in self.per_length]

    def level(self, k: int) -> tuple[int, int, int]:
        for kk, t, o, e in self.per_length:
            if kk == k:
                return t, o, e
        raise KeyError(k)

    @property
    def depth(self) -> int:
        return max((k for k, t, _, _ in self.per_length if t), default=0)

    def to_dict(self) -> dict:
        return {"base": self.base,
                "per_length": [{"k": k, "total": t, "odd": o, "even": e} for k, t, o, e in self.per_length]}

    @classmethod
    def from_dict(cls, d: dict) -> "LevelCounts":
        return cls(d["base"], [(r["k"], r["total"], r["odd"], r["even"]) for r in d["per_length"]])


def _extend_level(args) -> list[int]:
    chunk, base, pred = args
    return [y for x in chunk for y in range(x * base, x * base + base) if pred(y)]


def enumerate_truncatable(base: int, pred: Predicate, k_max: Optional[int] = None,
                          retain_members: int = 3_000_000, parallelism: int = 1,
                          counter: Optional[LevelCounter] = None,
                          explicit_limit: Optional[int] = None) -> LevelCounts:
    """Right-truncatable members of pred by length, built breadth-first.

    Member lists up to `retain_members` per level are kept.  For power-free
    predicates levels are held as arrays while they fit in `explicit_limit`
    (default: retain_members) and counted exactly without listing past that.
    """
    if k_max is not None and k_max < 1:
        raise ValueError("k_max must be >= 1")
    rows, members = [], {}
    if isinstance(pred, PowerFree):
        lc = counter or LevelCounter(base, pred.n, explicit_limit=explicit_limit or retain_members,
                                     max_level=k_max if k_max is not None else 64)
        k_top = k_max if k_max is not None else lc.explicit_depth
        for k in range(1, k_top + 1):
            t, o, e = lc.level(k)
            rows.append((k, t, o, e))
            if k <= lc.explicit_depth and t <= retain_members:
                members[k] = lc.members(k).tolist()
        return LevelCounts(base, rows, members)
    level = [x for x in range(1, base) if pred(x)]
    k = 1
    while level and (k_max is None or k <= k_max):
        odd = sum(x & 1 for x in level)
        rows.append((k, len(level), odd, len(level) - odd))
        if len(level) <= retain_members:
            members[k] = list(level)
        if k_max is not None and k == k_max:
            break
        if parallelism > 1 and len(level) > 1000:
            step = -(-len(level) // parallelism)
            chunks = [(level[i:i + step], base, pred) for i in range(0, len(level), step)]
            with ProcessPoolExecutor(parallelism) as ex:
                level = [y for part in ex.map(_extend_level, chunks) for y in part]
        else:
            level = _extend_level((level, base, pred))
        k += 1
    return LevelCounts(base, rows, members)


# ---------------------------------------------------------------- constructive extension

@dataclass
class Extension:
    found: bool
    n: int
    k: int
    q: int


def extend_right_unbounded(p: int, n_max: int = 50, base: int = 10) -> Extension:
    """Smallest n with a prime in [p*b^n, (p+1)*b^n); returns the least such prime."""
    if not arith.is_prime(p):
        raise ValueError(f"{p} is not prime")
    for n in range(1, n_max + 1):
        lo, hi = p * base**n, (p + 1) * base**n
        q = lo
        while q < hi:
            if arith.is_prime(q):
                return Extension(True, n, q - lo, q)
            q += 1
    return Extension(False, n_max, -1, -1)


# ---------------------------------------------------------------- insert-anywhere walks

def insert_anywhere_walk(start: int, rounds: int = 40, max_steps: int = 60, strategy: str = "first-found",
                         seed: int = 0, base: int = 10) -> Walk:
    """Extend by one-digit insertions, each accepted value passing Miller-Rabin.

    "first-found" takes the first passing insertion in (position, digit) order;
    "random" picks uniformly among passing insertions with a seeded generator.
    max_steps counts walk elements, so the result has length <= max_steps.
    """
    v0 = arith.primality(start, rounds)
    if not v0:
        raise ValueError(f"{start} is not prime")
    if strategy not in ("first-found", "random"):
        raise ValueError("strategy must be 'first-found' or 'random'")
    rng = random.Random(seed)
    walk = Walk(start, [], [start], False, [v0])
    x = start
    while walk.length < max_steps:
        options = []
        for pos, d, v in arith.insert_moves(x, base):
            verdict = arith.primality(v, rounds)
            if verdict:
                options.append(((pos, (d,)), v, verdict))
                if strategy == "first-found":
                    break
        if not options:
            break
        mv, x, verdict = options[0] if strategy == "first-found" else rng.choice(options)
        walk.moves.append(mv)
        walk.values.append(x)
        walk.verdicts.append(verdict)
    walk.cap_reached = walk.length >= max_steps
    return walk
