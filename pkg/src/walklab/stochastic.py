"""Seeded Monte-Carlo simulation of digit-append walk models.

A model fixes a digit set, a success rule and a selection rule:

* success rules: ``Cramer(scale)`` (a candidate extending a k-digit value
  succeeds with probability min(1, scale/(k ln b))), ``ConstantP(p)``, or
  ``Actual(pred)`` (the candidate is tested against the real predicate);
* selection rules: ``blind`` (pick one digit, stop if it fails) or
  ``survivor`` (stop only if every digit fails, else pick among the successes).

Trials are split into fixed blocks of BLOCK trials.  Block i draws from a
Philox stream keyed by (seed, i), so results do not depend on how blocks are
spread over workers.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from . import arith
from .arith import PowerFree, Prime

BLOCK = 1 << 15


@dataclass(frozen=True)
class Cramer:
    scale: float = 1.0


@dataclass(frozen=True)
class ConstantP:
    p: float


@dataclass(frozen=True)
class Actual:
    """Test candidates against a real predicate.

    For power-free predicates a candidate is accepted when no p**n divides it
    for primes p < sieve_bound (exact for the start values, a bounded proxy
    for later elements).
    """

    pred: Union[Prime, PowerFree]
    sieve_bound: int = 1000


Rule = Union[Cramer, ConstantP, Actual]


@dataclass(frozen=True)
class ModelSpec:
    name: str
    base: int = 10
    digits: tuple[int, ...] = tuple(range(10))
    rule: Rule = Cramer(1.0)
    selection: str = "blind"
    forced_zero: bool = False  # append 0 before every chosen digit
    count_start: bool = True  # report elements (True) or steps (False)
    start_condition: tuple[tuple[int, tuple[int, ...]], ...] = ()  # (modulus, allowed residues)

    def __post_init__(self):
        if not self.digits:
            raise ValueError("digit set must be nonempty")
        if any(not 0 <= d < self.base for d in self.digits):
            raise ValueError("digit outside base")
        if self.selection not in ("blind", "survivor"):
            raise ValueError("selection must be 'blind' or 'survivor'")
        if isinstance(self.rule, Cramer) and self.rule.scale <= 0:
            raise ValueError("Cramer scale must be positive")
        if isinstance(self.rule, ConstantP) and not 0 <= self.rule.p <= 1:
            raise ValueError("p must be in [0, 1]")

    def start_ok(self, x: int) -> bool:
        return all(x % m in rs for m, rs in self.start_condition)


@dataclass
class SimResult:
    trials: int
    mean_length: float
    variance: float
    standard_error: float
    length_histogram: dict[int, int]
    digit_counts: dict[int, int] = field(default_factory=dict)

    @property
    def digit_frequency(self) -> dict[int, float]:
        tot = sum(self.digit_counts.values())
        return {d: c / tot for d, c in sorted(self.digit_counts.items())} if tot else {}

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "mean_length": self.mean_length,
            "variance": self.variance,
            "standard_error": self.standard_error,
            "length_histogram": {str(k): v for k, v in sorted(self.length_histogram.items())},
            "digit_frequency": {str(k): v for k, v in self.digit_frequency.items()},
        }


# ---------------------------------------------------------------- standard models

ODD = ((2, (1,)),)
TWO_MOD_THREE = ((2, (1,)), (3, (2,)))
D4 = (1, 3, 7, 9)


def greedy_cramer(base: int = 10) -> ModelSpec:
    return ModelSpec("greedy-cramer", base, tuple(range(base)), Cramer(1.0), "blind")


def refined_cramer() -> ModelSpec:
    return ModelSpec("refined-cramer", 10, D4, Cramer(10 / 4), "survivor")


def two_mod_three_cramer() -> ModelSpec:
    return ModelSpec("2mod3-cramer", 10, (3, 9), Cramer(10 / 2), "survivor")


def greedy_primes(digits=D4, condition=ODD) -> ModelSpec:
    return ModelSpec("greedy", 10, tuple(digits), Actual(Prime()), "blind", start_condition=condition)


def refined_primes(digits=D4, condition=ODD) -> ModelSpec:
    return ModelSpec("refined-greedy", 10, tuple(digits), Actual(Prime()), "survivor", start_condition=condition)


def squarefree_greedy(actual: bool = True) -> ModelSpec:
    rule = Actual(PowerFree(2)) if actual else ConstantP(6 / math.pi**2)
    return ModelSpec("squarefree-greedy", 10, tuple(range(10)), rule, "blind")


def squarefree_refined(actual: bool = False) -> ModelSpec:
    rule = Actual(PowerFree(2)) if actual else ConstantP(25 / (3 * math.pi**2))
    return ModelSpec("squarefree-refined", 10, D4, rule, "blind", forced_zero=True, count_start=False,
                     start_condition=((2, (1,)), (5, (1, 2, 3, 4))))


MODELS = {
    "greedy": greedy_primes,
    "refined-greedy": refined_primes,
    "greedy-2mod3": lambda: greedy_primes((3, 9), TWO_MOD_THREE),
    "refined-2mod3": lambda: refined_primes((3, 9), TWO_MOD_THREE),
    "greedy-cramer": greedy_cramer,
    "refined-cramer": refined_cramer,
    "2mod3-cramer": two_mod_three_cramer,
    "squarefree-greedy": squarefree_greedy,
    "squarefree-greedy-iid": lambda: squarefree_greedy(False),
    "squarefree-refined": squarefree_refined,
    "squarefree-refined-actual": lambda: squarefree_refined(True),
}


# ---------------------------------------------------------------- starts

def _start_range(model: ModelSpec, start_digits: Optional[int], start_range: Optional[tuple[int, int]]):
    if start_range is not None:
        lo, hi = start_range
    elif start_digits is not None:
        if start_digits < 1:
            raise ValueError("start_digits must be >= 1")
        lo, hi = (1 if start_digits == 1 else model.base ** (start_digits - 1)), model.base**start_digits
    else:
        raise ValueError("need start_digits or start_range")
    if lo >= hi:
        raise ValueError("empty start range")
    return lo, hi


@lru_cache(maxsize=16)
def _prime_starts(lo: int, hi: int, condition) -> np.ndarray:
    s = np.flatnonzero(arith.prime_sieve(hi)[lo:]) + lo
    for m, rs in condition:
        s = s[np.isin(s % m, rs)]
    return s.astype(np.int64)


class _PrimeTree:
    """All values reachable from the starts by appending digits and staying prime."""

    def __init__(self, starts: np.ndarray, base: int, digits: tuple[int, ...], rounds: int):
        values = [int(x) for x in starts]
        index = {v: i for i, v in enumerate(values)}
        children: list[list[int]] = []
        sieve = arith.prime_sieve(10**8) if base == 10 else None
        i = 0
        while i < len(values):
            x = values[i]
            row = []
            for d in digits:
                y = x * base + d
                ok = bool(sieve[y]) if sieve is not None and y < sieve.size else arith.is_prime(y, rounds)
                if not ok:
                    row.append(-1)
                    continue
                j = index.get(y)
                if j is None:
                    j = len(values)
                    index[y] = j
                    values.append(y)
                row.append(j)
            children.append(row)
            i += 1
        self.child = np.array(children, dtype=np.int64).reshape(len(values), len(digits))
        self.n_starts = len(starts)


@lru_cache(maxsize=16)
def _tree(lo: int, hi: int, base: int, digits, condition, rounds: int) -> _PrimeTree:
    return _PrimeTree(_prime_starts(lo, hi, condition), base, digits, rounds)


def _sample_power_free_starts(rng, lo: int, hi: int, n: int, count: int, condition) -> np.ndarray:
    out = []
    need = count
    while need > 0:
        cand = rng.integers(lo, hi, size=max(2 * need, 64), dtype=np.int64)
        ok = arith.power_free_mask(cand, n)
        for m, rs in condition:
            ok &= np.isin(cand % m, rs)
        got = cand[ok][:need]
        out.append(got)
        need -= got.size
    return np.concatenate(out)


# ---------------------------------------------------------------- block simulation

def _choose_survivor(rng, valid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For each row choose a uniformly random True column. Returns (has_any, column)."""
    cnt = valid.sum(axis=1)
    alive = cnt > 0
    rank = np.floor(rng.random(valid.shape[0]) * np.maximum(cnt, 1)).astype(np.int64)
    col = np.argmax(valid.cumsum(axis=1) > rank[:, None], axis=1)
    return alive, col


def _run_block(model: ModelSpec, m: int, start_digits: Optional[int], lo: int, hi: int,
               seed: int, block: int, tree: Optional[_PrimeTree], starts: Optional[np.ndarray]):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed & (2**64 - 1), block])))
    digits = np.array(model.digits, dtype=np.int64)
    nd = digits.size
    steps = np.zeros(m, dtype=np.int64)
    dcounts = np.zeros(model.base, dtype=np.int64)
    rule, b = model.rule, model.base
    live = np.arange(m)

    if isinstance(rule, Actual) and isinstance(rule.pred, Prime):
        cur = starts[rng.integers(0, starts.size, size=m)]
        child = tree.child
        while live.size:
            if model.selection == "blind":
                j = rng.integers(0, nd, size=live.size)
                nxt = child[cur, j]
                ok = nxt >= 0
            else:
                valid = child[cur] >= 0
                ok, j = _choose_survivor(rng, valid)
                nxt = child[cur, j]
            np.add.at(dcounts, digits[j[ok]], 1)
            live, cur = live[ok], nxt[ok]
            steps[live] += 1
        return steps, dcounts

    if isinstance(rule, Actual):
        n = rule.pred.n
        ps = arith.primes_below(rule.sieve_bound)
        q = ps**n
        q = q[q < 1 << 31]
        x0 = _sample_power_free_starts(rng, lo, hi, n, m, model.start_condition)
        res = x0[:, None] % q[None, :]
        while live.size:
            if model.forced_zero:
                res = res * b % q
                ok = (res != 0).all(axis=1)
                dcounts[0] += int(ok.sum())
                steps[live[ok]] += 1
                live, res = live[ok], res[ok]
                if not live.size:
                    break
            if model.selection == "blind":
                j = rng.integers(0, nd, size=live.size)
                res = (res * b + digits[j][:, None]) % q
                ok = (res != 0).all(axis=1)
            else:
                cand = (res[:, None, :] * b + digits[None, :, None]) % q[None, None, :]
                valid = (cand != 0).all(axis=2)
                ok, j = _choose_survivor(rng, valid)
                res = cand[np.arange(live.size), j]
            np.add.at(dcounts, digits[j[ok]], 1)
            live, res = live[ok], res[ok]
            steps[live] += 1
        return steps, dcounts

    # abstract models: only the current digit count matters
    k = start_digits
    while live.size:
        if isinstance(rule, Cramer):
            p = min(1.0, rule.scale / (k * math.log(b)))
        else:
            p = rule.p
        if model.forced_zero:
            k += 1
            dcounts[0] += live.size
            steps[live] += 1
        if model.selection == "blind":
            j = rng.integers(0, nd, size=live.size)
            ok = rng.random(live.size) < p
        else:
            valid = rng.random((live.size, nd)) < p
            ok, j = _choose_survivor(rng, valid)
        np.add.at(dcounts, digits[j[ok]], 1)
        live = live[ok]
        steps[live] += 1
        k += 1
    return steps, dcounts


def _run_block_star(args):
    return _run_block(*args)


def simulate(model: ModelSpec, start_digits: Optional[int] = None, trials: int = 100_000, seed: int = 0,
             start_range: Optional[tuple[int, int]] = None, parallelism: int = 1) -> SimResult:
    """Run `trials` independent walks of `model`.

    Abstract rules start from a value with `start_digits` digits.  Actual rules
    start from a uniformly drawn qualifying value in [lo, hi), taken from
    start_range or from the digit count.  In forced-zero models a round is
    counted only when both appended digits succeed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    lo, hi = _start_range(model, start_digits, start_range)
    if isinstance(model.rule, (Cramer, ConstantP)) and start_digits is None:
        raise ValueError("abstract models need start_digits")
    tree = starts = None
    if isinstance(model.rule, Actual) and isinstance(model.rule.pred, Prime):
        cond = tuple(model.start_condition)
        starts_all = _prime_starts(lo, hi, cond)
        if starts_all.size == 0:
            raise ValueError("no qualifying start in range")
        tree = _tree(lo, hi, model.base, tuple(model.digits), cond, model.rule.pred.rounds)
        starts = np.arange(tree.n_starts)
    elif isinstance(model.rule, Actual):
        probe = np.arange(lo, min(hi, lo + 10**6), dtype=np.int64)
        ok = arith.power_free_mask(probe, model.rule.pred.n)
        for m_, rs in model.start_condition:
            ok &= np.isin(probe % m_, rs)
        if not ok.any():
            raise ValueError("no qualifying start in range")
    sizes = [BLOCK] * (trials // BLOCK) + ([trials % BLOCK] if trials % BLOCK else [])
    jobs = [(model, m, start_digits, lo, hi, seed, i, tree, starts) for i, m in enumerate(sizes)]
    if parallelism > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(parallelism) as ex:
            parts = list(ex.map(_run_block_star, jobs))
    else:
        parts = [_run_block(*j) for j in jobs]
    steps = np.concatenate([p[0] for p in parts])
    if model.forced_zero:
        steps = steps - (steps % 2)  # a round whose odd digit failed leaves a dangling 0
    dcounts = sum(p[1] for p in parts)
    if model.forced_zero:
        # drop the dangling zeros from the digit tally as well
        dcounts = dcounts.copy()
        dcounts[0] = int(steps.sum() // 2)
    lengths = steps + (1 if model.count_start else 0)
    mean = float(lengths.mean())
    var = float(lengths.var(ddof=1)) if trials > 1 else 0.0
    hist = Counter(lengths.tolist())
    return SimResult(trials, mean, var, math.sqrt(var / trials), dict(sorted(hist.items())),
                     {d: int(c) for d, c in enumerate(dcounts) if d in model.digits or c})


def weighted_start_mean(per_digit_means: list[float], b: int, s: int) -> float:
    """Combine means by start digit count with the weights s(b-1)b^(r-1)/(r b^s)."""
    if len(per_digit_means) < s:
        raise ValueError("need a mean for every digit count 1..s")
    return sum(s * (b - 1) * b ** (r - 1) / (r * b**s) * per_digit_means[r - 1] for r in range(1, s + 1))


def start_weight_sum(b: int, s: int) -> float:
    return sum(s * (b - 1) * b ** (r - 1) / (r * b**s) for r in range(1, s + 1))


# ---------------------------------------------------------------- exact expectations on the prime tree

def exact_tree_mean(model: ModelSpec, start_digits: Optional[int] = None,
                    start_range: Optional[tuple[int, int]] = None) -> tuple[float, dict[int, float]]:
    """Exact expected length and expected digit tally for an Actual(Prime) model.

    Serves as an oracle for the Monte-Carlo estimate: the walk tree is finite,
    so the expectation is a finite recursion from the leaves up.
    """
    if not (isinstance(model.rule, Actual) and isinstance(model.rule.pred, Prime)):
        raise ValueError("exact expectation needs an Actual(Prime) model")
    lo, hi = _start_range(model, start_digits, start_range)
    cond = tuple(model.start_condition)
    tree = _tree(lo, hi, model.base, tuple(model.digits), cond, model.rule.pred.rounds)
    child = tree.child
    n, nd = child.shape
    E = np.zeros(n)
    D = np.zeros((n, model.base))
    digits = np.array(model.digits)
    # children always have larger indices than parents (breadth-first)
    for i in range(n - 1, -1, -1):
        row = child[i]
        valid = row >= 0
        k = int(valid.sum())
        if k == 0:
            continue
        w = 1.0 / nd if model.selection == "blind" else 1.0 / k
        for j in np.flatnonzero(valid):
            c = row[j]
            E[i] += w * (1 + E[c])
            D[i] += w * D[c]
            D[i, digits[j]] += w
    base_len = 1.0 if model.count_start else 0.0
    mean = float(E[: tree.n_starts].mean()) + base_len
    tally = D[: tree.n_starts].sum(axis=0)
    tot = tally.sum()
    return mean, {int(d): float(tally[d] / tot) for d in model.digits} if tot else {}
