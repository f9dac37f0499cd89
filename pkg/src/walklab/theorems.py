"""Desk-scale checks of the impossibility and possibility results.

Each check scans a finite range exhaustively and returns a VerificationReport.
"Verified" means the stated property held on every case in `parameters`;
nothing here is a proof for the unbounded statement.
"""
from __future__ import annotations

import math
import time
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Optional

from . import arith
from .arith import fib_list, is_prime, primality, primes_below
from .search import WalkPolicy, extend_right_unbounded

VERIFIED = "Verified"
COUNTEREXAMPLE = "CounterexampleFound"
INCONCLUSIVE = "Inconclusive"
STATUSES = (VERIFIED, COUNTEREXAMPLE, INCONCLUSIVE)

# witnesses kept per report; the totals always cover the full range
MAX_WITNESSES = 12


@dataclass
class VerificationReport:
    claim_id: str
    status: str
    witnesses: list = field(default_factory=list)  # [input, evidence] pairs
    parameters: dict = field(default_factory=dict)
    elapsed: float = 0.0  # wall time; not serialised, so reports stay reproducible

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if self.status == COUNTEREXAMPLE and not self.witnesses:
            raise ValueError("a counterexample report needs a witness")

    @property
    def ok(self) -> bool:
        return self.status == VERIFIED

    def to_dict(self) -> dict:
        return {"claim_id": self.claim_id, "status": self.status,
                "witnesses": [[_jsonable(i), _jsonable(e)] for i, e in self.witnesses],
                "parameters": _jsonable(self.parameters)}

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        return cls(d["claim_id"], d["status"], [list(w) for w in d["witnesses"]], dict(d["parameters"]))


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int) and not isinstance(x, bool) and abs(x) >= 1 << 53:
        return str(x)  # keep big integers exact in JSON
    return x


def _timed(fn: Callable[..., VerificationReport]) -> Callable[..., VerificationReport]:
    def run(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.elapsed = time.perf_counter() - t0
        return rep

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    run.__wrapped__ = fn
    return run


# ---------------------------------------------------------------- composite runs

def cunningham_term(p: int, i: int) -> int:
    """e_i = 2^i p + 2^i - 1, i.e. p with i binary ones appended."""
    return (p + 1 << i) - 1


@_timed
def cunningham_gap(p: int, n: int = 2, i_max: int = 1000) -> VerificationReport:
    """First run of n consecutive composites among e_0, e_1, ... e_{i_max}.

    A Miller-Rabin "composite" answer is certain, so every witness is exact.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("n must be >= 1")
    run_start, run = None, 0
    for i in range(i_max + 1):
        if primality(cunningham_term(p, i)).kind == "Composite":
            if run == 0:
                run_start = i
            run += 1
            if run == n:
                terms = [cunningham_term(p, j) for j in range(run_start, run_start + n)]
                factors = [_small_factor(t) for t in terms]
                return VerificationReport(
                    "longcchain", VERIFIED,
                    [[{"p": p, "i": run_start}, {"terms": terms, "factors": factors}]],
                    {"p": p, "n": n, "i_max": i_max, "first_index": run_start})
        else:
            run = 0
    return VerificationReport("longcchain", INCONCLUSIVE, [], {"p": p, "n": n, "i_max": i_max})


def _small_factor(x: int, bound: int = 10**6) -> Optional[int]:
    """Least prime factor below bound, or None (compositeness then rests on Miller-Rabin)."""
    for q in primes_below(min(bound, math.isqrt(x) + 2)).tolist():
        if x % q == 0:
            return q
    return None


@_timed
def power_of_two_gaps(p_max: int = 1000, k_max: int = 64) -> VerificationReport:
    """2^k - (p+1) is not a power of 2 for k >= ceil(log2(p+1)) + 2, all primes p < p_max."""
    bad = []
    checked = 0
    for p in primes_below(p_max).tolist():
        k0 = math.ceil(math.log2(p + 1)) + 2
        for k in range(k0, k_max + 1):
            v = (1 << k) - (p + 1)
            checked += 1
            if v > 0 and v & (v - 1) == 0:
                bad.append([{"p": p, "k": k}, {"value": v}])
    status = COUNTEREXAMPLE if bad else VERIFIED
    return VerificationReport("power2", status, bad[:MAX_WITNESSES],
                              {"p_max": p_max, "k_max": k_max, "pairs_checked": checked})


# ---------------------------------------------------------------- small bases

class _Tree:
    """All prime walks from a value under one policy, summarised per node."""

    def __init__(self, policy: WalkPolicy, depth_cap: int):
        self.policy = policy
        self.depth_cap = depth_cap
        self.memo: dict[int, tuple[int, int]] = {}  # value -> (max elements, max count of tagged moves)
        self.nodes = 0
        self.capped = False
        self.forced_violations: list = []

    def explore(self, x: int, tag: Callable[[tuple], bool], forced: Optional[Callable[[int], Optional[int]]],
                depth: int = 1) -> tuple[int, int]:
        got = self.memo.get(x)
        if got is not None:
            return got
        if depth > self.depth_cap:
            self.capped = True
            return 1, 0
        self.nodes += 1
        best_len, best_tag = 1, 0
        want = forced(x) if forced else None
        for (pos, blk), v in self.policy.moves(x):
            if not is_prime(v):
                continue
            if want is not None and blk != (want,):
                self.forced_violations.append([x, list(blk), v])
            ln, tg = self.explore(v, tag, forced, depth + 1)
            best_len = max(best_len, ln + 1)
            best_tag = max(best_tag, tg + (1 if tag(blk) else 0))
        self.memo[x] = (best_len, best_tag)
        return best_len, best_tag


def _chain_value(base: int, digit: int, p1: int, i: int) -> int:
    """i-th element of the chain p_1 = p1, p_{j+1} = base*p_j + digit."""
    x = p1
    for _ in range(i - 1):
        x = x * base + digit
    return x


def _chain_mod(base: int, digit: int, p1: int, i: int, m: int) -> int:
    # p_i = base^(i-1) p1 + digit (base^(i-1) - 1)/(base - 1), evaluated mod m
    mm = m * (base - 1)
    t = pow(base, i - 1, mm)
    return (t * p1 + digit * ((t - 1) % mm) // (base - 1)) % m


def _base4_witness(p: int) -> dict:
    # appending 3 repeatedly: p_i = 4^(i-1) p1 + 4^(i-1) - 1; p_{p1} == 0 (mod p1) for odd p1
    p1 = p if p % 2 else p * 4 + 3
    r = _chain_mod(4, 3, p1, p1, p1)
    return {"p1": p1, "index": p1, "residue": r, "holds": r == 0}


def _base5_witness(p: int) -> Optional[dict]:
    """Divisibility witness for the forced-digit chain from p, or None when p == 3 (no forced digit)."""
    if p % 3 == 1:
        # digit 2 forced: 2 p_i == 5^(i-1) - 1 (mod p1)
        r = 2 * _chain_mod(5, 2, p, p, p) % p
        return {"p1": p, "digit": 2, "index": p, "residue_of_2p": r, "holds": r == 0}
    if p % 3 == 2:
        if p == 5:
            # 5 divides 5^(i-1): shift to p2 = 29 and use index p2 + 1
            p2 = 5 * p + 4
            r = _chain_mod(5, 4, p, p2 + 1, p2)
            return {"p1": p, "p2": p2, "digit": 4, "index": p2 + 1, "residue": r, "holds": r == 0}
        r = _chain_mod(5, 4, p, p, p)
        return {"p1": p, "digit": 4, "index": p, "residue": r, "holds": r == 0}
    return None


@_timed
def small_base_prime_walks(base: int, policy: Optional[WalkPolicy] = None, start_max: int = 10**4,
                           depth_cap: int = 200) -> VerificationReport:
    """Every prime walk from a start <= start_max terminates, with the predicted structure.

    base 2 (blocks of at most 2 digits): "01" is appended at most once on any walk,
    the start 3 excepted (3 -> 13 -> 53).  base 4 (one digit): digit 1 at most once,
    same exception, and p_{p1} == 0 (mod p1) along the all-3 chain.  base 5 (one
    digit): the digit is forced by p mod 3 and the forced chain has a divisible
    element at the predicted index.
    """
    if base not in (2, 4, 5):
        raise ValueError("base must be 2, 4 or 5")
    if policy is None:
        policy = WalkPolicy(2, "append-atmost", None, 2) if base == 2 else WalkPolicy(base)
    if policy.base != base:
        raise ValueError("policy base mismatch")
    tree = _Tree(policy, depth_cap)
    if base == 2:
        tag = lambda blk: blk == (0, 1)
        limit_tag = 1
    elif base == 4:
        tag = lambda blk: blk == (1,)
        limit_tag = 1
    else:
        tag = lambda blk: False
        limit_tag = 0
    forced = None
    if base == 5:
        forced = lambda x: {1: 2, 2: 4}.get(x % 3) if x > 3 else None

    starts = primes_below(start_max + 1).tolist()
    over, witness_fail, sample = [], [], []
    longest = (0, None)
    for p in starts:
        ln, tg = tree.explore(p, tag, forced)
        if ln > longest[0]:
            longest = (ln, p)
        if tg > limit_tag and p != 3:
            over.append([p, {"tagged_moves": tg}])
        if base == 4:
            w = _base4_witness(p)
        elif base == 5:
            w = _base5_witness(p)
        else:
            w = None
        if w is not None and not w["holds"]:
            witness_fail.append([p, w])
        if w is not None and len(sample) < MAX_WITNESSES:
            sample.append([p, w])
    exception = tree.memo.get(3)
    params = {"base": base, "policy": policy.describe(), "start_max": start_max, "starts": len(starts),
              "depth_cap": depth_cap, "nodes_explored": tree.nodes,
              "longest_walk": longest[0], "longest_from": longest[1]}
    if base in (2, 4):
        params["tag_count_from_3"] = exception[1] if exception else None
    if tree.capped:
        return VerificationReport(f"prime-base-{base}", INCONCLUSIVE, [], params)
    bad = over + witness_fail + [[v[0], {"forced_violation": v}] for v in tree.forced_violations]
    if bad:
        return VerificationReport(f"prime-base-{base}", COUNTEREXAMPLE, bad[:MAX_WITNESSES], params)
    if base == 2:
        sample = [[3, {"walk": [3, 13, 53], "moves": ["01", "01"]}]]
    return VerificationReport(f"prime-base-{base}", VERIFIED, sample, params)


# ---------------------------------------------------------------- perfect squares

def _square_extensions(s: int, d: int) -> list[tuple[int, int]]:
    """All (t, k) with t^2 = 10^d s^2 + k, 0 <= k < 10^d."""
    lo = 10**d * s * s
    t = math.isqrt(lo - 1) + 1 if lo else 0
    out = []
    while t * t < lo + 10**d:
        out.append((t, t * t - lo))
        t += 1
    return out


def odd_pair_threshold(s: int, n1: int, n2: int) -> bool:
    """The necessary condition 2*10^(n1+n2-1) s < 10^(2n1+2n2-2) + 10^(2n2-1) for two odd steps."""
    return 2 * 10 ** (n1 + n2 - 1) * s < 10 ** (2 * n1 + 2 * n2 - 2) + 10 ** (2 * n2 - 1)


@_timed
def square_walk_check(mode: str, N: int = 2, start_max: int = 10**5, chain_steps: int = 3) -> VerificationReport:
    """Audits walks on squares s^2, s <= start_max, with blocks of at most 2N digits.

    OddBlock: every pair of consecutive odd-length steps found satisfies the
    threshold inequality, so none exists once it fails.  EvenBlock: once
    s >= 10^N / 2 the only even-length extensions append zeros.  Mixed: for
    odd, zero-pairs, odd chains from small s, both sides of the combined
    inequality are recomputed and checked.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    mode_l = mode.lower()
    if mode_l in ("oddblock", "odd"):
        return _odd_block(N, start_max)
    if mode_l in ("evenblock", "even"):
        return _even_block(N, start_max)
    if mode_l in ("mixed",):
        return _mixed(N, min(start_max, 2000), chain_steps)
    raise ValueError(f"unknown mode {mode!r}")


def _odd_block(N: int, s_max: int) -> VerificationReport:
    odd = [n for n in range(1, N + 1)]  # block of 2n-1 digits
    singles = pairs = 0
    bad, sample = [], []
    above_threshold_max = 0
    for s in range(1, s_max + 1):
        for n1 in odd:
            for t, k1 in _square_extensions(s, 2 * n1 - 1):
                singles += 1
                for n2 in odd:
                    for u, k2 in _square_extensions(t, 2 * n2 - 1):
                        pairs += 1
                        if not odd_pair_threshold(s, n1, n2):
                            bad.append([{"s": s, "n1": n1, "n2": n2}, {"chain": [s * s, t * t, u * u]}])
                        elif len(sample) < MAX_WITNESSES:
                            sample.append([{"s": s, "n1": n1, "n2": n2}, {"chain": [s * s, t * t, u * u]}])
    # largest s at which the inequality still admits some (n1, n2)
    for n1 in odd:
        for n2 in odd:
            lim = (10 ** (2 * n1 + 2 * n2 - 2) + 10 ** (2 * n2 - 1) - 1) // (2 * 10 ** (n1 + n2 - 1))
            above_threshold_max = max(above_threshold_max, lim)
    params = {"mode": "OddBlock", "N": N, "s_max": s_max, "single_odd_steps": singles,
              "odd_pairs": pairs, "threshold_s": above_threshold_max}
    if bad:
        return VerificationReport("oddsquares", COUNTEREXAMPLE, bad[:MAX_WITNESSES], params)
    return VerificationReport("oddsquares", VERIFIED, sample, params)


def _even_block(N: int, s_max: int) -> VerificationReport:
    bad, sample = [], []
    nonzero = 0
    for s in range(1, s_max + 1):
        for n in range(1, N + 1):
            for t, k in _square_extensions(s, 2 * n):
                if k == 0:
                    continue
                nonzero += 1
                # k = (t - 10^n s)(t + 10^n s) > 2*10^n s forces s < 10^n / 2
                if 2 * s >= 10**N:
                    bad.append([{"s": s, "n": n}, {"square": t * t, "k": k}])
                elif len(sample) < MAX_WITNESSES:
                    sample.append([{"s": s, "n": n}, {"square": t * t, "k": k}])
    # zero blocks always work
    zeros = [4, 400, 40000]
    assert all(arith.is_square(z) for z in zeros)
    params = {"mode": "EvenBlock", "N": N, "s_max": s_max, "nonzero_extensions": nonzero,
              "threshold_s": (10**N + 1) // 2, "zero_block_chain": zeros}
    if bad:
        return VerificationReport("evensquares", COUNTEREXAMPLE, bad[:MAX_WITNESSES], params)
    return VerificationReport("evensquares", VERIFIED, sample, params)


def _mixed(N: int, s_max: int, max_pairs: int) -> VerificationReport:
    chains = 0
    bad, sample = [], []
    for s in range(1, s_max + 1):
        for n1 in range(1, N + 1):
            for t, k1 in _square_extensions(s, 2 * n1 - 1):
                for j in range(1, max_pairs + 1):
                    M = j  # j steps of "00"
                    base_t = t * 10**M
                    for n2 in range(1, N + 1):
                        for u, k2 in _square_extensions(base_t, 2 * n2 - 1):
                            chains += 1
                            lhs = 2 * 10 ** (n1 + n2 + M - 1) * s
                            mid = 10 ** (2 * (n2 + M) - 1) * k1 + k2
                            rhs = 10 ** (2 * (n1 + n2 + M - 1)) + 10 ** (2 * n2 - 1)
                            total = 10 ** (2 * (n1 + n2 + M - 1)) * s * s + mid
                            rec = [{"s": s, "n1": n1, "m": [1] * j, "n2": n2},
                                   {"end": u * u, "lhs": lhs, "middle": mid, "rhs": rhs}]
                            if total != u * u or not (lhs < mid < rhs):
                                bad.append(rec)
                            elif len(sample) < MAX_WITNESSES:
                                sample.append(rec)
    params = {"mode": "Mixed", "N": N, "s_max": s_max, "zero_pairs_max": max_pairs, "chains": chains,
              "note": "bookkeeping audit only; the unbounded mixed case is not settled"}
    if bad:
        return VerificationReport("squares-mixed", COUNTEREXAMPLE, bad[:MAX_WITNESSES], params)
    return VerificationReport("squares-mixed", VERIFIED, sample, params)


@_timed
def even_square_zero_walk(s: int = 2, steps: int = 6) -> VerificationReport:
    """Appending 00 keeps a square a square; shows an unbounded walk exists."""
    vals = [s * s * 100**i for i in range(steps)]
    ok = all(arith.is_square(v) for v in vals)
    return VerificationReport("evensquaresexist", VERIFIED if ok else COUNTEREXAMPLE,
                              [[s * s, {"walk": vals}]], {"s": s, "steps": steps})


# ---------------------------------------------------------------- Fibonacci

@lru_cache(maxsize=8)
def _fib_values(index_cap: int) -> tuple[int, ...]:
    # distinct positive values F_1..F_cap (F_1 == F_2)
    return tuple(sorted(set(fib_list(index_cap + 1)[1:])))


def _fib_children(x: int, lengths: range, fibs: tuple[int, ...]) -> list[tuple[int, int]]:
    out = []
    for n in lengths:
        lo = x * 10**n
        i = bisect_left(fibs, lo)
        while i < len(fibs) and fibs[i] < lo + 10**n:
            out.append((n, fibs[i]))
            i += 1
    return out


def _fib_longest(x: int, lengths: range, fibs: tuple[int, ...], memo: dict) -> list[int]:
    got = memo.get(x)
    if got is None:
        best = [x]
        for _, v in _fib_children(x, lengths, fibs):
            cand = [x] + _fib_longest(v, lengths, fibs, memo)
            if len(cand) > len(best):
                best = cand
        memo[x] = got = best
    return got


def fibo_length_bound(N: int, n1: int) -> int:
    """Longest-walk bound for at-most-N blocks from an n1-digit start.

    The closed form drops below 1 once n1 - 1 > N (no step is possible at all);
    a lone start is still a walk of length 1, so the bound is floored there.
    """
    if n1 == 1:
        return int(math.floor(math.log2(N))) + 2
    return max(1, int(math.floor(math.log2(N / (n1 - 1)))) + 2)


@_timed
def fibonacci_walk_census(policy: WalkPolicy, index_cap: int = 300) -> VerificationReport:
    """Every walk on the distinct values F_1..F_index_cap under policy.

    Policies: append-right with all digits (same as append-exact:1),
    append-exact:N and append-atmost:N.  Value 0 is not used as a start.
    """
    if index_cap < 10:
        raise ValueError("index_cap must be >= 10")
    if policy.base != 10 or policy.mode == "insert-anywhere":
        raise ValueError("census covers base-10 append policies")
    if policy.mode == "append-right":
        if policy.digits not in (None, tuple(range(10))):
            raise ValueError("append-right census needs all ten digits")
        mode, N = "append-exact", 1
    else:
        mode, N = policy.mode, policy.n
    fibs = _fib_values(index_cap)
    lengths = range(N, N + 1) if mode == "append-exact" else range(1, N + 1)
    memo: dict[int, list[int]] = {}
    walks = {x: _fib_longest(x, lengths, fibs, memo) for x in fibs}
    appendable = sorted(x for x in fibs if _fib_children(x, lengths, fibs))
    longest = max(len(w) for w in walks.values())
    params = {"policy": policy.describe(), "index_cap": index_cap, "values": len(fibs),
              "appendable_starts": appendable, "longest": longest}
    claim = {"append-exact": "fiboNdigit", "append-atmost": "fiboatmostn"}[mode]
    if mode == "append-exact" and N == 1:
        claim = "fibo1digit"
    bad = []
    if mode == "append-exact":
        bound = Fraction(8, 7) * (10**N - 1)
        bad += [[x, {"exceeds": str(bound)}] for x in appendable if x > bound]
        if longest > 3:
            bad += [[w[0], {"walk": w}] for w in walks.values() if len(w) > 3]
        if N == 1:
            pairs = sorted((x, v) for x in fibs for _, v in _fib_children(x, lengths, fibs))
            witnesses = [[x, {"walk": [x, v]}] for x, v in pairs]
            params["walks_of_length_2"] = len(pairs)
            if longest > 2 or len(pairs) != 5:
                bad += [[w[0], {"walk": w}] for w in walks.values() if len(w) > 2] or \
                       [[None, {"pairs": pairs}]]
        else:
            witnesses = [[w[0], {"walk": w}] for w in walks.values() if len(w) > 1][:MAX_WITNESSES]
        params["bound"] = str(bound)
    else:
        per_n1: dict[int, int] = {}
        for x, w in walks.items():
            n1 = len(str(x))
            per_n1[n1] = max(per_n1.get(n1, 0), len(w))
            if len(w) > fibo_length_bound(N, n1):
                bad.append([x, {"walk": w, "bound": fibo_length_bound(N, n1)}])
        params["longest_by_start_digits"] = {k: per_n1[k] for k in sorted(per_n1)}
        params["bound_by_start_digits"] = {k: fibo_length_bound(N, k) for k in sorted(per_n1)}
        witnesses = sorted(([w[0], {"walk": w}] for w in walks.values() if len(w) > 2),
                           key=lambda r: (-len(r[1]["walk"]), r[0]))[:MAX_WITNESSES]
    if bad:
        return VerificationReport(claim, COUNTEREXAMPLE, bad[:MAX_WITNESSES], params)
    return VerificationReport(claim, VERIFIED, witnesses, params)


@_timed
def fibonacci_bounds(index_cap: int = 300) -> VerificationReport:
    """F_{k+1} F_m <= F_{m+k} <= F_{k+2} F_m for 1 <= m, k with m + k <= index_cap."""
    F = fib_list(index_cap + 3)
    bad = []
    checked = 0
    for m in range(1, index_cap):
        for k in range(1, index_cap - m + 1):
            checked += 1
            if not F[k + 1] * F[m] <= F[m + k] <= F[k + 2] * F[m]:
                bad.append([{"m": m, "k": k}, {}])
    spot = [{"m": 7, "k": 4}, {"lower": F[5] * F[7], "value": F[11], "upper": F[6] * F[7]}]
    params = {"index_cap": index_cap, "pairs_checked": checked}
    if bad:
        return VerificationReport("fkbound", COUNTEREXAMPLE, bad[:MAX_WITNESSES], params)
    return VerificationReport("fkbound", VERIFIED, [spot], params)


@_timed
def pisano_and_power10(k_limit: int = 300, N_limit: int = 20) -> VerificationReport:
    """Period 60 mod 10, no F_{k+2} - F_{k-2} divisible by 10, the gap identity.

    The identity F_{m+k} = (F_{k+2} - F_{k-2}) F_m + (-1)^(k+1) F_{m-k} is
    checked for all 2 < k < m <= k_limit.
    """
    if k_limit < 62:
        raise ValueError("k_limit must be >= 62")
    F = fib_list(2 * k_limit + 3)
    bad = []
    period_bad = [n for n in range(k_limit + 1) if (F[n + 60] - F[n]) % 10]
    bad += [[{"n": n}, {"period": 60}] for n in period_bad]
    zero_mod10 = [k for k in range(2, 63) if (F[k + 2] - F[k - 2]) % 10 == 0]
    bad += [[{"k": k}, {"gap_mod_10": 0}] for k in zero_mod10]
    powers = {10**N for N in range(1, N_limit + 1)}
    hits = [k for k in range(2, k_limit + 1) if F[k + 2] - F[k - 2] in powers]
    bad += [[{"k": k}, {"gap": F[k + 2] - F[k - 2]}] for k in hits]
    identity = 0
    for m in range(4, k_limit + 1):
        for k in range(3, m):
            identity += 1
            sign = 1 if k % 2 else -1
            if F[m + k] != (F[k + 2] - F[k - 2]) * F[m] + sign * F[m - k]:
                bad.append([{"m": m, "k": k}, {"identity": False}])
    witnesses = [[{"n": 61}, {"F61_mod10": F[61] % 10, "F1_mod10": F[1] % 10}],
                 [{"n": 62}, {"F62_mod10": F[62] % 10, "F2_mod10": F[2] % 10}],
                 [{"m": 10, "k": 5}, {"lhs": F[15], "rhs": (F[7] - F[3]) * F[10] + F[5]}],
                 [{"m": 6, "k": 5}, {"lhs": F[11], "rhs": 11 * F[6] + F[1]}]]
    params = {"k_limit": k_limit, "N_limit": N_limit, "residue_scan": [2, 62], "identity_pairs": identity,
              "gap_residues_mod_10": sorted({(F[k + 2] - F[k - 2]) % 10 for k in range(2, 63)})}
    if bad:
        return VerificationReport("10nimpossible", COUNTEREXAMPLE, bad[:MAX_WITNESSES], params)
    return VerificationReport("10nimpossible", VERIFIED, witnesses, params)


# ---------------------------------------------------------------- unbounded appends

@_timed
def right_unbounded_demo(p_max: int = 200, n_max: int = 30) -> VerificationReport:
    """Each prime p < p_max extends to a prime by appending some finite block."""
    witnesses, missing = [], []
    for p in primes_below(p_max).tolist():
        ext = extend_right_unbounded(p, n_max)
        if ext.found:
            witnesses.append([p, {"digits": ext.n, "offset": ext.k, "prime": ext.q}])
        else:
            missing.append(p)
    params = {"p_max": p_max, "n_max": n_max, "max_digits_needed": max(w[1]["digits"] for w in witnesses)}
    if missing:
        return VerificationReport("rightunbounded", INCONCLUSIVE, [], {**params, "missing": missing})
    return VerificationReport("rightunbounded", VERIFIED, witnesses[:MAX_WITNESSES], params)


# ---------------------------------------------------------------- registry

CLAIMS: dict[str, Callable[[], VerificationReport]] = {
    "longcchain": lambda: _merge("longcchain", [cunningham_gap(p, 2, 1000) for p in (2, 3, 5, 11)]),
    "power2": lambda: power_of_two_gaps(),
    "prime-base-2": lambda: small_base_prime_walks(2),
    "prime-base-4": lambda: small_base_prime_walks(4),
    "prime-base-5": lambda: small_base_prime_walks(5),
    "oddsquares": lambda: square_walk_check("OddBlock", 2, 10**5),
    "evensquares": lambda: square_walk_check("EvenBlock", 2, 10**5),
    "evensquaresexist": lambda: even_square_zero_walk(),
    "squares-mixed": lambda: square_walk_check("Mixed", 2, 2000),
    "fkbound": lambda: fibonacci_bounds(),
    "10nimpossible": lambda: pisano_and_power10(300, 20),
    "fibo1digit": lambda: fibonacci_walk_census(WalkPolicy(10, "append-exact", None, 1)),
    "fibondigit": lambda: _merge("fiboNdigit", [fibonacci_walk_census(WalkPolicy(10, "append-exact", None, n))
                                               for n in range(2, 7)]),
    "fiboatmostn": lambda: _merge("fiboatmostn", [fibonacci_walk_census(WalkPolicy(10, "append-atmost", None, n))
                                                 for n in range(1, 9)]),
    "rightunbounded": lambda: right_unbounded_demo(),
}


def _merge(claim_id: str, reports: list[VerificationReport]) -> VerificationReport:
    """One report for several runs: worst status wins, witnesses concatenate."""
    rank = {VERIFIED: 0, INCONCLUSIVE: 1, COUNTEREXAMPLE: 2}
    status = max((r.status for r in reports), key=rank.__getitem__)
    wit = [w for r in reports for w in r.witnesses if status == VERIFIED or r.status == status]
    rep = VerificationReport(claim_id, status, wit, {"runs": [r.parameters for r in reports]})
    rep.elapsed = sum(r.elapsed for r in reports)
    return rep


def run_claim(claim_id: str) -> VerificationReport:
    key = claim_id.lower()
    if key not in CLAIMS:
        raise KeyError(f"unknown claim {claim_id!r}; choose from {', '.join(CLAIMS)}")
    t0 = time.perf_counter()
    rep = CLAIMS[key]()
    rep.elapsed = rep.elapsed or time.perf_counter() - t0
    return rep


def summary_markdown(reports: list[VerificationReport]) -> str:
    lines = ["| claim | status | ranges | seconds |", "|---|---|---|---|"]
    for r in reports:
        keys = {k: v for k, v in r.parameters.items() if isinstance(v, (int, str)) and k != "note"}
        rng = ", ".join(f"{k}={v}" for k, v in list(keys.items())[:4]) or "see JSON"
        lines.append(f"| {r.claim_id} | {r.status} | {rng} | {r.elapsed:.2f} |")
    return "\n".join(lines)
