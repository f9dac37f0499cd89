"""Exact per-length counts of right-truncatable n-th-power-free numbers.

Low levels are held explicitly as sorted int64 arrays (breadth-first). Higher
levels are counted without listing members: the count of j-digit members in a
residue class r mod M is expanded over the last digit d and, by inclusion-exclusion,
over square-free T with T**n dividing the candidate y = b*x + d.  Each term is a
count of (j-1)-digit members in a derived residue class, so the recursion
closes on (j, M, r).  Sparse classes fall back to checking members directly.
"""
from __future__ import annotations

import math
import sys

import numpy as np

from .arith import is_power_free, power_free_mask, primes_below, iroot

# A residue class with at most this many candidates is scanned directly.
DIRECT_SCAN = 48
# Histograms of explicit levels are cached for moduli up to this size.
HIST_MAX_MODULUS = 1 << 15


def _squarefree_terms(limit: int, n: int) -> list[tuple[int, int]]:
    ps = primes_below(iroot(limit, n) + 2).tolist()
    out = []

    def rec(i: int, t: int, mu: int) -> None:
        out.append((t**n, mu))
        for k in range(i, len(ps)):
            tp = t * ps[k]
            if tp**n > limit:
                break
            rec(k + 1, tp, -mu)

    rec(0, 1, 1)
    out.sort()
    return out


class LevelCounter:
    """Counts L_{b,k} (and the odd/even split) for n-th-power-free truncatables."""

    def __init__(self, base: int, n: int, explicit_limit: int = 3_000_000, max_level: int = 64):
        if base < 2 or n < 2:
            raise ValueError("need base >= 2 and n >= 2")
        self.base = base
        self.n = n
        self.explicit_limit = explicit_limit
        self.max_level = max_level
        self.levels: list[np.ndarray] = [np.zeros(0, dtype=np.int64)]  # index = digit count
        self._hist: dict[tuple[int, int], np.ndarray] = {}
        self._memo: dict[tuple[int, int, int], int] = {}
        self._member: dict[int, bool] = {}
        self._terms: list[tuple[int, int]] = []
        self._terms_limit = 1
        ps = primes_below(1 << 12).tolist()
        self._pn = [p**n for p in ps]
        self._pn_top = (ps[-1] + 1) ** n
        self._grow_explicit()

    # -------------------------------------------------------------- explicit part
    def _grow_explicit(self) -> None:
        b = self.base
        first = np.arange(1, b, dtype=np.int64)
        lvl = first[power_free_mask(first, self.n)]
        self.levels.append(lvl)
        while lvl.size and lvl.size * b <= self.explicit_limit and len(self.levels) <= self.max_level:
            hi = b ** (len(self.levels))
            if hi >= 1 << 62:
                break
            kids = (lvl[:, None] * b + np.arange(b, dtype=np.int64)[None, :]).ravel()
            lvl = kids[power_free_mask(kids, self.n)]
            self.levels.append(lvl)

    @property
    def explicit_depth(self) -> int:
        return len(self.levels) - 1

    def members(self, k: int) -> np.ndarray:
        if k > self.explicit_depth:
            raise ValueError(f"level {k} is not held explicitly")
        return self.levels[k]

    def _explicit_count(self, j: int, M: int, r: int) -> int:
        arr = self.levels[j]
        if M == 1:
            return int(arr.size)
        if M <= HIST_MAX_MODULUS:
            h = self._hist.get((j, M))
            if h is None:
                h = np.bincount(arr % M, minlength=M)
                self._hist[(j, M)] = h
            return int(h[r])
        lo, hi = self.base ** (j - 1), self.base**j
        ncand = (hi - lo) // M + 1
        if ncand <= 4 * arr.size // 64:
            first = lo + ((r - lo) % M)
            cand = np.arange(first, hi, M, dtype=np.int64)
            pos = np.searchsorted(arr, cand)
            pos[pos >= arr.size] = arr.size - 1
            return int(np.count_nonzero(arr[pos] == cand))
        return int(np.count_nonzero(arr % M == r))

    # -------------------------------------------------------------- membership
    def is_member(self, x: int) -> bool:
        """Is x right-truncatable n-th-power-free in this base."""
        if x < 1:
            return False
        return self._member_at(x, _digits(x, self.base))

    def _member_at(self, x: int, k: int) -> bool:
        if k <= self.explicit_depth:
            arr = self.levels[k]
            i = int(arr.searchsorted(x))
            return i < arr.size and int(arr[i]) == x
        hit = self._member.get(x)
        if hit is None:
            hit = self._free(x) and self._member_at(x // self.base, k - 1)
            self._member[x] = hit
        return hit

    def _free(self, x: int) -> bool:
        if x >= self._pn_top:
            return is_power_free(x, self.n)
        for q in self._pn:
            if q > x:
                return True
            if x % q == 0:
                return False
        return True

    # -------------------------------------------------------------- recursion
    def _ensure_terms(self, limit: int) -> None:
        if limit > self._terms_limit:
            self._terms = _squarefree_terms(limit, self.n)
            self._terms_limit = limit

    def count(self, k: int, modulus: int = 1, residue: int = 0) -> int:
        """Number of k-digit members congruent to residue mod modulus."""
        self._ensure_terms(self.base**k)
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 10 * k + 1000))
        try:
            return self._count(k, modulus, residue % modulus)
        finally:
            sys.setrecursionlimit(old)

    def _count(self, j: int, M: int, r: int) -> int:
        if j <= self.explicit_depth:
            return self._explicit_count(j, M, r)
        key = (j, M, r)
        got = self._memo.get(key)
        if got is not None:
            return got
        b = self.base
        lo, hi = b ** (j - 1), b**j
        if (hi - lo) // M <= DIRECT_SCAN:
            first = lo + ((r - lo) % M)
            total = sum(1 for x in range(first, hi, M) if self._member_at(x, j))
            self._memo[key] = total
            return total
        total = 0
        member = self._member_at
        gcd = math.gcd
        for q, mu in self._terms:
            if q >= hi:
                break
            g = gcd(M, q)
            if r % g:
                continue
            L = M // g * q
            if q == 1:
                rr = r
            else:
                qq = q // g
                t = (-(r // g) * pow(M // g, -1, qq)) % qq
                rr = (r + M * t) % L
            # y = b*x + d with y == rr (mod L); split over d via y mod b
            if L * DIRECT_SCAN >= hi - lo:
                y = rr + ((lo - rr + L - 1) // L) * L if rr < lo else rr
                cnt = 0
                while y < hi:
                    if member(y // b, j - 1):
                        cnt += 1
                    y += L
                total += mu * cnt
                continue
            gb = gcd(b, L)
            M2 = L // gb
            inv = pow(b // gb, -1, M2) if M2 > 1 else 0
            for d in range(rr % gb, b, gb):
                r2 = ((rr - d) // gb * inv) % M2 if M2 > 1 else 0
                total += mu * self._count(j - 1, M2, r2)
        self._memo[key] = total
        return total

    # -------------------------------------------------------------- summary
    def level(self, k: int) -> tuple[int, int, int]:
        """(total, odd, even) for k-digit members."""
        if k <= self.explicit_depth:
            arr = self.levels[k]
            odd = int(np.count_nonzero(arr & 1))
            return int(arr.size), odd, int(arr.size) - odd
        total = self.count(k)
        odd = self.count(k, 2, 1)
        return total, odd, total - odd


def _digits(x: int, b: int) -> int:
    n = 0
    while x:
        x //= b
        n += 1
    return n
