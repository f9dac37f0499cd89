"""Closed forms, expectation series and exact-rational tail bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

Exponent = Union[int, str, Callable[[int], int]]


# ---------------------------------------------------------------- expectation series

def _exponent_fn(exponent: Exponent, b: int) -> Callable[[int], int]:
    if callable(exponent):
        return exponent
    if exponent == "anywhere":
        return lambda k: b * (k + 1) - 1 - k
    if isinstance(exponent, int) and exponent >= 1:
        return lambda k: exponent
    raise ValueError(f"bad exponent {exponent!r}")


def step_probability(k: int, b: int, scale: float = 1.0, exponent: Exponent = None, clamp: bool = True) -> float:
    """Chance that a k-digit value has at least one successful extension.

    Each of e(k) candidates succeeds independently with probability
    scale/(k ln b).  With clamp, that probability is capped at 1.
    """
    e = _exponent_fn(b if exponent is None else exponent, b)(k)
    q = 1.0 - scale / (k * math.log(b))
    if clamp and q < 0:
        q = 0.0
    return 1.0 - q**e


@dataclass(frozen=True)
class SeriesParams:
    b: int
    r: int = 1
    exponent: Exponent = None  # default: b candidates per step
    scale: float = 1.0
    n_max: int = 10_000
    eps: float = 1e-14
    clamp: bool = True
    count_start: bool = True  # False: count steps, not elements


def expected_length_series(params: SeriesParams) -> float:
    """Sum over n >= r of prod_{k=r}^{n-1} f(k), f the step probability at k digits.

    The n = r term is the empty product (the start itself); count_start=False
    drops it, giving the expected number of steps. Terms stop after n = n_max
    or once the running product falls below eps.
    """
    p = params
    if p.r < 1 or p.n_max < 1:
        raise ValueError("need r >= 1 and n_max >= 1")
    exponent = p.b if p.exponent is None else p.exponent
    total, prod = 0.0, 1.0
    for n in range(p.r, max(p.n_max, p.r) + 1):
        total += prod
        prod *= step_probability(n, p.b, p.scale, exponent, p.clamp)
        if abs(prod) < p.eps:
            break
    return total if p.count_start else total - 1.0


VARIANTS = {
    # name: (scale, exponent, default n_max)
    "all-digits": (1.0, None, 10_000),
    "four-digits": (10 / 4, 4, 10_000),
    "two-digits": (10 / 2, 2, 10_000),
    "anywhere": (1.0, "anywhere", 1000),
}


def start_weights(b: int, s: int) -> list[float]:
    """w_r = s(b-1) b^(r-1) / (r b^s): share of primes below b^s with r digits."""
    return [s * (b - 1) / r * float(b) ** (r - 1 - s) for r in range(1, s + 1)]


def expected_length_weighted(b: int, s: int, variant: str = "all-digits", clamp: bool = True,
                             n_max: Optional[int] = None, exponent: Exponent = None,
                             count_start: bool = True) -> float:
    """Start-length weighted expectation: sum_r w_r E_r with w_r from start_weights.

    exponent overrides the variant's candidate count (e.g. a fixed 10 for
    every base).
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    scale, default_exp, nm = VARIANTS[variant]
    exponent = default_exp if exponent is None else exponent
    nm = nm if n_max is None else n_max
    total = 0.0
    for r, w in enumerate(start_weights(b, s), start=1):
        if w == 0.0:
            continue
        total += w * expected_length_series(SeriesParams(b, r, exponent, scale, nm, 1e-14, clamp, count_start))
    return total


# ---------------------------------------------------------------- geometric models

def geometric_expectation(p: float) -> tuple[float, float]:
    """Mean and variance of the number of successes before the first failure."""
    if not 0 <= p < 1:
        raise ValueError("need 0 <= p < 1")
    return p / (1 - p), p / (1 - p) ** 2


SQUAREFREE_DENSITY = 6 / math.pi**2
FOURTH_FREE_DENSITY = 90 / math.pi**4
ODD_NON5_SQUAREFREE = 25 / (3 * math.pi**2)


def refined_squarefree_expectation() -> float:
    """2p/(1-p) with p = 25/(3 pi^2): two digits per successful round."""
    return 2 * geometric_expectation(ODD_NON5_SQUAREFREE)[0]


def pk_sequence(p: float, k_max: int, digits: int = 10) -> list[float]:
    """P_1 = (1-p)^b, P_{k+1} = (1-p+p P_k)^b."""
    if not 0 < p < 1:
        raise ValueError("need 0 < p < 1")
    out = [(1 - p) ** digits]
    while len(out) < k_max:
        out.append((1 - p + p * out[-1]) ** digits)
    return out


def fixed_point(p: float, tol: float = 1e-15, max_iter: int = 10**6, digits: int = 10) -> float:
    """Limit of the P_k recursion by direct iteration."""
    x = (1 - p) ** digits
    for _ in range(max_iter):
        y = (1 - p + p * x) ** digits
        if abs(y - x) < tol:
            return y
        x = y
    raise ArithmeticError("fixed-point iteration did not converge")


def fermat_heuristic(tail_tol: float = 1e-9) -> float:
    """sum_n 1/ln(2^(2^n)+1), stopped once the remaining terms are below tail_tol."""
    total, n = 0.0, 0
    while True:
        m = 2**n
        term = 1.0 / (m * math.log(2) + math.log1p(2.0 ** -m))
        total += term
        # remaining terms are below 2^-(n+1)/ln 2 each, halving
        if 2.0 ** (-n) / math.log(2) < tail_tol:
            return total
        n += 1


def fermat_heuristic_approx() -> float:
    """2/ln 2: the sum with each log(2^(2^n)+1) replaced by 2^n ln 2."""
    return 2 / math.log(2)


# ---------------------------------------------------------------- exact tail bounds

@dataclass(frozen=True)
class BoundInterval:
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("lower exceeds upper")

    def render(self, places: int) -> tuple[str, str]:
        return _fmt(self.lower, places), _fmt(self.upper, places)

    def to_dict(self) -> dict:
        return {"lower": f"{self.lower.numerator}/{self.lower.denominator}",
                "upper": f"{self.upper.numerator}/{self.upper.denominator}",
                "lower_float": float(self.lower), "upper_float": float(self.upper)}


def _fmt(x: Fraction, places: int) -> str:
    """Decimal rendering truncated (not rounded) to `places` digits."""
    sign = "-" if x < 0 else ""
    x = abs(x)
    whole = x.numerator // x.denominator
    frac = (x - whole) * 10**places
    return f"{sign}{whole}.{int(frac):0{places}d}"


def partial_sum(counts, base: int, m: int) -> Fraction:
    """sum_{k<=m} L_k / b^k as an exact rational. counts: LevelCounts or {k: (total, odd, even)}."""
    rows = _rows(counts)
    missing = [k for k in range(1, m + 1) if k not in rows]
    if missing:
        raise ValueError(f"counts missing levels {missing[:5]}")
    return sum((Fraction(rows[k][0], base**k) for k in range(1, m + 1)), Fraction(0))


def _rows(counts) -> dict[int, tuple[int, int, int]]:
    if isinstance(counts, dict):
        return counts
    return {k: (t, o, e) for k, t, o, e in counts.per_length}


def parity_tail_coefficients(matrix: Sequence[Sequence[int]], base: int) -> tuple[Fraction, Fraction]:
    """Coefficients (c_O, c_E) with sum_{k>m} L_k/b^k <= (c_O O_m + c_E E_m)/b^m.

    matrix bounds (O_{k+1}, E_{k+1}) <= A (O_k, E_k) entrywise; the tail is
    then 1^T (A/b)(I - A/b)^{-1} applied to the level-m parity vector.
    """
    (a, bb), (c, d) = [[Fraction(v, base) for v in row] for row in matrix]
    # (I - A/b)^{-1}
    det = (1 - a) * (1 - d) - bb * c
    if det <= 0:
        raise ValueError("recurrence does not give a convergent tail")
    inv = [[(1 - d) / det, bb / det], [c / det, (1 - a) / det]]
    prod = [[a * inv[0][0] + bb * inv[1][0], a * inv[0][1] + bb * inv[1][1]],
            [c * inv[0][0] + d * inv[1][0], c * inv[0][1] + d * inv[1][1]]]
    return prod[0][0] + prod[1][0], prod[0][1] + prod[1][1]


# Parity recurrences for square-free truncatables (rows: odd, even).
SQUAREFREE_RECURRENCES = {
    2: ((1, 1), (1, 0)),   # odd child from either parity, even child only from odd
    10: ((5, 5), (3, 2)),
}

# Coefficient sets for fourth-power-free tails: sum_i c_i L_{m+i}/b^{m+i}.
FOURTH_FREE_TAIL = {
    2: (Fraction(1), Fraction(4), Fraction(8), Fraction(16)),
    10: (Fraction(1, 125), Fraction(52, 125), Fraction(24, 5), Fraction(16)),
}


def tail_bounded_expectation(counts, base: int, m: int, recurrence: str = "squarefree",
                             relax: bool = True, offset: int = 0,
                             matrix: Optional[Sequence[Sequence[int]]] = None) -> BoundInterval:
    """Exact interval for sum_k L_k / b^k from counts through level m.

    recurrence "squarefree": tail from the parity recurrence matrix; with relax
    the bound uses the looser max(c_O, c_E) * L_m, otherwise
    c_O O_m + c_E E_m.  recurrence "fourth-free": tail from four further levels
    with the coefficient set in FOURTH_FREE_TAIL.  offset adds a constant (the
    length-1 contribution when a walk is counted from an empty start).
    """
    rows = _rows(counts)
    lower = partial_sum(rows, base, m) + offset
    if recurrence == "squarefree":
        mat = matrix or SQUAREFREE_RECURRENCES.get(base)
        if mat is None:
            raise ValueError(f"no recurrence for base {base}")
        if m not in rows:
            raise ValueError("insufficient parity data")
        t, o, e = rows[m]
        c_o, c_e = parity_tail_coefficients(mat, base)
        tail = (max(c_o, c_e) * t if relax else c_o * o + c_e * e) / Fraction(base**m)
    elif recurrence == "fourth-free":
        coefs = FOURTH_FREE_TAIL.get(base)
        if coefs is None:
            raise ValueError(f"no fourth-free tail for base {base}")
        need = [m + i for i in range(len(coefs))]
        if any(k not in rows for k in need):
            raise ValueError(f"fourth-free tail needs levels {need}")
        tail = sum((c * Fraction(rows[k][0], base**k) for c, k in zip(coefs, need)), Fraction(0))
    else:
        raise ValueError(f"unknown recurrence {recurrence!r}")
    return BoundInterval(lower, lower + tail)
