"""Command-line front end: walklab <command> [options].

Exit codes: 0 success, 1 failed verification or reproduction, 2 usage error,
3 inconclusive (a primality or power-free test could not decide).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Any, Optional

from . import analytic as an
from . import reproduce as rp
from . import stochastic as st
from . import theorems as th
from .arith import DEFAULT_ROUNDS, InconclusiveError, Prime, parse_predicate
from .search import (WalkSearcher, best_walks_over_range, enumerate_truncatable, insert_anywhere_walk,
                     parse_policy)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
COMMANDS = ("search", "enumerate", "simulate", "analytic", "verify", "reproduce")
FORMATS = ("json", "csv", "markdown")

# reproducible targets beyond the numbered tables
EXTRA_TARGETS = {
    "counts": rp.level_count_table,
    "truncatable-primes": rp.truncatable_primes,
    "closed-forms": rp.closed_forms,
}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    base: int = 10
    predicate: str = "prime"
    policy: str = "append-right"
    start: Optional[int] = None
    start_max: Optional[int] = None
    start_mod: Optional[str] = None
    trials: int = 100_000
    seed: Optional[int] = None
    rounds: int = DEFAULT_ROUNDS
    n_max: Optional[int] = None
    fmt: str = "json"
    out: Optional[str] = None
    parallelism: int = 1
    model: Optional[str] = None
    start_digits: Optional[int] = None
    claim: Optional[str] = None
    target: Optional[str] = None
    variant: str = "all-digits"
    clamp: bool = False
    steps: bool = False
    weighted: bool = False
    strategy: str = "first-found"
    members: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.fmt not in FORMATS:
            raise UsageError(f"format must be one of {', '.join(FORMATS)}")
        if self.base < 2:
            raise UsageError("--base must be >= 2")
        if self.parallelism < 1:
            raise UsageError("--parallelism must be >= 1")
        if self.rounds < 1:
            raise UsageError("--rounds must be >= 1")
        if self.n_max is not None and self.n_max < 1:
            raise UsageError("--n-max must be >= 1")
        if self.command in ("search", "enumerate"):
            try:
                parse_predicate(self.predicate, self.rounds)
                parse_policy(self.policy, self.base)
            except ValueError as e:
                raise UsageError(str(e)) from None
        if self.start_mod is not None:
            _parse_mod(self.start_mod)
        if self.command == "search":
            if self.start is None and self.start_max is None:
                raise UsageError("search needs --start or --start-max")
            if self.start is not None and self.start < 1:
                raise UsageError("--start must be positive")
        if self.command == "simulate":
            if self.seed is None:
                raise UsageError("simulate needs --seed")
            if self.model not in st.MODELS:
                raise UsageError(f"--model must be one of {', '.join(st.MODELS)}")
            if self.trials < 1:
                raise UsageError("--trials must be >= 1")
            if self.start_digits is None and self.start_max is None:
                raise UsageError("simulate needs --start-digits or --start/--start-max")
        if self.command == "analytic":
            if self.variant not in an.VARIANTS:
                raise UsageError(f"--variant must be one of {', '.join(an.VARIANTS)}")
            if (self.start_digits or 1) < 1:
                raise UsageError("--start-digits must be >= 1")
        if self.command == "verify" and self.claim is None:
            raise UsageError("verify needs --claim (or --claim all)")
        if self.command == "verify" and self.claim != "all" and self.claim.lower() not in th.CLAIMS:
            raise UsageError(f"unknown claim {self.claim!r}; choose from all, {', '.join(th.CLAIMS)}")
        if self.command == "reproduce":
            if self.target is None:
                raise UsageError("reproduce needs a table id")
            if _target_key(self.target) is None:
                raise UsageError(f"unknown table {self.target!r}; choose from "
                                 f"{', '.join([*rp.TABLES, *EXTRA_TARGETS])}")


def _target_key(t: str) -> Optional[str]:
    for key in (*rp.TABLES, *EXTRA_TARGETS):
        if key.lower() == t.lower():
            return key
    return None


def _parse_mod(text: str) -> tuple[int, set[int]]:
    try:
        m, rs = text.split(":")
        mod = int(m)
        res = {int(r) % mod for r in rs.split(",")}
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--start-mod expects MOD:R1,R2,... (got {text!r})") from None
    if mod < 1:
        raise UsageError("--start-mod modulus must be positive")
    return mod, res


# ---------------------------------------------------------------- output

@dataclass
class Output:
    payload: dict
    rows: list[dict]
    markdown: str
    status: int = EXIT_OK
    csv_text: Optional[str] = None  # preformatted CSV, used instead of rows


def dumps_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def dumps_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        fields = list(rows[0])
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\r\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def _md_table(rows: list[dict]) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    out = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    out += ["| " + " | ".join(str(r[c]) for c in cols) + " |" for r in rows]
    return "\n".join(out)


def render(o: Output, fmt: str) -> str:
    if fmt == "json":
        return dumps_json(o.payload)
    if fmt == "csv":
        return o.csv_text if o.csv_text is not None else dumps_csv(o.rows)
    return o.markdown.rstrip("\n") + "\n"


# ---------------------------------------------------------------- commands

def _walk_output(walk, cfg: RunConfig, pred_name: str, policy_name: str) -> Output:
    payload = {"command": "search", "predicate": pred_name, "policy": policy_name, "base": cfg.base,
               "walk": walk.to_dict()}
    rows = []
    for i, v in enumerate(walk.values):
        pos, blk = walk.moves[i - 1] if i else ("", ())
        rows.append({"index": i, "value": str(v), "position": pos, "block": "".join(map(str, blk))})
    md = (f"Walk from {walk.start} ({pred_name}, {policy_name}): length {walk.length}"
          + (" (depth cap reached)" if walk.cap_reached else "") + "\n\n" + _md_table(rows))
    return Output(payload, rows, md)


def cmd_search(cfg: RunConfig) -> Output:
    pred = parse_predicate(cfg.predicate, cfg.rounds)
    policy = parse_policy(cfg.policy, cfg.base)
    cap = cfg.n_max or 64
    if cfg.start is not None and cfg.start_max is None:
        if policy.mode == "insert-anywhere" and isinstance(pred, Prime):
            walk = insert_anywhere_walk(cfg.start, cfg.rounds, cap, cfg.strategy, cfg.seed or 0, cfg.base)
        else:
            walk = WalkSearcher(pred, policy, cap).longest(cfg.start)
        return _walk_output(walk, cfg, pred.name, policy.describe())
    lo = cfg.start if cfg.start is not None else 1
    flt = None
    if cfg.start_mod:
        mod, res = _parse_mod(cfg.start_mod)
        flt = lambda x: x % mod in res  # noqa: E731
    summary = best_walks_over_range(lo, cfg.start_max, pred, policy, cap, flt)
    payload = {"command": "search", "predicate": pred.name, "policy": policy.describe(), "base": cfg.base,
               "start_range": [lo, cfg.start_max], "start_mod": cfg.start_mod, "summary": summary.to_dict()}
    rows = [{"start_digits": r, "starts": summary.starts_by_digits[r], "mean_length": m}
            for r, m in summary.mean_by_digits.items()]
    md = (f"Starts in [{lo}, {cfg.start_max}): longest walk has {summary.max_length} elements, from "
          f"{', '.join(map(str, summary.argmax))}\n\n" + _md_table(rows))
    return Output(payload, rows, md)


def cmd_enumerate(cfg: RunConfig) -> Output:
    pred = parse_predicate(cfg.predicate, cfg.rounds)
    lc = enumerate_truncatable(cfg.base, pred, cfg.n_max, parallelism=cfg.parallelism,
                               explicit_limit=rp.EXPLICIT_LIMIT if cfg.n_max and cfg.n_max > 20 else None)
    data = lc.to_dict()
    data["predicate"] = pred.name
    data["count"] = sum(lc.totals())
    data["depth"] = lc.depth
    if lc.members:
        top = max(lc.members)
        data["maximum"] = max(lc.members[top]) if lc.members[top] else None
        if cfg.members:
            data["members"] = {str(k): v for k, v in sorted(lc.members.items())}
    rows = [{"k": k, "total": t, "odd": o, "even": e} for k, t, o, e in lc.per_length]
    md = (f"Right-truncatable {pred.name} numbers in base {cfg.base}: {data['count']} in total, "
          f"depth {lc.depth}" + (f", largest {data['maximum']}" if data.get("maximum") else "")
          + "\n\n" + _md_table(rows))
    return Output({"command": "enumerate", "result": data}, rows, md)


def cmd_simulate(cfg: RunConfig) -> Output:
    model = st.MODELS[cfg.model]()
    rng = None
    if cfg.start_max is not None:
        rng = (cfg.start if cfg.start is not None else 1, cfg.start_max)
    res = st.simulate(model, cfg.start_digits, cfg.trials, cfg.seed, rng, cfg.parallelism)
    payload = {"command": "simulate", "model": cfg.model, "start_digits": cfg.start_digits,
               "start_range": list(rng) if rng else None, "seed": cfg.seed, "result": res.to_dict()}
    freq = [{"digit": d, "frequency": f} for d, f in res.digit_frequency.items()]
    md = (f"{cfg.model}: mean length {res.mean_length:.4f} (se {res.standard_error:.4f}, "
          f"variance {res.variance:.4f}) over {res.trials} trials, seed {cfg.seed}\n\n" + _md_table(freq))
    summary = [{"mean_length": res.mean_length, "standard_error": res.standard_error,
                "variance": res.variance, "trials": res.trials}]
    return Output(payload, summary, md)


def cmd_analytic(cfg: RunConfig) -> Output:
    r = cfg.start_digits or 1
    if cfg.weighted:
        value = an.expected_length_weighted(cfg.base, r, cfg.variant, cfg.clamp, cfg.n_max,
                                            count_start=not cfg.steps)
        what = f"weighted over starts below {cfg.base}^{r}"
    else:
        scale, exponent, nm = an.VARIANTS[cfg.variant]
        value = an.expected_length_series(an.SeriesParams(cfg.base, r, exponent, scale, cfg.n_max or nm,
                                                          clamp=cfg.clamp, count_start=not cfg.steps))
        what = f"from {r}-digit starts"
    payload = {"command": "analytic", "base": cfg.base, "start_digits": r, "variant": cfg.variant,
               "weighted": cfg.weighted, "clamp": cfg.clamp, "steps": cfg.steps, "n_max": cfg.n_max,
               "expected_length": value}
    row = {"base": cfg.base, "start_digits": r, "variant": cfg.variant, "expected_length": value}
    md = f"Expected length ({cfg.variant}, base {cfg.base}, {what}): {value:.6f}"
    return Output(payload, [row], md)


def cmd_verify(cfg: RunConfig) -> Output:
    ids = list(th.CLAIMS) if cfg.claim == "all" else [cfg.claim.lower()]
    reports = [th.run_claim(c) for c in ids]
    status = EXIT_OK
    if any(r.status == th.COUNTEREXAMPLE for r in reports):
        status = EXIT_FAIL
    elif any(r.status == th.INCONCLUSIVE for r in reports):
        status = EXIT_INCONCLUSIVE
    payload = {"command": "verify", "reports": [r.to_dict() for r in reports]}
    rows = [{"claim_id": r.claim_id, "status": r.status, "witnesses": len(r.witnesses)} for r in reports]
    return Output(payload, rows, th.summary_markdown(reports), status)


def cmd_reproduce(cfg: RunConfig) -> Output:
    key = _target_key(cfg.target)
    if key in EXTRA_TARGETS:
        res = EXTRA_TARGETS[key]()
    else:
        res = rp.reproduce(key, cfg.trials, cfg.seed or 0, cfg.parallelism)
    payload = {"command": "reproduce", "trials": cfg.trials if key in rp.MC_TABLES else None,
               "seed": (cfg.seed or 0) if key in rp.MC_TABLES else None, "table": res.to_dict()}
    return Output(payload, [], res.to_markdown(), EXIT_OK if res.ok else EXIT_FAIL, res.to_csv())


DISPATCH = {"search": cmd_search, "enumerate": cmd_enumerate, "simulate": cmd_simulate,
            "analytic": cmd_analytic, "verify": cmd_verify, "reproduce": cmd_reproduce}


def run(cfg: RunConfig) -> int:
    """Validate, dispatch, write the rendered result; returns the exit code."""
    try:
        cfg.validate()
    except UsageError as e:
        print(f"walklab: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        o = DISPATCH[cfg.command](cfg)
    except InconclusiveError as e:
        print(f"walklab: inconclusive: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except ValueError as e:
        print(f"walklab: {e}", file=sys.stderr)
        return EXIT_USAGE
    text = render(o, cfg.fmt)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return o.status


# ---------------------------------------------------------------- argument parsing

def _default_threads() -> int:
    raw = os.environ.get("WALKLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="walklab", description="Digit-append walks: search, count, simulate, verify.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", dest="fmt", choices=FORMATS, default="json")
        sp.add_argument("--out", help="write here instead of stdout")
        sp.add_argument("--parallelism", type=int, default=_default_threads(),
                        help="worker processes (default $WALKLAB_THREADS or 1)")

    def walk_args(sp):
        sp.add_argument("--base", type=int, default=10)
        sp.add_argument("--pred", dest="predicate", default="prime",
                        help="prime, squarefree, powerfree:N, square, fibonacci")
        sp.add_argument("--rounds", type=int, default=DEFAULT_ROUNDS, help="Miller-Rabin rounds above the deterministic range")

    sp = sub.add_parser("search", help="longest walk from a start, or the best over a start range")
    walk_args(sp)
    sp.add_argument("--policy", default="append-right",
                    help="append-right[:digits], append-exact:N, append-atmost:N, insert-anywhere")
    sp.add_argument("--start", type=int, help="single start, or range low end with --start-max")
    sp.add_argument("--start-max", type=int, help="exclusive upper end of the start range")
    sp.add_argument("--start-mod", help="restrict range starts, e.g. 3:2")
    sp.add_argument("--n-max", type=int, help="walk length cap (default 64)")
    sp.add_argument("--strategy", choices=("first-found", "random"), default="first-found")
    sp.add_argument("--seed", type=int)
    common(sp)

    sp = sub.add_parser("enumerate", help="right-truncatable members by length")
    walk_args(sp)
    sp.add_argument("--n-max", type=int, help="largest digit count (default: until the tree dies out)")
    sp.add_argument("--members", action="store_true", help="include member lists in JSON")
    common(sp)

    sp = sub.add_parser("simulate", help="Monte-Carlo walk model")
    sp.add_argument("--model", required=True, choices=sorted(st.MODELS))
    sp.add_argument("--start-digits", type=int)
    sp.add_argument("--start", type=int, help="start range low end (with --start-max)")
    sp.add_argument("--start-max", type=int)
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, required=True)
    common(sp)

    sp = sub.add_parser("analytic", help="expected walk length under the probabilistic model")
    sp.add_argument("--base", type=int, default=10)
    sp.add_argument("--start-digits", type=int, default=1)
    sp.add_argument("--variant", default="all-digits", choices=list(an.VARIANTS))
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--clamp", action="store_true", help="cap step probabilities at 1")
    sp.add_argument("--steps", action="store_true", help="count steps instead of elements")
    sp.add_argument("--weighted", action="store_true", help="average over all starts below base^start-digits")
    common(sp)

    sp = sub.add_parser("verify", help="run a theorem-bench claim")
    sp.add_argument("--claim", required=True, help="claim id or 'all'")
    common(sp)

    sp = sub.add_parser("reproduce", help="recompute a reference table and diff it")
    sp.add_argument("target", help=", ".join([*rp.TABLES, *EXTRA_TARGETS]))
    sp.add_argument("--trials", type=int, default=rp.DEFAULT_TRIALS)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in fields and v is not None})


def main(argv: Optional[list[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
