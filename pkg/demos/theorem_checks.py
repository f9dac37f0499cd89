"""Finite checks behind the structural results about walks.

Each check returns a VerificationReport with witnesses; nothing here is a
proof, but every claim is verified over an explicit range.

Run: python demos/theorem_checks.py
"""
from walklab import theorems as th
from walklab.search import WalkPolicy

census = th.fibonacci_walk_census(WalkPolicy(10))
print("one-digit Fibonacci walks of length 2:", [w[1]["walk"] for w in census.witnesses])

for p in (2, 3, 5, 11):
    r = th.cunningham_gap(p)
    params, ev = r.witnesses[0]
    print(f"p={p}: binary ones appended {params['i']} and {params['i'] + 1} times give "
          f"{ev['terms']}, divisible by {ev['factors']}")

reports = [th.run_claim(c) for c in th.CLAIMS]
print()
print(th.summary_markdown(reports))
