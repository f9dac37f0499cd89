"""Prime walks: append one digit at a time and stay prime for as long as possible.

Run: python demos/prime_walks.py
"""
from walklab.arith import Prime
from walklab.search import WalkPolicy, best_walks_over_range, enumerate_truncatable, longest_walk

policy = WalkPolicy(10)

# Every such walk read backwards is a chain of right-truncatable primes,
# and there are only finitely many of those.
lc = enumerate_truncatable(10, Prime())
print("right-truncatable primes by length:", lc.totals())
print("largest:", max(lc.members[lc.depth]))

for start in (3, 19, 409):
    w = longest_walk(start, Prime(), policy)
    print(f"\nlongest walk from {start} ({w.length} primes)")
    for v in w.values:
        print("   ", v)

# Appending 3 or 9 to a number that is 2 mod 3 keeps it 2 mod 3, so no
# candidate is ever divisible by 3.
s = best_walks_over_range(2, 10**4, Prime(), WalkPolicy(10, "append-right", (3, 9)),
                          start_filter=lambda x: x % 3 == 2)
print(f"\nappending only 3s and 9s to starts 2 mod 3 below 10^4: longest {s.max_length}, from {s.argmax}")
