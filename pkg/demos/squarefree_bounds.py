"""Square-free walks grow forever with high probability, yet their expected
length from an empty start is finite and can be pinned down exactly.

The expectation is sum_k L_k / b^k where L_k counts right-truncatable
square-free numbers with k digits.  Summing exact counts and bounding the
tail through a parity recurrence gives a rational interval.

Run: python demos/squarefree_bounds.py   (about 10 s)
"""
import math

from walklab import analytic as an
from walklab.arith import PowerFree
from walklab.search import enumerate_truncatable

counts = enumerate_truncatable(2, PowerFree(2), 40)
print("base 2 counts:", counts.totals()[:12], "...", counts.totals()[-1])
iv = an.tail_bounded_expectation(counts, 2, 40)
print(f"E_2 in [{iv.lower}, {iv.upper}]")
print(f"     = [{float(iv.lower):.10f}, {float(iv.upper):.10f}]")

counts10 = enumerate_truncatable(10, PowerFree(2), 8)
iv10 = an.tail_bounded_expectation(counts10, 10, 8, offset=1)
print("\nbase 10 counts:", counts10.totals())
print("E_10 in [%s, %s]" % iv10.render(9))

p = 6 / math.pi**2
mean, var = an.geometric_expectation(p)
print(f"\nindependent-digit model: mean extra steps {mean:.4f}, variance {var:.4f}")
print(f"chance of an infinite walk is at least {1 - an.fixed_point(p):.6f}")
