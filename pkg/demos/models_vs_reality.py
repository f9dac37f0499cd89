"""How well does a random model predict walk lengths?

The Cramér heuristic treats each candidate as prime with probability
1/ln(candidate).  We compare its expected walk length with a Monte-Carlo run
of the same model and with walks on the actual primes.

Run: python demos/models_vs_reality.py
"""
from walklab import analytic as an
from walklab import stochastic as st

print("expected length from a 1-digit start, ten candidate digits:")
for b in (2, 3, 5, 10):
    e = an.expected_length_series(an.SeriesParams(b, 1, 10, clamp=False))
    print(f"  base {b:>2}: {e:.4f}")

trials, seed = 200_000, 7
model = st.MODELS["refined-cramer"]()
mc = st.simulate(model, 1, trials, seed)
series = an.expected_length_series(an.SeriesParams(10, 1, 4, 10 / 4))
print(f"\nsurvivor walk over digits 1,3,7,9 (Cramér rule): series {series:.4f}, "
      f"simulated {mc.mean_length:.4f} +- {mc.standard_error:.4f}")

actual = st.MODELS["refined-greedy"]()
exact, freq = st.exact_tree_mean(actual, 1)
sim = st.simulate(actual, 1, trials, seed)
print(f"same walk on real primes: exact {exact:.4f}, simulated {sim.mean_length:.4f}")
print("digit shares on real primes:", {d: round(100 * f, 1) for d, f in freq.items()})
