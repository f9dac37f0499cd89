"""Digit-append walks on primes, power-free numbers, squares and Fibonacci numbers.

Submodules: arith (predicates and digit operations), search (exact walk
search and truncatable enumeration), levelcount (per-length counts of
power-free truncatables), stochastic (seeded walk models), analytic
(expected lengths and exact bounds), theorems (finite checks of stated
results), reproduce (reference tables) and cli.
"""
__version__ = "0.1.0"
