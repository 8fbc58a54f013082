"""Prime generation by the sieve of Eratosthenes."""

from __future__ import annotations


def sieve_first_primes(k: int) -> list:
    """The first ``k`` primes, growing the sieve bound by doubling."""
    if k < 1:
        raise ValueError("k must be positive")
    bound = 64
    while True:
        is_prime = bytearray([1]) * (bound + 1)
        is_prime[0] = is_prime[1] = 0
        primes = []
        for n in range(2, bound + 1):
            if is_prime[n]:
                primes.append(n)
                if len(primes) == k:
                    return primes
                for m in range(n * n, bound + 1, n):
                    is_prime[m] = 0
        bound *= 2
