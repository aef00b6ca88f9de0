"""Primality, prime lists and factorization."""
import bisect
import logging
import threading
from dataclasses import dataclass

import gmpy2
import numpy as np

from app.config import (
    PRIMALITY_BASES,
    PRIMALITY_DETERMINISTIC_BOUND,
    TRIAL_DIVISION_LIMIT,
)
from app.errors import DomainError, IncompleteFactorizationError

log = logging.getLogger(__name__)

_SMALL_PRIME_LIMIT = 1000

def sieve_flags(limit):
    """Boolean numpy array of length limit + 1, True at primes."""
    if limit < 2:
        return np.zeros(max(limit + 1, 0), dtype=bool)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, int(gmpy2.isqrt(limit)) + 1, 2):
        if flags[p]:
            flags[p * p::2 * p] = False
    return flags


class PrimeCache:
    """Holds the largest prime list sieved so far; smaller limits are slices of it."""

    def __init__(self):
        self.lock = threading.Lock()
        self.limit = 1
        self.primes = []

    def primes_up_to(self, limit):
        with self.lock:
            if limit <= self.limit:
                if limit == self.limit:
                    return self.primes
                return self.primes[:bisect.bisect_right(self.primes, limit)]
        primes = np.flatnonzero(sieve_flags(limit)).tolist()
        with self.lock:
            if limit > self.limit:
                self.limit = limit
                self.primes = primes
        log.debug("Sieved %d primes up to %d", len(primes), limit)
        return primes


_cache = PrimeCache()


def primes_up_to(limit):
    """All primes <= limit as a list of Python ints (memoized)."""
    return _cache.primes_up_to(limit)


_SMALL_PRIMES = primes_up_to(_SMALL_PRIME_LIMIT)


def is_prime(p):
    """Deterministic below PRIMALITY_DETERMINISTIC_BOUND, strong-probable-prime beyond."""
    if p < 2:
        return False
    for q in _SMALL_PRIMES:
        if p == q:
            return True
        if p % q == 0:
            return False
    if p < _SMALL_PRIME_LIMIT * _SMALL_PRIME_LIMIT:
        return True
    return all(gmpy2.is_strong_prp(p, a) for a in PRIMALITY_BASES)


def is_prime_certain(p):
    """True when is_prime(p) is a proof rather than a probable-prime verdict."""
    return p < PRIMALITY_DETERMINISTIC_BOUND


@dataclass(frozen=True)
class PrimeFactorization:
    number: int
    factors: tuple = ()  # ((prime, multiplicity), ...) with primes ascending

    def __post_init__(self):
        previous = 1
        product = 1
        for prime, mult in self.factors:
            if prime <= previous or mult < 1:
                raise DomainError(f"malformed factorization of {self.number}: {self.factors}")
            previous = prime
            product *= prime ** mult
        if product != self.number:
            raise DomainError(f"factors {self.factors} multiply to {product}, not {self.number}")

    @property
    def primes(self):
        return [p for p, _ in self.factors]

    @property
    def is_squarefree(self):
        return all(mult == 1 for _, mult in self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)


def _collect(found):
    counts = {}
    for p in found:
        counts[p] = counts.get(p, 0) + 1
    return tuple(sorted(counts.items()))


def factorize(k, hints=(), trial_limit=TRIAL_DIVISION_LIMIT):
    """Factor k by dividing out hinted primes, then trial division, then primality.

    Raises IncompleteFactorizationError when a composite cofactor has no
    prime factor below trial_limit.
    """
    if k < 1:
        raise DomainError(f"factorize needs k >= 1, got {k}")
    found = []
    rest = k
    for h in sorted(set(hints)):
        if h < 2 or rest % h != 0:
            raise DomainError(f"hint {h} does not divide {k}")
        if not is_prime(h):
            raise DomainError(f"hint {h} is not prime")
        while rest % h == 0:
            found.append(h)
            rest //= h

    if rest > 1 and is_prime(rest):
        found.append(rest)
        rest = 1
    if rest > 1:
        for p in primes_up_to(min(trial_limit, int(gmpy2.isqrt(rest)))):
            if p * p > rest:
                break
            if rest % p:
                continue
            while rest % p == 0:
                found.append(p)
                rest //= p
            if rest > 1 and is_prime(rest):
                found.append(rest)
                rest = 1
                break
    if rest > 1:
        if is_prime(rest):
            found.append(rest)
        else:
            partial = _collect(found)
            raise IncompleteFactorizationError(k, partial, rest)
    return PrimeFactorization(k, _collect(found))


def factorization_from_primes(k, primes):
    """Square-free factorization of k over the given primes, validated."""
    return PrimeFactorization(k, tuple((p, 1) for p in sorted(primes)))
