"""The congruence 1^n + ... + k^n = (k+1)^n (mod k) and its Egyptian-fraction form."""
import logging
import math
from dataclasses import dataclass
from typing import Optional

from app import sieve
from app.bigmod import Residue, mod_pow, power_sum_mod, sigma_prime_mod
from app.config import BRUTE_FORCE_CAP, SIEVE_DEFAULT_BOUND
from app.errors import DomainError, OracleRangeError, TheoremViolationError
from app.primes import factorize

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExponentClass:
    """Stands for every positive multiple of ``multiple_of``."""
    multiple_of: int

    def __post_init__(self):
        if self.multiple_of < 1:
            raise DomainError(f"exponent class needs a positive generator, got {self.multiple_of}")

    @classmethod
    def parse(cls, text):
        prefix = "multiple-of:"
        if not text.startswith(prefix):
            raise DomainError(f"expected '{prefix}N', got {text!r}")
        digits = text[len(prefix):]
        if not digits.isdigit():
            raise DomainError(f"exponent class generator must be a positive integer, got {digits!r}")
        return cls(int(digits))

    def __str__(self):
        return f"multiple-of:{self.multiple_of}"


@dataclass(frozen=True)
class PrimeCondition:
    p: int
    cond_i: bool
    cond_ii: bool
    sigma_k_mod_p: Optional[Residue] = None  # (k/p) * Sigma_n(p) mod p


@dataclass(frozen=True)
class ConditionReport:
    k: int
    n: object  # int or ExponentClass
    squarefree: bool
    per_prime: tuple
    verdict: bool
    minimal_multiple: Optional[int] = None  # smallest member of an exponent class meeting (i)


def emc_congruence_holds(n, k, cap=None):
    """Direct evaluation of Sigma_n(k) = (k+1)^n (mod k)."""
    if n < 1 or k < 1:
        raise DomainError("n and k must be positive")
    cap = BRUTE_FORCE_CAP if cap is None else cap
    if k > cap:
        raise OracleRangeError(k, cap)
    return power_sum_mod(n, k, k, cap=cap) == mod_pow(k + 1, n, k)


def _factor(k, factorization):
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    return factorization if factorization is not None else factorize(k)


def mod_k_conditions(n, k, factorization=None):
    """Per-prime conditions (i) (p-1) | n and (ii) k/p + 1 = 0 (mod p)."""
    fac = _factor(k, factorization)
    is_class = isinstance(n, ExponentClass)
    if not is_class and n < 1:
        raise DomainError("n must be positive")
    generator = n.multiple_of if is_class else n
    per_prime = []
    for p in fac.primes:
        cond_i = generator % (p - 1) == 0
        cond_ii = (k // p + 1) % p == 0
        sigma_k = None
        if not is_class:
            sigma_k = Residue.of((k // p) * sigma_prime_mod(n, p).value, p)
        per_prime.append(PrimeCondition(p, cond_i, cond_ii, sigma_k))
    squarefree = fac.is_squarefree
    verdict = squarefree and all(c.cond_i and c.cond_ii for c in per_prime)
    minimal = None
    if is_class:
        minimal = math.lcm(generator, *(p - 1 for p in fac.primes))
    return ConditionReport(k, n, squarefree, tuple(per_prime), verdict, minimal)


def egyptian_condition(k, factorization=None):
    """k | 1 + sum(k/p for p | k): the Egyptian fraction congruence cleared of denominators."""
    fac = _factor(k, factorization)
    return (1 + sum(k // p for p in fac.primes)) % k == 0


def minimal_exponent(k, factorization=None):
    """LCM of p - 1 over primes p | k; every valid exponent is a multiple of it."""
    fac = _factor(k, factorization)
    if not fac.is_squarefree or not egyptian_condition(k, fac):
        raise DomainError(f"{k} does not satisfy the Egyptian fraction congruence")
    return math.lcm(*(p - 1 for p in fac.primes))


def valid_exponents(k, n_max, factorization=None):
    fac = _factor(k, factorization)
    if not egyptian_condition(k, fac):
        return []
    step = minimal_exponent(k, fac)
    return list(range(step, n_max + 1, step))


def product_sum_witness(k, subset, factorization=None):
    """The integer q with q * prod(S) = 1 + sum(k/p for p in S)."""
    fac = _factor(k, factorization)
    if not egyptian_condition(k, fac):
        raise DomainError(f"{k} does not satisfy the Egyptian fraction congruence")
    subset = sorted(set(subset))
    stray = [p for p in subset if p not in fac.primes]
    if stray:
        raise DomainError(f"{stray} do not divide {k}")
    q, r = divmod(1 + sum(k // p for p in subset), math.prod(subset))
    if r:
        raise TheoremViolationError(f"product-sum witness is not an integer for k={k}, S={subset}")
    return q


def _egyptian_mask(segment):
    return segment.squarefree & (segment.reciprocal_sum % segment.k == 0)


def egyptian_solutions(bound=SIEVE_DEFAULT_BOUND, workers=None):
    """All (k, r) with k <= bound passing the Egyptian fraction congruence."""
    return sieve.scan(bound, _egyptian_mask, workers=workers)


def search_solutions_by_prime_count(r, bound=SIEVE_DEFAULT_BOUND, workers=None):
    """Square-free k <= bound with exactly r prime factors solving the congruence, ascending.

    This is a bounded search. That r = 0..4 forces k = 1, 2, 6, 42, 1806 for
    every k is a theorem; the search only confirms it up to ``bound``.
    """
    if r < 0:
        raise DomainError("r must be >= 0")
    return [k for k, omega in egyptian_solutions(bound, workers) if omega == r]


def odd_exponent_solutions(n_max, k_max, cap=None):
    """Every (n, k) with odd n solving the congruence mod k; only k = 1 and k = 2 can appear.

    k = 2 solves it for every n (both sides are odd); ruling out n > 1 there
    takes the exact equation, see exact_solutions.
    """
    hits = []
    for n in range(1, n_max + 1, 2):
        for k in range(1, k_max + 1):
            if emc_congruence_holds(n, k, cap=cap):
                hits.append((n, k))
    return hits


def exact_solutions(n_max, k_max):
    """(n, k) with 1^n + ... + k^n = (k+1)^n exactly, for n <= n_max, k <= k_max."""
    hits = []
    for n in range(1, n_max + 1):
        total = 0
        for k in range(1, k_max + 1):
            total += k ** n
            right = (k + 1) ** n
            if total == right:
                hits.append((n, k))
            # Past k + 1 >= 2n the sum outgrows (k+1)^n for good
            elif total > right and k + 1 >= 2 * n:
                break
    unexpected = [hit for hit in hits if hit != (1, 2)]
    if unexpected:
        log.warning("Exact equation has non-trivial solutions %s", unexpected)
    return hits
