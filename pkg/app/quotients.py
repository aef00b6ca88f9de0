"""Fermat and Wilson quotients, and the Lerch and Eisenstein relations between them."""
import functools
import logging
from dataclasses import dataclass
from typing import NamedTuple

import gmpy2

from app.bigmod import Residue, factorial_mod, mod_pow
from app.config import WILSON_MAX_PRIME
from app.errors import DomainError, ResourceError, TheoremViolationError
from app.primes import is_prime

log = logging.getLogger(__name__)


def _require_prime(p):
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")


def _require_wilson_range(p):
    if p > WILSON_MAX_PRIME:
        raise ResourceError(p, WILSON_MAX_PRIME, what="Wilson quotient prime")


def fermat_quotient(p, j):
    """Exact q_p(j) = (j^(p-1) - 1) / p."""
    _require_prime(p)
    if j < 1 or j % p == 0:
        raise DomainError(f"q_{p}({j}) needs j >= 1 and {p} not dividing j")
    q, r = divmod(j ** (p - 1) - 1, p)
    if r:
        raise TheoremViolationError(f"Fermat's little theorem failed for p={p}, j={j}")
    return q


def fermat_quotient_mod(p, j):
    """q_p(j) mod p, read off j^(p-1) mod p^2."""
    _require_prime(p)
    if j % p == 0:
        raise DomainError(f"{p} divides {j}")
    power = mod_pow(j, p - 1, p * p).value
    if power % p != 1:
        raise TheoremViolationError(f"Fermat's little theorem failed for p={p}, j={j}")
    return Residue((power - 1) // p, p)


def wilson_quotient(p):
    """Exact W_p = ((p-1)! + 1) / p."""
    _require_prime(p)
    _require_wilson_range(p)
    q, r = divmod(int(gmpy2.fac(p - 1)) + 1, p)
    if r:
        raise TheoremViolationError(f"Wilson's theorem failed for p={p}")
    return q


@functools.lru_cache(maxsize=4096)
def wilson_quotient_mod(p, m):
    """W_p mod m from (p-1)! accumulated mod p*m; never builds the full factorial."""
    _require_prime(p)
    _require_wilson_range(p)
    if m < 1:
        raise DomainError(f"modulus must be >= 1, got {m}")
    f = factorial_mod(p - 1, p * m).value
    if (f + 1) % p:
        raise TheoremViolationError(f"Wilson's theorem failed for p={p}")
    return Residue(((f + 1) // p) % m, m)


@dataclass(frozen=True)
class QuotientPair:
    prime: int
    wilson: int
    fermat_sum_mod_p: Residue


def fermat_sum_mod(p):
    _require_prime(p)
    total = sum(fermat_quotient_mod(p, j).value for j in range(1, p))
    return Residue(total % p, p)


def quotient_pair(p):
    return QuotientPair(p, wilson_quotient(p), fermat_sum_mod(p))


class LerchResult(NamedTuple):
    lhs: Residue
    rhs: Residue
    holds: bool


def lerch_check(p):
    """Sum of q_p(j) over 1 <= j < p against W_p, both mod p (odd p only)."""
    if p == 2:
        raise DomainError("Lerch's formula is stated for odd primes")
    _require_prime(p)
    lhs = fermat_sum_mod(p)
    rhs = wilson_quotient_mod(p, p)
    if lhs != rhs:
        log.error("Lerch's formula failed at p=%d: %d != %d", p, lhs.value, rhs.value)
    return LerchResult(lhs, rhs, lhs == rhs)


def eisenstein_check(p, a, b):
    """q_p(ab) = q_p(a) + q_p(b) (mod p)."""
    _require_prime(p)
    if (a * b) % p == 0:
        raise DomainError(f"{p} divides {a}*{b}")
    left = fermat_quotient_mod(p, a * b).value
    right = (fermat_quotient_mod(p, a).value + fermat_quotient_mod(p, b).value) % p
    return left == right


def factorial_quotient_check(p):
    """q_p((p-1)!) = W_p (mod p) for odd p; only (p-1)! mod p^2 is needed."""
    if p == 2:
        raise DomainError("stated for odd primes")
    _require_prime(p)
    f = factorial_mod(p - 1, p * p).value
    return fermat_quotient_mod(p, f) == wilson_quotient_mod(p, p)
