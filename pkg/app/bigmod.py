"""Residues, modular powers and power-sum evaluators.

Every evaluator here has a brute-force twin: ``power_sum_mod`` is the oracle,
everything else is a faster route that the tests pin to it.
"""
import logging
from dataclasses import dataclass

import gmpy2

from app.config import BRUTE_FORCE_CAP
from app.errors import DomainError, InvalidModulusError, OracleRangeError
from app.primes import is_prime

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidModulusError(self.modulus)
        if not 0 <= self.value < self.modulus:
            raise DomainError(f"{self.value} is not a canonical residue mod {self.modulus}")

    @classmethod
    def of(cls, value, modulus):
        """Canonical representative of value mod modulus (negatives allowed)."""
        if modulus < 1:
            raise InvalidModulusError(modulus)
        return cls(value % modulus, modulus)

    def __int__(self):
        return self.value


def _check_modulus(m):
    if m < 1:
        raise InvalidModulusError(m)


def _cap(cap):
    return BRUTE_FORCE_CAP if cap is None else cap


def mod_pow(base, exp, m):
    _check_modulus(m)
    if exp < 0:
        raise DomainError(f"negative exponent {exp}")
    if m == 1:
        return Residue(0, 1)
    return Residue(int(gmpy2.powmod(base, exp, m)), m)


def _direct_sum(n, a, m):
    total = 0
    for j in range(1, a + 1):
        total += pow(j, n, m)
    return total % m


def power_sum_mod(n, a, m, cap=None):
    """(1^n + ... + a^n) mod m by summing every term."""
    _check_modulus(m)
    cap = _cap(cap)
    if a > cap:
        raise OracleRangeError(a, cap)
    if a <= 0:
        return Residue(0, m)
    return Residue(_direct_sum(n, a, m), m)


def power_sum_mod_periodic(n, k, m, cap=None):
    """Same value as power_sum_mod, for k of any size.

    j -> j^n mod m has period m, so Sigma_n(k) = (k // m) * Sigma_n(m) + Sigma_n(k mod m).
    Only one period (or k terms, if fewer) is iterated.
    """
    _check_modulus(m)
    cap = _cap(cap)
    periods, tail = divmod(k, m)
    needed = m if periods else tail
    if needed > cap:
        raise OracleRangeError(needed, cap, what=f"period of modulus {m}")
    if m == 1 or k <= 0:
        return Residue(0, m)
    running = 0
    tail_sum = 0
    for j in range(1, needed + 1):
        running += pow(j, n, m)
        if j == tail:
            tail_sum = running
    if not periods:
        return Residue(running % m, m)
    return Residue((periods * running + tail_sum) % m, m)


def _require_prime(p):
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")


def sigma_prime_mod(n, p):
    """Sigma_n(p) mod p: p - 1 when (p - 1) | n, else 0."""
    _require_prime(p)
    if n < 1:
        raise DomainError("n must be positive")
    return Residue(p - 1 if n % (p - 1) == 0 else 0, p)


def sigma_prime_mod_p2(n, p):
    """Sigma_n(p) mod p^2 as p - 1 - n p W_p, valid for (p - 1) | n, n >= 2 (n even at p = 2)."""
    _require_prime(p)
    if n < 2 or n % (p - 1):
        raise DomainError(f"need n >= 2 with {p - 1} | n, got n = {n}")
    if p == 2 and n % 2:
        raise DomainError("n must be even when p = 2")
    from app.quotients import wilson_quotient_mod

    w = wilson_quotient_mod(p, p).value
    return Residue.of(p - 1 - (n % p) * p * w, p * p)


def sigma_mod_p2_split(n, k, p, cap=None):
    """Sigma_n(k) mod p^2 from one block of p terms, for p exactly dividing k.

    Sigma_n(k) = a Sigma_n(p) + a(a - 1)/2 * n p Sigma_{n-1}(p)  (mod p^2), a = k/p.
    """
    _require_prime(p)
    if n < 1:
        raise DomainError("n must be positive")
    if k % p or k % (p * p) == 0:
        raise DomainError(f"{p} must divide {k} exactly once")
    m = p * p
    a = k // p
    half = a * (a - 1) // 2
    block = power_sum_mod(n, p, m, cap=cap).value
    lower = power_sum_mod(n - 1, p, p, cap=cap).value
    return Residue.of(a * block + half * (n % p) * p * lower, m)


def block_reduction_check(n, k, p, cap=None):
    """Sigma_n(k) = (k/p) Sigma_n(p) (mod p) for any positive n, k, p with p | k."""
    if n < 1 or k < 1 or p < 1:
        raise DomainError("n, k, p must be positive")
    if k % p:
        raise DomainError(f"{p} does not divide {k}")
    lhs = power_sum_mod_periodic(n, k, p, cap=cap)
    rhs = Residue.of((k // p) * power_sum_mod(n, p, p, cap=cap).value, p)
    return lhs == rhs


def factorial_mod(n, m):
    _check_modulus(m)
    acc = 1 % m
    for j in range(2, n + 1):
        acc = acc * j % m
        if not acc:
            break
    return Residue(acc, m)
