"""The relation modulo k^2 and k^3, and the mod p^3 exploration that goes beyond it."""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import gmpy2

from app.bigmod import (
    Residue,
    mod_pow,
    power_sum_mod,
    power_sum_mod_periodic,
    sigma_mod_p2_split,
)
from app.congruences import mod_k_conditions
from app.errors import DomainError, TheoremViolationError
from app.primes import factorize, factorization_from_primes, is_prime
from app.quotients import wilson_quotient_mod

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuperPrimeCondition:
    p: int
    cond_i: bool
    cond_ii_lhs: Residue
    cond_ii_rhs: Residue
    passes: bool


@dataclass(frozen=True)
class SuperReport:
    k: int
    n: int
    modulus_power: int
    per_prime: tuple
    verdict: bool
    direct_check: Optional[bool] = None


def super_holds(n, k, e, cap=None):
    """Sigma_n(k) = (k+1)^n (mod k^e) for e in {2, 3}."""
    if n < 1 or k < 1:
        raise DomainError("n and k must be positive")
    if e not in (2, 3):
        raise DomainError(f"modulus power must be 2 or 3, got {e}")
    m = k ** e
    return power_sum_mod_periodic(n, k, m, cap=cap) == mod_pow(k + 1, n, m)


def mod_k2_conditions(n, k, factorization=None, direct=False, cap=None):
    """Conditions for the mod-k^2 relation; odd n uses the explicit classification.

    With ``direct`` the relation is also evaluated term by term and any
    disagreement raises TheoremViolationError.
    """
    if n < 1 or k < 1:
        raise DomainError("n and k must be positive")
    per_prime = ()
    if n % 2:
        verdict = k in (1, 2) if n == 1 else k == 1
    else:
        fac = factorization if factorization is not None else factorize(k)
        rows = []
        for p in fac.primes:
            m = p * p
            cond_i = n % (p - 1) == 0
            w = wilson_quotient_mod(p, p).value
            lhs = Residue.of(k // p + 1, m)
            rhs = Residue.of(p * ((n % p) * (w + 1) - 1), m)
            rows.append(SuperPrimeCondition(p, cond_i, lhs, rhs, cond_i and lhs == rhs))
        per_prime = tuple(rows)
        verdict = fac.is_squarefree and all(row.passes for row in rows)

    direct_check = None
    if direct:
        direct_check = super_holds(n, k, 2, cap=cap)
        if direct_check != verdict:
            raise TheoremViolationError(
                f"mod k^2 conditions say {verdict} but direct evaluation says {direct_check} at n={n}, k={k}")
    return SuperReport(k, n, 2, per_prime, verdict, direct_check)


def block_supercongruence_check(n, k, p, cap=None):
    """Sigma_n(k) = (k/p) Sigma_n(p) (mod p^2) for a solution k of the mod-k congruence."""
    if not is_prime(p) or k % p:
        raise DomainError(f"{p} must be a prime dividing {k}")
    if not mod_k_conditions(n, k).verdict:
        raise DomainError(f"(n, k) = ({n}, {k}) does not solve the congruence mod k")
    m = p * p
    split = sigma_mod_p2_split(n, k, p, cap=cap)
    periodic = power_sum_mod_periodic(n, k, m, cap=cap)
    if split != periodic:
        raise TheoremViolationError(f"block expansion disagrees with summation at n={n}, k={k}, p={p}")
    rhs = Residue.of((k // p) * power_sum_mod(n, p, m, cap=cap).value, m)
    return periodic == rhs


def power_of_two_family(n, d):
    """1 + 2^n = 3^n (mod 2^d); always true when 2^(d-1) | n."""
    if n < 1 or d < 1:
        raise DomainError("n and d must be positive")
    m = 1 << d
    return Residue.of(1 + mod_pow(2, n, m).value, m) == mod_pow(3, n, m)


@dataclass(frozen=True)
class CubeRow:
    p: int
    lhs: Residue
    rhs: Residue
    holds: bool


def cube_block_explore(n, k, cap=None):
    """Compare Sigma_n(k) with (k/p) Sigma_n(p) mod p^3 for each prime p | k.

    Exploration only: a mismatch while the mod-k^2 relation holds is logged
    as a finding, never raised.
    """
    rows = []
    for p in factorize(k).primes:
        m = p ** 3
        lhs = power_sum_mod_periodic(n, k, m, cap=cap)
        rhs = Residue.of((k // p) * power_sum_mod(n, p, m, cap=cap).value, m)
        rows.append(CubeRow(p, lhs, rhs, lhs == rhs))
    if any(not row.holds for row in rows) and super_holds(n, k, 2, cap=cap):
        log.warning("mod p^3 exploration: counterexample at n=%d, k=%d, primes %s",
                    n, k, [row.p for row in rows if not row.holds])
    return rows


def square_divisibility_explore(n_max, p=7, cap=None):
    """For n = 6, 12, ... <= n_max, whether p^2 divides Sigma_{n-1}(p)."""
    if n_max < 6:
        raise DomainError("bound must be at least 6")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    m = p * p
    return [(n, power_sum_mod(n - 1, p, m, cap=cap).value == 0) for n in range(6, n_max + 1, 6)]


@dataclass(frozen=True)
class ExponentSolution:
    """Even n solving the mod-k^2 relation: n = residue (mod modulus), n >= 2."""
    residue: int
    modulus: int

    def members(self, count):
        first = self.residue
        while first < 2:
            first += self.modulus
        return [first + i * self.modulus for i in range(count)]

    def __contains__(self, n):
        return n >= 2 and n % self.modulus == self.residue


def _crt(c1, m1, c2, m2):
    g = math.gcd(m1, m2)
    if (c2 - c1) % g:
        return None
    lcm = m1 // g * m2
    step = int(gmpy2.invert(m1 // g, m2 // g)) if m2 // g > 1 else 0
    c = (c1 + m1 * ((c2 - c1) // g * step % (m2 // g))) % lcm
    return c, lcm


def supercongruence_exponents(k, factorization=None):
    """All even n with Sigma_n(k) = (k+1)^n (mod k^2), as one residue class, or None.

    Condition (i) is folded in first; condition (ii) is then solved prime by
    prime in ascending order and the first infeasible prime ends the search,
    so W_p is only needed for primes before the first failure.
    """
    fac = factorization if factorization is not None else factorize(k)
    if not fac.is_squarefree:
        return None
    state = (0, math.lcm(2, *(p - 1 for p in fac.primes)))
    for p in fac.primes:
        t = k // p + 1
        if t % p:
            log.debug("k=%d fails condition (ii) at p=%d: p does not divide k/p + 1", k, p)
            return None
        target = (1 + t // p) % p
        slope = (wilson_quotient_mod(p, p).value + 1) % p
        if slope == 0:
            if target:
                log.debug("k=%d fails condition (ii) at p=%d for every n", k, p)
                return None
            continue
        state = _crt(*state, target * int(gmpy2.invert(slope, p)) % p, p)
        if state is None:
            log.debug("k=%d: condition (ii) at p=%d conflicts with earlier primes", k, p)
            return None
    return ExponentSolution(*state)


def classify_mod_k2(records):
    """(K, ExponentSolution or None) for each record: which even n give a mod-K^2 solution."""
    rows = []
    for record in records:
        fac = factorization_from_primes(record.K, record.primes)
        rows.append((record.K, supercongruence_exponents(record.K, fac)))
    return rows


def cube_candidates(records, members=4, cap=None):
    """Decide the mod-K^3 relation on the first few mod-K^2 solutions of each record."""
    rows = []
    for K, solution in classify_mod_k2(records):
        if solution is None:
            continue
        exponents = solution.members(members)
        for n in exponents:
            rows.append((K, n, super_holds(n, K, 3, cap=cap)))
    return rows


def binomial_cube_expansion_check(n, K):
    """(K+1)^n = 1 + nK + n(n-1)/2 K^2 (mod K^3)."""
    if n < 1 or K < 1:
        raise DomainError("n and K must be positive")
    m = K ** 3
    expansion = Residue.of(1 + n * K + n * (n - 1) // 2 * K * K, m)
    return mod_pow(K + 1, n, m) == expansion
