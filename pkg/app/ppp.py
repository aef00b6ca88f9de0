"""Primary pseudoperfect numbers: search, record verification, Zagier's characterizations."""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

from app import sieve
from app.config import BRUTE_FORCE_CAP, SIEVE_DEFAULT_BOUND, ZAGIER_BRUTE_FORCE_MAX
from app.congruences import (
    egyptian_condition,
    emc_congruence_holds,
    minimal_exponent,
    mod_k_conditions,
)
from app.errors import DomainError
from app.primes import factorization_from_primes, factorize, is_prime, is_prime_certain
from app.records import load_rows

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PppRecord:
    K: int
    r: int
    primes: tuple
    minimal_exponent: int

    @classmethod
    def from_primes(cls, K, primes):
        fac = factorization_from_primes(K, primes)
        if K <= 1 or not _egyptian_equality(K, fac.primes):
            raise DomainError(f"{K} is not primary pseudoperfect")
        return cls(K, len(fac), tuple(fac.primes), math.lcm(*(p - 1 for p in fac.primes)))


def _egyptian_equality(K, primes):
    return 1 + sum(K // p for p in primes) == K


def is_primary_pseudoperfect(K, factorization=None):
    """1/K + sum(1/p for p | K) = 1, checked as 1 + sum(K/p) = K."""
    if K < 1:
        raise DomainError(f"K must be positive, got {K}")
    if K == 1:
        return False
    fac = factorization if factorization is not None else factorize(K)
    return _egyptian_equality(K, fac.primes)


def _ppp_mask(segment):
    return (segment.k > 1) & (segment.reciprocal_sum == segment.k)


def ppp_search(limit=SIEVE_DEFAULT_BOUND, workers=None):
    records = []
    for K, _ in sieve.scan(limit, _ppp_mask, workers=workers):
        records.append(PppRecord.from_primes(K, factorize(K).primes))
    return records


def _separator_mask(segment):
    egyptian = segment.squarefree & (segment.reciprocal_sum % segment.k == 0)
    return egyptian & (segment.k > 1) & (segment.reciprocal_sum != segment.k)


def egyptian_vs_ppp_scan(limit=SIEVE_DEFAULT_BOUND, workers=None):
    """k > 1 solving the Egyptian fraction congruence without being primary pseudoperfect."""
    separators = [k for k, _ in sieve.scan(limit, _separator_mask, workers=workers)]
    for k in separators:
        log.warning("k=%d satisfies the Egyptian fraction congruence but is not primary pseudoperfect", k)
    return separators


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class RecordVerification:
    K: int
    primes: tuple
    checks: tuple
    minimal_exponent: Optional[int]
    findings: tuple = ()

    @property
    def passed(self):
        return all(check.passed for check in self.checks)


def verify_record(K, claimed_primes, claimed_exponent=None):
    """Check a claimed primary pseudoperfect number against its factor list.

    Works for K of any size: nothing is factored, only the claims are tested.
    Every sub-check is reported on its own.
    """
    primes = tuple(claimed_primes)
    checks = []
    findings = []
    for p in primes:
        prime = is_prime(p)
        checks.append(Check(f"prime {p}", prime))
        if prime and not is_prime_certain(p):
            findings.append(f"{p} is only a strong probable prime")
    checks.append(Check("distinct factors", len(set(primes)) == len(primes)))
    checks.append(Check("product equals K", math.prod(primes) == K, f"product {math.prod(primes)}"))
    checks.append(Check("K > 1", K > 1))
    total = 1 + sum(K // p for p in primes if p and K % p == 0)
    checks.append(Check("1 + sum K/p = K", total == K, f"1 + sum K/p = {total}"))

    exponent = math.lcm(*(p - 1 for p in primes)) if primes and all(p >= 2 for p in primes) else None
    if claimed_exponent is not None:
        checks.append(Check("minimal exponent", exponent == claimed_exponent,
                            f"computed {exponent}, claimed {claimed_exponent}"))
    result = RecordVerification(K, primes, tuple(checks), exponent, tuple(findings))
    for check in result.checks:
        if not check.passed:
            log.info("Record %d failed check %r %s", K, check.name, check.detail)
    return result


@dataclass(frozen=True)
class ZagierVerdict:
    k: int
    cond_fermat_all_a: bool
    cond_squarefree_pm1: bool
    in_chain: bool
    cond_at_most_four_emc: bool
    cond_small_ppp: bool
    brute_force: bool = False  # condition (i) was decided over every residue a

    @property
    def conditions(self):
        return (self.cond_fermat_all_a, self.cond_squarefree_pm1, self.in_chain,
                self.cond_at_most_four_emc, self.cond_small_ppp)

    @property
    def agree(self):
        return len(set(self.conditions)) == 1


def fermat_all_residues(k):
    """a^(k+1) = a (mod k) for every a in [0, k)."""
    return all(pow(a, k + 1, k) == a for a in range(k)) if k > 1 else True


def _in_chain(primes, squarefree):
    if not squarefree:
        return False
    product = 1
    for p in primes:
        if p != product + 1:
            return False
        product *= p
    return True


def zagier_check(k, brute_max=ZAGIER_BRUTE_FORCE_MAX):
    """All five characterizations of {1, 2, 6, 42, 1806} evaluated for k."""
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    fac = factorize(k)
    squarefree_pm1 = fac.is_squarefree and all(k % (p - 1) == 0 for p in fac.primes)
    brute = k <= brute_max
    fermat = fermat_all_residues(k) if brute else squarefree_pm1
    egyptian = egyptian_condition(k, fac)
    verdict = ZagierVerdict(
        k=k,
        cond_fermat_all_a=fermat,
        cond_squarefree_pm1=squarefree_pm1,
        in_chain=_in_chain(fac.primes, fac.is_squarefree),
        cond_at_most_four_emc=len(fac) <= 4 and egyptian,
        cond_small_ppp=k == 1 or (len(fac) <= 4 and is_primary_pseudoperfect(k, fac)),
        brute_force=brute,
    )
    if not verdict.agree:
        log.error("Zagier characterizations disagree at k=%d: %s", k, verdict.conditions)
    return verdict


@dataclass(frozen=True)
class ZagierChain:
    products: tuple
    primes: tuple
    stop: int
    stop_factors: tuple = field(default=())


def zagier_chain_detail():
    """Grow p_i = p_1 ... p_(i-1) + 1 from the empty product until it is composite."""
    product = 1
    products = [1]
    primes = []
    while is_prime(product + 1):
        primes.append(product + 1)
        product *= product + 1
        products.append(product)
    stop = product + 1
    return ZagierChain(tuple(products), tuple(primes), stop, factorize(stop).factors)


def zagier_chain():
    return list(zagier_chain_detail().products)


def ppp_solve_check(limit=SIEVE_DEFAULT_BOUND, cap=None, workers=None):
    """Every primary pseudoperfect K <= limit solves the congruence at its minimal exponent."""
    cap = BRUTE_FORCE_CAP if cap is None else cap
    ok = True
    for record in ppp_search(limit, workers=workers):
        n = record.minimal_exponent
        if record.K <= cap:
            holds = emc_congruence_holds(n, record.K, cap=cap)
        else:
            holds = mod_k_conditions(n, record.K).verdict
        if not holds:
            log.error("K=%d does not solve the congruence at n=%d", record.K, n)
            ok = False
    return ok


def pseudoperfect_witness(K, factorization=None):
    """Proper divisors 1 and K/p (p | K) summing to K; None for K = 2."""
    if not is_primary_pseudoperfect(K, factorization):
        raise DomainError(f"{K} is not primary pseudoperfect")
    if K == 2:
        return None
    fac = factorization if factorization is not None else factorize(K)
    return sorted([1] + [K // p for p in fac.primes])


def load_records(path=None, strict=True):
    """PppRecords (K > 1) from the records file; the k = 1 row stays in exponent_table().

    With ``strict`` off, rows that are not valid primary pseudoperfect records
    are logged and left out instead of raising DomainError.
    """
    records = []
    for row in load_rows(path):
        if row.K <= 1:
            continue
        try:
            records.append(PppRecord.from_primes(row.K, row.primes))
        except DomainError as exc:
            if strict:
                raise
            log.warning("Skipping record %d: %s", row.K, exc)
    return records


def verify_records_table(path=None):
    """verify_record for every K > 1 row of the records file."""
    return [verify_record(row.K, row.primes, row.minimal_exponent) for row in load_rows(path) if row.K > 1]


@dataclass(frozen=True)
class ExponentRow:
    k: int
    shipped: int
    computed: Optional[int]
    problem: str = ""

    @property
    def matches(self):
        return self.shipped == self.computed


def exponent_table(path=None):
    """Minimal exponents recomputed for every row, k = 1 included.

    A row whose factor list is wrong gets ``computed`` None and says why.
    """
    rows = []
    for row in load_rows(path):
        try:
            fac = factorization_from_primes(row.K, row.primes)
            computed = minimal_exponent(row.K, fac)
        except DomainError as exc:
            rows.append(ExponentRow(row.K, row.minimal_exponent, None, str(exc)))
            continue
        rows.append(ExponentRow(row.K, row.minimal_exponent, computed))
    return rows
