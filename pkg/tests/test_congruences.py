import itertools
import math

import pytest

from app.bigmod import Residue
from app.congruences import (
    ExponentClass,
    egyptian_condition,
    egyptian_solutions,
    emc_congruence_holds,
    exact_solutions,
    minimal_exponent,
    odd_exponent_solutions,
    product_sum_witness,
    search_solutions_by_prime_count,
    mod_k_conditions,
    valid_exponents,
)
from app.errors import DomainError, OracleRangeError
from app.primes import factorization_from_primes, factorize


class TestDirectCheck:

    @pytest.mark.parametrize("n,k", [(42, 1806), (1, 2), (2, 6), (6, 42), (5, 1)])
    def test_examples(self, n, k):
        assert emc_congruence_holds(n, k)

    def test_failing(self):
        assert not emc_congruence_holds(3, 6)
        assert not emc_congruence_holds(2, 4)

    def test_cap(self):
        with pytest.raises(OracleRangeError):
            emc_congruence_holds(2, 1806, cap=1000)


class TestConditions:

    def test_example_1806(self):
        report = mod_k_conditions(42, 1806)
        assert report.verdict
        assert [c.p for c in report.per_prime] == [2, 3, 7, 43]
        assert all(c.sigma_k_mod_p == Residue(c.p - 1, c.p) for c in report.per_prime)

    def test_odd_exponent_fails_at_three(self):
        report = mod_k_conditions(3, 6)
        assert not report.verdict
        by_prime = {c.p: c for c in report.per_prime}
        assert not by_prime[3].cond_i
        assert by_prime[2].cond_i

    @pytest.mark.parametrize("n", [1, 2, 6, 42])
    def test_not_squarefree(self, n):
        report = mod_k_conditions(n, 4)
        assert not report.squarefree
        assert not report.verdict

    def test_k_one(self):
        report = mod_k_conditions(7, 1)
        assert report.verdict
        assert report.per_prime == ()

    def test_exponent_class(self):
        report = mod_k_conditions(ExponentClass(42), 1806)
        assert report.verdict
        assert report.minimal_multiple == 42
        assert all(c.sigma_k_mod_p is None for c in report.per_prime)

    def test_exponent_class_minimal_multiple(self):
        report = mod_k_conditions(ExponentClass(3), 42)
        assert not report.verdict
        assert report.minimal_multiple == 6

    def test_exponent_class_needs_every_multiple(self):
        # 6 is a multiple of 3 meeting (i) everywhere, but 3 itself fails at p = 3 and p = 7
        cond_i = {c.p: c.cond_i for c in mod_k_conditions(ExponentClass(3), 42).per_prime}
        assert cond_i == {2: True, 3: False, 7: False}
        cond_i = {c.p: c.cond_i for c in mod_k_conditions(ExponentClass(12), 42).per_prime}
        assert cond_i == {2: True, 3: True, 7: True}

    def test_exponent_class_parse(self):
        assert ExponentClass.parse("multiple-of:330") == ExponentClass(330)
        assert str(ExponentClass(330)) == "multiple-of:330"
        with pytest.raises(DomainError):
            ExponentClass.parse("330")
        with pytest.raises(DomainError):
            ExponentClass(0)

    def test_giant_record_through_factorization(self):
        fac = factorization_from_primes(
            8490421583559688410706771261086,
            [2, 3, 11, 23, 31, 47059, 2217342227, 1729101023519])
        report = mod_k_conditions(1863851053628494074457830, fac.number, fac)
        assert report.verdict

    @pytest.mark.parametrize("k_max,n_max", [(120, 24), pytest.param(400, 48, marks=pytest.mark.slow)])
    def test_equivalence_sweep(self, k_max, n_max):
        for k in range(1, k_max + 1):
            fac = factorize(k)
            for n in range(1, n_max + 1):
                assert emc_congruence_holds(n, k) == mod_k_conditions(n, k, fac).verdict, (n, k)


class TestEgyptian:

    @pytest.mark.parametrize("k,expected", [(1806, True), (10, False), (1, True), (47058, True), (30, False)])
    def test_examples(self, k, expected):
        assert egyptian_condition(k) is expected

    def test_implies_squarefree(self):
        for k, _ in egyptian_solutions(10 ** 5):
            assert factorize(k).is_squarefree

    def test_sieve_agrees_with_factorization(self):
        expected = [k for k in range(1, 3001) if factorize(k).is_squarefree and egyptian_condition(k)]
        assert [k for k, _ in egyptian_solutions(3000)] == expected

    def test_worker_count_does_not_change_output(self):
        single = egyptian_solutions(50_000, workers=1)
        assert egyptian_solutions(50_000, workers=4) == single

    def test_working_exponents(self):
        for k in range(1, 401):
            fac = factorize(k)
            if not (fac.is_squarefree and egyptian_condition(k, fac)):
                lam = math.lcm(*(p - 1 for p in fac.primes))
                assert not any(emc_congruence_holds(n, k) for n in range(1, lam + 1)), k
                continue
            lam = minimal_exponent(k, fac)
            working = [n for n in range(1, 2 * lam + 1) if emc_congruence_holds(n, k)]
            assert working == sorted({lam, 2 * lam}), k


class TestMinimalExponent:

    @pytest.mark.parametrize("k,expected", [(1806, 42), (47058, 330), (2214502422, 235290), (1, 1), (2, 1)])
    def test_examples(self, k, expected):
        assert minimal_exponent(k) == expected

    def test_not_a_solution(self):
        with pytest.raises(DomainError):
            minimal_exponent(10)

    def test_valid_exponents(self):
        assert valid_exponents(42, 20) == [6, 12, 18]
        assert valid_exponents(10, 100) == []


class TestWitness:

    def test_examples(self):
        assert product_sum_witness(1806, {2, 3, 7, 43}) == 1
        assert product_sum_witness(1806, set()) == 1
        assert product_sum_witness(42, {2, 3, 7}) == 1

    def test_all_subsets(self):
        for k, _ in egyptian_solutions(10 ** 5):
            primes = factorize(k).primes
            for size in range(len(primes) + 1):
                for subset in itertools.combinations(primes, size):
                    product_sum_witness(k, subset)

    def test_stray_prime(self):
        with pytest.raises(DomainError):
            product_sum_witness(42, {5})


class TestSearch:

    @pytest.mark.parametrize("r,expected", [(0, [1]), (1, [2]), (2, [6]), (3, [42]), (4, [1806])])
    def test_small_prime_counts(self, r, expected):
        assert search_solutions_by_prime_count(r, 10 ** 4) == expected

    def test_five_primes(self):
        assert search_solutions_by_prime_count(5, 10 ** 5) == [47058]

    @pytest.mark.slow
    def test_up_to_a_million(self):
        expected = {0: [1], 1: [2], 2: [6], 3: [42], 4: [1806], 5: [47058], 6: [], 7: [], 8: []}
        for r, ks in expected.items():
            assert search_solutions_by_prime_count(r, 10 ** 6, workers=2) == ks

    def test_negative(self):
        with pytest.raises(DomainError):
            search_solutions_by_prime_count(-1, 100)


class TestOddExponents:

    def test_only_k_one_and_two(self):
        hits = odd_exponent_solutions(47, 400)
        assert {k for _, k in hits} == {1, 2}
        assert len(hits) == 2 * 24

    def test_exact_equation(self):
        assert exact_solutions(12, 200) == [(1, 2)]
