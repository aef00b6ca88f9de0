import math

import pytest

from app.bigmod import Residue
from app.errors import DomainError, ResourceError
from app.primes import primes_up_to
from app.quotients import (
    eisenstein_check,
    factorial_quotient_check,
    fermat_quotient,
    fermat_quotient_mod,
    fermat_sum_mod,
    lerch_check,
    quotient_pair,
    wilson_quotient,
    wilson_quotient_mod,
)


class TestFermatQuotient:

    @pytest.mark.parametrize("p,j,expected", [(2, 1, 0), (5, 2, 3), (5, 3, 16)])
    def test_examples(self, p, j, expected):
        assert fermat_quotient(p, j) == expected

    def test_mod_route_agrees(self):
        for p in primes_up_to(50):
            for j in range(1, 3 * p):
                if j % p:
                    assert fermat_quotient_mod(p, j) == Residue.of(fermat_quotient(p, j), p)

    def test_divisible_argument(self):
        with pytest.raises(DomainError):
            fermat_quotient(5, 10)
        with pytest.raises(DomainError):
            fermat_quotient_mod(5, 10)


class TestWilsonQuotient:

    @pytest.mark.parametrize("p,expected", [(7, 103), (2, 1), (5, 5)])
    def test_examples(self, p, expected):
        assert wilson_quotient(p) == expected

    def test_not_prime(self):
        with pytest.raises(DomainError):
            wilson_quotient(9)

    def test_out_of_range(self):
        with pytest.raises(ResourceError):
            wilson_quotient_mod(100003, 7)

    @pytest.mark.parametrize("p", primes_up_to(200))
    def test_mod_route_matches_full_factorial(self, p):
        exact = wilson_quotient(p)
        assert p * exact - 1 == math.factorial(p - 1)
        assert wilson_quotient_mod(p, p * p) == Residue.of(exact, p * p)

    def test_exactness_up_to_2000(self):
        for p in primes_up_to(2000):
            w = wilson_quotient_mod(p, p * p).value
            assert (p * w - 1) % (p ** 3) == math.factorial(p - 1) % (p ** 3)


class TestLerch:

    @pytest.mark.parametrize("p,lhs,rhs", [(3, 1, 1), (5, 0, 0), (7, 5, 5)])
    def test_examples(self, p, lhs, rhs):
        result = lerch_check(p)
        assert result.lhs == Residue(lhs, p)
        assert result.rhs == Residue(rhs, p)
        assert result.holds

    def test_rejects_two(self):
        with pytest.raises(DomainError):
            lerch_check(2)

    @pytest.mark.parametrize("pmax", [300, pytest.param(2000, marks=pytest.mark.slow)])
    def test_every_odd_prime(self, pmax):
        assert all(lerch_check(p).holds for p in primes_up_to(pmax) if p > 2)


class TestEisenstein:

    @pytest.mark.parametrize("p,a,b", [(5, 2, 3), (3, 2, 2), (7, 1, 1)])
    def test_examples(self, p, a, b):
        assert eisenstein_check(p, a, b)

    def test_divisible(self):
        with pytest.raises(DomainError):
            eisenstein_check(5, 5, 2)

    @pytest.mark.parametrize("pmax", [60, pytest.param(200, marks=pytest.mark.slow)])
    def test_all_pairs(self, pmax):
        for p in primes_up_to(pmax):
            for a in range(1, p):
                for b in range(1, p):
                    assert eisenstein_check(p, a, b), (p, a, b)


class TestPairs:

    def test_quotient_pair(self):
        pair = quotient_pair(7)
        assert pair.wilson == 103
        assert pair.fermat_sum_mod_p == Residue(5, 7)
        assert fermat_sum_mod(7) == wilson_quotient_mod(7, 7)

    @pytest.mark.parametrize("p", [p for p in primes_up_to(500) if p > 2])
    def test_factorial_quotient(self, p):
        assert factorial_quotient_check(p)
