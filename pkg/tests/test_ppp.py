import pytest

from app.congruences import egyptian_condition
from app.errors import DomainError
from app.ppp import (
    PppRecord,
    egyptian_vs_ppp_scan,
    exponent_table,
    fermat_all_residues,
    is_primary_pseudoperfect,
    load_records,
    ppp_search,
    ppp_solve_check,
    pseudoperfect_witness,
    verify_record,
    verify_records_table,
    zagier_chain,
    zagier_chain_detail,
    zagier_check,
)

from tests.conftest import SMALL_PPP

GIANTS = [
    (2214502422, [2, 3, 11, 23, 31, 47059], 235290),
    (52495396602, [2, 3, 11, 17, 101, 149, 3109], 310800),
    (8490421583559688410706771261086,
     [2, 3, 11, 23, 31, 47059, 2217342227, 1729101023519],
     1863851053628494074457830),
]


class TestDefinition:

    @pytest.mark.parametrize("K,expected", [(42, True), (30, False), (2, True), (1, False), (47058, True)])
    def test_examples(self, K, expected):
        assert is_primary_pseudoperfect(K) is expected

    def test_implies_egyptian(self):
        for K in range(1, 10 ** 4):
            if is_primary_pseudoperfect(K):
                assert egyptian_condition(K)

    def test_record_rejects_non_ppp(self):
        with pytest.raises(DomainError):
            PppRecord.from_primes(30, [2, 3, 5])
        with pytest.raises(DomainError):
            PppRecord.from_primes(1, [])

    def test_record_fields(self):
        record = PppRecord.from_primes(1806, [43, 7, 3, 2])
        assert record == PppRecord(1806, 4, (2, 3, 7, 43), 42)


class TestSearch:

    def test_one(self):
        assert ppp_search(1) == []

    def test_hundred(self):
        assert [r.K for r in ppp_search(100)] == [2, 6, 42]

    def test_table_rows_to_a_million(self):
        records = ppp_search(10 ** 6, workers=2)
        assert [r.K for r in records] == list(SMALL_PPP)
        assert [r.minimal_exponent for r in records] == [1, 2, 6, 42, 330]
        assert records[-1].primes == (2, 3, 11, 23, 31)

    def test_no_separators_below_a_million(self):
        assert egyptian_vs_ppp_scan(10 ** 6) == []


class TestVerifyRecord:

    @pytest.mark.parametrize("K,primes,exponent", GIANTS)
    def test_giants(self, K, primes, exponent):
        result = verify_record(K, primes, exponent)
        assert result.passed, result.checks
        assert result.minimal_exponent == exponent
        assert result.findings == ()

    def test_perturbed_factor(self):
        result = verify_record(2214502422, [2, 3, 11, 23, 31, 47057], 235290)
        assert not result.passed
        failed = {check.name for check in result.checks if not check.passed}
        assert "product equals K" in failed

    def test_wrong_exponent(self):
        result = verify_record(1806, [2, 3, 7, 43], 84)
        assert not result.passed
        assert [c.name for c in result.checks if not c.passed] == ["minimal exponent"]

    def test_composite_factor(self):
        result = verify_record(42, [6, 7])
        assert "prime 6" in {c.name for c in result.checks if not c.passed}

    def test_probable_prime_finding(self):
        big = 2 ** 89 - 1
        result = verify_record(2 * big, [2, big])
        assert result.findings == (f"{big} is only a strong probable prime",)
        assert not result.passed


class TestZagier:

    @pytest.mark.parametrize("k,expected", [(1806, True), (6, True), (12, False), (1, True), (30, False)])
    def test_examples(self, k, expected):
        verdict = zagier_check(k)
        assert verdict.agree
        assert verdict.conditions == (expected,) * 5

    def test_twelve_brute_force(self):
        assert pow(2, 13, 12) == 8
        assert not fermat_all_residues(12)

    @pytest.mark.parametrize("limit", [2000, pytest.param(10 ** 4, marks=pytest.mark.slow)])
    def test_agreement(self, limit):
        members = []
        for k in range(1, limit + 1):
            verdict = zagier_check(k)
            assert verdict.agree, k
            if verdict.cond_fermat_all_a:
                members.append(k)
        assert members == [1, 2, 6, 42, 1806]

    def test_beyond_brute_force_range(self):
        verdict = zagier_check(47058, brute_max=100)
        assert not verdict.brute_force
        assert verdict.agree and not verdict.in_chain

    def test_chain(self):
        assert zagier_chain() == [1, 2, 6, 42, 1806]
        detail = zagier_chain_detail()
        assert detail.primes == (2, 3, 7, 43)
        assert detail.stop == 1807
        assert detail.stop_factors == ((13, 1), (139, 1))


class TestPppSolveCheck:

    @pytest.mark.parametrize("limit", [1, 50, 10 ** 5])
    def test_holds(self, limit):
        assert ppp_solve_check(limit)

    def test_condition_route_above_cap(self):
        assert ppp_solve_check(10 ** 5, cap=1000)


class TestWitness:

    def test_examples(self):
        assert pseudoperfect_witness(2) is None
        assert pseudoperfect_witness(42) == [1, 6, 14, 21]
        assert sum(pseudoperfect_witness(47058)) == 47058

    def test_non_ppp(self):
        with pytest.raises(DomainError):
            pseudoperfect_witness(30)


class TestTables:

    def test_load_records_skips_one(self):
        assert [r.K for r in load_records()][:5] == list(SMALL_PPP)
        assert len(load_records()) == 8

    def test_records_table(self, records_file):
        rows = verify_records_table(records_file)
        assert len(rows) == 8
        assert all(row.passed for row in rows)

    def test_records_table_flags_perturbed_row(self, broken_records_file):
        rows = verify_records_table(broken_records_file)
        assert [row.K for row in rows if not row.passed] == [2214502422]

    def test_exponent_table(self, records_file):
        rows = exponent_table(records_file)
        assert [row.k for row in rows][:2] == [1, 2]
        assert rows[0].computed == 1
        assert all(row.matches for row in rows)
        assert rows[-1].computed == 1863851053628494074457830

    def test_exponent_table_keeps_perturbed_row(self, broken_records_file):
        rows = {row.k: row for row in exponent_table(broken_records_file)}
        broken = rows.pop(2214502422)
        assert broken.computed is None and not broken.matches
        assert "multiply to" in broken.problem
        assert all(row.matches for row in rows.values())

    def test_load_records_lenient(self, broken_records_file):
        with pytest.raises(DomainError):
            load_records(broken_records_file)
        records = load_records(broken_records_file, strict=False)
        assert 2214502422 not in [r.K for r in records]
        assert len(records) == 7
