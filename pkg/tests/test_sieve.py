import pytest

from app import sieve
from app.errors import ResourceError
from app.primes import factorize, primes_up_to


def _everything(segment):
    return segment.k > 0


class TestScanSegment:

    def test_matches_factorize(self):
        segment = sieve.scan_segment(1, 2001, primes_up_to(50))
        for k, omega, squarefree, total in zip(segment.k.tolist(), segment.omega.tolist(),
                                               segment.squarefree.tolist(), segment.reciprocal_sum.tolist()):
            fac = factorize(k)
            assert omega == len(fac), k
            assert squarefree == fac.is_squarefree, k
            assert total == 1 + sum(k // p for p in fac.primes), k

    def test_offset_segment(self):
        segment = sieve.scan_segment(1800, 1810, primes_up_to(50))
        row = segment.k.tolist().index(1806)
        assert segment.omega[row] == 4
        assert segment.reciprocal_sum[row] == 1806


class TestScan:

    @pytest.mark.parametrize("workers", [1, 3])
    def test_segments_and_workers_agree(self, workers):
        expected = sieve.scan(5000, _everything)
        assert sieve.scan(5000, _everything, workers=workers, segment_size=337) == expected

    def test_bounds_cover_range(self):
        bounds = list(sieve.segment_bounds(10, segment_size=4))
        assert bounds == [(1, 5), (5, 9), (9, 11)]

    def test_empty(self):
        assert sieve.scan(0, _everything) == []

    def test_bound_limit(self):
        with pytest.raises(ResourceError):
            sieve.scan(10 ** 9, _everything)
