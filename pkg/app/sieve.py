"""Segmented numpy sieve that factors whole ranges of k at once.

For every k in a segment it records the number of distinct prime factors,
whether k is square-free and the integer 1 + sum(k/p for p | k), which is all
the Egyptian-fraction searches need.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import gmpy2
import numpy as np

from app.config import SIEVE_MAX_BOUND, SIEVE_SEGMENT_SIZE, WORKERS
from app.errors import ResourceError
from app.primes import primes_up_to

log = logging.getLogger(__name__)


@dataclass
class Segment:
    k: np.ndarray
    omega: np.ndarray
    squarefree: np.ndarray
    reciprocal_sum: np.ndarray  # 1 + sum(k // p) over distinct p | k


def _first_multiple(m, lo):
    return -(-lo // m) * m


def scan_segment(lo, hi, base_primes):
    """Factor [lo, hi) using primes <= sqrt(hi - 1); lo >= 1."""
    k = np.arange(lo, hi, dtype=np.int64)
    rest = k.copy()
    omega = np.zeros(hi - lo, dtype=np.int16)
    squarefree = np.ones(hi - lo, dtype=bool)
    reciprocal_sum = np.ones(hi - lo, dtype=np.int64)

    for p in base_primes:
        if p * p >= hi:
            break
        start = _first_multiple(p, lo) - lo
        if start >= hi - lo:
            continue
        hit = slice(start, None, p)
        omega[hit] += 1
        reciprocal_sum[hit] += k[hit] // p
        rest[hit] //= p
        power = p * p
        while power < hi:
            start = _first_multiple(power, lo) - lo
            if start < hi - lo:
                if power == p * p:
                    squarefree[start::power] = False
                rest[start::power] //= p
            power *= p

    # Whatever is left above 1 is one prime larger than sqrt(hi - 1)
    big = rest > 1
    omega[big] += 1
    reciprocal_sum[big] += k[big] // rest[big]
    return Segment(k, omega, squarefree, reciprocal_sum)


def segment_bounds(bound, segment_size=SIEVE_SEGMENT_SIZE):
    lo = 1
    while lo <= bound:
        hi = min(lo + segment_size, bound + 1)
        yield lo, hi
        lo = hi


def check_bound(bound, limit=SIEVE_MAX_BOUND):
    if bound > limit:
        raise ResourceError(bound, limit, what="sieve bound")


def scan(bound, select, workers=None, segment_size=SIEVE_SEGMENT_SIZE):
    """Ascending list of (k, omega) for k <= bound where select(segment) is True.

    Segments are dispatched to a thread pool; results come back in segment
    order, so the output does not depend on the worker count.
    """
    check_bound(bound)
    if bound < 1:
        return []
    base = primes_up_to(int(gmpy2.isqrt(bound)) + 1)
    workers = workers or WORKERS

    def run(bounds):
        segment = scan_segment(bounds[0], bounds[1], base)
        mask = select(segment)
        return list(zip(segment.k[mask].tolist(), segment.omega[mask].tolist()))

    chunks = list(segment_bounds(bound, segment_size))
    if workers == 1 or len(chunks) == 1:
        results = [run(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, chunks))
    hits = [hit for chunk in results for hit in chunk]
    log.info("Scanned k <= %d in %d segment(s): %d hit(s)", bound, len(chunks), len(hits))
    return hits
