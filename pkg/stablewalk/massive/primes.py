"""Prime enumeration and primality.

`primes_in` is an odd-only segmented sieve; `is_prime` is Miller-Rabin with
base sets that are deterministic for n < 3317044064679887385961981.
"""
from stablewalk.massive.constants import SIEVE_LIMIT
from stablewalk.massive.exceptions import ParameterError
from stablewalk.massive.exceptions import ResourceError
from typing import Dict

import logging
import math
import numpy as np
import threading


logger = logging.getLogger(__name__)

#: Odd numbers covered by one sieve segment
SEGMENT_ODD_COUNT = 2 ** 21

#: Width of the blocks memoized by `BlockSieve`
BLOCK_SIZE = 2 ** 16

_WITNESSES = (
    (1373653, (2, 3)),
    (9080191, (31, 73)),
    (4759123141, (2, 7, 61)),
    (2152302898747, (2, 3, 5, 7, 11)),
    (3474749660383, (2, 3, 5, 7, 11, 13)),
    (341550071728321, (2, 3, 5, 7, 11, 13, 17)),
    (3825123056546413051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (318665857834031151167461, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
    (3317044064679887385961981, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)),
)


def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def primes_in(lo: int, hi: int) -> np.ndarray:
    """Ascending primes p with lo <= p < hi."""
    if hi > SIEVE_LIMIT:
        raise ResourceError(f"Sieve range ends at {hi}, above the limit {SIEVE_LIMIT}")
    lo = max(int(lo), 2)
    hi = int(hi)
    if hi <= lo:
        return np.array([], dtype=np.int64)

    base = simple_sieve(math.isqrt(hi - 1) + 1)
    found = [np.array([2], dtype=np.int64)] if lo <= 2 < hi else []
    low = max(lo, 3) | 1
    span = 2 * SEGMENT_ODD_COUNT
    while low < hi:
        high = min(low + span, hi)
        mask = np.ones((high - low + 1) // 2, dtype=bool)
        for p in base[1:]:
            p = int(p)
            square = p * p
            if square >= high:
                break
            start = max(square, -(-low // p) * p)
            if start % 2 == 0:
                start += p
            if start >= high:
                continue
            mask[(start - low) // 2 :: p] = False
        found.append(low + 2 * np.flatnonzero(mask).astype(np.int64))
        low = high if high % 2 else high + 1
    if not found:
        return np.array([], dtype=np.int64)
    return np.concatenate(found)


def prime_count(x: int) -> int:
    """pi(x), the number of primes <= x."""
    return len(primes_in(2, int(x) + 1))


def prime_count_band(x: int) -> float:
    """pi(x) log(x) / x, close to 1 for large x."""
    return prime_count(x) * math.log(x) / x


def _strong_probable_prime(n: int, base: int) -> bool:
    d = n - 1
    shifts = 0
    while d % 2 == 0:
        d //= 2
        shifts += 1
    x = pow(base, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(shifts - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    n = int(n)
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 61, 73):
        if n % p == 0:
            return n == p
    for bound, bases in _WITNESSES:
        if n < bound:
            return all(_strong_probable_prime(n, base) for base in bases)
    raise ParameterError(f"No deterministic primality test for {n}")


class BlockSieve:
    """Primality of integers along visited ranges, one sieved block at a time.

    Blocks are computed on first use and kept; values above the sieve
    limit fall back to `is_prime`. Safe to share between threads.
    """

    def __init__(self, block_size: int = BLOCK_SIZE, dense_values: int = 64):
        self.block_size = block_size
        self.dense_values = dense_values
        self._blocks: Dict[int, np.ndarray] = {}
        self._lock = threading.Lock()

    def _block(self, index: int) -> np.ndarray:
        with self._lock:
            block = self._blocks.get(index)
        if block is None:
            low = index * self.block_size
            block = np.zeros(self.block_size, dtype=bool)
            block[primes_in(low, low + self.block_size) - low] = True
            with self._lock:
                self._blocks[index] = block
            logger.debug(f"Sieved block [{low}, {low + self.block_size})")
        return block

    def __contains__(self, n: int) -> bool:
        n = int(n)
        if n < 2:
            return False
        if n >= SIEVE_LIMIT:
            return is_prime(n)
        return bool(self._block(n // self.block_size)[n % self.block_size])

    def contains(self, values: np.ndarray) -> np.ndarray:
        """Vectorised membership test.

        Blocks are sieved once they are asked for at least `dense_values`
        values at a time; sparse requests on unseen blocks use `is_prime`.
        """
        values = np.asarray(values, dtype=np.int64)
        out = np.zeros(values.shape, dtype=bool)
        sievable = (values >= 2) & (values < SIEVE_LIMIT)
        blocks, counts = np.unique(
            values[sievable] // self.block_size, return_counts=True
        )
        for index, count in zip(blocks.tolist(), counts.tolist()):
            selected = sievable & (values // self.block_size == index)
            with self._lock:
                cached = index in self._blocks
            if cached or count >= self.dense_values:
                out[selected] = self._block(index)[values[selected] % self.block_size]
            else:
                out[selected] = [is_prime(value) for value in values[selected].tolist()]
        for position in np.flatnonzero(values >= SIEVE_LIMIT):
            out.flat[position] = is_prime(int(values.flat[position]))
        return out
