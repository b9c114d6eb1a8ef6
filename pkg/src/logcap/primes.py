"""Prime windows F_m = {primes p : m <= p < 2m}.

Bertrand's postulate guarantees F_m is nonempty for every m >= 2, which the
level-averaging construction relies on: the averaged measure at stage m mixes
one uniform level per prime in the window.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .errors import InvalidArgumentError


def _sieve(limit: int) -> bytearray:
    """Byte-per-number Eratosthenes sieve; flags[i] == 1 iff i is prime."""
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0:2] = b"\x00\x00"
    i = 2
    while i * i <= limit:
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
        i += 1
    return flags


@dataclass(frozen=True)
class PrimeWindow:
    """Primes in [m, 2m), in increasing order."""

    m: int
    primes: Tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)


def primes_in_window(m: int) -> PrimeWindow:
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        raise InvalidArgumentError(f"window base must be an integer >= 2, got {m!r}")
    flags = _sieve(2 * m - 1)
    primes = tuple(p for p in range(m, 2 * m) if flags[p])
    if not primes:  # unreachable for m >= 2 by Bertrand's postulate
        raise RuntimeError(f"empty prime window at m={m}; this contradicts Bertrand's postulate")
    return PrimeWindow(m, primes)
