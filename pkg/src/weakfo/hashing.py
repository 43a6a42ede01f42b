"""The derandomized universal hash family h_{p,q}(x) = (q*x mod p) mod m^2
and the search for collision-free parameters on a given set."""

import math
from dataclasses import dataclass
from typing import Optional


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def primes_below(bound: int):
    return [p for p in range(2, bound) if is_prime(p)]


@dataclass(frozen=True)
class HashParams:
    """Parameters of one member of the family: a prime p, a multiplier
    q < p, and the range base m (hash values land in {0..m^2-1})."""

    p: int
    q: int
    range_base: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if not (0 <= self.q < self.p):
            raise ValueError(f"q={self.q} out of range for p={self.p}")


def hash_value(hp: HashParams, x: int) -> int:
    return raw_hash(hp.p, hp.q, hp.range_base, x)


def raw_hash(p: int, q: int, m: int, x: int) -> int:
    """(q*x mod p) mod m^2 without constructing HashParams (p need not
    be prime here; the formula side is defined for any p >= 1)."""
    return ((q * x) % p) % (m * m)


def prime_bound(set_size: int, n: int) -> int:
    """Exclusive upper bound |X|^2 * log2(n) on the prime search."""
    if n <= 1:
        return 2
    return math.ceil(set_size * set_size * math.log2(n))


def find_hash_params(n: int, xs, bound: Optional[int] = None) -> Optional[HashParams]:
    """Smallest (p, q) in lexicographic order with p prime below the
    |X|^2*log2(n) bound such that h_{p,q} is injective on xs, or None
    when the exhaustive search of that range finds no such parameters
    (which can happen for small n)."""
    xs = sorted(set(xs))
    if not xs:
        raise ValueError("X must be nonempty")
    m = len(xs)
    limit = bound if bound is not None else prime_bound(m, n)
    mm = m * m
    for p in range(2, limit):
        if not is_prime(p):
            continue
        for q in range(p):
            seen = set()
            ok = True
            for x in xs:
                h = ((q * x) % p) % mm
                if h in seen:
                    ok = False
                    break
                seen.add(h)
            if ok:
                return HashParams(p, q, m)
    return None
