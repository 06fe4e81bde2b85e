"""Deterministic primality and integer factorization for divisor-sized integers."""

from __future__ import annotations

import math
import random

# Miller-Rabin with these bases is exact below 3.3e24, which covers 2**64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_TRIAL_LIMIT = 10**6


def is_prime(n: int) -> bool:
    n = int(n)
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    """Return ``p`` if it is a prime below ``2**64``; raise ``ValueError`` otherwise."""
    if isinstance(p, bool) or int(p) != p:
        raise ValueError(f"{p!r} is not an integer")
    p = int(p)
    if p >= 2**64:
        raise ValueError(f"primality of {p} cannot be certified deterministically (p >= 2**64)")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


def _wheel():
    yield from (2, 3, 5)
    f = 7
    steps = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while True:
        yield f
        f += steps[i]
        i = (i + 1) % 8


def _pollard_rho(n: int) -> int:
    rng = random.Random(n)
    while True:
        c = rng.randrange(1, n)
        x = y = rng.randrange(2, n)
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d


def prime_factors(n: int) -> set[int]:
    """Distinct prime factors of ``|n|``; empty for 0 and +-1."""
    n = abs(int(n))
    out: set[int] = set()
    if n < 2:
        return out
    for f in _wheel():
        if f * f > n or f > _TRIAL_LIMIT:
            break
        if n % f == 0:
            out.add(f)
            while n % f == 0:
                n //= f
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out.add(m)
        else:
            d = _pollard_rho(m)
            stack += [d, m // d]
    return out
