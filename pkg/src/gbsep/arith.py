"""Exact integer arithmetic: valuations, factorization, isocracy, prime sets.

Everything here is arbitrary-precision.  Edge labels in real inputs are
small, but products along long cycles are not, so nothing assumes fixed
width.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field


def nu_p(x: int, p: int) -> int:
    """p-adic valuation of x: the largest k with p**k dividing x.

    The sign of x is ignored.  Raises ValueError for x == 0, where the
    valuation is undefined.
    """
    if x == 0:
        raise ValueError("valuation undefined at zero")
    x = abs(x)
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def p_free_part(x: int, p: int) -> int:
    """|x| with all factors of p removed."""
    return abs(x) // p ** nu_p(x, p)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit inputs."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
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


def primes_up_to(bound: int) -> list[int]:
    """All primes <= bound, by sieve."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(math.isqrt(bound)) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, s in enumerate(sieve) if s]


def _pollard_rho(n: int, rng: random.Random) -> int:
    """One nontrivial factor of composite odd n."""
    while True:
        c = rng.randrange(1, n)
        f = lambda x: (x * x + c) % n
        x = y = rng.randrange(2, n)
        d = 1
        while d == 1:
            x = f(x)
            y = f(f(y))
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d


def factorize(x: int) -> dict[int, int]:
    """Prime factorization of |x| as {prime: multiplicity}.

    Trial division up to 10**4, Pollard rho beyond that.  Raises on
    x == 0.
    """
    if x == 0:
        raise ValueError("cannot factor zero")
    x = abs(x)
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while x % p == 0:
            out[p] = out.get(p, 0) + 1
            x //= p
    d = 7
    while d * d <= x and d < 10_000:
        while x % d == 0:
            out[d] = out.get(d, 0) + 1
            x //= d
        d += 2
    if x > 1:
        rng = random.Random(0x5EED)
        stack = [x]
        while stack:
            n = stack.pop()
            if n == 1:
                continue
            if is_prime(n):
                out[n] = out.get(n, 0) + 1
                continue
            d = _pollard_rho(n, rng)
            stack.append(d)
            stack.append(n // d)
    return out


def is_isocratic(n: int, m: int) -> bool:
    """True iff every prime dividing both n and m divides them with equal power.

    Coprime pairs are vacuously isocratic.  Signs are ignored.
    """
    if n == 0 or m == 0:
        raise ValueError("isocracy undefined at zero")
    g = math.gcd(n, m)
    for p in factorize(g) if g > 1 else ():
        if nu_p(n, p) != nu_p(m, p):
            return False
    return True


@dataclass(frozen=True)
class PrimeSet:
    """A finite or cofinite set of primes with decidable membership.

    ``exceptions`` is the sorted list of members (finite) or non-members
    (cofinite).  Cofinite sets are the faithful finite representation of
    loci of the form "all primes except those dividing a given product".
    """

    kind: str  # "finite" | "cofinite"
    exceptions: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in ("finite", "cofinite"):
            raise ValueError(f"bad PrimeSet kind {self.kind!r}")
        exc = tuple(sorted(set(self.exceptions)))
        for p in exc:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "exceptions", exc)

    def __contains__(self, p: int) -> bool:
        if self.kind == "finite":
            return p in self.exceptions
        return p not in self.exceptions

    @property
    def is_cofinite(self) -> bool:
        return self.kind == "cofinite"

    @classmethod
    def all_primes(cls) -> "PrimeSet":
        return cls("cofinite", ())

    @classmethod
    def finite(cls, primes) -> "PrimeSet":
        return cls("finite", tuple(primes))

    @classmethod
    def cofinite(cls, excluded) -> "PrimeSet":
        return cls("cofinite", tuple(excluded))

    def to_json(self) -> dict:
        return {"kind": self.kind, "exceptions": list(self.exceptions)}

    @classmethod
    def from_json(cls, doc: dict) -> "PrimeSet":
        return cls(doc["kind"], tuple(doc["exceptions"]))


def isocracy_locus(n: int, m: int) -> PrimeSet:
    """The cofinite set of primes p with nu_p(n) == nu_p(m).

    The exception list is exactly the set of primes dividing n*m with
    unequal valuations on the two sides.
    """
    if n == 0 or m == 0:
        raise ValueError("isocracy locus undefined at zero")
    bad = [
        p
        for p in factorize(n * m)
        if nu_p(n, p) != nu_p(m, p)
    ]
    return PrimeSet.cofinite(bad)
