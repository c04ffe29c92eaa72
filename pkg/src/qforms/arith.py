"""Integer arithmetic primitives shared by the whole package.

Kronecker symbols, classification and enumeration of negative fundamental
discriminants, and a segmented smallest-prime-factor sieve from which the
von Mangoldt function, tau and mu are derived.  Everything operates on
plain Python integers or numpy arrays; all quantities fit in signed 64-bit
integers at the scales this package targets (|q| <= 1e6, n <= 1e8).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "kronecker",
    "is_squarefree",
    "factorize",
    "divisors",
    "is_fundamental_discriminant",
    "DiscriminantKind",
    "Discriminant",
    "classify_discriminant",
    "fundamental_discriminants",
    "SieveTables",
    "build_sieve",
    "prime_flags",
    "prime_power_table",
]


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n).

    Fully extended: n = 0 returns 1 iff |d| = 1 (else 0), n = 2 uses the
    mod-8 rule, and negative arguments are accepted.  For a fundamental
    discriminant d this is the real primitive character mod |d|.
    """
    if n == 0:
        return 1 if d in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -1
    if n % 2 == 0:
        if d % 2 == 0:
            return 0
        while n % 2 == 0:
            n //= 2
            if d % 8 in (3, 5):
                result = -result
    # Jacobi symbol (d/n) for odd n > 0, by reciprocity.
    d %= n
    while d:
        while d % 2 == 0:
            d //= 2
            if n % 8 in (3, 5):
                result = -result
        d, n = n, d
        if d % 4 == 3 and n % 4 == 3:
            result = -result
        d %= n
    return result if n == 1 else 0


def is_squarefree(m: int) -> bool:
    """Squarefree test by trial factorisation; independent of any sieve limit."""
    if m <= 0:
        raise ValueError("is_squarefree expects a positive integer")
    if m % 4 == 0:
        return False
    p = 3 if m % 2 == 0 else 2
    if p == 3:
        m //= 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return False
        p += 1 if p == 2 else 2
    return True


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorisation of n >= 1 by trial division, ascending primes."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: list[tuple[int, int]] = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of n >= 1."""
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def is_fundamental_discriminant(d: int) -> bool:
    """Whether d (of either sign) is a fundamental discriminant.

    The convention includes the trivial discriminant d = 1.
    """
    if d == 0:
        return False
    if d == 1:
        return True
    if d % 4 == 1:
        return is_squarefree(abs(d))
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(abs(m))
    return False


class DiscriminantKind(enum.Enum):
    # fundamental and not divisible by 8: member of the scan family
    FUNDAMENTAL = "fundamental"
    # fundamental but divisible by 8: valid for class groups, excluded from scans
    FUNDAMENTAL_MOD8 = "fundamental_mod8"
    NOT_FUNDAMENTAL = "not_fundamental"


@dataclass(frozen=True)
class Discriminant:
    """A validated negative discriminant with its classification."""

    q: int
    kind: DiscriminantKind

    @property
    def abs_q(self) -> int:
        return -self.q

    @property
    def is_fundamental(self) -> bool:
        return self.kind is not DiscriminantKind.NOT_FUNDAMENTAL

    @property
    def in_scan_family(self) -> bool:
        return self.kind is DiscriminantKind.FUNDAMENTAL

    def __int__(self) -> int:
        return self.q


def classify_discriminant(d: int) -> Discriminant:
    """Classify a negative integer d as a discriminant.

    d is in the scan family iff d = 1 mod 4 and squarefree, or d = 0 mod 4
    with d/4 = 3 mod 4 squarefree; either condition forces d != 0 mod 8.
    Fundamental discriminants divisible by 8 are flagged separately.
    """
    if d >= 0:
        raise ValueError("classify_discriminant expects a negative integer")
    if d % 4 == 1:
        kind = (
            DiscriminantKind.FUNDAMENTAL
            if is_squarefree(-d)
            else DiscriminantKind.NOT_FUNDAMENTAL
        )
    elif d % 4 == 0:
        m = d // 4
        if m % 4 == 3 and is_squarefree(-m):
            kind = DiscriminantKind.FUNDAMENTAL
        elif m % 4 == 2 and is_squarefree(-m):
            kind = DiscriminantKind.FUNDAMENTAL_MOD8
        else:
            kind = DiscriminantKind.NOT_FUNDAMENTAL
    else:
        kind = DiscriminantKind.NOT_FUNDAMENTAL
    return Discriminant(d, kind)


def _squarefree_flags(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[0] = False
    for p in _small_primes(math.isqrt(limit)):
        flags[p * p :: p * p] = False
    return flags


def fundamental_discriminants(limit: float) -> list[Discriminant]:
    """All scan-family discriminants q with |q| <= limit, ascending in |q|.

    Empty for limit < 3 (the family starts at q = -3).
    """
    top = int(math.floor(limit))
    if top < 3:
        return []
    sq = _squarefree_flags(top)
    odd = np.arange(3, top + 1, 4)  # |q| = 3 mod 4, i.e. q = 1 mod 4
    odd = odd[sq[odd]]
    four = np.arange(4, top + 1, 4)
    m = four // 4
    four = four[(m % 4 == 1) & sq[m]]  # q/4 = 3 mod 4 squarefree
    absq = np.sort(np.concatenate([odd, four]))
    return [Discriminant(-int(a), DiscriminantKind.FUNDAMENTAL) for a in absq]


# ---------------------------------------------------------------------------
# sieve


def _small_primes(limit: int) -> np.ndarray:
    """Dense sieve of Eratosthenes; primes up to limit as an int64 array."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def prime_flags(limit: int) -> np.ndarray:
    """Boolean primality table for 0..limit."""
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    flags = np.ones(limit + 1, dtype=bool)
    flags[: min(2, limit + 1)] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def prime_power_table(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """Prime powers n = p^e <= limit with log p, both sorted by n.

    This is the support of the von Mangoldt function, so
    sum-over-prime-powers loops can run over these arrays directly.
    """
    ps = _small_primes(limit)
    ns: list[int] = []
    logs: list[float] = []
    for p in ps.tolist():
        lp = math.log(p)
        n = p
        while n <= limit:
            ns.append(n)
            logs.append(lp)
            n *= p
    n_arr = np.asarray(ns, dtype=np.int64)
    l_arr = np.asarray(logs, dtype=np.float64)
    order = np.argsort(n_arr, kind="stable")
    return n_arr[order], l_arr[order]


@dataclass(eq=False)
class SieveTables:
    """Smallest-prime-factor table for 2..limit with derived functions.

    Immutable after construction; factorisation via spf is total and exact
    for every n <= limit, and Lambda(n) is reported as a (p, exponent) pair
    so that log p is materialised only at use sites.
    """

    limit: int
    spf: np.ndarray

    @cached_property
    def primes(self) -> np.ndarray:
        out = []
        chunk = 1 << 22
        for lo in range(2, self.limit + 1, chunk):
            hi = min(self.limit + 1, lo + chunk)
            seg = self.spf[lo:hi]
            idx = np.flatnonzero(seg == np.arange(lo, hi, dtype=seg.dtype))
            out.append((idx + lo).astype(np.int64))
        return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)

    def is_prime(self, n: int) -> bool:
        self._check(n)
        return n >= 2 and int(self.spf[n]) == n

    def prime_count(self, x: float) -> int:
        """pi(x) for x <= limit."""
        if x > self.limit:
            raise ValueError("x beyond sieve limit")
        return int(np.searchsorted(self.primes, x, side="right"))

    def factor(self, n: int) -> list[tuple[int, int]]:
        self._check(n)
        out: list[tuple[int, int]] = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def mangoldt_pair(self, n: int) -> tuple[int, int] | None:
        """(p, e) with n = p^e if n is a prime power, else None."""
        self._check(n)
        if n < 2:
            return None
        p = int(self.spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        return (p, e) if n == 1 else None

    def mangoldt(self, n: int) -> float:
        pe = self.mangoldt_pair(n)
        return math.log(pe[0]) if pe else 0.0

    def tau(self, n: int) -> int:
        return math.prod(e + 1 for _, e in self.factor(n))

    def mu(self, n: int) -> int:
        fac = self.factor(n)
        if any(e > 1 for _, e in fac):
            return 0
        return -1 if len(fac) % 2 else 1

    def _check(self, n: int) -> None:
        if not 1 <= n <= self.limit:
            raise ValueError(f"n={n} outside sieve range 1..{self.limit}")


def build_sieve(limit: int, segment_length: int = 1 << 20) -> SieveTables:
    """Build SieveTables up to limit with a segmented marking pass.

    Segments keep the marking cache-local; the spf array itself is the
    O(limit) output and is shared read-only afterwards.
    """
    if limit < 2:
        raise ValueError("sieve limit must be at least 2")
    if segment_length < 16:
        raise ValueError("segment_length too small")
    dtype = np.int32 if limit < 2**31 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    base = _small_primes(math.isqrt(limit))
    for lo in range(2, limit + 1, segment_length):
        hi = min(limit + 1, lo + segment_length)
        for p in base.tolist():
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start >= hi:
                continue
            seg = spf[start:hi:p]
            seg[seg == 0] = p
    # remaining unmarked entries >= 2 are prime
    chunk = 1 << 22
    for lo in range(2, limit + 1, chunk):
        hi = min(limit + 1, lo + chunk)
        seg = spf[lo:hi]
        idx = np.flatnonzero(seg == 0)
        seg[idx] = (idx + lo).astype(dtype)
    return SieveTables(limit=limit, spf=spf)
