"""Prime-distribution statistics over discriminant families.

Implements the per-class prime counts pi(X; q, C), the smoothed Chebyshev
sums psi_k, the per-discriminant discrepancy E_k, the family-averaged
max-deviation (scan_bv) and mean-square (scan_bdh) statistics with their
normalizations, exceptional-discriminant flags, divisor frequency, least
represented primes, the x^2 + n y^2 least-prime search, and the singular
series for primes of the shape x^2 + n.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import arith
from .arith import Discriminant, SieveTables, kronecker
from .characters import ClassCharacter, WTable, lambda_table
from .forms import FormClassGroup, class_group, represented_mask, representation_count
from .serialize import canonical_json, format_float

__all__ = [
    "StatConfig",
    "li",
    "pi_repr",
    "pi_repr_all",
    "psi_k",
    "psi_k_chi",
    "discrepancy_E_k",
    "QRecord",
    "DiscrepancyReport",
    "bv_statistic",
    "bdh_statistic",
    "is_exceptional",
    "divisor_frequency",
    "average_identity_gap",
    "LeastPrimeResult",
    "least_prime",
    "X2NY2Result",
    "least_prime_x2ny2",
    "scan_exceptional_x2ny2",
    "singular_series",
    "UnresolvedSearch",
]

DEFAULT_SEARCH_CAP = 100_000_000


class UnresolvedSearch(RuntimeError):
    """A least-prime search hit its cap without an answer."""


@dataclass(frozen=True)
class StatConfig:
    """Analysis parameters for the scan statistics.

    c3 controls the exceptional-discriminant inequality
    sqrt(|q|)/log|q| <= c3 * h(q); A and eps are reporting parameters that
    only enter the normalization of aggregates.
    """

    c3: float = 20.0
    y_grid_count: int = 64
    li_tol: float = 1e-10
    A: float = 2.0
    eps: float = 0.1

    def __post_init__(self):
        if self.c3 <= 0 or self.y_grid_count < 1 or self.li_tol <= 0:
            raise ValueError("invalid StatConfig")
        if self.A <= 0 or self.eps <= 0:
            raise ValueError("invalid StatConfig")


# ---------------------------------------------------------------------------
# logarithmic integral


def _adaptive_simpson(f, a, fa, m, fm, b, fb, whole, tol, depth=0):
    lm = (a + m) / 2
    rm = (m + b) / 2
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6 * (fa + 4 * flm + fm)
    right = (b - m) / 6 * (fm + 4 * frm + fb)
    # depth cap: at 2^-50 of the range the rule is exact to machine precision
    if abs(left + right - whole) <= 15 * tol or depth >= 50:
        return left + right + (left + right - whole) / 15
    return _adaptive_simpson(
        f, a, fa, lm, flm, m, fm, left, tol / 2, depth + 1
    ) + _adaptive_simpson(f, m, fm, rm, frm, b, fb, right, tol / 2, depth + 1)


@lru_cache(maxsize=4096)
def li(x: float, tol: float = 1e-10) -> float:
    """Integral of 1/log t from 2 to x by adaptive Simpson quadrature."""
    if x < 2:
        raise ValueError("li requires x >= 2")
    if x == 2:
        return 0.0

    def f(t):
        return 1.0 / math.log(t)

    a, b = 2.0, float(x)
    m = (a + b) / 2
    fa, fm, fb = f(a), f(m), f(b)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    return _adaptive_simpson(f, a, fa, m, fm, b, fb, whole, tol)


# ---------------------------------------------------------------------------
# per-class prime counts and smoothed sums


def pi_repr_all(X: float, group: FormClassGroup, sieve: SieveTables) -> np.ndarray:
    """pi(X; q, C) for every class C: primes p <= X represented by C."""
    if X > sieve.limit:
        raise ValueError("X beyond sieve limit")
    limit = int(X)
    if limit < 2:
        return np.zeros(group.h, dtype=np.int64)
    ps = sieve.primes
    ps = ps[: np.searchsorted(ps, limit, side="right")]
    out = np.zeros(group.h, dtype=np.int64)
    for i, f in enumerate(group.classes):
        mask = represented_mask(f, limit)
        out[i] = int(np.count_nonzero(mask[ps]))
    return out


def pi_repr(X: float, group: FormClassGroup, c: int, sieve: SieveTables) -> int:
    """Number of primes p <= X represented by the forms in class c."""
    return int(pi_repr_all(X, group, sieve)[c])


def psi_k(Y: float, group: FormClassGroup, c: int, k: int, table: WTable) -> float:
    """(1/k!) sum over n <= Y of Lambda(n) (log Y/n)^k w(C, n)."""
    if Y > table.N:
        raise ValueError("Y beyond table limit")
    if k < 0:
        raise ValueError("k must be nonnegative")
    if Y < 2:
        return 0.0
    ns, logs = arith.prime_power_table(int(Y))
    wrow = table.w[c, ns]
    terms = logs * wrow * np.log(Y / ns) ** k
    return float(terms.sum()) / math.factorial(k)


def psi_k_chi(Y: float, chi: ClassCharacter, k: int, table: WTable) -> complex:
    """Character-twisted psi: (1/k!) sum of Lambda(n) lambda_chi(n) (log Y/n)^k."""
    if Y > table.N:
        raise ValueError("Y beyond table limit")
    if Y < 2:
        return 0.0 + 0.0j
    ns, logs = arith.prime_power_table(int(Y))
    lam = lambda_table(chi, table)[ns]
    terms = logs * lam * np.log(Y / ns) ** k
    return complex(terms.sum()) / math.factorial(k)


def discrepancy_E_k(
    X: float,
    group: FormClassGroup,
    k: int,
    table: WTable,
    cfg: StatConfig = StatConfig(),
) -> float:
    """max over classes and over Y <= X of |psi_k(Y;q,C) - class average|.

    The Y maximum runs over a uniform grid of y_grid_count points; for k = 0
    the summand is a step function, so all jump points (prime powers up to X)
    are added to the grid and the maximum is exact.  Identically zero when
    h(q) = 1.
    """
    if X > table.N:
        raise ValueError("X beyond table limit")
    if group.h == 1:
        return 0.0
    ns, logs = arith.prime_power_table(int(min(X, table.N)))
    wsub = table.w[:, ns].astype(np.float64)
    grid = X * np.arange(1, cfg.y_grid_count + 1) / cfg.y_grid_count
    if k == 0:
        grid = np.union1d(grid, ns[ns <= X].astype(np.float64))
    kfact = math.factorial(k)
    best = 0.0
    for y in grid:
        if y < 2:
            continue
        m = int(np.searchsorted(ns, y, side="right"))
        t = logs[:m] * np.log(y / ns[:m]) ** k
        vals = wsub[:, :m] @ t / kfact
        dev = float(np.abs(vals - vals.mean()).max())
        if dev > best:
            best = dev
    return best


# ---------------------------------------------------------------------------
# family scans


@dataclass(frozen=True)
class QRecord:
    q: int
    h: int
    e_max: int
    value: float
    exceptional: bool


@dataclass(eq=False)
class DiscrepancyReport:
    """Per-discriminant deviations plus the normalized aggregate.

    For statistic="bv" the per-q value is max over classes of
    |pi(X;q,C) - li(X)/(e(C) h(q))| and the aggregate is normalized by
    sqrt(Q) X (log X)^-A; for statistic="bdh" the per-q value is the sum of
    squared deviations and the normalization uses X^2 instead of X.
    """

    statistic: str
    Q: float
    X: float
    k: int | None
    c3: float
    A: float
    rows: list[QRecord] = field(default_factory=list)
    aggregate: float = 0.0
    normalized: float = 0.0

    def to_json(self) -> str:
        return canonical_json(
            {
                "meta": {
                    "statistic": self.statistic,
                    "Q": self.Q,
                    "X": self.X,
                    "k": self.k,
                    "c3": self.c3,
                    "A": self.A,
                },
                "rows": [
                    {
                        "q": r.q,
                        "h": r.h,
                        "e_max": r.e_max,
                        "value": r.value,
                        "exceptional": r.exceptional,
                    }
                    for r in self.rows
                ],
                "aggregate": self.aggregate,
                "normalized": self.normalized,
            }
        )

    def to_csv(self) -> str:
        lines = ["q,h,e_max,value,exceptional"]
        for r in self.rows:
            lines.append(
                f"{r.q},{r.h},{r.e_max},{format_float(r.value)},"
                f"{'true' if r.exceptional else 'false'}"
            )
        return "\n".join(lines) + "\n"


def is_exceptional(
    q: Discriminant, group: FormClassGroup, cfg: StatConfig = StatConfig()
) -> bool:
    """Whether sqrt(|q|)/log|q| > c3 h(q), the surrogate for a Siegel zero."""
    return math.sqrt(q.abs_q) / math.log(q.abs_q) > cfg.c3 * group.h


def _scan(
    statistic: str,
    Q: float,
    X: float,
    sieve: SieveTables,
    cfg: StatConfig,
    threads: int,
    group_loader,
) -> DiscrepancyReport:
    if X < 2:
        raise ValueError("X must be at least 2")
    if X > sieve.limit:
        raise ValueError("X beyond sieve limit")
    qs = arith.fundamental_discriminants(Q)
    li_x = li(float(X), cfg.li_tol)

    def work(q: Discriminant) -> QRecord:
        group = group_loader(q)
        pis = pi_repr_all(X, group, sieve)
        devs = [
            abs(float(pis[i]) - li_x / (group.e[i] * group.h))
            for i in range(group.h)
        ]
        exc = is_exceptional(q, group, cfg)
        if statistic == "bv":
            best = max(range(group.h), key=lambda i: devs[i])
            return QRecord(q.q, group.h, group.e[best], devs[best], exc)
        value = math.fsum(d * d for d in devs)
        return QRecord(q.q, group.h, max(group.e), value, exc)

    if threads > 1 and len(qs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(work, qs))
    else:
        rows = [work(q) for q in qs]
    # rows arrive in ascending |q|; compensated summation keeps parallel
    # runs bit-identical
    aggregate = math.fsum(r.value for r in rows)
    scale = float(X) if statistic == "bv" else float(X) ** 2
    normalized = aggregate / (math.sqrt(Q) * scale * math.log(X) ** (-cfg.A)) if Q >= 1 else 0.0
    return DiscrepancyReport(
        statistic=statistic,
        Q=float(Q),
        X=float(X),
        k=None,
        c3=cfg.c3,
        A=cfg.A,
        rows=rows,
        aggregate=aggregate,
        normalized=normalized,
    )


def bv_statistic(
    Q: float,
    X: float,
    sieve: SieveTables,
    cfg: StatConfig = StatConfig(),
    threads: int = 1,
    group_loader=None,
) -> DiscrepancyReport:
    """Family sum of max-over-class deviations |pi(X;q,C) - li(X)/(e(C)h(q))|."""
    return _scan("bv", Q, X, sieve, cfg, threads, group_loader or class_group)


def bdh_statistic(
    Q: float,
    X: float,
    sieve: SieveTables,
    cfg: StatConfig = StatConfig(),
    threads: int = 1,
    group_loader=None,
) -> DiscrepancyReport:
    """Family sum over classes of squared deviations, mean-square analogue."""
    return _scan("bdh", Q, X, sieve, cfg, threads, group_loader or class_group)


def divisor_frequency(discs: list[Discriminant], Q: float) -> float:
    """Least nu in [0,1] with #{q in M : q' | q} <= Q^nu for every
    fundamental discriminant q' with 1 < |q'| <= Q."""
    if not discs:
        return 0.0
    counts: dict[int, int] = {}
    for d in discs:
        if d.abs_q > Q:
            raise ValueError("family member exceeds Q")
        for a in arith.divisors(d.abs_q):
            if a == 1:
                continue
            for cand in (a, -a):
                if arith.is_fundamental_discriminant(cand):
                    counts[cand] = counts.get(cand, 0) + 1
    mx = max(counts.values(), default=0)
    if mx <= 1 or Q <= 1:
        return 0.0
    return min(1.0, math.log(mx) / math.log(Q))


def average_identity_gap(
    group: FormClassGroup, X: float, sieve: SieveTables
) -> tuple[int, int]:
    """Both sides of the exact identity
    sum_C e(C) pi(X;q,C) - #{p <= X : p | q} = sum_{p <= X} (1 + (q/p))."""
    pis = pi_repr_all(X, group, sieve)
    q = int(group.q)
    lhs = int(sum(e * int(p) for e, p in zip(group.e, pis)))
    lhs -= sum(1 for p, _ in arith.factorize(-q) if p <= X)
    ps = sieve.primes
    ps = ps[: np.searchsorted(ps, int(X), side="right")]
    rhs = int(sum(1 + kronecker(q, int(p)) for p in ps))
    return lhs, rhs


# ---------------------------------------------------------------------------
# least primes


@dataclass(frozen=True)
class LeastPrimeResult:
    class_index: int
    prime: int | None
    status: str  # "found" | "unresolved"
    searched_to: int


def least_prime(
    group: FormClassGroup, c: int, cap: int = DEFAULT_SEARCH_CAP
) -> LeastPrimeResult:
    """Smallest prime represented by class c, by ascending scan.

    The scan never extends past cap; an unsuccessful search reports status
    "unresolved" rather than a wrong answer.
    """
    f = group.classes[c]
    bound = 1 << 10
    while True:
        bound = min(bound, cap)
        flags = arith.prime_flags(bound)
        mask = represented_mask(f, bound)
        hits = np.flatnonzero(mask & flags)
        if hits.size:
            return LeastPrimeResult(c, int(hits[0]), "found", bound)
        if bound >= cap:
            return LeastPrimeResult(c, None, "unresolved", bound)
        bound <<= 3


@dataclass(frozen=True)
class X2NY2Result:
    n: int
    prime: int | None
    x: int | None
    y_min: int | None
    status: str  # "found" | "unresolved"


def least_prime_x2ny2(n: int, cap: int = DEFAULT_SEARCH_CAP) -> X2NY2Result:
    """Least prime p = x^2 + n y^2 with x >= 1 and y >= 1.

    y_min is the least y among the representations of that p (x >= 1 always);
    allowing x = 0 would misclassify e.g. n = 5, whose least prime 29 needs
    y = 2 under this convention.
    """
    if n < 1:
        raise ValueError("n must be positive")
    bound = max(64, 4 * n)
    while True:
        bound = min(bound, cap)
        flags = arith.prime_flags(bound)
        best = None
        y = 1
        while n * y * y < bound:
            base = n * y * y
            xmax = math.isqrt(bound - base)
            if xmax >= 1:
                xs = np.arange(1, xmax + 1, dtype=np.int64)
                vals = xs * xs + base
                hits = vals[flags[vals]]
                if hits.size and (best is None or hits[0] < best):
                    best = int(hits[0])
            y += 1
        if best is not None:
            y_min = None
            x_at = None
            y = 1
            while n * y * y < best:
                rem = best - n * y * y
                r = math.isqrt(rem)
                if r >= 1 and r * r == rem:
                    y_min, x_at = y, r
                    break
                y += 1
            return X2NY2Result(n, best, x_at, y_min, "found")
        if bound >= cap:
            return X2NY2Result(n, None, None, None, "unresolved")
        bound <<= 3


def scan_exceptional_x2ny2(
    max_n: int, cap: int = DEFAULT_SEARCH_CAP
) -> list[tuple[int, int, int]]:
    """All n <= max_n whose least x^2 + n y^2 prime needs y >= 2, ascending.

    Returns triples (n, least prime, y_min).  A search hitting the cap
    raises UnresolvedSearch since the scan result would be indeterminate.
    """
    if max_n < 1:
        raise ValueError("max_n must be positive")
    out = []
    for n in range(1, max_n + 1):
        res = least_prime_x2ny2(n, cap)
        if res.status != "found":
            raise UnresolvedSearch(f"least prime search for n={n} hit cap {cap}")
        if res.y_min >= 2:
            out.append((n, res.prime, res.y_min))
    return out


def singular_series(n: int, prime_cutoff: int) -> float:
    """Truncated Euler product over odd p <= cutoff of (1 - (-n/p)/(p-1)).

    Predicts the density of primes of the shape x^2 + n; requires n
    squarefree, and is strictly positive.
    """
    if n < 1 or not arith.is_squarefree(n):
        raise ValueError("singular_series requires squarefree n >= 1")
    if prime_cutoff < 2:
        raise ValueError("prime cutoff must be at least 2")
    flags = arith.prime_flags(prime_cutoff)
    prod = 1.0
    for p in np.flatnonzero(flags).tolist():
        if p == 2:
            continue
        prod *= 1.0 - kronecker(-n, p) / (p - 1)
    return prod
