#!/usr/bin/env python3
"""Scan n = 1..max_n for least primes of the shape x^2 + n y^2 (x, y >= 1)
and report every n whose least prime needs y >= 2."""

import argparse

from qforms import stats
from qforms.arith import is_squarefree


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=2000)
    ap.add_argument("--cap", type=int, default=stats.DEFAULT_SEARCH_CAP)
    args = ap.parse_args()

    rows = stats.scan_exceptional_x2ny2(args.max_n, cap=args.cap)
    print(f"n <= {args.max_n} with y_min >= 2: {len(rows)}")
    for n, p, y in rows:
        series = (
            f"  singular series ~ {stats.singular_series(n, 10_000):.6f}"
            if is_squarefree(n)
            else ""
        )
        print(f"  n={n:5d}  least prime {p:7d}  y_min={y}{series}")


if __name__ == "__main__":
    main()
