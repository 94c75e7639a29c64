"""Print the length tables implied by the shipped catalog, plus small m* values by search.

Lengths are witnessed by catalog entries, regenerative-pair families and
Thue-Morse polynomials, closed under join, doubling and expanded product.

    python3 scripts/reproduce_tables.py --bound 256 --mstar 8,16,24,32
"""

from __future__ import annotations

import argparse

from equipower.catalog import catalog_load, catalog_verify, witnessed_lengths
from equipower.search import mstar


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bound", type=int, default=256)
    ap.add_argument("--mstar", default="8,16,24", help="lengths to settle by search")
    args = ap.parse_args()

    recs = catalog_load()
    W = witnessed_lengths(recs, args.bound)
    print(f"witnessed even lengths <= {args.bound}")
    for m in range(1, 11):
        ns = sorted(n for n in W[m] if n % 2 == 0)
        print(f"  m={m:2d}: {ns[:12]}{' ...' if len(ns) > 12 else ''} ({len(ns)} lengths)")

    print("largest witnessed order per length")
    evens = range(8, args.bound + 1, 8)
    best = {n: max(m for m in W if n in W[m]) for n in evens}
    print("  " + " ".join(f"{n}:{best[n]}" for n in evens))

    report = catalog_verify(recs, args.bound)
    print(f"catalog: {len(report.entries)} records, {len(report.failures)} failures")

    for n in (int(x) for x in args.mstar.split(",") if x):
        r = mstar(n)
        print(f"m*({n}) in [{r.lower}, {r.upper if r.upper is not None else '?'}]  ({r.log[-1]})")
    return 0 if report.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
