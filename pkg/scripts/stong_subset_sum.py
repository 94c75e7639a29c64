"""Search for four products of catalog witnesses whose padded lengths sum to 2**(M-1).

Each product of witnesses P(n_i, m_i) is padded with a Thue-Morse factor to
order M, giving length prod(n_i) * 2**(M - sum m_i).  Four such lengths
summing to 2**(M-1) join to a member of P(2**(M-1), M).

    python3 scripts/stong_subset_sum.py            # labelled leaves only
    python3 scripts/stong_subset_sum.py --all      # every sporadic record (~600 MB)
"""

from __future__ import annotations

import argparse
import time

from equipower.catalog import catalog_load
from equipower.certify import STONG_LENGTHS, subset_sum_search


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--M", type=int, default=52)
    ap.add_argument("--max-factors", type=int, default=7)
    ap.add_argument("--all", action="store_true", help="use every sporadic record, not only labelled ones")
    args = ap.parse_args()

    recs = [r for r in catalog_load() if r.table == "sporadic" and (args.all or "id" in r.fields)]
    pool = sorted({(r.n, r.m) for r in recs})
    print("pool:", pool)
    t = time.perf_counter()
    sols = subset_sum_search(pool, args.M, args.max_factors)
    print(f"{len(sols)} combination(s) in {time.perf_counter() - t:.1f}s")
    for quad in sols:
        lengths = tuple(c.length for c in quad)
        mark = "  <- matches the known construction" if sorted(lengths) == sorted(STONG_LENGTHS) else ""
        print(" + ".join("#".join(f"{n}" for n, _ in c.factors) for c in quad) + mark)
    return 0 if sols else 1


if __name__ == "__main__":
    raise SystemExit(main())
