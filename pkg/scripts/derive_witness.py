"""Find a (-1)^m-symmetric witness for P(n, m) by residue branching plus an ILP solver.

For every tuple of mutually compatible discrepancy vectors (primes 2, 3, 5, 7
by default) the symmetric 0/1 model with those class counts fixed is written
in LP format and handed to HiGHS.  The first feasible branch yields a
witness, which is re-verified and printed as a catalog line.

    python3 scripts/derive_witness.py 112 7
"""

from __future__ import annotations

import argparse
import itertools
import logging
import tempfile
import time
from pathlib import Path

import highspy

from equipower import constraints as cons
from equipower.codec import witness_record
from equipower.ilp import ilp_export, signs_from_solution
from equipower.poly import LittlewoodPoly, is_symmetric, order, symmetry_sign, to_bipartition
from equipower.search import SearchSpec

log = logging.getLogger("derive_witness")


def branches(n: int, m: int, primes: list[int], budget: int):
    sets = {p: cons.filter_symmetric(cons.feasible_dp(n, m, p), n, m) for p in primes}
    log.info("symmetric feasible vectors: %s", {p: len(v) for p, v in sets.items()})
    joint = cons.joint_propagate(n, sets, budget)
    alive = {int(p): [tuple(v) for v in vs] for p, vs in joint["surviving"].items()}
    log.info("joint tuples: %d (exhausted=%s)", joint["tuples"], joint["exhausted"])
    ps = sorted(alive)
    for combo in itertools.product(*(alive[p] for p in ps)):
        if all(cons.vectors_compatible(n, a, b) for a, b in itertools.combinations(combo, 2)):
            yield dict(zip(ps, combo))


def solve(spec: SearchSpec, time_limit: float, workdir: Path):
    path = ilp_export(spec, workdir / "model.lp")
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", time_limit)
    h.readModel(str(path))
    h.run()
    status = h.getModelStatus()
    if status != highspy.HighsModelStatus.kOptimal:
        return status, None
    z = [round(v) for v in h.getSolution().col_value]
    return status, LittlewoodPoly(tuple(signs_from_solution(spec, z)))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("n", type=int)
    ap.add_argument("m", type=int)
    ap.add_argument("--primes", default="2,3,5,7")
    ap.add_argument("--time-limit", type=float, default=120.0, help="seconds per branch")
    ap.add_argument("--budget", type=int, default=10**6)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    n, m = args.n, args.m
    primes = [int(p) for p in args.primes.split(",")]
    with tempfile.TemporaryDirectory() as tmp:
        for i, br in enumerate(branches(n, m, primes, args.budget)):
            spec = SearchSpec(n, m, assume_symmetry=True, shift="centered", dp_branch=br)
            t = time.perf_counter()
            status, f = solve(spec, args.time_limit, Path(tmp))
            log.info("branch %d %s: %s (%.1fs)", i, br, status, time.perf_counter() - t)
            if f is None:
                continue
            if order(f) < m or not is_symmetric(f, symmetry_sign(m)):
                raise AssertionError("solver point does not verify")
            print(witness_record(to_bipartition(f), m, source="search").to_line())
            return 0
    log.info("no branch produced a witness")
    return 1


if __name__ == "__main__":
    raise SystemExit(main())
