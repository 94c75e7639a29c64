"""Command-line entry point.

Exit codes: 0 verified/found, 1 refuted/empty, 2 inconclusive, 3 error.
``--kv`` switches every command to line-oriented ``key=value`` output.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import constraints as cons
from .catalog import by_id, catalog_load, catalog_verify
from .certify import coefficient_at, stong_certificate, to_json
from .codec import (
    CatalogRecord,
    FormatError,
    decode_rp,
    expand_half_witness,
    hex_decode,
    hex_encode,
    record_witness,
    witness_record,
)
from .ilp import ilp_export
from .poly import (
    InputError,
    LittlewoodPoly,
    from_bipartition,
    from_set,
    is_symmetric,
    order,
    symmetrize,
    symmetry_sign,
    to_bipartition,
)
from .regen import RegenerativePair, difference_sequence, family, is_valid
from .search import SearchSpec, dfs_search, mstar

OK, EMPTY, INCONCLUSIVE, ERROR = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2, which means "inconclusive" here
        raise UsageError(message)


class Out:
    def __init__(self, kv: bool, stream=None):
        self.kv = kv
        self.stream = stream or sys.stdout

    def emit(self, text: str, **fields) -> None:
        if self.kv:
            line = " ".join(f"{k}={_fmt(v)}" for k, v in fields.items())
            if line:
                print(line, file=self.stream)
        else:
            print(text, file=self.stream)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (list, tuple)):
        return ",".join(map(str, v))
    return str(v)


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _set_str(A) -> str:
    return "{" + ",".join(map(str, A)) + "}"


# --- input polynomial -------------------------------------------------------


def _add_poly_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--hex", help="characteristic bit string of A in hex")
    src.add_argument("--set", help="comma-separated elements of A")
    src.add_argument("--signs", help="coefficient signs as a +/- string")
    p.add_argument("--n", type=int, help="length (full length when --half is given)")
    p.add_argument("--half", action="store_true", help="input is the left half of a symmetric witness")
    sym = p.add_mutually_exclusive_group()
    sym.add_argument("--anti", action="store_true", help="antisymmetric expansion (s = -1)")
    sym.add_argument("--sym", action="store_true", help="symmetric expansion (s = +1)")


def _poly_from_args(a) -> LittlewoodPoly:
    if a.signs:
        return LittlewoodPoly.from_signs(a.signs)
    if a.n is None:
        raise InputError("--n is required with --hex/--set")
    if a.half:
        s = -1 if a.anti else 1 if a.sym else None
        if s is None and getattr(a, "m", None) is None:
            raise InputError("--half needs --anti, --sym or --m")
        if a.hex:
            return from_bipartition(expand_half_witness(a.hex, a.n, a.m if a.m is not None else 0, s))
        half = from_set(_ints(a.set), a.n // 2)
        return symmetrize(half, s if s is not None else symmetry_sign(a.m))
    A = hex_decode(a.hex, a.n) if a.hex else _ints(a.set)
    return from_set(A, a.n)


# --- commands ---------------------------------------------------------------


def cmd_order(a, out: Out) -> int:
    f = _poly_from_args(a)
    o = order(f)
    if a.m is None:
        out.emit(f"exact order: {o}", n=len(f), order=o)
        return OK
    yes = o >= a.m
    out.emit(f"order ≥ {a.m}: {'yes' if yes else 'no'}; exact order: {o}", n=len(f), m=a.m, holds=yes, order=o)
    return OK if yes else EMPTY


def cmd_verify(a, out: Out) -> int:
    if a.id:
        rec = by_id(catalog_load(a.catalog))[a.id]
        bp = record_witness(rec)
        m = rec.m
    else:
        if a.m is None:
            raise InputError("--m is required")
        m = a.m
        bp = to_bipartition(_poly_from_args(a))
    f = from_bipartition(bp)
    o = order(f)
    sym = is_symmetric(f, symmetry_sign(m))
    ok = o >= m and bp.balanced
    out.emit(
        f"n={bp.n} m={m}: order {o} ({'ok' if ok else 'FAILS'}); (-1)^m symmetric: {'yes' if sym else 'no'}",
        n=bp.n, m=m, order=o, verified=ok, symmetric=sym,
    )
    return OK if ok else EMPTY


def cmd_encode(a, out: Out) -> int:
    h = hex_encode(_ints(a.set), a.n)
    out.emit(h, hex=h)
    return OK


def cmd_decode(a, out: Out) -> int:
    A = hex_decode(a.hex, a.n)
    out.emit(_set_str(A), n=a.n, set=list(A))
    return OK


def cmd_expand(a, out: Out) -> int:
    s = -1 if a.anti else 1 if a.sym else None
    bp = expand_half_witness(a.hex, a.n, a.m, s)
    out.emit(_set_str(bp.A), n=bp.n, set=list(bp.A))
    return OK


def _spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--symmetric", action="store_true", help="search (-1)^m-symmetric witnesses only")
    p.add_argument("--shift", choices=("none", "centered"), default="none")
    p.add_argument("--moments", choices=("binomial", "power"), default="binomial")
    p.add_argument("--primes", default="", help="primes whose residue constraints prune")
    p.add_argument("--branch", action="append", default=[], metavar="P:D0,D1,...", help="fix d_p (repeatable)")


def _spec_from_args(a, **extra) -> SearchSpec:
    branch = {}
    for item in a.branch:
        p, _, vec = item.partition(":")
        branch[int(p)] = tuple(_ints(vec))
    return SearchSpec(
        a.n, a.m,
        assume_symmetry=a.symmetric,
        shift=a.shift,
        moment_kind=a.moments,
        primes=tuple(_ints(a.primes)),
        dp_branch=branch,
        **extra,
    )


def cmd_search(a, out: Out) -> int:
    spec = _spec_from_args(a, mode=a.mode, prune=not a.no_prune, max_nodes=a.max_nodes)
    res = dfs_search(spec)
    for bp in res.witnesses:
        out.emit(f"witness {_set_str(bp.A)} hex={hex_encode(bp.A, bp.n)}", witness=list(bp.A))
    status = "found" if res.count else ("empty" if res.exhausted else "inconclusive")
    scope = "restricted subspace" if spec.assume_symmetry or spec.dp_branch else "full space"
    out.emit(
        f"{status}: count={res.count} nodes={res.nodes_visited} exhausted={'yes' if res.exhausted else 'no'} ({scope})",
        status=status, count=res.count, nodes=res.nodes_visited, exhausted=res.exhausted,
    )
    if res.count:
        return OK
    return EMPTY if res.exhausted else INCONCLUSIVE


def cmd_export_ilp(a, out: Out) -> int:
    spec = _spec_from_args(a)
    path = ilp_export(spec, a.out)
    out.emit(f"wrote {path}", path=path)
    return OK


def cmd_constraints(a, out: Out) -> int:
    if a.action == "divisibility":
        ok = cons.divisibility_check(a.n, a.m)
        out.emit(f"divisibility: {'pass' if ok else 'refuted'}", n=a.n, m=a.m, outcome="pass" if ok else "refuted")
        return INCONCLUSIVE if ok else EMPTY
    if a.action == "dp":
        if a.p is None:
            raise InputError("--p is required for dp")
        vs = cons.feasible_dp(a.n, a.m, a.p, normalize=a.normalize)
        if a.symmetric:
            vs = cons.filter_symmetric(vs, a.n, a.m)
        for v in vs:
            out.emit(f"d_{a.p} = {tuple(v)}", p=a.p, d=list(v))
        out.emit(f"{len(vs)} feasible vector(s)", count=len(vs))
        return INCONCLUSIVE if vs else EMPTY
    primes = _ints(a.primes) or [2, 3, 5]
    rep = cons.nonexistence_report(a.n, a.m, primes, budget=a.budget, symmetric=a.symmetric)
    if a.out:
        Path(a.out).write_text(rep.dumps())
    for st in rep.steps:
        out.emit(f"step {st.rule}: {_brief(st.outcome)}", rule=st.rule)
    surv = rep.survivors()
    if not rep.refuted:
        for p, vs in sorted(surv.items()):
            out.emit(f"surviving d_{p}: {', '.join(str(tuple(v)) for v in vs)}", p=p, survivors=len(vs))
    out.emit(f"conclusion: {rep.conclusion}", conclusion=rep.conclusion)
    return EMPTY if rep.refuted else INCONCLUSIVE


def _brief(outcome) -> str:
    if isinstance(outcome, list):
        return f"{len(outcome)} vector(s)"
    if isinstance(outcome, dict) and "p" in outcome:
        return f"{len(outcome['p'])} x {len(outcome['q'])} compatible"
    if isinstance(outcome, dict) and "tuples" in outcome:
        return f"{outcome['tuples']} joint tuple(s), exhausted={outcome['exhausted']}"
    return str(outcome)


def cmd_report(a, out: Out) -> int:
    rep = cons.NonexistenceReport.loads(Path(a.path).read_text())
    results = cons.replay(rep)
    bad = [i for i, ok in results if not ok]
    out.emit(
        f"replayed {len(results)} step(s); mismatches: {bad or 'none'}; conclusion: {rep.conclusion}",
        steps=len(results), mismatches=len(bad), conclusion=rep.conclusion,
    )
    if bad:
        return ERROR
    return EMPTY if rep.refuted else INCONCLUSIVE


def _pair_from_args(a) -> RegenerativePair:
    if a.id:
        return decode_rp(by_id(catalog_load(a.catalog))[a.id])
    if None in (a.hex, a.n, a.n1, a.m):
        raise InputError("give --id, or all of --hex --n --n1 --m")
    rec = CatalogRecord("rp", {"m": str(a.m), "n": str(a.n), "n1": str(a.n1), "hex": a.hex})
    return decode_rp(rec)


def cmd_rp_verify(a, out: Out) -> int:
    pair = _pair_from_args(a)
    ok = is_valid(pair)
    n, n1 = pair.lengths
    out.emit(f"RP for ({n},{n1}) with m={pair.m}: {'valid' if ok else 'INVALID'}", n=n, n1=n1, m=pair.m, valid=ok)
    return OK if ok else EMPTY


def cmd_rp_family(a, out: Out) -> int:
    pair = _pair_from_args(a)
    if not is_valid(pair):
        out.emit("pair does not verify", valid=False)
        return EMPTY
    for k in range(a.k + 1):
        bp = family(pair, k)
        ok = order(from_bipartition(bp)) >= pair.m
        line = witness_record(bp, pair.m, k=k).to_line()
        out.emit(line if ok else line + "  # FAILED", k=k, n=bp.n, verified=ok)
        if not ok:
            return EMPTY
    if a.diff:
        ds = difference_sequence(pair, a.diff)
        if ds.detected:
            out.emit(f"differences: preperiod {ds.preperiod} period {ds.period}", preperiod=list(ds.preperiod), period=list(ds.period))
        else:
            out.emit(f"differences (no period detected): {ds.raw}", raw=list(ds.raw))
    return OK


def cmd_catalog_check(a, out: Out) -> int:
    report = catalog_verify(catalog_load(a.catalog))
    for e in report.entries:
        out.emit(e.line(), table=e.record.table, id=e.record.ident, status=e.status)
    out.emit(
        f"{len(report.entries)} record(s), {len(report.failures)} failure(s)",
        records=len(report.entries), failures=len(report.failures),
    )
    return OK if report.ok else EMPTY


def cmd_stong(a, out: Out) -> int:
    if a.placeholders:
        res = stong_certificate(placeholders=True)
    else:
        witnesses, labels = {}, {}
        for rec in catalog_load(a.catalog):
            if rec.table == "sporadic":
                key = (rec.n, rec.m)
                if key not in witnesses:
                    witnesses[key] = from_bipartition(record_witness(rec))
                    labels[key] = rec.ident
        res = stong_certificate(witnesses, labels)
    cert = res.certificate
    for name, length in zip("abcd", res.lengths):
        out.emit(f"{name}: length {length}", component=name, length=length)
    e = cert.length.bit_length() - 1
    pow2 = cert.length == 1 << e
    out.emit(
        f"sum = {cert.length}{f' = 2^{e}' if pow2 else ''}; order ≥ {cert.order_lb}",
        length=cert.length, order_lb=cert.order_lb,
    )
    if not a.placeholders:
        out.emit(f"coefficient at 0: {coefficient_at(cert, 0):+d}", coeff0=coefficient_at(cert, 0))
    if a.json:
        Path(a.json).write_text(to_json(cert) + "\n")
    return OK if pow2 and cert.order_lb >= e + 1 else EMPTY


def cmd_mstar(a, out: Out) -> int:
    res = mstar(a.n, a.budget)
    for line in res.log:
        m, _, outcome = line.partition(": ")
        out.emit(line, m=m.removeprefix("m="), outcome=outcome.split(",")[0].replace(" ", "_"))
    upper = "?" if res.upper is None else res.upper
    out.emit(f"m*({a.n}): lower {res.lower}, upper {upper}", n=a.n, lower=res.lower, upper=upper)
    return OK if res.upper == res.lower else INCONCLUSIVE


# --- parser -----------------------------------------------------------------


def build_parser() -> Parser:
    p = Parser(prog="equipower", description="Littlewood polynomials of high order at 1")
    p.add_argument("--kv", action="store_true", help="key=value output")
    p.add_argument("--timing", action="store_true", help="print elapsed time on stderr")
    p.add_argument("--threads", type=int, default=1, help="parallelism cap (searches run single-threaded)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    c = sub.add_parser("order", help="order at x = 1")
    _add_poly_args(c)
    c.add_argument("--m", type=int, help="claimed order to check")
    c.set_defaults(func=cmd_order)

    c = sub.add_parser("verify", help="verify a witness or catalog record")
    _add_poly_args_optional(c)
    c.add_argument("--m", type=int)
    c.add_argument("--id", help="catalog record id")
    c.add_argument("--catalog", help="catalog file or directory (default: shipped)")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("encode", help="set -> hex")
    c.add_argument("--set", required=True)
    c.add_argument("--n", type=int, required=True)
    c.set_defaults(func=cmd_encode)

    c = sub.add_parser("decode", help="hex -> set")
    c.add_argument("--hex", required=True)
    c.add_argument("--n", type=int, required=True)
    c.set_defaults(func=cmd_decode)

    c = sub.add_parser("expand", help="left-half hex -> full symmetric witness")
    c.add_argument("--hex", required=True)
    c.add_argument("--n", type=int, required=True, help="full length")
    c.add_argument("--m", type=int, required=True)
    g = c.add_mutually_exclusive_group()
    g.add_argument("--anti", action="store_true")
    g.add_argument("--sym", action="store_true")
    c.set_defaults(func=cmd_expand)

    c = sub.add_parser("search", help="depth-first witness search")
    _spec_args(c)
    c.add_argument("--mode", choices=("first", "all", "count"), default="first")
    c.add_argument("--max-nodes", type=int)
    c.add_argument("--no-prune", action="store_true")
    c.set_defaults(func=cmd_search)

    c = sub.add_parser("export-ilp", help="write the 0/1 model in LP format")
    _spec_args(c)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_export_ilp)

    c = sub.add_parser("constraints", help="residue-class constraints")
    c.add_argument("action", choices=("dp", "report", "divisibility"))
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--p", type=int)
    c.add_argument("--primes", default="")
    c.add_argument("--normalize", action="store_true", help="apply the complement switch")
    c.add_argument("--symmetric", action="store_true")
    c.add_argument("--budget", type=int, default=100_000)
    c.add_argument("--out", help="write the report here")
    c.set_defaults(func=cmd_constraints)

    c = sub.add_parser("report", help="replay a saved nonexistence report")
    c.add_argument("path")
    c.set_defaults(func=cmd_report)

    for name, func in (("rp-verify", cmd_rp_verify), ("rp-family", cmd_rp_family)):
        c = sub.add_parser(name)
        c.add_argument("--id", help="catalog rp id, e.g. rp_3_12_20")
        c.add_argument("--catalog")
        c.add_argument("--hex")
        c.add_argument("--n", type=int)
        c.add_argument("--n1", type=int)
        c.add_argument("--m", type=int)
        if name == "rp-family":
            c.add_argument("--k", type=int, default=3, help="last family index")
            c.add_argument("--diff", type=int, default=0, metavar="BLOCKS", help="also print the difference sequence")
        c.set_defaults(func=func)

    c = sub.add_parser("catalog-check", help="re-verify every catalog record")
    c.add_argument("--catalog")
    c.set_defaults(func=cmd_catalog_check)

    c = sub.add_parser("stong", help="certificate for an order-52 LP of length 2^51")
    c.add_argument("--catalog")
    c.add_argument("--placeholders", action="store_true", help="arithmetic only, no witnesses")
    c.add_argument("--json", help="write the certificate tree here")
    c.set_defaults(func=cmd_stong)

    c = sub.add_parser("mstar", help="bounds on m*(n)")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--budget", type=int, default=5_000_000)
    c.set_defaults(func=cmd_mstar)
    return p


def _add_poly_args_optional(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hex")
    p.add_argument("--set")
    p.add_argument("--signs")
    p.add_argument("--n", type=int)
    p.add_argument("--half", action="store_true")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--anti", action="store_true")
    g.add_argument("--sym", action="store_true")


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return ERROR
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    out = Out(args.kv, stdout)
    start = time.perf_counter()
    try:
        code = args.func(args, out)
    except (InputError, FormatError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=stderr)
        return ERROR
    if args.timing:
        print(f"elapsed {time.perf_counter() - start:.3f}s", file=stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
