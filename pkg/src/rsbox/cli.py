"""rsbox command line."""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import tables
from .boolfun import AnfParseError, BooleanFunction, anf
from .circulant import (
    count_invertible_circulant,
    count_shift_invariant_bijections,
    gl_size,
    affine_size,
)
from .constructions import (
    Landscape,
    chi,
    k_plus_2_generator,
    landscape_sbox,
    landscape_to_rule,
    patt,
)
from .equivalence import cyclic_equivalent, essential_witness, strong_affine_equivalent
from .metrics import metrics_record, partial_metrics_record
from .sbox import DimensionError, TheoremInapplicable, export_sbox, induce, inv_set, is_bijection, is_involution
from .search import (
    SearchBudgetExceeded,
    SearchConstraints,
    enumerate_liftings,
    read_resume_token,
    search_tsv,
    write_resume_token,
)


class UsageError(Exception):
    pass


def _dims(text: str) -> tuple[int, ...]:
    """'7', '5-15' or '5,7,9'."""
    out: list[int] = []
    for part in text.split(","):
        lo, sep, hi = part.partition("-")
        try:
            out += list(range(int(lo), int(hi) + 1)) if sep else [int(lo)]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad dimension list {text!r}") from None
    return tuple(out)


def _rule(text: str, k: int | None) -> BooleanFunction:
    try:
        return anf(text, k)
    except AnfParseError as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from None


def _heartbeat(label: str):
    last = [0.0]

    def beat(done: int, total: int) -> None:
        now = time.monotonic()
        if now - last[0] >= 2 or done == total:
            last[0] = now
            print(f"[{label}] {done}/{total} candidates", file=sys.stderr, flush=True)

    return beat


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    f = _rule(args.f, args.k)
    F = induce(f, args.n)
    bij = is_bijection(F)
    if bij:
        rec = metrics_record(F)
    else:
        print("warning: map is not bijective; boomerang uniformity omitted", file=sys.stderr)
        rec = partial_metrics_record(F)
    if args.format == "json":
        print(json.dumps({"anf": str(f), "k": f.k, "n": args.n, "bijective": bij,
                          "nl": rec.nl, "p": rec.plateaued, "du": rec.du, "bu": rec.bu}))
    else:
        print("anf\tk\tn\tbijective\tnl\tp\tdu\tbu")
        print(f"{f}\t{f.k}\t{args.n}\t{int(bij)}\t{rec.tsv()}")
    return 0


def cmd_search(args) -> int:
    threads = args.threads or int(os.environ.get("RSBOX_THREADS", "1"))
    try:
        c = SearchConstraints(
            k=args.k,
            n_list=args.n,
            fix_zero=args.fix_zero,
            max_degree=args.max_degree,
            quadratic_only=args.quadratic_only,
            one_cubic_term=args.one_cubic_term,
            allow_full_k5=args.full_k5,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    start = read_resume_token(args.resume) if args.resume else 0
    try:
        reports = enumerate_liftings(
            c, threads=threads, budget=args.budget, start=start,
            progress=_heartbeat("search") if args.progress else None,
        )
    except SearchBudgetExceeded as exc:
        _emit(search_tsv(exc.partial) + "# partial: budget exhausted\n", args.out)
        if args.token:
            write_resume_token(args.token, c, exc.resume_token)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(search_tsv(reports), args.out)
    return 0


def cmd_count(args) -> int:
    what = {
        "bijections": count_shift_invariant_bijections,
        "circulant": count_invertible_circulant,
        "gl": gl_size,
        "affine": affine_size,
    }[args.what]
    for n in args.n:
        print(f"{n}\t{what(n)}")
    return 0


def cmd_construct(args) -> int:
    if args.family == "landscape":
        if not args.pattern:
            raise UsageError("--pattern is required for landscapes")
        try:
            L = Landscape.parse(args.pattern)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        f = landscape_to_rule(L)
        n = args.n or L.k
        F = landscape_sbox(L, n)
    else:
        if args.family == "kplus2":
            if args.k is None:
                raise UsageError("--k is required for kplus2")
            try:
                f = k_plus_2_generator(args.k)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            n = args.n or args.k + 2
        else:
            f = chi() if args.family == "chi" else patt()
            n = args.n or f.k + 2
        F = induce(f, n)
    print("anf\tk\tn\tbijective\tinvolution")
    print(f"{f}\t{f.k}\t{n}\t{int(is_bijection(F))}\t{int(is_involution(F))}")
    if args.export:
        export_sbox(F, args.export)
    return 0


def cmd_equiv(args) -> int:
    f, g = _rule(args.f, args.k), _rule(args.g, args.k)
    if args.mode == "essential":
        w = essential_witness(f, g)
    else:
        k = max(f.k, g.k)
        f, g = _rule(args.f, k), _rule(args.g, k)
        F, G = induce(f, args.n), induce(g, args.n)
        search = cyclic_equivalent if args.mode == "cyclic" else strong_affine_equivalent
        w = search(F, G)
    print("none" if w is None else w.to_json())
    return 0


def cmd_table(args) -> int:
    live = tables.TABLES[args.name]()
    _emit(live, args.out)
    if args.check:
        diffs = tables.diff_lines(live, tables.golden(args.name))
        for d in diffs:
            print(f"mismatch: {d}", file=sys.stderr)
        return 1 if diffs else 0
    return 0


def cmd_inv_set(args) -> int:
    f = _rule(args.f, args.k)
    print(",".join(map(str, sorted(inv_set(f, args.m)))))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rsbox", description="Rotation-symmetric S-box toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="metrics of the map induced on n bits")
    a.add_argument("--f", required=True, help='ANF, e.g. "x1+x3+x1*x2"')
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--k", type=int)
    a.add_argument("--format", choices=("tsv", "json"), default="tsv")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("search", help="enumerate (k, n)-liftings")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=_dims, required=True, help="dimension, range 5-15 or list 5,7")
    s.add_argument("--fix-zero", dest="fix_zero", action="store_true", default=True)
    s.add_argument("--no-fix-zero", dest="fix_zero", action="store_false")
    s.add_argument("--max-degree", type=int)
    s.add_argument("--quadratic-only", action="store_true")
    s.add_argument("--one-cubic-term", action="store_true")
    s.add_argument("--full-k5", action="store_true", help="allow the 2^32 k=5 sweep")
    s.add_argument("--budget", type=int, help="candidate positions to visit")
    s.add_argument("--resume", help="resume token file to continue from")
    s.add_argument("--token", help="where to write a resume token on overrun")
    s.add_argument("--threads", type=int)
    s.add_argument("--progress", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)

    c = sub.add_parser("count", help="closed-form counts")
    c.add_argument("--what", choices=("bijections", "circulant", "gl", "affine"), required=True)
    c.add_argument("--n", type=_dims, required=True)
    c.set_defaults(func=cmd_count)

    k = sub.add_parser("construct", help="named lifting families")
    k.add_argument("--family", choices=("chi", "patt", "kplus2", "landscape"), required=True)
    k.add_argument("--k", type=int)
    k.add_argument("--n", type=int)
    k.add_argument("--pattern")
    k.add_argument("--export", help="write the table as raw uint32 plus a header")
    k.set_defaults(func=cmd_construct)

    e = sub.add_parser("equiv", help="equivalence witness search")
    e.add_argument("--mode", choices=("cyclic", "strong-affine", "essential"), default="cyclic")
    e.add_argument("--f", required=True)
    e.add_argument("--g", required=True)
    e.add_argument("--n", type=int, default=5)
    e.add_argument("--k", type=int)
    e.set_defaults(func=cmd_equiv)

    t = sub.add_parser("table", help="regenerate a published table")
    t.add_argument("name", choices=sorted(tables.TABLES))
    t.add_argument("--check", action="store_true", help="diff against the golden file")
    t.add_argument("--out")
    t.set_defaults(func=cmd_table)

    i = sub.add_parser("inv-set", help="dimensions n <= m where the rule lifts")
    i.add_argument("--f", required=True)
    i.add_argument("--m", type=int, required=True)
    i.add_argument("--k", type=int)
    i.set_defaults(func=cmd_inv_set)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"rsbox: error: {exc}", file=sys.stderr)
        return 2
    except (DimensionError, TheoremInapplicable, ValueError, ArithmeticError) as exc:
        print(f"rsbox: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
