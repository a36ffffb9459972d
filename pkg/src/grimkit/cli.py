"""Command-line interface: ``grimkit fmt|render|eval|test|rewrite|build-site``.

Exit codes: 0 success, 1 usage or parse error, 2 database validation
failure, 3 test failures present.
"""

import argparse
import json
import os
import sys

from . import db as dbmod
from .evaluate import DEFAULT_PRECISION, derive_facts, evaluate
from .expr import Call, Symbol, serialize
from .latex import to_latex
from .numeric import NotNumeric, enclose
from .parser import ParseError, parse, parse_file
from .rewrite import rewrite_once, search_rewrites
from .site import DEFAULT_KATEX, SiteConfig, build_site, render_fragment
from .tester import TestConfig, test_database

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_FAILURES = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for validation
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_input(text):
    if text is None or text == "-":
        return sys.stdin.read()
    return text


def _parse(text):
    return parse(_read_input(text))


def _assumptions(items):
    parts = [parse(a) for a in items or ()]
    if not parts:
        return None
    return parts[0] if len(parts) == 1 else Call(Symbol("And"), tuple(parts))


def db_path(arg):
    """--db flag, then $GRIMKIT_DB, then the bundled seed database."""
    return arg or os.environ.get("GRIMKIT_DB") or dbmod.default_db_path()


def _load_db(args):
    return dbmod.load(db_path(args.db))


# -- commands ------------------------------------------------------------------

def cmd_fmt(args, out):
    exprs = parse_file(_read_input(args.expr))
    for e in exprs:
        print(serialize(e), file=out)
    return EXIT_OK


def cmd_render(args, out):
    e = _parse(args.expr)
    if args.mode == "latex":
        print(to_latex(e), file=out)
    else:
        print(render_fragment(e, display=not args.inline), file=out)
    return EXIT_OK


def cmd_eval(args, out):
    e = _parse(args.expr)
    ctx = derive_facts(_assumptions(args.assume) or Symbol("True_"), precision=args.prec)
    result = evaluate(e, ctx)
    print(serialize(result), file=out)
    if args.numeric:
        try:
            enc = enclose(result, args.prec)
        except NotNumeric as err:
            print(f"not numeric: {err}", file=sys.stderr)
            return EXIT_USAGE
        digits = max(5, int(args.prec * 0.30103) - 2)
        print(enc.to_decimal(digits), file=out)
    return EXIT_OK


def cmd_test(args, out):
    db = _load_db(args)
    if args.entry:
        db = dbmod.Database([db.lookup(i) for i in args.entry])
    cfg = TestConfig(max_instances=args.max_instances, seed=args.seed,
                     precision=args.prec, workers=args.workers)
    report = test_database(db, cfg)
    if args.report == "json":
        json.dump(report.to_json(), out, indent=2)
        out.write("\n")
    else:
        for r in report.reports:
            print(r.summary_line(), file=out)
            for a in r.to_json()["counterexamples"]:
                print(f"    counterexample {a}", file=out)
        s = report.summary()
        print(f"{s['entries']} entries: {s['passed']} passed, {s['failed']} failed, "
              f"{s['untestable']} untestable", file=out)
    return EXIT_FAILURES if report.failed else EXIT_OK


def cmd_rewrite(args, out):
    e = _parse(args.expr)
    ctx = derive_facts(_assumptions(args.assume) or Symbol("True_"))
    db = _load_db(args)
    if args.search:
        results = search_rewrites(e, db, ctx, budget=args.budget)
        for entry_id, new in results:
            print(f"{entry_id}  {serialize(new)}", file=out)
        if not results:
            print("no verified rewrites", file=sys.stderr)
        return EXIT_OK
    if not args.entry:
        raise _Usage("rewrite needs --entry ID or --search")
    outcome = rewrite_once(e, db.lookup(args.entry), ctx, reverse=args.reverse)
    if outcome.diagnostic:
        print(outcome.diagnostic, file=sys.stderr)
    elif not outcome.changed:
        print(f"entry {args.entry}: no match with proved assumptions", file=sys.stderr)
    print(serialize(outcome.expr), file=out)
    return EXIT_OK


def cmd_build_site(args, out):
    db = _load_db(args)
    cfg = SiteConfig(args.out, title=args.title, katex_url=args.katex_url,
                     base_path=args.base_path)
    result = build_site(db, cfg)
    for where, msg in result.errors:
        print(f"{where or 'site'}: {msg}", file=sys.stderr)
    print(f"wrote {len(result.files)} files to {args.out}", file=out)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="grimkit", description="Formula database toolchain.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_db(sp):
        sp.add_argument("--db", help="database file or directory (default: $GRIMKIT_DB, "
                                     "then the bundled seed database)")

    sp = sub.add_parser("fmt", help="print canonical form")
    sp.add_argument("expr", nargs="?", help="expression text, or - for stdin")
    sp.set_defaults(func=cmd_fmt)

    sp = sub.add_parser("render", help="render as LaTeX or an HTML fragment")
    sp.add_argument("expr", nargs="?")
    sp.add_argument("--mode", choices=("latex", "html-fragment"), default="latex")
    sp.add_argument("--inline", action="store_true", help="inline math container")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("eval", help="evaluate under assumptions")
    sp.add_argument("expr", nargs="?")
    sp.add_argument("--assume", action="append", metavar="EXPR")
    sp.add_argument("--numeric", action="store_true", help="also print an enclosure")
    sp.add_argument("--prec", type=int, default=DEFAULT_PRECISION, help="bits")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("test", help="randomized testing of entries")
    with_db(sp)
    sp.add_argument("--entry", action="append", metavar="ID")
    sp.add_argument("--max-instances", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--prec", type=int, default=DEFAULT_PRECISION)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--report", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_test)

    sp = sub.add_parser("rewrite", help="apply database entries as rewrite rules")
    sp.add_argument("expr", nargs="?")
    with_db(sp)
    sp.add_argument("--entry", metavar="ID")
    sp.add_argument("--assume", action="append", metavar="EXPR")
    sp.add_argument("--reverse", action="store_true", help="rewrite right to left")
    sp.add_argument("--search", action="store_true", help="try every entry")
    sp.add_argument("--budget", type=int, default=100)
    sp.set_defaults(func=cmd_rewrite)

    sp = sub.add_parser("build-site", help="generate the static reference site")
    with_db(sp)
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--title", default="Formula database")
    sp.add_argument("--katex-url", default=DEFAULT_KATEX)
    sp.add_argument("--base-path", default="")
    sp.set_defaults(func=cmd_build_site)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except dbmod.ValidationError as err:
        print(str(err), file=sys.stderr)
        return EXIT_INVALID
    except dbmod.NotFound as err:
        print(f"no entry with id {err.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except (_Usage, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
