"""Command-line entry point: ``permrat <subcommand> ...``.

Tuples are written ``a,b,c,d,e@q`` (or ``a,b,c,e@3^n`` for the X^3+X^2+e
family) with entries given as element indices: the element
c0 + c1 u + ... + c_{n-1} u^{n-1} has index c0 + c1 p + ... .

Exit status: 0 when results match expectations, 2 on a verification
mismatch, 1 on usage errors.  Failures print one ``error: <kind>: <reason>``
line on stderr.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import classify
from .criteria import CHAR3, FAMILIES, GENERAL, hermite_test, parse_tuple
from .field import FieldError, field_of_order
from .ratmap import is_permutation

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2

# q values below the general theorem's range, as covered by the extended scan
BELOW_RANGE = [2, 4, 8, 16, 32, 64, 3, 9, 27, 81, 5, 25, 7, 49, 11, 13, 17, 19, 23, 29, 31, 37,
               41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109]

log = logging.getLogger("permrat")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    """argparse with exit status 1 and a one-line reason on bad usage."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"error: usage: {message}\n")


# --------------------------------------------------------------------------
# run configs

@dataclass
class RunConfig:
    q: int | None = None
    family: str = GENERAL
    normalize: bool = True
    use_prefilter: bool = True
    parallel_width: int = 1
    output: str | None = None
    format: str = "tsv"


_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}


def parse_run_config(text: str) -> RunConfig:
    """``key=value`` lines; ``#`` starts a comment."""
    cfg = RunConfig()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep:
            raise UsageError(f"config line {lineno}: expected key=value")
        try:
            if key == "q":
                cfg.q = int(value)
            elif key == "family":
                if value not in FAMILIES:
                    raise UsageError(f"config line {lineno}: unknown family {value!r}")
                cfg.family = value
            elif key in ("normalize", "use_prefilter"):
                setattr(cfg, key, _BOOL[value.lower()])
            elif key == "parallel_width":
                cfg.parallel_width = int(value)
            elif key in ("output", "output_path"):
                cfg.output = value
            elif key == "format":
                if value not in ("tsv", "jsonl"):
                    raise UsageError(f"config line {lineno}: format must be tsv or jsonl")
                cfg.format = value
            else:
                raise UsageError(f"config line {lineno}: unknown key {key!r}")
        except (ValueError, KeyError) as exc:
            raise UsageError(f"config line {lineno}: bad value {value!r}") from exc
    return cfg


# --------------------------------------------------------------------------
# helpers

def parse_q_list(text: str) -> list[int]:
    """``"5"``, ``"3,9,27"`` or ``"2-64"`` (prime powers in the range)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = (int(v) for v in part.split("-"))
            out.extend(classify.prime_powers(lo, hi))
        else:
            q = int(part)
            field_of_order(q)
            out.append(q)
    return out


def _q_list_arg(text):
    try:
        return parse_q_list(text)
    except (ValueError, FieldError) as exc:
        raise argparse.ArgumentTypeError(f"bad q list {text!r}: {exc}")


def _q_arg(text):
    try:
        q = int(text)
        field_of_order(q)
    except (ValueError, FieldError) as exc:
        raise argparse.ArgumentTypeError(f"q must be a prime power: {exc}")
    return q


def _which_arg(text):
    family = classify.WHICH_ALIASES.get(text, text)
    if family not in FAMILIES:
        raise argparse.ArgumentTypeError(f"unknown family {text!r}")
    return family


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _add_output(p, fmt_default="tsv"):
    p.add_argument("--format", choices=("tsv", "jsonl"), default=None,
                   help=f"report format (default {fmt_default})")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")


# --------------------------------------------------------------------------
# subcommands

def cmd_test_pr(args) -> int:
    ctx, t = parse_tuple(args.tuple)
    f = t.ratmap(ctx)
    print(f"PR: {'true' if is_permutation(f) else 'false'}")
    if args.hermite:
        print(f"Hermite: {'true' if hermite_test(f) else 'false'}")
    return EXIT_OK


def cmd_search(args) -> int:
    cfg = parse_run_config(Path(args.config).read_text()) if args.config else RunConfig()
    q = args.q if args.q is not None else cfg.q
    if q is None:
        raise UsageError("search needs --q (or q= in --config)")
    family = args.family or cfg.family
    normalize = cfg.normalize if args.normalize is None else args.normalize
    prefilter = cfg.use_prefilter if args.prefilter is None else args.prefilter
    width = args.width or cfg.parallel_width
    fmt = args.format or cfg.format
    report = classify.search_q(q, family, use_prefilter=prefilter, normalize=normalize,
                               parallel_width=width)
    _emit(report.render(fmt), args.out or cfg.output)
    log.info("elapsed %.2fs", report.elapsed)
    if report.verdict == classify.MISSING:
        print("error: mismatch: condition tuples missing from the PR set", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_verify_theorem(args) -> int:
    if args.q:
        qs = args.q
    elif args.extended:
        qs = BELOW_RANGE if args.which == GENERAL else [3, 9, 27, 81]
    else:
        qs = [113] if args.which == GENERAL else [243]
    texts, ok = [], True
    for q in qs:
        start = time.perf_counter()
        report = classify.verify_theorem(q, args.which, parallel_width=args.width)
        log.info("q=%d elapsed %.2fs", q, time.perf_counter() - start)
        texts.append(report.render(args.format or "tsv"))
        ok &= bool(report.passed)
    _emit("".join(texts), args.out)
    if not ok:
        print(f"error: mismatch: {args.which} check failed", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_verify_sufficiency(args) -> int:
    fam = args.family or GENERAL
    qs = args.q or ([3, 9, 27, 81] if fam == CHAR3 else classify.prime_powers(2, 64))
    report = classify.verify_sufficiency(qs, fam)
    _emit(report.render(args.format or "tsv"), args.out)
    if not report.ok:
        print("error: mismatch: sufficiency failures", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_tables(args) -> int:
    report = classify.reproduce_tables(args.width)
    _emit(report.render(args.format or "tsv"), args.out)
    if not report.ok:
        print("error: mismatch: found and listed sporadic tuples differ (see DIFF column)",
              file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_identities(args) -> int:
    qs = args.q or [3, 4, 5, 7, 8, 9, 11, 13]
    lines, ok = ["q\tcheck\tevaluated\tviolations\n"], True
    for q in qs:
        report = classify.identity_suite(q)
        lines.append(report.to_tsv())
        ok &= report.ok
    _emit("".join(lines), args.out)
    if not ok:
        print("error: mismatch: identity violations", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_audit_bound(args) -> int:
    import json

    qs = args.q or [121, 169, 289]
    recs = []
    for q in qs:
        recs.extend(classify.audit_bound(q, args.samples, args.seed))
    if (args.format or "tsv") == "jsonl":
        text = "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in recs)
    else:
        rows = ["q\tcurve\td1\td2\td3\td\tcount\tbound\tpass"]
        rows += [f"{r.q}\t{r.curve}\t{r.d1}\t{r.d2}\t{r.d3}\t{r.d}\t{r.count}\t{r.bound:.3f}\t"
                 f"{str(r.passed).lower()}" for r in recs]
        rows.append(f"# {classify.ADVISORY}")
        text = "\n".join(rows) + "\n"
    _emit(text, args.out)
    if not all(r.passed for r in recs):
        print("error: mismatch: point count below the bound", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_degq2_scan(args) -> int:
    qs = args.q or classify.prime_powers(2, classify.DEGQ2_LIMIT)
    lines, counts = ["q\tcount\tmaps"], {}
    for q in qs:
        maps = classify.degq2_existence_scan(q)
        counts[q] = len(maps)
        lines.append(f"{q}\t{len(maps)}\t" + ";".join(f.format() for f in maps[: args.show]))
    _emit("\n".join(lines) + "\n", args.out)
    if any(n for q, n in counts.items() if q > 8):
        print("error: mismatch: quadratic-denominator PRs above q = 8", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> Parser:
    parser = Parser(prog="permrat", description=__doc__,
                    formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    common = Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS,
                        help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND", parser_class=Parser)
    sub.required = True

    p = sub.add_parser("test-pr", parents=[common], help="is a family tuple a permutation of P^1(F_q)?")
    p.add_argument("tuple", help="a,b,c,d,e@q or a,b,c,e@3^n")
    p.add_argument("--hermite", action="store_true", help="also run the power-sum test")
    p.set_defaults(func=cmd_test_pr)

    p = sub.add_parser("search", parents=[common], help="exhaustive search of one family over F_q")
    p.add_argument("--q", type=_q_arg)
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=None,
                   help="restrict a (and b in characteristic 3) to normal forms (default on)")
    p.add_argument("--no-prefilter", dest="prefilter", action="store_const", const=False,
                   default=None, help="skip the necessary-condition filter")
    p.add_argument("--width", type=int, help="worker processes")
    p.add_argument("--config", metavar="PATH", help="key=value run config")
    _add_output(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify-theorem", parents=[common], help="search and compare with a theorem and the tables")
    p.add_argument("--which", type=_which_arg, default=GENERAL, metavar="{general,char3x2}",
                   help="family to check (T2.1 and T3.1 are accepted as aliases)")
    p.add_argument("--q", type=_q_list_arg, help="q list such as 113 or 2-64")
    p.add_argument("--extended", action="store_true",
                   help="scan every q below the theorem's range")
    p.add_argument("--width", type=int, default=1)
    _add_output(p)
    p.set_defaults(func=cmd_verify_theorem)

    p = sub.add_parser("verify-sufficiency", parents=[common], help="condition tuples are PRs and G factors")
    p.add_argument("--q", type=_q_list_arg)
    p.add_argument("--family", choices=FAMILIES)
    _add_output(p)
    p.set_defaults(func=cmd_verify_sufficiency)

    p = sub.add_parser("tables", parents=[common], help="reproduce the sporadic tables with a DIFF column")
    p.add_argument("--width", type=int, default=1)
    _add_output(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("identities", parents=[common], help="necessary conditions and identities on found PRs")
    p.add_argument("--q", type=_q_list_arg)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("audit-bound", parents=[common], help="point counts against the Hasse-Weil-type bound")
    p.add_argument("--q", type=_q_list_arg)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    p.set_defaults(func=cmd_audit_bound)

    p = sub.add_parser("degq2-scan", parents=[common], help="PRs with quartic numerator and quadratic denominator")
    p.add_argument("--q", type=_q_list_arg)
    p.add_argument("--show", type=int, default=3, help="maps listed per q")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_degq2_scan)
    return parser


def _configure_logging(verbose: bool):
    for h in [h for h in log.handlers if getattr(h, "_permrat", False)]:
        log.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler._permrat = True
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if verbose else logging.WARNING)
    log.propagate = False


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FieldError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
