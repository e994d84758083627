"""Command-line entry point.

Exit status: 0 on success, 2 when a check ran and failed, 1 on usage errors.
Every output carries a header with the tool version and the full run
configuration; a wall-clock timestamp is added only with ``--timestamp`` so
that identical configurations give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__
from .circle import NotCrossUnionError, circle_check, circle_expectation
from .compression import is_shifted, shift_fixpoint
from .family import Family, FamilyFormatError, elements_of
from .search import (
    ALL_BOUNDS,
    GuardError,
    explore_question41,
    max_sum_search,
    verify_main_theorem,
)
from .shadow import lovasz_check, shadow
from .verify import (
    check_different_slices,
    check_eq1_identity,
    check_lemma_computation,
    eq1_grid,
    example13_sum,
    lemma26_grid,
    lemma27_grid,
    records_to_csv,
)

THREADS_ENV = "CROSSUNION_THREADS"
EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2
RECORD_COMMANDS = {"lemma26", "lemma27", "example13", "eq1"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    parameters: dict
    seed: int = 0
    output_path: Optional[str] = None
    format: str = "json"
    thread_count: int = 1
    timestamp: bool = False

    def to_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "seed": self.seed,
            "format": self.format,
            "thread_count": self.thread_count,
        }


@dataclass
class Outcome:
    result: object
    ok: bool = True
    records: list = field(default_factory=list)


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", dest="output_path", help="write here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--timestamp", action="store_true", help="add a UTC timestamp to the header")

    parser = _Parser(prog="crossunion", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def nks(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--s", type=int, required=True)

    p = sub.add_parser("search", parents=[common], help="exact maximum of the sum")
    nks(p)
    p.add_argument("--disable-bound", action="append", default=[], choices=sorted(ALL_BOUNDS))
    p.add_argument("--no-certificates", action="store_true")

    p = sub.add_parser("verify-main", parents=[common], help="value and uniqueness of the maximum")
    nks(p)

    p = sub.add_parser("lemma26", parents=[common], help="lower bounds on the G_0 size bound")
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--grid", action="store_true")

    p = sub.add_parser("lemma27", parents=[common], help="comparison of normalized slices")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--x0", type=Fraction)
    p.add_argument("--grid", action="store_true")

    p = sub.add_parser("example13", parents=[common], help="the asymmetric construction")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--s", type=int, required=True)

    p = sub.add_parser("circle", parents=[common], help="normalized size bound for a tuple")
    p.add_argument("--in", dest="inputs", nargs="+", required=True, help="one family file per family")
    p.add_argument("--cover", help="Monte Carlo cover, e.g. '1,2;3,4'")
    p.add_argument("--trials", type=int, default=100_000)

    p = sub.add_parser("shadow", parents=[common], help="shadow and the Lovász bound")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--level", type=int, required=True)

    p = sub.add_parser("shift", parents=[common], help="shift a family to a fixpoint")
    p.add_argument("--in", dest="input", required=True)

    p = sub.add_parser("question41", parents=[common], help="exact maximum versus both candidates")
    nks(p)

    p = sub.add_parser("eq1", parents=[common], help="normalized star identity")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--grid", action="store_true")
    return parser


def _read_family(path: str) -> Family:
    try:
        return Family.from_text(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except (FamilyFormatError, ValueError) as exc:
        raise UsageError(f"malformed family file {path}: {exc}") from exc


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n for n in missing))


def _records_outcome(records) -> Outcome:
    ok = all(
        r.holds and r.extra.get("characterization_ok", True) for r in records if r.applicable
    )
    return Outcome([r.to_dict() for r in records], ok, list(records))


def execute(config: RunConfig, args) -> Outcome:
    cmd = config.subcommand
    threads = config.thread_count
    if cmd == "search":
        bounds = ALL_BOUNDS - set(args.disable_bound)
        res = max_sum_search(
            args.n, args.k, args.s, bounds=bounds, collect=not args.no_certificates, threads=threads
        )
        return Outcome(res.to_dict(), res.max_sum >= res.star_value)
    if cmd == "verify-main":
        rep = verify_main_theorem(args.n, args.k, args.s, threads=threads)
        return Outcome(rep.to_dict(), rep.holds)
    if cmd == "lemma26":
        if args.grid:
            recs = list(lemma26_grid())
        else:
            _need(args, "k", "l", "s")
            recs = list(check_lemma_computation(args.k, args.l, args.s))
        return _records_outcome(recs)
    if cmd == "lemma27":
        if args.grid:
            recs = list(lemma27_grid())
        else:
            _need(args, "n", "k", "l", "x0")
            recs = [check_different_slices(args.n, args.k, args.l, args.x0)]
        return _records_outcome(recs)
    if cmd == "eq1":
        if args.grid:
            recs = list(eq1_grid())
        else:
            _need(args, "n", "k", "s")
            recs = [check_eq1_identity(args.n, args.k, args.s)]
        return _records_outcome(recs)
    if cmd == "example13":
        rec = example13_sum(args.k, args.c, args.s)
        ok = rec.extra["cross_union"] is not False and not (rec.extra["condition"] and not rec.strict)
        return Outcome([rec.to_dict()], ok, [rec])
    if cmd == "circle":
        fams = [_read_family(p) for p in args.inputs]
        try:
            rep = circle_check(fams)
        except NotCrossUnionError as exc:
            return Outcome({"cross_union": False, "witness": [elements_of(m) for m in exc.witness]}, False)
        out = rep.to_dict()
        if args.cover:
            cover = [[int(e) for e in part.split(",")] for part in args.cover.split(";")]
            out["estimate"] = circle_expectation(fams, cover, args.trials, config.seed)
            out["trials"] = args.trials
        return Outcome(out, rep.holds)
    if cmd == "shadow":
        fam = _read_family(args.input)
        rep = lovasz_check(fam, args.level)
        out = rep.to_dict()
        out["shadow"] = shadow(fam, args.level).to_text()
        return Outcome(out, rep.holds)
    if cmd == "shift":
        fam = _read_family(args.input)
        shifted, trace = shift_fixpoint(fam)
        ok = is_shifted(shifted) and len(shifted) == len(fam) and trace.replay(fam) == shifted
        return Outcome(
            {
                "family": shifted.to_text(),
                "trace": json.loads(trace.to_json()),
                "shifted": is_shifted(shifted),
                "size": len(shifted),
            },
            ok,
        )
    if cmd == "question41":
        return Outcome(explore_question41(args.n, args.k, args.s, threads=threads).to_dict())
    raise UsageError(f"unknown subcommand {cmd}")


def render(config: RunConfig, outcome: Outcome) -> str:
    header = {"tool": "crossunion", "version": __version__, "config": config.to_dict()}
    if config.timestamp:
        header["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    if config.format == "csv":
        lines = [f"# {json.dumps(header, sort_keys=True)}"]
        return "\n".join(lines) + "\n" + records_to_csv(outcome.records)
    doc = {"header": header, "ok": outcome.ok, "result": outcome.result}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _parameters(args) -> dict:
    skip = {"subcommand", "format", "output_path", "seed", "threads", "timestamp"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        out[key] = str(value) if isinstance(value, Fraction) else value
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig(
        subcommand=args.subcommand,
        parameters=_parameters(args),
        seed=args.seed,
        output_path=args.output_path,
        format=args.format,
        thread_count=args.threads if args.threads is not None else _default_threads(),
        timestamp=args.timestamp,
    )
    try:
        if config.format == "csv" and config.subcommand not in RECORD_COMMANDS:
            raise UsageError(f"--format csv is only available for {sorted(RECORD_COMMANDS)}")
        outcome = execute(config, args)
    except (UsageError, GuardError, ValueError) as exc:
        print(f"crossunion: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(config, outcome)
    if config.output_path:
        Path(config.output_path).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if outcome.ok else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
