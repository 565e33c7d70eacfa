import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

# Add src to path
sys.path.append(str(Path(__file__).parent / "src"))
from config.config import Config
from src.toolkit_engine import ToolkitEngine
from src.utils import dump_json, setup_logging

REALIZATIONS = ("witness", "circ", "dagger", "dagger-printed")
SUITE_NAMES = (
    "faith", "connecting", "nabla", "modfxp", "extnrp", "maintc", "liar", "tito", "extfcon",
    "intre", "axioms", "calculi",
)
EXIT_CODES = {"ok": 0, "fail": 1, "error": 2}


class _Parser(argparse.ArgumentParser):
    """argparse exits on bad usage; raise instead so run() can return 2"""

    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    shared = _Parser(add_help=False)
    shared.add_argument("--format", choices=["text", "json"], default=Config.DEFAULT_FORMAT)
    shared.add_argument("--seed", type=int, default=Config.RANDOM_SEED)
    shared.add_argument("--bound", type=int, default=None, help="size bound for sweeps")
    shared.add_argument("--log-level", type=str.upper, default=Config.LOG_LEVEL,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    parser = _Parser(prog="kf-modal", description="Decision procedures and proof tools for modal logics of KF truth")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    decide = commands.add_parser("decide", parents=[shared], help="theoremhood in a classical logic")
    decide.add_argument("--logic", required=True)
    decide.add_argument("--formula", required=True)

    consequence = commands.add_parser("consequence", parents=[shared], help="truth preservation at w")
    consequence.add_argument("--logic", required=True)
    consequence.add_argument("--premise", action="append", default=[])
    consequence.add_argument("--formula", required=True)

    internal = commands.add_parser("internal", parents=[shared], help="consequence over idiosyncratic frames")
    internal.add_argument("--scheme", required=True)
    internal.add_argument("--gamma", action="append", default=[])
    internal.add_argument("--delta", action="append", default=[])

    table = commands.add_parser("table", parents=[shared], help="truth table of a box-free formula")
    table.add_argument("--scheme", required=True)
    table.add_argument("--formula", required=True)

    prove = commands.add_parser("prove", parents=[shared], help="cut-free proof search")
    prove.add_argument("--calculus", required=True, help="e.g. K3, K3_box, K3_bbox")
    prove.add_argument("--sequent", required=True, help="'A, B => C'")
    prove.add_argument("--budget", type=int, default=Config.SEARCH_NODE_LIMIT)
    prove.add_argument("--refute", action="store_true", help="search tree countermodels for bbox calculi")

    check = commands.add_parser("check", parents=[shared], help="validate a derivation tree")
    check.add_argument("--calculus", required=True)
    check.add_argument("--derivation", required=True, help="JSON file, or - for stdin")

    translate = commands.add_parser("translate", parents=[shared], help="translate into the truth language")
    translate.add_argument("--formula", required=True)
    translate.add_argument(
        "--realization", default="witness",
        help="witness|circ|dagger|dagger-printed|@file.json; dagger sends an atom true at z to 0=0, "
             "dagger-printed keeps the printed table and sends it to 0=1",
    )
    translate.add_argument("--w", help="classical values, e.g. 'p0=1,p1=0'")
    translate.add_argument("--z", help="nonclassical values, e.g. 'p0=n,p1=1'")
    translate.add_argument("--scheme")
    translate.add_argument("--verify", action="store_true", help="check the bridge on the model")

    fixpoint = commands.add_parser("fixpoint", parents=[shared], help="Kripke fixed points")
    fixpoint.add_argument("--jump", choices=["sk", "wk", "af"], default="sk")
    fixpoint.add_argument("--seed-set", default="", help="'+t0,-t1'")
    fixpoint.add_argument("--tellers", type=int, default=0)
    fixpoint.add_argument("--liar", action="store_true")
    fixpoint.add_argument("--list-all", action="store_true")

    lemma = commands.add_parser("verify-lemma", parents=[shared], help="run a verification suite")
    lemma.add_argument("--name", required=True, choices=SUITE_NAMES)

    commands.add_parser("schemas", parents=[shared], help="print the JSON schemas")
    return parser


def _realization_input(text: str):
    """('witness', None) for a built-in kind, ('custom', mapping) for @file.json"""
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as handle:
            return "custom", json.load(handle)
    if text not in REALIZATIONS:
        raise _UsageError(f"unknown realization {text!r}; choose from {list(REALIZATIONS)} or @file.json")
    return text, None


def _load_derivation(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def dispatch(engine: ToolkitEngine, args) -> dict:
    if args.command == "decide":
        return engine.decide(args.logic, args.formula)
    if args.command == "consequence":
        return engine.consequence(args.logic, args.premise, args.formula)
    if args.command == "internal":
        return engine.internal(args.scheme, args.gamma, args.delta)
    if args.command == "table":
        return engine.table(args.scheme, args.formula)
    if args.command == "prove":
        return engine.prove(args.calculus, args.sequent, args.budget, args.refute)
    if args.command == "check":
        return engine.check(args.calculus, _load_derivation(args.derivation))
    if args.command == "translate":
        kind, data = _realization_input(args.realization)
        return engine.translate(args.formula, kind, data, args.w, args.z, args.scheme, args.verify)
    if args.command == "fixpoint":
        return engine.fixpoint(args.jump, args.seed_set, args.tellers, args.liar, args.list_all)
    if args.command == "verify-lemma":
        return engine.verify_lemma(args.name, args.bound, args.seed)
    return engine.schemas()


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    """Run one command; 0 = theorem/holds/valid/pass, 1 = countermodel/refuted/fail, 2 = bad input"""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if Config.LOG_FILE:
            Config.create_directories()
        setup_logging(args.log_level, Config.LOG_FILE)
        result = dispatch(ToolkitEngine(Config()), args)
    except _UsageError as e:
        print(str(e), file=stderr)
        return 2
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=stderr)
        return 2
    if result["status"] == "error":
        print(f"error: {result['message']}", file=stderr)
        return 2
    if args.format == "json":
        print(dump_json(result["payload"], Config.JSON_INDENT), file=stdout)
    else:
        print(result["text"], file=stdout)
    return EXIT_CODES[result["status"]]


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
