"""Command line: run scenario files or the built-in cases and emit a JSON report.

Exit status is 0 when every task passes, 1 when some task fails or is
inconclusive, and 2 on parse or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from .poly import ORDERS
from .scenario import Scenario, ScenarioError, Settings, parse_scenario, run_scenario

BUILTINS = ("sextic", "quartic", "x23", "x222", "dualcx")


def builtin_text(case: str) -> str:
    if case not in BUILTINS:
        raise KeyError(f"unknown builtin {case!r}; choose from {', '.join(BUILTINS)}")
    return resources.files("fanocert").joinpath("scenarios", f"{case}.scn").read_text()


def builtin(case: str) -> Scenario:
    return parse_scenario(builtin_text(case))


def render(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", choices=sorted(ORDERS), help="monomial order for all Groebner computations")
    common.add_argument("--trunc", type=int, help="truncation degree for local classifications")
    common.add_argument("--threads", type=int, default=1, help="run up to K tasks concurrently")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--power-bound", type=int, default=32, help="largest pure power tried for origin certificates")
    common.add_argument("--only", help="run only tasks of this object or with this task name")

    p = _Parser(prog="fanocert", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    r = sub.add_parser("run", parents=[common], help="run a scenario file")
    r.add_argument("file")
    b = sub.add_parser("builtin", parents=[common], help="run a built-in case")
    b.add_argument("case", choices=BUILTINS)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    if args.threads < 1 or args.power_bound < 1 or (args.trunc is not None and args.trunc < 2):
        print("fanocert: --threads and --power-bound must be positive, --trunc at least 2", file=sys.stderr)
        return 2
    try:
        if args.command == "run":
            with open(args.file) as fh:
                sc = parse_scenario(fh.read())
        else:
            sc = builtin(args.case)
    except (OSError, ScenarioError) as exc:
        print(f"fanocert: {exc}", file=sys.stderr)
        return 2
    settings = Settings(
        order=ORDERS[args.order] if args.order else None,
        trunc=args.trunc,
        threads=args.threads,
        power_bound=args.power_bound,
        only=args.only,
    )
    report = run_scenario(sc, settings)
    text = render(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["status"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
