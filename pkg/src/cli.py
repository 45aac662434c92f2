"""
Command Line Interface

This module provides the `flgame` command. Subcommands: `solve`, `mech`,
`verify-sp`, `ratio-sweep`, `search`, `regress` and `gen`.

Exit codes:
- 0: ok
- 2: malformed input, infeasible instance or exceeded budget
- 3: mechanism precondition not met
- 4: strategyproofness violation found
- 5: a ratio exceeds the mechanism's proven bound
- 6: regression fixture failure
"""

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from functools import partial
from pathlib import Path

from .bounds import theoretical_bound
from .config import load_settings
from .coords import format_coord, parse_coord
from .errors import (
    BudgetExceededError,
    InputError,
    PreconditionError,
    UnsupportedVariantError,
)
from .fixtures import run_regressions
from .generator import Family, GenSpec, generate
from .mechanisms import mechanism_ids, parse_mechanism
from .model import Variant
from .reporting import (
    SweepRow,
    dump_record,
    load_instance,
    optimum_record,
    ratio_record,
    save_instance,
    spec_from_dict,
    spec_to_dict,
    suite_record,
    write_sweep,
)
from .solver import brute_force_optimal, fast_optimal_sum
from .verification import (
    approx_ratio,
    map_ordered,
    sp_suite,
    worst_ratio_search,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_VIOLATION = 4
EXIT_BOUND = 5
EXIT_REGRESSION = 6

GEN_FLAGS = (
    "family",
    "n",
    "k",
    "variant",
    "seed",
    "lo",
    "hi",
    "denominator",
    "clusters",
    "spread",
)


def configure_logging(verbosity: int) -> None:
    """WARNING by default, INFO with -v, DEBUG with -vv; to stderr."""
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _emit(record: dict) -> None:
    print(dump_record(record))


def _gen_spec(args: argparse.Namespace) -> GenSpec:
    """Experiment config file (if any) overridden by explicit flags."""
    fields: dict = {}
    if args.config is not None:
        try:
            payload = json.loads(Path(args.config).read_text("utf-8"))
        except json.JSONDecodeError as exc:
            raise InputError(exc.msg, exc.lineno, exc.colno) from None
        fields.update(spec_to_dict(spec_from_dict(payload)))
        fields.pop("version")

    for name in GEN_FLAGS:
        value = getattr(args, name)
        if value is not None:
            fields[name] = value

    for name in ("lo", "hi", "spread"):
        if name in fields:
            fields[name] = parse_coord(fields[name])
    return GenSpec(**fields)


def cmd_solve(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    opt = brute_force_optimal(inst, load_settings())
    fast = fast_optimal_sum(inst) if inst.variant is Variant.SUM else None
    if fast is not None and fast.cost != opt.cost:
        logger.error(
            "fast solver disagrees: %s != %s",
            format_coord(fast.cost),
            format_coord(opt.cost),
        )
    _emit(optimum_record(inst, opt, fast))
    return EXIT_OK


def cmd_mech(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    report = approx_ratio(parse_mechanism(args.mech), inst, load_settings())
    _emit(ratio_record(report))
    return EXIT_OK


def cmd_verify_sp(args: argparse.Namespace) -> int:
    spec = _gen_spec(args)
    suite = sp_suite(
        parse_mechanism(args.mech),
        spec,
        args.trials,
        args.grid_points,
        args.workers,
    )
    record = suite_record(suite, spec)
    logger.info("%s: %s", suite.mechanism.value, record["summary"])
    _emit(record)
    return EXIT_OK if suite.passed else EXIT_VIOLATION


def cmd_ratio_sweep(args: argparse.Namespace) -> int:
    mech = parse_mechanism(args.mech)
    spec = _gen_spec(args)
    settings = load_settings()
    bound = theoretical_bound(mech, spec.variant, spec.n, spec.k)
    reports = map_ordered(
        partial(approx_ratio, mech, settings=settings),
        generate(spec, args.trials),
        args.workers,
    )

    rows = []
    exceeded = 0
    for index, report in enumerate(reports):
        inst = report.instance
        rows.append(
            SweepRow(
                seed_index=index,
                n=inst.n,
                k=inst.k,
                variant=inst.variant,
                mech_cost=report.mech_cost,
                opt_cost=report.opt_cost,
                ratio=report.ratio,
            )
        )
        if bound is not None and report.ratio > bound:
            exceeded += 1
            logger.error(
                "instance %d: ratio %s exceeds the bound %s",
                index,
                format_coord(report.ratio),
                format_coord(bound),
            )

    if args.out is None:
        worst = write_sweep(rows, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as stream:
            worst = write_sweep(rows, stream)

    logger.info(
        "%s: %d instances, max ratio %s, bound %s",
        mech.value,
        len(rows),
        "-" if worst is None else format_coord(worst),
        "none" if bound is None else format_coord(bound),
    )
    return EXIT_BOUND if exceeded else EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    report = worst_ratio_search(
        parse_mechanism(args.mech),
        Variant(args.variant or Variant.SUM),
        args.n or 3,
        args.k or 2,
        args.trials,
        args.rounds,
        args.seed or 0,
        load_settings(),
        args.workers,
    )
    _emit(ratio_record(report))
    return EXIT_OK


def cmd_regress(args: argparse.Namespace) -> int:
    results = run_regressions(args.only)
    width = max(len(result.name) for result in results)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status}  {result.name:<{width}}  {result.details}")

    passed = sum(result.passed for result in results)
    print(f"{passed}/{len(results)} fixtures passed")
    return EXIT_OK if passed == len(results) else EXIT_REGRESSION


def cmd_gen(args: argparse.Namespace) -> int:
    spec = _gen_spec(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    (out / "experiment.json").write_text(
        json.dumps(spec_to_dict(spec), sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    instances = generate(spec, args.trials)
    for index, inst in enumerate(instances):
        save_instance(inst, out / f"instance-{index:04d}.json")

    logger.info("wrote %d instances to %s", len(instances), out)
    return EXIT_OK


def _add_gen_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="Experiment config file (JSON)")
    parser.add_argument(
        "--family", choices=[family.value for family in Family]
    )
    parser.add_argument("--variant", choices=[v.value for v in Variant])
    parser.add_argument("--n", type=int, help="Agents per instance")
    parser.add_argument("--k", type=int, help="Facilities per instance")
    parser.add_argument("--seed", type=int, help="Master seed")
    parser.add_argument("--lo", help="Left end of the coordinate range")
    parser.add_argument("--hi", help="Right end of the coordinate range")
    parser.add_argument("--denominator", type=int, help="Lattice denominator")
    parser.add_argument("--clusters", type=int, help="Cluster count")
    parser.add_argument("--spread", help="Cluster half-width")
    parser.add_argument(
        "--trials", type=int, default=100, help="Number of instances"
    )


def _add_workers_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--workers",
        type=int,
        default=1,
        help="Worker processes; output is identical for any count",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flgame",
        description=(
            "Agent-constrained facility location on a line: optimal "
            "solutions, mechanisms and their verification."
        ),
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="More logging"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="Exact optimal solution")
    solve.add_argument("--instance", required=True, help="Instance file")
    solve.set_defaults(handler=cmd_solve)

    mech = commands.add_parser("mech", help="Run a mechanism on an instance")
    mech.add_argument("--mech", required=True, choices=mechanism_ids())
    mech.add_argument("--instance", required=True, help="Instance file")
    mech.set_defaults(handler=cmd_mech)

    verify = commands.add_parser(
        "verify-sp", help="Search generated instances for profitable lies"
    )
    verify.add_argument("--mech", required=True, choices=mechanism_ids())
    verify.add_argument(
        "--grid-points", type=int, help="Misreport grid size (default 200)"
    )
    _add_workers_flag(verify)
    _add_gen_flags(verify)
    verify.set_defaults(handler=cmd_verify_sp)

    sweep = commands.add_parser(
        "ratio-sweep", help="Exact ratios over generated instances (CSV)"
    )
    sweep.add_argument("--mech", required=True, choices=mechanism_ids())
    sweep.add_argument("--out", help="CSV path, stdout when omitted")
    _add_workers_flag(sweep)
    _add_gen_flags(sweep)
    sweep.set_defaults(handler=cmd_ratio_sweep)

    search = commands.add_parser(
        "search", help="Hill-climb towards a worst-case instance"
    )
    search.add_argument("--mech", required=True, choices=mechanism_ids())
    search.add_argument("--variant", choices=[v.value for v in Variant])
    search.add_argument("--n", type=int)
    search.add_argument("--k", type=int)
    search.add_argument("--trials", type=int, default=100)
    search.add_argument("--rounds", type=int, help="Step-halving rounds")
    search.add_argument("--seed", type=int)
    _add_workers_flag(search)
    search.set_defaults(handler=cmd_search)

    regress = commands.add_parser("regress", help="Replay fixed fixtures")
    regress.add_argument("--only", help="Run a single fixture")
    regress.set_defaults(handler=cmd_regress)

    gen = commands.add_parser("gen", help="Write generated instance files")
    gen.add_argument("--out", required=True, help="Output directory")
    _add_gen_flags(gen)
    gen.set_defaults(handler=cmd_gen)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """
    Runs the command line and returns its exit code.

    Example:
        - main(["regress"])  # Returns: 0
        - main(["mech", "--mech", "uniform", "--instance", "even.json"])
          # Returns: 3
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)

    try:
        return args.handler(args)
    except PreconditionError as exc:
        print(f"flgame: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (
        InputError,
        BudgetExceededError,
        UnsupportedVariantError,
        OSError,
    ) as exc:
        print(f"flgame: {exc}", file=sys.stderr)
        return EXIT_INPUT


__all__ = [
    "EXIT_OK",
    "EXIT_INPUT",
    "EXIT_PRECONDITION",
    "EXIT_VIOLATION",
    "EXIT_BOUND",
    "EXIT_REGRESSION",
    "configure_logging",
    "build_parser",
    "main",
]
