"""
File Formats and Records

This module reads and writes instance files, builds result records and
writes ratio-sweep tables.

Instance files and records are versioned JSON with sorted keys. Every
exact value is written as a rational string ("3/2"), which is
authoritative; `*_float` fields are display-only.
"""

import csv
import hashlib
import json
import logging
import re
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, TextIO

from .coords import format_coord, parse_coord, to_display_float
from .errors import InputError
from .generator import GenSpec
from .model import Instance, Lottery, Variant, make_instance
from .solver import OptResult
from .verification import RatioReport, SpViolation, SuiteReport

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

SWEEP_COLUMNS = [
    "seed_index",
    "n",
    "k",
    "variant",
    "mech_cost",
    "opt_cost",
    "ratio",
    "ratio_float",
]

STRING_TOKEN = r'"((?:[^"\\]|\\.)*)"'


def stable_json_dumps(payload: Any) -> str:
    """Compact JSON with sorted keys, the canonical form for digests."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _position(text: str, offset: int) -> tuple[int, int]:
    """1-based line and column of a character offset."""
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _location_offset(text: str, index: int) -> int | None:
    """Offset of the index-th string inside the "locations" array."""
    key = re.search(r'"locations"\s*:\s*\[', text)
    if key is None:
        return None
    tokens = re.compile(r"\]|" + STRING_TOKEN + r"|[^\s,\[\]\"]+")
    count = 0
    for match in tokens.finditer(text, key.end()):
        if match.group(0) == "]":
            return None
        if count == index:
            return match.start()
        count += 1
    return None


def instance_to_dict(inst: Instance) -> dict:
    """
    The instance file payload.

    Example:
        - instance_to_dict(make_instance(["-0.5", "2"], 2, "max"))
          # Returns: {"k": 2, "locations": ["-1/2", "2"],
          #           "variant": "max", "version": 1}
    """
    return {
        "version": FORMAT_VERSION,
        "k": inst.k,
        "variant": inst.variant.value,
        "locations": [format_coord(x) for x in inst.locations],
    }


def instance_digest(inst: Instance) -> str:
    """SHA-256 of the canonical JSON of (k, variant, locations)."""
    payload = instance_to_dict(inst)
    del payload["version"]
    return hashlib.sha256(stable_json_dumps(payload).encode()).hexdigest()


def parse_instance_text(text: str) -> Instance:
    """
    Parses an instance file exactly.

    Locations may be decimal or rational strings; plain JSON numbers are
    read from their literal text, so they stay exact as well. Errors carry
    the line and column of the offending token.

    Example:
        - parse_instance_text('{"k": 2, "variant": "sum",'
                              ' "locations": ["0", "1.5"]}').locations
          # Returns: (Fraction(0), Fraction(3, 2))
    """
    try:
        payload = json.loads(text, parse_float=parse_coord)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, line=exc.lineno, column=exc.colno) from None

    if not isinstance(payload, dict):
        raise InputError("an instance file holds a JSON object", 1, 1)

    version = payload.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise InputError(f"unsupported instance file version {version!r}")

    for key in ("k", "variant", "locations"):
        if key not in payload:
            raise InputError(f"missing field {key!r}")

    k = payload["k"]
    if isinstance(k, bool) or not isinstance(k, int):
        raise InputError(f"k must be an integer, got {k!r}")

    locations = payload["locations"]
    if not isinstance(locations, list):
        raise InputError("locations must be a list")

    parsed = []
    for index, raw in enumerate(locations):
        try:
            parsed.append(parse_coord(raw))
        except InputError as exc:
            offset = _location_offset(text, index)
            line, column = None, None
            if offset is not None:
                line, column = _position(text, offset)
            raise InputError(
                f"locations[{index}]: {exc.message}", line, column
            ) from None

    return make_instance(parsed, k, payload["variant"])


def load_instance(path: str | Path) -> Instance:
    """Reads an instance file."""
    text = Path(path).read_text(encoding="utf-8")
    return parse_instance_text(text)


def dump_instance(inst: Instance) -> str:
    """Instance file text, diff-stable."""
    return json.dumps(instance_to_dict(inst), sort_keys=True, indent=2) + "\n"


def save_instance(inst: Instance, path: str | Path) -> None:
    """
    Writes an instance file.

    Args:
        inst (Instance): Instance to save
        path (str | Path): Destination, overwritten when present

    Example:
        - save_instance(make_instance([0, 1, 3], 2, "sum"), "i.json")
          # Writes: {"k": 2, "locations": ["0", "1", "3"], ...}
    """
    Path(path).write_text(dump_instance(inst), encoding="utf-8")
    logger.debug("wrote instance %s", path)


def exact_fields(name: str, value: Fraction) -> dict:
    """
    A rational string plus its display float.

    Example:
        - exact_fields("ratio", Fraction(22, 21))
          # Returns: {"ratio": "22/21", "ratio_float": 1.04761904761905}
    """
    return {
        name: format_coord(value),
        f"{name}_float": to_display_float(value),
    }


def lottery_to_list(inst: Instance, lot: Lottery) -> list[dict]:
    """
    Support entries of a lottery, in support order.

    Args:
        inst (Instance): Instance the lottery was computed on
        lot (Lottery): The lottery

    Returns:
        list[dict]: Host indices, their coordinates and the probability

    Example:
        - lottery_to_list((0, 1, 3), {(0, 1): 2/3, (1, 2): 1/3})[1]
          # Returns: {"indices": [1, 2], "coordinates": ["1", "3"],
          #           "probability": "1/3", "probability_float": 0.33...}
    """
    entries = []
    for sol, p in lot.support:
        entries.append(
            {
                "indices": list(sol.host_agents),
                "coordinates": [
                    format_coord(inst.locations[i]) for i in sol.host_agents
                ],
                **exact_fields("probability", p),
            }
        )
    return entries


def violation_to_dict(violation: SpViolation) -> dict:
    """
    JSON form of a profitable misreport.

    Args:
        violation (SpViolation): The violation

    Returns:
        dict: Agent index and exact rational strings for the rest

    Example:
        - violation_to_dict(check_deviation(..., 2, Fraction(3, 2)))
          # Returns: {"agent": 2, "misreport": "3/2",
          #           "honest_cost": "5", "deviated_cost": "7/2", ...}
    """
    return {
        "agent": violation.agent,
        "true_location": format_coord(violation.true_location),
        "misreport": format_coord(violation.misreport),
        "honest_cost": format_coord(violation.honest_cost),
        "deviated_cost": format_coord(violation.deviated_cost),
    }


def ratio_record(
    report: RatioReport, violations: Iterable[SpViolation] | None = None
) -> dict:
    """
    The result record of a mechanism run.

    Returns:
        dict: Mechanism id, instance and digest, lottery, exact and display
        costs and ratio, plus violations when given
    """
    inst = report.instance
    record = {
        "version": FORMAT_VERSION,
        "mechanism": report.mechanism.value,
        "instance": instance_to_dict(inst),
        "instance_digest": instance_digest(inst),
        "lottery": lottery_to_list(inst, report.lottery),
        **exact_fields("social_cost", report.mech_cost),
        **exact_fields("optimal_cost", report.opt_cost),
        **exact_fields("ratio", report.ratio),
    }
    if violations is not None:
        record["violations"] = [violation_to_dict(v) for v in violations]
    return record


def optimum_record(
    inst: Instance, opt: OptResult, fast: OptResult | None = None
) -> dict:
    """The result record of the `solve` command."""
    record = {
        "version": FORMAT_VERSION,
        "instance": instance_to_dict(inst),
        "instance_digest": instance_digest(inst),
        "solution": {
            "indices": list(opt.solution.host_agents),
            "coordinates": [
                format_coord(inst.locations[i])
                for i in opt.solution.host_agents
            ],
        },
        **exact_fields("optimal_cost", opt.cost),
    }
    if fast is not None:
        record["fast_solution"] = list(fast.solution.host_agents)
        record["fast_agrees"] = fast.cost == opt.cost
    return record


def suite_record(suite: SuiteReport, spec: GenSpec) -> dict:
    """
    The result record of the `verify-sp` command.

    Args:
        suite (SuiteReport): Totals of the sweep
        spec (GenSpec): Generator spec the instances came from

    Returns:
        dict: Counts, a one-line summary and every violation with its
        seed index and instance

    Example:
        - suite_record(sp_suite("median-right", spec, 10), spec)["summary"]
          # Returns: "no violation found over 10 trials"
    """
    if suite.violations:
        summary = (
            f"{len(suite.violations)} violation(s) found "
            f"over {suite.trials} trials"
        )
    else:
        summary = f"no violation found over {suite.trials} trials"
    return {
        "version": FORMAT_VERSION,
        "mechanism": suite.mechanism.value,
        "experiment": spec_to_dict(spec),
        "trials": suite.trials,
        "deviations_checked": suite.deviations_checked,
        "deviations_skipped": suite.deviations_skipped,
        "summary": summary,
        "violations": [
            {
                "seed_index": index,
                "instance": instance_to_dict(inst),
                "violation": violation_to_dict(violation),
            }
            for index, inst, violation in suite.violations
        ],
    }


def dump_record(record: dict) -> str:
    """
    Result record text: sorted keys, two-space indent.

    Example:
        - dump_record({"ratio": "1", "mechanism": "median-right"})
          # Returns: '{\\n  "mechanism": "median-right",\\n  "ratio": "1"\\n}'
    """
    return json.dumps(record, sort_keys=True, indent=2)


def spec_to_dict(spec: GenSpec) -> dict:
    """The experiment-config payload of a generator spec."""
    return {
        "version": FORMAT_VERSION,
        "family": spec.family.value,
        "n": spec.n,
        "k": spec.k,
        "variant": spec.variant.value,
        "seed": spec.seed,
        "lo": format_coord(spec.lo),
        "hi": format_coord(spec.hi),
        "denominator": spec.denominator,
        "clusters": spec.clusters,
        "spread": format_coord(spec.spread),
    }


def spec_from_dict(payload: dict) -> GenSpec:
    """
    Generator spec from an experiment-config payload.

    Args:
        payload (dict): Decoded JSON object; missing keys take defaults

    Returns:
        GenSpec: The validated spec

    Example:
        - spec_from_dict({"family": "coincident", "n": 5}).n  # Returns: 5
        - spec_from_dict([1, 2])  # Raises: InputError
    """
    if not isinstance(payload, dict):
        raise InputError(
            "bad experiment config: expected a JSON object, got "
            + type(payload).__name__
        )
    fields = dict(payload)
    fields.pop("version", None)
    for key in ("lo", "hi", "spread"):
        if key in fields:
            fields[key] = parse_coord(fields[key])
    try:
        return GenSpec(**fields)
    except TypeError as exc:
        raise InputError(f"bad experiment config: {exc}") from None


@dataclass(frozen=True)
class SweepRow:
    """One instance of a ratio sweep."""

    seed_index: int
    n: int
    k: int
    variant: Variant
    mech_cost: Fraction
    opt_cost: Fraction
    ratio: Fraction


def write_sweep(rows: list[SweepRow], stream: TextIO) -> Fraction | None:
    """
    Writes the sweep table, ending with a row holding the maximum ratio.

    Returns:
        Fraction | None: The maximum ratio, None for an empty sweep
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row.seed_index,
                row.n,
                row.k,
                row.variant.value,
                format_coord(row.mech_cost),
                format_coord(row.opt_cost),
                format_coord(row.ratio),
                repr(to_display_float(row.ratio)),
            ]
        )

    worst = max((row.ratio for row in rows), default=None)
    if worst is not None:
        writer.writerow(
            ["max", "", "", "", "", "", format_coord(worst)]
            + [repr(to_display_float(worst))]
        )
    return worst


def read_sweep(stream: TextIO) -> tuple[list[SweepRow], Fraction | None]:
    """
    Reads a table written by `write_sweep`.

    Returns:
        tuple: The rows and the maximum ratio of the final row
    """
    reader = csv.DictReader(stream)
    if reader.fieldnames != SWEEP_COLUMNS:
        raise InputError(f"unexpected sweep columns: {reader.fieldnames}")

    rows: list[SweepRow] = []
    worst = None
    for record in reader:
        if record["seed_index"] == "max":
            worst = parse_coord(record["ratio"])
            continue
        rows.append(
            SweepRow(
                seed_index=int(record["seed_index"]),
                n=int(record["n"]),
                k=int(record["k"]),
                variant=Variant(record["variant"]),
                mech_cost=parse_coord(record["mech_cost"]),
                opt_cost=parse_coord(record["opt_cost"]),
                ratio=parse_coord(record["ratio"]),
            )
        )
    return rows, worst


__all__ = [
    "FORMAT_VERSION",
    "SWEEP_COLUMNS",
    "stable_json_dumps",
    "instance_to_dict",
    "instance_digest",
    "parse_instance_text",
    "load_instance",
    "dump_instance",
    "save_instance",
    "exact_fields",
    "lottery_to_list",
    "violation_to_dict",
    "ratio_record",
    "optimum_record",
    "suite_record",
    "dump_record",
    "spec_to_dict",
    "spec_from_dict",
    "SweepRow",
    "write_sweep",
    "read_sweep",
]
