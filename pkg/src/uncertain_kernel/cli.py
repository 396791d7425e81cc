"""Command-line driver: ``uncertain-kernel compress|solve|verify|gen``.

File format
-----------
All artifacts are UTF-8 JSON objects with ``format`` (currently 1) and
``kind`` (``mst``, ``matroid``, ``matching`` or ``shortest-path``).
Graphs are written as::

    {"vertices": [0, 1, 2],
     "edges": [{"id": 1, "u": 0, "v": 1, "w": 1},
               {"id": 3, "u": 1, "v": 2, "uncertain": true}]}

Bipartite graphs add ``left`` and ``right`` and, for matching instances,
``L0`` and ``R0``; uncertain edges carry ``"uncertain": true``.

Exit codes: 0 success, 1 verification failed, 2 bad input or parameters,
3 exhaustive threshold exceeded, 4 weight overflow, 5 bundle does not
belong to the instance.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from . import __version__
from .documents import (
    bundle_from_doc,
    bundle_to_doc,
    document_hash,
    dumps,
    instance_from_doc,
    instance_to_doc,
    provenance_for,
)
from .errors import InstanceError, KernelError, ThresholdExceeded, WeightOverflow
from .generate import FAMILIES, gen_matching, gen_matroid, gen_mst, gen_shortest_path
from .matching import (
    DEFAULT_THRESHOLD,
    MatchingBundle,
    RemovalAssignment,
    UncertainMatchingInstance,
    compress_matching,
    solve_matching,
)
from .matroid_compress import MatroidBundle, compress_matroid, solve_matroid
from .mst import (
    MstBundle,
    ShortestPathBundle,
    UncertainMstInstance,
    UncertainShortestPathInstance,
    compress_mst,
    compress_shortest_path,
    solve_mst,
    solve_shortest_path,
)
from .oracles import VerificationPlan, verify

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_THRESHOLD = 3
EXIT_OVERFLOW = 4
EXIT_HASH = 5

log = logging.getLogger("uncertain_kernel")


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


# --------------------------------------------------------------------------
# helpers


def _read_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        return json.loads(text)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_INPUT) from exc


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    tmp = Path(f"{path}.tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


_ID = re.compile(r"^[A-Za-z]*(\d+)$")


def parse_id(text: str) -> int:
    """``"e3"`` and ``"3"`` both name id 3."""
    m = _ID.match(text.strip())
    if not m:
        raise CliError(f"not an id: {text!r}", EXIT_INPUT)
    return int(m.group(1))


def parse_weight(text: str) -> tuple[int, int]:
    key, sep, value = text.partition("=")
    if not sep:
        raise CliError(f"expected ID=WEIGHT, got {text!r}", EXIT_INPUT)
    try:
        return parse_id(key), int(value)
    except ValueError as exc:
        raise CliError(f"bad weight in {text!r}", EXIT_INPUT) from exc


def _compress(inst: Any, trace: bool, threshold: int) -> Any:
    if isinstance(inst, UncertainMstInstance):
        return compress_mst(inst, trace)
    if isinstance(inst, UncertainShortestPathInstance):
        return compress_shortest_path(inst.graph, inst.F, inst.s, inst.t)
    if isinstance(inst, UncertainMatchingInstance):
        return compress_matching(inst, trace, threshold)
    return compress_matroid(inst, trace)


# --------------------------------------------------------------------------
# subcommands


def cmd_compress(args: argparse.Namespace) -> int:
    doc = _read_json(args.input)
    inst = instance_from_doc(doc)
    bundle = _compress(inst, args.trace, args.threshold)
    _write(dumps(bundle_to_doc(bundle, provenance_for(doc))), args.output)
    log.info("compressed %s instance, k = %d", doc["kind"], bundle.k)
    return EXIT_OK


def _assignment_from_file(path: str) -> dict[str, Any]:
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise CliError("assignment must be a JSON object", EXIT_INPUT)
    weights = doc.get("weights", {})
    if isinstance(weights, dict):
        weights = [{"id": parse_id(str(k)), "w": v} for k, v in weights.items()]
    try:
        return {
            "weights": {int(item["id"]): int(item["w"]) for item in weights},
            "remove": [int(x) for x in doc.get("remove", [])],
            "unavailable": [int(x) for x in doc.get("unavailable", [])],
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: malformed assignment", EXIT_INPUT) from exc


def cmd_solve(args: argparse.Namespace) -> int:
    bundle = bundle_from_doc(_read_json(args.bundle))
    a = {"weights": {}, "remove": [], "unavailable": []}
    if args.assignment:
        a = _assignment_from_file(args.assignment)
    for text in args.w:
        eid, w = parse_weight(text)
        a["weights"][eid] = w
    a["remove"] += [parse_id(x) for x in args.remove]
    a["unavailable"] += [parse_id(x) for x in args.drop_edge]

    if isinstance(bundle, MatchingBundle):
        if a["weights"]:
            raise CliError("matching bundles take --remove/--drop-edge, not weights", EXIT_INPUT)
        removed = set(a["remove"])
        unknown = removed - bundle.L0 - bundle.R0
        if unknown:
            raise CliError(f"not uncertain vertices: {sorted(unknown)}", EXIT_INPUT)
        value: int | None = solve_matching(
            bundle,
            RemovalAssignment(removed & bundle.L0, removed & bundle.R0, frozenset(a["unavailable"])),
        )
    else:
        if a["remove"] or a["unavailable"]:
            raise CliError("only matching bundles accept removals", EXIT_INPUT)
        if isinstance(bundle, MstBundle):
            value = solve_mst(bundle, a["weights"])
        elif isinstance(bundle, ShortestPathBundle):
            value = solve_shortest_path(bundle, a["weights"])
        else:
            assert isinstance(bundle, MatroidBundle)
            value = solve_matroid(bundle, a["weights"])
    print("unreachable" if value is None else value)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    inst_doc = _read_json(args.instance)
    bundle_doc = _read_json(args.bundle)
    expected = (bundle_doc.get("provenance") or {}).get("input_sha256") if isinstance(bundle_doc, dict) else None
    if expected is not None and expected != document_hash(inst_doc):
        raise CliError("bundle was not produced from this instance (input hash differs)", EXIT_HASH)
    inst = instance_from_doc(inst_doc)
    bundle = bundle_from_doc(bundle_doc)
    if args.samples is not None:
        plan = VerificationPlan("sampled", args.samples, args.seed, args.wmax)
    else:
        plan = VerificationPlan("exhaustive", wmax=args.wmax)
    try:
        report = verify(inst, bundle, plan, jobs=args.jobs)
    except InstanceError as exc:
        raise CliError(str(exc), EXIT_HASH) from exc
    if args.report:
        _write(report.to_json() + "\n", args.report)
    if not args.quiet:
        print(report.table())
    elif not report.passed:
        print(f"FAIL: {len(report.mismatches)} of {report.total} instantiations differ", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_gen(args: argparse.Namespace) -> int:
    params: dict[str, Any]
    if args.kind in ("mst", "shortest-path"):
        params = {"n": args.n, "m": args.m, "f": args.f, "wmax": args.wmax}
        make = gen_mst if args.kind == "mst" else gen_shortest_path
        inst = make(args.n, args.m, args.f, args.seed, args.wmax)
    elif args.kind == "matching":
        params = {"left": args.left, "right": args.right, "l0": args.l0, "r0": args.r0, "e0": args.e0}
        inst = gen_matching(args.left, args.right, args.l0, args.r0, args.e0, args.seed)
    else:
        params = {"family": args.family, "n": args.n, "f": args.f, "wmax": args.wmax, "rank": args.rank}
        inst = gen_matroid(args.family, args.n, args.f, args.seed, args.wmax, args.rank)
    generator = {"seed": args.seed, "params": params}
    _write(dumps(instance_to_doc(inst, generator)), args.output)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def _global_flags(p: argparse.ArgumentParser, default: Any) -> None:
    p.add_argument("--jobs", type=int, default=default, help="worker processes for verify")
    p.add_argument("--trace", action="store_true", default=default, help="embed intermediate sets in bundles")
    p.add_argument("--quiet", action="store_true", default=default, help="only print errors and results")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uncertain-kernel",
        description="Compress optimisation instances with uncertain parts and check the result.",
    )
    _global_flags(parser, argparse.SUPPRESS)
    parser.set_defaults(jobs=1, trace=False, quiet=False)
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", parents=[common], help="compress an instance into a bundle")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--threshold", type=int, default=DEFAULT_THRESHOLD,
                   help="largest |L0|+|R0|+|E0| for matching compression")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("solve", parents=[common], help="answer one instantiation from a bundle")
    p.add_argument("bundle")
    p.add_argument("-a", "--assignment", help="JSON file with weights / remove / unavailable")
    p.add_argument("--w", action="append", default=[], metavar="ID=W", help="weight of an uncertain edge")
    p.add_argument("--remove", action="append", default=[], metavar="ID", help="absent uncertain vertex")
    p.add_argument("--drop-edge", action="append", default=[], metavar="ID", help="unavailable uncertain edge")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[common], help="check a bundle against brute force")
    p.add_argument("instance")
    p.add_argument("bundle")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="every instantiation (default)")
    mode.add_argument("--samples", type=int, help="random instantiations instead")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--wmax", type=int, default=7, help="weights range over 0..wmax")
    p.add_argument("--report", help="also write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", parents=[common], help="generate a seeded random instance")
    p.add_argument("--kind", required=True, choices=["mst", "matroid", "matching", "shortest-path"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=6, help="vertices (graphs) or ground size (matroids)")
    p.add_argument("--m", type=int, default=9, help="edges")
    p.add_argument("--f", type=int, default=2, help="uncertain edges or elements")
    p.add_argument("--wmax", type=int, default=7)
    p.add_argument("--family", choices=FAMILIES, default="graphic")
    p.add_argument("--rank", type=int)
    p.add_argument("--left", type=int, default=4)
    p.add_argument("--right", type=int, default=4)
    p.add_argument("--l0", type=int, default=1)
    p.add_argument("--r0", type=int, default=1)
    p.add_argument("--e0", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except CliError as exc:
        code, message = exc.code, str(exc)
    except ThresholdExceeded as exc:
        code, message = EXIT_THRESHOLD, str(exc)
    except WeightOverflow as exc:
        code, message = EXIT_OVERFLOW, str(exc)
    except (KernelError, ValueError) as exc:
        code, message = EXIT_INPUT, str(exc)
    print(f"error: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
