"""Command-line interface: scenario files in, verdicts/traces/graphs out.

Scenario and trace documents are JSON with every rational written as an
exact fraction string ("p/q"); a SHA-256 digest of the configuration ties
each trace to its scenario.  Exit codes: 0 success, 2 validation or parse
failure, 3 broken internal guarantee or stuck decomposition.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

from .crepant import (
    Base,
    Classification,
    PointBase,
    SurfaceState,
    TargetBase,
)
from .decompose import (
    DecompositionTrace,
    MorphismSpec,
    decompose_morphism,
    minimize,
    verify_trace,
)
from .errors import (
    InvalidStateError,
    LogSurfaceError,
    StuckInPhase2Error,
    TheoremViolationError,
)
from .moves import EpsilonChoice, MoveKind, MoveRecord, is_log_flopping
from .surface import (
    BlowUpTarget,
    CurveConfig,
    at_point,
    blow_up,
    free_point_on,
    generic_point,
    next_curve_id,
    validate_config,
)

CLASS_NAMES = {
    Classification.NOT_LC: "NotLC",
    Classification.LOG_CANONICAL: "LogCanonical",
    Classification.LOG_TERMINAL: "LogTerminal",
    Classification.KLT: "KLT",
}


# ---------------------------------------------------------------------------
# parsing helpers

def parse_fraction(value: Any) -> Fraction:
    if isinstance(value, bool):
        raise ValueError(f"expected a fraction string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"expected a fraction string, got {value!r}")


def parse_ids(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"expected comma-separated curve ids, got {text!r}") from None


def parse_base(text: str) -> Base:
    if text == "point":
        return PointBase()
    if text.startswith("target:"):
        return TargetBase(parse_ids(text[len("target:"):]))
    raise ValueError(f"expected 'point' or 'target:IDS', got {text!r}")


def parse_target(text: str) -> BlowUpTarget:
    if text == "generic":
        return generic_point()
    kind, _, ref = text.partition(":")
    if kind == "point" and ref:
        return at_point(int(ref))
    if kind == "free" and ref:
        return free_point_on(int(ref))
    raise ValueError(
        f"expected 'point:ID', 'free:CURVE' or 'generic', got {text!r}"
    )


# ---------------------------------------------------------------------------
# scenario documents

def config_from_json(data: Any) -> tuple[CurveConfig, frozenset[int], Base]:
    """Parse a scenario document into (config, default contracted, default base)."""
    if not isinstance(data, dict):
        raise ValueError("scenario document must be a JSON object")
    curves = []
    for entry in data.get("curves", []):
        curves.append(
            (
                int(entry["id"]),
                int(entry.get("genus", 0)),
                int(entry["self_intersection"]),
                parse_fraction(entry.get("coeff", 0)),
            )
        )
    points = []
    for entry in data.get("points", []):
        points.append((int(entry["id"]), [int(cid) for cid in entry["incident"]]))
    rank = data.get("picard_rank_of_model")
    config = CurveConfig.build(curves, points, None if rank is None else int(rank))
    contracted = frozenset(int(cid) for cid in data.get("contracted", []))
    raw_base = data.get("base", "point")
    if raw_base == "point":
        base: Base = PointBase()
    elif isinstance(raw_base, dict) and "target" in raw_base:
        base = TargetBase(int(cid) for cid in raw_base["target"])
    else:
        raise ValueError(f"expected base 'point' or {{'target': IDS}}, got {raw_base!r}")
    return config, contracted, base


def config_to_json(
    config: CurveConfig,
    contracted: Iterable[int] = (),
    base: Base | None = None,
) -> dict:
    doc: dict[str, Any] = {
        "curves": [
            {
                "id": c.id,
                "genus": c.genus,
                "self_intersection": c.self_intersection,
                "coeff": str(c.boundary_coeff),
            }
            for c in sorted(config.curves, key=lambda c: c.id)
        ],
        "points": [
            {"id": p.id, "incident": sorted(p.incident)}
            for p in sorted(config.points, key=lambda p: p.id)
        ],
    }
    if config.picard_rank_of_model is not None:
        doc["picard_rank_of_model"] = config.picard_rank_of_model
    contracted = sorted(contracted)
    if contracted:
        doc["contracted"] = contracted
    if isinstance(base, TargetBase):
        doc["base"] = {"target": sorted(base.contracted_on_target)}
    return doc


def config_digest(config: CurveConfig) -> str:
    canonical = {
        "curves": [
            [c.id, c.genus, c.self_intersection, str(c.boundary_coeff)]
            for c in sorted(config.curves, key=lambda c: c.id)
        ],
        "points": [
            [p.id, sorted(p.incident)]
            for p in sorted(config.points, key=lambda p: p.id)
        ],
        "picard_rank_of_model": config.picard_rank_of_model,
    }
    text = json.dumps(canonical, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def load_scenario(path: str) -> tuple[CurveConfig, frozenset[int], Base]:
    return config_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def _require_valid(config: CurveConfig) -> None:
    problems = validate_config(config)
    if problems:
        raise InvalidStateError(
            "invalid configuration: " + "; ".join(str(v) for v in problems)
        )


# ---------------------------------------------------------------------------
# trace documents

def _fractions_to_json(values: dict[int, Fraction]) -> dict[str, str]:
    return {str(cid): str(value) for cid, value in sorted(values.items())}


def _fractions_from_json(data: Any) -> dict[int, Fraction]:
    return {int(cid): parse_fraction(value) for cid, value in data.items()}


def trace_to_json(config: CurveConfig, trace: DecompositionTrace) -> dict:
    steps = []
    for step in trace.steps:
        doc: dict[str, Any] = {
            "kind": step.kind.value,
            "curve": step.curve,
            "discrepancies_before": _fractions_to_json(step.discrepancies_before),
            "discrepancies_after": _fractions_to_json(step.discrepancies_after),
        }
        if step.kind is MoveKind.FLOP:
            eps = step.epsilon
            doc["epsilon"] = {
                "supremum": None if eps.supremum is None else str(eps.supremum),
                "chosen": str(eps.chosen),
            }
        else:
            doc["order"] = list(step.order)
        steps.append(doc)
    return {
        "scenario_digest": config_digest(config),
        "start": sorted(trace.start),
        "end": sorted(trace.end),
        "flop_minimal_index": trace.flop_minimal_index,
        "steps": steps,
    }


def trace_from_json(data: Any) -> tuple[str, DecompositionTrace]:
    if not isinstance(data, dict):
        raise ValueError("trace document must be a JSON object")
    steps = []
    for entry in data.get("steps", []):
        kind = MoveKind(entry["kind"])
        epsilon = None
        order = None
        if kind is MoveKind.FLOP:
            eps = entry["epsilon"]
            supremum = eps.get("supremum")
            epsilon = EpsilonChoice(
                None if supremum is None else parse_fraction(supremum),
                parse_fraction(eps["chosen"]),
            )
        else:
            order = tuple(int(cid) for cid in entry["order"])
        steps.append(
            MoveRecord(
                kind,
                int(entry["curve"]),
                _fractions_from_json(entry["discrepancies_before"]),
                _fractions_from_json(entry["discrepancies_after"]),
                epsilon=epsilon,
                order=order,
            )
        )
    trace = DecompositionTrace(
        tuple(steps),
        int(data["flop_minimal_index"]),
        frozenset(int(cid) for cid in data["start"]),
        frozenset(int(cid) for cid in data["end"]),
    )
    return str(data.get("scenario_digest", "")), trace


def _dump_json(doc: dict, path: str) -> None:
    Path(path).write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


# ---------------------------------------------------------------------------
# DOT emission

def dot_graph(config: CurveConfig, contracted: frozenset[int]) -> str:
    lines = ["graph curve_config {", "  node [shape=box];"]
    for c in sorted(config.curves, key=lambda c: c.id):
        label = f"{c.id}: {c.genus},{c.self_intersection},{c.boundary_coeff}"
        style = ", style=filled" if c.id in contracted else ""
        lines.append(f'  c{c.id} [label="{label}"{style}];')
    for p in sorted(config.points, key=lambda p: p.id):
        incident = sorted(p.incident)
        if len(incident) == 2:
            a, b = incident
            lines.append(f'  c{a} -- c{b} [label="p{p.id}"];')
        elif len(incident) == 1:
            lines.append(f"  p{p.id} [shape=point];")
            lines.append(f'  p{p.id} -- c{incident[0]} [label="p{p.id}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# step/trace pretty printing

def _print_trace(trace: DecompositionTrace) -> None:
    for index, step in enumerate(trace.steps, start=1):
        if step.kind is MoveKind.FLOP:
            print(f"{index}. flop curve {step.curve} epsilon {step.epsilon.chosen}")
        else:
            order = ",".join(str(cid) for cid in step.order)
            print(f"{index}. blowdown curve {step.curve} order {order}")
    print(f"flop phase length: {trace.flop_minimal_index}")


def _print_discrepancies(state: SurfaceState) -> None:
    for cid, value in sorted(state.crepant.discrepancies.items()):
        print(f"{cid}: a = {value}")


# ---------------------------------------------------------------------------
# command handlers

def _cmd_validate(args: argparse.Namespace) -> int:
    config, _, _ = load_scenario(args.file)
    problems = validate_config(config)
    if problems:
        for violation in problems:
            print(str(violation), file=sys.stderr)
        return 2
    print(f"valid: {len(config.curves)} curves, {len(config.points)} points")
    return 0


def _resolve_contract(args: argparse.Namespace, default: frozenset[int]) -> frozenset[int]:
    if getattr(args, "contract", None) is None:
        return default
    return frozenset(parse_ids(args.contract))


def _cmd_classify(args: argparse.Namespace) -> int:
    config, default_contracted, base = load_scenario(args.file)
    _require_valid(config)
    state = SurfaceState(config, _resolve_contract(args, default_contracted), base)
    print(CLASS_NAMES[state.classification])
    return 0


def _cmd_discrepancies(args: argparse.Namespace) -> int:
    config, default_contracted, base = load_scenario(args.file)
    _require_valid(config)
    state = SurfaceState(config, _resolve_contract(args, default_contracted), base)
    _print_discrepancies(state)
    return 0


def _cmd_flops(args: argparse.Namespace) -> int:
    config, default_contracted, base = load_scenario(args.file)
    _require_valid(config)
    if args.base is not None:
        base = parse_base(args.base)
    state = SurfaceState(config, _resolve_contract(args, default_contracted), base)
    for cid in sorted(state.uncontracted):
        check = is_log_flopping(state, cid)
        if check:
            print(f"{cid}: yes")
        else:
            print(f"{cid}: no ({check.reason})")
    return 0


def _cmd_decompose(args: argparse.Namespace) -> int:
    config, _, _ = load_scenario(args.file)
    _require_valid(config)
    spec = MorphismSpec(config, parse_ids(args.from_ids), parse_ids(args.to_ids))
    trace = decompose_morphism(spec)
    _print_trace(trace)
    _print_discrepancies(SurfaceState(config, trace.end, TargetBase(trace.end)))
    if args.trace is not None:
        _dump_json(trace_to_json(config, trace), args.trace)
    return 0


def _cmd_minimize(args: argparse.Namespace) -> int:
    config, default_contracted, _ = load_scenario(args.file)
    _require_valid(config)
    state = SurfaceState(config, _resolve_contract(args, default_contracted), PointBase())
    trace = minimize(state)
    _print_trace(trace)
    final = ",".join(str(cid) for cid in sorted(trace.end)) or "(none)"
    print(f"final contracted: {final}")
    if args.trace is not None:
        _dump_json(trace_to_json(config, trace), args.trace)
    return 0


def _cmd_blowup(args: argparse.Namespace) -> int:
    config, contracted, base = load_scenario(args.file)
    _require_valid(config)
    target = parse_target(args.at)
    coeff = parse_fraction(args.coeff)
    new_id = next_curve_id(config)
    new_config = blow_up(config, target, coeff)
    _dump_json(config_to_json(new_config, contracted, base), args.output)
    print(f"new curve {new_id}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    config, _, _ = load_scenario(args.file)
    _require_valid(config)
    digest, trace = trace_from_json(
        json.loads(Path(args.trace).read_text(encoding="utf-8"))
    )
    actual = config_digest(config)
    if digest != actual:
        print(
            f"error: trace digest {digest or '(missing)'} does not match scenario "
            f"digest {actual}",
            file=sys.stderr,
        )
        return 2
    result = verify_trace(config, trace.start, trace)
    if result:
        print(f"verified: {len(trace.steps)} steps")
        return 0
    where = "" if result.step_index is None else f" at step {result.step_index}"
    print(f"verification failed{where}: {result.failure}", file=sys.stderr)
    return 2


def _cmd_dot(args: argparse.Namespace) -> int:
    config, contracted, _ = load_scenario(args.file)
    _require_valid(config)
    text = dot_graph(config, contracted)
    if args.output is not None:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        print(text, end="")
    return 0


# ---------------------------------------------------------------------------
# parser wiring

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logsurf",
        description="Exact combinatorial toolkit for contracting curve "
        "configurations on log surfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario file's structural invariants")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("classify", help="classify the contraction of a curve set")
    p.add_argument("file")
    p.add_argument("--contract", help="comma-separated curve ids (default: scenario)")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("discrepancies", help="print exact discrepancies of a contraction")
    p.add_argument("file")
    p.add_argument("--contract", help="comma-separated curve ids (default: scenario)")
    p.set_defaults(func=_cmd_discrepancies)

    p = sub.add_parser("flops", help="report which curves admit a flop-type contraction")
    p.add_argument("file")
    p.add_argument("--contract", help="comma-separated curve ids (default: scenario)")
    p.add_argument("--base", help="'point' or 'target:IDS' (default: scenario)")
    p.set_defaults(func=_cmd_flops)

    p = sub.add_parser("decompose", help="factor a log crepant contraction into moves")
    p.add_argument("file")
    p.add_argument("--from", dest="from_ids", required=True, metavar="IDS")
    p.add_argument("--to", dest="to_ids", required=True, metavar="IDS")
    p.add_argument("--trace", help="write the trace document to this path")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("minimize", help="contract moves over a point base until minimal")
    p.add_argument("file")
    p.add_argument("--contract", help="comma-separated curve ids (default: scenario)")
    p.add_argument("--trace", help="write the trace document to this path")
    p.set_defaults(func=_cmd_minimize)

    p = sub.add_parser("blowup", help="blow up a centre and write the new scenario")
    p.add_argument("file")
    p.add_argument("--at", required=True, help="point:ID, free:CURVE or generic")
    p.add_argument("--coeff", required=True, help="coefficient of the new curve, P/Q")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_blowup)

    p = sub.add_parser("verify", help="replay and check a trace document")
    p.add_argument("file")
    p.add_argument("--trace", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("dot", help="emit the configuration as a Graphviz graph")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_dot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TheoremViolationError, StuckInPhase2Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except LogSurfaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
