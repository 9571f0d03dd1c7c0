"""End-to-end drivers over the elementary moves.

`decompose_morphism` factors a log crepant contraction into flop-type
contractions followed by log blow-downs, recording a re-verifiable trace.
`minimize` drives a state over a point base to one admitting no further
move.  `verify_trace` independently replays a trace, re-checking every
predicate and certificate.  `generate_crepant_pair` manufactures valid
inputs by running the factorization backwards: iterated crepant blow-ups.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .crepant import (
    Classification,
    PointBase,
    SurfaceState,
    TargetBase,
    is_log_crepant,
)
from .errors import (
    InvalidStateError,
    LogSurfaceError,
    NoAdmissibleTargetError,
    NotCrepantError,
    NotLogTerminalError,
    NotNefError,
    NotNestedError,
    StuckInPhase2Error,
    TheoremViolationError,
)
from .moves import (
    BlowdownCheck,
    MoveKind,
    MoveRecord,
    epsilon_bound,
    is_flop_minimal,
    is_log_blowdown,
    is_log_flopping,
    contract_blowdown,
    contract_flop,
    is_nef_on_marked,
)
from .surface import (
    BlowUpTarget,
    CurveConfig,
    at_point,
    blow_up,
    free_point_on,
    next_curve_id,
    validate_config,
)


@dataclass(frozen=True)
class MorphismSpec:
    """A log crepant contraction, given by nested contracted sets S1 ⊆ S2."""

    config: CurveConfig
    source_contracted: frozenset[int]
    target_contracted: frozenset[int]

    def __init__(
        self,
        config: CurveConfig,
        source_contracted: Iterable[int],
        target_contracted: Iterable[int],
    ):
        object.__setattr__(self, "config", config)
        object.__setattr__(self, "source_contracted", frozenset(source_contracted))
        object.__setattr__(self, "target_contracted", frozenset(target_contracted))


@dataclass(frozen=True)
class DecompositionTrace:
    """An ordered move list splitting into a flop phase and a blow-down phase.

    Steps before `flop_minimal_index` are flop-type contractions; the state
    reached there admits no further flop relative to the end set; the
    remaining steps are log blow-downs.  Replaying from `start` contracts
    exactly `end`.
    """

    steps: tuple[MoveRecord, ...]
    flop_minimal_index: int
    start: frozenset[int]
    end: frozenset[int]


def _flop_record(state: SurfaceState, cid: int) -> tuple[SurfaceState, MoveRecord]:
    eps = epsilon_bound(state, cid)
    new_state = contract_flop(state, cid)
    record = MoveRecord(
        MoveKind.FLOP,
        cid,
        state.crepant.discrepancies,
        new_state.crepant.discrepancies,
        epsilon=eps,
    )
    return new_state, record


def _blowdown_record(
    state: SurfaceState, cid: int, check: BlowdownCheck
) -> tuple[SurfaceState, MoveRecord]:
    new_state = contract_blowdown(state, cid)
    record = MoveRecord(
        MoveKind.BLOWDOWN,
        cid,
        state.crepant.discrepancies,
        new_state.crepant.discrepancies,
        order=check.order,
    )
    return new_state, record


def decompose_morphism(spec: MorphismSpec) -> DecompositionTrace:
    """Factor the contraction into flops followed by log blow-downs.

    Phase 1 contracts, lowest id first, the remaining curves of coefficient
    below 1; each must pass the flop predicate, and a failure is a library
    bug, not an input property.  The intermediate state is checked to admit
    no further flop.  Phase 2 contracts the remaining coefficient-1 curves,
    each time the lowest id passing the blow-down predicate; running out of
    candidates early raises ``StuckInPhase2Error``.
    """
    s1 = spec.source_contracted
    s2 = spec.target_contracted
    if not s1 <= s2:
        raise NotNestedError(f"{sorted(s1)} is not a subset of {sorted(s2)}")
    base = TargetBase(s2)
    state = SurfaceState(spec.config, s1, base)
    end_state = SurfaceState(spec.config, s2, base)
    for endpoint in (state, end_state):
        if endpoint.classification < Classification.LOG_TERMINAL:
            raise NotLogTerminalError(
                f"state contracting {sorted(endpoint.contracted)} classifies as "
                f"{endpoint.classification.name}"
            )
    if not is_log_crepant(spec.config, s1, s2):
        raise NotCrepantError(
            f"contracting {sorted(s2)} does not factor log-crepantly through "
            f"{sorted(s1)}"
        )

    steps: list[MoveRecord] = []
    while True:
        candidates = sorted(
            cid
            for cid in s2 - state.contracted
            if spec.config.curve(cid).boundary_coeff < 1
        )
        if not candidates:
            break
        pick = candidates[0]
        check = is_log_flopping(state, pick)
        if not check:
            raise TheoremViolationError(
                f"phase 1: curve {pick} should be of flop type but is not: "
                f"{check.detail or check.reason}"
            )
        state, record = _flop_record(state, pick)
        steps.append(record)
    flop_minimal_index = len(steps)
    try:
        minimal = is_flop_minimal(state)
    except (NotLogTerminalError, NotNefError) as exc:
        raise TheoremViolationError(
            f"state after phase 1 lost its standing: {exc}"
        ) from exc
    if not minimal:
        raise TheoremViolationError(
            "state after phase 1 still admits a flop-type contraction"
        )
    while state.contracted != s2:
        remaining = sorted(s2 - state.contracted)
        for pick in remaining:
            check = is_log_blowdown(state, pick)
            if check:
                state, record = _blowdown_record(state, pick, check)
                steps.append(record)
                break
        else:
            raise StuckInPhase2Error(
                f"no curve in {remaining} admits a log blow-down"
            )
    return DecompositionTrace(tuple(steps), flop_minimal_index, s1, s2)


def minimize(state: SurfaceState) -> DecompositionTrace:
    """Contract moves until none applies, over a point base.

    Each round applies the lowest-id flop-type contraction if any exists,
    otherwise the lowest-id log blow-down; the loop stops when neither does,
    which is exactly the no-further-move certificate of minimality.  Nef-ness
    is asserted after every step.
    """
    if not isinstance(state.base, PointBase):
        raise InvalidStateError("minimization runs over a point base only")
    state._checked
    if state.classification < Classification.LOG_TERMINAL:
        raise NotLogTerminalError(
            f"state classifies as {state.classification.name}; log terminality is required"
        )
    if not is_nef_on_marked(state):
        raise NotNefError("state is not nef on its marked curves")

    start = state.contracted
    budget = len(state.uncontracted)
    steps: list[MoveRecord] = []
    while True:
        record = None
        for cid in sorted(state.uncontracted):
            if is_log_flopping(state, cid):
                state, record = _flop_record(state, cid)
                break
        if record is None:
            for cid in sorted(state.uncontracted):
                check = is_log_blowdown(state, cid)
                if check:
                    state, record = _blowdown_record(state, cid, check)
                    break
        if record is None:
            break
        steps.append(record)
        if len(steps) > budget:
            raise TheoremViolationError("minimization exceeded its step budget")
        if not is_nef_on_marked(state):
            raise TheoremViolationError(
                f"step {len(steps)} ({record.kind.value} of curve {record.curve}) "
                "broke nef-ness"
            )
    flop_minimal_index = 0
    while (
        flop_minimal_index < len(steps)
        and steps[flop_minimal_index].kind is MoveKind.FLOP
    ):
        flop_minimal_index += 1
    if any(s.kind is MoveKind.FLOP for s in steps[flop_minimal_index:]):
        raise TheoremViolationError(
            "a flop-type contraction became available again after a log blow-down"
        )
    return DecompositionTrace(
        tuple(steps), flop_minimal_index, start, state.contracted
    )


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    failure: str | None = None
    step_index: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_trace(
    config: CurveConfig, start: Iterable[int], trace: DecompositionTrace
) -> VerifyResult:
    """Independently replay a trace, re-checking every claim it makes.

    Checks phase ordering against the split index, re-runs the full predicate
    for each step, recomputes and compares each certificate exactly, checks
    minimality at the split point, and confirms the end set.  Never raises:
    any replay failure is reported in the result.
    """
    start_set = frozenset(start)
    if start_set != trace.start:
        return VerifyResult(
            False,
            f"trace starts at {sorted(trace.start)}, not {sorted(start_set)}",
        )
    if not 0 <= trace.flop_minimal_index <= len(trace.steps):
        return VerifyResult(
            False, f"split index {trace.flop_minimal_index} is out of range"
        )
    base = TargetBase(trace.end)
    contracted = start_set
    try:
        for index, step in enumerate(trace.steps):
            expected_kind = (
                MoveKind.FLOP
                if index < trace.flop_minimal_index
                else MoveKind.BLOWDOWN
            )
            if step.kind is not expected_kind:
                return VerifyResult(
                    False,
                    f"step kind {step.kind.value} on the wrong side of the split",
                    index,
                )
            state = SurfaceState(config, contracted, base)
            if step.discrepancies_before != state.crepant.discrepancies:
                return VerifyResult(
                    False, "recorded prior discrepancies do not match", index
                )
            if step.kind is MoveKind.FLOP:
                check = is_log_flopping(state, step.curve)
                if not check:
                    return VerifyResult(
                        False,
                        f"curve {step.curve} is not of flop type: "
                        f"{check.detail or check.reason}",
                        index,
                    )
                if step.epsilon != epsilon_bound(state, step.curve):
                    return VerifyResult(
                        False, "recorded perturbation bound does not match", index
                    )
            else:
                check = is_log_blowdown(state, step.curve)
                if not check:
                    return VerifyResult(
                        False,
                        f"curve {step.curve} is not a log blow-down: "
                        f"{check.detail or check.reason}",
                        index,
                    )
                if step.order is None or tuple(step.order) != check.order:
                    return VerifyResult(
                        False, "recorded contraction order does not match", index
                    )
            contracted = contracted | {step.curve}
            after = SurfaceState(config, contracted, base)
            if step.discrepancies_after != after.crepant.discrepancies:
                return VerifyResult(
                    False, "recorded posterior discrepancies do not match", index
                )
        split_state = SurfaceState(
            config,
            trace.start | frozenset(
                s.curve for s in trace.steps[: trace.flop_minimal_index]
            ),
            base,
        )
        if not is_flop_minimal(split_state):
            return VerifyResult(
                False,
                "the state at the split still admits a flop-type contraction",
                trace.flop_minimal_index,
            )
    except (LogSurfaceError, ValueError) as exc:
        return VerifyResult(False, f"replay error: {exc}")
    if contracted != trace.end:
        return VerifyResult(
            False,
            f"replay ends at {sorted(contracted)}, trace claims {sorted(trace.end)}",
        )
    return VerifyResult(True)


def generate_crepant_pair(
    template: CurveConfig, depth: int, seed: int
) -> MorphismSpec:
    """Build a valid input pair by `depth` seeded crepant blow-ups.

    Admissible centres keep the blow-up crepant by construction: a crossing
    point whose incident coefficients sum to at least 1 (the new curve gets
    the sum minus 1) or a fresh point on a coefficient-1 curve (the new curve
    gets 0).  The pair contracts nothing on the source and all the new curves
    on the target.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    problems = validate_config(template)
    if problems:
        raise InvalidStateError(
            "template is invalid: " + "; ".join(str(v) for v in problems)
        )
    rng = random.Random(seed)
    config = template
    new_ids: list[int] = []
    for _ in range(depth):
        choices: list[tuple[BlowUpTarget, Fraction | int]] = []
        for p in sorted(config.points, key=lambda p: p.id):
            if len(p.incident) == 2:
                total = sum(
                    (config.curve(cid).boundary_coeff for cid in p.incident),
                    start=0,
                )
                if total >= 1:
                    choices.append((at_point(p.id), total - 1))
        for c in config.curves:
            if c.boundary_coeff == 1:
                choices.append((free_point_on(c.id), 0))
        if not choices:
            raise NoAdmissibleTargetError(
                "the configuration offers no crepant blow-up centre"
            )
        target, coeff = rng.choice(choices)
        new_ids.append(next_curve_id(config))
        config = blow_up(config, target, coeff)
    return MorphismSpec(config, frozenset(), frozenset(new_ids))
