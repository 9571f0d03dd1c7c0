"""The two elementary contraction moves and the predicates guarding them.

A *flop-type contraction* removes a curve of log degree zero and negative
image self-intersection that stays clear of every non-klt centre; it is
crepant and keeps the pair log terminal.  A *log blow-down* removes a
coefficient-1 rational curve whose image is a (−1)-curve joining two boundary
branches through a smooth point, undoing a corner blow-up.  Both return fresh
states and assert their own postconditions: a failed assertion is a bug in
the library, never a property of valid input, and raises
``TheoremViolationError``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .crepant import (
    Classification,
    ComponentImage,
    DivisorialCenter,
    NodeCenter,
    PointBase,
    SurfaceState,
    TargetBase,
    correction_multiplicities,
    is_log_crepant,
    lc_centers,
    log_degree,
    pushforward_self_intersection,
)
from .errors import (
    InvalidStateError,
    LogSurfaceError,
    NotABlowdownError,
    NotFloppingError,
    NotLogTerminalError,
    NotNefError,
    TheoremViolationError,
)
from .ratlin import determinant
from .surface import (
    LocalBlowdownModel,
    gram,
    pairing,
    run_contraction,
)


@dataclass(frozen=True)
class EpsilonChoice:
    """A witness interval for the perturbation argument.

    ``supremum`` is the least upper bound of admissible perturbations of the
    flopping curve's coefficient (``None`` for unbounded); ``chosen`` is the
    reproducible representative used by certificates — half the supremum, or
    1/2 when unbounded.
    """

    supremum: Fraction | None
    chosen: Fraction


class MoveKind(Enum):
    FLOP = "flop"
    BLOWDOWN = "blowdown"


@dataclass(frozen=True)
class MoveRecord:
    """One applied move plus the certificate needed to re-verify it."""

    kind: MoveKind
    curve: int
    discrepancies_before: dict[int, Fraction]
    discrepancies_after: dict[int, Fraction]
    epsilon: EpsilonChoice | None = None
    order: tuple[int, ...] | None = None


@dataclass(frozen=True)
class FlopCheck:
    ok: bool
    reason: str | None = None
    detail: str | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class BlowdownCheck:
    """Verdict plus, on success, the stepwise local contraction order and the
    local models just before and just after the final contraction."""

    ok: bool
    reason: str | None = None
    detail: str | None = None
    order: tuple[int, ...] = ()
    local_before: LocalBlowdownModel | None = field(default=None, repr=False)
    local_after: LocalBlowdownModel | None = field(default=None, repr=False)

    def __bool__(self) -> bool:
        return self.ok


def _require_uncontracted(state: SurfaceState, cid: int) -> None:
    state._checked
    state.config.curve(cid)
    if cid in state.contracted:
        raise InvalidStateError(f"curve {cid} is already contracted")


def _require_log_terminal(state: SurfaceState) -> None:
    if state.classification < Classification.LOG_TERMINAL:
        raise NotLogTerminalError(
            f"state classifies as {state.classification.name}; log terminality is required"
        )


def is_log_flopping(state: SurfaceState, cid: int) -> FlopCheck:
    """Test whether contracting `cid` is a flop-type divisorial contraction.

    Requires: the curve is exceptional over the base, its log degree
    vanishes, its image self-intersection is negative, and it avoids every
    non-klt centre (in particular its own coefficient is below 1).
    """
    _require_uncontracted(state, cid)
    _require_log_terminal(state)
    if isinstance(state.base, TargetBase) and cid not in state.base.contracted_on_target:
        return FlopCheck(
            False, "NotExceptionalOverBase", f"curve {cid} survives on the target model"
        )
    degree = log_degree(state, cid)
    if degree != 0:
        return FlopCheck(False, "NonzeroLogDegree", f"log degree is {degree}, not 0")
    image_self = pushforward_self_intersection(state, cid)
    if image_self >= 0:
        return FlopCheck(
            False, "ImageNotNegative", f"image self-intersection is {image_self} ≥ 0"
        )
    for center in lc_centers(state):
        if isinstance(center, DivisorialCenter) and center.curve == cid:
            return FlopCheck(
                False, "IsDivisorialCenter", f"curve {cid} has coefficient 1"
            )
        if isinstance(center, NodeCenter) and cid in center.curves:
            return FlopCheck(
                False,
                "MeetsNodeCenter",
                f"curve {cid} passes through corner point {center.point}",
            )
        if isinstance(center, ComponentImage) and any(
            pairing(state.config, cid, member) > 0 for member in center.component
        ):
            return FlopCheck(
                False,
                "MeetsComponentImage",
                f"curve {cid} meets contracted component {sorted(center.component)} "
                "whose image is a non-klt point",
            )
    return FlopCheck(True)


def epsilon_bound(state: SurfaceState, cid: int) -> EpsilonChoice:
    """The admissible perturbation interval for a flopping curve.

    Raising the curve's coefficient by any ε below the supremum keeps every
    residual at most 1 (hence the pair log terminal): the binding constraints
    are the coefficient cap 1 − d and, for each contracted curve picked up by
    the image pullback with multiplicity λ > 0, the headroom (1 − e)/λ.
    """
    check = is_log_flopping(state, cid)
    if not check:
        raise NotFloppingError(
            f"curve {cid} is not of flop type: {check.detail or check.reason}"
        )
    constraints = [Fraction(1) - state.config.curve(cid).boundary_coeff]
    data = state.crepant
    for j, lam in correction_multiplicities(state, cid).items():
        if lam > 0:
            constraints.append((Fraction(1) - data.residual[j]) / lam)
    if not constraints:
        return EpsilonChoice(None, Fraction(1, 2))
    supremum = min(constraints)
    return EpsilonChoice(supremum, supremum / 2)


@dataclass(frozen=True)
class PicardRank:
    """A rank with its frame of reference.

    mode "relative-to-target": curves still to contract to reach the target.
    mode "of-model-over-point": Picard number of the current model itself.
    mode "deficit-from-master-model": curves contracted so far, reported when
    the master model's Picard number is unknown.
    """

    value: int
    mode: str

    def step_delta(self) -> int:
        """Expected change per single contraction in this mode."""
        return 1 if self.mode == "deficit-from-master-model" else -1


def relative_picard_rank(state: SurfaceState) -> PicardRank:
    state._checked
    if isinstance(state.base, TargetBase):
        return PicardRank(
            len(state.base.contracted_on_target - state.contracted),
            "relative-to-target",
        )
    rank = state.config.picard_rank_of_model
    if rank is not None:
        return PicardRank(rank - len(state.contracted), "of-model-over-point")
    return PicardRank(len(state.contracted), "deficit-from-master-model")


@dataclass(frozen=True)
class NefReport:
    """Nef verdict over the curves visible to the base.

    `complete` is False for a point base, where only marked curves can be
    tested and unmarked curves of the underlying surface stay out of reach.
    """

    ok: bool
    complete: bool
    failing: tuple[tuple[int, Fraction], ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def is_nef_on_marked(state: SurfaceState) -> NefReport:
    """Check log degree ≥ 0 on every curve the base makes relevant.

    Over a target base this tests exactly the curves still to be contracted
    (a complete relative test); over a point base it tests every marked
    uncontracted curve, which is only as complete as the marking.
    """
    state._checked
    if isinstance(state.base, TargetBase):
        scope = sorted(state.base.contracted_on_target - state.contracted)
        complete = True
    else:
        scope = sorted(state.uncontracted)
        complete = False
    failing = tuple(
        (cid, degree)
        for cid in scope
        if (degree := log_degree(state, cid)) < 0
    )
    return NefReport(not failing, complete, failing)


def is_flop_minimal(state: SurfaceState) -> bool:
    """True when no uncontracted curve admits a flop-type contraction."""
    _require_log_terminal(state)
    if not is_nef_on_marked(state):
        raise NotNefError("state is not nef on the tested curves")
    return not any(is_log_flopping(state, cid) for cid in sorted(state.uncontracted))


def _assert_crepant_step(
    old: SurfaceState, new: SurfaceState, cid: int, move: str
) -> None:
    """Common postconditions of both moves; failures signal library bugs."""
    try:
        new._checked
    except LogSurfaceError as exc:
        raise TheoremViolationError(
            f"{move} of curve {cid} produced an invalid state: {exc}"
        ) from exc
    if new.classification < Classification.LOG_TERMINAL:
        raise TheoremViolationError(
            f"{move} of curve {cid} left a {new.classification.name} state"
        )
    if not is_log_crepant(old.config, old.contracted, new.contracted):
        raise TheoremViolationError(f"{move} of curve {cid} is not log crepant")
    before = relative_picard_rank(old)
    after = relative_picard_rank(new)
    if before.mode != after.mode or after.value - before.value != before.step_delta():
        raise TheoremViolationError(
            f"{move} of curve {cid} moved the Picard rank from {before} to {after}"
        )


def contract_flop(state: SurfaceState, cid: int) -> SurfaceState:
    """Apply a flop-type divisorial contraction, returning the new state."""
    check = is_log_flopping(state, cid)
    if not check:
        raise NotFloppingError(
            f"curve {cid} is not of flop type: {check.detail or check.reason}"
        )
    new_state = SurfaceState(state.config, state.contracted | {cid}, state.base)
    _assert_crepant_step(state, new_state, cid, "flop contraction")
    return new_state


def is_log_blowdown(state: SurfaceState, cid: int) -> BlowdownCheck:
    """Test whether contracting `cid` is a log blow-down.

    The curve must be rational with coefficient 1.  Contracting the adjacent
    already-contracted components must leave its image a (−1)-curve meeting
    exactly two distinct coefficient-1 boundary curves transversally, and the
    final contraction of that image must leave those two curves crossing
    exactly once — the normal-crossing corner the move blows down to.
    """
    _require_uncontracted(state, cid)
    curve = state.config.curve(cid)
    if curve.boundary_coeff != 1:
        return BlowdownCheck(
            False, "CoefficientNotOne", f"coefficient is {curve.boundary_coeff}"
        )
    if curve.genus != 0:
        return BlowdownCheck(False, "PositiveGenus", f"genus is {curve.genus}")
    adjacent: set[int] = set()
    for component in state.components:
        if any(pairing(state.config, cid, member) > 0 for member in component):
            adjacent |= component
    model = LocalBlowdownModel.from_config(state.config, adjacent | {cid})
    sim = run_contraction(model, restrict_to=adjacent)
    if not sim:
        return BlowdownCheck(
            False,
            "AdjacentSetNotContractible",
            f"{sim.reason}: {sim.detail}",
            sim.order,
        )
    if adjacent:
        det = determinant(gram(state.config, sorted(adjacent)))
        if abs(det) != 1:
            raise TheoremViolationError(
                f"set {sorted(adjacent)} contracted to smooth points but its Gram "
                f"determinant is {det}"
            )
    local_before = model.clone()
    if model.self_intersection(cid) != -1:
        return BlowdownCheck(
            False,
            "ImageNotMinusOne",
            f"image self-intersection is {model.self_intersection(cid)}",
            sim.order,
        )
    partners = model.partners(cid)
    if len(partners) != 2:
        return BlowdownCheck(
            False,
            "BoundaryNotTwoCurves",
            f"image meets {len(partners)} distinct curves: {list(partners)}",
            sim.order,
        )
    a, b = partners
    if model.crossings(cid, a) != 1 or model.crossings(cid, b) != 1:
        return BlowdownCheck(
            False,
            "NonTransverseContact",
            f"image meets {a} and {b} with multiplicities "
            f"{model.crossings(cid, a)}, {model.crossings(cid, b)}",
            sim.order,
        )
    if model.coeff(a) != 1 or model.coeff(b) != 1:
        return BlowdownCheck(
            False,
            "BoundaryCoefficientBelowOne",
            f"curves {a}, {b} have coefficients {model.coeff(a)}, {model.coeff(b)}",
            sim.order,
        )
    after = model.clone()
    after.contract(cid)
    if after.crossings(a, b) != 1:
        return BlowdownCheck(
            False,
            "NoCornerAtImage",
            f"after the final contraction curves {a}, {b} cross "
            f"{after.crossings(a, b)} times",
            sim.order,
        )
    return BlowdownCheck(
        True, None, None, sim.order + (cid,), local_before, after
    )


def contract_blowdown(state: SurfaceState, cid: int) -> SurfaceState:
    """Apply a log blow-down, returning the new state."""
    check = is_log_blowdown(state, cid)
    if not check:
        raise NotABlowdownError(
            f"curve {cid} is not a log blow-down: {check.detail or check.reason}"
        )
    if isinstance(state.base, TargetBase) and cid not in state.base.contracted_on_target:
        raise NotABlowdownError(
            f"curve {cid} survives on the target model; contracting it would leave "
            "the base unreachable"
        )
    new_state = SurfaceState(state.config, state.contracted | {cid}, state.base)
    _assert_crepant_step(state, new_state, cid, "log blow-down")
    return new_state
