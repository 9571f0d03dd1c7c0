"""Discrepancy computation and singularity classification.

Given a curve configuration, a subset of curves to contract, and a base
(either a point or a further-contracted target model), the crepant-pullback
system determines how the log canonical class of the contracted model pulls
back.  The residual coefficients it assigns to the contracted curves drive
everything downstream: classification, centre detection, and the legality of
each rewriting move.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .errors import (
    InvalidStateError,
    NotNestedError,
    SingularMatrixError,
    UnknownIdError,
)
from .ratlin import is_negative_definite, solve_symmetric
from .surface import (
    CurveConfig,
    canonical_degree,
    connected_components,
    gram,
    pairing,
    smooth_point_blowdown,
    validate_config,
)


@dataclass(frozen=True)
class PointBase:
    """The whole configuration sits over a single point."""

    def contains(self, contracted: frozenset[int]) -> bool:
        return True


@dataclass(frozen=True)
class TargetBase:
    """The state maps onto the model obtained by contracting `contracted_on_target`.

    A state with contracted set S maps to this base by contracting the rest,
    so S must stay inside the target set.
    """

    contracted_on_target: frozenset[int]

    def __init__(self, contracted_on_target: Iterable[int]):
        object.__setattr__(self, "contracted_on_target", frozenset(contracted_on_target))

    def contains(self, contracted: frozenset[int]) -> bool:
        return contracted <= self.contracted_on_target


Base = PointBase | TargetBase


@dataclass(frozen=True)
class CrepantData:
    """Solved residual coefficients.

    `residual` covers every curve: the solved value on contracted curves, the
    stated boundary coefficient elsewhere.  Discrepancies are their negatives
    on the contracted set.
    """

    residual: dict[int, Fraction]
    contracted: frozenset[int]

    def discrepancy(self, cid: int) -> Fraction:
        if cid not in self.contracted:
            raise UnknownIdError(f"curve {cid} is not contracted; it has no discrepancy")
        return -self.residual[cid]

    @property
    def discrepancies(self) -> dict[int, Fraction]:
        return {cid: -self.residual[cid] for cid in sorted(self.contracted)}


def _require_contractible(config: CurveConfig, ids: list[int]) -> None:
    if ids and not is_negative_definite(gram(config, ids)):
        raise InvalidStateError(
            f"gram matrix of {ids} is not negative definite; the set is not contractible"
        )


def crepant_pullback(config: CurveConfig, contracted: Iterable[int]) -> CrepantData:
    """Solve for the residual coefficients making the pullback crepant.

    For each contracted curve i the log canonical degree on i must vanish:
    the Gram system  Σ_j e_j (C_j·C_i) = −deg K|_i − Σ_k d_k (C_k·C_i)  over
    contracted j and uncontracted k.  The Gram matrix of a contractible set is
    negative definite, hence invertible, so the solution exists and is unique.
    """
    ids = sorted(set(contracted))
    for cid in ids:
        config.curve(cid)
    _require_contractible(config, ids)
    residual = {c.id: c.boundary_coeff for c in config.curves}
    if ids:
        matrix = gram(config, ids)
        rhs = []
        for i in ids:
            acc = Fraction(canonical_degree(config, i))
            for c in config.curves:
                if c.id not in ids:
                    acc += c.boundary_coeff * pairing(config, c.id, i)
            rhs.append(-acc)
        try:
            solution = solve_symmetric(matrix, tuple(rhs))
        except SingularMatrixError:  # unreachable once negative definiteness holds
            raise InvalidStateError(f"gram matrix of {ids} is singular") from None
        for cid, value in zip(ids, solution):
            residual[cid] = value
    return CrepantData(residual, frozenset(ids))


class Classification(IntEnum):
    """Singularity class of a contraction, ordered weakest to strongest.

    Comparisons express implication: any state classified at level L also
    satisfies every predicate at levels below L.
    """

    NOT_LC = 0
    LOG_CANONICAL = 1
    LOG_TERMINAL = 2
    KLT = 3


def _corner_shape_ok(state: "SurfaceState", component: frozenset[int]) -> bool:
    """Check that a residual-1 component contracts onto a boundary corner.

    The whole component must contract stepwise to a smooth point, and what
    survives there must be exactly two curves of coefficient 1 crossing
    exactly once — a normal-crossing corner of the boundary.
    """
    sim = smooth_point_blowdown(state.config, component)
    if not sim:
        return False
    final = sim.final
    survivors = sorted(final.present)
    if len(survivors) != 2:
        return False
    a, b = survivors
    if final.coeff(a) != 1 or final.coeff(b) != 1:
        return False
    return final.crossings(a, b) == 1


@dataclass(frozen=True, eq=False)
class SurfaceState:
    """A configuration plus the set of curves currently contracted and the base.

    This is the working object of every driver: immutable, with validation,
    the solved crepant data and the classification all cached on first use.
    """

    config: CurveConfig
    contracted: frozenset[int]
    base: Base

    def __init__(
        self,
        config: CurveConfig,
        contracted: Iterable[int] = (),
        base: Base | None = None,
    ):
        object.__setattr__(self, "config", config)
        object.__setattr__(self, "contracted", frozenset(contracted))
        object.__setattr__(self, "base", base if base is not None else PointBase())

    @cached_property
    def _checked(self) -> bool:
        problems = validate_config(self.config)
        if problems:
            raise InvalidStateError(
                "configuration is invalid: " + "; ".join(str(v) for v in problems)
            )
        for cid in self.contracted:
            self.config.curve(cid)
        if not self.base.contains(self.contracted):
            raise NotNestedError(
                f"contracted set {sorted(self.contracted)} is not contained in the "
                f"target set {sorted(self.base.contracted_on_target)}"
            )
        _require_contractible(self.config, sorted(self.contracted))
        if isinstance(self.base, TargetBase):
            for cid in self.base.contracted_on_target:
                self.config.curve(cid)
            _require_contractible(self.config, sorted(self.base.contracted_on_target))
        return True

    @cached_property
    def crepant(self) -> CrepantData:
        self._checked
        return crepant_pullback(self.config, self.contracted)

    def residual(self, cid: int) -> Fraction:
        return self.crepant.residual[cid]

    @cached_property
    def uncontracted(self) -> tuple[int, ...]:
        self._checked
        return tuple(c.id for c in self.config.curves if c.id not in self.contracted)

    @cached_property
    def components(self) -> tuple[frozenset[int], ...]:
        self._checked
        return connected_components(self.config, self.contracted)

    @cached_property
    def classification(self) -> Classification:
        """Classify the contraction by its residual coefficients.

        A residual above 1 on a contracted curve rules out log canonical.
        With residuals at most 1, each component carrying a residual-1 curve
        must contract onto a normal-crossing corner of the boundary — failing
        that leaves the state merely log canonical.  KLT further requires
        every residual and every surviving coefficient strictly below 1.
        """
        self._checked
        data = self.crepant
        on_s = [data.residual[cid] for cid in self.contracted]
        if any(v > 1 for v in on_s):
            return Classification.NOT_LC
        for component in self.components:
            if any(data.residual[cid] == 1 for cid in component):
                if not _corner_shape_ok(self, component):
                    return Classification.LOG_CANONICAL
        if all(v < 1 for v in on_s) and all(
            self.config.curve(cid).boundary_coeff < 1 for cid in self.uncontracted
        ):
            return Classification.KLT
        return Classification.LOG_TERMINAL


def classify(state: SurfaceState) -> Classification:
    return state.classification


@dataclass(frozen=True)
class DivisorialCenter:
    """A surviving curve of coefficient 1: non-klt along the whole curve."""

    curve: int


@dataclass(frozen=True)
class NodeCenter:
    """A crossing point whose two branches both carry residual 1."""

    point: int
    curves: frozenset[int]


@dataclass(frozen=True)
class ComponentImage:
    """The image point of a contracted component containing a residual-1 curve."""

    component: frozenset[int]


LcCenter = DivisorialCenter | NodeCenter | ComponentImage


def lc_centers(state: SurfaceState) -> tuple[LcCenter, ...]:
    """All non-klt centres of the state, in a deterministic order.

    Surviving coefficient-1 curves give divisorial centres; points whose two
    branches both have residual 1 give node centres; contracted components
    containing a residual-1 curve are collapsed to their image points.
    """
    state._checked
    data = state.crepant
    ones = {c.id for c in state.config.curves if data.residual[c.id] == 1}
    out: list[LcCenter] = [
        DivisorialCenter(cid) for cid in sorted(ones - state.contracted)
    ]
    for p in state.config.points:
        if len(p.incident) == 2 and p.incident <= ones:
            out.append(NodeCenter(p.id, p.incident))
    for component in state.components:
        if any(data.residual[cid] == 1 for cid in component):
            out.append(ComponentImage(component))
    return tuple(out)


def pushforward_self_intersection(state: SurfaceState, cid: int) -> Fraction:
    """Self-intersection of the image of curve `cid` after the contraction.

    Computed as C·C̄ where C̄ = C + Σ λ_j E_j is the pullback of the image:
    the correction multiplicities solve gram(S)·λ = −(C·E_j)_j over the
    contracted set S, which must not contain `cid`.
    """
    state._checked
    state.config.curve(cid)
    if cid in state.contracted:
        raise InvalidStateError(f"curve {cid} is contracted; its image is a point")
    ids = sorted(state.contracted)
    base = Fraction(pairing(state.config, cid, cid))
    if not ids:
        return base
    matrix = gram(state.config, ids)
    rhs = tuple(-Fraction(pairing(state.config, cid, j)) for j in ids)
    lam = solve_symmetric(matrix, rhs)
    return base + sum(
        (m * pairing(state.config, cid, j) for m, j in zip(lam, ids)), Fraction(0)
    )


def correction_multiplicities(state: SurfaceState, cid: int) -> dict[int, Fraction]:
    """Multiplicities λ_j of the contracted curves in the pullback of `cid`'s image."""
    state._checked
    state.config.curve(cid)
    if cid in state.contracted:
        raise InvalidStateError(f"curve {cid} is contracted; its image is a point")
    ids = sorted(state.contracted)
    if not ids:
        return {}
    matrix = gram(state.config, ids)
    rhs = tuple(-Fraction(pairing(state.config, cid, j)) for j in ids)
    return dict(zip(ids, solve_symmetric(matrix, rhs)))


def log_degree(state: SurfaceState, cid: int) -> Fraction:
    """Degree of the pulled-back log canonical class on curve `cid`.

    deg K|_C + Σ_k e_k (C_k·C), with the residuals running over every curve
    including C itself.  Vanishes identically on contracted curves by
    construction of the crepant pullback.
    """
    state._checked
    data = state.crepant
    acc = Fraction(canonical_degree(state.config, cid))
    for c in state.config.curves:
        acc += data.residual[c.id] * pairing(state.config, c.id, cid)
    return acc


def is_log_crepant(
    config: CurveConfig, small: Iterable[int], large: Iterable[int]
) -> bool:
    """Whether contracting `large` factors log-crepantly through contracting `small`.

    True exactly when every extra curve keeps its stated boundary coefficient
    as its residual in the larger solution — the additional contraction
    introduces no discrepancy shift.  By uniqueness of the solved systems this
    forces the two residual vectors to agree everywhere.
    """
    small_set = frozenset(small)
    large_set = frozenset(large)
    if not small_set <= large_set:
        raise NotNestedError(f"{sorted(small_set)} is not a subset of {sorted(large_set)}")
    crepant_pullback(config, small_set)  # validates contractibility of the small set
    large_data = crepant_pullback(config, large_set)
    return all(
        large_data.residual[j] == config.curve(j).boundary_coeff
        for j in large_set - small_set
    )
