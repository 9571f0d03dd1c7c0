"""Combinatorial model of a normal-crossing curve configuration on a surface.

A configuration is a finite set of curves (genus, self-intersection, boundary
coefficient) together with marked points.  A point incident to two curves is a
transverse crossing; a point incident to one curve is a marked smooth point.
Tangencies and triple points are unrepresentable by construction, which is the
normal-crossing discipline every rewrite below must preserve.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    BadCoefficientError,
    TheoremViolationError,
    UnknownIdError,
    UnknownTargetError,
)
from .ratlin import SymMatrix, determinant, is_negative_definite


def as_coeff(value: Fraction | int) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational coefficient, got {type(value).__name__}")


@dataclass(frozen=True)
class Curve:
    id: int
    genus: int
    self_intersection: int
    boundary_coeff: Fraction


@dataclass(frozen=True)
class CrossingPoint:
    id: int
    incident: frozenset[int]


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


@dataclass(frozen=True)
class CurveConfig:
    """The master model: an immutable curve configuration.

    ``picard_rank_of_model`` optionally records the Picard number of the
    smooth model the configuration lives on; blow-ups keep it in step.
    """

    curves: tuple[Curve, ...]
    points: tuple[CrossingPoint, ...]
    picard_rank_of_model: int | None = None

    @classmethod
    def build(
        cls,
        curves: Iterable[tuple[int, int, int, Fraction | int]],
        points: Iterable[tuple[int, Iterable[int]]] = (),
        picard_rank_of_model: int | None = None,
    ) -> "CurveConfig":
        """Convenience constructor from (id, genus, self², coeff) and (id, incident) rows."""
        return cls(
            tuple(Curve(i, g, s, as_coeff(d)) for i, g, s, d in curves),
            tuple(CrossingPoint(i, frozenset(inc)) for i, inc in points),
            picard_rank_of_model,
        )

    @cached_property
    def _curve_map(self) -> dict[int, Curve]:
        return {c.id: c for c in self.curves}

    @cached_property
    def _point_map(self) -> dict[int, CrossingPoint]:
        return {p.id: p for p in self.points}

    @cached_property
    def _cross_counts(self) -> dict[tuple[int, int], int]:
        counts: dict[tuple[int, int], int] = {}
        for p in self.points:
            if len(p.incident) == 2:
                a, b = sorted(p.incident)
                counts[(a, b)] = counts.get((a, b), 0) + 1
        return counts

    @cached_property
    def _points_by_curve(self) -> dict[int, tuple[int, ...]]:
        by_curve: dict[int, list[int]] = {c.id: [] for c in self.curves}
        for p in self.points:
            for cid in p.incident:
                if cid in by_curve:
                    by_curve[cid].append(p.id)
        return {cid: tuple(pids) for cid, pids in by_curve.items()}

    @cached_property
    def _violations(self) -> tuple[Violation, ...]:
        out: list[Violation] = []
        seen_curves: set[int] = set()
        for c in self.curves:
            if c.id in seen_curves:
                out.append(Violation("DuplicateId", f"curve id {c.id} appears twice"))
            seen_curves.add(c.id)
            if not (0 <= c.boundary_coeff <= 1):
                out.append(
                    Violation("BadCoefficient", f"curve {c.id} has coefficient {c.boundary_coeff}")
                )
            if c.genus < 0:
                out.append(Violation("BadGenus", f"curve {c.id} has genus {c.genus}"))
        seen_points: set[int] = set()
        for p in self.points:
            if p.id in seen_points:
                out.append(Violation("DuplicateId", f"point id {p.id} appears twice"))
            seen_points.add(p.id)
            if len(p.incident) > 2:
                out.append(
                    Violation("TriplePoint", f"point {p.id} meets curves {sorted(p.incident)}")
                )
            if not p.incident:
                out.append(Violation("EmptyPoint", f"point {p.id} touches no curve"))
            for cid in p.incident:
                if cid not in seen_curves:
                    out.append(
                        Violation("DanglingId", f"point {p.id} references missing curve {cid}")
                    )
        return tuple(out)

    def curve(self, cid: int) -> Curve:
        try:
            return self._curve_map[cid]
        except KeyError:
            raise UnknownIdError(f"no curve with id {cid}") from None

    def point(self, pid: int) -> CrossingPoint:
        try:
            return self._point_map[pid]
        except KeyError:
            raise UnknownIdError(f"no point with id {pid}") from None

    def curve_ids(self) -> tuple[int, ...]:
        return tuple(c.id for c in self.curves)

    def neighbours(self, cid: int) -> dict[int, int]:
        """Curves sharing a point with `cid`, mapped to the crossing count."""
        self.curve(cid)
        out: dict[int, int] = {}
        for (a, b), count in self._cross_counts.items():
            if a == cid:
                out[b] = count
            elif b == cid:
                out[a] = count
        return out


def validate_config(config: CurveConfig) -> tuple[Violation, ...]:
    """Check every structural invariant; an empty result means the model is ok."""
    return config._violations


def pairing(config: CurveConfig, i: int, j: int) -> int:
    """Intersection number: self-intersection on the diagonal, shared-point
    count off it."""
    ci = config.curve(i)
    if i == j:
        return ci.self_intersection
    config.curve(j)
    a, b = sorted((i, j))
    return config._cross_counts.get((a, b), 0)


def canonical_degree(config: CurveConfig, i: int) -> int:
    """Degree of the canonical class on the curve, via adjunction: 2g − 2 − C²."""
    c = config.curve(i)
    return 2 * c.genus - 2 - c.self_intersection


@dataclass(frozen=True)
class BlowUpTarget:
    kind: str  # "point" | "free" | "generic"
    ref: int | None = None


def at_point(point_id: int) -> BlowUpTarget:
    return BlowUpTarget("point", point_id)


def free_point_on(curve_id: int) -> BlowUpTarget:
    return BlowUpTarget("free", curve_id)


def generic_point() -> BlowUpTarget:
    return BlowUpTarget("generic")


def next_curve_id(config: CurveConfig) -> int:
    return max((c.id for c in config.curves), default=0) + 1


def next_point_id(config: CurveConfig) -> int:
    return max((p.id for p in config.points), default=0) + 1


def blow_up(
    config: CurveConfig, target: BlowUpTarget, new_coeff: Fraction | int
) -> CurveConfig:
    """Blow up the model at a marked point, a fresh point on a curve, or a
    generic point.

    The new exceptional curve gets genus 0, self-intersection −1 and the given
    coefficient; curves through the centre lose 1 from their self-intersection
    and meet the new curve transversally.  A blown-up marked point disappears.
    """
    coeff = as_coeff(new_coeff)
    if not (0 <= coeff <= 1):
        raise BadCoefficientError(f"coefficient {coeff} outside [0, 1]")
    new_cid = next_curve_id(config)
    pid = next_point_id(config)

    if target.kind == "point":
        try:
            centre = config.point(target.ref)
        except UnknownIdError:
            raise UnknownTargetError(f"no point with id {target.ref}") from None
        touched = sorted(centre.incident)
        curves = tuple(
            Curve(c.id, c.genus, c.self_intersection - 1, c.boundary_coeff)
            if c.id in centre.incident
            else c
            for c in config.curves
        )
        points = tuple(p for p in config.points if p.id != centre.id)
        new_points = tuple(
            CrossingPoint(pid + k, frozenset({new_cid, cid}))
            for k, cid in enumerate(touched)
        )
    elif target.kind == "free":
        if target.ref not in config._curve_map:
            raise UnknownTargetError(f"no curve with id {target.ref}")
        curves = tuple(
            Curve(c.id, c.genus, c.self_intersection - 1, c.boundary_coeff)
            if c.id == target.ref
            else c
            for c in config.curves
        )
        points = config.points
        new_points = (CrossingPoint(pid, frozenset({new_cid, target.ref})),)
    elif target.kind == "generic":
        curves = config.curves
        points = config.points
        new_points = ()
    else:
        raise UnknownTargetError(f"unknown target kind {target.kind!r}")

    rank = config.picard_rank_of_model
    return CurveConfig(
        curves + (Curve(new_cid, 0, -1, coeff),),
        points + new_points,
        None if rank is None else rank + 1,
    )


def connected_components(
    config: CurveConfig, subset: Iterable[int]
) -> tuple[frozenset[int], ...]:
    """Partition of the subset under the relation "share a point"."""
    members = set(subset)
    for cid in members:
        config.curve(cid)
    out: list[frozenset[int]] = []
    todo = set(members)
    while todo:
        seed = min(todo)
        comp = {seed}
        frontier = [seed]
        while frontier:
            cur = frontier.pop()
            for other, count in config.neighbours(cur).items():
                if other in members and other not in comp and count > 0:
                    comp.add(other)
                    frontier.append(other)
        out.append(frozenset(comp))
        todo -= comp
    return tuple(sorted(out, key=min))


def gram(config: CurveConfig, ordered_ids: Sequence[int]) -> SymMatrix:
    """Gram matrix of the listed curves under the pairing."""
    ids = list(ordered_ids)
    if len(set(ids)) != len(ids):
        raise ValueError("curve ids must be distinct")
    return SymMatrix(
        tuple(tuple(Fraction(pairing(config, i, j)) for j in ids) for i in ids)
    )


def _pair_key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


class LocalBlowdownModel:
    """Mutable scratch model of a curve subset plus its adjacent curves.

    Tracks live self-intersections and pairwise crossing counts while core
    curves get contracted one at a time.  Crossing counts are keyed on
    unordered pairs, so the pairing stays symmetric by construction.
    """

    def __init__(
        self,
        core: set[int],
        present: set[int],
        genus: dict[int, int],
        coeff: dict[int, Fraction],
        selves: dict[int, int],
        mult: dict[tuple[int, int], int],
    ):
        self.core = core
        self.present = present
        self._genus = genus
        self._coeff = coeff
        self._selves = selves
        self._mult = mult

    @classmethod
    def from_config(cls, config: CurveConfig, core: Iterable[int]) -> "LocalBlowdownModel":
        core_set = set(core)
        for cid in core_set:
            config.curve(cid)
        present = set(core_set)
        for cid in core_set:
            present.update(config.neighbours(cid))
        mult = {
            (a, b): count
            for (a, b), count in config._cross_counts.items()
            if a in present and b in present
        }
        return cls(
            core_set,
            present,
            {cid: config.curve(cid).genus for cid in present},
            {cid: config.curve(cid).boundary_coeff for cid in present},
            {cid: config.curve(cid).self_intersection for cid in present},
            mult,
        )

    def clone(self) -> "LocalBlowdownModel":
        return LocalBlowdownModel(
            set(self.core),
            set(self.present),
            dict(self._genus),
            dict(self._coeff),
            dict(self._selves),
            dict(self._mult),
        )

    def genus_of(self, cid: int) -> int:
        return self._genus[cid]

    def coeff(self, cid: int) -> Fraction:
        return self._coeff[cid]

    def self_intersection(self, cid: int) -> int:
        return self._selves[cid]

    def crossings(self, a: int, b: int) -> int:
        return self._mult.get(_pair_key(a, b), 0)

    def partners(self, cid: int) -> tuple[int, ...]:
        return tuple(
            sorted(o for o in self.present if o != cid and self.crossings(o, cid) > 0)
        )

    def valence(self, cid: int) -> int:
        return sum(self.crossings(o, cid) for o in self.present if o != cid)

    def is_candidate(self, cid: int) -> bool:
        """A rational current (−1)-curve; the raw material of a contraction."""
        return self._genus[cid] == 0 and self._selves[cid] == -1

    def is_eligible(self, cid: int) -> bool:
        """Candidate whose contraction keeps the image normal crossing: at most
        two partners, each met exactly once."""
        if not self.is_candidate(cid):
            return False
        partners = self.partners(cid)
        if len(partners) > 2:
            return False
        return all(self.crossings(p, cid) == 1 for p in partners)

    def contract(self, cid: int) -> None:
        """Contract `cid`: A·B += (A·e)(B·e) for surviving pairs, A² += (A·e)²."""
        if cid not in self.present:
            raise UnknownIdError(f"curve {cid} not present in local model")
        partners = self.partners(cid)
        for a, b in itertools.combinations(partners, 2):
            key = _pair_key(a, b)
            self._mult[key] = self._mult.get(key, 0) + self.crossings(a, cid) * self.crossings(
                b, cid
            )
        for a in partners:
            self._selves[a] += self.crossings(a, cid) ** 2
        self.present.discard(cid)
        self.core.discard(cid)
        for key in [k for k in self._mult if cid in k]:
            del self._mult[key]
        del self._selves[cid]
        del self._genus[cid]
        del self._coeff[cid]


NO_MINUS_ONE = "NoMinusOne"
NON_SNC_CONTRACTION = "NonSNCContraction"


@dataclass
class BlowdownSim:
    """Outcome of simulating the stepwise contraction of a curve set."""

    ok: bool
    reason: str | None
    detail: str | None
    order: tuple[int, ...]
    final: LocalBlowdownModel | None = field(default=None, repr=False)

    def __bool__(self) -> bool:
        return self.ok


def run_contraction(model: LocalBlowdownModel, restrict_to: set[int] | None = None) -> BlowdownSim:
    """Drive the model until the chosen core curves are gone, lowest id first.

    `restrict_to` limits which core curves may be picked; others stay put.
    """
    order: list[int] = []
    while True:
        pool = model.core if restrict_to is None else (model.core & restrict_to)
        if not pool:
            return BlowdownSim(True, None, None, tuple(order), model)
        candidates = sorted(c for c in pool if model.is_candidate(c))
        if not candidates:
            return BlowdownSim(
                False,
                NO_MINUS_ONE,
                f"no contractible (-1)-curve among {sorted(pool)}",
                tuple(order),
                model,
            )
        eligible = [c for c in candidates if model.is_eligible(c)]
        if not eligible:
            return BlowdownSim(
                False,
                NON_SNC_CONTRACTION,
                f"every (-1)-curve in {candidates} meets a partner twice or has valence > 2",
                tuple(order),
                model,
            )
        pick = eligible[0]
        model.contract(pick)
        order.append(pick)


def smooth_point_blowdown(config: CurveConfig, gamma: Iterable[int]) -> BlowdownSim:
    """Simulate contracting the whole set `gamma` to a smooth point.

    Succeeds exactly when repeated (−1)-curve contractions empty the set while
    preserving normal crossings; the final local model then reports the
    surviving adjacent curves, their mutual crossing counts and coefficients.
    """
    gamma_set = frozenset(gamma)
    if not gamma_set:
        raise ValueError("gamma must be nonempty")
    matrix = gram(config, sorted(gamma_set))
    if not is_negative_definite(matrix):
        raise ValueError("gram matrix of gamma must be negative definite")
    result = run_contraction(LocalBlowdownModel.from_config(config, gamma_set))
    if result.ok and abs(determinant(matrix)) != 1:
        raise TheoremViolationError(
            f"set {sorted(gamma_set)} contracted to a smooth point but its Gram "
            f"determinant is {determinant(matrix)}"
        )
    return result
