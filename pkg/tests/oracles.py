"""Independent reference computations used to cross-check the library.

Everything here recomputes results from first principles along different
algorithmic routes than the implementation: determinants by Laplace
expansion, linear systems by plain pivoted elimination, intersection data
recounted from the raw point lists, and discrepancy-(−1) valuations probed
by explicit bounded blow-up towers.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from logsurf import (
    CurveConfig,
    SurfaceState,
    TargetBase,
    is_log_blowdown,
    is_log_flopping,
)


# ---------------------------------------------------------------------------
# exact linear algebra, the long way round

def laplace_det(rows):
    """Determinant by first-row Laplace expansion over remaining-column masks."""
    n = len(rows)
    if n == 0:
        return 1
    memo = {}

    def minor(mask):
        if mask == 0:
            return 1
        if mask in memo:
            return memo[mask]
        row = n - bin(mask).count("1")
        total = 0
        sign = 1
        for col in range(n):
            bit = 1 << col
            if mask & bit:
                entry = rows[row][col]
                if entry:
                    total += sign * entry * minor(mask & ~bit)
                sign = -sign
        memo[mask] = total
        return total

    return minor((1 << n) - 1)


def brute_negative_definite(rows) -> bool:
    """Sign-check the determinant of every nonempty principal submatrix."""
    n = len(rows)
    for size in range(1, n + 1):
        want_positive = size % 2 == 0
        for subset in itertools.combinations(range(n), size):
            sub = [[rows[i][j] for j in subset] for i in subset]
            det = laplace_det(sub)
            if det == 0 or (det > 0) != want_positive:
                return False
    return True


def quadratic_form(rows, vector):
    return sum(
        vector[i] * rows[i][j] * vector[j]
        for i in range(len(rows))
        for j in range(len(rows))
    )


def solve_linear(rows, rhs):
    """Plain pivoted Gaussian elimination over Fractions."""
    n = len(rows)
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot_row is None:
            raise ValueError("singular system")
        a[col], a[pivot_row] = a[pivot_row], a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col] / a[col][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return tuple(a[i][n] / a[i][i] for i in range(n))


# ---------------------------------------------------------------------------
# intersection data recounted from the raw lists

def crossing_counts(config: CurveConfig) -> dict[tuple[int, int], int]:
    counts: dict[tuple[int, int], int] = {}
    for p in config.points:
        if len(p.incident) == 2:
            key = tuple(sorted(p.incident))
            counts[key] = counts.get(key, 0) + 1
    return counts


def raw_pairing(config: CurveConfig, counts, i: int, j: int) -> int:
    if i == j:
        return next(c.self_intersection for c in config.curves if c.id == i)
    return counts.get(tuple(sorted((i, j))), 0)


def raw_components(config: CurveConfig, subset) -> list[frozenset[int]]:
    counts = crossing_counts(config)
    members = set(subset)
    out = []
    todo = set(members)
    while todo:
        seed = min(todo)
        comp = {seed}
        frontier = [seed]
        while frontier:
            cur = frontier.pop()
            for other in members:
                if other not in comp and raw_pairing(config, counts, cur, other) > 0:
                    comp.add(other)
                    frontier.append(other)
        out.append(frozenset(comp))
        todo -= comp
    return out


def residual_identity_gaps(config: CurveConfig, contracted, residual):
    """For each contracted curve, the (expected-zero) log degree recomputed raw."""
    counts = crossing_counts(config)
    gaps = []
    for i in sorted(contracted):
        curve = next(c for c in config.curves if c.id == i)
        total = Fraction(2 * curve.genus - 2 - curve.self_intersection)
        for other in config.curves:
            total += residual[other.id] * raw_pairing(config, counts, other.id, i)
        if total != 0:
            gaps.append((i, total))
    return gaps


# ---------------------------------------------------------------------------
# corner geometry without the contraction simulator

def independent_corner_check(config: CurveConfig, component, contracted, residual) -> bool:
    """Decide whether a contracted component lands on a two-branch boundary corner.

    Works intersection-theoretically: the surviving curves through the image
    point are those meeting the component; the image intersection number of
    the two candidates is computed by solving for the pullback correction —
    no stepwise contraction involved.
    """
    counts = crossing_counts(config)
    comp = sorted(component)
    adjacent = sorted(
        c.id
        for c in config.curves
        if c.id not in contracted
        and any(raw_pairing(config, counts, c.id, m) > 0 for m in comp)
    )
    if len(adjacent) != 2:
        return False
    a, b = adjacent
    coeff = {c.id: c.boundary_coeff for c in config.curves}
    if coeff[a] != 1 or coeff[b] != 1:
        return False
    gram_rows = [
        [raw_pairing(config, counts, x, y) for y in comp] for x in comp
    ]
    rhs = [-raw_pairing(config, counts, a, m) for m in comp]
    try:
        lam = solve_linear(gram_rows, rhs)
    except ValueError:
        return False
    image_cross = Fraction(raw_pairing(config, counts, a, b)) + sum(
        l * raw_pairing(config, counts, b, m) for l, m in zip(lam, comp)
    )
    return image_cross == 1


def depth3_probe(config: CurveConfig, contracted, residual) -> list[str]:
    """Hunt for discrepancy-(−1) valuations of depth ≤ 3 over bad centres.

    The residual of a curve extracted by blowing up a crossing is the sum of
    the two incident residuals minus 1, so residual-1 valuations only arise
    over crossings of two residual-1 curves; the probe therefore only needs
    to expand those.  A residual-1 valuation is acceptable when its centre is
    a crossing of two surviving boundary curves (a corner already on the
    model) or the image point of a contracted component that independently
    verifies as a corner.  Everything else is reported.
    """
    violations: list[str] = []
    components = raw_components(config, contracted)
    by_curve = {m: comp for comp in components for m in comp}
    corner_cache: dict[frozenset[int], bool] = {}

    def component_ok(comp) -> bool:
        if comp not in corner_cache:
            corner_cache[comp] = independent_corner_check(
                config, comp, contracted, residual
            )
        return corner_cache[comp]

    for cid in sorted(contracted):
        if residual[cid] > 1:
            violations.append(f"contracted curve {cid} has residual {residual[cid]} > 1")
        elif residual[cid] == 1 and not component_ok(by_curve[cid]):
            violations.append(
                f"contracted curve {cid} has residual 1 over a non-corner point"
            )

    def expand(e_left: Fraction, e_right: Fraction, origin, depth_left: int) -> None:
        e_new = e_left + e_right - 1
        if e_new > 1:
            violations.append(f"tower over {origin} reaches residual {e_new} > 1")
            return
        if e_new == 1:
            a, b = origin
            inside = [x for x in (a, b) if x in contracted]
            if inside and not component_ok(by_curve[inside[0]]):
                violations.append(
                    f"tower over crossing {origin} extracts a residual-1 valuation "
                    "whose centre is not a corner"
                )
        if depth_left == 0:
            return
        for e_old in (e_left, e_right):
            if e_new + e_old == 2:
                expand(e_new, e_old, origin, depth_left - 1)

    for p in config.points:
        if len(p.incident) == 2:
            a, b = sorted(p.incident)
            if residual[a] + residual[b] == 2:
                expand(residual[a], residual[b], (a, b), 2)
    return violations


# ---------------------------------------------------------------------------
# exhaustive order exploration for the drivers

def explore_decomposition_orders(config: CurveConfig, s1, s2):
    """Try every legal move at every reachable state between the two sets.

    Returns the set of (flop count, blow-down count) outcomes over all
    maximal move sequences; raises AssertionError if any sequence strands
    short of the target set.
    """
    s1 = frozenset(s1)
    s2 = frozenset(s2)
    base = TargetBase(s2)
    seen: dict[frozenset[int], set[tuple[int, int]]] = {}

    def explore(current: frozenset[int]) -> set[tuple[int, int]]:
        if current == s2:
            return {(0, 0)}
        if current in seen:
            return seen[current]
        state = SurfaceState(config, current, base)
        moves = []
        for cid in sorted(s2 - current):
            coeff = next(c.boundary_coeff for c in config.curves if c.id == cid)
            if coeff < 1:
                if is_log_flopping(state, cid):
                    moves.append(("flop", cid))
            elif is_log_blowdown(state, cid):
                moves.append(("down", cid))
        if not moves:
            raise AssertionError(f"no move applies at {sorted(current)}")
        outcomes: set[tuple[int, int]] = set()
        for kind, cid in moves:

            for flops, downs in explore(current | {cid}):
                outcomes.add(
                    (flops + (kind == "flop"), downs + (kind == "down"))
                )
        seen[current] = outcomes
        return outcomes

    return explore(s1)


def all_contraction_orders(config: CurveConfig, gamma) -> set[str]:
    """Outcomes ("ok"/"fail") of every eligible-choice contraction order."""
    from logsurf import LocalBlowdownModel

    results: set[str] = set()

    def rec(model) -> None:
        if not model.core:
            results.add("ok")
            return
        eligible = [
            c for c in sorted(model.core)
            if model.is_candidate(c) and model.is_eligible(c)
        ]
        if not eligible:
            results.add("fail")
            return
        for pick in eligible:
            branch = model.clone()
            branch.contract(pick)
            rec(branch)

    rec(LocalBlowdownModel.from_config(config, gamma))
    return results


def random_symmetric_matrix(rng, n: int, low: int = -5, high: int = 5):
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            value = rng.randint(low, high)
            rows[i][j] = value
            rows[j][i] = value
    return rows
