"""Shared builders for the canonical test configurations.

Each builder returns a fresh ``CurveConfig``.  The two-step corner tower
(`corner_once`, `corner_twice`) is built through `blow_up` itself, so the
literal expected configurations in the surface tests double as checks of the
rewrite rules.
"""

from __future__ import annotations

from fractions import Fraction

from logsurf import CurveConfig, at_point, blow_up, free_point_on


def one_curve(genus: int, self_intersection: int, coeff) -> CurveConfig:
    return CurveConfig.build([(1, genus, self_intersection, coeff)])


def du_val_a1() -> CurveConfig:
    """A single (−2)-curve with coefficient 0."""
    return one_curve(0, -2, 0)


def du_val_a1_half() -> CurveConfig:
    """A single (−2)-curve with coefficient 1/2."""
    return one_curve(0, -2, Fraction(1, 2))


def elliptic() -> CurveConfig:
    """A single genus-1 curve of self-intersection −1, coefficient 0."""
    return one_curve(1, -1, 0)


def chain() -> CurveConfig:
    """Two (−2)-curves crossing once, coefficients 0."""
    return CurveConfig.build(
        [(1, 0, -2, 0), (2, 0, -2, 0)],
        [(1, [1, 2])],
    )


def boundary_chain() -> CurveConfig:
    """Two (−2)-curves crossing once, both carrying coefficient 1."""
    return CurveConfig.build(
        [(1, 0, -2, 1), (2, 0, -2, 1)],
        [(1, [1, 2])],
    )


def corner() -> CurveConfig:
    """Two coefficient-1 curves of self-intersection 0 crossing once."""
    return CurveConfig.build(
        [(1, 0, 0, 1), (2, 0, 0, 1)],
        [(1, [1, 2])],
    )


def corner_once() -> CurveConfig:
    """The corner blown up at its crossing, new coefficient 1 (curve 3)."""
    return blow_up(corner(), at_point(1), 1)


def corner_twice() -> CurveConfig:
    """`corner_once` blown up at a free point of curve 3, new coefficient 0 (curve 4)."""
    return blow_up(corner_once(), free_point_on(3), 0)
