"""Weighting functions applied to each co-occurrence record in the cost.

Three families: the power-clip min(1, (x/x_max)^alpha), an exponential
saturation 1 - exp(-lambda*x) that needs no clip point, and a constant
baseline for ablations. All satisfy weight(0) = 0, monotone
non-decreasing, and range within [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_X_MAX = 10.0
DEFAULT_ALPHA = 0.75
DEFAULT_LAMBDA = 0.165

# variant codes shared with the trainer kernel
POWER_CLIP, EXP_SATURATING, CONSTANT = 0, 1, 2


@dataclass(frozen=True)
class PowerClip:
    x_max: float = DEFAULT_X_MAX
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if not self.x_max > 0:
            raise ValueError(f"x_max must be positive, got {self.x_max}")
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")


@dataclass(frozen=True)
class ExpSaturating:
    lam: float = DEFAULT_LAMBDA

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")


@dataclass(frozen=True)
class Constant:
    """Unit weight for every nonzero count; control baseline."""


WeightingSpec = PowerClip | ExpSaturating | Constant


def weight(spec: WeightingSpec, x: float) -> float:
    """Evaluate the weighting function at a co-occurrence value x >= 0."""
    if x < 0:
        raise ValueError(f"weighting domain is x >= 0, got {x}")
    if isinstance(spec, PowerClip):
        # power computed only below the clip point; the hot loop lives here
        return 1.0 if x >= spec.x_max else (x / spec.x_max) ** spec.alpha
    if isinstance(spec, ExpSaturating):
        return -math.expm1(-spec.lam * x)
    if isinstance(spec, Constant):
        return 1.0 if x > 0 else 0.0
    raise TypeError(f"unknown weighting spec {spec!r}")


def kernel_params(spec: WeightingSpec) -> tuple[int, float, float]:
    """Flatten a spec into (variant code, p1, p2) for the jit kernels."""
    if isinstance(spec, PowerClip):
        return POWER_CLIP, spec.x_max, spec.alpha
    if isinstance(spec, ExpSaturating):
        return EXP_SATURATING, spec.lam, 0.0
    if isinstance(spec, Constant):
        return CONSTANT, 0.0, 0.0
    raise TypeError(f"unknown weighting spec {spec!r}")


def spec_name(spec: WeightingSpec) -> str:
    return {PowerClip: "power-clip", ExpSaturating: "exp", Constant: "constant"}[type(spec)]


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of the sanity checks a weighting function must satisfy."""

    value_at_zero: float
    zero_at_origin: bool
    non_decreasing: bool
    first_decrease_at: float | None
    in_unit_range: bool
    first_out_of_range_at: float | None

    @property
    def passed(self) -> bool:
        return self.zero_at_origin and self.non_decreasing and self.in_unit_range


def check_properties(spec: WeightingSpec, grid) -> PropertyReport:
    """Check weight(0) == 0, monotonicity, and [0, 1] range on a grid.

    The grid must be sorted ascending and start at 0.
    """
    grid = list(grid)
    if not grid or grid[0] != 0:
        raise ValueError("grid must start at 0")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be sorted ascending")

    values = [weight(spec, x) for x in grid]
    first_decrease = None
    for x, prev, cur in zip(grid[1:], values, values[1:]):
        if cur < prev:
            first_decrease = x
            break
    first_out = None
    for x, v in zip(grid, values):
        if not 0.0 <= v <= 1.0:
            first_out = x
            break
    return PropertyReport(
        value_at_zero=values[0],
        zero_at_origin=values[0] == 0.0,
        non_decreasing=first_decrease is None,
        first_decrease_at=first_decrease,
        in_unit_range=first_out is None,
        first_out_of_range_at=first_out,
    )
