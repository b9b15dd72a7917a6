"""Single-period (s, S) energy inventory under discrete random demand.

The order-up-to level comes from the critical-ratio quantile of the demand
law; the reorder point is the lowest level at which skipping an order is
no more expensive than ordering up to ``S*``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .demand import DemandDistribution


class DegenerateCostError(ValueError):
    """Raised when the critical ratio falls outside [0, 1]."""


@dataclass(frozen=True)
class CostParams:
    """Per-unit inventory costs.

    Attributes:
        holding: ``C_H``, cost per stored energy unit left over.
        shortage: ``C_S``, cost per unit of unmet demand.
        purchase: ``C_PUR``, cost per unit ordered.
        setup: ``c_se``, fixed cost per order.
    """

    holding: float
    shortage: float
    purchase: float = 0.0
    setup: float = 0.0

    def __post_init__(self) -> None:
        for name in ("holding", "shortage", "purchase", "setup"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} cost must be finite and >= 0, got {value}")
        if self.holding + self.shortage <= 0:
            raise ValueError(
                "critical ratio undefined: holding + shortage cost must be > 0"
            )

    @property
    def storing_worthwhile(self) -> bool:
        return self.shortage >= self.purchase


@dataclass(frozen=True)
class InventoryPolicy:
    reorder_point: float
    order_up_to: float
    expected_cost: float

    def __post_init__(self) -> None:
        if self.reorder_point > self.order_up_to:
            raise ValueError("reorder point must not exceed the order-up-to level")


def _loss(levels: np.ndarray, dist: DemandDistribution, costs: CostParams) -> np.ndarray:
    """Expected holding + shortage cost at each candidate level (vectorised)."""
    d = dist.levels
    p = dist.pmf
    diff = levels[:, None] - d[None, :]
    over = np.where(diff >= 0, diff, 0.0)
    under = np.where(diff < 0, -diff, 0.0)
    return costs.holding * (over @ p) + costs.shortage * (under @ p)


def expected_cost(S: float, dist: DemandDistribution, costs: CostParams, stock: float = 0.0) -> float:
    """Expected one-period cost of ordering up to ``S`` from existing stock ``stock``."""
    if stock < 0:
        raise ValueError(f"existing stock must be >= 0, got {stock}")
    loss = float(_loss(np.array([float(S)]), dist, costs)[0])
    return costs.setup + costs.purchase * (S - stock) + loss


def critical_ratio(costs: CostParams) -> float:
    """``(C_S - C_PUR) / (C_S + C_H)``; may fall outside [0, 1] for degenerate costs."""
    return (costs.shortage - costs.purchase) / (costs.shortage + costs.holding)


def delta_cost(S_a: float, dist: DemandDistribution, costs: CostParams) -> float:
    """Cost change when moving from support level ``S_a`` to the next one."""
    levels = dist.support
    try:
        a = levels.index(S_a)
    except ValueError:
        raise ValueError(f"{S_a} is not a support level") from None
    if a == len(levels) - 1:
        raise IndexError("the last support level has no successor")
    step = levels[a + 1] - levels[a]
    cdf = math.fsum(dist.probabilities[: a + 1])
    return (cdf - critical_ratio(costs)) * (costs.holding + costs.shortage) * step


def optimal_inventory(dist: DemandDistribution, costs: CostParams) -> float:
    """Smallest support level whose cumulative mass reaches the critical ratio.

    If no level reaches it (only possible through truncation or ``F == 1``)
    the highest level is returned.
    """
    F = critical_ratio(costs)
    if not 0.0 <= F <= 1.0:
        raise DegenerateCostError(f"critical ratio {F:.6g} outside [0, 1]")
    cdf = dist.cumulative()
    idx = int(np.searchsorted(cdf, F, side="left"))
    return dist.support[min(idx, len(dist.support) - 1)]


def brute_force_optimum(dist: DemandDistribution, costs: CostParams) -> float:
    """Evaluate the cost at every support level; ties go to the smaller level."""
    best_level = dist.support[0]
    best = expected_cost(best_level, dist, costs)
    for level in dist.support[1:]:
        c = expected_cost(level, dist, costs)
        if c < best:
            best, best_level = c, level
    return best_level


def reorder_point(dist: DemandDistribution, costs: CostParams, S_star: float) -> float:
    """Smallest support level ``s <= S_star`` at which not ordering is no worse.

    Compares ``C_PUR*s + L(s)`` with ``c_se + C_PUR*S* + L(S*)`` where ``L``
    is the expected holding plus shortage cost.
    """
    candidates = np.array([s for s in dist.support if s <= S_star], dtype=float)
    if candidates.size == 0:
        return S_star
    lhs = costs.purchase * candidates + _loss(candidates, dist, costs)
    rhs = costs.setup + costs.purchase * S_star + float(_loss(np.array([S_star]), dist, costs)[0])
    ok = np.nonzero(lhs <= rhs)[0]
    if ok.size == 0:
        return S_star
    return float(candidates[ok[0]])


def solve_policy(dist: DemandDistribution, costs: CostParams, stock: float = 0.0) -> InventoryPolicy:
    S_star = optimal_inventory(dist, costs)
    s = reorder_point(dist, costs, S_star)
    return InventoryPolicy(
        reorder_point=s,
        order_up_to=S_star,
        expected_cost=expected_cost(S_star, dist, costs, stock),
    )
