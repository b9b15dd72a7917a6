"""Energy trading among supplier nodes.

A single demander buys energy from ``M`` suppliers. Its payoff fixes a linear
price ``q = k_d - sum(p)``; supplier ``i`` earns ``q * p_i - c_i * p_i**2``.
Three ways of settling volumes are provided:

* ``cournot_solve``: simultaneous best-response iteration from each
  supplier's offer history until offers stop moving.
* ``stackelberg_solve``: the first ``m`` suppliers commit anticipating the
  aggregate reaction of the remaining ``n`` followers.
* ``static_solve``: identical suppliers forced to sell the same amount.

Volumes are in micro-watts (one-second slots, so also micro-joules).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)

GAME_KINDS = ("static", "cournot", "stackelberg")

# Market constant and cost coefficient used by the worked examples.
REFERENCE_MARKET_CONSTANT = 357.0
REFERENCE_COST_COEFFICIENT = 4.0
REFERENCE_HISTORIES = (29.5, 21.6, 24.7, 23.4, 20.4, 26.4)


class NonUniformMarketError(ValueError):
    """The static baseline is only defined for identical suppliers."""


@dataclass(frozen=True)
class SupplierProfile:
    """One supplier's selling-cost inputs.

    The selling cost is ``c * p**2`` with ``c = w * D * (P_req / S)**2``
    unless ``coefficient_override`` pins ``c`` directly.

    Attributes:
        stored_energy: ``S_i``, energy held by the supplier.
        required_power: ``P_req``, energy the supplier needs for itself.
        traffic_quantity: ``D_i``, expected packet count.
        cost_weight: ``w``, grows with supplier-demander distance.
        history: Previous offer, used to seed iterative solvers.
        capacity: Upper bound on what this supplier may sell.
        coefficient_override: Use this ``c`` instead of the formula.
    """

    stored_energy: float = 160.0
    required_power: float = 120.0
    traffic_quantity: float = 15.0
    cost_weight: float = 0.5
    history: float = 0.0
    capacity: float = math.inf
    coefficient_override: float | None = None

    def __post_init__(self) -> None:
        if not self.stored_energy > 0:
            raise ValueError(f"stored_energy must be > 0, got {self.stored_energy}")
        if self.required_power < 0:
            raise ValueError(f"required_power must be >= 0, got {self.required_power}")
        if not self.traffic_quantity >= 0:
            raise ValueError(f"traffic_quantity must be >= 0, got {self.traffic_quantity}")
        if self.cost_weight < 0:
            raise ValueError(f"cost_weight must be >= 0, got {self.cost_weight}")
        if not (math.isfinite(self.history) and self.history >= 0):
            raise ValueError(f"offer history must be finite and >= 0, got {self.history}")
        if not self.capacity >= 0:
            raise ValueError(f"capacity must be >= 0, got {self.capacity}")
        c = self.cost_coefficient
        if not (math.isfinite(c) and c >= 0):
            raise ValueError(f"cost coefficient must be finite and >= 0, got {c}")

    @property
    def formula_coefficient(self) -> float:
        ratio = self.required_power / self.stored_energy
        return self.cost_weight * self.traffic_quantity * ratio * ratio

    @property
    def cost_coefficient(self) -> float:
        if self.coefficient_override is not None:
            return self.coefficient_override
        return self.formula_coefficient

    @property
    def supplier_efficiency(self) -> float:
        """``k^(s) = P_req / (S / D)``."""
        return self.required_power / (self.stored_energy / self.traffic_quantity)

    @classmethod
    def reference(cls, history: float = 0.0, exact_coefficient: bool = False) -> "SupplierProfile":
        """The case-study supplier: w=0.5, D=15, P_req/S = 120/160.

        Unless ``exact_coefficient`` is set, ``c`` is pinned to 4 as in the
        worked algorithms rather than the formula's 4.21875.
        """
        return cls(
            history=history,
            coefficient_override=None if exact_coefficient else REFERENCE_COST_COEFFICIENT,
        )


@dataclass(frozen=True)
class MarketScenario:
    """A trading problem to settle.

    ``damping`` is the weight on the new best response in each update;
    ``None`` picks 1 when plain best response is a contraction and a
    stabilising value otherwise.
    """

    k_d: float
    suppliers: tuple[SupplierProfile, ...]
    game_kind: str = "cournot"
    leaders: int = 0
    followers: int = 0
    convergence_tol: float = 1e-6
    stability_rounds: int = 3
    max_iterations: int = 1000
    damping: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "suppliers", tuple(self.suppliers))
        if self.game_kind not in GAME_KINDS:
            raise ValueError(f"game_kind must be one of {GAME_KINDS}, got {self.game_kind!r}")
        if not (math.isfinite(self.k_d) and self.k_d > 0):
            raise ValueError(f"k_d must be finite and > 0, got {self.k_d}")
        if not self.suppliers:
            raise ValueError("a market needs at least one supplier")
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol must be > 0")
        if self.stability_rounds < 1:
            raise ValueError("stability_rounds must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.damping is not None and not 0 < self.damping <= 1:
            raise ValueError(f"damping must lie in (0, 1], got {self.damping}")
        if self.game_kind == "stackelberg":
            if self.leaders < 1 or self.followers < 1:
                raise ValueError("stackelberg needs at least one leader and one follower")
            if self.leaders + self.followers != len(self.suppliers):
                raise ValueError(
                    f"leaders + followers ({self.leaders}+{self.followers}) must equal "
                    f"the number of suppliers ({len(self.suppliers)})"
                )

    @property
    def size(self) -> int:
        return len(self.suppliers)

    @property
    def histories(self) -> tuple[float, ...]:
        return tuple(s.history for s in self.suppliers)


@dataclass(frozen=True)
class EquilibriumResult:
    game_kind: str
    allocations: tuple[float, ...]
    price: float
    total_volume: float
    payoffs: tuple[float, ...]
    iterations: int
    trace: tuple[tuple[float, ...], ...]
    converged: bool
    leaders: int = 0
    diagnostics: tuple[str, ...] = field(default=())


def market_price(allocations: Sequence[float], k_d: float) -> float:
    """Linear inverse demand; not floored at zero."""
    return k_d - math.fsum(allocations)


def demander_payoff(allocations: Sequence[float], k_d: float, price: float) -> float:
    p = np.asarray(allocations, dtype=float)
    if np.any(p < 0):
        raise ValueError("allocations must be >= 0")
    total = float(p.sum())
    # sum p_i^2 + 2 sum_{i<j} p_i p_j == total**2
    return total * k_d - 0.5 * total * total - price * total


def selling_cost(profile: SupplierProfile, p_i: float) -> float:
    if p_i < 0:
        raise ValueError(f"sold energy must be >= 0, got {p_i}")
    return profile.cost_coefficient * p_i * p_i


def selling_cost_from_efficiency(profile: SupplierProfile, p_i: float) -> float:
    """Selling cost written through the supplier efficiency ``k^(s)``.

    ``w D (P_req - k^(s) (S - p) / D)**2``; identical to ``selling_cost``
    when no coefficient override is set.
    """
    if p_i < 0:
        raise ValueError(f"sold energy must be >= 0, got {p_i}")
    if profile.traffic_quantity == 0:
        return 0.0
    gap = profile.required_power - profile.supplier_efficiency * (
        profile.stored_energy - p_i
    ) / profile.traffic_quantity
    return profile.cost_weight * profile.traffic_quantity * gap * gap


def supplier_payoff(profile: SupplierProfile, p_i: float, others_total: float, k_d: float) -> float:
    if p_i < 0:
        raise ValueError(f"sold energy must be >= 0, got {p_i}")
    return (k_d - others_total - p_i) * p_i - profile.cost_coefficient * p_i * p_i


def cournot_best_response(profile: SupplierProfile, others_total: float, k_d: float) -> float:
    """Maximiser of ``supplier_payoff`` over ``[0, capacity]``."""
    p = (k_d - others_total) / (2.0 + 2.0 * profile.cost_coefficient)
    return min(max(p, 0.0), profile.capacity)


def follower_pass_through(followers: Sequence[SupplierProfile]) -> float:
    """Share of ``k_d - leader_total`` that survives as price once followers react.

    With every follower at its interior best response the follower total is
    ``(k_d - B) * s / (1 + s)`` where ``s = sum 1 / (1 + 2 c_j)``, leaving the
    price at ``(k_d - B) / (1 + s)``.
    """
    s = math.fsum(1.0 / (1.0 + 2.0 * f.cost_coefficient) for f in followers)
    return 1.0 / (1.0 + s)


def leader_payoff(
    profile: SupplierProfile, b: float, other_leaders_total: float, k_d: float, pass_through: float
) -> float:
    """Leader payoff with the follower reaction substituted in."""
    return pass_through * (k_d - other_leaders_total - b) * b - profile.cost_coefficient * b * b


def leader_best_response(
    profile: SupplierProfile, other_leaders_total: float, k_d: float, pass_through: float
) -> float:
    b = pass_through * (k_d - other_leaders_total) / (2.0 * pass_through + 2.0 * profile.cost_coefficient)
    return min(max(b, 0.0), profile.capacity)


def leader_foc_residual(
    profile: SupplierProfile, b: float, other_leaders_total: float, k_d: float, pass_through: float
) -> float:
    """Derivative of ``leader_payoff`` in ``b``; zero at an interior optimum."""
    return pass_through * (k_d - other_leaders_total - 2.0 * b) - 2.0 * profile.cost_coefficient * b


def stable_damping(slopes: Sequence[float]) -> float:
    """Damping for simultaneous best response with linear slopes ``-slopes[i]``.

    The undamped map contracts when ``(M - 1) * max(slope) < 1``; otherwise
    the weight that balances the extreme eigenvalues of the uniform case,
    ``2 / (2 + L (M - 2))``, is used.
    """
    M = len(slopes)
    if M <= 1:
        return 1.0
    L = max(slopes)
    if (M - 1) * L < 1.0:
        return 1.0
    return 2.0 / (2.0 + L * (M - 2))


def _payoffs(profiles: Sequence[SupplierProfile], alloc: Sequence[float], k_d: float) -> tuple[float, ...]:
    total = math.fsum(alloc)
    return tuple(supplier_payoff(pr, p, total - p, k_d) for pr, p in zip(profiles, alloc))


class _StabilityCounter:
    """Tracks consecutive rounds in which no offer moved by ``tol`` or more."""

    def __init__(self, tol: float, rounds: int) -> None:
        self.tol = tol
        self.rounds = rounds
        self.streak = 0

    def update(self, old: np.ndarray, new: np.ndarray) -> bool:
        change = float(np.max(np.abs(new - old))) if old.size else 0.0
        self.streak = self.streak + 1 if change < self.tol else 0
        return self.streak >= self.rounds


def _finish(
    scenario: MarketScenario,
    alloc: np.ndarray,
    trace: list[tuple[float, ...]],
    iterations: int,
    converged: bool,
    leaders: int = 0,
) -> EquilibriumResult:
    allocations = tuple(float(x) for x in alloc)
    total = math.fsum(allocations)
    price = scenario.k_d - total
    diagnostics = []
    if price < 0:
        diagnostics.append(f"negative price {price:.6g}: market oversupplied")
        logger.warning("negative market price %.6g", price)
    if not converged:
        diagnostics.append(f"no convergence within {scenario.max_iterations} iterations")
        logger.warning("%s solver did not converge", scenario.game_kind)
    return EquilibriumResult(
        game_kind=scenario.game_kind,
        allocations=allocations,
        price=price,
        total_volume=total,
        payoffs=_payoffs(scenario.suppliers, allocations, scenario.k_d),
        iterations=iterations,
        trace=tuple(trace),
        converged=converged,
        leaders=leaders,
        diagnostics=tuple(diagnostics),
    )


def cournot_solve(scenario: MarketScenario) -> EquilibriumResult:
    """Simultaneous best-response dynamics seeded from offer histories.

    Every round each supplier responds to the others' offers from the
    previous round. The run stops once no offer moves by
    ``convergence_tol`` or more for ``stability_rounds`` rounds in a row.
    Hitting ``max_iterations`` returns a non-converged result.
    """
    if scenario.game_kind != "cournot":
        raise ValueError(f"cournot_solve needs game_kind 'cournot', got {scenario.game_kind!r}")
    profiles = scenario.suppliers
    k_d = scenario.k_d
    theta = scenario.damping
    if theta is None:
        theta = stable_damping([1.0 / (2.0 + 2.0 * p.cost_coefficient) for p in profiles])

    alloc = np.array(scenario.histories, dtype=float)
    trace = [tuple(alloc.tolist())]
    stable = _StabilityCounter(scenario.convergence_tol, scenario.stability_rounds)
    for it in range(1, scenario.max_iterations + 1):
        total = alloc.sum()
        br = np.array(
            [cournot_best_response(pr, total - alloc[i], k_d) for i, pr in enumerate(profiles)]
        )
        new = (1.0 - theta) * alloc + theta * br
        trace.append(tuple(new.tolist()))
        done = stable.update(alloc, new)
        alloc = new
        if done:
            return _finish(scenario, alloc, trace, it, True)
    return _finish(scenario, alloc, trace, scenario.max_iterations, False)


def stackelberg_solve(scenario: MarketScenario) -> EquilibriumResult:
    """Leader-follower settlement.

    The first ``leaders`` suppliers commit, each maximising its payoff with
    the followers' aggregate reaction substituted in; they iterate best
    responses against the other leaders' previous offers. Within the same
    round the followers best-respond to the leaders' new offers and to each
    other's previous offers. The trace holds the full offer vector per round.
    """
    if scenario.game_kind != "stackelberg":
        raise ValueError(
            f"stackelberg_solve needs game_kind 'stackelberg', got {scenario.game_kind!r}"
        )
    m = scenario.leaders
    k_d = scenario.k_d
    leaders = scenario.suppliers[:m]
    followers = scenario.suppliers[m:]
    alpha = follower_pass_through(followers)

    lead_slopes = [alpha / (2.0 * alpha + 2.0 * p.cost_coefficient) for p in leaders]
    follow_slopes = [1.0 / (2.0 + 2.0 * p.cost_coefficient) for p in followers]
    if scenario.damping is None:
        theta_l = stable_damping(lead_slopes)
        theta_f = stable_damping(follow_slopes)
    else:
        theta_l = theta_f = scenario.damping

    alloc = np.array(scenario.histories, dtype=float)
    trace = [tuple(alloc.tolist())]
    stable = _StabilityCounter(scenario.convergence_tol, scenario.stability_rounds)
    for it in range(1, scenario.max_iterations + 1):
        b = alloc[:m]
        f = alloc[m:]
        b_total = b.sum()
        br_lead = np.array(
            [leader_best_response(pr, b_total - b[i], k_d, alpha) for i, pr in enumerate(leaders)]
        )
        new_b = (1.0 - theta_l) * b + theta_l * br_lead
        base = new_b.sum()
        f_total = f.sum()
        br_follow = np.array(
            [
                cournot_best_response(pr, base + f_total - f[j], k_d)
                for j, pr in enumerate(followers)
            ]
        )
        new_f = (1.0 - theta_f) * f + theta_f * br_follow
        new = np.concatenate([new_b, new_f])
        trace.append(tuple(new.tolist()))
        done = stable.update(alloc, new)
        alloc = new
        if done:
            return _finish(scenario, alloc, trace, it, True, leaders=m)
    return _finish(scenario, alloc, trace, scenario.max_iterations, False, leaders=m)


def static_solve(scenario: MarketScenario) -> EquilibriumResult:
    """Identical suppliers all selling ``k_d / (2M + 2c)``."""
    if scenario.game_kind != "static":
        raise ValueError(f"static_solve needs game_kind 'static', got {scenario.game_kind!r}")
    first = scenario.suppliers[0]
    c = first.cost_coefficient
    for pr in scenario.suppliers[1:]:
        if pr.cost_coefficient != c or pr.capacity != first.capacity:
            raise NonUniformMarketError("static baseline requires identical suppliers")
    M = scenario.size
    p = min(max(scenario.k_d / (2.0 * M + 2.0 * c), 0.0), first.capacity)
    alloc = np.full(M, p)
    trace = [scenario.histories, tuple(alloc.tolist())]
    return _finish(scenario, alloc, trace, 1, True)


_SOLVERS = {
    "static": static_solve,
    "cournot": cournot_solve,
    "stackelberg": stackelberg_solve,
}


def solve(scenario: MarketScenario) -> EquilibriumResult:
    return _SOLVERS[scenario.game_kind](scenario)


def deviation_gains(
    result: EquilibriumResult, scenario: MarketScenario, deviation_grid: float = 1e-3
) -> list[float]:
    """Best payoff improvement each supplier can reach by deviating alone.

    Deviations are scanned on a grid of step ``deviation_grid`` over
    ``[0, min(k_d, capacity)]`` (the grid end point and the analytic best
    response are also tried). Stackelberg leaders are scored with the
    follower reaction substituted in; everyone else with the plain payoff.
    """
    if deviation_grid <= 0:
        raise ValueError("deviation_grid must be > 0")
    k_d = scenario.k_d
    alloc = np.asarray(result.allocations, dtype=float)
    total = float(alloc.sum())
    m = result.leaders if result.game_kind == "stackelberg" else 0
    alpha = follower_pass_through(scenario.suppliers[m:]) if m else 1.0
    lead_total = float(alloc[:m].sum())
    gains = []
    for i, pr in enumerate(scenario.suppliers):
        hi = min(k_d, pr.capacity)
        grid = np.arange(0.0, hi, deviation_grid)
        c = pr.cost_coefficient
        if i < m:
            others = lead_total - alloc[i]
            extra = [leader_best_response(pr, others, k_d, alpha)]
            grid = np.concatenate([grid, [hi], extra])
            dev = alpha * (k_d - others - grid) * grid - c * grid * grid
            here = leader_payoff(pr, alloc[i], others, k_d, alpha)
        else:
            others = total - alloc[i]
            extra = [cournot_best_response(pr, others, k_d)]
            grid = np.concatenate([grid, [hi], extra])
            dev = (k_d - others - grid) * grid - c * grid * grid
            here = supplier_payoff(pr, alloc[i], others, k_d)
        gains.append(float(dev.max() - here))
    return gains


def nash_check(
    result: EquilibriumResult,
    scenario: MarketScenario,
    deviation_grid: float = 1e-3,
    slack: float = 1e-6,
) -> bool:
    """True when no supplier gains more than ``slack`` by a unilateral deviation."""
    return all(g <= slack for g in deviation_gains(result, scenario, deviation_grid))


def uniform_market(
    k_d: float,
    count: int,
    game_kind: str = "cournot",
    leaders: int = 0,
    histories: Sequence[float] | None = None,
    profile: SupplierProfile | None = None,
    **kwargs,
) -> MarketScenario:
    """Build a market of ``count`` identical suppliers.

    Histories default to the case-study offers, cycled to length ``count``.
    """
    base = profile if profile is not None else SupplierProfile.reference()
    if histories is None:
        histories = [REFERENCE_HISTORIES[i % len(REFERENCE_HISTORIES)] for i in range(count)]
    if len(histories) != count:
        raise ValueError(f"expected {count} histories, got {len(histories)}")
    suppliers = tuple(replace(base, history=h) for h in histories)
    followers = count - leaders if game_kind == "stackelberg" else 0
    return MarketScenario(
        k_d=k_d,
        suppliers=suppliers,
        game_kind=game_kind,
        leaders=leaders if game_kind == "stackelberg" else 0,
        followers=followers,
        **kwargs,
    )
