"""Slotted network simulation with inventory-driven energy trading.

Each slot every node harvests, then consumes a random demand drawn from its
Poisson demand law. Nodes holding more than their order-up-to level ``S*``
become suppliers, nodes below it demanders. Demanders are then served one
at a time (largest deficit first) by a market among the current suppliers;
sold energy leaves the suppliers in full and reaches the demander scaled by
the transfer efficiency.
"""

from __future__ import annotations

import copy
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channel import ChannelParams
from .demand import DemandDistribution, TrafficProcess, demand_distribution
from .inventory import CostParams, InventoryPolicy, solve_policy
from .market import (
    REFERENCE_MARKET_CONSTANT,
    EquilibriumResult,
    MarketScenario,
    SupplierProfile,
    solve,
)

logger = logging.getLogger(__name__)


class RoundPreconditionError(ValueError):
    """The requested demander has no deficit or does not exist."""


@dataclass
class NodeState:
    """Mutable per-node state.

    ``transfer_ledger`` is the cumulative net energy received through
    cooperation (positive = received). ``last_offer`` is the node's most
    recent selling volume and seeds its next market game.
    """

    node_id: int
    stored_energy: float
    harvest_rate: float
    traffic: TrafficProcess
    costs: CostParams
    channel: ChannelParams | None = None
    transfer_ledger: float = 0.0
    last_offer: float = 0.0
    policy: InventoryPolicy | None = None
    _policy_key: tuple | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.stored_energy) and self.stored_energy >= 0):
            raise ValueError(f"node {self.node_id}: stored_energy must be >= 0")
        if not (math.isfinite(self.harvest_rate) and self.harvest_rate >= 0):
            raise ValueError(f"node {self.node_id}: harvest_rate must be >= 0")

    def ensure_policy(self) -> InventoryPolicy:
        """(Re)compute the inventory policy if traffic or costs changed."""
        key = (self.traffic, self.costs)
        if self.policy is None or self._policy_key != key:
            self.policy = solve_policy(_distribution(self.traffic), self.costs)
            self._policy_key = key
        return self.policy

    def pin_policy(self, policy: InventoryPolicy) -> None:
        """Use ``policy`` until traffic or costs change."""
        self.policy = policy
        self._policy_key = (self.traffic, self.costs)

    @property
    def order_up_to(self) -> float:
        return self.ensure_policy().order_up_to


_DIST_CACHE: dict[TrafficProcess, DemandDistribution] = {}


def _distribution(traffic: TrafficProcess) -> DemandDistribution:
    dist = _DIST_CACHE.get(traffic)
    if dist is None:
        dist = demand_distribution(traffic)
        _DIST_CACHE[traffic] = dist
    return dist


@dataclass(frozen=True)
class Classification:
    suppliers: dict[int, float]
    demanders: dict[int, float]
    idle: tuple[int, ...]


def classify_nodes(nodes: Sequence[NodeState]) -> Classification:
    """Split nodes by stored energy relative to their order-up-to level.

    Suppliers map to their surplus, demanders to their deficit; nodes sitting
    exactly at ``S*`` are idle.
    """
    suppliers: dict[int, float] = {}
    demanders: dict[int, float] = {}
    idle: list[int] = []
    for node in nodes:
        target = node.order_up_to
        if node.stored_energy > target:
            suppliers[node.node_id] = node.stored_energy - target
        elif node.stored_energy < target:
            demanders[node.node_id] = target - node.stored_energy
        else:
            idle.append(node.node_id)
    return Classification(suppliers, demanders, tuple(idle))


@dataclass(frozen=True)
class MarketConfig:
    """How a cooperation round sets up its market.

    The selling-cost coefficient of a supplier is ``w * D * (S*/stored)**2``
    (its own need against its stock) unless ``coefficient_override`` is set.
    """

    k_d: float = REFERENCE_MARKET_CONSTANT
    cost_weight: float = 0.5
    coefficient_override: float | None = None
    leaders: int = 1
    convergence_tol: float = 1e-6
    stability_rounds: int = 3
    max_iterations: int = 1000
    damping: float | None = None
    transfer_efficiency: float = 0.5

    def __post_init__(self) -> None:
        if not 0 < self.transfer_efficiency <= 1:
            raise ValueError("transfer_efficiency must lie in (0, 1]")
        if self.leaders < 1:
            raise ValueError("leaders must be >= 1")


@dataclass(frozen=True)
class CooperationRound:
    demander_id: int
    requested_energy: float
    supplier_ids: tuple[int, ...]
    equilibrium: EquilibriumResult | None
    delivered_energy: float
    aborted: bool = False
    reason: str = ""

    @property
    def sold_energy(self) -> float:
        return self.equilibrium.total_volume if self.equilibrium and not self.aborted else 0.0


def run_cooperation_round(
    nodes: Sequence[NodeState],
    demander_id: int,
    game_kind: str = "cournot",
    market: MarketConfig | None = None,
) -> CooperationRound:
    """Serve one demander: broadcast, settle the market, transfer, update ledgers.

    State is only modified once the market has converged; an aborted round
    leaves every node untouched.
    """
    market = market or MarketConfig()
    by_id = {n.node_id: n for n in nodes}
    if demander_id not in by_id:
        raise RoundPreconditionError(f"unknown node {demander_id}")
    cls = classify_nodes(nodes)
    deficit = cls.demanders.get(demander_id, 0.0)
    if deficit <= 0:
        raise RoundPreconditionError(f"node {demander_id} has no energy deficit")

    if not cls.suppliers:
        return CooperationRound(demander_id, deficit, (), None, 0.0, True, "no suppliers")

    # Largest surplus first; with stackelberg the head of this list leads.
    order = sorted(cls.suppliers, key=lambda i: (-cls.suppliers[i], i))
    profiles = []
    for i in order:
        node = by_id[i]
        profiles.append(
            SupplierProfile(
                stored_energy=node.stored_energy,
                required_power=node.order_up_to,
                traffic_quantity=node.traffic.traffic_quantity,
                cost_weight=market.cost_weight,
                history=min(node.last_offer, cls.suppliers[i]),
                capacity=cls.suppliers[i],
                coefficient_override=market.coefficient_override,
            )
        )
    kind = game_kind
    leaders = followers = 0
    if kind == "stackelberg":
        if len(profiles) < 2:
            kind = "cournot"
        else:
            leaders = min(market.leaders, len(profiles) - 1)
            followers = len(profiles) - leaders
    try:
        scenario = MarketScenario(
            k_d=market.k_d,
            suppliers=tuple(profiles),
            game_kind=kind,
            leaders=leaders,
            followers=followers,
            convergence_tol=market.convergence_tol,
            stability_rounds=market.stability_rounds,
            max_iterations=market.max_iterations,
            damping=market.damping,
        )
        result = solve(scenario)
    except ValueError as exc:
        return CooperationRound(demander_id, deficit, tuple(order), None, 0.0, True, str(exc))
    if not result.converged:
        return CooperationRound(
            demander_id, deficit, tuple(order), result, 0.0, True, "market did not converge"
        )

    sold = result.total_volume
    delivered = market.transfer_efficiency * sold
    for i, p in zip(order, result.allocations):
        node = by_id[i]
        node.stored_energy -= p
        node.transfer_ledger -= p
        node.last_offer = p
    dem = by_id[demander_id]
    dem.stored_energy += delivered
    dem.transfer_ledger += delivered
    return CooperationRound(demander_id, deficit, tuple(order), result, delivered)


@dataclass(frozen=True)
class SlotRecord:
    slot: int
    node_id: int
    stored: float
    harvested: float
    consumed: float
    unmet: float
    transferred: float = 0.0
    lost: float = 0.0
    price: float = 0.0
    traded: bool = False


def draw_demand(dist: DemandDistribution, rng: np.random.Generator) -> float:
    u = rng.random()
    idx = int(np.searchsorted(dist.cumulative(), u, side="right"))
    return dist.support[min(idx, len(dist.support) - 1)]


def step(
    nodes: Sequence[NodeState], slot: int, rng: np.random.Generator
) -> tuple[list[NodeState], list[SlotRecord]]:
    """Advance every node by one slot: harvest, then consume a random demand.

    Returns new node objects (inputs are not modified) plus one record per
    node. Demand that the battery cannot cover is recorded as ``unmet``.
    """
    out = []
    records = []
    for node in sorted(nodes, key=lambda n: n.node_id):
        new = copy.copy(node)
        new.ensure_policy()
        new.stored_energy = node.stored_energy + node.harvest_rate
        demand = draw_demand(_distribution(node.traffic), rng) if node.traffic.traffic_quantity > 0 else 0.0
        consumed = min(demand, new.stored_energy)
        new.stored_energy -= consumed
        out.append(new)
        records.append(
            SlotRecord(slot, node.node_id, new.stored_energy, node.harvest_rate, consumed, demand - consumed)
        )
    return out, records


@dataclass
class SimulationTrace:
    records: list[SlotRecord] = field(default_factory=list)
    rounds: list[tuple[int, CooperationRound]] = field(default_factory=list)
    initial_total: float = 0.0
    final_total: float = 0.0

    def totals(self) -> dict[str, float]:
        return {
            "harvested": math.fsum(r.harvested for r in self.records),
            "consumed": math.fsum(r.consumed for r in self.records),
            "unmet": math.fsum(r.unmet for r in self.records),
            "lost": math.fsum(r.lost for r in self.records),
        }

    def conservation_residual(self) -> float:
        """harvest - demand - losses - (change in stored) + unmet; zero up to rounding."""
        t = self.totals()
        demand = t["consumed"] + t["unmet"]
        delta = self.final_total - self.initial_total
        return t["harvested"] - demand - t["lost"] - (delta - t["unmet"])


class Network:
    """A set of nodes sharing one seeded random source and market rules."""

    def __init__(
        self,
        nodes: Sequence[NodeState],
        market: MarketConfig | None = None,
        game_kind: str = "cournot",
        seed: int = 0,
    ) -> None:
        ids = [n.node_id for n in nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("node ids must be unique")
        self.nodes = sorted(nodes, key=lambda n: n.node_id)
        self.market = market or MarketConfig()
        self.game_kind = game_kind
        self.rng = np.random.default_rng(seed)

    def total_stored(self) -> float:
        return math.fsum(n.stored_energy for n in self.nodes)

    def advance(self, slot: int, trace: SimulationTrace) -> None:
        self.nodes, records = step(self.nodes, slot, self.rng)
        by_id = {r.node_id: i for i, r in enumerate(records)}
        cls = classify_nodes(self.nodes)
        queue = sorted(cls.demanders, key=lambda i: (-cls.demanders[i], i))
        for dem_id in queue:
            current = classify_nodes(self.nodes)
            if dem_id not in current.demanders:
                continue
            rnd = run_cooperation_round(self.nodes, dem_id, self.game_kind, self.market)
            trace.rounds.append((slot, rnd))
            if rnd.aborted:
                logger.debug("slot %d: round for node %d aborted: %s", slot, dem_id, rnd.reason)
                continue
            price = rnd.equilibrium.price
            for sid, p in zip(rnd.supplier_ids, rnd.equilibrium.allocations):
                j = by_id[sid]
                r = records[j]
                records[j] = _with_trade(r, -p, 0.0, price)
            j = by_id[dem_id]
            lost = rnd.sold_energy - rnd.delivered_energy
            records[j] = _with_trade(records[j], rnd.delivered_energy, lost, price)
        final = {n.node_id: n.stored_energy for n in self.nodes}
        trace.records.extend(
            SlotRecord(
                r.slot, r.node_id, final[r.node_id], r.harvested, r.consumed,
                r.unmet, r.transferred, r.lost, r.price, r.traded,
            )
            for r in records
        )

    def run(self, slots: int) -> SimulationTrace:
        trace = SimulationTrace(initial_total=self.total_stored())
        for slot in range(slots):
            self.advance(slot, trace)
        trace.final_total = self.total_stored()
        return trace


def _with_trade(r: SlotRecord, transferred: float, lost: float, price: float) -> SlotRecord:
    return SlotRecord(
        r.slot, r.node_id, r.stored, r.harvested, r.consumed, r.unmet,
        r.transferred + transferred, r.lost + lost, price, True,
    )


def demo_nodes(count: int = 10, seed: int = 0) -> list[NodeState]:
    """Heterogeneous nodes: traffic quantities 5/10/20, harvest rates around demand."""
    rng = np.random.default_rng(seed)
    nodes = []
    for i in range(count):
        lam = (5.0, 10.0, 20.0)[i % 3]
        harvest = float(np.round(lam * rng.uniform(0.6, 1.6), 3))
        nodes.append(
            NodeState(
                node_id=i,
                stored_energy=float(np.round(rng.uniform(0.0, 3.0 * lam), 3)),
                harvest_rate=harvest,
                traffic=TrafficProcess.from_quantity(lam),
                costs=CostParams(holding=1.0, shortage=4.0),
            )
        )
    return nodes
