"""Energy inventory and energy trading for energy-harvesting sensor networks."""

from .channel import ChannelParams, achievable_rate, demander_efficiency, required_power
from .demand import DemandDistribution, TrafficProcess, demand_cdf, demand_distribution, packet_pmf
from .inventory import (
    CostParams,
    InventoryPolicy,
    brute_force_optimum,
    critical_ratio,
    delta_cost,
    expected_cost,
    optimal_inventory,
    reorder_point,
    solve_policy,
)
from .market import (
    EquilibriumResult,
    MarketScenario,
    SupplierProfile,
    cournot_best_response,
    cournot_solve,
    demander_payoff,
    market_price,
    nash_check,
    selling_cost,
    solve,
    stackelberg_solve,
    static_solve,
    supplier_payoff,
    uniform_market,
)

__version__ = "0.1.0"
