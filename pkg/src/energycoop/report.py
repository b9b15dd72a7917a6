"""Scenario configs, experiment runners and CSV tables.

A scenario is an INI document. The ``[experiment]`` section picks what to
run (``kind``); the other sections carry parameters:

``[traffic]``  mu, tau, a
``[costs]``    c_h, c_s, c_pur, c_se, i
``[channel]``  r_b, b_i, n0 (W/Hz) or n0_dbm
``[market]``   k_d, w, d_i, p_req, s_i, coefficient, game, m, n, suppliers,
               histories, methods, report, tol, stability_rounds,
               max_iterations, damping
``[sim]``      nodes, slots, seed, layout_seed, transfer_efficiency,
               harvest, initial
``[output]``   path, precision

Keys are case-insensitive. Lists are comma separated; integer ranges may be
written ``2-20``. The figure presets are canned documents of this form, so
running a preset and running its text as a config yield the same bytes.
"""

from __future__ import annotations

import configparser
import csv
import hashlib
import io
import math
from dataclasses import dataclass, field
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from . import channel as chan
from .demand import TrafficProcess, demand_distribution
from .inventory import CostParams, critical_ratio, expected_cost, optimal_inventory, reorder_point
from .market import (
    REFERENCE_HISTORIES,
    MarketScenario,
    SupplierProfile,
    solve,
    uniform_market,
)
from .sim import MarketConfig, Network, NodeState

try:
    TOOL_VERSION = version("artifact")
except PackageNotFoundError:  # running from a source tree
    TOOL_VERSION = "0.1.0"

DEFAULT_PRECISION = 12
EXPERIMENT_KINDS = ("inventory_curve", "inventory", "market", "market_sweep", "sim")
SWEEP_METHODS = ("static", "cournot", "stackelberg1", "stackelberg2")


class ConfigError(ValueError):
    """A scenario document failed to parse or validate."""


@dataclass
class ReportTable:
    """Named numeric columns plus a metadata header."""

    name: str
    columns: dict[str, list[float]]
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"table {self.name}: column lengths differ {sorted(lengths)}")
        for key, values in self.columns.items():
            for v in values:
                if not math.isfinite(v):
                    raise ValueError(f"table {self.name}: non-finite value in column {key}")

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values()), []))

    def column(self, name: str) -> list[float]:
        return self.columns[name]

    def rows(self) -> list[dict[str, float]]:
        keys = list(self.columns)
        return [dict(zip(keys, vals)) for vals in zip(*self.columns.values())]

    def to_csv(self, precision: int = DEFAULT_PRECISION) -> str:
        buf = io.StringIO()
        buf.write(f"# table: {self.name}\n")
        for key, value in self.metadata.items():
            buf.write(f"# {key}: {value}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns.keys())
        for vals in zip(*self.columns.values()):
            writer.writerow(_fmt(v, precision) for v in vals)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ReportTable":
        meta: dict[str, str] = {}
        name = ""
        body = []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(":")
                if key == "table":
                    name = value.strip()
                else:
                    meta[key.strip()] = value.strip()
            elif line:
                body.append(line)
        reader = csv.reader(body)
        header = next(reader)
        cols: dict[str, list[float]] = {h: [] for h in header}
        for row in reader:
            for h, v in zip(header, row):
                cols[h].append(float(v))
        return cls(name=name, columns=cols, metadata=meta)


def _fmt(value: float, precision: int) -> str:
    if float(value).is_integer() and abs(value) < 1e15:
        return str(int(value))
    return f"{value:.{precision}g}"


# --------------------------------------------------------------------------
# config parsing


def _parse_list(raw: str, where: str, integer: bool = False) -> list[float]:
    out: list[float] = []
    for token in raw.replace(";", ",").split(","):
        token = token.strip()
        if not token:
            continue
        if integer and "-" in token[1:]:
            lo, _, hi = token.partition("-")
            try:
                a, b = int(lo), int(hi)
            except ValueError:
                raise ConfigError(f"{where}: bad integer range {token!r}") from None
            if b < a:
                raise ConfigError(f"{where}: empty range {token!r}")
            out.extend(range(a, b + 1))
            continue
        try:
            out.append(int(token) if integer else float(token))
        except ValueError:
            kind = "integer" if integer else "number"
            raise ConfigError(f"{where}: expected {kind}, got {token!r}") from None
    if not out:
        raise ConfigError(f"{where}: empty list")
    return out


class ScenarioConfig:
    """Parsed scenario document with typed accessors."""

    SECTIONS = ("experiment", "traffic", "costs", "channel", "market", "sim", "output")

    def __init__(self, parser: configparser.ConfigParser) -> None:
        self._cp = parser
        for section in parser.sections():
            if section not in self.SECTIONS:
                raise ConfigError(f"unknown section [{section}]; expected one of {self.SECTIONS}")
        self.validate()

    @classmethod
    def from_text(cls, text: str) -> "ScenarioConfig":
        cp = configparser.ConfigParser(interpolation=None)
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"config parse error: {exc}") from None
        return cls(cp)

    @classmethod
    def from_path(cls, path: str | Path) -> "ScenarioConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_text(text)

    def set(self, section: str, key: str, value: str) -> None:
        if not self._cp.has_section(section):
            self._cp.add_section(section)
        self._cp.set(section, key, value)

    def has(self, section: str, key: str) -> bool:
        return self._cp.has_option(section, key)

    def raw(self, section: str, key: str, default: str | None = None) -> str | None:
        if self._cp.has_option(section, key):
            return self._cp.get(section, key).strip()
        return default

    def number(self, section: str, key: str, default: float | None = None) -> float:
        raw = self.raw(section, key)
        if raw is None:
            if default is None:
                raise ConfigError(f"{section}.{key}: required")
            return default
        try:
            value = float(raw)
        except ValueError:
            raise ConfigError(f"{section}.{key}: expected a number, got {raw!r}") from None
        if not math.isfinite(value):
            raise ConfigError(f"{section}.{key}: must be finite")
        return value

    def integer(self, section: str, key: str, default: int | None = None) -> int:
        raw = self.raw(section, key)
        if raw is None:
            if default is None:
                raise ConfigError(f"{section}.{key}: required")
            return default
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{section}.{key}: expected an integer, got {raw!r}") from None

    def numbers(self, section: str, key: str, default: list[float] | None = None) -> list[float]:
        raw = self.raw(section, key)
        if raw is None:
            if default is None:
                raise ConfigError(f"{section}.{key}: required")
            return default
        return _parse_list(raw, f"{section}.{key}")

    def integers(self, section: str, key: str, default: list[int] | None = None) -> list[int]:
        raw = self.raw(section, key)
        if raw is None:
            if default is None:
                raise ConfigError(f"{section}.{key}: required")
            return default
        return [int(v) for v in _parse_list(raw, f"{section}.{key}", integer=True)]

    # ---- typed views -----------------------------------------------------

    @property
    def kind(self) -> str:
        kind = self.raw("experiment", "kind", "sim")
        if kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"experiment.kind: must be one of {EXPERIMENT_KINDS}, got {kind!r}")
        return kind

    @property
    def name(self) -> str:
        return self.raw("experiment", "name", self.kind)

    def traffic(self) -> list[TrafficProcess]:
        mus = self.numbers("traffic", "mu", [5.0])
        tau = self.number("traffic", "tau", 1.0)
        a = self.number("traffic", "a", 1.0)
        try:
            return [TrafficProcess(mu, tau, a) for mu in mus]
        except ValueError as exc:
            raise ConfigError(f"traffic: {exc}") from None

    def costs(self) -> CostParams:
        try:
            return CostParams(
                holding=self.number("costs", "c_h", 1.0),
                shortage=self.number("costs", "c_s", 4.0),
                purchase=self.number("costs", "c_pur", 0.0),
                setup=self.number("costs", "c_se", 0.0),
            )
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"costs (c_h, c_s, c_pur, c_se): {exc}") from None

    def stock(self) -> float:
        value = self.number("costs", "i", 0.0)
        if value < 0:
            raise ConfigError("costs.i: existing stock must be >= 0")
        return value

    def channel(self) -> chan.ChannelParams:
        defaults = chan.ChannelParams.mote_defaults()
        if self.has("channel", "n0") and self.has("channel", "n0_dbm"):
            raise ConfigError("channel: give either n0 or n0_dbm, not both")
        n0 = defaults.noise_psd
        if self.has("channel", "n0"):
            n0 = self.number("channel", "n0")
        elif self.has("channel", "n0_dbm"):
            n0 = chan.dbm_to_watts(self.number("channel", "n0_dbm"))
        try:
            return chan.ChannelParams(
                bandwidth=self.number("channel", "b_i", defaults.bandwidth),
                noise_psd=n0,
                rate_threshold=self.number("channel", "r_b", defaults.rate_threshold),
            )
        except ValueError as exc:
            raise ConfigError(f"channel: {exc}") from None

    def k_d(self) -> float:
        if self.has("market", "k_d"):
            value = self.number("market", "k_d")
            if value <= 0:
                raise ConfigError("market.k_d: must be > 0")
            return value
        try:
            return chan.market_constant(self.channel())
        except ValueError as exc:
            raise ConfigError(f"channel.r_b: {exc}") from None

    def supplier_profile(self) -> SupplierProfile:
        coef_raw = self.raw("market", "coefficient", "formula")
        override = None
        if coef_raw != "formula":
            override = self.number("market", "coefficient")
            if override < 0:
                raise ConfigError("market.coefficient: must be >= 0 or 'formula'")
        try:
            return SupplierProfile(
                stored_energy=self.number("market", "s_i", 160.0),
                required_power=self.number("market", "p_req", 120.0),
                traffic_quantity=self.number("market", "d_i", 15.0),
                cost_weight=self.number("market", "w", 0.5),
                coefficient_override=override,
            )
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"market (s_i, p_req, d_i, w): {exc}") from None

    def damping(self) -> float | None:
        raw = self.raw("market", "damping", "auto")
        if raw == "auto":
            return None
        value = self.number("market", "damping")
        if not 0 < value <= 1:
            raise ConfigError("market.damping: must lie in (0, 1] or be 'auto'")
        return value

    def solver_options(self) -> dict:
        tol = self.number("market", "tol", 1e-6)
        if tol <= 0:
            raise ConfigError("market.tol: convergence tolerance must be > 0")
        rounds = self.integer("market", "stability_rounds", 3)
        if rounds < 1:
            raise ConfigError("market.stability_rounds: must be >= 1")
        max_it = self.integer("market", "max_iterations", 1000)
        if max_it < 1:
            raise ConfigError("market.max_iterations: must be >= 1")
        return dict(
            convergence_tol=tol,
            stability_rounds=rounds,
            max_iterations=max_it,
            damping=self.damping(),
        )

    def game(self) -> str:
        game = self.raw("market", "game", "cournot")
        if game not in ("static", "cournot", "stackelberg"):
            raise ConfigError(f"market.game: must be static, cournot or stackelberg, got {game!r}")
        return game

    def market_scenario(self) -> MarketScenario:
        game = self.game()
        histories = self.numbers("market", "histories", [])
        if self.has("market", "suppliers"):
            count = self.integer("market", "suppliers")
        elif game == "stackelberg" and self.has("market", "m") and self.has("market", "n"):
            count = self.integer("market", "m") + self.integer("market", "n")
        elif histories:
            count = len(histories)
        else:
            count = 4
        if count < 1:
            raise ConfigError("market.suppliers: must be >= 1")
        if histories and len(histories) != count:
            raise ConfigError(f"market.histories: expected {count} values, got {len(histories)}")
        if any(h < 0 for h in histories):
            raise ConfigError("market.histories: offers must be >= 0")
        leaders = 0
        if game == "stackelberg":
            leaders = self.integer("market", "m", 1)
            n = self.integer("market", "n", count - leaders)
            if leaders < 1 or n < 1 or leaders + n != count:
                raise ConfigError(
                    f"market.m/market.n: need m >= 1, n >= 1 and m + n = {count}, got m={leaders}, n={n}"
                )
        try:
            return uniform_market(
                self.k_d(),
                count,
                game,
                leaders=leaders,
                histories=histories or None,
                profile=self.supplier_profile(),
                **self.solver_options(),
            )
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"market: {exc}") from None

    def sim_options(self) -> dict:
        slots = self.integer("sim", "slots", 0)
        if slots < 0:
            raise ConfigError("sim.slots: must be >= 0")
        nodes = self.integer("sim", "nodes", 10)
        if nodes < 1:
            raise ConfigError("sim.nodes: must be >= 1")
        eff = self.number("sim", "transfer_efficiency", 0.5)
        if not 0 < eff <= 1:
            raise ConfigError("sim.transfer_efficiency: must lie in (0, 1]")
        return dict(
            slots=slots,
            nodes=nodes,
            seed=self.integer("sim", "seed", 0),
            layout_seed=self.integer("sim", "layout_seed", 0),
            transfer_efficiency=eff,
        )

    def precision(self) -> int:
        p = self.integer("output", "precision", DEFAULT_PRECISION)
        if not 1 <= p <= 17:
            raise ConfigError("output.precision: must lie in 1..17")
        return p

    def validate(self) -> None:
        """Touch every typed view so errors surface before any computation."""
        kind = self.kind
        self.precision()
        self.traffic()
        self.costs()
        self.stock()
        if kind in ("market", "market_sweep", "sim"):
            self.k_d()
            self.supplier_profile()
            self.solver_options()
            self.game()
        if kind == "market":
            self.market_scenario()
        if kind == "market_sweep":
            self._sweep_spec()
        if kind == "sim":
            self.sim_options()
            self.numbers("sim", "harvest", [])
            self.numbers("sim", "initial", [])

    def canonical(self) -> str:
        parts = []
        for section in sorted(self._cp.sections()):
            for key, value in sorted(self._cp.items(section)):
                if (section, key) == ("sim", "seed"):
                    # recorded separately; market tables must not depend on it
                    continue
                parts.append(f"{section}.{key}={value.strip()}")
        return "\n".join(parts)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]

    def _sweep_spec(self) -> tuple[list[int], list[str], str]:
        counts = self.integers("market", "suppliers", list(range(2, 21)))
        if min(counts) < 1:
            raise ConfigError("market.suppliers: counts must be >= 1")
        raw = self.raw("market", "methods", ",".join(SWEEP_METHODS))
        methods = [m.strip() for m in raw.split(",") if m.strip()]
        for m in methods:
            if m not in SWEEP_METHODS:
                raise ConfigError(f"market.methods: unknown method {m!r}; expected {SWEEP_METHODS}")
        if any(m.startswith("stackelberg") for m in methods) and min(counts) < 2:
            raise ConfigError("market.suppliers: stackelberg sweeps need at least 2 suppliers")
        report = self.raw("market", "report", "totals")
        if report not in ("totals", "prices"):
            raise ConfigError(f"market.report: must be totals or prices, got {report!r}")
        return counts, methods, report


# --------------------------------------------------------------------------
# experiments


def _meta(cfg: ScenarioConfig, **extra: str) -> dict[str, str]:
    meta = {"scenario_hash": cfg.digest(), "tool_version": TOOL_VERSION, "kind": cfg.kind}
    meta.update(extra)
    return meta


def _inventory_curve(cfg: ScenarioConfig) -> ReportTable:
    costs = cfg.costs()
    stock = cfg.stock()
    cols: dict[str, list[float]] = {"mu_tau": [], "S": [], "expected_cost": [], "optimal": []}
    for proc in cfg.traffic():
        dist = demand_distribution(proc)
        best = optimal_inventory(dist, costs)
        for level in dist.support:
            cols["mu_tau"].append(proc.traffic_quantity)
            cols["S"].append(level)
            cols["expected_cost"].append(expected_cost(level, dist, costs, stock))
            cols["optimal"].append(1.0 if level == best else 0.0)
    return ReportTable(cfg.name, cols, _meta(cfg, critical_ratio=f"{critical_ratio(costs):.12g}"))


def _inventory(cfg: ScenarioConfig) -> ReportTable:
    costs = cfg.costs()
    stock = cfg.stock()
    cols: dict[str, list[float]] = {
        "mu_tau": [], "S_star": [], "reorder_point": [], "expected_cost": [], "critical_ratio": [],
    }
    for proc in cfg.traffic():
        dist = demand_distribution(proc)
        s_star = optimal_inventory(dist, costs)
        cols["mu_tau"].append(proc.traffic_quantity)
        cols["S_star"].append(s_star)
        cols["reorder_point"].append(reorder_point(dist, costs, s_star))
        cols["expected_cost"].append(expected_cost(s_star, dist, costs, stock))
        cols["critical_ratio"].append(critical_ratio(costs))
    return ReportTable(cfg.name, cols, _meta(cfg))


def _market(cfg: ScenarioConfig) -> ReportTable:
    scenario = cfg.market_scenario()
    result = solve(scenario)
    cols: dict[str, list[float]] = {"iteration": list(range(len(result.trace)))}
    for i in range(scenario.size):
        cols[f"supplier_{i + 1}"] = [row[i] for row in result.trace]
    totals = [math.fsum(row) for row in result.trace]
    cols["total"] = totals
    cols["price"] = [scenario.k_d - t for t in totals]
    meta = _meta(
        cfg,
        game=scenario.game_kind,
        k_d=f"{scenario.k_d:.12g}",
        converged=str(result.converged).lower(),
        iterations=str(result.iterations),
    )
    if scenario.game_kind == "stackelberg":
        meta["leaders"] = str(scenario.leaders)
    return ReportTable(cfg.name, cols, meta)


def _sweep_total(method: str, count: int, k_d: float, profile: SupplierProfile, opts: dict) -> float:
    if method == "static":
        sc = uniform_market(k_d, count, "static", profile=profile, **opts)
    elif method == "cournot":
        sc = uniform_market(k_d, count, "cournot", profile=profile, **opts)
    elif method == "stackelberg1":
        sc = uniform_market(k_d, count, "stackelberg", leaders=1, profile=profile, **opts)
    else:
        sc = uniform_market(k_d, count, "stackelberg", leaders=count - 1, profile=profile, **opts)
    result = solve(sc)
    if not result.converged:
        raise RuntimeError(f"{method} with {count} suppliers did not converge")
    return result.total_volume


def _market_sweep(cfg: ScenarioConfig) -> ReportTable:
    counts, methods, report = cfg._sweep_spec()
    k_d = cfg.k_d()
    profile = cfg.supplier_profile()
    opts = cfg.solver_options()
    cols: dict[str, list[float]] = {"suppliers": [float(c) for c in counts]}
    for method in methods:
        totals = [_sweep_total(method, c, k_d, profile, opts) for c in counts]
        cols[f"total_{method}"] = totals
        if report == "prices":
            cols[f"price_{method}"] = [k_d - t for t in totals]
    return ReportTable(cfg.name, cols, _meta(cfg, k_d=f"{k_d:.12g}", report=report))


def build_nodes(cfg: ScenarioConfig) -> list[NodeState]:
    """Nodes for a simulation run.

    Traffic quantities, harvest rates and initial stocks cycle through the
    configured lists; missing harvest/initial values are drawn from the
    layout seed (independent of the run seed).
    """
    opts = cfg.sim_options()
    traffic = cfg.traffic()
    costs = cfg.costs()
    harvest = cfg.numbers("sim", "harvest", [])
    initial = cfg.numbers("sim", "initial", [])
    rng = np.random.default_rng(opts["layout_seed"])
    nodes = []
    for i in range(opts["nodes"]):
        proc = traffic[i % len(traffic)]
        lam = proc.traffic_quantity * proc.energy_per_packet
        h = harvest[i % len(harvest)] if harvest else float(np.round(lam * rng.uniform(0.6, 1.6), 3))
        s0 = initial[i % len(initial)] if initial else float(np.round(rng.uniform(0.0, 3.0 * lam), 3))
        try:
            nodes.append(NodeState(i, s0, h, proc, costs))
        except ValueError as exc:
            raise ConfigError(f"sim: {exc}") from None
    return nodes


def _sim(cfg: ScenarioConfig) -> ReportTable:
    opts = cfg.sim_options()
    solver = cfg.solver_options()
    coef_raw = cfg.raw("market", "coefficient", "formula")
    market = MarketConfig(
        k_d=cfg.k_d(),
        cost_weight=cfg.number("market", "w", 0.5),
        coefficient_override=None if coef_raw == "formula" else cfg.number("market", "coefficient"),
        leaders=cfg.integer("market", "m", 1),
        transfer_efficiency=opts["transfer_efficiency"],
        **solver,
    )
    net = Network(build_nodes(cfg), market, cfg.game(), seed=opts["seed"])
    trace = net.run(opts["slots"])
    cols: dict[str, list[float]] = {
        k: [] for k in (
            "slot", "node", "stored", "harvested", "consumed", "unmet",
            "transferred", "lost", "price", "traded",
        )
    }
    for r in trace.records:
        cols["slot"].append(r.slot)
        cols["node"].append(r.node_id)
        cols["stored"].append(r.stored)
        cols["harvested"].append(r.harvested)
        cols["consumed"].append(r.consumed)
        cols["unmet"].append(r.unmet)
        cols["transferred"].append(r.transferred)
        cols["lost"].append(r.lost)
        cols["price"].append(r.price)
        cols["traded"].append(1.0 if r.traded else 0.0)
    aborted = sum(1 for _, rnd in trace.rounds if rnd.aborted)
    meta = _meta(
        cfg,
        seed=str(opts["seed"]),
        rounds=str(len(trace.rounds)),
        aborted_rounds=str(aborted),
        conservation_residual=f"{trace.conservation_residual():.3g}",
    )
    return ReportTable(cfg.name, cols, meta)


_RUNNERS = {
    "inventory_curve": _inventory_curve,
    "inventory": _inventory,
    "market": _market,
    "market_sweep": _market_sweep,
    "sim": _sim,
}


def run_scenario(cfg: ScenarioConfig) -> ReportTable:
    return _RUNNERS[cfg.kind](cfg)


def run_config(path: str | Path) -> ReportTable:
    return run_scenario(ScenarioConfig.from_path(path))


# --------------------------------------------------------------------------
# presets

_REFERENCE_MARKET = """\
[market]
k_d = 357
coefficient = 4
w = 0.5
d_i = 15
p_req = 120
s_i = 160
tol = 1e-6
stability_rounds = 3
damping = auto
"""

_H = ", ".join(f"{h:g}" for h in REFERENCE_HISTORIES)

PRESETS: dict[str, str] = {
    "fig2": """\
[experiment]
name = fig2
kind = inventory_curve

[traffic]
mu = 5, 10, 20
tau = 1
a = 1

[costs]
c_h = 4
c_s = 3
c_pur = 0
c_se = 0
i = 2
""",
    "fig3": """\
[experiment]
name = fig3
kind = inventory_curve

[traffic]
mu = 5, 10, 20
tau = 1
a = 1

[costs]
c_h = 1
c_s = 4
c_pur = 0
c_se = 0
i = 2
""",
    "fig4": f"""\
[experiment]
name = fig4
kind = market

{_REFERENCE_MARKET}game = cournot
histories = {", ".join(f"{h:g}" for h in REFERENCE_HISTORIES[:4])}
""",
    "fig5": f"""\
[experiment]
name = fig5
kind = market

{_REFERENCE_MARKET}game = stackelberg
m = 3
n = 3
histories = {_H}
""",
    "fig6": f"""\
[experiment]
name = fig6
kind = market_sweep

{_REFERENCE_MARKET}suppliers = 2-20
methods = static, cournot, stackelberg1, stackelberg2
report = totals
""",
    "fig7": f"""\
[experiment]
name = fig7
kind = market_sweep

{_REFERENCE_MARKET}suppliers = 5, 6, 9, 10
methods = cournot, stackelberg1, stackelberg2
report = totals
""",
    "fig8": f"""\
[experiment]
name = fig8
kind = market_sweep

{_REFERENCE_MARKET}suppliers = 2-20
methods = static, cournot, stackelberg1, stackelberg2
report = prices
""",
}


class UnknownPresetError(KeyError):
    def __str__(self) -> str:
        return f"unknown preset {self.args[0]!r}; valid presets: {', '.join(PRESETS)}"


def preset_config(name: str) -> ScenarioConfig:
    if name not in PRESETS:
        raise UnknownPresetError(name)
    return ScenarioConfig.from_text(PRESETS[name])


def run_preset(name: str) -> ReportTable:
    return run_scenario(preset_config(name))
