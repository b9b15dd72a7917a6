"""Command-line entry point.

    energycoop preset fig4 --out fig4.csv
    energycoop run scenario.ini
    energycoop inventory --mu 5 10 20 --holding 4 --shortage 3
    energycoop market --game stackelberg --suppliers 6 --leaders 3
    energycoop sim --nodes 10 --slots 1000 --seed 7

Without ``--out`` a table goes to ``$ENERGYCOOP_OUTPUT_DIR/<name>.csv`` when
that variable is set, and to stdout otherwise.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .report import PRESETS, ConfigError, ReportTable, ScenarioConfig, UnknownPresetError, run_scenario

OUTPUT_DIR_ENV = "ENERGYCOOP_OUTPUT_DIR"


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output file ('-' for stdout)")
    p.add_argument("--seed", type=int, help="simulation seed (overrides [sim] seed)")
    p.add_argument("--format", choices=["csv"], default="csv")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="energycoop", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preset", help="reproduce a figure as a data table")
    p.add_argument("name", help=f"one of: {', '.join(PRESETS)}")
    _common(p)

    p = sub.add_parser("run", help="run a scenario config file")
    p.add_argument("config", type=Path)
    _common(p)

    p = sub.add_parser("inventory", help="optimal (s, S) policy per traffic quantity")
    p.add_argument("--mu", type=float, nargs="+", default=[5.0, 10.0, 20.0], help="traffic quantities mu*tau")
    p.add_argument("--energy-per-packet", type=float, default=1.0)
    p.add_argument("--holding", type=float, default=1.0)
    p.add_argument("--shortage", type=float, default=4.0)
    p.add_argument("--purchase", type=float, default=0.0)
    p.add_argument("--setup", type=float, default=0.0)
    p.add_argument("--stock", type=float, default=0.0)
    p.add_argument("--curve", action="store_true", help="emit expected cost for every level")
    _common(p)

    p = sub.add_parser("market", help="settle one energy market")
    p.add_argument("--game", choices=["static", "cournot", "stackelberg"], default="cournot")
    p.add_argument("--suppliers", type=int, default=4)
    p.add_argument("--leaders", type=int, default=1)
    p.add_argument("--k-d", type=float, default=357.0)
    p.add_argument("--coefficient", default="4", help="selling-cost coefficient or 'formula'")
    p.add_argument("--histories", type=float, nargs="+")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--damping", default="auto")
    _common(p)

    p = sub.add_parser("sim", help="run the network simulator")
    p.add_argument("--nodes", type=int, default=10)
    p.add_argument("--slots", type=int, default=100)
    p.add_argument("--game", choices=["static", "cournot", "stackelberg"], default="cournot")
    p.add_argument("--leaders", type=int, default=1)
    p.add_argument("--transfer-efficiency", type=float, default=0.5)
    p.add_argument("--k-d", type=float, default=357.0)
    _common(p)
    return parser


def _join(values) -> str:
    return ", ".join(f"{v:g}" for v in values)


def _config_for(args: argparse.Namespace) -> ScenarioConfig:
    if args.command == "preset":
        if args.name not in PRESETS:
            raise UnknownPresetError(args.name)
        return ScenarioConfig.from_text(PRESETS[args.name])
    if args.command == "run":
        return ScenarioConfig.from_path(args.config)
    if args.command == "inventory":
        text = f"""\
[experiment]
name = inventory
kind = {"inventory_curve" if args.curve else "inventory"}
[traffic]
mu = {_join(args.mu)}
a = {args.energy_per_packet:g}
[costs]
c_h = {args.holding:g}
c_s = {args.shortage:g}
c_pur = {args.purchase:g}
c_se = {args.setup:g}
i = {args.stock:g}
"""
    elif args.command == "market":
        lines = [
            "[experiment]", "name = market", "kind = market", "[market]",
            f"game = {args.game}", f"suppliers = {args.suppliers}", f"k_d = {args.k_d!r}",
            f"coefficient = {args.coefficient}", f"tol = {args.tol!r}", f"damping = {args.damping}",
        ]
        if args.game == "stackelberg":
            lines += [f"m = {args.leaders}", f"n = {args.suppliers - args.leaders}"]
        if args.histories:
            lines.append(f"histories = {_join(args.histories)}")
        text = "\n".join(lines) + "\n"
    else:
        text = f"""\
[experiment]
name = sim
kind = sim
[traffic]
mu = 5, 10, 20
[costs]
c_h = 1
c_s = 4
[market]
game = {args.game}
k_d = {args.k_d!r}
m = {args.leaders}
[sim]
nodes = {args.nodes}
slots = {args.slots}
transfer_efficiency = {args.transfer_efficiency!r}
"""
    return ScenarioConfig.from_text(text)


def _write(table: ReportTable, text: str, out: str | None) -> None:
    if out is None:
        env_dir = os.environ.get(OUTPUT_DIR_ENV)
        if env_dir:
            out = str(Path(env_dir) / f"{table.name}.csv")
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path} ({table.n_rows} rows)", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        cfg = _config_for(args)
        if args.seed is not None:
            cfg.set("sim", "seed", str(args.seed))
        table = run_scenario(cfg)
        text = table.to_csv(cfg.precision())
        out = args.out if args.out is not None else cfg.raw("output", "path")
        _write(table, text, out)
    except UnknownPresetError as exc:
        print(f"energycoop: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError, RuntimeError, OSError) as exc:
        print(f"energycoop: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
