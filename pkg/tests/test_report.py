import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from energycoop.cli import main
from energycoop.report import (
    PRESETS,
    ConfigError,
    ReportTable,
    ScenarioConfig,
    UnknownPresetError,
    run_config,
    run_preset,
    run_scenario,
)


def test_fig2_minimum_row():
    table = run_preset("fig2")
    rows = [r for r in table.rows() if r["mu_tau"] == 5 and r["S"] == 4]
    assert len(rows) == 1
    assert rows[0]["expected_cost"] == pytest.approx(6.058, abs=5e-4)
    assert rows[0]["optimal"] == 1.0
    optima = {r["mu_tau"]: r["S"] for r in table.rows() if r["optimal"]}
    assert optima == {5: 4, 10: 9, 20: 19}


def test_fig3_optima():
    optima = {r["mu_tau"]: r["S"] for r in run_preset("fig3").rows() if r["optimal"]}
    assert optima == {5: 7, 10: 13, 20: 24}


def test_fig4_trace():
    table = run_preset("fig4")
    assert table.column("supplier_1")[0] == 29.5
    assert table.column("supplier_1")[-1] == pytest.approx(357 / 13, abs=1e-6)
    assert table.metadata["converged"] == "true"


def test_fig5_trace():
    table = run_preset("fig5")
    assert table.metadata["leaders"] == "3"
    assert table.column("supplier_1")[-1] == pytest.approx(3213 / 132, abs=1e-6)
    assert table.column("supplier_6")[-1] == pytest.approx((357 - 3 * 3213 / 132) / 12, abs=1e-6)


def test_fig6_static_column():
    table = run_preset("fig6")
    row = [r for r in table.rows() if r["suppliers"] == 4][0]
    assert row["total_static"] == pytest.approx(89.25, rel=1e-12)
    assert table.column("suppliers") == [float(m) for m in range(2, 21)]


def test_fig8_price_identity():
    table = run_preset("fig8")
    for method in ("static", "cournot", "stackelberg1", "stackelberg2"):
        for t, q in zip(table.column(f"total_{method}"), table.column(f"price_{method}")):
            assert q == 357 - t


def test_unknown_preset():
    with pytest.raises(UnknownPresetError, match="fig2"):
        run_preset("fig99")


def test_presets_reproducible():
    for name in PRESETS:
        assert run_preset(name).to_csv() == run_preset(name).to_csv()


def test_config_equal_to_preset_is_byte_identical(tmp_path):
    path = tmp_path / "fig2.ini"
    path.write_text(PRESETS["fig2"])
    assert run_config(path).to_csv() == run_preset("fig2").to_csv()


def test_invalid_costs_name_the_constraint(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[experiment]\nkind = inventory\n[costs]\nc_h = 0\nc_s = 0\n")
    with pytest.raises(ConfigError, match="critical ratio"):
        run_config(path)


@pytest.mark.parametrize(
    "text,field",
    [
        ("[experiment]\nkind = nonsense\n", "experiment.kind"),
        ("[traffic]\nmu = five\n", "traffic.mu"),
        ("[experiment]\nkind = market\n[market]\ngame = stackelberg\nsuppliers = 4\nm = 4\n", "market.m"),
        ("[experiment]\nkind = market\n[market]\ndamping = 2\n", "market.damping"),
        ("[experiment]\nkind = market\n[market]\ntol = 0\n", "market.tol"),
        ("[experiment]\nkind = sim\n[sim]\ntransfer_efficiency = 0\n", "sim.transfer_efficiency"),
        ("[bogus]\nx = 1\n", "bogus"),
        ("[experiment]\nkind = market\n[market]\nhistories = 1, 2\nsuppliers = 3\n", "market.histories"),
    ],
)
def test_validation_names_field(text, field):
    with pytest.raises(ConfigError, match=field.replace(".", r"\.")):
        ScenarioConfig.from_text(text)


def test_k_d_from_channel():
    cfg = ScenarioConfig.from_text(
        "[experiment]\nkind = market\n[channel]\nr_b = 40000\nb_i = 1e7\nn0_dbm = -50\n[market]\nsuppliers = 1\n"
    )
    assert cfg.k_d() == pytest.approx(144.0695965, rel=1e-9)


SIM_CFG = """\
[experiment]
kind = {kind}
[traffic]
mu = 5, 10, 20
[market]
game = cournot
k_d = 357
[sim]
nodes = 6
slots = 30
seed = {seed}
"""


def test_seed_changes_sim_but_not_market():
    m1 = run_scenario(ScenarioConfig.from_text(SIM_CFG.format(kind="market", seed=1))).to_csv()
    m2 = run_scenario(ScenarioConfig.from_text(SIM_CFG.format(kind="market", seed=2))).to_csv()
    assert m1 == m2
    s1 = run_scenario(ScenarioConfig.from_text(SIM_CFG.format(kind="sim", seed=1))).to_csv()
    s1b = run_scenario(ScenarioConfig.from_text(SIM_CFG.format(kind="sim", seed=1))).to_csv()
    s2 = run_scenario(ScenarioConfig.from_text(SIM_CFG.format(kind="sim", seed=2))).to_csv()
    assert s1 == s1b
    assert s1 != s2


def test_sim_table_conserves():
    table = run_scenario(ScenarioConfig.from_text(SIM_CFG.format(kind="sim", seed=3)))
    assert abs(float(table.metadata["conservation_residual"])) < 1e-9
    assert table.n_rows == 6 * 30


def test_table_invariants():
    with pytest.raises(ValueError):
        ReportTable("t", {"a": [1.0], "b": [1.0, 2.0]})
    with pytest.raises(ValueError):
        ReportTable("t", {"a": [math.nan]})


finite = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e300, max_value=1e300)


@settings(max_examples=200, deadline=None)
@given(st.lists(finite, min_size=1, max_size=20))
def test_csv_round_trip(values):
    table = ReportTable("t", {"x": values}, {"scenario_hash": "abc"})
    full = ReportTable.from_csv(table.to_csv(precision=17))
    for a, b in zip(values, full.column("x")):
        assert b == a or abs(b - a) <= np.spacing(abs(a))
    twelve = ReportTable.from_csv(table.to_csv(precision=12))
    for a, b in zip(values, twelve.column("x")):
        assert b == pytest.approx(a, rel=5e-12, abs=0)
    assert twelve.metadata["scenario_hash"] == "abc"
    assert twelve.name == "t"


def test_cli_preset_to_file(tmp_path, capsys):
    out = tmp_path / "fig4.csv"
    assert main(["preset", "fig4", "--out", str(out)]) == 0
    table = ReportTable.from_csv(out.read_text())
    assert table.column("supplier_4")[-1] == pytest.approx(357 / 13, abs=1e-6)


def test_cli_env_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("ENERGYCOOP_OUTPUT_DIR", str(tmp_path))
    assert main(["preset", "fig7"]) == 0
    assert (tmp_path / "fig7.csv").exists()


def test_cli_stdout(capsys):
    assert main(["inventory", "--mu", "5", "--holding", "4", "--shortage", "3", "--out", "-"]) == 0
    text = capsys.readouterr().out
    table = ReportTable.from_csv(text)
    assert table.column("S_star") == [4.0]


def test_cli_market_and_sim(capsys):
    assert main(["market", "--game", "stackelberg", "--suppliers", "6", "--leaders", "3", "--out", "-"]) == 0
    table = ReportTable.from_csv(capsys.readouterr().out)
    assert table.column("supplier_1")[-1] == pytest.approx(3213 / 132, abs=1e-6)
    assert main(["sim", "--nodes", "4", "--slots", "5", "--seed", "3", "--out", "-"]) == 0
    table = ReportTable.from_csv(capsys.readouterr().out)
    assert table.metadata["seed"] == "3"


def test_cli_errors(tmp_path, capsys):
    assert main(["preset", "fig99"]) == 2
    assert "valid presets" in capsys.readouterr().err
    bad = tmp_path / "bad.ini"
    bad.write_text("[costs]\nc_h = 0\nc_s = 0\n")
    assert main(["run", str(bad)]) == 1
    assert "critical ratio" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.ini")]) == 1


def test_console_script_module():
    proc = subprocess.run(
        [sys.executable, "-m", "energycoop.cli", "preset", "fig6", "--out", "-"],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.startswith("# table: fig6")
