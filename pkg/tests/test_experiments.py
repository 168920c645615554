import math

import numpy as np
import pytest

from pipp_approx import Family, diggle_gratton, strauss, strauss_hard_core
from pipp_approx.experiments import (
    BASE_COLUMNS,
    MC_COLUMNS,
    PAPER_CONFIGS,
    ConfigError,
    ExperimentSpec,
    MCSettings,
    SweepTable,
    default_grid,
    paper_spec,
    run_paper_suite,
    run_sweep,
)


def test_default_grids():
    g = default_grid(Family.STRAUSS)
    assert len(g) == 21 and g[0] == 0.0 and g[-1] == 1.0
    assert np.allclose(np.diff(g), 0.05)
    dg = default_grid(Family.DIGGLE_GRATTON)
    assert len(dg) == 20 and dg[0] == 0.05


def test_strauss_sweep_shape_and_endpoints():
    table = run_sweep(ExperimentSpec(strauss(0.0, 0.1), 100.0))
    assert len(table) == 21
    assert table.columns == BASE_COLUMNS
    assert table.rows[-1]["lambda_ps"] == table.rows[-1]["lambda_dpp"] == 100.0
    assert table.rows[0]["G"] == pytest.approx(math.pi * 0.01, rel=1e-14)
    assert table.rows[0]["kappa"] == 1.0
    dpp, ps = table.column("lambda_dpp"), table.column("lambda_ps")
    assert np.all(np.diff(dpp) > 0)
    assert np.all(dpp <= ps)


def test_dg_sweep_has_twenty_rows():
    table = run_sweep(ExperimentSpec(diggle_gratton(1.0, 0.05), 200.0))
    assert len(table) == 20
    assert np.all(np.diff(table.column("lambda_dpp")) > 0)


def test_csv_format_and_round_trip(tmp_path):
    table = run_sweep(ExperimentSpec(strauss_hard_core(0.0, 0.025, 0.05), 200.0, (0.0, 0.5, 1.0)))
    text = table.to_csv()
    lines = text.splitlines()
    assert lines[0] == "gamma1,beta,G,kappa,lambda_ps,lambda_dpp"
    assert len(lines) == 4
    for field in lines[1].split(","):
        assert len(field.replace(".", "").replace("-", "").split("e")[0].lstrip("0")) <= 10
    path = table.write_csv(tmp_path / "sub" / "t.csv")
    assert path.read_text() == text
    assert not list((tmp_path / "sub").glob("*.tmp"))
    back = SweepTable.read_csv(path)
    assert back.has_mc is False
    for a, b in zip(back.rows, table.rows):
        for k in BASE_COLUMNS:
            assert a[k] == pytest.approx(b[k], rel=1e-9)


def test_mc_columns_present():
    spec = ExperimentSpec(strauss(0.0, 0.1), 50.0, (0.0, 0.5), MCSettings(5, 2000, None, 3))
    table = run_sweep(spec)
    assert table.columns == BASE_COLUMNS + MC_COLUMNS
    assert table.to_csv().splitlines()[0] == (
        "gamma1,beta,G,kappa,lambda_ps,lambda_dpp,mc_mean,mc_se,mc_q1,mc_median,mc_q3")
    for row in table.rows:
        assert row["mc_q1"] <= row["mc_median"] <= row["mc_q3"]
        assert row["mc_se"] >= 0


def test_sweep_reruns_byte_identical():
    spec = ExperimentSpec(strauss(0.0, 0.1), 50.0, (0.0, 0.3), MCSettings(4, 3000, None, 11))
    assert run_sweep(spec).to_csv() == run_sweep(spec).to_csv()
    other = ExperimentSpec(strauss(0.0, 0.1), 50.0, (0.0, 0.3), MCSettings(4, 3000, None, 12))
    assert run_sweep(other).to_csv() != run_sweep(spec).to_csv()


@pytest.mark.parametrize("header", ["gamma1,beta,G", "gamma1,beta,G,kappa,lambda_dpp,lambda_ps", ""])
def test_read_csv_rejects_foreign_headers(tmp_path, header):
    p = tmp_path / "x.csv"
    p.write_text(header + ("\n" if header else ""))
    with pytest.raises(ConfigError):
        SweepTable.read_csv(p)


def test_read_csv_rejects_bad_rows(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text(",".join(BASE_COLUMNS) + "\n0,100,0.1,1,30\n")
    with pytest.raises(ConfigError):
        SweepTable.read_csv(p)
    p.write_text(",".join(BASE_COLUMNS) + "\n0,100,0.1,1,30,abc\n")
    with pytest.raises(ConfigError):
        SweepTable.read_csv(p)


@pytest.mark.parametrize(
    "data",
    [
        [],
        {"beta": 100},
        {"model": {"family": "Strauss", "gamma": [0], "radii": [0.1]}},
        {"model": {"family": "Strauss", "gamma": [0], "radii": [0.1]}, "beta": -1},
        {"model": {"family": "Strauss", "gamma": [0], "radii": [0.1]}, "beta": 100, "extra": 1},
        {"model": {"family": "Strauss", "gamma": [0], "radii": [0.1]}, "beta": 100, "gamma1_grid": [0.5, 0.2]},
        {"model": {"family": "Strauss", "gamma": [0], "radii": [0.1]}, "beta": 100, "gamma1_grid": [1.5]},
        {"model": {"family": "Strauss", "gamma": [0], "radii": [0.1]}, "beta": 100, "mc": {"reps": 3}},
        {"model": {"family": "Bogus", "gamma": [0], "radii": [0.1]}, "beta": 100},
    ],
)
def test_spec_validation(data):
    with pytest.raises(ConfigError):
        ExperimentSpec.from_dict(data)


def test_spec_dict_round_trip():
    spec = ExperimentSpec(strauss(0.0, 0.1), 100.0, (0.0, 0.5), MCSettings(10, 500, 0.3, 2), "o.csv")
    assert ExperimentSpec.from_dict(spec.to_dict()) == spec


def test_mc_scaling():
    mc = MCSettings(1000, 1_000_000, None, 0).scaled(0.02)
    assert (mc.n_replicates, mc.n_steps) == (20, 20000)
    assert MCSettings(3, 10).scaled(0.01) == MCSettings(1, 1)


def test_paper_configs():
    assert len(PAPER_CONFIGS) == 14
    assert len({c.name for c in PAPER_CONFIGS}) == 14
    for c in PAPER_CONFIGS:
        assert c.n_replicates in (1000, 10000)
        spec = paper_spec(c, 0.01, 5)
        assert spec.mc.n_steps == 10000
        assert len(spec.gamma1_grid) == (20 if c.model_template.family is Family.DIGGLE_GRATTON else 21)
        assert paper_spec(c, with_mc=False).mc is None


def test_paper_suite_without_mc(tmp_path):
    manifest = run_paper_suite(tmp_path, with_mc=False, figures=False)
    assert manifest["failed"] == []
    assert len(manifest["configurations"]) == 14
    for c in PAPER_CONFIGS:
        t = SweepTable.read_csv(tmp_path / f"{c.name}.csv")
        assert np.all(t.column("lambda_dpp") <= t.column("lambda_ps"))
    assert (tmp_path / "manifest.json").exists()


def test_paper_suite_isolates_failures(tmp_path, monkeypatch):
    import pipp_approx.experiments as ex

    real = ex.run_sweep

    def flaky(spec, workers=1):
        if spec.model_template.family is Family.DIGGLE_GRATTON:
            raise RuntimeError("boom")
        return real(spec, workers)

    monkeypatch.setattr(ex, "run_sweep", flaky)
    manifest = run_paper_suite(tmp_path, with_mc=False, figures=False)
    assert sorted(manifest["failed"]) == sorted(c.name for c in PAPER_CONFIGS if c.name.startswith("DG"))
    assert len(list(tmp_path.glob("*.csv"))) == 10
    bad = next(e for e in manifest["configurations"] if e["status"] == "failed")
    assert "boom" in bad["error"]


def test_paper_suite_rejects_unknown_names(tmp_path):
    with pytest.raises(ConfigError):
        run_paper_suite(tmp_path, with_mc=False, names=["nope"])
    with pytest.raises(ConfigError):
        run_paper_suite(tmp_path, scale=0.0)
