import io
import json

import numpy as np
import pytest

from spinkick import cli


def run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    code = cli.main([*argv, "--out", str(out)])
    return code, out


def read_csv(path):
    lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    header = lines[0].split(",")
    rows = np.array([[float(x) for x in l.split(",")] for l in lines[1:]])
    return header, rows


def test_evolve_unkicked_spin_one(tmp_path):
    code, out = run(tmp_path, "evolve", "--spin", "1", "--g", "1", "--t-max", "12.6", "--dt", "0.01")
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["t", "concurrence", "purity"]
    assert len(rows) == int(np.floor(12.6 / 0.01)) + 1
    assert rows[:, 1].max() == pytest.approx(0.88, abs=0.005)


def test_evolve_kicked_spin_one(tmp_path):
    code, out = run(tmp_path, "evolve", "--spin", "1", "--kicks", "1.6,3.9", "--t-max", "12.6")
    assert code == 0
    _, rows = read_csv(out)
    after = rows[rows[:, 0] >= 3.9]
    assert rows[:, 1].max() == pytest.approx(0.98, abs=0.005)
    # lowest value after the second kick at these rounded times (quoted as ~0.57)
    assert after[:, 1].min() == pytest.approx(0.547, abs=0.005)


def test_evolve_kicked_spin_ten_plateau(tmp_path):
    code, out = run(tmp_path, "evolve", "--spin", "10", "--kicks", "1.9,4.2", "--t-max", "20")
    assert code == 0
    _, rows = read_csv(out)
    after = rows[rows[:, 0] >= 4.2, 1]
    assert after.mean() == pytest.approx(0.95, abs=0.01)
    assert after.std() < 0.03


def test_evolve_json(tmp_path):
    code, out = run(tmp_path, "evolve", "--spin", "0.5", "--t-max", "1", "--dt", "0.25", "--format", "json", name="o.json")
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["t"] == [0, 0.25, 0.5, 0.75, 1.0]
    np.testing.assert_allclose(doc["concurrence"], np.sin(np.array(doc["t"]) / 2) ** 2, atol=1e-11)


def test_outputs_byte_identical(tmp_path):
    args = ("evolve", "--spin", "3/2", "--kicks", "0.7,2.1", "--t-max", "5")
    _, a = run(tmp_path, *args, name="a.csv")
    _, b = run(tmp_path, *args, name="b.csv")
    assert a.read_bytes() == b.read_bytes()


def test_twelve_significant_digits(tmp_path):
    _, out = run(tmp_path, "evolve", "--spin", "1", "--t-max", "0.02")
    line = out.read_text().splitlines()[2]
    assert line == f"0.01,{cli.fmt(float(line.split(',')[1]))},{cli.fmt(float(line.split(',')[2]))}"
    assert cli.fmt(1 / 3) == "0.333333333333"
    assert cli.fmt(-0.0) == "0"


def test_config_file_equals_flags(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# spin one, kicked\nspin = 1\nkicks = 1.6,3.9   # times\nt-max = 6\ndt = 0.05\n")
    _, a = run(tmp_path, "evolve", "--config", str(cfg), name="a.csv")
    _, b = run(tmp_path, "evolve", "--spin", "1", "--kicks", "1.6,3.9", "--t-max", "6", "--dt", "0.05", name="b.csv")
    assert a.read_bytes() == b.read_bytes()
    # flags override the file
    _, c = run(tmp_path, "evolve", "--config", str(cfg), "--dt", "0.1", name="c.csv")
    _, rows = read_csv(c)
    assert len(rows) == 61


def test_config_file_errors(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert cli.main(["evolve", "--config", str(bad)]) == 2
    assert "unknown key" in capsys.readouterr().err
    assert cli.main(["evolve", "--config", str(tmp_path / "missing.cfg")]) == 4


@pytest.mark.parametrize(
    "argv",
    [
        ["evolve", "--spin", "0.3"],
        ["evolve", "--spin", "1", "--kicks", "3,2"],
        ["evolve", "--kicks", "1"],
        ["evolve", "--dt", "0"],
        ["evolve", "--g", "-1"],
        ["optimize", "--objective", "median"],
        ["evolve", "--format", "xml"],
        ["distribution", "--spin", "1", "--at", "1"],
        ["distribution", "--spin", "1", "--kicks", "1,2"],
    ],
)
def test_validation_exit_code(argv, capsys):
    assert cli.main(argv) == 2
    assert capsys.readouterr().err.startswith("spinkick:")


def test_unwritable_path(tmp_path):
    assert cli.main(["evolve", "--out", str(tmp_path / "nope" / "x.csv")]) == 4


def test_distribution_spin_ten(tmp_path):
    code, out = run(tmp_path, "distribution", "--spin", "10", "--kicks", "1.9,4.2", "--at", "0,1.0,3.0,6.0")
    assert code == 0
    text = out.read_text()
    assert text.startswith("# long-basis index is 0-based")
    header, rows = read_csv(out)
    assert header == ["snapshot", "index", "probability"]
    assert len(rows) == 4 * 441
    blocks = rows[:, 2].reshape(4, 441)
    np.testing.assert_allclose(blocks.sum(axis=1), 1, atol=1e-9)
    assert np.argmax(blocks[0]) == 220
    assert blocks[0, 220] == pytest.approx(0.0310, abs=5e-4)
    np.testing.assert_allclose(blocks[1], blocks[0], atol=1e-10)
    np.testing.assert_array_equal(rows[:441, 1], np.arange(441))


def test_optimize_json(tmp_path):
    code, out = run(tmp_path, "optimize", "--spin", "1", "--objective", "max", name="o.json")
    assert code == 0
    doc = json.loads(out.read_text())
    assert list(doc) == ["spin", "g", "objective", "t1", "t2", "objective_value", "c_max", "c_min", "c_mean", "evaluations", "grid_step"]
    assert doc["spin"] == 1.0 and doc["objective"] == "max"
    assert doc["objective_value"] >= 0.97


def test_optimize_spin_half(tmp_path):
    code, out = run(tmp_path, "optimize", "--spin", "0.5", "--grid", "0.2", name="o.json")
    assert code == 0
    assert json.loads(out.read_text())["objective_value"] == pytest.approx(1.0, abs=1e-4)


def test_sweep_small(tmp_path):
    code, out = run(tmp_path, "sweep", "--spins", "0.5:1.5", "--grid", "0.2")
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["spin", "avg_unkicked", "avg_kicked", "t1", "t2"]
    np.testing.assert_array_equal(rows[:, 0], [0.5, 1.0, 1.5])
    assert np.all(rows[:, 2] >= rows[:, 1] - 1e-9)
    assert rows[1, 1] == pytest.approx(0.586, abs=1e-3)


def test_parse_spin_list():
    assert [s.twice_s for s in cli.parse_spin_list("0.5:2")] == [1, 2, 3, 4]
    assert [s.twice_s for s in cli.parse_spin_list("1:3:1")] == [2, 4, 6]
    assert [s.twice_s for s in cli.parse_spin_list("1, 3/2")] == [2, 3]


def test_oracle_passes(tmp_path):
    code, out = run(tmp_path, "oracle", "--spins", "0.5:10")
    assert code == 0
    text = out.read_text()
    assert "FAIL" not in text
    assert "large-S average approx S=1," in text


def test_oracle_json_and_failure_exit(tmp_path, monkeypatch):
    monkeypatch.setattr(cli, "APPROX_ORACLE_TOL", 0.01)
    code, out = run(tmp_path, "oracle", "--spins", "1", "--format", "json", name="o.json")
    assert code == 3
    doc = json.loads(out.read_text())
    failed = [r for r in doc if not r["passed"]]
    assert [r["label"] for r in failed] == ["large-S average approx S=1"]
    assert failed[0]["analytic"] == pytest.approx(0.54, abs=0.005)
    assert failed[0]["simulated"] == pytest.approx(0.586, abs=1e-3)


def test_stdout_default(capsys):
    assert cli.main(["evolve", "--spin", "1", "--t-max", "0.01"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "t,concurrence,purity"
