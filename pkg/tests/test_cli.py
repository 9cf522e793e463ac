import csv
import json
import math
import subprocess
import sys

import jsonschema
import pytest

from focusfocus.cli import SAMPLE_COLUMNS, SCHEMAS, cli_run, fmt_point, parse_point
from focusfocus.core import ModelParams, PointC2
from focusfocus.group import add

from conftest import GENERIC_S


@pytest.fixture
def cfg(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"epsilon": 0.1, "delta": 0.3, "samples": 30, "seed": 5}))
    return str(path)


@pytest.fixture
def generic_cfg(tmp_path):
    path = tmp_path / "gcfg.json"
    path.write_text(json.dumps({"S": {"coeffs": GENERIC_S.to_triples()}, "samples": 30}))
    return str(path)


def run(capsys, *argv):
    code = cli_run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify(cfg, tmp_path, capsys):
    out = tmp_path / "report.json"
    code, _, err = run(capsys, "verify", "--config", cfg, "--out", str(out))
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, SCHEMAS["verify"])
    assert code == 0 and doc["pass"] and len(doc["suite"]) == 15
    assert "PASS flow_field" in err


def test_verify_failure_exit_code(tmp_path, capsys):
    path = tmp_path / "tight.json"
    path.write_text(json.dumps({"samples": 10, "tolerances": {"form_tol": 1e-30}}))
    code, out, _ = run(capsys, "verify", "--config", str(path), "--checks", "graph_lagrangian")
    assert code == 1
    jsonschema.validate(json.loads(out), SCHEMAS["verify"])


def test_add_example(cfg, capsys):
    code, out, _ = run(capsys, "add", "--config", cfg, "--x", "0.9,0;0.1,0", "--y", "0.9,0;0.1,0")
    assert code == 0
    p, q = out.strip().split(";")
    assert p == "0.81,0" and q.startswith("0.111111") and q.endswith(",0")


def test_add_report(cfg, tmp_path, capsys):
    out = tmp_path / "add.json"
    run(capsys, "add", "--config", cfg, "--x", "0.9,0;0.1,0", "--y", "0.9,0;0.1,0", "--out", str(out))
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, SCHEMAS["add"])
    assert doc["branch"] == "sigma1"


def test_inverse(cfg, tmp_path, capsys):
    out = tmp_path / "inv.json"
    code, text, _ = run(capsys, "inverse", "--config", cfg, "--x", "0.3,0;0,0", "--out", str(out))
    assert code == 0 and text.strip() == "0,0;0.3,0"
    jsonschema.validate(json.loads(out.read_text()), SCHEMAS["inverse"])


def test_locate(generic_cfg, capsys):
    code, out, _ = run(capsys, "locate", "--config", generic_cfg, "--x", "0,0;0,0", "--y", "0,0;0,0", "--z", "0,0;0,0")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMAS["locate"])
    assert code == 0 and sorted(h["chart"] for h in doc["charts"]) == ["E1", "E2"]


def test_sample_round_trip(cfg, tmp_path, capsys):
    out = tmp_path / "pts.csv"
    code, summary, _ = run(capsys, "sample", "--config", cfg, "--count", "20", "--seed", "9", "--out", str(out))
    assert code == 0
    jsonschema.validate(json.loads(summary), SCHEMAS["sample"])
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert tuple(rows[0]) == SAMPLE_COLUMNS and len(rows) == 20
    params = ModelParams(0.1, 0.3)
    for r1, r2 in zip(rows[::2], rows[1::2]):
        x = PointC2(complex(float(r1["p_re"]), float(r1["p_im"])), complex(float(r1["q_re"]), float(r1["q_im"])))
        y = PointC2(complex(float(r2["p_re"]), float(r2["p_im"])), complex(float(r2["q_re"]), float(r2["q_im"])))
        _, printed, _ = run(capsys, "add", "--config", cfg, "--x", fmt_point(x), "--y", fmt_point(y))
        lib = add(x, y, params)
        got = parse_point(printed.strip())
        assert (got.p, got.q) == (lib.p, lib.q)


def test_sample_deterministic(cfg, capsys):
    _, a, _ = run(capsys, "sample", "--config", cfg, "--count", "6", "--seed", "1")
    _, b, _ = run(capsys, "sample", "--config", cfg, "--count", "6", "--seed", "1")
    _, c, _ = run(capsys, "sample", "--config", cfg, "--count", "6", "--seed", "2")
    assert a == b and a != c


def test_figure_pq_projection(tmp_path, capsys):
    out, svg = tmp_path / "fig.csv", tmp_path / "fig.svg"
    code, summary, _ = run(capsys, "figure", "--kind", "pq-projection", "--fibers", "0.06,0.15", "--out", str(out), "--svg", str(svg))
    assert code == 0 and svg.read_text().lstrip().startswith("<?xml")
    doc = json.loads(summary)
    jsonschema.validate(doc, SCHEMAS["figure"])
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["curve_id", "abs_p", "abs_q"]
    by_curve = {}
    for r in rows:
        by_curve.setdefault(r["curve_id"], []).append((float(r["abs_p"]), float(r["abs_q"])))
    assert all(q == 1.0 for _, q in by_curve["sigma1_segment"])
    assert all(p == 1.0 for p, _ in by_curve["sigma2_arc"])  # e^{S1} = 1 for S = 0
    for m in (0.06, 0.15):
        assert all(abs(p * q - m) < 1e-14 for p, q in by_curve[f"fiber_{m:g}"])


@pytest.mark.parametrize("kind", ["h1-flow", "charts"])
def test_other_figures(kind, tmp_path, capsys):
    out = tmp_path / f"{kind}.csv"
    code, summary, _ = run(capsys, "figure", "--kind", kind, "--out", str(out))
    assert code == 0 and json.loads(summary)["rows"] > 0


def test_recover(generic_cfg, capsys):
    code, out, _ = run(capsys, "recover-s", "--config", generic_cfg, "--grid", "4")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMAS["recover-s"])
    assert code == 0 and doc["max_error"] <= 1e-6 and len(doc["points"]) == 16


@pytest.mark.parametrize(
    "argv",
    [
        ["nope"],
        ["add", "--x", "1,0"],
        ["add", "--x", "1,0", "--y", "0,0;0,0"],
        ["add", "--x", "2,0;2,0", "--y", "2,0;2,0"],
        ["verify", "--checks", "bogus"],
        ["figure", "--kind", "charts", "--fibers", "-1"],
    ],
)
def test_usage_errors(argv, capsys):
    assert cli_run(argv) == 2


def test_config_errors(tmp_path, capsys):
    for raw in ({"bogus": 1}, {"tolerances": {"nope": 1}}, {"S": {"coeffs": [[0, 0, 1.0]]}}, {"epsilon": 2}, [1]):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(raw))
        assert cli_run(["add", "--config", str(path), "--x", "0.9,0;0.1,0", "--y", "0.9,0;0.1,0"]) == 2
    assert cli_run(["verify", "--config", str(tmp_path / "missing.json")]) == 2


def test_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "focusfocus.cli", "add", "--x", "0.9,0;0.1,0", "--y", "0.9,0;0.1,0"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("0.81,0;")


def test_negative_leading_values(capsys):
    code, out, _ = run(capsys, "inverse", "--x", "-0.3,0;0,0")
    assert code == 0 and out.strip() == "0,0;-0.3,0"
