from __future__ import annotations

import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from braidregions.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, RunReport, run, verify_all
from braidregions.spec_model import preset

GOLDEN = Path(__file__).parent / "golden"


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    return code, buf.getvalue()


def test_count_verify():
    code, out = call("count", "--preset", "linial", "-n", "3", "--verify", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out) == [{"bernardi": 7, "geometric": 7, "zaslavsky": 7, "verdict": "pass"}]


def test_regions_csv_has_exact_witnesses():
    code, out = call("regions", "--preset", "shi", "-n", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and len(rows) == 3
    assert all(set(r) == {"region", "witness"} for r in rows)
    assert any("/" in r["witness"] for r in rows)


def test_faces_table():
    code, out = call("faces", "--preset", "braid", "-n", "3", "--format", "json")
    rows = json.loads(out)
    assert code == EXIT_OK
    assert len(rows) == 13
    # for the braid arrangement only the open chambers avoid every hyperplane
    assert sorted(r["dim"] for r in rows if r["in_F_S"]) == [3] * 6


def test_contrib_tables():
    code, out = call("contrib-region", "--preset", "semiorder", "-n", "3", "--format", "json")
    rows = json.loads(out)
    assert code == EXIT_OK and len(rows) == 19 and all(r["contribution"] == 1 for r in rows)
    code, out = call("contrib-tree", "--preset", "shi", "-n", "3", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and len(rows) == 30
    assert sum(int(r["w_boxing"]) for r in rows) == 16


def test_contrib_tree_in_parallel():
    serial = call("contrib-tree", "--preset", "catalan", "-n", "3", "--format", "json")
    parallel = call("contrib-tree", "--preset", "catalan", "-n", "3", "--format", "json", "--jobs", "2")
    assert serial == parallel


def test_oracle_command():
    code, out = call("oracle", "--preset", "braid", "-n", "3")
    assert code == EXIT_OK
    assert "q^3 - 3q^2 + 2q" in out and out.split()[-1] == "6"


def test_config_file(tmp_path):
    path = tmp_path / "arr.json"
    path.write_text(json.dumps({"n": 3, "pairs": {"1,3": [0, 1], "2,3": [0]}}))
    code, out = call("count", "--config", str(path), "--format", "csv")
    assert code == EXIT_OK and out.splitlines() == ["bernardi", "6"]


def test_graphical_edges():
    code, out = call("verify-all", "--preset", "graphical", "-n", "4", "--edges", "1-2", "2-3", "3-4",
                     "--format", "json", "--no-trees")
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["counts"]["acyclic_orientations"] == 8


def test_verify_all_golden():
    code, out = call("verify-all", "--preset", "shi", "-n", "3", "--format", "json")
    report = json.loads(out)
    assert code == EXIT_OK and report["verdict"] == "pass"
    assert set(report.pop("timing")) >= {"bernardi", "geometric", "zaslavsky", "regions", "trees"}
    assert report == json.loads((GOLDEN / "verify_all_shi3.json").read_text())


def test_failed_verdict_sets_exit_code(monkeypatch):
    import braidregions.cli as cli

    monkeypatch.setattr(cli, "regions_via_zaslavsky", lambda spec, poly=None: -1)
    code, _ = call("verify-all", "--preset", "braid", "-n", "2", "--no-trees")
    assert code == EXIT_FAIL
    report = verify_all(preset("braid", 2), trees=False)
    assert isinstance(report, RunReport) and not report.passed


@pytest.mark.parametrize("argv", [
    ["count"],
    ["count", "--preset", "shi"],
    ["count", "--config", "/nonexistent/spec.json"],
    ["count", "--preset", "graphical", "-n", "3", "--edges", "1-9"],
    ["count", "--preset", "graphical", "-n", "3", "--edges", "x"],
])
def test_usage_errors(argv):
    assert call(*argv)[0] == EXIT_USAGE


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        run(["count", "--preset", "nonsense", "-n", "3"])
    assert exc.value.code == EXIT_USAGE


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "braidregions", "count", "--preset", "braid", "-n", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.split() == ["bernardi", "6"]
