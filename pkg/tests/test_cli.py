import json
import subprocess
import sys
from fractions import Fraction

import pytest

from twistfilt.cli import main
from twistfilt.tables import export_module_table, export_table


def run_cli(args):
    return subprocess.run(
        [sys.executable, "-m", "twistfilt.cli", *args],
        capture_output=True,
        text=True,
    )


def test_filtration_dimension_table(tmp_path):
    out = tmp_path / "report.json"
    code = main(
        [
            "filtration",
            "--backend",
            "heisenberg-T2",
            "--cutoff",
            "9/2",
            "--families",
            "E_W,C_W",
            "--n-max",
            "2",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    families = {(f["name"], f["n"]): f["slices"] for f in payload["families"]}
    dims_e0 = [s["dim"] for s in families[("E_W", 0)]]
    assert dims_e0 == [1, 1, 1, 2, 2, 3, 4, 5, 6, 8]
    dims_c2 = [s["dim"] for s in families[("C_W", 2)]]
    assert dims_c2 == [s["dim"] for s in families[("E_W", 1)]]
    assert payload["config"]["cutoff"] == "9/2"


def test_check_suite_passes_and_is_deterministic(tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    base = [
        "check",
        "--suite",
        "all",
        "--backend",
        "heisenberg-T2",
        "--cutoff",
        "7/2",
        "--n-max",
        "3",
    ]
    assert main(base + ["--jobs", "1", "--out", str(out1)]) == 0
    assert main(base + ["--jobs", "4", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    payload = json.loads(out1.read_text())
    assert payload["checks"]
    assert all(c["status"] in ("pass", "unchecked") for c in payload["checks"])


def test_unknown_backend_exits_2():
    result = run_cli(["filtration", "--backend", "nope", "--cutoff", "1"])
    assert result.returncode == 2
    assert "unknown backend" in result.stderr


def test_bad_cutoff_exits_2():
    result = run_cli(
        ["filtration", "--backend", "heisenberg-T2", "--cutoff", "1/3"]
    )
    assert result.returncode == 2
    assert "multiple of 1/2" in result.stderr


def test_missing_cutoff_exits_2():
    result = run_cli(["filtration", "--backend", "heisenberg-T2"])
    assert result.returncode == 2


def test_table_backend_roundtrip(tmp_path, backend_t2, module_t2):
    data = export_table(backend_t2, 3)
    data["module"] = export_module_table(module_t2, Fraction(5, 2))
    path = tmp_path / "heis.json"
    path.write_text(json.dumps(data))
    code = main(
        [
            "check",
            "--suite",
            "relations",
            "--backend",
            "table:%s" % path,
            "--cutoff",
            "5/2",
            "--n-max",
            "2",
            "--out",
            str(tmp_path / "r.json"),
        ]
    )
    assert code == 0


def test_corrupted_table_exits_2_with_named_violation(tmp_path, backend_t2):
    data = export_table(backend_t2, 3)
    for row in data["products"]:
        if row["u"] != "vac" and row["terms"] and row["n"] >= 0:
            row["terms"][0][1] += 1
            break
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    result = run_cli(
        [
            "check",
            "--suite",
            "relations",
            "--backend",
            "table:%s" % path,
            "--cutoff",
            "3",
        ]
    )
    assert result.returncode == 2
    assert "axiom" in result.stderr or "commutator" in result.stderr


def test_failing_check_exits_1(tmp_path, backend_t2, module_t2):
    # delete one module action: the filtration relations lose a vector and
    # at least one containment or equality check must fail
    data = export_table(backend_t2, 2)
    module = export_module_table(module_t2, Fraction(5, 2))
    removed = None
    for i, row in enumerate(module["actions"]):
        if row["mode"][0] <= -2:
            removed = module["actions"].pop(i)
            break
    assert removed is not None
    data["module"] = module
    path = tmp_path / "damaged.json"
    path.write_text(json.dumps(data))
    result = run_cli(
        [
            "check",
            "--suite",
            "relations",
            "--backend",
            "table:%s" % path,
            "--cutoff",
            "5/2",
            "--n-max",
            "2",
        ]
    )
    assert result.returncode == 1
    assert "failed" in result.stderr


def test_export_table_deterministic(tmp_path):
    out1 = tmp_path / "t1.json"
    out2 = tmp_path / "t2.json"
    args = [
        "export-table",
        "--backend",
        "heisenberg-T2",
        "--cutoff",
        "3",
    ]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    payload = json.loads(out1.read_text())
    assert payload["products"]


def test_gr_and_span_subcommands(tmp_path):
    assert (
        main(
            [
                "gr",
                "--backend",
                "heisenberg-T1",
                "--cutoff",
                "3",
                "--n-max",
                "2",
                "--out",
                str(tmp_path / "gr.json"),
            ]
        )
        == 0
    )
    assert (
        main(
            [
                "span",
                "--backend",
                "heisenberg-T2",
                "--cutoff",
                "5/2",
                "--out",
                str(tmp_path / "span.json"),
            ]
        )
        == 0
    )
