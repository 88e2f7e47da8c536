from __future__ import annotations

import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from weiljacobi import cli, colimit, serial
from weiljacobi.colimit import Diagram, Leg
from weiljacobi.weil import PolyMap, cube


def schema(name):
    return json.loads(resources.files("weiljacobi").joinpath("schemas", name).read_text(encoding="utf-8"))


def validate(path, name):
    data = json.loads(path.read_text(encoding="utf-8"))
    jsonschema.validate(data, schema(name))
    return data


@pytest.fixture(scope="module")
def symbolic_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("sym")
    assert cli.main(["verify-gji4", "--mode", "symbolic", "--out", str(out)]) == cli.OK
    return out


def test_symbolic_replay_writes_a_valid_trace(symbolic_run):
    data = validate(symbolic_run / "trace.json", "trace.json")
    assert data["total"]["linear"] == {}
    assert len(data["display_errata"]) == 24


def test_trace_is_byte_identical_across_runs(symbolic_run, tmp_path):
    assert cli.main(["verify-gji4", "--out", str(tmp_path)]) == cli.OK
    assert (tmp_path / "trace.json").read_bytes() == (symbolic_run / "trace.json").read_bytes()


def test_strict_displays_fail(tmp_path, capsys):
    assert cli.main(["verify-gji4", "--strict-displays", "--out", str(tmp_path)]) == cli.FAILED
    assert "t3.2.4" in capsys.readouterr().err


def test_model_run(tmp_path):
    args = ["verify-gji4", "--mode", "model", "--trials", "4", "--m", "2", "--seed", "5", "--out", str(tmp_path)]
    assert cli.main(args) == cli.OK
    data = validate(tmp_path / "model.json", "model-run.json")
    assert data["passed"] == 4 and data["failed_seeds"] == []
    first = (tmp_path / "model.json").read_bytes()
    assert cli.main(args) == cli.OK
    assert (tmp_path / "model.json").read_bytes() == first


@pytest.mark.parametrize("override", [{"1234": {"5": [1, 2]}}, {"2143": {"10": []}}])
def test_corrupted_injections_fail(tmp_path, capsys, override):
    path = tmp_path / "inj.json"
    path.write_text(json.dumps(override))
    assert cli.main(["verify-gji4", "--injections", str(path), "--out", str(tmp_path)]) == cli.FAILED
    assert "FAILED (t3.1)" in capsys.readouterr().err


def test_unreadable_injections_are_a_usage_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("[1, 2")
    assert cli.main(["verify-gji4", "--injections", str(path), "--out", str(tmp_path)]) == cli.USAGE


# -- audit-colimit ---------------------------------------------------------------------------

@pytest.mark.parametrize("target", ["builtin:lemma2.1", "builtin:lemma2.2:2", "builtin:lemma2.3",
                                    "builtin:lemma2.4:1,1,2"])
def test_builtin_lemmas(tmp_path, target):
    assert cli.main(["audit-colimit", target, "--out", str(tmp_path)]) == cli.OK
    data = validate(tmp_path / "report.json", "colimit-report.json")
    assert data["exists_for_all"] and data["unique"]


def test_diagram_file(tmp_path):
    path = tmp_path / "d.json"
    path.write_text(json.dumps(serial.diagram_to_json(colimit.lemma2_1())))
    jsonschema.validate(json.loads(path.read_text()), schema("diagram.json"))
    assert cli.main(["audit-colimit", f"file:{path}", "--out", str(tmp_path)]) == cli.OK


def test_non_colimit_file_fails(tmp_path):
    D = cube(1)
    d = Diagram("split", D, (Leg("a", D, PolyMap.identity(D)), Leg("b", D, PolyMap.identity(D))), ())
    path = tmp_path / "d.json"
    path.write_text(json.dumps(serial.diagram_to_json(d)))
    assert cli.main(["audit-colimit", f"file:{path}", "--out", str(tmp_path)]) == cli.FAILED


@pytest.mark.parametrize("target", ["builtin:lemma9", "nonsense", "file:/no/such/file.json", "builtin:lemma2.4:x"])
def test_bad_targets(tmp_path, target):
    assert cli.main(["audit-colimit", target, "--out", str(tmp_path)]) == cli.USAGE


def test_malformed_diagram_file(tmp_path):
    path = tmp_path / "d.json"
    path.write_text('{"name": "x"}')
    assert cli.main(["audit-colimit", f"file:{path}", "--out", str(tmp_path)]) == cli.USAGE


def test_theorem_audit(tmp_path):
    assert cli.main(["audit-colimit", "builtin:theorem3.1", "--trials", "10", "--out", str(tmp_path)]) == cli.OK
    data = validate(tmp_path / "audit.json", "audit.json")
    assert (data["compat_dim"], data["rank"], data["kernel_dim"]) == (65, 65, 41)
    assert data["candidate_pulls_back_to_zero"] and not data["unique"]
    assert "d3d5" in (tmp_path / "audit.md").read_text()


# -- tables ----------------------------------------------------------------------------------

@pytest.mark.parametrize("fig", [1, 2, 3])
def test_tables_are_deterministic(tmp_path, fig):
    for fmt, ext in (("csv", "csv"), ("json", "json"), ("text", "txt")):
        a, b = tmp_path / "a", tmp_path / "b"
        for d in (a, b):
            assert cli.main(["tables", "--figure", str(fig), "--format", fmt, "--out", str(d)]) == cli.OK
        assert (a / f"figure{fig}.{ext}").read_bytes() == (b / f"figure{fig}.{ext}").read_bytes()
    validate(a / f"figure{fig}.json", "figure.json")


def test_table_blank_cells(tmp_path):
    cli.main(["tables", "--figure", "3", "--out", str(tmp_path)])
    lines = (tmp_path / "figure3.csv").read_text().splitlines()
    assert lines[1].startswith("31/1243,-d,d,,")


def test_stdout_output(capsys):
    assert cli.main(["tables", "--figure", "2", "--format", "csv", "--out", "-"]) == cli.OK
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("word")
    assert "wrote" not in out


def test_environment_sets_the_output_directory(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "env"))
    assert cli.main(["tables", "--figure", "1"]) == cli.OK
    assert (tmp_path / "env" / "figure1.csv").exists()


# -- vf --------------------------------------------------------------------------------------

@pytest.mark.parametrize("identity", ["1.1", "1.2", "1.3", "1.4", "bracket"])
def test_vector_field_runs(tmp_path, identity):
    args = ["vf", "--identity", identity, "--trials", "3", "--m", "2", "--seed", "4", "--out", str(tmp_path)]
    assert cli.main(args) == cli.OK
    data = validate(tmp_path / f"vf-{identity}.json", "vf-run.json")
    assert data["passed"] == 3


def test_vf_rejects_a_bad_dimension(tmp_path):
    assert cli.main(["vf", "--identity", "1.1", "--m", "0", "--out", str(tmp_path)]) == cli.USAGE


# -- usage -----------------------------------------------------------------------------------

@pytest.mark.parametrize("argv", [[], ["tables"], ["tables", "--figure", "4"], ["verify-gji4", "--mode", "x"],
                                  ["vf", "--identity", "1.1", "--trials", "-1"]])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == cli.USAGE


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "weiljacobi.cli", "tables", "--figure", "1", "--out", "-"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert len(res.stdout.splitlines()) == 25
