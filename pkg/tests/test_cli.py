import json

import pytest

from infowarehouse.cli import run_cli

from conftest import FIXTURES, GOLDEN


def run(capsys, *argv):
    code = run_cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- schema validate ------------------------------------------------------------


def test_schema_validate_fixture_ok(capsys):
    code, out, err = run(capsys, "schema", "validate", str(FIXTURES / "patient-care.schema.json"))
    assert code == 0
    assert "4 activities" in out


def test_schema_validate_bad_document(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"id": "x"}', encoding="utf-8")
    code, out, err = run(capsys, "schema", "validate", str(bad))
    assert code == 1
    assert "schema_missing_field" in err


def test_schema_validate_json_output(tmp_path, capsys):
    doc = json.loads((FIXTURES / "patient-care.schema.json").read_text(encoding="utf-8"))
    doc["flow_edges"].append({"from": "Diagnosis", "to": "Diagnosis", "kind": "precedes"})
    target = tmp_path / "looped.json"
    target.write_text(json.dumps(doc), encoding="utf-8")
    code, out, err = run(capsys, "schema", "validate", str(target), "--json")
    assert code == 1
    payload = json.loads(out)
    assert payload["ok"] is False


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc_info:
        run_cli(["schema", "validate"])  # missing file argument
    assert exc_info.value.code == 2


def test_operational_error_exits_1(tmp_path, capsys):
    code, out, err = run(capsys, "schema", "validate", str(tmp_path / "missing.json"))
    assert code == 1


# -- scenario replay + export --------------------------------------------------------


def test_replay_then_export_matches_golden(tmp_path, capsys):
    archive_dir = tmp_path / "arch"
    code, out, err = run(capsys, "scenario", "replay", str(FIXTURES / "patient-a.scenario.json"),
                         "--archive", str(archive_dir), "--seed", "7", "--json")
    assert code == 0
    mapping = json.loads(out)
    assert mapping["seq"] == 16
    assert set(mapping["ids"]) >= {"patient-a", "dd", "case", "tplan"}

    code, out, err = run(capsys, "export", "--archive", str(archive_dir))
    assert code == 0
    assert out == (GOLDEN / "patient-a.export.json").read_text(encoding="utf-8")


def test_export_stable_across_runs(tmp_path, capsys):
    archive_dir = tmp_path / "arch"
    run(capsys, "scenario", "replay", str(FIXTURES / "patient-a.scenario.json"),
        "--archive", str(archive_dir), "--seed", "3")
    code1, out1, _ = run(capsys, "export", "--archive", str(archive_dir))
    code2, out2, _ = run(capsys, "export", "--archive", str(archive_dir))
    assert (code1, code2) == (0, 0)
    assert out1 == out2


def test_replay_deterministic_across_directories(tmp_path, capsys):
    for name in ("one", "two"):
        run(capsys, "scenario", "replay", str(FIXTURES / "reviews.scenario.json"),
            "--archive", str(tmp_path / name), "--seed", "99")
    _, out1, _ = run(capsys, "export", "--archive", str(tmp_path / "one"))
    _, out2, _ = run(capsys, "export", "--archive", str(tmp_path / "two"))
    assert out1 == out2


def test_replay_bad_script_exits_1(tmp_path, capsys):
    script = tmp_path / "bad.scenario.json"
    script.write_text(json.dumps({"steps": [{"op": "explode"}]}), encoding="utf-8")
    code, out, err = run(capsys, "scenario", "replay", str(script), "--archive", str(tmp_path / "a"))
    assert code == 1
    assert "scenario_bad_op" in err


# -- query ------------------------------------------------------------------------------


@pytest.fixture()
def replayed(tmp_path, capsys):
    archive_dir = tmp_path / "arch"
    run(capsys, "scenario", "replay", str(FIXTURES / "patient-a.scenario.json"),
        "--archive", str(archive_dir), "--seed", "7")
    capsys.readouterr()
    return archive_dir


def test_query_with_activity_boosts_dd_first(replayed, capsys):
    code, out, err = run(capsys, "query", "fever", "--archive", str(replayed),
                         "--activity", "Diagnosis", "--json")
    assert code == 0
    hits = json.loads(out)["hits"]
    assert hits[0]["links"]["category"] == "Differential Diagnostic"
    assert hits[0]["boosted"] is True


def test_query_without_context(replayed, capsys):
    code, out, err = run(capsys, "query", "radiograph", "--archive", str(replayed), "--json")
    assert code == 0
    hits = json.loads(out)["hits"]
    assert len(hits) == 1
    assert hits[0]["boosted"] is False


def test_query_semantic_expansion(replayed, capsys):
    code, out, err = run(capsys, "query", "pyrexia", "--archive", str(replayed),
                         "--activity", "Diagnosis", "--semantic", "--json")
    assert code == 0
    hits = json.loads(out)["hits"]
    assert hits and hits[0]["links"]["category"] == "Differential Diagnostic"


def test_query_unknown_activity_errors(replayed, capsys):
    code, out, err = run(capsys, "query", "fever", "--archive", str(replayed), "--activity", "Autopsy")
    assert code == 1
    assert "unresolvable_context" in err


# -- context / profile / index ---------------------------------------------------------------


def test_replay_into_populated_archive_conflicts(replayed, capsys):
    code, out, err = run(capsys, "scenario", "replay", str(FIXTURES / "patient-a.scenario.json"),
                         "--archive", str(replayed), "--seed", "7")
    assert code == 1
    assert "schema_exists" in err


def test_context_and_profile_json(replayed, capsys):
    export = json.loads(run(capsys, "export", "--archive", str(replayed))[1])
    dd_id = next(e["id"] for e in export["elements"] if e["category"] == "Differential Diagnostic")
    code, out, err = run(capsys, "context", dd_id, "--archive", str(replayed), "--depth", "1", "--json")
    assert code == 0
    subgraph = json.loads(out)
    assert len(subgraph["nodes"]) == 5
    code, out, err = run(capsys, "profile", "dr-rao", "--archive", str(replayed), "--json")
    assert code == 0
    assert json.loads(out)["total"] == 6


def test_index_build_idempotent(replayed, capsys):
    code, out, err = run(capsys, "index", "build", "--archive", str(replayed), "--json")
    assert code == 0
    first = (replayed / "index.json").read_bytes()
    run(capsys, "index", "build", "--archive", str(replayed))
    assert (replayed / "index.json").read_bytes() == first
