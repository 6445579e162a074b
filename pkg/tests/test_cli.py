"""CLI surface: exit codes, JSON shapes, determinism, error envelopes."""

import json

import pytest

from orbit_betti.cli import EXIT_ERROR, EXIT_OK, EXIT_UNCERTAIN, main

SPHERE_JOB = {
    "k": 3,
    "d": 2,
    "formula": "x1^2 + x2^2 + x3^2 = 1",
    "box": [["-2", "2"], ["0", "2"]],
    "resolution": "1/16",
    "field": "Q",
}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_rewrite_command(capsys):
    code, doc = run(
        capsys, "rewrite", "--k", "3", "--d", "2",
        "--formula", "x1^2 + x2^2 + x3^2 = 1",
    )
    assert code == EXIT_OK
    assert doc["image_dim"] == 2
    assert "y2" in doc["rewritten"] and "y1" not in doc["rewritten"]


def test_compositions_chain_listing(capsys):
    code, doc = run(capsys, "compositions", "--k", "3", "--d", "3", "--chains")
    assert code == EXIT_OK
    assert doc["count"] == 4
    assert doc["chain_count"] == 11
    assert len(doc["chains"]) == 11
    assert [[1, 1, 1]] in doc["chains"]
    assert [[3], [1, 2], [1, 1, 1]] in doc["chains"]
    # 11 chains against the closed-form 7: the discrepancy flag must be up
    assert doc["flags"]["bound_exceeded"] is True


def test_compositions_clean_case(capsys):
    code, doc = run(capsys, "compositions", "--k", "3", "--d", "2")
    assert code == EXIT_OK
    assert doc["chain_count"] == 3 == doc["paper_chain_bound"]
    assert doc["flags"]["bound_exceeded"] is False


def test_compositions_flags_discrepancy(capsys):
    code, doc = run(capsys, "compositions", "--k", "5", "--d", "3")
    assert code == EXIT_OK
    assert doc["chain_count"] == 11
    assert doc["paper_chain_bound"] == 7
    assert doc["flags"]["bound_exceeded"] is True


def test_membership_command(capsys):
    code, doc = run(capsys, "membership", "--k", "3", "--d", "2", "--point", "0,1")
    assert code == EXIT_OK and doc["verdict"] == "inside"
    code, doc = run(capsys, "membership", "--k", "3", "--d", "2", "--point", "0,-1")
    assert code == EXIT_OK and doc["verdict"] == "outside"


def test_section_command(capsys):
    code, doc = run(capsys, "section", "--k", "3", "--d", "2", "--point", "0,1")
    assert code == EXIT_OK
    assert doc["face"] == [1, 2]
    assert doc["ambiguous"] is False
    assert doc["value"] == pytest.approx(1 / 6**0.5, abs=1e-6)


def test_betti_job_file(tmp_path, capsys):
    job = tmp_path / "sphere.json"
    job.write_text(json.dumps(SPHERE_JOB))
    code, doc = run(capsys, "betti", "--job", str(job))
    assert code == EXIT_OK
    assert doc["betti"] == [1, 0]
    assert doc["stable"] is True
    assert "timing_seconds" in doc


def test_betti_inline_flags(capsys):
    code, doc = run(
        capsys, "betti", "--k", "3", "--d", "2",
        "--formula", "x1^2 + x2^2 + x3^2 = 1",
        "--box", "-2:2,0:2", "--resolution", "1/16",
    )
    assert code == EXIT_OK
    assert doc["betti"] == [1, 0]


def test_betti_determinism(tmp_path, capsys):
    job = tmp_path / "sphere.json"
    job.write_text(json.dumps(SPHERE_JOB))
    _, doc1 = run(capsys, "betti", "--job", str(job))
    _, doc2 = run(capsys, "betti", "--job", str(job))
    doc1.pop("timing_seconds")
    doc2.pop("timing_seconds")
    assert json.dumps(doc1, sort_keys=True) == json.dumps(doc2, sort_keys=True)


def test_betti_unstable_slab_exits_2(tmp_path, capsys):
    job = {
        "k": 3,
        "d": 2,
        "formula": "x1^2 + x2^2 + x3^2 <= 1/16",
        "box": [["-1", "1"], ["0", "1"]],
        "resolution": "1/4",
    }
    path = tmp_path / "slab.json"
    path.write_text(json.dumps(job))
    code, doc = run(capsys, "betti", "--job", str(path))
    assert code == EXIT_UNCERTAIN
    assert doc["stable"] is False


def test_betti_job_directory(tmp_path, capsys):
    (tmp_path / "a.json").write_text(json.dumps(SPHERE_JOB))
    shell = dict(SPHERE_JOB, formula="x1^2+x2^2+x3^2 >= 1 and x1^2+x2^2+x3^2 <= 2",
                 box=[["-3", "3"], ["0", "3"]], resolution="1/8")
    (tmp_path / "b.json").write_text(json.dumps(shell))
    code, doc = run(capsys, "betti", "--job", str(tmp_path), "--jobs", "2")
    assert code == EXIT_OK
    assert doc["jobs"]["a"]["betti"] == [1, 0]
    assert doc["jobs"]["b"]["betti"] == [1, 0]


def test_worker_env_cap(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("ORBIT_BETTI_THREADS", "1")
    (tmp_path / "a.json").write_text(json.dumps(SPHERE_JOB))
    code, doc = run(capsys, "betti", "--job", str(tmp_path), "--jobs", "8")
    assert code == EXIT_OK and "a" in doc["jobs"]


def test_orbits_command(capsys):
    code, doc = run(capsys, "orbits", "--roots", "1,2", "--k", "5")
    assert code == EXIT_OK
    assert doc["formula"] == 6 and doc["enumeration"] == 6


def test_bounds_command(capsys):
    code, doc = run(capsys, "bounds", "--k", "3", "--d", "2", "--s", "1")
    assert code == EXIT_OK
    assert doc["optm_algebraic"] == 18
    assert doc["optm_closed"] == 1944


def test_verify_command(tmp_path, capsys):
    job = tmp_path / "sphere.json"
    job.write_text(json.dumps(SPHERE_JOB))
    code, doc = run(capsys, "verify", "--job", str(job), "--direct-resolution", "1/8")
    assert code == EXIT_OK
    names = {c["name"]: c["passed"] for c in doc["checks"]}
    assert names["direct_oracle_agreement"] is True
    assert names["vanishing_above_threshold"] is True


def test_json_file_output(tmp_path, capsys):
    out = tmp_path / "out.json"
    code = main(["bounds", "--k", "3", "--d", "2", "--s", "1", "--json", str(out)])
    assert code == EXIT_OK
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["optm_algebraic"] == 18


def test_error_envelopes(tmp_path, capsys):
    code, doc = run(capsys, "membership", "--k", "3", "--d", "2", "--point", "1/0,1")
    assert code == EXIT_ERROR and "error" in doc

    code, doc = run(capsys, "nonexistent-command")
    assert code == EXIT_ERROR and "error" in doc

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, doc = run(capsys, "betti", "--job", str(bad))
    assert code == EXIT_ERROR and "error" in doc

    code, doc = run(capsys, "betti", "--k", "3", "--d", "2")  # missing formula/box
    assert code == EXIT_ERROR and "error" in doc

    code, doc = run(
        capsys, "rewrite", "--k", "3", "--d", "2", "--formula", "x1 > 0"
    )
    assert code == EXIT_ERROR and "strict" in doc["error"].lower() or "error" in doc
