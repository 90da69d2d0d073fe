"""CLI surface tests: exit-code contract, JSON payloads, piping via '-',
and golden human renderings."""

import io
import json

import pytest

from qgeom.cli import EXIT_BUDGET, EXIT_ERROR, EXIT_NONEXISTENCE, EXIT_OK, main

GOLDEN_TRIANGLE_Q2 = """\
2-(7,3,1)_2 lambda triangle (rows i+j = 0..t, left to right: lambda_(i+j,0) .. lambda_(0,i+j)):
      381
    21   45
  1    5    5
admissible: yes"""


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ----------------------------------------------------------------------
# lambda / field
# ----------------------------------------------------------------------

def test_lambda_triangle_golden(capsys):
    code, out, _ = run(capsys, "lambda", "--t", "2", "--v", "7", "--k", "3",
                       "--l", "1", "--q", "2")
    assert code == EXIT_OK
    assert out.strip() == GOLDEN_TRIANGLE_Q2


def test_lambda_q3_headline_value(capsys):
    code, out, _ = run(capsys, "lambda", "--t", "2", "--v", "7", "--k", "3",
                       "--l", "1", "--q", "3")
    assert code == EXIT_OK
    assert "7651" in out.splitlines()[1]


def test_lambda_not_admissible_message(capsys):
    code, out, _ = run(capsys, "lambda", "--t", "2", "--v", "6", "--k", "3",
                       "--l", "1", "--q", "2")
    assert code == EXIT_OK
    assert out.strip().endswith("not admissible (lambda_1 = 31/3)")


def test_lambda_json_report(capsys):
    code, out, _ = run(capsys, "lambda", "--t", "2", "--v", "7", "--k", "3",
                       "--l", "1", "--q", "2", "--json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["outputs"]["admissible"] is True
    assert report["outputs"]["triangle"][0] == [[381, 1]]
    assert report["outputs"]["triangle"][2] == [[1, 1], [5, 1], [5, 1]]
    assert report["command"][0] == "qgeom"
    assert "wall_time_s" in report and report["version"]


def test_field_payload(capsys):
    code, out, _ = run(capsys, "field", "--q", "4")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["modulus"] == [1, 1, 1]
    assert payload["mul"][2][2] == 3
    assert payload["inv"][0] is None


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["lambda", "--t", "2"])
    assert exc.value.code == 64


def test_installed_console_script():
    import subprocess
    proc = subprocess.run(["qgeom", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("qgeom ")


# ----------------------------------------------------------------------
# gq
# ----------------------------------------------------------------------

def test_gq_build_check_dual_iso_flow(tmp_path, capsys):
    w2 = tmp_path / "w2.json"
    q42 = tmp_path / "q4_2.json"
    assert run(capsys, "gq", "build", "--type", "W", "--q", "2",
               "--out", str(w2))[0] == EXIT_OK
    assert run(capsys, "gq", "build", "--type", "Q4", "--q", "2",
               "--out", str(q42))[0] == EXIT_OK
    code, out, _ = run(capsys, "gq", "check", str(w2))
    assert code == EXIT_OK and out.strip() == "GQ of order (2,2)"
    dual = tmp_path / "dual.json"
    assert run(capsys, "gq", "dual", str(w2), "--out", str(dual))[0] == EXIT_OK
    code, out, _ = run(capsys, "gq", "iso", str(dual), str(q42))
    assert code == EXIT_OK and out.startswith("isomorphic")


def test_gq_iso_negative(tmp_path, capsys):
    w2 = tmp_path / "w2.json"
    w3 = tmp_path / "w3.json"
    run(capsys, "gq", "build", "--type", "W", "--q", "2", "--out", str(w2))
    run(capsys, "gq", "build", "--type", "W", "--q", "3", "--out", str(w3))
    code, out, _ = run(capsys, "gq", "iso", str(w2), str(w3))
    assert code == EXIT_ERROR and out.strip() == "not isomorphic"


def test_gq_dual_pipes_through_stdin(tmp_path, capsys, monkeypatch):
    w2 = tmp_path / "w2.json"
    run(capsys, "gq", "build", "--type", "W", "--q", "2", "--out", str(w2))
    code, dual_payload, _ = run(capsys, "gq", "dual", str(w2))
    assert code == EXIT_OK
    q42 = tmp_path / "q4.json"
    run(capsys, "gq", "build", "--type", "Q4", "--q", "2", "--out", str(q42))
    monkeypatch.setattr("sys.stdin", io.StringIO(dual_payload))
    code, out, _ = run(capsys, "gq", "iso", "-", str(q42))
    assert code == EXIT_OK and out.startswith("isomorphic")


def test_gq_build_out_of_range(capsys):
    code, _, err = run(capsys, "gq", "build", "--type", "W", "--q", "17")
    assert code == EXIT_ERROR
    assert "error" in err


def test_gq_build_is_byte_identical(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    run(capsys, "gq", "build", "--type", "Q4", "--q", "3", "--out", str(a))
    run(capsys, "gq", "build", "--type", "Q4", "--q", "3", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


# ----------------------------------------------------------------------
# search
# ----------------------------------------------------------------------

@pytest.fixture
def q4_2_file(tmp_path, capsys):
    f = tmp_path / "q4_2.json"
    run(capsys, "gq", "build", "--type", "Q4", "--q", "2", "--out", str(f))
    return str(f)


def test_search_exit_codes(q4_2_file, tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code, _, _ = run(capsys, "search", "ovoids", q4_2_file, "--out", str(cert))
    assert code == EXIT_OK
    payload = json.loads(cert.read_text())
    assert payload["solution_count"] == 6
    assert payload["completed"] is True

    code, _, _ = run(capsys, "search", "partition-ovoids", q4_2_file,
                     "--out", str(cert))
    assert code == EXIT_NONEXISTENCE
    payload = json.loads(cert.read_text())
    assert payload["mode"] == "nonexistence" and payload["completed"] is True

    code, _, _ = run(capsys, "search", "ovoids", q4_2_file, "--limit", "2",
                     "--out", str(cert))
    assert code == EXIT_BUDGET
    payload = json.loads(cert.read_text())
    assert payload["completed"] is False


def test_search_pg_spreads_writes_spread_file(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    spread = tmp_path / "spread.json"
    code, _, _ = run(capsys, "search", "pg-spreads", "--v", "6", "--q", "2",
                     "--mode", "first", "--max-solutions", "1",
                     "--limit", "1e7", "--seed", "7",
                     "--out", str(cert), "--spread-out", str(spread))
    assert code == EXIT_OK
    blocks = json.loads(spread.read_text())
    assert blocks["v"] == 6 and blocks["k"] == 2 and len(blocks["blocks"]) == 21
    cert_payload = json.loads(cert.read_text())
    assert cert_payload["seed"] == 7


def test_search_pg_spreads_policy_budget(capsys):
    code, _, _ = run(capsys, "search", "pg-spreads", "--v", "6", "--q", "3",
                     "--mode", "first", "--max-solutions", "1")
    assert code == EXIT_BUDGET


def test_workers_env_fallback(q4_2_file, tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QGEOM_WORKERS", "2")
    cert = tmp_path / "cert.json"
    code, _, _ = run(capsys, "search", "ovoids", q4_2_file, "--out", str(cert))
    assert code == EXIT_OK
    assert json.loads(cert.read_text())["solution_count"] == 6


# ----------------------------------------------------------------------
# design
# ----------------------------------------------------------------------

def test_design_spread_gen_check_geometric_flow(tmp_path, capsys, monkeypatch):
    spread = tmp_path / "spread.json"
    code, out, err = run(capsys, "design", "spread-gen", "--v", "6", "--k", "2",
                         "--q", "2", "--out", str(spread))
    assert code == EXIT_OK
    assert "21 blocks" in err
    code, out, _ = run(capsys, "design", "geometric", str(spread))
    assert code == EXIT_OK and out.strip() == "geometric: true"
    # pipe the payload through stdin
    payload = spread.read_text()
    monkeypatch.setattr("sys.stdin", io.StringIO(payload))
    code, out, _ = run(capsys, "design", "geometric", "-")
    assert code == EXIT_OK and out.strip() == "geometric: true"


def test_design_check_pass_and_fail(tmp_path, capsys):
    spread = tmp_path / "spread.json"
    run(capsys, "design", "spread-gen", "--v", "4", "--k", "2", "--q", "2",
        "--out", str(spread))
    code, out, _ = run(capsys, "design", "check", str(spread), "--t", "1",
                       "--v", "4", "--k", "2", "--l", "1", "--q", "2")
    assert code == EXIT_OK and out.strip() == "pass: 1-(4,2,1)_2"
    # remove one block and expect failure with witnesses
    payload = json.loads(spread.read_text())
    payload["blocks"] = payload["blocks"][:-1]
    damaged = tmp_path / "damaged.json"
    damaged.write_text(json.dumps(payload))
    code, out, _ = run(capsys, "design", "check", str(damaged), "--t", "1",
                       "--v", "4", "--k", "2", "--l", "1", "--q", "2")
    assert code == EXIT_ERROR and out.startswith("fail")


def test_design_geometric_false_with_witness(tmp_path, capsys):
    spread = tmp_path / "ng.json"
    run(capsys, "search", "pg-spreads", "--v", "6", "--q", "2",
        "--mode", "first", "--max-solutions", "1", "--seed", "7",
        "--spread-out", str(spread))
    code, out, _ = run(capsys, "design", "geometric", str(spread))
    assert code == EXIT_ERROR
    assert out.startswith("geometric: false, witness 4-subspace")


def test_design_derive_and_dual(tmp_path, capsys):
    spread = tmp_path / "spread.json"
    run(capsys, "design", "spread-gen", "--v", "4", "--k", "2", "--q", "2",
        "--out", str(spread))
    code, out, _ = run(capsys, "design", "derive", str(spread), "--point", "0")
    assert code == EXIT_OK
    derived = json.loads(out)
    assert derived["v"] == 3 and derived["k"] == 1 and len(derived["blocks"]) == 1
    code, out, _ = run(capsys, "design", "dual", str(spread))
    assert code == EXIT_OK
    dual = json.loads(out)
    assert dual["k"] == 2 and len(dual["blocks"]) == 5


def test_design_alpha_via_files(tmp_path, capsys):
    # build the cone over the Desarguesian spread of PG(5,2) and check
    # its apex from the CLI; the apex (0,...,0,1) is the lexicographically
    # first point of PG(6,2)
    from qgeom.designs import blockset_to_json, cone_over, desarguesian_spread
    from qgeom.gf import field_new

    lifted, apex = cone_over(desarguesian_spread(6, 2, field_new(2)))
    assert apex.index == 0
    blocks = tmp_path / "cone.json"
    blocks.write_text(json.dumps(blockset_to_json(lifted)))
    code, out, _ = run(capsys, "design", "alpha", str(blocks),
                       "--point", str(apex.index))
    assert code == EXIT_OK and out.strip() == "alpha point: true"


def test_design_derive_point_out_of_range(tmp_path, capsys):
    spread = tmp_path / "spread.json"
    run(capsys, "design", "spread-gen", "--v", "4", "--k", "2", "--q", "2",
        "--out", str(spread))
    code, _, err = run(capsys, "design", "derive", str(spread), "--point", "99")
    assert code == EXIT_ERROR and "point index" in err
