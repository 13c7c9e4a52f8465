"""End-to-end tests for the command-line interface."""

import csv
import json
import math

import pytest

from monge4.cli import main
from monge4.grid import GridSpec, sample_values, export_samples_csv
from monge4.invariants import invariants_at
from monge4.patch import make_explicit, make_translation, patch_to_json


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval_rotational_linear_profile(capsys):
    code, out, _ = run(capsys, "eval", "--family", "aminov", "--r", "u",
                       "-u", "1", "-v", "0.7853981633974483")
    assert code == 0
    doc = json.loads(out)
    assert doc["K"] == pytest.approx(-0.125, abs=1e-12)
    assert doc["KN"] == pytest.approx(0.125, abs=1e-12)
    assert set(doc) == {"K", "KN", "H1", "H2", "Hnorm"}


def test_eval_zero_surface(capsys):
    code, out, _ = run(capsys, "eval", "--f", "0", "--g", "0",
                       "-u", "0", "-v", "0")
    assert code == 0
    assert all(value == 0.0 for value in json.loads(out).values())


def test_eval_parse_error_reports_position(capsys):
    code, out, err = run(capsys, "eval", "--f", "u$", "--g", "0",
                         "-u", "0", "-v", "0")
    assert code == 2
    assert out == ""
    assert "position 1" in err


def test_eval_text_and_csv_formats(capsys):
    code, out, _ = run(capsys, "eval", "--f", "u^2", "--g", "v^2",
                       "-u", "0.5", "-v", "0.25", "--format", "text")
    assert code == 0
    assert out.splitlines()[0].startswith("K = ")
    code, out, _ = run(capsys, "eval", "--f", "u^2", "--g", "v^2",
                       "-u", "0.5", "-v", "0.25", "--format", "csv")
    assert code == 0
    header, row = out.splitlines()
    assert header == "K,KN,H1,H2,Hnorm"
    assert len(row.split(",")) == 5


def test_eval_outside_domain_is_evaluation_error(capsys):
    code, _, err = run(capsys, "eval", "--family", "aminov", "--r", "u",
                       "-u", "5", "-v", "0")
    assert code == 3
    assert "domain" in err


def test_eval_log_singularity_is_evaluation_error(capsys):
    code, _, err = run(capsys, "eval", "--f", "log(u)", "--g", "0",
                       "-u", "-1", "-v", "0")
    assert code == 3
    assert "log" in err


def test_surface_source_usage_errors(capsys):
    code, _, err = run(capsys, "eval", "--f", "u", "-u", "0", "-v", "0")
    assert code == 2 and "--f and --g" in err
    code, _, err = run(capsys, "eval", "-u", "0", "-v", "0")
    assert code == 2 and "exactly one surface source" in err
    code, _, err = run(capsys, "eval", "--f", "u", "--g", "v", "--r", "u",
                       "-u", "0", "-v", "0")
    assert code == 2
    code, _, err = run(capsys, "eval", "--family", "aminov", "--f", "u",
                       "--g", "v", "-u", "0", "-v", "0")
    assert code == 2 and "--family" in err


def test_eval_from_patch_file(tmp_path, capsys):
    patch = make_translation("sin(u)", "u^2", "log(v+2)", "v^3")
    path = tmp_path / "patch.json"
    path.write_text(patch_to_json(patch))
    code, out, _ = run(capsys, "eval", "--patch", str(path),
                       "-u", "0.3", "-v", "0.4")
    assert code == 0
    exact = invariants_at(patch, 0.3, 0.4)
    doc = json.loads(out)
    assert doc["K"] == pytest.approx(exact.K, abs=1e-15)
    assert doc["Hnorm"] == pytest.approx(exact.Hnorm, abs=1e-15)

    code, _, err = run(capsys, "eval", "--patch", str(path), "--f", "u",
                       "-u", "0", "-v", "0")
    assert code == 2 and "--patch" in err

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "eval", "--patch", str(bad),
                       "-u", "0", "-v", "0")
    assert code == 2

    code, _, err = run(capsys, "eval", "--patch", str(tmp_path / "nope"),
                       "-u", "0", "-v", "0")
    assert code == 4


def test_grid_writes_csv(tmp_path, capsys):
    out = tmp_path / "table.csv"
    code, stdout, _ = run(capsys, "grid", "--f", "u^2", "--g", "u*v",
                          "--nu", "5", "--nv", "4", "--out", str(out))
    assert code == 0
    assert "20 nodes" in stdout
    lines = out.read_text().splitlines()
    assert lines[0] == ("u,v,E,F,G,W2,K,KN,H1,H2,Hnorm,chen,wintgen,flag")
    assert len(lines) == 21


def test_grid_stdout_and_worker_determinism(tmp_path, capsys):
    argv = ["grid", "--f", "u^3", "--g", "v^2", "--nu", "7", "--nv", "7"]
    code, first, _ = run(capsys, *argv)
    assert code == 0
    code, second, _ = run(capsys, *argv, "--workers", "3")
    assert code == 0
    assert first == second


def test_grid_json_marks_failures_null(capsys):
    code, out, _ = run(capsys, "grid", "--f", "log(u)", "--g", "0",
                       "--nu", "3", "--nv", "2", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 6
    failed = [r for r in rows if r["flag"]]
    assert failed and all(r["K"] is None for r in failed)
    clean = [r for r in rows if not r["flag"]]
    assert clean and all(isinstance(r["K"], float) for r in clean)


def test_classify_requested_predicates_control_exit(capsys):
    argv = ["classify", "--family", "aminov", "--r", "exp(u)",
            "--v0", "0", "--v1", "6.283185307179586",
            "--nu", "11", "--nv", "11"]
    code, out, _ = run(capsys, *argv, "--predicates", "minimal,chen,wintgen")
    assert code == 0
    doc = json.loads(out)
    assert doc["minimal"]["verdict"] == "holds"
    assert doc["chen"]["verdict"] == "holds"
    assert doc["wintgen_ideal"]["verdict"] == "holds"
    assert doc["flat"]["verdict"] == "fails"

    code, _, _ = run(capsys, *argv, "--predicates", "minimal,flat")
    assert code == 1


def test_classify_flat_example(capsys):
    code, out, _ = run(capsys, "classify", "--f", "u^2+v^2",
                       "--g", "u^2-v^2", "--predicates", "flat",
                       "--u0", "-2", "--u1", "2", "--v0", "-2", "--v1", "2",
                       "--nu", "11", "--nv", "11")
    assert code == 0
    doc = json.loads(out)
    assert doc["flat"]["verdict"] == "holds"
    assert doc["k_plus_kn_zero"]["verdict"] == "holds"
    assert doc["first_normal_rank"] == 2
    assert doc["tolerances"] == {"tol": 1e-8}


def test_classify_rejects_unknown_predicate(capsys):
    code, _, err = run(capsys, "classify", "--f", "0", "--g", "0",
                       "--predicates", "bogus")
    assert code == 2
    assert "unknown predicate" in err


def test_classify_text_format(capsys):
    code, out, _ = run(capsys, "classify", "--f", "0", "--g", "0",
                       "--nu", "3", "--nv", "3", "--format", "text")
    assert code == 0
    assert "minimal: holds" in out
    assert "first normal bundle rank: 0" in out


def test_ode_closed_form_residual_bound(tmp_path, capsys):
    out = tmp_path / "ode.csv"
    code, stdout, _ = run(capsys, "ode", "--a", "1", "--b", "0",
                          "--sigma", "+1", "--range", "-1", "1",
                          "--steps", "1000", "--out", str(out))
    assert code == 0
    assert "1001 nodes" in stdout
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1001
    assert max(abs(float(r["residual"])) for r in rows) < 1e-10
    assert float(rows[0]["u"]) == -1.0 and float(rows[-1]["u"]) == 1.0
    # a=1, b=0 collapses to r = e^u / 2
    mid = rows[500]
    assert float(mid["r"]) == pytest.approx(0.5 * math.exp(float(mid["u"])),
                                            abs=1e-14)


def test_ode_numeric_mode_matches_exponential(capsys):
    code, out, _ = run(capsys, "ode", "--r0", "0.5", "--r0p", "0.5",
                       "--range", "0", "1", "--steps", "400",
                       "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert rows[-1]["r"] == pytest.approx(0.5 * math.e, abs=1e-8)


def test_ode_mode_and_blowup_errors(capsys):
    code, _, err = run(capsys, "ode", "--range", "0", "1")
    assert code == 2 and "--a" in err
    code, _, err = run(capsys, "ode", "--a", "1", "--r0", "0.5")
    assert code == 2
    code, _, err = run(capsys, "ode", "--r0", "2", "--r0p", "10",
                       "--range", "0", "120", "--steps", "600")
    assert code == 3
    assert "blew up" in err


def test_ingest_runs_fd_pipeline(tmp_path, capsys):
    samples = tmp_path / "samples.csv"
    patch = make_explicit("sin(u)*cos(v)", "u*v")
    export_samples_csv(sample_values(patch, GridSpec(-1, 1, -1, 1, 9, 9)),
                       str(samples))
    out = tmp_path / "result.csv"
    code, stdout, _ = run(capsys, "ingest", str(samples), "--out", str(out))
    assert code == 0
    assert "9 x 9" in stdout
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 81
    interior = [r for r in rows if not r["flag"]]
    assert len(interior) == 49
    exact = invariants_at(patch, 0.0, 0.0)
    center = [r for r in rows if float(r["u"]) == 0.0
              and float(r["v"]) == 0.0][0]
    assert float(center["K"]) == pytest.approx(exact.K, abs=1e-2)

    code, _, _ = run(capsys, "ingest", str(tmp_path / "missing.csv"))
    assert code == 4


def test_verify_all_checks_pass(capsys):
    code, out, _ = run(capsys, "verify", "--format", "json")
    assert code == 0
    checks = json.loads(out)
    assert len(checks) >= 20
    assert all(c["ok"] for c in checks)
    names = {c["name"] for c in checks}
    assert "same-sign-counterexample" in names
    assert "chen-six-profiles" in names


def test_verify_text_lines(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    lines = out.splitlines()
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert lines[-1].endswith("checks passed")


def test_help_lists_flags(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    for name in ("eval", "grid", "classify", "verify", "ode", "ingest"):
        assert name in out
    code, out, _ = run(capsys, "eval", "--help")
    assert code == 0
    for flag in ("--f", "--g", "--family", "--r", "--patch", "--u0", "--nv",
                 "--tol", "--out", "--format", "-u", "-v"):
        assert flag in out
    code, out, _ = run(capsys, "grid", "--help")
    assert code == 0
    assert "--workers" in out and "default: 41" in out


def test_missing_subcommand_is_usage_error(capsys):
    assert main([]) == 2
    capsys.readouterr()


def test_eval_output_is_deterministic(capsys):
    argv = ["eval", "--f", "exp(u)*cos(v)", "--g", "u*v^2",
            "-u", "0.37", "-v", "-0.81"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
