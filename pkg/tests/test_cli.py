import json
import subprocess
import sys

import pytest

from divkit.cli import dumps, load_distribution, main, parse_dims, InputError


@pytest.fixture
def files(tmp_path):
    a = tmp_path / "a.json"
    a.write_text("[0.75, 0.25]")
    b = tmp_path / "b.json"
    b.write_text("[0.25,\n 0.75]\n")
    c = tmp_path / "c.csv"
    c.write_text("prob\n0.2\n0.3\n0.5\n")
    return a, b, c


def run(capsys, *argv):
    code = main([str(x) for x in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_delta(files, capsys):
    a, b, _ = files
    code, out, _ = run(capsys, "compute", "--measure", "delta", "--p", a, "--q", b)
    assert code == 0
    rec = json.loads(out)
    assert rec["measure"] == "delta" and rec["value"] == 0.5 and rec["dims"] == 2


def test_compute_k1_equals_b1(files, capsys):
    a, b, _ = files
    _, out, _ = run(capsys, "compute", "--measure", "k_t:1", "--measure", "b1", "--p", a, "--q", b)
    k1, b1 = json.loads(out)
    assert k1["value"] == pytest.approx(b1["value"], rel=1e-14)


def test_compute_same_inputs_is_zero(files, capsys):
    a, _, _ = files
    for path in ("closed", "csiszar"):
        _, out, _ = run(capsys, "compute", "--measure", "d:f-i", "--p", a, "--q", a, "--path", path)
        assert json.loads(out)["value"] == 0


def test_input_errors_name_file_and_line(tmp_path, files, capsys):
    a, _, c = files
    z = tmp_path / "z.csv"
    z.write_text("0.5\n0\n0.5\n")
    code, _, err = run(capsys, "compute", "--measure", "delta", "--p", z, "--q", c)
    assert code == 2 and f"{z}:2" in err
    bad = tmp_path / "bad.json"
    bad.write_text('[0.5,\n\n "x"]')
    code, _, err = run(capsys, "compute", "--measure", "delta", "--p", bad, "--q", a)
    assert code == 2 and f"{bad}:3" in err
    broken = tmp_path / "broken.json"
    broken.write_text("[0.5,\n 0.5")
    code, _, err = run(capsys, "compute", "--measure", "delta", "--p", broken, "--q", a)
    assert code == 2 and str(broken) in err
    code, _, err = run(capsys, "compute", "--measure", "delta", "--p", tmp_path / "missing.csv", "--q", a)
    assert code == 2 and "missing.csv" in err
    code, _, err = run(capsys, "compute", "--measure", "nosuch", "--p", a, "--q", a)
    assert code == 2


def test_dimension_mismatch_exit_3(files, capsys):
    a, _, c = files
    code, _, err = run(capsys, "compute", "--measure", "delta", "--p", a, "--q", c)
    assert code == 3 and "mismatch" in err


def test_counts_mode(tmp_path, capsys):
    p = tmp_path / "p.csv"
    p.write_text("9\n0\n")
    q = tmp_path / "q.csv"
    q.write_text("0\n9\n")
    code, out, _ = run(capsys, "compute", "--measure", "delta", "--p", p, "--q", q, "--counts")
    assert code == 0
    # (0.95, 0.05) vs (0.05, 0.95)
    assert json.loads(out)["value"] == pytest.approx(2 * 0.9 ** 2, rel=1e-14)
    code, _, _ = run(capsys, "compute", "--measure", "delta", "--p", p, "--q", q)
    assert code == 2


def test_load_distribution_variants(tmp_path):
    d = tmp_path / "obj.json"
    d.write_text('{"probs": [0.1, 0.9]}')
    assert load_distribution(str(d)).tolist() == pytest.approx([0.1, 0.9])
    s = tmp_path / "off.csv"
    s.write_text("0.5\n0.6\n")
    with pytest.raises(InputError, match="off.csv:2"):
        load_distribution(str(s))


def test_parse_dims():
    assert parse_dims("2..5") == [2, 3, 4, 5]
    assert parse_dims("2,4,8") == [2, 4, 8]
    assert parse_dims("2..3, 9") == [2, 3, 9]
    import argparse
    for bad in ("1..3", "5..2", "x", ""):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_dims(bad)


def test_report_profile(files, capsys):
    a, b, _ = files
    code, out, _ = run(capsys, "report", "--p", a, "--q", a)
    rows = json.loads(out)["measures"]
    assert code == 0 and all(r["value"] == 0 for r in rows)
    names = [r["measure"] for r in rows]
    assert names[:3] == ["delta", "hellinger", "psi"]
    assert "l:15" in names and "k_t:5" in names and "partial:20" in names and "exp_k" in names
    _, out, _ = run(capsys, "report", "--p", a, "--q", b)
    vals = {r["measure"]: r["value"] for r in json.loads(out)["measures"]}
    chain = [vals["delta"] / 4, vals["i"], vals["hellinger"], vals["j"] / 8, vals["t"],
             vals["k0"] / 8, vals["psi"] / 16, vals["f"] / 16]
    assert chain == sorted(chain)
    _, out2, _ = run(capsys, "report", "--p", a, "--q", b)
    assert out == out2


def test_report_csv(files, capsys):
    a, b, _ = files
    code, out, _ = run(capsys, "report", "--p", a, "--q", b, "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "measure,value" and lines[1].startswith("delta,0.5")


def test_verify_and_identity_mode(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--chain", "eq15", "--trials", "2000", "--dims", "2..10", "--seed", "7")
    rep = json.loads(out)
    assert code == 0 and rep["verified"] and rep["seed"] == 7
    assert all("worst_slack" in e for e in rep["edges"])
    code, out, _ = run(capsys, "verify", "--chain", "eq33", "--trials", "1000")
    assert code == 0 and json.loads(out)["mode"] == "identity"
    code, out, _ = run(capsys, "verify", "--chain", "eq29", "--trials", "1000", "--max-violations", "3")
    rep = json.loads(out)
    assert code == 1 and rep["violation_count"] > 3 and len(rep["violations"]) == 3
    code, _, _ = run(capsys, "verify", "--chain", "bogus")
    assert code == 2


def test_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("DIVKIT_SEED", "123")
    _, out, _ = run(capsys, "verify", "--chain", "eq28", "--trials", "50")
    assert json.loads(out)["seed"] == 123
    monkeypatch.setenv("DIVKIT_SEED", "x")
    code, _, _ = run(capsys, "verify", "--chain", "eq28", "--trials", "50")
    assert code == 2


def test_bad_flags_exit_2(capsys):
    for argv in (["verify", "--chain", "eq15", "--trials", "0"],
                 ["verify", "--chain", "eq15", "--tol", "-1"],
                 ["verify", "--chain", "eq15", "--dims", "1..3"],
                 ["beta"], ["nosuchcommand"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
    capsys.readouterr()


def test_beta_ratio(capsys):
    code, out, _ = run(capsys, "beta", "--ratio", "d:t-delta/d:k0-delta")
    d = json.loads(out)
    assert code == 0 and d["beta_hat"] == pytest.approx(1, abs=1e-6)
    assert d["expected"] == "1" and d["matches"]
    code, out, _ = run(capsys, "beta", "--ratio", "k0/k0")
    assert json.loads(out)["beta_hat"] == 1
    code, _, _ = run(capsys, "beta", "--ratio", "k0")
    assert code == 2
    code, out, _ = run(capsys, "beta", "--ratio", "d:h-i/d:k0-delta", "--certify", "500")
    assert json.loads(out)["certify"]["violations"] == 0


def test_beta_all_exit_reflects_table(capsys):
    code, out, _ = run(capsys, "beta", "--all")
    d = json.loads(out)
    assert d["total"] == 34 and (code == 0) == (d["matched"] == 34)


def test_json_round_trip_is_byte_identical(files, capsys):
    a, b, _ = files
    _, out, _ = run(capsys, "report", "--p", a, "--q", b)
    assert dumps(json.loads(out)) == out
    _, out, _ = run(capsys, "verify", "--chain", "eq29", "--trials", "300")
    assert dumps(json.loads(out)) == out


def test_out_file_and_console_script(files, tmp_path):
    a, b, _ = files
    target = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "divkit", "compute", "--measure", "t",
                           "--p", str(a), "--q", str(b), "--out", str(target)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == ""
    assert json.loads(target.read_text())["measure"] == "t"
