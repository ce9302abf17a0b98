import csv
import io
import json
import subprocess
import sys

import pytest

from gluings import cli


def run(argv, cache=None):
    out, err = io.StringIO(), io.StringIO()
    argv = list(argv) + (["--cache-dir", str(cache)] if cache else ["--no-cache"])
    code = cli.main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_verify_eps_two_faces():
    code, out, err = run(["verify", "--family", "eps", "--g", "0", "--K", "2", "--N", "1..5"])
    assert code == 0 and err == ""
    rows = rows_of(out)
    assert len(rows) == 5 and all(r["match"] == "True" for r in rows)
    assert [int(r["brute"]) for r in rows] == [1, 8, 48, 256, 1280]


def test_verify_bicolored_two_faces():
    code, out, _ = run(["verify", "--family", "B", "--g", "0", "--K", "2", "--N", "1..5"])
    assert code == 0
    assert [int(r["formula"]) for r in rows_of(out)] == [0, 1, 8, 48, 256]


def test_table_zero_region():
    code, out, _ = run(["table", "--family", "eps", "--g", "1", "--K", "2", "--N", "0..0"])
    assert code == 0
    assert rows_of(out) == [{"family": "eps", "g": "1", "N": "0", "K": "2", "M": "", "value": "0"}]


def test_csv_header_and_json_mirror():
    code, text, _ = run(["table", "--family", "eps", "--g", "0..1", "--K", "1", "--N", "1..4"])
    assert code == 0 and text.splitlines()[0] == "family,g,N,K,M,value"
    code, js, _ = run(["table", "--family", "eps", "--g", "0..1", "--K", "1", "--N", "1..4", "--format", "json"])
    data = json.loads(js)
    assert [{k: str(v) if v is not None else "" for k, v in r.items()} for r in data] == rows_of(text)
    code, txt, _ = run(["table", "--family", "eps", "--N", "3", "--format", "text"])
    assert code == 0 and txt.split()[-1] == "5"


def test_table_methods_agree():
    base = ["table", "--family", "eps", "--g", "0..1", "--K", "2", "--N", "1..12"]
    assert run(base + ["--method", "rec"])[1] == run(base + ["--method", "closed"])[1]


def test_eps_tilde_rows():
    code, out, _ = run(["verify", "--family", "eps_tilde", "--K", "2", "--N", "4", "--M", "1..3"])
    assert code == 0
    assert [int(r["brute"]) for r in rows_of(out)] == [3, 2, 3]


@pytest.mark.parametrize("argv", [
    ["table", "--family", "eps", "--g", "3", "--K", "2", "--N", "9"],
    ["table", "--family", "eps", "--N", "3..1"],
    ["table", "--family", "eps", "--N", "x"],
    ["table", "--family", "nope", "--N", "1"],
    ["brute", "--family", "eps", "--N", "9"],
    ["brute", "--family", "eps", "--N", "3", "--K", "0"],
    ["table", "--family", "eps_tilde", "--K", "2", "--N", "4"],
    ["table", "--family", "eps", "--N", "1", "--workers", "0"],
    ["delete-audit", "--N", "9"],
])
def test_invalid_config_exits_2(argv):
    code, _, _ = run(argv)
    assert code == 2


def test_mismatch_exits_1(monkeypatch):
    real = cli.formula_value
    monkeypatch.setattr(cli, "formula_value",
                        lambda family, g, n, k, m, method="closed": real(family, g, n, k, m, method) + (n == 3))
    code, out, err = run(["verify", "--family", "eps", "--g", "0", "--K", "2", "--N", "1..4"])
    assert code == 1
    failures = json.loads(err)["failures"]
    assert len(failures) == 1 and failures[0]["N"] == 3 and failures[0]["brute"] == 48


def test_cache_is_transparent(tmp_path):
    argv = ["verify", "--family", "eps", "--g", "0..1", "--K", "1..2", "--N", "1..4"]
    cold = run(argv, tmp_path)
    files = sorted(p.name for p in tmp_path.iterdir())
    assert len(files) == 2 and files[0].startswith("eps-brute-")
    warm = run(argv, tmp_path)
    assert cold == warm
    assert cold[1] == run(argv)[1]


def test_cache_is_used(tmp_path, monkeypatch):
    argv = ["brute", "--family", "eps", "--K", "2", "--N", "2..3"]
    first = run(argv, tmp_path)
    monkeypatch.setattr(cli, "brute_value", lambda *a, **k: pytest.fail("cache miss"))
    assert run(argv, tmp_path) == first


def test_cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path / "c"))
    out, err = io.StringIO(), io.StringIO()
    assert cli.main(["table", "--family", "B", "--N", "1..3"], out, err) == 0
    assert len(list((tmp_path / "c").iterdir())) == 1


def test_stale_cache_is_ignored(tmp_path):
    argv = ["table", "--family", "eps", "--K", "2", "--N", "1..3"]
    first = run(argv, tmp_path)
    (path,) = tmp_path.iterdir()
    data = json.loads(path.read_text())
    data["schema_version"] = 0
    data["rows"][0]["value"] = 999
    path.write_text(json.dumps(data))
    assert run(argv, tmp_path) == first


def test_delete_audit_command():
    code, out, err = run(["delete-audit", "--N", "2..3", "--K", "1..3", "--g", "0..1"])
    assert code == 0 and err == ""
    rows = rows_of(out)
    assert rows and all(r["passed"] == "True" for r in rows)
    assert {(r["g"], r["N"], r["K"]) for r in rows} >= {("0", "2", "1"), ("1", "2", "1"), ("0", "3", "2")}
    code, js, _ = run(["delete-audit", "--N", "2", "--K", "1", "--format", "json"])
    assert code == 0 and json.loads(js)[0]["passed"] is True
    code, out, _ = run(["delete-audit", "--N", "2..4", "--K", "2", "--bicolored"])
    assert code == 0 and all(r["passed"] == "True" for r in rows_of(out))


def test_identities_command():
    code, out, _ = run(["identities", "--N", "1..6"])
    assert code == 0 and len(rows_of(out)) == 18
    code, out, _ = run(["identities", "--N", "1..3", "--source", "brute"])
    assert code == 0 and all(r["ok"] == "True" for r in rows_of(out))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gluings", "table", "--family", "eps", "--K", "3",
                           "--N", "2", "--no-cache"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.splitlines()[1].endswith(",6")
    proc = subprocess.run([sys.executable, "-m", "gluings", "table"], capture_output=True, text=True)
    assert proc.returncode == 2
