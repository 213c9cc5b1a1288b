import json

import pytest

from dtangent.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_all_r3(capsys):
    code, out, err = run(capsys, "verify", "--all", "--r-example", "3", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["pass"]
    assert [s["name"] for s in rep["suites"]] == ["base", "ore", "resolution", "hochschild",
                                                   "gerstenhaber", "symmetry"]
    hh = next(s for s in rep["suites"] if s["name"] == "hochschild")
    assert hh["checks"][0]["detail"]["dims"] == [1, 5, 9, 5, 0]
    assert "[dtangent]" in err and "[dtangent]" not in out


def test_deterministic_json(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify", "--suite", "resolution,symmetry", "--r-example", "4", "--seed",
                     "11", "--format", "json", "--output", str(path), "--quiet"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_hh_dims_windows(capsys):
    _, out4, _ = run(capsys, "hh-dims", "--window", "4", "--format", "json")
    _, out8, _ = run(capsys, "hh-dims", "--window", "8", "--format", "json")
    d4, d8 = json.loads(out4), json.loads(out8)
    assert d4["dims"] == d8["dims"] == d8["expected"] == [1, 5, 9, 5, 0]
    assert d4["stable"] and set(d4) >= {"r", "window", "dims", "stable", "expected"}


def test_arrangement_file(capsys, tmp_path):
    path = tmp_path / "arr.json"
    path.write_text('{"forms": [[1, 0], [0, 1], [1, -1], ["1/2", 1], [2, 5], [3, -7]]}')
    code, out, _ = run(capsys, "verify", "--arrangement", str(path), "--suite", "hochschild",
                       "--quiet")
    assert code == 0 and "dims=[1, 6, 11, 6, 0]" in out


@pytest.mark.parametrize("text", ['{"forms": [[1, 0], [0, 1],', '{"forms": [[1, 0], [1, 0], '
                                  '[0, 1], [1, 1], [1, 2]]}', '[[0, 1], [1, 1], [1, 2], [1, 3],'
                                  ' [1, 4]]'])
def test_malformed_arrangement(capsys, tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    code, out, err = run(capsys, "verify", "--arrangement", str(path))
    assert code == 2 and "error" in err and not out


@pytest.mark.parametrize("argv", [["verify", "--window", "1"], ["verify", "--depth", "0"],
                                  ["verify", "--suite", "nope"], ["frobnicate"],
                                  ["verify", "--arrangement", "/nonexistent/file.json"],
                                  ["normal-check", "x + ("]])
def test_bad_flags(capsys, argv):
    assert main(argv) == 2


def test_normal_check(capsys):
    code, out, _ = run(capsys, "normal-check", "x^2*y*(x-y)", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["normal"] and rep["exponents"] == [2, 1, 1, 0, 0]
    code, out, _ = run(capsys, "normal-check", "x + D", "--format", "json")
    assert code == 1 and json.loads(out)["reason"] == "not-in-S"
    code, out, _ = run(capsys, "normal-check", "x^2 + y^2")
    assert code == 1 and "non-split-factor" in out


def test_calabi_yau_and_autos(capsys):
    code, out, _ = run(capsys, "verify-calabi-yau", "--r-example", "4", "--depth", "3")
    assert code == 0 and out.strip().endswith("PASS")
    code, _, _ = run(capsys, "verify-autos", "--r-example", "5", "--quiet")
    assert code == 0


def test_failed_check_exit_code(capsys, monkeypatch):
    import dtangent.suites as suites

    monkeypatch.setitem(suites.SUITES, "base",
                        lambda arr, cfg: [suites._check("forced failure", False)])
    code, out, _ = run(capsys, "verify", "--suite", "base", "--quiet")
    assert code == 1 and "FAIL" in out
