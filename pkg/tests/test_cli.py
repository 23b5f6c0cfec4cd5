import json
import subprocess
import sys

import pytest

from bundlecover.cli import main

GRID = ["--r", "4", "--sigma", "(1 2 3 4)"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_case1_json_file(tmp_path, capsys):
    path = tmp_path / "out.json"
    code, out, _ = run(capsys, "case1", "--f", "Dx Dy^4", "--json", str(path))
    assert code == 0
    d = json.loads(path.read_text())
    assert d["base_b1"]["formula"] == 1
    assert d["cover_b1"]["formula"] >= 3
    assert json.loads(out) == d


def test_cover_grid_dot_has_16_nodes(tmp_path, capsys):
    dot = tmp_path / "g.dot"
    code, _, _ = run(capsys, "cover", "grid", *GRID, "--dot", str(dot))
    assert code == 0
    text = dot.read_text()
    nodes = [l for l in text.splitlines() if l.strip().split(" ")[0].isdigit() and "->" not in l]
    assert len(nodes) == 16


def test_cover_grid_explicit_four_sigmas(capsys):
    code, out, _ = run(capsys, "cover", "grid", "--r", "4", "--sigma", "(1 2 3 4)",
                       "--sigma", "(1 4 3 2)", "--sigma", "(1 2 3 4)", "--sigma", "(1 4 3 2)",
                       "--n", "2")
    d = json.loads(out)
    assert code == 0
    assert (d["degree"], d["genus"]) == (16, 5)
    assert d["fill"] == "MANIFOLD"


def test_quotient_n3(capsys):
    code, out, _ = run(capsys, "quotient", "--n", "3", "--seed", "7")
    assert code == 0
    assert json.loads(out)["verified_orders"] == [6, 6, 3]


def test_text_format(capsys):
    code, out, _ = run(capsys, "case1", "--format", "text")
    assert code == 0
    assert out.strip().endswith("PASSED")


def test_cover_descriptor_round_trip(tmp_path, capsys):
    path = tmp_path / "c.json"
    run(capsys, "cover", "grid", *GRID, "--json", str(path))
    code, out, _ = run(capsys, "cover", "boundary", "--cover", str(path), "--n", "2")
    d = json.loads(out)
    assert code == 0
    assert len(d["punctures"]) == 8
    assert {p["degree"] for p in d["punctures"]} == {2}


def test_lift_check_and_betti_inline_perms(capsys):
    code, out, _ = run(capsys, "lift", "check", "--x", "(1 2)", "--y", "(1 2)", "--f", "Dx")
    assert code == 0
    assert json.loads(out)["verified"]
    code, out, _ = run(capsys, "betti", "--x", "(1 2 3)", "--y", "(1 3 2)", "--f", "Dx Dy")
    d = json.loads(out)
    assert code == 0
    assert d["formula_equals_oracle"]


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "--f", "", "--cones", "2,2", "--keep", "1")
    d = json.loads(out)
    assert code == 0
    assert (d["b1_full"], d["b1_reduced"]) == (3, 3)


def test_malformed_permutation_exits_1_with_location(capsys):
    code, _, err = run(capsys, "cover", "boundary", "--x", "(1 2", "--y", "(1 2)")
    assert code == 1
    assert "--x" in err


def test_malformed_sigma_exits_1(capsys):
    code, _, err = run(capsys, "cover", "grid", "--r", "4", "--sigma", "(1 2 5 x)")
    assert code == 1
    assert "--sigma" in err


def test_bad_twist_word_exits_1(capsys):
    code, _, err = run(capsys, "case1", "--f", "Dz")
    assert code == 1
    assert "--f" in err


def test_argparse_usage_error_exits_1(capsys):
    with pytest.raises(SystemExit) as e:
        main(["case2", "--n", "2"])
    assert e.value.code == 1


def test_fill_failure_exits_2(capsys):
    code, _, err = run(capsys, "cover", "boundary", "--x", "(1 2 3)", "--y", "(1 2)", "--n", "2")
    assert code == 2
    assert "computation failed" in err


def test_no_lifting_power_exits_2(capsys):
    code, _, _ = run(capsys, "case1", "--f", "Dy", "--bound", "1")
    assert code == 2


def test_output_directory_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("BUNDLECOVER_OUT", str(tmp_path))
    code, _, _ = run(capsys, "quotient", "--n", "2", "--json", "sub/q.json")
    assert code == 0
    assert json.loads((tmp_path / "sub" / "q.json").read_text())["group_order"] == 4


def test_same_arguments_same_bytes(capsys):
    _, a, _ = run(capsys, "case2", "--n", "3", "--seed", "3")
    _, b, _ = run(capsys, "case2", "--n", "3", "--seed", "3")
    assert a == b


def test_selftest_single_criterion(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "1")
    d = json.loads(out)
    assert code == 0
    assert list(d["criteria"]) == ["1"]


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "bundlecover.cli", "quotient", "--n", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["verified_orders"] == [4, 4, 2]
