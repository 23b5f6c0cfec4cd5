"""One test per acceptance criterion.

Each test prints a ``[PASS]``/``[FAIL]`` line with the measured values and
elapsed time (run with ``-s`` to see them), then asserts with exact integer
or rational comparisons.
"""

import json
import subprocess
import sys
import time
from fractions import Fraction

from bundlecover import acceptance as acc


def _run(number, fn, limit):
    t0 = time.perf_counter()
    res = fn()
    elapsed = time.perf_counter() - t0
    ok = res["passed"] and elapsed < limit
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {acc.CRITERIA[number][0]} "
          f"({elapsed:.1f}s, limit {limit}s)")
    return res, elapsed


def test_criterion_1_figure_cover():
    res, t = _run(1, acc.criterion_1, 1)
    print(f"    degree {res['degree']}, unwrapping {res['unwrapping_degrees']}, genus {res['genus']}, "
          f"H1 {res['h1_dim']}, boundary-killed {res['boundary_killed_dim']}")
    assert res["degree"] == 16
    assert res["unwrapping_degrees"] == [2] * 8
    assert res["genus"] == 5
    assert res["h1_dim"] == 17
    assert res["boundary_killed_dim"] == 10
    assert t < 1


def test_criterion_2_case1_headline():
    res, t = _run(2, acc.criterion_2, 10)
    print(f"    m = {res['power']}, base b1 {res['base_b1']}, cover b1 {res['cover_b1']}, "
          f"I = {res['intersection']}")
    assert res["base_b1"] == {"formula": 1, "oracle": 1}
    assert res["cover_b1"]["formula"] >= 3
    assert res["cover_b1"]["formula"] == res["cover_b1"]["oracle"]
    assert res["intersection"] == 2
    assert res["failed_checks"] == []
    assert t < 10


def test_criterion_3_formula_equals_oracle():
    res, t = _run(3, lambda: acc.criterion_3(seed=0), 120)
    print(f"    {res['agree']}/{len(res['instances'])} agree; rejected {res['rejected']}")
    assert len(res["instances"]) == 50
    assert all(i["degree"] <= 8 for i in res["instances"])
    assert res["agree"] == 50
    assert t < 120


def test_criterion_4_row_lift_suite():
    res, t = _run(4, lambda: acc.criterion_4(seed=0), 120)
    print(f"    {res['ok']}/{len(res['instances'])} tuples lift with the row action")
    assert len(res["instances"]) == 100
    assert all(x["r"] <= 8 for x in res["instances"])
    assert res["ok"] == 100
    assert t < 120


def test_criterion_5_case2_n3():
    res, t = _run(5, lambda: acc.criterion_5(seed=0), 300)
    N = res["quotient"]["group_order"]
    print(f"    N = {N}, orders {res['quotient']['verified_orders']}, fixed dim {res['fixed_dim']}, "
          f"bound {res['dim_bound']}, cycles {res['cycle_counts']}")
    assert res["quotient"]["verified_orders"] == [6, 6, 3]
    assert N <= 2000
    assert res["fixed_dim"] >= 2 + Fraction(N, 3)
    assert res["cycle_counts"] == [N // 6, N // 6, N // 3]
    assert res["failed_checks"] == []
    assert t < 300


def test_criterion_6_several_punctures():
    res, t = _run(6, acc.criterion_6, 600)
    for k in (2, 3):
        r = res[f"k{k}"]
        print(f"    k = {k}: degree {r['degree']}, class rank {r['class_rank']}, "
              f"certified b1 {r['certified_b1']}")
        assert r["class_rank"] == 2 * k
        assert r["certified_b1"] >= 2 * k + 1
        assert r["failed_checks"] == []
    assert t < 600


def test_criterion_7_symplectic():
    res, t = _run(7, lambda: acc.criterion_7(seed=0), 120)
    print(f"    {res['ok']}/{len(res['instances'])} actions preserve the form")
    assert len(res["instances"]) == 100
    assert res["ok"] == 100
    assert t < 120


def test_criterion_8_finite_index_subgroups():
    res, t = _run(8, lambda: acc.criterion_8(seed=0), 120)
    print(f"    {res['ok']}/{len(res['instances'])} subgroups have b1 at least that of the group")
    assert len(res["instances"]) == 25
    assert all(r["index"] <= 12 for r in res["instances"])
    assert res["ok"] == 25
    assert t < 120


def test_criterion_9_reduction_suite():
    res, t = _run(9, lambda: acc.criterion_9(seed=0), 120)
    print(f"    {res['ok']}/{len(res['instances'])} reductions verified")
    assert len(res["instances"]) == 25
    assert all(r["b1_full"] >= r["b1_reduced"] for r in res["instances"])
    assert res["ok"] == 25
    assert t < 120


def test_criterion_10_selftest_is_deterministic():
    cmd = [sys.executable, "-m", "bundlecover.cli", "selftest", "--seed", "0"]
    t0 = time.perf_counter()
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    elapsed = time.perf_counter() - t0
    same = first.stdout == second.stdout
    ok = same and first.returncode == second.returncode == 0
    print(f"[{'PASS' if ok else 'FAIL'}] criterion 10: selftest determinism "
          f"({len(first.stdout)} bytes, {elapsed:.1f}s)")
    assert first.returncode == 0, first.stderr.decode()
    assert second.returncode == 0
    assert same
    assert json.loads(first.stdout)["passed"] is True
