import json
import os
import subprocess

import pytest

import qpt


def diagonal(p, k, n, d):
    return qpt.make_form(p, k, n, d, [([d if j == i else 0 for j in range(n)], 1) for i in range(n)])


def test_golden_bounds():
    expected = {2: 300509, 3: 520329, 5: 4562911, 7: 180164, 11: 348497, 13: 179592}
    for p, v in expected.items():
        assert qpt.v5_bound(p)["bound"] == v
    assert qpt.wooley_v5(11)["bound"] == 6792217044067
    assert qpt.overall_v5() == 4562911
    assert qpt.corollary_bounds(7) == (19, 119)


def test_bound_chains():
    assert qpt.evaluate_v("15,20,25", 2, "hb")["bound"] == 300509
    assert qpt.evaluate_v([1, 1, 0], 7, "newresult")["bound"] == 19
    assert qpt.u_bound(1842300, 11)[0] == 6788134895392
    with pytest.raises(ValueError):
        qpt.evaluate_v([1, 0, 0], 3, "newresult")
    with pytest.raises(OverflowError):
        qpt.evaluate_v([10**12, 0, 0, 0, 0], 11, "wooley")


def test_search_and_lift():
    f = diagonal(2, 1, 3, 5)
    assert qpt.find_nonsingular_zero(f) == ([0, 1, 1], 1)
    lifted = qpt.lift_point(f, [0, 1, 1], 3)
    assert qpt.evaluate(qpt.make_form(2, 3, 3, 5, [(e["exps"], 1) for e in f["terms"]]), lifted["point"]) == 0
    assert qpt.find_nonsingular_zero(qpt.make_form(3, 1, 3, 5, [([5, 0, 0], 1)])) is None

    g = diagonal(5, 2, 6, 5)
    assert qpt.check_result3_witness(g, [1, 4, 0, 0, 0, 0], 0)
    point, index = qpt.find_result3_witness(g)
    assert qpt.check_result3_witness(g, point, index)
    out = qpt.lift_result3(g, point, index, 6)
    big = qpt.make_form(5, 6, 6, 5, [(e["exps"], 1) for e in g["terms"]])
    assert qpt.evaluate(big, out["point"]) == 0


def test_hensel():
    assert qpt.hensel_lift(7, [-2, 0, 1], 3, 3) == 108
    assert qpt.hensel_lift(5, [25, 5], 0, 2, a3=True) == 20
    with pytest.raises(ArithmeticError):
        qpt.hensel_lift(7, [-2, 0, 1], 2, 3)


def test_verify():
    r = qpt.verify("r1star", 7)
    assert r["forms_checked"] == 2401
    assert r["counterexamples"] == []
    assert qpt.space_size("r2", 11) == str(5**4 * 11**9)
    a = qpt.verify("r3", 5, "sample", 200, 42, 4, 2)
    b = qpt.verify("r3", 5, "sample", 200, 42, 4, 1)
    assert a == b
    assert a["counterexamples"] == []
    with pytest.raises(ValueError):
        qpt.verify("r3", 7)


@pytest.mark.skipif("QPT_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_matches_module():
    out = subprocess.run([os.environ["QPT_CLI"], "bounds", "--prime", "5", "--format", "json"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["bound"] == qpt.v5_bound(5)["bound"]
