"""Smoke tests for the python bindings (run against the CMake-built module)."""

import json

import pytest

import shtukalab as sl


@pytest.fixture
def f4():
    return sl.Field(p=2, r=2, m=1, modulus=[1, 1, 1])


def test_field_arithmetic(f4):
    g = f4.parse("g")
    assert f4.str(f4.mul(g, g)) == "g+1"
    assert f4.frob(g, 2) == g
    assert f4.q == 4 and f4.card == 4


def test_field_rejects_reducible_modulus():
    with pytest.raises(sl.ShtukalabError):
        sl.Field(p=2, r=2, m=1, modulus=[1, 0, 1])


def test_drinfeld_dieudonne_roundtrip(f4):
    M = sl.Shtuka(f4, [["0"]])
    G = sl.drinfeld(M)
    assert G.dim == 4
    back = sl.dieudonne(G)
    assert back.rank == 1 and back.matrix == [["0"]]
    assert sl.roundtrip_shtuka(M)


def test_balance_and_profile(f4):
    G = sl.expand(f4, [("x", 1, 4, {})])
    rep = sl.balance_report(G)
    assert rep["balanced"] and rep["prim_ranks"] == [1, 1]
    assert G.eigen_profile() == [1, 1, 1]
    quasi, ranks = sl.quasi_balanced(G)
    assert quasi and ranks == [1, 1, 1]


def test_sseries_21():
    q, coeffs, ranks = sl.s_series(2, 2, [1, 1, 1, 1, 1, 1])
    assert q == 4
    assert coeffs == [1, 6, 15, 20, 15, 6, 1]
    assert ranks == [21, 21, 21]


def test_classify(f4):
    M = sl.Shtuka(f4, [["1", "0"], ["0", "0"]])
    rep = sl.classify(sl.drinfeld(M))
    assert rep["etale_order"] == 4
    assert rep["connected_exponents"] == [1]
    assert rep["constancy_degree"] == 1


def test_point_count(f4):
    constant = sl.expand(f4, [("x", 1, 4, {"x": "1"})])
    assert sl.point_count(constant, 1) == 4
    alpha_q = sl.expand(f4, [("x", 1, 4, {})])
    assert sl.point_count(alpha_q, 1) == 1


def test_dual_and_tensor(f4):
    alpha_p = sl.expand(f4, [("x", 1, 2, {})])
    dual = alpha_p.dual()
    assert dual.dim == 2 and dual.prim_dim() == 1
    prod = alpha_p.tensor(alpha_p)
    assert prod.dim == 4


def test_run_job():
    job = {
        "field": {"p": 2, "r": 2, "m": 1, "modulus": [1, 1, 1]},
        "shtuka": {"dim": 1, "matrix": [["0"]]},
        "cmd": "drinfeld",
    }
    report, code = sl.run_job(json.dumps(job))
    assert code == 0
    assert "result.order=4" in report
    # byte-identical reruns
    assert sl.run_job(json.dumps(job)) == sl.run_job(json.dumps(job))


def test_shtuka_invariants(f4):
    nil = sl.Shtuka(f4, [["0", "1"], ["0", "0"]])
    assert nil.is_nilpotent() and not nil.is_invertible()
    assert nil.cyclic_exponents() == [2]
    assert nil.ss_nil_dims() == (0, 2)
    assert sl.hom_dim(nil, nil) == 2
