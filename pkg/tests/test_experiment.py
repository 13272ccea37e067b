from dataclasses import replace

import numpy as np
import pytest

from rsportfolio.evaluation import EvalConfig, EvalMatrix, expected_vs_exploiter
from rsportfolio.experiment import evaluate_policies, run_comparison, standard_policies
from rsportfolio.seedmatrix import ResultMatrix, build_matrix


def test_standard_policies_on_a_fixed_matrix():
    m = ResultMatrix(3, [[1, 0, 1], [0, 1, 1], [0, 0, 1]], "0" * 16)
    pols = standard_policies(m)
    assert list(pols) == ["baseline", "bestseed", "nash", "sparsenash@0.5", "sparsenash@0.75", "sparsenash@1"]
    assert pols["baseline"].black == pytest.approx({0: 1 / 3, 1: 1 / 3, 2: 1 / 3})
    assert pols["bestseed"].black in ({0: 1.0}, {1: 1.0})
    assert pols["bestseed"].white == {0: 1.0} or pols["bestseed"].white == {1: 1.0}
    assert sum(pols["nash"].black.values()) == pytest.approx(1.0, abs=1e-12)
    assert set(pols["sparsenash@1"].black) <= set(pols["nash"].black)


def test_comparison_pipeline(tiny_matchup, tmp_path):
    m = build_matrix(tiny_matchup)
    cfg = EvalConfig(heldout_count=4, kprime_list=(1, 2, 4), repetitions=30)
    pols, em, rows = run_comparison(m, tiny_matchup, cfg, journal=tmp_path / "ej")
    assert len(rows) == len(pols) * 3
    assert em.black.shape == (3, 4) and em.white.shape == (3, 4)
    for r in rows:
        assert 0 <= r.mean <= 1
        assert r.mean == pytest.approx((r.as_black + r.as_white) / 2, abs=1e-15)
    by = {(r.method, r.alpha, r.kprime): r for r in rows}
    # pool of 4 with K'=4: every draw is the whole pool, so the sampled value is exact
    assert by["nash", 0.0, 4].mean == pytest.approx(expected_vs_exploiter(pols["nash"], em, 4), abs=1e-12)
    # rerun from the journal: no games, same numbers
    again = run_comparison(m, tiny_matchup, cfg, journal=tmp_path / "ej")[2]
    assert again == rows


def test_common_opponent_draws():
    gen = np.random.default_rng(0)
    em = EvalMatrix([0, 1], [0, 1], list(range(10)), gen.random((2, 10)), gen.random((2, 10)))
    m = ResultMatrix(2, [[1, 0], [0, 1]], "0" * 16)
    pols = standard_policies(m, alphas=())
    cfg = EvalConfig(heldout_count=10, kprime_list=(3,), repetitions=200)
    a = evaluate_policies(pols, em, cfg, 5, 2)
    b = evaluate_policies({"nash": pols["nash"]}, em, cfg, 5, 2)
    assert a[2] == b[0]


def test_fingerprint_mismatch(tiny_matchup):
    m = ResultMatrix(3, np.zeros((3, 3)), "f" * 16)
    with pytest.raises(ValueError):
        run_comparison(m, tiny_matchup, EvalConfig(heldout_count=2, kprime_list=(1,)))
    with pytest.raises(ValueError):
        run_comparison(build_matrix(replace(tiny_matchup, K=2)), tiny_matchup,
                       EvalConfig(heldout_count=2, kprime_list=(1,)))
