import json
import math

import numpy as np
import pytest

import saddleflow as sf


def test_penalty_and_conjugate():
    l2 = sf.PenaltySpec.norm(2, 1.5)
    assert sf.penalty(l2, np.array([3.0, 4.0])) == pytest.approx(7.5)
    assert sf.conjugate(l2, np.array([0.3, -0.4])) == 0.0
    assert math.isinf(sf.conjugate(l2, np.array([2.0, 0.0])))
    linf = sf.PenaltySpec.norm("inf", 1.0)
    assert linf.q == sf.NormKind.Linf
    with pytest.raises(ValueError):
        sf.PenaltySpec.norm(3, 1.0)
    assert sf.huber(1.0, 1.0, 0.5) == pytest.approx(0.125)


def test_projection_lands_in_the_ball():
    l1 = sf.PenaltySpec.norm(1, 1.0)  # dual domain is the box [-1, 1]^m
    out = sf.project_dual(l1, np.array([3.0, -0.2, -7.0]))
    np.testing.assert_allclose(out, [1.0, -0.2, -1.0])
    l2 = sf.PenaltySpec.norm(2, 2.0)
    assert np.linalg.norm(sf.project_dual(l2, np.array([3.0, 4.0]))) == pytest.approx(2.0)


def test_round_and_argmax():
    r = sf.Round(np.eye(2), np.zeros(2), np.array([0.5, 2.0]))
    np.testing.assert_array_equal(sf.primal_argmax(r, np.zeros(2)), [0.0, 1.0])
    # a dual price above the reward leaves the slack as the best choice
    np.testing.assert_array_equal(sf.primal_argmax(r, np.array([1.0, 3.0])), [0.0, 0.0])
    assert r.blocks == [0, 2]


def test_online_offline_and_bound():
    data = sf.generate(m=5, d=4, T=50, seed=3)
    assert len(data) == 50
    spec = sf.PenaltySpec.huber(1.0, 1.0)
    schedule = sf.default_schedule(data, spec)
    assert schedule.mode == sf.DualMode.StronglyConvex
    trace = sf.run_algorithm1(data, spec)
    assert len(trace) == 50
    offline = sf.solve_offline(data, spec, tol=1e-5)
    assert offline.gap >= -1e-9
    assert offline.d_value >= sf.eval_primal(data, spec, trace.actions()) - 1e-9
    report = sf.bound_components(trace, data, spec, schedule, offline)
    assert report.within_bound()
    assert report.total == pytest.approx(report.r_t + report.s_e + report.s_a)
    alg2 = sf.run_algorithm2(data, spec)
    assert alg2.rounds[0].a_hat.shape == (5, 4)
    baseline = sf.run_additive_baseline(data, spec, inner_iters=50)
    assert baseline.rounds[0].lambda_hat.size == 0


def test_dataset_round_trip(tmp_path):
    data = sf.generate(m=2, d=3, T=4, seed=1, distribution=sf.Distribution.Cauchy)
    path = tmp_path / "rounds.jsonl"
    sf.save_dataset(path, data)
    back = sf.load_dataset(path)
    for a, b in zip(data, back):
        np.testing.assert_array_equal(a.a, b.a)
        np.testing.assert_array_equal(a.u, b.u)
    (tmp_path / "bad.jsonl").write_text("{}\n")
    with pytest.raises(sf.DatasetError):
        sf.load_dataset(tmp_path / "bad.jsonl")


def test_run_config_matches_itself():
    config = json.dumps({
        "penalty": {"kind": "norm", "q": 1, "r_lambda": 1.0},
        "generator": {"m": 4, "d": 5, "T": 30, "seed": 2},
    })
    first = sf.run_config(config)
    assert first == sf.run_config(config)
    assert first["summary"].startswith("reward=")
    assert len(first["trace_jsonl"].splitlines()) == 30
    assert json.loads(first["report_json"])["bound"]
    with pytest.raises(sf.ConfigError):
        sf.run_config('{"penalty": {}}')


def test_validate():
    passed, text = sf.validate()
    assert passed
    assert "FAIL" not in text
