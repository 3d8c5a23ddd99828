import math

import numpy as np
import pytest

import rfcover


@pytest.fixture(scope="module")
def small_split():
    cfg = rfcover.ScenarioConfig()
    cfg.n_train = 400
    cfg.n_test = 200
    return rfcover.generate_scenario(cfg)


def test_scenario_shapes(small_split):
    train, test = small_split
    assert len(train) == 400
    assert train.locations.shape == (400, 2)
    assert set(train.labels) == {-1, 0, 1}
    assert rfcover.sigma_heuristic(train, 20) > 0


def test_kernel_estimate():
    fs = rfcover.sample_features(rfcover.KernelKind.GAUSSIAN, 1.0, 10000, 3)
    x, y = np.array([1.0, 2.0]), np.array([1.5, 1.2])
    exact = math.exp(-0.5 * np.sum((x - y) ** 2))
    assert abs(rfcover.approximate_kernel(x, y, fs) - exact) < 0.05
    assert rfcover.kernel_value(rfcover.KernelKind.GAUSSIAN, 1.0, x, y) == pytest.approx(exact)


def test_transform_and_gram():
    rng = np.random.default_rng(0)
    X = rng.uniform(0, 4, size=(30, 2))
    fs = rfcover.sample_orf_features(1.0, 5000, 1)
    Z = rfcover.transform(X, fs)
    assert Z.shape == (30, 10000)
    K = rfcover.gram_matrix(X, rfcover.KernelKind.GAUSSIAN, 1.0)
    assert np.allclose(K, K.T)
    assert np.max(np.abs(Z @ Z.T - K)) < 0.05


def test_ddrf_weights_match_explicit_q():
    rng = np.random.default_rng(1)
    X = rng.uniform(0, 10, size=(40, 2))
    y = np.where(rng.uniform(size=40) < 0.5, -1.0, 1.0)
    pool = rfcover.sample_features(rfcover.KernelKind.GAUSSIAN, 1.0, 30, 2)
    Z = rfcover.transform(X, pool)
    weights, degenerate = rfcover.score_pool(pool, Z, y)
    Q = Z.T @ np.outer(y, y) @ Z
    assert not degenerate
    assert np.max(np.abs(weights - np.diag(Q) / np.trace(Q))) < 1e-12
    top = rfcover.select_top(weights, 5)
    assert list(top) == list(np.argsort(-weights, kind="stable")[:5])

    res = rfcover.ddrf_pipeline(X, y, 5, 30, 1.0, 2)
    assert res["Z"].shape == (40, 5)
    assert list(res["indices"]) == list(top)


def test_train_binary_separable():
    y = np.array([1.0, -1.0, 1.0, -1.0])
    m = rfcover.train_binary(y.reshape(-1, 1), y)
    assert m.theta[0] > 0
    assert np.all(np.sign(m.decision(y.reshape(-1, 1))) == y)


def test_train_method_and_errors(small_split):
    train, test = small_split
    run = rfcover.train_method(rfcover.Method.DDRF, train, 8, sigma=1.0, seed=4)
    assert 0.5 < run.accuracy(test) <= 1.0
    assert run.accuracy(test) == rfcover.evaluate(run, test)
    pred = run.predict(test.locations)
    assert len(pred) == len(test)
    with pytest.raises(ValueError):
        rfcover.train_binary(np.ones((3, 1)), np.ones(3))


def test_small_benchmark_is_deterministic():
    cfg = rfcover.BenchConfig()
    cfg.scenario.n_train = 300
    cfg.scenario.n_test = 100
    cfg.knn_k = 20
    cfg.n_trials = 2
    cfg.m_values = [4]
    cfg.methods = [rfcover.Method.DDRF, rfcover.Method.RKS]
    a = rfcover.run_benchmark(cfg)
    b = rfcover.run_benchmark(cfg)
    assert len(a["rows"]) == 2
    assert [t["accuracy"] for t in a["trials"]] == [t["accuracy"] for t in b["trials"]]
    assert {r["method"] for r in a["rows"]} == {"DDRF", "RKS"}
