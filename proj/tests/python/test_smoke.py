import math

import pytest

import tailsim


def test_pareto_closed_forms():
    assert tailsim.sample_pareto(1.0, 3.0, 0.125) == pytest.approx(2.0)
    assert tailsim.pareto_mean(1.0, 3.0) == pytest.approx(1.5)
    assert tailsim.pareto_mean(2.0, 2.5) == pytest.approx(10.0 / 3.0)


def test_lower_incomplete_gamma():
    assert tailsim.lower_incomplete_gamma(1.0, 2.0) == pytest.approx(1.0 - math.exp(-2.0))
    assert tailsim.lower_incomplete_gamma(3.0, 0.0) == 0.0


def test_service_ccdf_monotone():
    prev = 1.0
    for y in [0.1, 0.5, 1.0, 2.0, 5.0, 20.0]:
        p = tailsim.service_ccdf(1.0, 3.0, 1.0, y)
        assert 0.0 <= p <= prev
        prev = p


def test_pk_mean_waiting():
    assert tailsim.pk_mean_waiting(1.0 / 3.0, 1.0, 3.0, 1.0) == pytest.approx(2.0)


def test_waiting_tail_asymptote_slope():
    p1 = tailsim.waiting_tail_asymptote(0.3, 0.45, 1.0, 3.0, 1.0, 1e4)
    p2 = tailsim.waiting_tail_asymptote(0.3, 0.45, 1.0, 3.0, 1.0, 2e4)
    assert p1 / p2 == pytest.approx(4.0, rel=1e-5)


def test_run_simulation_deterministic():
    kwargs = dict(
        n=2, k=1, mu=[1.0, 1.0],
        file_classes=[(0.4, (1.0, 3.0))],
        horizon=5000, seed=7,
    )
    a = tailsim.run_simulation(**kwargs)
    b = tailsim.run_simulation(**kwargs)
    assert a["latencies"] == b["latencies"]
    assert len(a["latencies"]) == 4500  # post-warmup
    assert all(t > 0 for t in a["latencies"])


def test_run_genie_schema():
    out = tailsim.run_genie(
        n=4, k=2, mu=[1.0] * 4,
        file_classes=[(0.8, (1.0, 3.0))],
        horizon=2000, seed=3,
    )
    assert len(out["waiting_times"]) == 1
    assert len(out["latencies"]) == 1800


def test_unstable_rejected():
    with pytest.raises(RuntimeError):
        tailsim.run_simulation(
            n=1, k=1, mu=[1.0],
            file_classes=[(2.0, (1.0, 3.0))],
            horizon=100, seed=1,
        )


def test_hill_estimator_on_pareto():
    import random

    rng = random.Random(5)
    draws = [1.0 * rng.random() ** (-1.0 / 3.0) for _ in range(200000)]
    est = tailsim.hill_estimator(draws, order_fraction=0.05, seed=1, resamples=50)
    assert est["index_hat"] == pytest.approx(3.0, abs=0.2)
    assert est["ci_low"] <= est["index_hat"] <= est["ci_high"]


def test_verify_tail_index():
    import random

    rng = random.Random(9)
    draws = [1.0 * rng.random() ** (-1.0 / 3.0) for _ in range(100000)]
    good = tailsim.verify_tail_index(draws, predicted=3.0, tolerance=0.25, seed=1)
    assert good["pass"]
    bad = tailsim.verify_tail_index(draws, predicted=2.0, tolerance=0.25, seed=1)
    assert not bad["pass"]


def test_empirical_ccdf():
    x, p = tailsim.empirical_ccdf([1.0, 2.0, 3.0, 4.0], [0.5, 2.5])
    assert p == [1.0, 0.5]
