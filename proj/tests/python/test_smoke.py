import json
import math

import numpy as np
import pytest

import sketchks


def test_sketch_quantiles():
    s = sketchks.QuantileSketch(0.01)
    s.insert_many(np.arange(1.0, 10001.0))
    with pytest.raises(sketchks.StateError):
        s.query(0.5)
    s.seal()
    assert s.count == 10000
    assert len(s) < 10000
    for p in (0.01, 0.25, 0.5, 0.99):
        assert abs(s.query(p) - p * 10000) <= 0.01 * 10000 + 1
    assert s.query(1.0) == 10000.0
    lo, hi = s.rank_bounds(5000.0)
    assert lo <= 5000 <= hi


def test_plans():
    plan = sketchks.plan_from_phi(0.05, 10000)
    assert plan.knots == 634
    assert plan.delta == pytest.approx(0.025)
    assert plan.epsilon == pytest.approx(0.0234189, abs=5e-8)
    assert sketchks.num_probs(10000, 0.005, sketchks.eps45(0.005, 10000)) == 1416
    with pytest.raises(ValueError):
        sketchks.plan_from_phi(0.0, 10)


def test_cdf_and_distances():
    x = sketchks.sample("normal(0,1)", 5000, 1)
    y = sketchks.sample("normal(1,1)", 5000, 2)
    px = sketchks.plan_from_phi(0.01, 5000)
    cx = sketchks.build_cdf(x, px)
    cy = sketchks.build_cdf(y, px)
    assert len(cx) == px.knots
    assert np.all(np.diff(cx.probs) > 0)
    assert cx(1e9) == 1.0
    exact = sketchks.exact_ks_distance(x, y)
    approx = sketchks.approx_two_sample_ks(cx, cy)
    assert abs(exact - approx) <= 2 * px.delta


def test_ks_formulas():
    assert sketchks.qks(1.0) == pytest.approx(0.26999967, abs=1e-6)
    assert sketchks.qks(1e-6) == 1.0
    d = sketchks.d_crit(0.05, 10000, 10000)
    assert sketchks.p_value(d, 10000, 10000) == pytest.approx(0.05, abs=1e-8)
    assert sketchks.phi_for_test(0.05, 0.025, 10000, 10000) == pytest.approx(0.000399, abs=5e-6)


def test_run_test_and_json():
    x = sketchks.sample("gamma(0.5,1)", 7000, 3)
    y = sketchks.sample("uniform(0,1)", 7000, 4)
    out = sketchks.run_test(x, y, 0.05, beta=0.025)
    assert out.reject
    assert out.n == 7000 and out.m == 7000
    doc = json.loads(out.to_json())
    assert set(doc) == {"d_ks", "d_error_bound", "p_value", "n", "m", "alpha", "reject"}
    with pytest.raises(ValueError):
        sketchks.run_test(x, y)


def test_lall():
    x = sketchks.sample("normal(0,1)", 10000, 5)
    y = sketchks.sample("normal(1,1)", 10000, 6)
    sx, sy = sketchks.QuantileSketch(0.05 / 6), sketchks.QuantileSketch(0.05 / 6)
    sx.insert_many(x)
    sy.insert_many(y)
    sx.seal()
    sy.seal()
    assert abs(sketchks.lall_ks(sx, sy) - sketchks.exact_ks_distance(x, y)) <= 0.05


def test_sampler_determinism():
    a = sketchks.sample("normal(0,1)", 100, 42)
    b = sketchks.sample("normal(0,1)", 100, 42)
    assert np.array_equal(a, b)
    assert math.isfinite(a.sum())
    with pytest.raises(ValueError):
        sketchks.sample("normal(0,-1)", 10, 1)
