import math

import numpy as np
import pytest

import jlopt


def test_basis_and_roles():
    b = jlopt.standard_basis(4)
    assert len(b) == 4 and b.dim == 4
    assert np.array_equal(b.points, np.eye(4))
    assert b.roles == ["basis"] * 4


def test_hard_instance_is_deterministic():
    a = jlopt.hard_instance(6, 30, seed=3)
    assert a == jlopt.hard_instance(6, 30, seed=3)
    assert not (a == jlopt.hard_instance(6, 30, seed=4))
    assert len(a) == 36


def test_identity_certificate():
    cert = jlopt.spectral_certificate(jlopt.identity_map(8))
    assert cert["trace"] == 8.0
    assert cert["frob_sq"] == 8.0
    assert cert["rank_lb"] == 8


def test_rank_bound_matches_numpy():
    a = jlopt.gaussian_map(5, 12, seed=1)
    g = a.matrix.T @ a.matrix
    expected = math.ceil(np.trace(g) ** 2 / np.sum(g * g))
    assert jlopt.spectral_certificate(a)["rank_lb"] == expected


def test_distortion_against_numpy():
    x = jlopt.gaussian_vectors(10, 50, seed=2)
    a = jlopt.gaussian_map(6, 10, seed=5)
    ratios = np.sum((x.points @ a.matrix.T) ** 2, axis=1) / np.sum(x.points**2, axis=1)
    report = jlopt.distortion(a, x, "norm")
    assert report["eps_max"] == pytest.approx(np.max(np.abs(ratios - 1.0)), rel=1e-12)


def test_audit_identity_passes():
    x = jlopt.hard_instance(8, 64, seed=1)
    report = jlopt.lower_bound_audit(jlopt.identity_map(8), x, 0.1)
    assert report["precondition_ok"] and report["rank_bound_ok"]


def test_quantize_budget_and_precondition():
    a = jlopt.gaussian_map(3, 5, seed=7)
    clipped = jlopt.LinearMap(np.clip(a.matrix, -2.0, 2.0))
    q = jlopt.quantize(clipped, 0.01)
    assert jlopt.quantization_error_sq(clipped, q) <= 0.01 / 100
    with pytest.raises(ValueError):
        jlopt.quantize(jlopt.LinearMap(np.zeros((4, 2))), 0.1)


def test_chi_square_matches_closed_form():
    # n = 2: survival function is exp(-x/2).
    assert jlopt.chi_square_sf(2, 3.0) == pytest.approx(math.exp(-1.5), rel=1e-13)


def test_norm_tail_estimate_shape():
    est = jlopt.norm_tail_estimate(20, 1.0, 2.0, 2000, seed=4)
    assert est["trials"] == 2000
    assert 0.0 <= est["p_hat"] <= 1.0


def test_frontier_reaches_zero_at_full_dimension():
    x = jlopt.hard_instance(8, 40, seed=9)
    rows = jlopt.run_frontier(x, [4, 8], restarts=2, seed=1, max_iters=100)
    assert [r["m"] for r in rows] == [4, 8]
    assert rows[-1]["eps_opt"] <= 1e-6
