import numpy as np
import pytest
from oracles import oracle_solve_qp, qp_value, random_qp_instance

from wrenchguard.qp import QPResult, kkt_residual, solve_qp


def test_unconstrained_closed_form():
    d = np.array([1.0, 2.0, 4.0])
    c = np.array([2.0, -8.0, 1.0])
    res = solve_qp(d, c)
    assert res.status == "optimal"
    # stationarity of sum(d x^2) + c.x  =>  x = -c / (2 d)
    assert np.allclose(res.x, -c / (2.0 * d), atol=1e-12)
    assert res.kkt_residual <= 1e-8
    assert res.active_set == ()


def test_flat_slack_with_lower_bound():
    # min s  s.t.  -s <= 0  -> s = 0 with multiplier 1
    res = solve_qp([0.0], [1.0], [[-1.0]], [0.0])
    assert res.status == "optimal"
    assert abs(res.x[0]) <= 1e-12
    assert res.multipliers[0] == pytest.approx(1.0, abs=1e-10)
    assert res.active_set == (0,)
    assert res.kkt_residual <= 1e-8


def test_active_bound_shifts_solution():
    # pull toward x = 2 but cap at x <= 1
    res = solve_qp([1.0], [-4.0], [[1.0]], [1.0])
    assert res.x[0] == pytest.approx(1.0, abs=1e-10)
    # stationarity: 2x - 4 + mu = 0  =>  mu = 2
    assert res.multipliers[0] == pytest.approx(2.0, abs=1e-8)


def test_infeasible_pair_detected():
    res = solve_qp([1.0], [0.0], [[1.0], [-1.0]], [-1.0, -1.0])  # x <= -1 and x >= 1
    assert res.status == "infeasible"
    assert np.isnan(res.value)


def test_zero_row_vacuous_and_violated():
    ok = solve_qp([1.0], [2.0], [[0.0]], [5.0])
    assert ok.status == "optimal"
    assert ok.x[0] == pytest.approx(-1.0, abs=1e-12)
    bad = solve_qp([1.0], [2.0], [[0.0]], [-0.5])  # 0 <= -0.5 can never hold
    assert bad.status == "infeasible"


def test_unbounded_raises():
    with pytest.raises(ValueError):
        solve_qp([0.0, 1.0], [1.0, 0.0])  # flat coordinate, no bound
    with pytest.raises(ValueError):
        # the single row does not block the descent direction
        solve_qp([0.0], [-1.0], [[-1.0]], [0.0])


def test_negative_curvature_rejected():
    with pytest.raises(ValueError):
        solve_qp([-1.0], [0.0])


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        solve_qp([1.0, 1.0], [0.0])
    with pytest.raises(ValueError):
        solve_qp([1.0], [0.0], [[1.0]], [0.0, 0.0])


def test_row_scaling_invariance():
    rng = np.random.default_rng(21)
    d, c, A, b, _ = random_qp_instance(rng)
    while A.shape[0] == 0:
        d, c, A, b, _ = random_qp_instance(rng)
    base = solve_qp(d, c, A, b)
    scale = rng.uniform(0.05, 50.0, A.shape[0])
    scaled = solve_qp(d, c, A * scale[:, None], b * scale)
    assert base.status == scaled.status == "optimal"
    assert np.allclose(base.x, scaled.x, atol=1e-9)
    # multipliers transform inversely with the row scale
    assert np.allclose(base.multipliers, scaled.multipliers * scale, atol=1e-7)


def test_determinism_bit_identical():
    rng = np.random.default_rng(22)
    d, c, A, b, _ = random_qp_instance(rng)
    r1 = solve_qp(d.copy(), c.copy(), A.copy(), b.copy())
    r2 = solve_qp(d.copy(), c.copy(), A.copy(), b.copy())
    assert np.all(r1.x == r2.x)
    assert r1.value == r2.value
    assert r1.active_set == r2.active_set
    assert np.all(r1.multipliers == r2.multipliers)


def test_duplicate_rows_are_harmless():
    d = [1.0, 1.0]
    c = [-2.0, 0.0]
    A = [[1.0, 0.0], [1.0, 0.0], [2.0, 0.0]]  # same halfspace three ways
    b = [0.5, 0.5, 1.0]
    res = solve_qp(d, c, A, b)
    assert res.status == "optimal"
    assert res.x[0] == pytest.approx(0.5, abs=1e-10)
    assert res.kkt_residual <= 1e-8


def test_corner_of_box():
    # cost pulls to (3, 3); box caps both coordinates at 1
    res = solve_qp([1.0, 1.0], [-6.0, -6.0], [[1, 0], [0, 1], [-1, 0], [0, -1]], [1, 1, 0, 0])
    assert np.allclose(res.x, [1.0, 1.0], atol=1e-10)
    assert res.active_set == (0, 1)


def test_random_family_matches_enumeration_oracle():
    rng = np.random.default_rng(23)
    strict_checked = 0
    for _ in range(120):
        d, c, A, b, x0 = random_qp_instance(rng)
        res = solve_qp(d, c, A, b)
        assert res.status == "optimal"
        assert res.kkt_residual <= 1e-8
        assert np.all(res.multipliers >= 0.0)
        if A.shape[0]:
            assert float(np.max(A @ res.x - b)) <= 1e-8
        oracle = oracle_solve_qp(d, c, A, b)
        assert oracle is not None
        assert res.value == pytest.approx(oracle[1], abs=1e-6, rel=1e-6)
        if A.shape[0] and np.min(d) > 0.0:
            assert np.allclose(res.x, oracle[0], atol=1e-5)
            strict_checked += 1
    assert strict_checked > 20


def test_random_infeasible_family_detected():
    rng = np.random.default_rng(24)
    for _ in range(40):
        n = int(rng.integers(1, 5))
        a = rng.standard_normal(n)
        while np.linalg.norm(a) < 0.1:
            a = rng.standard_normal(n)
        gap = float(rng.uniform(0.1, 3.0))
        # a.x <= t and -a.x <= -t - gap cannot both hold
        t = float(rng.uniform(-2.0, 2.0))
        A = np.vstack([a, -a])
        b = np.array([t, -t - gap])
        extra_m = int(rng.integers(0, 4))
        if extra_m:
            A = np.vstack([A, rng.standard_normal((extra_m, n))])
            b = np.concatenate([b, rng.uniform(0.5, 2.0, extra_m)])
        res = solve_qp(rng.uniform(0.1, 2.0, n), rng.uniform(-1, 1, n), A, b)
        assert res.status == "infeasible"


def test_certificate_function_flags_bad_points():
    d = np.array([1.0])
    c = np.array([-4.0])
    A = np.array([[1.0]])
    b = np.array([1.0])
    good = kkt_residual(d, c, A, b, np.array([1.0]), np.array([2.0]))
    bad = kkt_residual(d, c, A, b, np.array([0.3]), np.array([0.0]))
    assert good <= 1e-12
    assert bad > 1.0  # stationarity residual |2*0.3 - 4| = 3.4


def test_value_field_matches_objective():
    rng = np.random.default_rng(25)
    for _ in range(20):
        d, c, A, b, _ = random_qp_instance(rng)
        res = solve_qp(d, c, A, b)
        assert res.value == pytest.approx(qp_value(d, c, res.x), abs=1e-12)


def test_result_is_dataclass_with_expected_fields():
    res = solve_qp([1.0], [0.0])
    assert isinstance(res, QPResult)
    for name in ("x", "value", "status", "active_set", "multipliers", "kkt_residual", "iterations"):
        assert hasattr(res, name)
