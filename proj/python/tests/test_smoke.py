import math

import numpy as np
import pytest

import rfm


def test_catalog():
    names = rfm.list_problems()
    assert "cubic_elliptic_3d" in names and "gray_scott_3d" in names
    info = rfm.describe_problem("gray_scott_3d")
    assert info["components"] == 2 and info["dim"] == 3 and info["has_exact"]


def test_unknown_problem_raises():
    with pytest.raises(rfm.RfmError) as err:
        rfm.describe_problem("no_such_problem")
    assert err.value.code == "UnknownProblem"


def test_sketch_preconditioned_columns_are_orthonormal():
    rng = np.random.default_rng(3)
    j = rng.standard_normal((300, 60))
    b = rfm.count_sketch(j, 3.0, 5)
    assert b.shape == (180, 60)
    r = rfm.thin_qr_r(b)
    assert np.all(np.diag(r) > 0)
    assert np.allclose(r.T @ r, b.T @ b, rtol=0, atol=1e-10 * np.abs(b.T @ b).max())
    qb = b @ np.linalg.inv(r)
    assert np.abs(qb.T @ qb - np.eye(60)).max() < 1e-10
    q = rfm.sketch_precondition(j, gamma=3.0, seed=5)
    assert np.abs(q - j @ np.linalg.inv(r)).max() < 1e-10 * np.abs(q).max()


def test_sketch_too_wide():
    with pytest.raises(rfm.RfmError) as err:
        rfm.count_sketch(np.ones((10, 5)), 3.0, 0)
    assert err.value.code == "SketchTooWide"


def test_lsqr_matches_numpy():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((120, 30))
    b = rng.standard_normal(120)
    out = rfm.lsqr(a, b, eta=1e-12)
    ref = np.linalg.lstsq(a, b, rcond=None)[0]
    assert np.linalg.norm(out["x"] - ref) <= 1e-8 * np.linalg.norm(ref)


def test_exact_solution_and_source():
    u = rfm.exact_solution("cubic_elliptic_3d", [0.5, 0.5, 0.5])
    assert u[0] == pytest.approx(1.0, abs=1e-14)
    assert rfm.source_consistency_residual("helmholtz_cosh_3d", [0.3, 0.6, 0.2]) < 1e-10


def test_system_jacobian_matches_finite_differences():
    sys = rfm.RfmSystem("cubic_elliptic_2d", {"N": "2,2", "Q": "6,6", "J": 10, "seed": 2})
    rng = np.random.default_rng(1)
    u = 0.1 * rng.standard_normal(sys.cols)
    jac = sys.jacobian(u)
    assert jac.shape == (sys.rows, sys.cols)
    for col in (0, 7, sys.cols - 1):
        h = 1e-6
        e = np.zeros(sys.cols)
        e[col] = h
        fd = (sys.residual(u + e) - sys.residual(u - e)) / (2 * h)
        assert np.linalg.norm(fd - jac[:, col]) <= 1e-6 * max(1.0, np.linalg.norm(fd))


def test_solve_and_evaluate():
    sys = rfm.RfmSystem("cubic_elliptic_2d", {"N": "2,2", "Q": "12,12", "J": 60, "seed": 4})
    out = sys.solve("amipn")
    assert out["termination"] == "stagnation"
    hist = out["residual_history"]
    assert all(b <= a for a, b in zip(hist, hist[1:]))
    pts = np.array([[0.3, 0.4], [0.7, 0.2]])
    vals = sys.evaluate(out["u"], pts, [(0, 0, 0), (1, 0, 0)])
    assert vals.shape == (2, 1, 2)
    for p, v in zip(pts, vals[:, 0, 0]):
        assert v == pytest.approx(rfm.exact_solution("cubic_elliptic_2d", list(p))[0], abs=1e-3)


def test_run_experiment_reports_errors():
    rep = rfm.run_experiment(
        {"problem": "cubic_elliptic_2d", "N": [2, 2], "Q": [12, 12], "J": 60, "seed": 4, "eval_grid": "20,20"})
    assert rep["status"] == "ok"
    assert rep["relative_l2"][0] < 1e-3
    bad = rfm.run_experiment({"problem": "cubic_elliptic_2d", "N": [2, 2], "Q": [2, 2], "J": 400})
    assert bad["status"] == "SketchTooWide"
    assert all(math.isnan(e) for e in bad["relative_l2"])


def test_config_errors_raise():
    with pytest.raises(rfm.RfmError):
        rfm.run_experiment({"bogus": 1})


def test_csv_header():
    assert rfm.csv_header(1).endswith("err_l2_c0,err_h1_c0,status")
