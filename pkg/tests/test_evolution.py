import math

import numpy as np
import pytest

from sympb import (
    DimensionError,
    standard_j,
    PreconditionError,
    QuadraticSaddleModel,
    area_curve,
    capacity_after_evolution,
    default_tau_grid,
    evolved_shape_matrix,
    is_symplectic,
    min_projection_area,
    projection_area,
    radius_scan,
    random_symplectic,
    symplectic_spectrum,
    stm,
)

MODEL = QuadraticSaddleModel(lam=0.7350, omegas=(1.8225, 1.267), e0=-0.9875)


# ---------------------------------------------------------------------------
# stm
# ---------------------------------------------------------------------------


def test_stm_at_zero_is_identity():
    assert np.array_equal(stm(MODEL, 0.0), np.eye(6))


def test_stm_matches_block_formulas():
    t = 0.8
    m = stm(MODEL, t)
    lam, (w2, w3) = MODEL.lam, MODEL.omegas
    n = 3
    # saddle plane (q1, p1)
    assert abs(m[0, 0] - math.cosh(lam * t)) <= 1e-15
    assert abs(m[0, n] - math.sinh(lam * t)) <= 1e-15
    assert abs(m[n, 0] - math.sinh(lam * t)) <= 1e-15
    # bath plane (q2, p2)
    assert abs(m[1, 1] - math.cos(w2 * t)) <= 1e-15
    assert abs(m[1, 1 + n] - math.sin(w2 * t)) <= 1e-15
    assert abs(m[1 + n, 1] + math.sin(w2 * t)) <= 1e-15
    # bath plane (q3, p3)
    assert abs(m[2, 2] - math.cos(w3 * t)) <= 1e-15
    # no cross-plane coupling
    assert m[0, 1] == 0.0 and m[1, 2] == 0.0 and m[2, 0] == 0.0


def test_stm_is_symplectic_over_time_range():
    # The saddle block stores cosh and sinh directly, so the defect of
    # M^T J M - J carries the cancellation noise of cosh^2 - sinh^2,
    # which grows like eps * cosh(lam*t)^2.  Demand the strict 1e-12
    # where float64 can deliver it and the conditioning-aware bound
    # over the full range.
    j = standard_j(3)
    for t in np.linspace(-10 / MODEL.lam, 10 / MODEL.lam, 21):
        m = stm(MODEL, float(t))
        defect = np.max(np.abs(m.T @ j @ m - j))
        arg = MODEL.lam * abs(float(t))
        assert defect <= max(1e-12, 8 * np.finfo(float).eps * math.cosh(arg) ** 2)
        if arg <= 4.0:
            assert is_symplectic(m, tol=1e-12)


def test_stm_group_property():
    a, b = 0.37, 1.21
    lhs = stm(MODEL, a + b)
    rhs = stm(MODEL, a) @ stm(MODEL, b)
    assert np.allclose(lhs, rhs, rtol=0, atol=1e-12)


# ---------------------------------------------------------------------------
# projection_area
# ---------------------------------------------------------------------------


def test_projection_area_unmixed_is_pi_r2_for_all_tau():
    for r in (0.5, 1.0, 2.0):
        for tau in (0.0, 0.5, 2.0):
            a = projection_area(MODEL, r, np.eye(6), tau)
            assert abs(a - math.pi * r * r) <= 1e-12 * math.pi * r * r


def test_projection_area_rejects_bad_radius():
    with pytest.raises(ValueError):
        projection_area(MODEL, 0.0, np.eye(6), 0.0)
    with pytest.raises(ValueError):
        projection_area(MODEL, -1.0, np.eye(6), 0.0)


def test_projection_area_rejects_non_symplectic_mixer():
    with pytest.raises(PreconditionError):
        projection_area(MODEL, 1.0, 2.0 * np.eye(6), 0.0)


def test_projection_area_rejects_wrong_shape():
    with pytest.raises(DimensionError):
        projection_area(MODEL, 1.0, np.eye(4), 0.0)


def test_projection_area_never_below_ball_area():
    taus = np.linspace(0.0, 3.0 / MODEL.lam, 25)
    for i in range(10):
        s = random_symplectic(3, sigma=0.5, seed=77 + i)
        for r in (0.1, 0.4):
            floor = math.pi * r * r
            for tau in taus:
                assert projection_area(MODEL, r, s, float(tau)) >= floor - 1e-9


# ---------------------------------------------------------------------------
# min_projection_area / area_curve
# ---------------------------------------------------------------------------


def test_min_projection_area_unmixed_exact():
    grid = default_tau_grid(MODEL)
    curve = min_projection_area(MODEL, 1.0, np.eye(6), grid)
    assert abs(curve.min_area - math.pi) <= 1e-10 * math.pi
    assert curve.r == 1.0
    assert len(curve.taus) == len(curve.areas) == 600
    assert abs(curve.gromov_scale - math.pi) <= 1e-15


def test_min_projection_area_validates_grid():
    with pytest.raises(ValueError):
        min_projection_area(MODEL, 1.0, np.eye(6), np.array([]))
    with pytest.raises(ValueError):
        min_projection_area(MODEL, 1.0, np.eye(6), np.array([1.0, 0.5]))


def test_min_area_scale_invariant_in_radius():
    s = random_symplectic(3, sigma=0.5, seed=3)
    grid = np.linspace(0.0, 3.0 / MODEL.lam, 80)
    ratios = []
    for r in (0.05, 0.2, 0.8):
        curve = min_projection_area(MODEL, r, s, grid)
        ratios.append(curve.min_area / (math.pi * r * r))
    assert abs(ratios[0] - ratios[1]) <= 1e-12 * ratios[0]
    assert abs(ratios[0] - ratios[2]) <= 1e-12 * ratios[0]


def test_default_tau_grid():
    grid = default_tau_grid(MODEL)
    assert len(grid) == 600
    assert grid[0] == 0.0
    assert abs(grid[-1] - 3.0 / MODEL.lam) <= 1e-15
    assert np.all(np.diff(grid) > 0)


def test_area_curve_report():
    grid = np.linspace(0.0, 1.0, 5)
    rep = area_curve(MODEL, 0.5, np.eye(6), grid)
    assert rep.columns == ("tau", "area")
    assert len(rep.rows) == 5
    for (tau, area), g in zip(rep.rows, grid):
        assert tau == g
        assert abs(area - math.pi * 0.25) <= 1e-12


# ---------------------------------------------------------------------------
# evolved_shape_matrix / capacity_after_evolution
# ---------------------------------------------------------------------------


def test_evolved_shape_matrix_is_symmetric_pd():
    s = random_symplectic(3, sigma=0.5, seed=11)
    m = evolved_shape_matrix(MODEL, 0.7, s, 1.3)
    assert np.array_equal(m, m.T)
    assert np.all(np.linalg.eigvalsh(m) > 0)


def test_capacity_preserved_under_evolution():
    rng = np.random.default_rng(19)
    for i in range(5):
        s = random_symplectic(3, sigma=0.5, seed=19 + i)
        r = float(rng.uniform(0.2, 1.5))
        tau = float(rng.uniform(0.0, 3.0))
        cap = capacity_after_evolution(MODEL, r, s, tau)
        assert abs(cap - math.pi * r * r) <= 1e-8 * math.pi * r * r


def test_evolved_spectrum_top_eigenvalue():
    # the shape matrix of a ball of radius r has every symplectic
    # eigenvalue equal to 1/r^2, and evolution preserves the spectrum
    s = random_symplectic(3, sigma=0.5, seed=23)
    r = 0.6
    m = evolved_shape_matrix(MODEL, r, s, 0.9)
    spec = symplectic_spectrum(m)
    assert np.allclose(spec, 1.0 / r**2, rtol=1e-8)


# ---------------------------------------------------------------------------
# radius_scan
# ---------------------------------------------------------------------------


def test_radius_scan_columns_and_floor():
    rep = radius_scan(MODEL, [0.1, 0.2], s_mix_seed=4, sigma=0.5)
    assert rep.columns == ("r", "min_area", "pi_r2", "c_cand_ref")
    assert len(rep.rows) == 2
    for r, min_area, pi_r2, c_ref in rep.rows:
        assert abs(pi_r2 - math.pi * r * r) <= 1e-15
        assert min_area >= pi_r2 - 1e-9
        assert abs(c_ref - 2.0 * math.pi * 0.9875 / 1.8225) <= 1e-12


def test_radius_scan_unmixed_matches_ball_area():
    rep = radius_scan(MODEL, [0.1, 0.5, 1.0], s_mix_seed=0, sigma=0.0)
    for r, min_area, pi_r2, _ in rep.rows:
        assert abs(min_area - pi_r2) <= 1e-6 * pi_r2


def test_radius_scan_deterministic():
    a = radius_scan(MODEL, [0.3, 0.6], s_mix_seed=8, sigma=0.5)
    b = radius_scan(MODEL, [0.3, 0.6], s_mix_seed=8, sigma=0.5)
    assert a.rows == b.rows
    c = radius_scan(MODEL, [0.3, 0.6], s_mix_seed=9, sigma=0.5)
    assert c.rows != a.rows


def test_radius_scan_validation():
    with pytest.raises(ValueError):
        radius_scan(MODEL, [], s_mix_seed=0)
    with pytest.raises(ValueError):
        radius_scan(MODEL, [0.1, -0.2], s_mix_seed=0)
