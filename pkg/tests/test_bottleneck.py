import math

import numpy as np
import pytest

from sympb import (
    BelowSaddleError,
    CnfModel,
    DimensionError,
    QuadraticSaddleModel,
    RootBracketError,
    action_volume_mc,
    builtin_cnf,
    candidate_width,
    energy_scan,
    flux_quadratic_exact,
    j_max_cnf,
    j_max_quadratic,
)

E0 = -0.9875


def linear_cnf(lam, omegas, e0):
    """CnfModel with the same content as QuadraticSaddleModel(lam, omegas, e0)."""
    nb = len(omegas)
    zero = (0,) * nb
    terms = [(0, zero, e0), (1, zero, lam)]
    for k, w in enumerate(omegas):
        unit = tuple(1 if i == k else 0 for i in range(nb))
        terms.append((0, unit, w))
    return CnfModel(e0=e0, terms=tuple(terms))


def alpha_model(omega2, alpha, e0=0.0, lam=1.0):
    """K = e0 + lam*I + omega2*J2 + alpha*J2^2."""
    return CnfModel(
        e0=e0,
        terms=((0, (0,), e0), (1, (0,), lam), (0, (1,), omega2), (0, (2,), alpha)),
    )


# ---------------------------------------------------------------------------
# j_max_quadratic
# ---------------------------------------------------------------------------


def test_j_max_quadratic_builtin_frequency():
    model = QuadraticSaddleModel(lam=1.0, omegas=(1.8225,), e0=0.0)
    assert j_max_quadratic(model, 1.8225, 2) == 1.0


def test_j_max_quadratic_unit_excess():
    model = QuadraticSaddleModel(lam=0.5, omegas=(2.0, 0.7), e0=-1.0)
    for k, w in ((2, 2.0), (3, 0.7)):
        assert abs(j_max_quadratic(model, -1.0 + w, k) - 1.0) <= 1e-15


def test_j_max_quadratic_direct_division():
    model = QuadraticSaddleModel(lam=1.0, omegas=(2.0, 1.0), e0=0.0)
    assert j_max_quadratic(model, 1.0, 2) == 0.5
    assert j_max_quadratic(model, 1.0, 3) == 1.0


def test_j_max_quadratic_below_saddle():
    model = QuadraticSaddleModel(lam=1.0, omegas=(1.0,), e0=0.0)
    with pytest.raises(BelowSaddleError):
        j_max_quadratic(model, 0.0, 2)
    with pytest.raises(BelowSaddleError):
        j_max_quadratic(model, -0.5, 2)


def test_mode_index_validation():
    model = QuadraticSaddleModel(lam=1.0, omegas=(1.0,), e0=0.0)
    for bad in (1, 3, 0):
        with pytest.raises(DimensionError):
            j_max_quadratic(model, 1.0, bad)
    cnf = builtin_cnf(2)
    with pytest.raises(DimensionError):
        j_max_cnf(cnf, 0.0, 3)


# ---------------------------------------------------------------------------
# j_max_cnf
# ---------------------------------------------------------------------------


def test_j_max_cnf_builtin_linear_on_ds():
    # b2 multiplies I*J2, so K(0, J2) is linear and the root is (E - E0)/omega2.
    model = builtin_cnf(2)
    assert abs(j_max_cnf(model, 0.8350, 2) - 1.0) <= 1e-10


def test_j_max_cnf_quadratic_action_closed_form():
    # K = E0 + J2 + 0.5*J2^2 at excess energy 1.5: root (-1 + sqrt(4))/1 = 1.
    model = alpha_model(omega2=1.0, alpha=0.5)
    assert abs(j_max_cnf(model, 1.5, 2) - 1.0) <= 1e-10


def test_j_max_cnf_alpha_sweep_matches_closed_form():
    for alpha in (2.0, 0.5, 0.1, 1e-3):
        model = alpha_model(omega2=1.3, alpha=alpha)
        for de in (0.2, 1.0, 4.0):
            root = (-1.3 + math.sqrt(1.3**2 + 4 * alpha * de)) / (2 * alpha)
            assert abs(j_max_cnf(model, de, 2) - root) <= 1e-10 * root


def test_j_max_cnf_small_alpha_limit():
    model = alpha_model(omega2=1.3, alpha=1e-8)
    de = 1.0
    assert abs(j_max_cnf(model, de, 2) - de / 1.3) <= 1e-6


def test_j_max_cnf_below_saddle():
    model = builtin_cnf(2)
    with pytest.raises(BelowSaddleError):
        j_max_cnf(model, E0, 2)


def test_j_max_cnf_selects_smallest_root():
    # K(0,J) = J - 0.01 J^2; at E = 16 the roots are J = 20 and J = 80.
    model = alpha_model(omega2=1.0, alpha=-0.01)
    assert abs(j_max_cnf(model, 16.0, 2) - 20.0) <= 1e-9


def test_j_max_cnf_no_root_raises():
    # K(0,J) = J - 0.01 J^2 tops out at 25; no root of K = 30 exists.
    model = alpha_model(omega2=1.0, alpha=-0.01)
    with pytest.raises(RootBracketError):
        j_max_cnf(model, 30.0, 2)


# ---------------------------------------------------------------------------
# candidate_width
# ---------------------------------------------------------------------------


def test_candidate_width_3dof_reference_value():
    model = QuadraticSaddleModel(lam=0.7350, omegas=(1.8225, 1.267), e0=E0)
    rep = candidate_width(model, 0.0)
    expected = 2.0 * math.pi * 0.9875 / 1.8225
    assert abs(rep.c_cand - expected) <= 1e-12 * expected
    assert rep.limiting_mode == 2
    assert rep.j_max == (0.9875 / 1.8225, 0.9875 / 1.267)


def test_candidate_width_2dof_formula():
    model = QuadraticSaddleModel(lam=0.7350, omegas=(1.8225,), e0=E0)
    for e in (0.0, 0.5, 2.0):
        rep = candidate_width(model, e)
        assert abs(rep.c_cand - 2.0 * math.pi * (e - E0) / 1.8225) <= 1e-12


def test_candidate_width_tie_breaks_to_lowest_mode():
    model = QuadraticSaddleModel(lam=1.0, omegas=(1.0, 1.0), e0=0.0)
    assert candidate_width(model, 1.0).limiting_mode == 2


def test_candidate_width_rejects_unknown_model():
    with pytest.raises(TypeError):
        candidate_width(object(), 1.0)


def test_candidate_width_oracle_equivalence():
    rng = np.random.default_rng(29)
    for _ in range(20):
        nb = int(rng.integers(1, 4))
        lam = float(rng.uniform(0.2, 2.0))
        omegas = tuple(rng.uniform(0.3, 3.0, size=nb))
        e0 = float(rng.uniform(-2.0, 0.0))
        e = e0 + float(rng.uniform(0.1, 5.0))
        quad = QuadraticSaddleModel(lam=lam, omegas=omegas, e0=e0)
        cnf = linear_cnf(lam, omegas, e0)
        for k in range(2, nb + 2):
            a = j_max_quadratic(quad, e, k)
            b = j_max_cnf(cnf, e, k)
            assert abs(a - b) <= 1e-10 * a


def test_j_max_and_width_monotone_in_energy():
    model = builtin_cnf(3)
    energies = np.linspace(E0 + 0.05, E0 + 4.0, 60)
    reports = [candidate_width(model, float(e)) for e in energies]
    for prev, cur in zip(reports, reports[1:]):
        assert cur.c_cand >= prev.c_cand
        for a, b in zip(prev.j_max, cur.j_max):
            assert b >= a


def test_candidate_width_scaling_linear_in_excess():
    model = QuadraticSaddleModel(lam=1.0, omegas=(1.8225, 1.267), e0=-1.0)
    base = candidate_width(model, -1.0 + 0.7).c_cand
    for s in (0.5, 2.0, 7.0):
        scaled = candidate_width(model, -1.0 + s * 0.7).c_cand
        assert abs(scaled - s * base) <= 1e-12 * scaled


# ---------------------------------------------------------------------------
# flux: exact simplex and Monte Carlo
# ---------------------------------------------------------------------------


def test_flux_exact_2dof():
    model = QuadraticSaddleModel(lam=1.0, omegas=(1.8225,), e0=0.0)
    rep = flux_quadratic_exact(model, 1.8225)
    assert rep.volume == 1.0
    assert abs(rep.flux - 2.0 * math.pi) <= 1e-15
    assert rep.std_error == 0.0


def test_flux_exact_3dof_triangle():
    model = QuadraticSaddleModel(lam=1.0, omegas=(1.0, 1.0), e0=0.0)
    rep = flux_quadratic_exact(model, 1.0)
    assert rep.volume == 0.5
    assert abs(rep.flux - 2.0 * math.pi**2) <= 1e-14


def test_flux_exact_at_saddle_energy():
    model = QuadraticSaddleModel(lam=1.0, omegas=(1.0,), e0=0.25)
    rep = flux_quadratic_exact(model, 0.25)
    assert rep.volume == 0.0 and rep.flux == 0.0


def test_mc_at_saddle_energy_is_zero():
    rep = action_volume_mc(builtin_cnf(2), E0, samples=100, seed=0)
    assert rep.volume == 0.0 and rep.flux == 0.0 and rep.std_error == 0.0


def test_mc_below_saddle_raises():
    with pytest.raises(BelowSaddleError):
        action_volume_mc(builtin_cnf(2), E0 - 0.1, samples=10, seed=0)


def test_mc_rejects_bad_sample_count():
    with pytest.raises(ValueError):
        action_volume_mc(builtin_cnf(2), 0.0, samples=0, seed=0)


def test_mc_linear_2dof_is_exact():
    # The admissible set fills the whole bounding interval, so every sample
    # hits and the estimate collapses to the box length.
    cnf = linear_cnf(1.0, (1.8225,), 0.0)
    quad = QuadraticSaddleModel(lam=1.0, omegas=(1.8225,), e0=0.0)
    mc = action_volume_mc(cnf, 1.0, samples=10_000, seed=5)
    exact = flux_quadratic_exact(quad, 1.0)
    assert mc.std_error == 0.0
    assert abs(mc.volume - exact.volume) <= 1e-11 * exact.volume
    assert abs(mc.flux - exact.flux) <= 1e-11 * exact.flux


def test_mc_matches_simplex_on_seed_suite():
    cnf = linear_cnf(0.7, (1.3, 0.8), -0.5)
    quad = QuadraticSaddleModel(lam=0.7, omegas=(1.3, 0.8), e0=-0.5)
    exact = flux_quadratic_exact(quad, 1.0)
    for seed in range(20):
        mc = action_volume_mc(cnf, 1.0, samples=100_000, seed=seed)
        assert abs(mc.volume - exact.volume) <= 3.0 * mc.std_error


def test_mc_standard_error_scaling():
    cnf = linear_cnf(0.7, (1.3, 0.8), -0.5)
    errs = {}
    for n in (10_000, 100_000, 1_000_000):
        errs[n] = action_volume_mc(cnf, 1.0, samples=n, seed=9).std_error
    # std_error * sqrt(n) should be flat within 20 percent
    ref = errs[10_000] * math.sqrt(10_000)
    for n in (100_000, 1_000_000):
        assert abs(errs[n] * math.sqrt(n) - ref) <= 0.2 * ref


def test_mc_deterministic_per_seed():
    model = builtin_cnf(3)
    a = action_volume_mc(model, 0.5, samples=70_000, seed=123)
    b = action_volume_mc(model, 0.5, samples=70_000, seed=123)
    assert a == b
    c = action_volume_mc(model, 0.5, samples=70_000, seed=124)
    assert c.volume != a.volume


# ---------------------------------------------------------------------------
# energy_scan
# ---------------------------------------------------------------------------


def test_energy_scan_single_row():
    report = energy_scan(builtin_cnf(2), 0.0, 0.0, steps=1, samples=1000, seed=7)
    assert len(report.rows) == 1
    assert report.columns == (
        "E", "J_max_2", "c_cand", "limiting_mode", "V", "phi", "std_error", "seed",
    )


def test_energy_scan_rows_and_seeds():
    report = energy_scan(builtin_cnf(3), 0.0, 1.0, steps=5, samples=2000, seed=40)
    assert len(report.rows) == 5
    assert report.columns[:3] == ("E", "J_max_2", "J_max_3")
    seeds = [row[-1] for row in report.rows]
    assert seeds == [40, 41, 42, 43, 44]
    c_cands = [row[3] for row in report.rows]
    assert c_cands == sorted(c_cands)


def test_energy_scan_validation():
    with pytest.raises(ValueError):
        energy_scan(builtin_cnf(2), 0.0, 1.0, steps=0, samples=10, seed=0)
    with pytest.raises(ValueError):
        energy_scan(builtin_cnf(2), 1.0, 0.0, steps=2, samples=10, seed=0)
    with pytest.raises(BelowSaddleError):
        energy_scan(builtin_cnf(2), E0 - 1.0, 0.0, steps=2, samples=10, seed=0)
