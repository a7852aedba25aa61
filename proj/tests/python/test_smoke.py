"""Smoke tests for the Python bindings: a few closed forms and invariants."""

import math

import numpy as np
import pytest

import joulewire as jw

T = 2.7


def test_surface_green_band_center():
    g = jw.surface_green(0.0, T)
    assert g == pytest.approx(-1j / T, abs=1e-14)
    assert jw.lead_broadening(0.0, T) == pytest.approx(2 * T, rel=1e-14)
    with pytest.raises(ValueError):
        jw.surface_green(2 * T, T)


def test_single_site_transmission_closed_form():
    gamma_p = 1.3
    model = jw.WireModel(1, T, gamma_p)
    tm = jw.transmission_at(model, 0.0)
    gamma_bar = 2 * T + gamma_p / 2
    assert tm.t[0, 1] == pytest.approx(4 * T**2 / gamma_bar**2, rel=1e-12)
    assert tm.t[0, 2] == pytest.approx(2 * T * gamma_p / gamma_bar**2, rel=1e-12)


def test_greens_bundle_numpy_interop():
    model = jw.WireModel(5, T, 0.8)
    terminals = jw.make_terminals(model, 0.02, -0.02, 150.0)
    bundle = jw.greens_at(model, terminals, 0.1)
    assert bundle.g_retarded.shape == (5, 5)
    a = bundle.spectral
    assert np.allclose(a, a.conj().T, atol=1e-14)
    assert np.linalg.eigvalsh(a).min() >= -1e-12 * np.abs(a).max()


def test_floating_solution_and_report():
    model = jw.WireModel(12, T, T)
    problem = jw.make_floating_problem(model, 0.05, -0.05, 232.0)
    solution = jw.solve_floating_sommerfeld(problem)
    assert solution.mus.shape == (12,)
    assert abs(solution.residual_particle).max() <= 1e-12
    assert (solution.temps >= 232.0 - 1e-9).all()

    report = jw.joule_report(problem, solution)
    assert report.conservation_max_abs() <= 1e-10
    assert report.ratio_defined
    assert 0.0 <= report.ratio <= 1.0
    assert report.power > 0.0


def test_single_probe_oracle_matches_pipeline():
    gamma_p = 2.0 * T
    analytic = jw.single_probe_analytic(T, gamma_p, 0.005, -0.005, 300.0)
    model = jw.WireModel(1, T, gamma_p)
    problem = jw.make_floating_problem(model, 0.005, -0.005, 300.0)
    report = jw.joule_report(problem, jw.solve_floating_sommerfeld(problem))
    assert report.ratio == pytest.approx(analytic.ratio, rel=1e-10)
    assert analytic.ratio <= 0.5


def test_sweep_ratio_monotone():
    spec = jw.SweepSpec()
    spec.t = T
    spec.temp0 = 232.0
    spec.delta_mu = 0.2
    spec.n_values = [1, 2, 4, 8, 16]
    spec.gamma_over_t = [1.0]
    spec.threads = 2
    rows = jw.sweep_ratio(spec)
    ratios = [row.ratio for row in rows]
    assert all(row.ok for row in rows)
    assert ratios == sorted(ratios)
    assert rows[0].ratio <= 0.5


def test_profiles_shape():
    model = jw.WireModel(30, T, T)
    table = jw.profiles(model, 0.05, -0.05, 100.0)
    assert table.mu_monotone
    assert table.interior_maxima == 1
    assert table.mu[0] > table.mu[-1]
    # symmetric about the center
    assert abs(np.asarray(table.mu) + np.asarray(table.mu)[::-1]).max() <= 1e-9


def test_entropy_density_identity():
    state = jw.FermiState(0.0, 100.0)
    kT = jw.K_BOLTZMANN * 100.0
    xs = np.linspace(-40 * kT, 40 * kT, 20001)
    integral = np.trapz([jw.fermi_entropy_density(state, x) for x in xs], xs)
    expected = math.pi**2 / 3 * jw.K_BOLTZMANN**2 * 100.0
    assert integral == pytest.approx(expected, rel=1e-6)
