"""Drive field, polarizability transform, and spectrum pipeline checks."""

import csv

import numpy as np
import pytest

import plexsim.spectra as spectra
from plexsim import (
    build_basis,
    default_parameters,
    polarizability,
    run_spectrum_scenario,
    spectrum_pipeline,
)
from plexsim.constants import DEBYE_AU_TO_EV, convert_cross_section
from plexsim.drive import DriveSpec, field_at
from plexsim.errors import InsufficientPropagationError, InvalidArgumentError
from plexsim.spectra import spectrum_from_series, write_spectrum_csv


@pytest.fixture
def pulse():
    return DriveSpec(E_L=2e-7, omega_L=2.042, t_c=50.0, tau_L=10.0)


def test_field_at_pulse_center(pulse):
    expected = pulse.E_L * np.cos(pulse.omega_L * pulse.t_c / 0.6582119569)
    assert field_at(pulse, pulse.t_c) == pytest.approx(expected, rel=1e-12)


def test_envelope_tail_negligible(pulse):
    t = pulse.t_c + 5 * pulse.tau_L
    peak_env = abs(pulse.E_L)
    # envelope at 5 widths is below 1.4e-11 of the peak
    env = abs(field_at(pulse, t) / np.cos(pulse.omega_L * t / 0.6582119569))
    assert env < 1.4e-11 * peak_env


def test_cw_envelope_is_unity(pulse):
    cw = DriveSpec(E_L=pulse.E_L, omega_L=pulse.omega_L, cw_mode=True)
    for t in (0.0, 17.3, 431.0, 2499.0):
        assert abs(field_at(cw, t)) == pytest.approx(
            pulse.E_L * abs(np.cos(cw.carrier_rad_per_fs * t)), rel=1e-12
        )


def test_drive_validation():
    with pytest.raises(InvalidArgumentError):
        DriveSpec(E_L=-1.0, omega_L=2.0)
    with pytest.raises(InvalidArgumentError):
        DriveSpec(E_L=1.0, omega_L=2.0, tau_L=0.0)
    DriveSpec(E_L=1.0, omega_L=2.0, tau_L=0.0, cw_mode=True)  # fine in cw


def _pulse_series(pulse, t_end=400.0, dt=0.25):
    t = np.arange(0.0, t_end, dt)
    return t, field_at(pulse, t)


def test_polarizability_linear_response_identity(pulse):
    t, field = _pulse_series(pulse)
    k = 3.7
    omega = np.arange(1.9, 2.2, 0.001)
    alpha, masked = polarizability(k * field, field, t, omega, n_med=1.5)
    good = ~masked
    assert good.any()
    assert np.allclose(alpha[good], k / np.sqrt(1.5), rtol=1e-9)


def test_polarizability_time_shift_invariance(pulse):
    t, field = _pulse_series(pulse)
    mu = 2.0 * field + np.gradient(field)  # any linear functional of the drive
    omega = np.arange(1.95, 2.15, 0.001)
    a1, m1 = polarizability(mu, field, t, omega, n_med=1.5)
    a2, m2 = polarizability(mu, field, t + 137.0, omega, n_med=1.5)
    assert np.array_equal(m1, m2)
    good = ~m1
    assert np.max(np.abs(a1[good] - a2[good])) / np.max(np.abs(a1[good])) < 1e-8


def test_polarizability_masks_out_of_band_points(pulse):
    t, field = _pulse_series(pulse)
    omega = np.array([0.2, 2.042, 6.0])
    with pytest.warns(UserWarning, match="masked"):
        alpha, masked = polarizability(field, field, t, omega, n_med=1.0)
    assert bool(masked[0]) and bool(masked[2])
    assert not masked[1]
    assert alpha[0] == 0.0


def test_polarizability_requires_decayed_dipole(pulse):
    t, field = _pulse_series(pulse)
    mu = np.ones_like(field)
    with pytest.raises(InsufficientPropagationError):
        polarizability(mu, field, t, np.array([2.0]), n_med=1.0)


def test_polarizability_grid_validation(pulse):
    t, field = _pulse_series(pulse)
    with pytest.raises(InvalidArgumentError):
        polarizability(field, field, t**1.01, np.array([2.0]), n_med=1.0)
    # beyond the Nyquist limit of the record grid
    with pytest.raises(InvalidArgumentError):
        polarizability(field, field, t, np.array([9.0]), n_med=1.0)


def test_zero_field_all_masked(pulse):
    t = np.arange(0.0, 100.0, 0.25)
    with pytest.warns(UserWarning, match="masked"):
        alpha, masked = polarizability(np.zeros_like(t), np.zeros_like(t), t,
                                       np.array([2.0, 2.1]), n_med=1.0)
    assert masked.all()
    assert np.all(alpha == 0.0)


def test_plasmon_only_lorentzian_closed_form():
    params = default_parameters(1).with_overrides(g=(0.0,), d0=0.0)
    basis = build_basis(1, 5)
    _, spec = spectrum_pipeline(
        params, basis, "nonhermitian", None, t_end=800.0, dt=0.005, record_dt=0.5
    )
    w = spec.omega
    closed = (
        DEBYE_AU_TO_EV * params.d_pl**2 / np.sqrt(params.n_med)
        * (
            1.0 / (params.omega_pl - w - 0.5j * params.gamma_pl)
            + 1.0 / (params.omega_pl + w + 0.5j * params.gamma_pl)
        )
    )
    sigma_closed = convert_cross_section(closed, w, params.n_med)
    assert np.max(np.abs(spec.sigma - sigma_closed)) / sigma_closed.max() < 0.02
    above = w[spec.sigma >= spec.sigma.max() / 2]
    assert above.max() - above.min() == pytest.approx(0.150, abs=0.005)


def test_linear_regime_intensity_independence():
    params = default_parameters(1)
    basis = build_basis(1, 5)
    _, s1 = spectrum_pipeline(params, basis, "nonhermitian", None, 3000.0, 0.005, 0.5)
    _, s2 = spectrum_pipeline(
        params.with_overrides(E_L=params.E_L / 2), basis, "nonhermitian", None,
        3000.0, 0.005, 0.5,
    )
    assert np.max(np.abs(s1.sigma - s2.sigma)) / s1.sigma.max() < 1e-3


def test_sigma_is_computed_pointwise_from_alpha(pulse):
    t, field = _pulse_series(pulse)
    omega = np.arange(1.95, 2.15, 0.01)
    spec = spectrum_from_series(2.2 * field, field, t, omega, n_med=1.5)
    good = ~spec.masked
    assert np.allclose(
        spec.sigma[good], convert_cross_section(spec.alpha[good], omega[good], 1.5)
    )
    assert np.all(spec.sigma[spec.masked] == 0.0)


def test_cw_drive_rejected_for_spectra():
    params = default_parameters(1).with_overrides(cw_mode=True)
    basis = build_basis(1, 5)
    with pytest.raises(InvalidArgumentError):
        run_spectrum_scenario(params, basis, "nonhermitian")


def test_zero_amplitude_rejected_for_spectra():
    params = default_parameters(2)  # E_L = 0 by default
    basis = build_basis(2, 5)
    with pytest.raises(InvalidArgumentError):
        run_spectrum_scenario(params, basis, "nonhermitian")


def test_unknown_solver_rejected():
    params = default_parameters(1)
    basis = build_basis(1, 5)
    with pytest.raises(InvalidArgumentError):
        run_spectrum_scenario(params, basis, "exact")


def test_spectrum_csv_format(tmp_path, pulse):
    t, field = _pulse_series(pulse)
    omega = np.arange(1.95, 2.15, 0.01)
    spec = spectrum_from_series(1.5 * field, field, t, omega, n_med=1.5)
    path = tmp_path / "spec.csv"
    write_spectrum_csv(spec, path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["omega_eV", "sigma_cm2", "re_alpha", "im_alpha", "masked_flag"]
    assert len(rows) == len(omega) + 1
    flags = {row[4] for row in rows[1:]}
    assert flags <= {"0", "1"}


def test_default_omega_grid_set1():
    grid = spectra.default_omega_grid(default_parameters(1))
    assert grid[0] == pytest.approx(1.85)
    assert grid[-1] == pytest.approx(2.25)
    assert np.allclose(np.diff(grid), 0.0002)
