"""Pulsed-drive absorption spectra.

Pipeline: start from the global ground state, drive with a short Gaussian
pulse, record the dipole expectation, Fourier transform, and form the
polarizability as the ratio of the dipole and field transforms

    alpha(omega) = F[<mu>](omega) / (sqrt(n_med) F[E](omega))

with the cross section sigma(omega) = (n_med omega / eps0 c) Im[alpha].
Transforms are plain discrete sums on the uniform record grid, evaluated
at any requested energies (zero padding is implicit); no window function
is applied since dissipation makes the signal decay naturally.
"""

import csv
import warnings
from dataclasses import dataclass

import numpy as np

from .basis import BasisDescriptor
from .constants import HBAR_EV_FS, convert_cross_section
from .drive import DriveSpec, field_at
from .dynamics import RecordSpec, propagate_lindblad, propagate_nonhermitian
from .errors import InsufficientPropagationError, InvalidArgumentError

DECAY_FLOOR = 1e-6          # required |mu| tail relative to its peak
MASK_FLOOR = 1e-12          # field-transform floor relative to its peak


@dataclass
class Spectrum:
    omega: np.ndarray    # eV
    alpha: np.ndarray    # complex, Debye per a.u. field; 0 where masked
    sigma: np.ndarray    # cm^2; 0 where masked
    masked: np.ndarray   # bool


def write_spectrum_csv(spectrum: Spectrum, path):
    """CSV: omega_eV, sigma_cm2, re_alpha, im_alpha, masked_flag."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["omega_eV", "sigma_cm2", "re_alpha", "im_alpha", "masked_flag"])
        for i in range(len(spectrum.omega)):
            writer.writerow(
                [
                    f"{spectrum.omega[i]:.12g}",
                    f"{spectrum.sigma[i]:.12g}",
                    f"{spectrum.alpha[i].real:.12g}",
                    f"{spectrum.alpha[i].imag:.12g}",
                    int(spectrum.masked[i]),
                ]
            )


def _discrete_transform(series, t_grid, omega_grid):
    """sum_n f(t_n) exp(i omega t_n / hbar), chunked over omega."""
    out = np.empty(len(omega_grid), dtype=complex)
    chunk = 128
    for k in range(0, len(omega_grid), chunk):
        w = omega_grid[k : k + chunk, None] / HBAR_EV_FS
        out[k : k + chunk] = (np.exp(1j * w * t_grid[None, :]) * series[None, :]).sum(axis=1)
    return out


def polarizability(mu_series, field_series, t_grid, omega_grid, n_med=1.0):
    """Complex polarizability on the requested energy grid.

    Returns ``(alpha, masked)``.  Points where the field transform is
    below ``MASK_FLOOR`` of its peak are masked (alpha set to zero) and
    reported with a warning.  Requires the dipole signal to have decayed
    below ``DECAY_FLOOR`` of its peak by the end of the grid.
    """
    mu_series = np.asarray(mu_series, dtype=float)
    field_series = np.asarray(field_series, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    omega_grid = np.asarray(omega_grid, dtype=float)
    if not (len(mu_series) == len(field_series) == len(t_grid)):
        raise InvalidArgumentError("mu, field and time grids must have equal length")
    if len(t_grid) < 2:
        raise InvalidArgumentError("need at least two samples")
    steps = np.diff(t_grid)
    if np.any(steps <= 0) or np.max(np.abs(steps - steps[0])) > 1e-9:
        raise InvalidArgumentError("time grid must be uniform and increasing")
    dt = float(steps[0])
    if np.max(omega_grid) >= np.pi * HBAR_EV_FS / dt:
        raise InvalidArgumentError(
            f"requested energies exceed the grid Nyquist limit {np.pi * HBAR_EV_FS / dt:.3f} eV"
        )

    peak = np.max(np.abs(mu_series))
    if peak > 0.0:
        tail = max(10, int(round(5.0 / dt)))
        residual = np.max(np.abs(mu_series[-tail:]))
        if residual > DECAY_FLOOR * peak:
            raise InsufficientPropagationError(
                f"dipole tail is {residual / peak:.3e} of its peak "
                f"(floor {DECAY_FLOOR:g}); propagate longer"
            )

    f_mu = _discrete_transform(mu_series, t_grid, omega_grid)
    f_e = _discrete_transform(field_series, t_grid, omega_grid)
    denom = np.sqrt(n_med) * f_e
    masked = np.abs(f_e) < MASK_FLOOR * np.max(np.abs(f_e)) if np.any(f_e != 0) else np.ones(len(f_e), bool)
    alpha = np.zeros(len(omega_grid), dtype=complex)
    good = ~masked
    alpha[good] = f_mu[good] / denom[good]
    if np.any(masked):
        warnings.warn(f"{int(masked.sum())} spectral points masked (field transform near zero)")
    return alpha, masked


def spectrum_from_series(mu_series, field_series, t_grid, omega_grid, n_med):
    """Assemble a :class:`Spectrum` from recorded series."""
    alpha, masked = polarizability(mu_series, field_series, t_grid, omega_grid, n_med=n_med)
    sigma = convert_cross_section(alpha, omega_grid, n_med)
    sigma[masked] = 0.0
    return Spectrum(omega=omega_grid.copy(), alpha=alpha, sigma=sigma, masked=masked)


def spectrum_pipeline(
    params,
    basis: BasisDescriptor,
    solver: str,
    drive: DriveSpec = None,
    t_end: float = 2500.0,
    dt: float = 0.005,
    record_dt: float = 0.5,
    omega_grid=None,
):
    """Run one solver leg and return ``(trajectory, spectrum)``."""
    drive = drive or DriveSpec.from_params(params)
    if drive.cw_mode:
        raise InvalidArgumentError("spectrum scenarios need a pulsed drive, not cw")
    if drive.E_L <= 0:
        raise InvalidArgumentError("spectrum scenarios need a nonzero drive amplitude")
    if omega_grid is None:
        omega_grid = default_omega_grid(params)
    record = RecordSpec(record_dt=record_dt, snapshots=(solver == "lindblad"))
    if solver == "lindblad":
        psi = basis.unit_vector(0, (0,) * basis.n_dots)
        traj = propagate_lindblad(
            np.outer(psi, psi.conj()), params, basis, drive, t_end, dt, record
        )
    elif solver == "nonhermitian":
        traj = propagate_nonhermitian(
            basis.unit_vector(0, (0,) * basis.n_dots), params, basis, drive, t_end, dt, record
        )
    else:
        raise InvalidArgumentError(f"unknown solver {solver!r}")
    field_series = field_at(drive, traj.times)
    spectrum = spectrum_from_series(traj.mu, field_series, traj.times, omega_grid, params.n_med)
    return traj, spectrum


def run_spectrum_scenario(
    params,
    basis: BasisDescriptor,
    solver: str,
    drive: DriveSpec = None,
    t_end: float = 2500.0,
    dt: float = 0.005,
    record_dt: float = 0.5,
    omega_grid=None,
) -> Spectrum:
    """Ground-state start, pulsed drive, full spectrum for one solver."""
    _, spectrum = spectrum_pipeline(
        params, basis, solver, drive, t_end, dt, record_dt, omega_grid
    )
    return spectrum


def default_omega_grid(params, half_width_low=0.192, half_width_high=0.208, step=0.0002):
    """Energy grid bracketing the plasmon line (default 1.85..2.25 eV for set 1)."""
    lo = params.omega_pl - half_width_low
    hi = params.omega_pl + half_width_high
    n = int(round((hi - lo) / step)) + 1
    return lo + step * np.arange(n)
