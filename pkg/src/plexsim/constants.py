"""Physical constants and unit conversions.

Internal unit system: energies and rates carry eV (as hbar*rate values),
time is in fs, dipole moments stay in Debye and electric fields in atomic
units.  The only places mixed units meet are the dipole-field coupling
term of the Hamiltonian and the cross-section output, both handled by the
conversion factors below.

Sources (CODATA 2018 / SI 2019 exact values):
  hbar              1.054571817e-34 J s  ->  0.6582119569 eV fs
  elementary charge 1.602176634e-19 C (exact)
  speed of light    299792458 m/s (exact)
  1 Debye           1e-21/c C m = 3.33564095198152e-30 C m
  atomic field unit 5.14220674763e11 V/m
  vacuum permittivity 8.8541878128e-12 F/m
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

HBAR_EV_FS = 0.6582119569
HBAR_J_S = 1.054571817e-34
EV_TO_JOULE = 1.602176634e-19
C_M_PER_S = 299792458.0
DEBYE_TO_CM = 3.33564095198152e-30
AU_FIELD_TO_V_PER_M = 5.14220674763e11
EPS0_F_PER_M = 8.8541878128e-12

# Energy (eV) of a 1 Debye dipole in a 1 a.u. field, ~10.706 eV.
DEBYE_AU_TO_EV = DEBYE_TO_CM * AU_FIELD_TO_V_PER_M / EV_TO_JOULE


@dataclass(frozen=True)
class PhysicalConstants:
    """Bundle of the conversion constants, mostly for documentation and tests."""

    hbar: float = HBAR_EV_FS              # eV fs
    debye_to_Cm: float = DEBYE_TO_CM      # C m per Debye
    au_field_to_Vpm: float = AU_FIELD_TO_V_PER_M  # V/m per atomic unit
    eps0: float = EPS0_F_PER_M            # F/m
    c: float = C_M_PER_S                  # m/s
    debye_au_to_eV: float = field(default=DEBYE_AU_TO_EV)


CODATA = PhysicalConstants()


def ev_to_rad_per_s(energy_ev):
    """Angular frequency (rad/s) of a photon of the given energy."""
    return np.asarray(energy_ev) * EV_TO_JOULE / HBAR_J_S


def convert_cross_section(alpha_raw, omega_ev, n_med):
    """Convert a raw polarizability to an absorption cross section in cm^2.

    ``alpha_raw`` is in Debye per atomic unit of field, ``omega_ev`` the
    photon energy.  sigma = (n_med * omega / (eps0 c)) * Im[alpha] in SI,
    then expressed in cm^2.
    """
    omega_ev = np.asarray(omega_ev, dtype=float)
    if np.any(omega_ev <= 0.0):
        raise InvalidArgumentError("omega must be positive")
    alpha_si = np.asarray(alpha_raw) * (DEBYE_TO_CM / AU_FIELD_TO_V_PER_M)
    sigma_m2 = n_med * ev_to_rad_per_s(omega_ev) / (EPS0_F_PER_M * C_M_PER_S) * np.imag(alpha_si)
    return sigma_m2 * 1e4
