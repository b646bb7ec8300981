"""Optical drive: a Gaussian pulse or a continuous wave at fixed carrier."""

from dataclasses import dataclass

import numpy as np

from .constants import HBAR_EV_FS
from .errors import InvalidArgumentError


@dataclass(frozen=True)
class DriveSpec:
    E_L: float          # amplitude, atomic units of field
    omega_L: float      # carrier energy, eV
    t_c: float = 50.0   # pulse center, fs
    tau_L: float = 10.0  # pulse width, fs
    cw_mode: bool = False

    def __post_init__(self):
        if self.E_L < 0:
            raise InvalidArgumentError("E_L must be >= 0")
        if not self.cw_mode and self.tau_L <= 0:
            raise InvalidArgumentError("tau_L must be > 0 for a pulsed drive")

    @classmethod
    def from_params(cls, params):
        return cls(
            E_L=params.E_L,
            omega_L=params.omega_L,
            t_c=params.t_c,
            tau_L=params.tau_L,
            cw_mode=params.cw_mode,
        )

    @property
    def carrier_rad_per_fs(self):
        return self.omega_L / HBAR_EV_FS


def field_at(drive: DriveSpec, t):
    """Field value(s) in atomic units at time(s) ``t`` in fs.

    E(t) = E_L exp(-((t - t_c)/tau_L)^2) cos(omega_L t / hbar); in cw mode
    the envelope is identically one.
    """
    t = np.asarray(t, dtype=float)
    phase = np.cos(drive.carrier_rad_per_fs * t)
    if drive.cw_mode:
        env = 1.0
    else:
        x2 = ((t - drive.t_c) / drive.tau_L) ** 2
        # hard zero beyond ~11 sigma (envelope < 8e-53), matching the
        # propagation kernels; keeps subnormal values out of the dynamics
        env = np.where(x2 > 120.0, 0.0, np.exp(-np.minimum(x2, 120.0)))
    out = drive.E_L * env * phase
    return float(out) if out.ndim == 0 else out
