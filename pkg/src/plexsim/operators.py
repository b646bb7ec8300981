"""Operators on the dot-plasmon product space.

Hamiltonian (eV, with mixed-unit drive coupling):

    H(t) = omega0 sum_j n_j + omega_pl b'b + sum_j g_j (sigma_j b' + sigma_j' b)
           - mu E(t) * DEBYE_AU_TO_EV

with the dipole operator mu = d0 sum_j (sigma_j' + sigma_j) + d_pl (b' + b)
in Debye and E(t) in atomic units.  Collapse operators carry 1/sqrt(fs)
units so that C rho C' terms are rates; the loss part of the effective
Hamiltonian is -(i*hbar/2) sum_k C_k' C_k, which stays in eV.
"""

import numpy as np

from .basis import BasisDescriptor
from .constants import DEBYE_AU_TO_EV, HBAR_EV_FS
from .drive import DriveSpec, field_at
from .errors import InvalidArgumentError

HERMITICITY_TOL = 1e-12


class OperatorMatrix:
    """Dense complex matrix tied to a basis, optionally checked Hermitian."""

    def __init__(self, matrix, basis: BasisDescriptor, hermitian=False):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (basis.dim, basis.dim):
            raise InvalidArgumentError(
                f"matrix shape {matrix.shape} does not match basis dim {basis.dim}"
            )
        if hermitian:
            dev = np.max(np.abs(matrix - matrix.conj().T))
            if dev >= HERMITICITY_TOL:
                raise InvalidArgumentError(f"matrix marked hermitian deviates by {dev:.3e}")
        self.matrix = matrix
        self.basis = basis
        self.hermitian = hermitian

    def dagger(self):
        return OperatorMatrix(self.matrix.conj().T, self.basis, hermitian=self.hermitian)

    def __array__(self, dtype=None, copy=None):
        if dtype is not None:
            return self.matrix.astype(dtype)
        return self.matrix


def _check_params_basis(params, basis):
    if len(params.g) != basis.n_dots:
        raise InvalidArgumentError(
            f"{len(params.g)} couplings for {basis.n_dots} dots"
        )


def plasmon_annihilation(basis):
    """Bosonic annihilation operator on the truncated plasmon ladder."""
    mat = np.zeros((basis.dim, basis.dim), dtype=complex)
    for i in range(basis.dim):
        s, qs = basis.state_of(i)
        if s > 0:
            mat[basis.index_of(s - 1, qs), i] = np.sqrt(s)
    return OperatorMatrix(mat, basis)


def dot_lowering(basis, j):
    """Two-level lowering operator for dot ``j`` (1-based), identity elsewhere."""
    if not 1 <= j <= basis.n_dots:
        raise InvalidArgumentError(f"dot index {j} outside 1..{basis.n_dots}")
    mat = np.zeros((basis.dim, basis.dim), dtype=complex)
    for i in range(basis.dim):
        s, qs = basis.state_of(i)
        if qs[j - 1] == 1:
            lowered = list(qs)
            lowered[j - 1] = 0
            mat[basis.index_of(s, lowered), i] = 1.0
    return OperatorMatrix(mat, basis)


def dipole_operator(params, basis):
    """Total dipole operator in Debye (Hermitian, real entries)."""
    _check_params_basis(params, basis)
    b = plasmon_annihilation(basis).matrix
    mat = params.d_pl * (b + b.conj().T)
    for j in range(1, basis.n_dots + 1):
        s = dot_lowering(basis, j).matrix
        mat = mat + params.d0 * (s + s.conj().T)
    return OperatorMatrix(mat, basis, hermitian=True)


def hamiltonian_parts(params, basis):
    """Static Hamiltonian H0 and drive coupling Hd with H(t) = H0 + E(t) Hd.

    H0 is in eV; Hd is in eV per atomic unit of field (it already includes
    the Debye * a.u. -> eV conversion and the minus sign of -mu E).
    """
    _check_params_basis(params, basis)
    b = plasmon_annihilation(basis).matrix
    h0 = params.omega_pl * (b.conj().T @ b)
    for j in range(1, basis.n_dots + 1):
        sj = dot_lowering(basis, j).matrix
        h0 = h0 + params.omega0 * (sj.conj().T @ sj)
        h0 = h0 + params.g[j - 1] * (sj @ b.conj().T + sj.conj().T @ b)
    hd = -DEBYE_AU_TO_EV * dipole_operator(params, basis).matrix
    return (
        OperatorMatrix(h0, basis, hermitian=True),
        OperatorMatrix(hd, basis, hermitian=True),
    )


def build_system_hamiltonian(params, basis, t=0.0, include_drive=True):
    """System Hamiltonian H(t) in eV, with the drive evaluated at ``t`` fs."""
    h0, hd = hamiltonian_parts(params, basis)
    if not include_drive or params.E_L == 0.0:
        return h0
    e_t = field_at(DriveSpec.from_params(params), t)
    return OperatorMatrix(h0.matrix + e_t * hd.matrix, basis, hermitian=True)


def build_collapse_operators(params, basis):
    """Collapse operators, in 1/sqrt(fs) units.

    Per dot j: sqrt(gamma1/hbar) sigma_j and sqrt(2 gamma2*/hbar) sigma_j'sigma_j,
    plus sqrt(gamma_pl/hbar) b for the plasmon.  Zero rates yield zero
    matrices so the operator count is independent of the parameters.
    """
    _check_params_basis(params, basis)
    for name in ("gamma1", "gamma2_star", "gamma_pl"):
        if getattr(params, name) < 0:
            raise InvalidArgumentError(f"{name} must be >= 0")
    ops = []
    for j in range(1, basis.n_dots + 1):
        sj = dot_lowering(basis, j).matrix
        ops.append(OperatorMatrix(np.sqrt(params.gamma1 / HBAR_EV_FS) * sj, basis))
        ops.append(
            OperatorMatrix(
                np.sqrt(2.0 * params.gamma2_star / HBAR_EV_FS) * (sj.conj().T @ sj), basis
            )
        )
    b = plasmon_annihilation(basis).matrix
    ops.append(OperatorMatrix(np.sqrt(params.gamma_pl / HBAR_EV_FS) * b, basis))
    return ops


def loss_operator(params, basis):
    """(hbar/2) sum_k C_k' C_k in eV; diagonal and positive semidefinite."""
    total = np.zeros((basis.dim, basis.dim), dtype=complex)
    for c in build_collapse_operators(params, basis):
        total = total + c.matrix.conj().T @ c.matrix
    return OperatorMatrix(0.5 * HBAR_EV_FS * total, basis, hermitian=True)


def build_effective_hamiltonian(params, basis, t=0.0, include_drive=True):
    """Non-Hermitian effective Hamiltonian H(t) - (i hbar/2) sum C'C, in eV."""
    h = build_system_hamiltonian(params, basis, t=t, include_drive=include_drive)
    return OperatorMatrix(h.matrix - 1j * loss_operator(params, basis).matrix, basis)
