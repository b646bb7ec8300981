"""Time propagation for both solver backends.

Two propagators share one fixed-step classical RK4 integrator (default
dt = 0.005 fs, about 400 steps per optical period at 2 eV):

* ``propagate_lindblad`` evolves a density matrix under the master
  equation with collapse channels, evaluating the right-hand side by
  direct matrix products rather than a prebuilt superoperator (the
  density matrix is at most 60x60 here, a dim^2 x dim^2 superoperator
  is not worth its memory).
* ``propagate_nonhermitian`` evolves a wave packet under the effective
  non-Hermitian Hamiltonian.  Expectation values are recorded without
  renormalizing; the decaying norm is recorded separately since it is the
  model's own failure diagnostic.

Trajectories carry dot populations, the plasmon occupation, the dipole
expectation in Debye and the trace (density matrix) or norm (wave packet)
on a uniform record grid, plus optional state snapshots.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .basis import BasisDescriptor, build_basis
from .constants import HBAR_EV_FS
from .drive import DriveSpec
from .errors import InvalidArgumentError, PropagationDiagnosticError
from .operators import (
    build_collapse_operators,
    dipole_operator,
    hamiltonian_parts,
)

TRACE_DIAGNOSTIC_TOL = 1e-6
EIGENVALUE_DIAGNOSTIC_TOL = -1e-6
NORM_GROWTH_TOL = 1e-6


@dataclass
class DensityMatrix:
    matrix: np.ndarray
    basis: BasisDescriptor

    def trace(self):
        return np.trace(self.matrix).real

    def hermiticity_error(self):
        return np.max(np.abs(self.matrix - self.matrix.conj().T))

    def min_eigenvalue(self):
        sym = 0.5 * (self.matrix + self.matrix.conj().T)
        return float(np.linalg.eigvalsh(sym).min())


@dataclass
class WavePacket:
    amplitudes: np.ndarray
    basis: BasisDescriptor

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class RecordSpec:
    """What to record: observables every ``record_dt`` fs, snapshots optional."""

    record_dt: float = 0.5
    snapshots: bool = False
    snapshot_stride: int = 1


@dataclass
class Trajectory:
    times: np.ndarray            # fs, uniform grid
    dot_pops: np.ndarray         # (n_rec, n_dots)
    plasmon_pop: np.ndarray      # (n_rec,)
    mu: np.ndarray               # (n_rec,), Debye
    norm_or_trace: np.ndarray    # (n_rec,)
    kind: str                    # "lindblad" or "nonhermitian"
    basis: BasisDescriptor = None
    snapshots: np.ndarray = None
    snapshot_times: np.ndarray = None
    hermiticity_error: np.ndarray = None

    def __post_init__(self):
        if len(self.times) > 1:
            steps = np.diff(self.times)
            if np.any(steps <= 0) or np.max(np.abs(steps - steps[0])) > 1e-9:
                raise InvalidArgumentError("trajectory time grid must be uniform and increasing")

    @property
    def n_dots(self):
        return self.dot_pops.shape[1]

    @property
    def record_dt(self):
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0

    def observable_series(self):
        """Named observable columns, in CSV order."""
        out = [(f"pop_dot_{j + 1}", self.dot_pops[:, j]) for j in range(self.n_dots)]
        out.append(("pop_plasmon", self.plasmon_pop))
        out.append(("mu_expect", self.mu))
        out.append(("norm_or_trace", self.norm_or_trace))
        return out


def write_trajectory_csv(traj: Trajectory, path):
    """CSV: t_fs, pop_dot_1..n, pop_plasmon, mu_expect, norm_or_trace."""
    series = traj.observable_series()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_fs"] + [name for name, _ in series])
        for i, t in enumerate(traj.times):
            writer.writerow([f"{t:.12g}"] + [f"{col[i]:.12g}" for _, col in series])


def lindblad_rhs(rho, hamiltonian, collapse_ops):
    """Master-equation right-hand side, in 1/fs.

    (1/i hbar)[H, rho] + sum_k (C_k rho C_k' - (1/2){C_k'C_k, rho}).
    Reference implementation by plain matrix products; the propagation
    kernels use an algebraically identical fused form.
    """
    rho = np.asarray(getattr(rho, "matrix", rho), dtype=complex)
    h = np.asarray(getattr(hamiltonian, "matrix", hamiltonian), dtype=complex)
    if rho.shape != h.shape or rho.shape[0] != rho.shape[1]:
        raise InvalidArgumentError(f"shape mismatch: rho {rho.shape}, H {h.shape}")
    out = (-1j / HBAR_EV_FS) * (h @ rho - rho @ h)
    for c in collapse_ops:
        cm = np.asarray(getattr(c, "matrix", c), dtype=complex)
        if cm.shape != rho.shape:
            raise InvalidArgumentError(f"collapse operator shape {cm.shape} mismatch")
        cdc = cm.conj().T @ cm
        out += cm @ rho @ cm.conj().T - 0.5 * (cdc @ rho + rho @ cdc)
    return out


def _compress_collapse(ops, dim):
    """Represent each collapse operator by its single nonzero per column.

    Returns (c_idx, c_tgt, c_val, c_ptr, w): source columns, target rows,
    values, per-operator offsets, and the diagonal of sum_k C_k'C_k.
    """
    idx, tgt, val, ptr = [], [], [], [0]
    w = np.zeros(dim)
    for op in ops:
        m = np.asarray(getattr(op, "matrix", op), dtype=complex)
        targets = []
        for col in range(dim):
            rows = np.nonzero(m[:, col])[0]
            if len(rows) > 1:
                raise InvalidArgumentError("collapse operator has more than one entry per column")
            if len(rows) == 1:
                r = int(rows[0])
                idx.append(col)
                tgt.append(r)
                val.append(m[r, col])
                w[col] += abs(m[r, col]) ** 2
                targets.append(r)
        if len(set(targets)) != len(targets):
            raise InvalidArgumentError("collapse operator maps two states to one target")
        ptr.append(len(idx))
    return (
        np.asarray(idx, dtype=np.int32),
        np.asarray(tgt, dtype=np.int32),
        np.asarray(val, dtype=complex),
        np.asarray(ptr, dtype=np.int32),
        w,
    )


class _KernelSystem:
    """Prebuilt operator arrays shared by both propagators."""

    def __init__(self, params, basis, drive):
        h0, hd = hamiltonian_parts(params, basis)
        self.h0 = np.ascontiguousarray(h0.matrix)
        self.hd = np.ascontiguousarray(hd.matrix)
        self.mu = np.ascontiguousarray(dipole_operator(params, basis).matrix.real)
        ops = build_collapse_operators(params, basis)
        self.c_idx, self.c_tgt, self.c_val, self.c_ptr, self.w = _compress_collapse(
            ops, basis.dim
        )
        # effective Hamiltonian: H0 - (i hbar / 2) sum C'C, diagonal loss
        self.h0c = self.h0 - 0.5j * HBAR_EV_FS * np.diag(self.w)
        diags = [basis.dot_occupations(j) for j in range(1, basis.n_dots + 1)]
        diags.append(basis.plasmon_numbers())
        self.pop_diags = np.ascontiguousarray(np.vstack(diags))
        if drive is None or drive.E_L == 0.0:
            self.drive5 = np.zeros(5)
        else:
            self.drive5 = np.array(
                [
                    drive.E_L,
                    drive.carrier_rad_per_fs,
                    drive.t_c,
                    drive.tau_L,
                    1.0 if drive.cw_mode else 0.0,
                ]
            )
        self.basis = basis


def _grid(t_end, dt, record_dt):
    if dt <= 0 or t_end <= 0:
        raise InvalidArgumentError("t_end and dt must be positive")
    record_every = max(1, int(round(record_dt / dt)))
    n_records = max(1, int(math.floor(t_end / (record_every * dt) + 1e-9)))
    return record_every, n_records * record_every


def propagate_lindblad(
    rho0,
    params,
    basis,
    drive: DriveSpec = None,
    t_end: float = 2500.0,
    dt: float = 0.005,
    record: RecordSpec = None,
):
    """Propagate a density matrix and record observables.

    Raises :class:`PropagationDiagnosticError` at the first recorded time
    where the trace drifts by more than 1e-6 or (when snapshots are
    recorded) an eigenvalue drops below -1e-6.
    """
    record = record or RecordSpec()
    rho0 = np.asarray(getattr(rho0, "matrix", rho0), dtype=complex)
    if rho0.shape != (basis.dim, basis.dim):
        raise InvalidArgumentError(f"rho0 shape {rho0.shape} does not match dim {basis.dim}")
    if np.max(np.abs(rho0 - rho0.conj().T)) > 1e-8:
        raise InvalidArgumentError("rho0 is not Hermitian")
    if abs(np.trace(rho0).real - 1.0) > 1e-8:
        raise InvalidArgumentError("rho0 trace must be 1")
    sysarr = _KernelSystem(params, basis, drive)
    record_every, n_steps = _grid(t_end, dt, record.record_dt)
    snapshot_every = record.snapshot_stride if record.snapshots else 0
    times, pops, mu_ex, trace, herm, snaps, _ = kernels.propagate_lindblad_arrays(
        rho0, sysarr.h0, sysarr.hd,
        sysarr.c_idx, sysarr.c_tgt, sysarr.c_val, sysarr.c_ptr, sysarr.w,
        sysarr.drive5, sysarr.pop_diags, sysarr.mu,
        0.0, dt, n_steps, record_every, snapshot_every,
    )
    bad = np.nonzero(~(np.abs(trace - 1.0) <= TRACE_DIAGNOSTIC_TOL))[0]
    if len(bad):
        raise PropagationDiagnosticError(
            f"trace drifted to {trace[bad[0]]:.9f}", times[bad[0]]
        )
    snapshot_times = None
    if record.snapshots:
        snapshot_times = times[:: record.snapshot_stride]
        finite = np.isfinite(snaps).reshape(len(snaps), -1).all(axis=1)
        if not finite.all():
            k = int(np.nonzero(~finite)[0][0])
            raise PropagationDiagnosticError(
                "density matrix became non-finite", snapshot_times[k]
            )
        sym = 0.5 * (snaps + snaps.conj().transpose(0, 2, 1))
        mins = np.linalg.eigvalsh(sym)[:, 0]
        bad = np.nonzero(mins < EIGENVALUE_DIAGNOSTIC_TOL)[0]
        if len(bad):
            raise PropagationDiagnosticError(
                f"density matrix eigenvalue {mins[bad[0]]:.3e}", snapshot_times[bad[0]]
            )
    n = basis.n_dots
    return Trajectory(
        times=times,
        dot_pops=pops[:, :n],
        plasmon_pop=pops[:, n],
        mu=mu_ex,
        norm_or_trace=trace,
        kind="lindblad",
        basis=basis,
        snapshots=snaps if record.snapshots else None,
        snapshot_times=snapshot_times,
        hermiticity_error=herm,
    )


def propagate_nonhermitian(
    psi0,
    params,
    basis,
    drive: DriveSpec = None,
    t_end: float = 2500.0,
    dt: float = 0.005,
    record: RecordSpec = None,
):
    """Propagate a wave packet under the non-Hermitian effective Hamiltonian.

    Recorded expectation values are not renormalized; the norm column is
    the diagnostic for how much amplitude the loss terms have removed.
    Norm growth beyond the initial value signals integrator instability
    and raises :class:`PropagationDiagnosticError`.
    """
    record = record or RecordSpec()
    psi0 = np.asarray(getattr(psi0, "amplitudes", psi0), dtype=complex)
    if psi0.shape != (basis.dim,):
        raise InvalidArgumentError(f"psi0 shape {psi0.shape} does not match dim {basis.dim}")
    norm0 = float(np.linalg.norm(psi0))
    if norm0 == 0.0:
        raise InvalidArgumentError("psi0 must not be the zero vector")
    sysarr = _KernelSystem(params, basis, drive)
    record_every, n_steps = _grid(t_end, dt, record.record_dt)
    times, pops, mu_ex, norm, snaps, _ = kernels.propagate_schrodinger_arrays(
        psi0, sysarr.h0c, sysarr.hd, sysarr.drive5, sysarr.pop_diags, sysarr.mu,
        0.0, dt, n_steps, record_every,
    )
    bad = np.nonzero(~(norm**2 <= norm0**2 * (1.0 + NORM_GROWTH_TOL)))[0]
    if len(bad):
        raise PropagationDiagnosticError(
            f"wave packet norm grew to {norm[bad[0]]:.9f}", times[bad[0]]
        )
    n = basis.n_dots
    return Trajectory(
        times=times,
        dot_pops=pops[:, :n],
        plasmon_pop=pops[:, n],
        mu=mu_ex,
        norm_or_trace=norm,
        kind="nonhermitian",
        basis=basis,
        snapshots=snaps,
        snapshot_times=times.copy(),
    )


def detect_steady_state(traj: Trajectory, window: float, tol: float):
    """Earliest time after which every observable is flat over the window.

    Flat means every sample in the window deviates from the window mean
    by at most tol * |mean|; the condition must hold for the window at
    the candidate time and every later one.  Returns the earliest such
    recorded time, or None.
    """
    if len(traj.times) < 2:
        raise InvalidArgumentError("trajectory too short")
    dt_rec = traj.record_dt
    w_len = int(round(window / dt_rec))
    if w_len < 1 or w_len >= len(traj.times):
        raise InvalidArgumentError("window must fit inside the trajectory")
    n_start = len(traj.times) - w_len
    ok = np.ones(n_start, dtype=bool)
    for _, col in traj.observable_series():
        for i in range(n_start):
            seg = col[i : i + w_len + 1]
            mean = seg.mean()
            if np.max(np.abs(seg - mean)) > tol * max(abs(mean), 1e-30):
                ok[i] = False
    good = np.nonzero(np.logical_and.accumulate(ok[::-1])[::-1])[0]
    if len(good) == 0:
        return None
    return float(traj.times[good[0]])


def fock_truncation_check(
    params,
    n_pl,
    drive=None,
    initial=None,
    solver="lindblad",
    t_end=500.0,
    dt=0.005,
    record=None,
):
    """Truncation convergence: rerun with n_pl + 2 and compare observables.

    ``initial`` is a ``(s, qs)`` basis label (default: global ground
    state).  Returns the maximum absolute deviation over all recorded
    observables; small values mean the Fock ladder is long enough.
    """
    record = record or RecordSpec(record_dt=1.0)
    n_dots = params.n_dots
    results = []
    for npl in (n_pl, n_pl + 2):
        basis = build_basis(n_dots, npl)
        s, qs = initial if initial is not None else (0, (0,) * n_dots)
        if solver == "lindblad":
            psi = basis.unit_vector(s, qs)
            rho0 = np.outer(psi, psi.conj())
            traj = propagate_lindblad(rho0, params, basis, drive, t_end, dt, record)
        elif solver == "nonhermitian":
            traj = propagate_nonhermitian(
                basis.unit_vector(s, qs), params, basis, drive, t_end, dt, record
            )
        else:
            raise InvalidArgumentError(f"unknown solver {solver!r}")
        results.append(traj)
    a, b = results
    dev = 0.0
    for (_, col_a), (_, col_b) in zip(a.observable_series(), b.observable_series()):
        dev = max(dev, float(np.max(np.abs(col_a - col_b))))
    return dev
