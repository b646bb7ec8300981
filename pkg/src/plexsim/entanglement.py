"""Reduced two-dot density matrices and concurrence measures.

The two-dot state is obtained by tracing the plasmon out of the full
state.  For a wave packet the norm lost to the non-Hermitian terms is
assigned to the global ground state before tracing ("ground" convention):
decayed amplitude represents population relaxed to the ground state, and
this choice makes the zero-dephasing agreement with the density-matrix
solver exact.  Pass ``lost_norm="renormalize"`` to instead rescale the
raw projector to unit trace for comparison.

For states inside the single-excitation manifold the pairwise concurrence
collapses to 2|a_i||a_j|, which is what makes 50-dot runs cheap.
"""

import csv

import numpy as np

from .errors import InvalidArgumentError

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_YY = np.kron(_SIGMA_Y, _SIGMA_Y)


def reduce_to_dots(state, basis=None, lost_norm="ground"):
    """Reduced 4x4 two-dot density matrix, ordering |q1 q2> in {00,01,10,11}.

    ``state`` may be a DensityMatrix, a WavePacket, or a bare ndarray (a
    matrix is treated as a density matrix, a vector as a wave packet, with
    ``basis`` required).  The result has unit trace.
    """
    if basis is None:
        basis = getattr(state, "basis", None)
    if basis is None:
        raise InvalidArgumentError("basis required for bare arrays")
    if basis.n_dots != 2:
        raise InvalidArgumentError(f"two dots required, basis has {basis.n_dots}")
    arr = getattr(state, "matrix", None)
    if arr is None:
        arr = getattr(state, "amplitudes", state)
    arr = np.asarray(arr, dtype=complex)

    if arr.ndim == 2:
        if arr.shape != (basis.dim, basis.dim):
            raise InvalidArgumentError(f"state shape {arr.shape} does not match basis")
        blocks = arr.reshape(basis.n_pl, 4, basis.n_pl, 4)
        return np.einsum("sasb->ab", blocks)

    if arr.shape != (basis.dim,):
        raise InvalidArgumentError(f"state shape {arr.shape} does not match basis")
    amps = arr.reshape(basis.n_pl, 4)
    rho = np.einsum("sa,sb->ab", amps, amps.conj())
    missing = 1.0 - float(np.real(np.trace(rho)))
    if lost_norm == "ground":
        rho[0, 0] += missing
    elif lost_norm == "renormalize":
        tr = float(np.real(np.trace(rho)))
        if tr <= 0:
            raise InvalidArgumentError("cannot renormalize a zero-norm wave packet")
        rho = rho / tr
    else:
        raise InvalidArgumentError(f"unknown lost_norm convention {lost_norm!r}")
    return rho


def wootters_concurrence(rho):
    """Two-qubit concurrence in [0, 1] for a trace-one density matrix.

    C = max(0, l1 - l2 - l3 - l4) with l_i the decreasing square roots of
    the eigenvalues of rho (sy x sy) rho* (sy x sy).
    """
    rho = np.asarray(getattr(rho, "matrix", rho), dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidArgumentError("expected a 4x4 two-qubit density matrix")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-8:
        raise InvalidArgumentError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-6:
        raise InvalidArgumentError("density matrix trace must be 1")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -1e-8:
        raise InvalidArgumentError("density matrix has a negative eigenvalue")
    # the l_i are the singular values of B = sqrt(rho) (sy x sy) sqrt(rho)*,
    # since B B' = sqrt(rho) rho~ sqrt(rho) shares the spectrum of rho rho~.
    # SVD reaches them at machine precision; taking square roots of the
    # near-zero eigenvalues of rho rho~ would inject sqrt(eps) noise and
    # break the 1e-10 invariants.
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    sqrt_rho = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    lam = np.linalg.svd(sqrt_rho @ _YY @ sqrt_rho.conj(), compute_uv=False)
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return float(min(max(c, 0.0), 1.0))


def manifold_pair_concurrence(amplitudes, i, j):
    """Concurrence of dots i and j for single-excitation-manifold amplitudes.

    ``amplitudes`` uses the manifold layout (plasmon amplitude first, then
    one amplitude per dot, 1-based dot indices).  Equals the reduced
    trace plus Wootters route with ground padding: C = 2 |a_i| |a_j|.
    """
    a = np.asarray(amplitudes, dtype=complex)
    n = len(a) - 1
    total = float(np.sum(np.abs(a) ** 2))
    if total > 1.0 + 1e-8:
        raise InvalidArgumentError(f"amplitudes exceed unit norm: {total:.9f}")
    if not (1 <= i <= n and 1 <= j <= n) or i == j:
        raise InvalidArgumentError(f"dot indices ({i}, {j}) invalid for {n} dots")
    return float(min(2.0 * abs(a[i]) * abs(a[j]), 1.0))


def average_bipartite_concurrence(amplitudes, n_dots=None):
    """Mean pairwise concurrence over all unordered dot pairs."""
    a = np.asarray(amplitudes, dtype=complex)
    n = len(a) - 1 if n_dots is None else int(n_dots)
    if n < 2:
        raise InvalidArgumentError("need at least two dots")
    mags = np.abs(a[1 : n + 1])
    s1 = float(mags.sum())
    s2 = float(np.sum(mags**2))
    n_pairs = n * (n - 1) / 2.0
    # sum over pairs of 2|a_i||a_j| equals S1^2 - S2
    return (s1 * s1 - s2) / n_pairs


def concurrence_trajectory(traj, lost_norm="ground"):
    """Concurrence of the two dots at every recorded snapshot time.

    Works on trajectories carrying snapshots from either solver; returns
    ``(times, values)``.
    """
    if traj.snapshots is None:
        raise InvalidArgumentError("trajectory has no snapshots; record with snapshots=True")
    if traj.basis is None or traj.basis.n_dots != 2:
        raise InvalidArgumentError("two-dot trajectory required")
    values = np.empty(len(traj.snapshot_times))
    for k, snap in enumerate(traj.snapshots):
        rho = reduce_to_dots(snap, traj.basis, lost_norm=lost_norm)
        rho = 0.5 * (rho + rho.conj().T)
        values[k] = wootters_concurrence(rho)
    return traj.snapshot_times.copy(), values


def write_concurrence_csv(times, values, path):
    """CSV: t_fs, C_pair_or_avg."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_fs", "C_pair_or_avg"])
        for t, c in zip(times, values):
            writer.writerow([f"{t:.12g}", f"{c:.12g}"])
