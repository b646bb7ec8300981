"""Single-excitation manifold engine.

With no drive, one quantum shared between the plasmon and N dots stays in
an (N+1)-dimensional subspace.  The non-Hermitian Hamiltonian restricted
to that manifold (basis: plasmon excitation first, then one entry per
dot) is complex symmetric,

    [ omega_pl - i gamma_pl/2   g_1    g_2   ... ]
    [ g_1         omega0 - i Gamma/2   0    ... ]
    [ g_2             0      omega0 - i Gamma/2 ]   (all in eV),

so propagation is a single eigendecomposition instead of time stepping,
which is what makes ~50-dot entanglement runs essentially free.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .constants import HBAR_EV_FS
from .dynamics import Trajectory
from .entanglement import average_bipartite_concurrence
from .errors import InvalidArgumentError

CONDITION_LIMIT = 1e8


@dataclass(frozen=True)
class ManifoldHamiltonian:
    matrix: np.ndarray   # (N+1, N+1), complex symmetric
    couplings: tuple     # g_j in eV

    @property
    def n_dots(self):
        return len(self.couplings)


def build_manifold_hamiltonian(params, couplings):
    """Manifold Hamiltonian for ``len(couplings)`` dots, entries in eV."""
    couplings = tuple(float(g) for g in couplings)
    n = len(couplings)
    if n < 1:
        raise InvalidArgumentError("need at least one coupling")
    m = np.zeros((n + 1, n + 1), dtype=complex)
    m[0, 0] = params.omega_pl - 0.5j * params.gamma_pl
    gamma = params.gamma_total
    for j, g in enumerate(couplings, start=1):
        m[j, j] = params.omega0 - 0.5j * gamma
        m[0, j] = g
        m[j, 0] = g
    return ManifoldHamiltonian(matrix=m, couplings=couplings)


def _rk4_fallback(matrix, psi0, times):
    scale = -1j / HBAR_EV_FS
    dt = min(0.005, HBAR_EV_FS / (50.0 * np.max(np.abs(matrix))))
    out = np.empty((len(times), len(psi0)), dtype=complex)
    psi = psi0.astype(complex)
    t_now = 0.0
    order = np.argsort(times)
    for k in order:
        target = times[k]
        while t_now < target - 1e-12:
            step = min(dt, target - t_now)
            k1 = scale * (matrix @ psi)
            k2 = scale * (matrix @ (psi + 0.5 * step * k1))
            k3 = scale * (matrix @ (psi + 0.5 * step * k2))
            k4 = scale * (matrix @ (psi + step * k3))
            psi = psi + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            t_now += step
        out[k] = psi
    return out


def eigen_propagate(hamiltonian: ManifoldHamiltonian, psi0, t):
    """Amplitudes at time(s) ``t`` fs via eigendecomposition.

    psi(t) = V exp(-i L t / hbar) V^-1 psi(0); no time stepping.  If the
    eigenvector matrix is ill conditioned (near an exceptional point) the
    propagation falls back to RK4 stepping with a warning.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    m = hamiltonian.matrix
    if psi0.shape != (m.shape[0],):
        raise InvalidArgumentError(
            f"psi0 length {psi0.shape} does not match manifold dim {m.shape[0]}"
        )
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    evals, vecs = np.linalg.eig(m)
    cond = np.linalg.cond(vecs)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        warnings.warn(
            f"eigenvector condition number {cond:.3e} too large, stepping instead"
        )
        out = _rk4_fallback(m, psi0, t_arr)
    else:
        coeff = np.linalg.solve(vecs, psi0)
        phases = np.exp(-1j * np.outer(t_arr, evals) / HBAR_EV_FS)
        out = (phases * coeff[None, :]) @ vecs.T
    return out[0] if np.isscalar(t) or np.ndim(t) == 0 else out


def sample_couplings(mean, std, n, seed):
    """``n`` couplings drawn from Normal(mean, std), in eV.

    Uses numpy's PCG64 generator via ``default_rng(seed)`` with
    ``standard_normal`` (ziggurat); a fixed seed gives a bit-identical
    list on any platform for a given numpy release.  Negative draws are
    kept: the sign of a coupling is a phase gauge on that dot and does
    not change populations or concurrences.
    """
    if n < 1:
        raise InvalidArgumentError("n must be >= 1")
    rng = np.random.default_rng(seed)
    return mean + std * rng.standard_normal(n)


@dataclass
class ManifoldResult:
    trajectory: Trajectory
    concurrence_times: np.ndarray
    average_concurrence: np.ndarray
    couplings: np.ndarray
    mode: str
    seed: int
    amplitudes: np.ndarray   # (n_rec, N+1)


def run_fifty_dot_scenario(
    params,
    mode: str = "homogeneous",
    seed: int = 0,
    t_end: float = 2500.0,
    sample_dt: float = 1.0,
    n_dots: int = 50,
    coupling_mean: float = None,
    coupling_std: float = None,
):
    """Undriven many-dot run with dot 1 initially excited.

    ``mode`` selects homogeneous couplings (all equal to the mean) or
    inhomogeneous ones sampled from Normal(mean, std).  Returns the
    trajectory, the average bipartite concurrence series and metadata.
    The manifold is only closed without driving, so a drive is rejected.
    """
    if params.E_L != 0.0:
        raise InvalidArgumentError("manifold propagation requires E_L = 0 (no drive)")
    mean = params.g[0] if coupling_mean is None else float(coupling_mean)
    std = mean if coupling_std is None else float(coupling_std)
    if mode == "homogeneous":
        couplings = np.full(n_dots, mean)
    elif mode == "inhomogeneous":
        couplings = sample_couplings(mean, std, n_dots, seed)
    else:
        raise InvalidArgumentError(f"unknown mode {mode!r}")
    ham = build_manifold_hamiltonian(params, couplings)
    psi0 = np.zeros(n_dots + 1, dtype=complex)
    psi0[1] = 1.0
    n_rec = int(np.floor(t_end / sample_dt + 1e-9)) + 1
    times = sample_dt * np.arange(n_rec)
    amps = eigen_propagate(ham, psi0, times)
    pops = np.abs(amps) ** 2
    avg_c = np.array([average_bipartite_concurrence(a, n_dots) for a in amps])
    traj = Trajectory(
        times=times,
        dot_pops=pops[:, 1:],
        plasmon_pop=pops[:, 0],
        mu=np.zeros(n_rec),
        norm_or_trace=np.sqrt(pops.sum(axis=1)),
        kind="nonhermitian",
    )
    return ManifoldResult(
        trajectory=traj,
        concurrence_times=times.copy(),
        average_concurrence=avg_c,
        couplings=np.asarray(couplings, dtype=float),
        mode=mode,
        seed=seed,
        amplitudes=amps,
    )
