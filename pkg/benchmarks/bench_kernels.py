"""Benchmark the compiled propagation kernels against the numpy fallback.

Times the two hot loops (density-matrix RK4 and wave-packet RK4) on the
workloads the scenarios actually run: the driven one-dot system used for
spectra (dim 10) and the strongly driven CW system (dim 30).

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from plexsim import build_basis, default_parameters
from plexsim import _core_py
from plexsim.drive import DriveSpec
from plexsim.dynamics import _KernelSystem

try:
    from plexsim import _core
except ImportError:
    _core = None


def workloads():
    p1 = default_parameters(1)
    b1 = build_basis(1, 5)
    cw = default_parameters(1).with_overrides(E_L=1.4e-6, cw_mode=True)
    b15 = build_basis(1, 15)
    return [
        ("spectrum dim=10", p1, b1, DriveSpec.from_params(p1), 20_000),
        ("cw drive dim=30", cw, b15, DriveSpec.from_params(cw), 6_000),
    ]


def time_backend(impl, kind, sysarr, basis, n_steps, dt=0.005):
    psi0 = basis.unit_vector(0, (0,) * basis.n_dots)
    if kind == "lindblad":
        rho0 = np.outer(psi0, psi0.conj())
        args = (
            rho0, sysarr.h0, sysarr.hd,
            sysarr.c_idx, sysarr.c_tgt, sysarr.c_val, sysarr.c_ptr, sysarr.w,
            sysarr.drive5, sysarr.pop_diags, sysarr.mu,
            0.0, dt, n_steps, n_steps, 0,
        )
        fn = impl.propagate_lindblad_arrays
    else:
        args = (
            psi0, sysarr.h0c, sysarr.hd, sysarr.drive5, sysarr.pop_diags,
            sysarr.mu, 0.0, dt, n_steps, n_steps,
        )
        fn = impl.propagate_schrodinger_arrays
    start = time.perf_counter()
    fn(*args)
    return (time.perf_counter() - start) / n_steps * 1e6  # us per step


def main():
    backends = [("python", _core_py)]
    if _core is not None:
        backends.insert(0, ("compiled", _core))
    print(f"{'workload':<18} {'kind':<12} " + "".join(f"{n:>12} " for n, _ in backends)
          + ("speedup" if _core is not None else ""))
    for label, params, basis, drive, n_steps in workloads():
        sysarr = _KernelSystem(params, basis, drive)
        for kind in ("lindblad", "schrodinger"):
            steps = n_steps if kind == "lindblad" else n_steps * 5
            row = [time_backend(impl, kind, sysarr, basis, steps) for _, impl in backends]
            line = f"{label:<18} {kind:<12} " + "".join(f"{t:>9.2f} us " for t in row)
            if _core is not None:
                line += f"{row[1] / row[0]:>6.1f}x"
            print(line)
    if _core is None:
        print("compiled extension not available; showing the fallback only")


if __name__ == "__main__":
    main()
