"""Compiled and pure-numpy kernels must produce the same trajectories."""

import os
import subprocess
import sys

import numpy as np
import pytest

from plexsim import build_basis, default_parameters, kernels
from plexsim.drive import DriveSpec
from plexsim.dynamics import _KernelSystem


def _both_backends():
    from plexsim import _core_py

    try:
        from plexsim import _core
    except ImportError:
        return None, _core_py
    return _core, _core_py


def test_backend_reports_name():
    assert kernels.backend_name() in ("compiled", "python")


def test_pure_python_env_override():
    code = "import plexsim.kernels as k; print(k.backend_name())"
    env = dict(os.environ, PLEXSIM_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.stdout.strip() == "python"


@pytest.fixture(scope="module")
def driven_system():
    params = default_parameters(1)
    basis = build_basis(1, 5)
    return params, basis, _KernelSystem(params, basis, DriveSpec.from_params(params))


def test_lindblad_backends_agree(driven_system):
    core, core_py = _both_backends()
    if core is None:
        pytest.skip("compiled extension unavailable")
    params, basis, sysarr = driven_system
    psi0 = basis.unit_vector(0, (0,))
    rho0 = np.outer(psi0, psi0.conj())
    args = (
        rho0, sysarr.h0, sysarr.hd,
        sysarr.c_idx, sysarr.c_tgt, sysarr.c_val, sysarr.c_ptr, sysarr.w,
        sysarr.drive5, sysarr.pop_diags, sysarr.mu,
        0.0, 0.005, 20000, 100, 10,
    )
    out_c = core.propagate_lindblad_arrays(*args)
    out_p = core_py.propagate_lindblad_arrays(*args)
    for a, b in zip(out_c, out_p):
        assert np.max(np.abs(np.asarray(a) - np.asarray(b))) < 1e-10


def test_schrodinger_backends_agree(driven_system):
    core, core_py = _both_backends()
    if core is None:
        pytest.skip("compiled extension unavailable")
    params, basis, sysarr = driven_system
    psi0 = basis.unit_vector(0, (0,))
    args = (
        psi0, sysarr.h0c, sysarr.hd, sysarr.drive5, sysarr.pop_diags, sysarr.mu,
        0.0, 0.005, 20000, 100,
    )
    out_c = core.propagate_schrodinger_arrays(*args)
    out_p = core_py.propagate_schrodinger_arrays(*args)
    for a, b in zip(out_c, out_p):
        assert np.max(np.abs(np.asarray(a) - np.asarray(b))) < 1e-10


def test_kernel_rhs_matches_reference(driven_system):
    """One RK4 step of the kernel equals a step built on the public rhs."""
    from plexsim import build_collapse_operators, lindblad_rhs
    from plexsim.drive import field_at

    params, basis, sysarr = driven_system
    rng = np.random.default_rng(7)
    a = rng.normal(size=(basis.dim, basis.dim)) + 1j * rng.normal(size=(basis.dim, basis.dim))
    rho0 = a @ a.conj().T
    rho0 /= np.trace(rho0).real
    dt = 0.004
    active = kernels
    times, pops, mu, trace, herm, snaps, rho_k = active.propagate_lindblad_arrays(
        rho0, sysarr.h0, sysarr.hd,
        sysarr.c_idx, sysarr.c_tgt, sysarr.c_val, sysarr.c_ptr, sysarr.w,
        sysarr.drive5, sysarr.pop_diags, sysarr.mu, 0.0, dt, 1, 1, 0,
    )
    ops = build_collapse_operators(params, basis)
    drive = DriveSpec.from_params(params)

    def rhs(rho, t):
        h = sysarr.h0 + field_at(drive, t) * sysarr.hd
        return lindblad_rhs(rho, h, ops)

    k1 = rhs(rho0, 0.0)
    k2 = rhs(rho0 + 0.5 * dt * k1, 0.5 * dt)
    k3 = rhs(rho0 + 0.5 * dt * k2, 0.5 * dt)
    k4 = rhs(rho0 + dt * k3, dt)
    rho_ref = rho0 + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    assert np.max(np.abs(rho_k - rho_ref)) < 1e-13
