"""Pure-numpy propagation kernels.

Fallback used when the compiled extension is unavailable; same call
signatures and the same arithmetic as ``plexsim._core``.  State layouts,
collapse-operator compression and the drive formula are documented in
:mod:`plexsim.dynamics`, which is the only caller.
"""

import math

import numpy as np

HBAR_EV_FS = 0.6582119569

# cutoffs keeping subnormal floats out of the propagation (they are
# physically invisible but 10-100x slower on common hardware)
ENVELOPE_CUT = 120.0
FLUSH_FLOOR = 1e-250


def _field(t, e_l, w, t_c, tau, cw):
    if e_l == 0.0:
        return 0.0
    if cw:
        env = 1.0
    else:
        x2 = ((t - t_c) / tau) ** 2
        if x2 > ENVELOPE_CUT:
            return 0.0
        env = math.exp(-x2)
    return e_l * env * math.cos(w * t)


def _flush_tiny(arr):
    # real/imag are writable views into the complex array
    re = arr.real
    im = arr.imag
    re[np.abs(re) < FLUSH_FLOOR] = 0.0
    im[np.abs(im) < FLUSH_FLOOR] = 0.0


def _lindblad_rhs(rho, e_field, h0, hd, ops, w2):
    if e_field != 0.0:
        h = h0 + e_field * hd
    else:
        h = h0
    out = (-1j / HBAR_EV_FS) * (h @ rho - rho @ h)
    for idx, tgt, val in ops:
        out[np.ix_(tgt, tgt)] += np.outer(val, val.conj()) * rho[np.ix_(idx, idx)]
    out -= w2 * rho
    return out


def propagate_lindblad_arrays(
    rho0, h0, hd, c_idx, c_tgt, c_val, c_ptr, w, drive5,
    pop_diags, mu, t0, dt, n_steps, record_every, snapshot_every,
):
    dim = rho0.shape[0]
    e_l, w_l, t_c, tau, cw = drive5
    cw = bool(cw)
    n_rec = n_steps // record_every + 1
    n_pop = pop_diags.shape[0]
    ops = [
        (c_idx[a:b], c_tgt[a:b], c_val[a:b])
        for a, b in zip(c_ptr[:-1], c_ptr[1:])
        if b > a
    ]
    w2 = 0.5 * (w[:, None] + w[None, :])

    times = np.empty(n_rec)
    pops = np.empty((n_rec, n_pop))
    mu_ex = np.empty(n_rec)
    trace = np.empty(n_rec)
    herm = np.empty(n_rec)
    n_snap = (n_rec - 1) // snapshot_every + 1 if snapshot_every > 0 else 0
    snaps = np.empty((n_snap, dim, dim), dtype=complex)

    rho = rho0.astype(complex).copy()
    rec = 0
    snap = 0
    for step in range(n_steps + 1):
        if step % record_every == 0:
            t = t0 + step * dt
            times[rec] = t
            d = np.diagonal(rho)
            pops[rec] = (pop_diags @ d).real
            mu_ex[rec] = np.sum(mu * rho.T).real
            trace[rec] = d.sum().real
            herm[rec] = np.max(np.abs(rho - rho.conj().T))
            if snapshot_every > 0 and rec % snapshot_every == 0:
                snaps[snap] = rho
                snap += 1
            rec += 1
            _flush_tiny(rho)
        if step == n_steps:
            break
        t = t0 + step * dt
        e1 = _field(t, e_l, w_l, t_c, tau, cw)
        e2 = _field(t + 0.5 * dt, e_l, w_l, t_c, tau, cw)
        e3 = _field(t + dt, e_l, w_l, t_c, tau, cw)
        k1 = _lindblad_rhs(rho, e1, h0, hd, ops, w2)
        k2 = _lindblad_rhs(rho + (0.5 * dt) * k1, e2, h0, hd, ops, w2)
        k3 = _lindblad_rhs(rho + (0.5 * dt) * k2, e2, h0, hd, ops, w2)
        k4 = _lindblad_rhs(rho + dt * k3, e3, h0, hd, ops, w2)
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    return times, pops, mu_ex, trace, herm, snaps, rho


def propagate_schrodinger_arrays(
    psi0, h0c, hd, drive5, pop_diags, mu, t0, dt, n_steps, record_every,
):
    dim = psi0.shape[0]
    e_l, w_l, t_c, tau, cw = drive5
    cw = bool(cw)
    n_rec = n_steps // record_every + 1
    n_pop = pop_diags.shape[0]
    scale = -1j / HBAR_EV_FS

    def rhs(psi, e_field):
        if e_field != 0.0:
            return scale * (h0c @ psi + e_field * (hd @ psi))
        return scale * (h0c @ psi)

    times = np.empty(n_rec)
    pops = np.empty((n_rec, n_pop))
    mu_ex = np.empty(n_rec)
    norm = np.empty(n_rec)
    snaps = np.empty((n_rec, dim), dtype=complex)

    psi = psi0.astype(complex).copy()
    rec = 0
    for step in range(n_steps + 1):
        if step % record_every == 0:
            times[rec] = t0 + step * dt
            p2 = np.abs(psi) ** 2
            pops[rec] = pop_diags @ p2
            mu_ex[rec] = np.real(psi.conj() @ (mu @ psi))
            norm[rec] = math.sqrt(p2.sum())
            snaps[rec] = psi
            rec += 1
            _flush_tiny(psi)
        if step == n_steps:
            break
        t = t0 + step * dt
        e1 = _field(t, e_l, w_l, t_c, tau, cw)
        e2 = _field(t + 0.5 * dt, e_l, w_l, t_c, tau, cw)
        e3 = _field(t + dt, e_l, w_l, t_c, tau, cw)
        k1 = rhs(psi, e1)
        k2 = rhs(psi + (0.5 * dt) * k1, e2)
        k3 = rhs(psi + (0.5 * dt) * k2, e2)
        k4 = rhs(psi + dt * k3, e3)
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    return times, pops, mu_ex, norm, snaps, psi
