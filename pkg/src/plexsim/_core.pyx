# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled propagation kernels.

Mirrors the pure-numpy backend in ``plexsim._core_py``: fixed-step RK4 for
the density-matrix equation of motion and for the non-Hermitian wave
packet.  Hamiltonians arrive dense and are compressed to CSR here; the
collapse channels arrive as (source, target, value) triples since every
collapse operator has at most one nonzero per column.

The density-matrix loop keeps real and imaginary parts in separate
arrays: the inner loops are then plain fused real arithmetic, which the
C compiler vectorizes far better than interleaved complex values.
"""

import numpy as np

from libc.math cimport cos, exp, sqrt

cdef double HBAR = 0.6582119569

# cutoffs keeping subnormal floats out of the propagation (they are
# physically invisible but 10-100x slower on common hardware)
cdef double ENVELOPE_CUT = 120.0
cdef double FLUSH_FLOOR = 1e-250


cdef inline double _field(double t, double e_l, double w, double t_c,
                          double tau, int cw) noexcept nogil:
    cdef double x2, env
    if e_l == 0.0:
        return 0.0
    if cw:
        env = 1.0
    else:
        x2 = (t - t_c) / tau
        x2 = x2 * x2
        if x2 > ENVELOPE_CUT:
            return 0.0
        env = exp(-x2)
    return e_l * env * cos(w * t)


cdef inline double _flush1(double x) noexcept nogil:
    if x < FLUSH_FLOOR and x > -FLUSH_FLOOR:
        return 0.0
    return x


def _dense_to_csr(a):
    a = np.asarray(a)
    rows, cols = np.nonzero(a)
    data = np.ascontiguousarray(a[rows, cols], dtype=complex)
    indices = np.ascontiguousarray(cols, dtype=np.int32)
    indptr = np.ascontiguousarray(
        np.searchsorted(rows, np.arange(a.shape[0] + 1)), dtype=np.int32
    )
    return data, indices, indptr


cdef void _csr_left_split(int n, double[::1] are_, double[::1] aim_,
                          int[::1] indices, int[::1] indptr,
                          double[:, ::1] xre, double[:, ::1] xim,
                          double sre, double sim,
                          double[:, ::1] ore, double[:, ::1] oim) noexcept nogil:
    # out += scale * (A @ x), all split into real and imaginary parts
    cdef int r, p, c, j
    cdef double fre, fim
    for r in range(n):
        for p in range(indptr[r], indptr[r + 1]):
            c = indices[p]
            fre = sre * are_[p] - sim * aim_[p]
            fim = sre * aim_[p] + sim * are_[p]
            for j in range(n):
                ore[r, j] += fre * xre[c, j] - fim * xim[c, j]
                oim[r, j] += fre * xim[c, j] + fim * xre[c, j]


cdef void _csr_right_split(int n, double[::1] are_, double[::1] aim_,
                           int[::1] indices, int[::1] indptr,
                           double[:, ::1] xre, double[:, ::1] xim,
                           double sre, double sim,
                           double[:, ::1] ore, double[:, ::1] oim) noexcept nogil:
    # out += scale * (x @ A)
    cdef int r, p, c, i
    cdef double fre, fim
    for r in range(n):
        for p in range(indptr[r], indptr[r + 1]):
            c = indices[p]
            fre = sre * are_[p] - sim * aim_[p]
            fim = sre * aim_[p] + sim * are_[p]
            for i in range(n):
                ore[i, c] += fre * xre[i, r] - fim * xim[i, r]
                oim[i, c] += fre * xim[i, r] + fim * xre[i, r]


cdef void _lb_rhs(int n,
                  double[::1] h0re, double[::1] h0im, int[::1] h0i, int[::1] h0p,
                  double[::1] hdre, double[::1] hdim, int[::1] hdi, int[::1] hdp,
                  double e_field,
                  int n_ops, int[::1] cptr, int[::1] cidx, int[::1] ctgt,
                  double[::1] cvr, double[::1] cvi, double[::1] w,
                  double[:, ::1] rre, double[:, ::1] rim,
                  double[:, ::1] ore, double[:, ::1] oim) noexcept nogil:
    cdef int i, j, k, a, b, ti
    cdef double inv_h = 1.0 / HBAR
    cdef double fre, fim, vre_a, vim_a, xre, xim, half_w
    # initialize with the anticommutator term -(w_i + w_j)/2 * rho
    for i in range(n):
        for j in range(n):
            half_w = 0.5 * (w[i] + w[j])
            ore[i, j] = -half_w * rre[i, j]
            oim[i, j] = -half_w * rim[i, j]
    # -(i/hbar)(H rho - rho H); the scale -i/hbar is (0, -1/hbar)
    _csr_left_split(n, h0re, h0im, h0i, h0p, rre, rim, 0.0, -inv_h, ore, oim)
    _csr_right_split(n, h0re, h0im, h0i, h0p, rre, rim, 0.0, inv_h, ore, oim)
    if e_field != 0.0:
        _csr_left_split(n, hdre, hdim, hdi, hdp, rre, rim, 0.0, -inv_h * e_field, ore, oim)
        _csr_right_split(n, hdre, hdim, hdi, hdp, rre, rim, 0.0, inv_h * e_field, ore, oim)
    # jump terms: out[t_a, t_b] += v_a conj(v_b) rho[i_a, i_b]
    for k in range(n_ops):
        for a in range(cptr[k], cptr[k + 1]):
            i = cidx[a]
            ti = ctgt[a]
            vre_a = cvr[a]
            vim_a = cvi[a]
            for b in range(cptr[k], cptr[k + 1]):
                j = cidx[b]
                fre = vre_a * cvr[b] + vim_a * cvi[b]
                fim = vim_a * cvr[b] - vre_a * cvi[b]
                xre = rre[i, j]
                xim = rim[i, j]
                ore[ti, ctgt[b]] += fre * xre - fim * xim
                oim[ti, ctgt[b]] += fre * xim + fim * xre


def propagate_lindblad_arrays(
    rho0, h0, hd, c_idx, c_tgt, c_val, c_ptr, w, drive5,
    pop_diags, mu, t0, dt, n_steps, record_every, snapshot_every,
):
    cdef int n = rho0.shape[0]
    cdef int n_rec = n_steps // record_every + 1
    cdef int n_pop = pop_diags.shape[0]
    cdef int n_snap = (n_rec - 1) // snapshot_every + 1 if snapshot_every > 0 else 0

    h0d_, h0i_, h0p_ = _dense_to_csr(h0)
    hdd_, hdi_, hdp_ = _dense_to_csr(hd)
    mud_, mui_, mup_ = _dense_to_csr(mu)

    cdef double[::1] h0re = np.ascontiguousarray(h0d_.real)
    cdef double[::1] h0im = np.ascontiguousarray(h0d_.imag)
    cdef int[::1] h0i = h0i_, h0p = h0p_
    cdef double[::1] hdre = np.ascontiguousarray(hdd_.real)
    cdef double[::1] hdim = np.ascontiguousarray(hdd_.imag)
    cdef int[::1] hdi = hdi_, hdp = hdp_
    cdef double[::1] mud = np.ascontiguousarray(mud_.real)
    cdef int[::1] mui = mui_, mup = mup_

    c_val = np.ascontiguousarray(c_val, dtype=complex)
    cdef int[::1] cidx = np.ascontiguousarray(c_idx, dtype=np.int32)
    cdef int[::1] ctgt = np.ascontiguousarray(c_tgt, dtype=np.int32)
    cdef double[::1] cvr = np.ascontiguousarray(c_val.real)
    cdef double[::1] cvi = np.ascontiguousarray(c_val.imag)
    cdef int[::1] cptr = np.ascontiguousarray(c_ptr, dtype=np.int32)
    cdef int n_ops = cptr.shape[0] - 1
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=float)
    cdef double[:, ::1] pops_d = np.ascontiguousarray(pop_diags, dtype=float)

    cdef double e_l = drive5[0], w_l = drive5[1], t_c = drive5[2], tau = drive5[3]
    cdef int cw = 1 if drive5[4] != 0.0 else 0
    cdef double t0_ = t0, dt_ = dt
    cdef long n_steps_ = n_steps
    cdef int rec_every = record_every, snap_every = snapshot_every

    times_ = np.empty(n_rec)
    pops_ = np.empty((n_rec, n_pop))
    mu_ex_ = np.empty(n_rec)
    trace_ = np.empty(n_rec)
    herm_ = np.empty(n_rec)
    snaps_ = np.empty((n_snap, n, n), dtype=complex)
    rho0 = np.ascontiguousarray(rho0, dtype=complex)

    cdef double[::1] times = times_
    cdef double[:, ::1] pops = pops_
    cdef double[::1] mu_ex = mu_ex_
    cdef double[::1] trace = trace_
    cdef double[::1] herm = herm_
    cdef double complex[:, :, ::1] snaps = snaps_

    cdef double[:, ::1] rre = np.ascontiguousarray(rho0.real)
    cdef double[:, ::1] rim = np.ascontiguousarray(rho0.imag)
    cdef double[:, ::1] k1r = np.empty((n, n)), k1i = np.empty((n, n))
    cdef double[:, ::1] k2r = np.empty((n, n)), k2i = np.empty((n, n))
    cdef double[:, ::1] k3r = np.empty((n, n)), k3i = np.empty((n, n))
    cdef double[:, ::1] k4r = np.empty((n, n)), k4i = np.empty((n, n))
    cdef double[:, ::1] ytr = np.empty((n, n)), yti = np.empty((n, n))

    cdef long step
    cdef int rec = 0, snap = 0, i, j, p, r
    cdef double t, e1, e2, e3, dev, dre, dmi, acc

    with nogil:
        for step in range(n_steps_ + 1):
            if step % rec_every == 0:
                t = t0_ + step * dt_
                times[rec] = t
                for p in range(n_pop):
                    acc = 0.0
                    for i in range(n):
                        acc += pops_d[p, i] * rre[i, i]
                    pops[rec, p] = acc
                acc = 0.0  # Re tr(mu rho) with real-valued mu
                for r in range(n):
                    for p in range(mup[r], mup[r + 1]):
                        acc += mud[p] * rre[mui[p], r]
                mu_ex[rec] = acc
                acc = 0.0
                for i in range(n):
                    acc += rre[i, i]
                trace[rec] = acc
                dev = 0.0
                for i in range(n):
                    for j in range(n):
                        dre = rre[i, j] - rre[j, i]
                        dmi = rim[i, j] + rim[j, i]
                        dre = sqrt(dre * dre + dmi * dmi)
                        if dre > dev:
                            dev = dre
                herm[rec] = dev
                if snap_every > 0 and rec % snap_every == 0:
                    for i in range(n):
                        for j in range(n):
                            snaps[snap, i, j] = rre[i, j] + 1.0j * rim[i, j]
                    snap += 1
                rec += 1
                for i in range(n):
                    for j in range(n):
                        rre[i, j] = _flush1(rre[i, j])
                        rim[i, j] = _flush1(rim[i, j])
            if step == n_steps_:
                break
            t = t0_ + step * dt_
            e1 = _field(t, e_l, w_l, t_c, tau, cw)
            e2 = _field(t + 0.5 * dt_, e_l, w_l, t_c, tau, cw)
            e3 = _field(t + dt_, e_l, w_l, t_c, tau, cw)
            _lb_rhs(n, h0re, h0im, h0i, h0p, hdre, hdim, hdi, hdp, e1,
                    n_ops, cptr, cidx, ctgt, cvr, cvi, wv, rre, rim, k1r, k1i)
            for i in range(n):
                for j in range(n):
                    ytr[i, j] = rre[i, j] + 0.5 * dt_ * k1r[i, j]
                    yti[i, j] = rim[i, j] + 0.5 * dt_ * k1i[i, j]
            _lb_rhs(n, h0re, h0im, h0i, h0p, hdre, hdim, hdi, hdp, e2,
                    n_ops, cptr, cidx, ctgt, cvr, cvi, wv, ytr, yti, k2r, k2i)
            for i in range(n):
                for j in range(n):
                    ytr[i, j] = rre[i, j] + 0.5 * dt_ * k2r[i, j]
                    yti[i, j] = rim[i, j] + 0.5 * dt_ * k2i[i, j]
            _lb_rhs(n, h0re, h0im, h0i, h0p, hdre, hdim, hdi, hdp, e2,
                    n_ops, cptr, cidx, ctgt, cvr, cvi, wv, ytr, yti, k3r, k3i)
            for i in range(n):
                for j in range(n):
                    ytr[i, j] = rre[i, j] + dt_ * k3r[i, j]
                    yti[i, j] = rim[i, j] + dt_ * k3i[i, j]
            _lb_rhs(n, h0re, h0im, h0i, h0p, hdre, hdim, hdi, hdp, e3,
                    n_ops, cptr, cidx, ctgt, cvr, cvi, wv, ytr, yti, k4r, k4i)
            for i in range(n):
                for j in range(n):
                    rre[i, j] = rre[i, j] + (dt_ / 6.0) * (
                        k1r[i, j] + 2.0 * k2r[i, j] + 2.0 * k3r[i, j] + k4r[i, j]
                    )
                    rim[i, j] = rim[i, j] + (dt_ / 6.0) * (
                        k1i[i, j] + 2.0 * k2i[i, j] + 2.0 * k3i[i, j] + k4i[i, j]
                    )

    rho_final = np.asarray(rre) + 1j * np.asarray(rim)
    return times_, pops_, mu_ex_, trace_, herm_, snaps_, rho_final


cdef inline void _csr_matvec(int n, double complex[::1] data, int[::1] indices,
                             int[::1] indptr, double complex[::1] x,
                             double complex scale, double complex[::1] out) noexcept nogil:
    cdef int r, p
    cdef double complex acc
    for r in range(n):
        acc = 0.0
        for p in range(indptr[r], indptr[r + 1]):
            acc = acc + data[p] * x[indices[p]]
        out[r] = out[r] + scale * acc


def propagate_schrodinger_arrays(
    psi0, h0c, hd, drive5, pop_diags, mu, t0, dt, n_steps, record_every,
):
    cdef int n = psi0.shape[0]
    cdef int n_rec = n_steps // record_every + 1
    cdef int n_pop = pop_diags.shape[0]

    h0d_, h0i_, h0p_ = _dense_to_csr(h0c)
    hdd_, hdi_, hdp_ = _dense_to_csr(hd)
    mud_, mui_, mup_ = _dense_to_csr(mu)

    cdef double complex[::1] h0d = h0d_
    cdef int[::1] h0i = h0i_, h0p = h0p_
    cdef double complex[::1] hdd = hdd_
    cdef int[::1] hdi = hdi_, hdp = hdp_
    cdef double complex[::1] mud = mud_
    cdef int[::1] mui = mui_, mup = mup_
    cdef double[:, ::1] pops_d = np.ascontiguousarray(pop_diags, dtype=float)

    cdef double e_l = drive5[0], w_l = drive5[1], t_c = drive5[2], tau = drive5[3]
    cdef int cw = 1 if drive5[4] != 0.0 else 0
    cdef double t0_ = t0, dt_ = dt
    cdef long n_steps_ = n_steps
    cdef int rec_every = record_every

    times_ = np.empty(n_rec)
    pops_ = np.empty((n_rec, n_pop))
    mu_ex_ = np.empty(n_rec)
    norm_ = np.empty(n_rec)
    snaps_ = np.empty((n_rec, n), dtype=complex)
    psi_ = np.ascontiguousarray(psi0, dtype=complex).copy()
    k1_ = np.empty(n, dtype=complex)
    k2_ = np.empty(n, dtype=complex)
    k3_ = np.empty(n, dtype=complex)
    k4_ = np.empty(n, dtype=complex)
    yt_ = np.empty(n, dtype=complex)

    cdef double[::1] times = times_
    cdef double[:, ::1] pops = pops_
    cdef double[::1] mu_ex = mu_ex_
    cdef double[::1] norm = norm_
    cdef double complex[:, ::1] snaps = snaps_
    cdef double complex[::1] psi = psi_
    cdef double complex[::1] k1 = k1_, k2 = k2_, k3 = k3_, k4 = k4_, yt = yt_

    cdef double complex mih = -1.0j / HBAR
    cdef double complex acc
    cdef long step
    cdef int rec = 0, i, p, r
    cdef double t, e1, e2, e3, acc_d, re, im

    with nogil:
        for step in range(n_steps_ + 1):
            if step % rec_every == 0:
                t = t0_ + step * dt_
                times[rec] = t
                acc_d = 0.0
                for i in range(n):
                    acc_d += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
                norm[rec] = sqrt(acc_d)
                for p in range(n_pop):
                    acc_d = 0.0
                    for i in range(n):
                        acc_d += pops_d[p, i] * (
                            psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
                        )
                    pops[rec, p] = acc_d
                acc = 0.0
                for r in range(n):
                    for p in range(mup[r], mup[r + 1]):
                        acc = acc + psi[r].conjugate() * mud[p] * psi[mui[p]]
                mu_ex[rec] = acc.real
                for i in range(n):
                    snaps[rec, i] = psi[i]
                rec += 1
                for i in range(n):
                    re = _flush1(psi[i].real)
                    im = _flush1(psi[i].imag)
                    psi[i] = re + 1.0j * im
            if step == n_steps_:
                break
            t = t0_ + step * dt_
            e1 = _field(t, e_l, w_l, t_c, tau, cw)
            e2 = _field(t + 0.5 * dt_, e_l, w_l, t_c, tau, cw)
            e3 = _field(t + dt_, e_l, w_l, t_c, tau, cw)

            for i in range(n):
                k1[i] = 0.0
            _csr_matvec(n, h0d, h0i, h0p, psi, mih, k1)
            if e1 != 0.0:
                _csr_matvec(n, hdd, hdi, hdp, psi, mih * e1, k1)
            for i in range(n):
                yt[i] = psi[i] + 0.5 * dt_ * k1[i]

            for i in range(n):
                k2[i] = 0.0
            _csr_matvec(n, h0d, h0i, h0p, yt, mih, k2)
            if e2 != 0.0:
                _csr_matvec(n, hdd, hdi, hdp, yt, mih * e2, k2)
            for i in range(n):
                yt[i] = psi[i] + 0.5 * dt_ * k2[i]

            for i in range(n):
                k3[i] = 0.0
            _csr_matvec(n, h0d, h0i, h0p, yt, mih, k3)
            if e2 != 0.0:
                _csr_matvec(n, hdd, hdi, hdp, yt, mih * e2, k3)
            for i in range(n):
                yt[i] = psi[i] + dt_ * k3[i]

            for i in range(n):
                k4[i] = 0.0
            _csr_matvec(n, h0d, h0i, h0p, yt, mih, k4)
            if e3 != 0.0:
                _csr_matvec(n, hdd, hdi, hdp, yt, mih * e3, k4)

            for i in range(n):
                psi[i] = psi[i] + (dt_ / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])

    return times_, pops_, mu_ex_, norm_, snaps_, psi_
