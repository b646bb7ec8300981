"""Operator construction: ladder actions, Hamiltonian elements, collapse
channels, and the loss structure of the effective Hamiltonian."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plexsim import (
    HBAR_EV_FS,
    build_basis,
    build_collapse_operators,
    build_effective_hamiltonian,
    build_system_hamiltonian,
    default_parameters,
    dipole_operator,
    dot_lowering,
    hamiltonian_parts,
    plasmon_annihilation,
)
from plexsim.constants import DEBYE_AU_TO_EV
from plexsim.drive import DriveSpec, field_at
from plexsim.errors import InvalidArgumentError
from plexsim.operators import OperatorMatrix


def test_annihilation_ladder_amplitude(basis_1dot):
    b = plasmon_annihilation(basis_1dot).matrix
    src = basis_1dot.index_of(3, (0,))
    dst = basis_1dot.index_of(2, (0,))
    assert b[dst, src] == pytest.approx(np.sqrt(3.0))
    assert np.count_nonzero(b[:, src]) == 1


def test_dot_lowering_action(basis_2dot):
    s1 = dot_lowering(basis_2dot, 1).matrix
    src = basis_2dot.index_of(0, (1, 0))
    dst = basis_2dot.index_of(0, (0, 0))
    assert s1[dst, src] == 1.0
    # ground column is empty
    assert np.all(s1[:, dst] == 0)


def test_dot_index_out_of_range(basis_2dot):
    with pytest.raises(InvalidArgumentError):
        dot_lowering(basis_2dot, 3)
    with pytest.raises(InvalidArgumentError):
        dot_lowering(basis_2dot, 0)


def test_commutator_identity_except_top_rung(basis_1dot):
    b = plasmon_annihilation(basis_1dot).matrix
    comm = b @ b.conj().T - b.conj().T @ b
    n_pl = basis_1dot.n_pl
    for i in range(basis_1dot.dim):
        s, qs = basis_1dot.state_of(i)
        expected = 1.0 if s <= n_pl - 2 else 1.0 - n_pl
        assert comm[i, i] == pytest.approx(expected)
    assert np.max(np.abs(comm - np.diag(np.diag(comm)))) == 0.0


def test_hamiltonian_matrix_elements(set1, basis_1dot):
    h = build_system_hamiltonian(set1, basis_1dot, t=0.0, include_drive=False).matrix
    e0 = basis_1dot.index_of(0, (1,))
    g1 = basis_1dot.index_of(1, (0,))
    assert h[e0, g1] == pytest.approx(0.0108, abs=1e-15)
    assert h[g1, g1] == pytest.approx(2.042, abs=1e-15)
    assert h[e0, e0] == pytest.approx(2.042, abs=1e-15)


def test_drive_element_scale(set1, basis_1dot):
    _, hd = hamiltonian_parts(set1, basis_1dot)
    e0 = basis_1dot.index_of(0, (1,))
    g0 = basis_1dot.index_of(0, (0,))
    # dot transition element of -mu*K times the peak field amplitude
    element = abs(hd.matrix[e0, g0]) * set1.E_L
    assert element == pytest.approx(2.05e-5, rel=0.01)


@settings(max_examples=20, deadline=None)
@given(t=st.floats(-500, 5000, allow_nan=False))
def test_hamiltonian_hermitian_at_any_time(t):
    params = default_parameters(1)
    basis = build_basis(1, 4)
    h = build_system_hamiltonian(params, basis, t=t, include_drive=True).matrix
    assert np.max(np.abs(h - h.conj().T)) < 1e-12


def test_drive_linearity(set1, basis_1dot):
    t = 47.3
    h1 = build_system_hamiltonian(set1, basis_1dot, t=t).matrix
    h2 = build_system_hamiltonian(set1.with_overrides(E_L=2 * set1.E_L), basis_1dot, t=t).matrix
    e_t = field_at(DriveSpec.from_params(set1), t)
    mu = dipole_operator(set1, basis_1dot).matrix
    assert np.allclose(h2 - h1, -DEBYE_AU_TO_EV * e_t * mu, atol=1e-18)


def test_collapse_operator_structure(set1, basis_1dot):
    ops = build_collapse_operators(set1, basis_1dot)
    # per dot: emission + dephasing, then the plasmon channel
    assert len(ops) == 2 * basis_1dot.n_dots + 1
    sj = dot_lowering(basis_1dot, 1).matrix
    emission = ops[0].matrix
    assert np.allclose(emission, np.sqrt(set1.gamma1 / HBAR_EV_FS) * sj)


def test_zero_dephasing_gives_zero_operators(basis_2dot):
    params = default_parameters(2).with_overrides(gamma2_star=0.0)
    ops = build_collapse_operators(params, basis_2dot)
    for j in (1, 2):
        assert np.all(ops[2 * j - 1].matrix == 0)


def test_dot_channels_sum_to_total_rate(set1, basis_1dot):
    ops = build_collapse_operators(set1, basis_1dot)
    total = np.zeros((basis_1dot.dim, basis_1dot.dim), dtype=complex)
    for op in ops[:2]:  # the two channels of dot 1
        total += op.matrix.conj().T @ op.matrix
    sj = dot_lowering(basis_1dot, 1).matrix
    expected = (set1.gamma_total / HBAR_EV_FS) * (sj.conj().T @ sj)
    assert np.allclose(total, expected, atol=1e-18)


def test_plasmon_channel_number_scaling(set1, basis_1dot):
    op = build_collapse_operators(set1, basis_1dot)[-1].matrix
    cdc = op.conj().T @ op
    for s in range(basis_1dot.n_pl):
        i = basis_1dot.index_of(s, (0,))
        assert HBAR_EV_FS * cdc[i, i].real == pytest.approx(s * set1.gamma_pl, abs=1e-15)


def test_effective_hamiltonian_loss_diagonal(set2, basis_2dot):
    hc = build_effective_hamiltonian(set2, basis_2dot, include_drive=False).matrix
    h = build_system_hamiltonian(set2, basis_2dot, include_drive=False).matrix
    diff = hc - h
    # loss is purely diagonal with non-positive imaginary part
    assert np.max(np.abs(diff - np.diag(np.diag(diff)))) == 0.0
    assert np.all(np.imag(np.diag(diff)) <= 0)
    for i in range(basis_2dot.dim):
        s, qs = basis_2dot.state_of(i)
        expected = -0.5 * (set2.gamma_total * sum(qs) + s * set2.gamma_pl)
        assert hc[i, i].imag == pytest.approx(expected, abs=1e-15)


def test_loss_sum_rule_against_brute_force(set1):
    basis = build_basis(2, 4)
    params = default_parameters(1, n_dots=2)
    total = np.zeros((basis.dim, basis.dim), dtype=complex)
    for op in build_collapse_operators(params, basis):
        total += op.matrix.conj().T @ op.matrix
    hc = build_effective_hamiltonian(params, basis, include_drive=False).matrix
    h = build_system_hamiltonian(params, basis, include_drive=False).matrix
    assert np.allclose(hc, h - 0.5j * HBAR_EV_FS * total, atol=1e-18)


def test_vacuum_state_has_no_loss(set1, basis_1dot):
    hc = build_effective_hamiltonian(set1, basis_1dot, include_drive=False).matrix
    assert hc[0, 0].imag == 0.0


def test_zero_rates_hermitian_limit(basis_1dot):
    params = default_parameters(1).with_overrides(gamma1=0.0, gamma2_star=0.0, gamma_pl=0.0)
    hc = build_effective_hamiltonian(params, basis_1dot, include_drive=False).matrix
    h = build_system_hamiltonian(params, basis_1dot, include_drive=False).matrix
    assert np.array_equal(hc, h)


def test_operator_matrix_hermitian_flag(basis_1dot):
    bad = np.zeros((basis_1dot.dim, basis_1dot.dim), dtype=complex)
    bad[0, 1] = 1.0
    with pytest.raises(InvalidArgumentError):
        OperatorMatrix(bad, basis_1dot, hermitian=True)


def test_coupling_count_must_match_basis(set1, basis_2dot):
    with pytest.raises(InvalidArgumentError):
        build_system_hamiltonian(set1, basis_2dot)


def test_negative_rate_rejected(set1):
    with pytest.raises(InvalidArgumentError):
        set1.with_overrides(gamma1=-1e-9)
