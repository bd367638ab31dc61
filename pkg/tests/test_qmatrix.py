"""Tests for the charge matrix, energy bounds, rigidity and the identity."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adspet.charges import ChargeSet, derived
from adspet.geometry import ModelConstants, QuadratureSpec
from adspet.initial_data import OffdiagMomentumModel, RadialBumpModel
from adspet.qmatrix import (
    assemble_q,
    boundary_identity,
    det_closed_form,
    psd_check,
    rigidity_check,
    sample_momenta,
    sample_psd_charges,
    theorem_bounds,
    third_minor_sum,
)
from adspet.spinors import KillingParams

K1 = ModelConstants(1.0)
Q_STD = QuadratureSpec(16, 16, 16, (4.0, 5.0, 6.0, 7.0))


def charge_set(e0=0.0, **kw):
    c = np.zeros(4)
    cp = np.zeros(4)
    j = np.zeros(6)
    order = {"12": 0, "13": 1, "14": 2, "23": 3, "24": 4, "34": 5}
    for key, val in kw.items():
        if key.startswith("c") and not key.startswith("cp"):
            c[int(key[1]) - 1] = val
        elif key.startswith("cp"):
            cp[int(key[2]) - 1] = val
        elif key.startswith("j"):
            j[order[key[1:]]] = val
    return ChargeSet(e0=e0, c=c, cp=cp, j=j)


def random_charge_set(rng, scale=1.0):
    return ChargeSet(
        e0=scale * rng.standard_normal(),
        c=scale * rng.standard_normal(4),
        cp=scale * rng.standard_normal(4),
        j=scale * rng.standard_normal(6),
    )


def test_assemble_pure_energy():
    q = assemble_q(charge_set(e0=2.0))
    assert np.array_equal(q, 2.0 * np.eye(4))


def test_assemble_c4_block_structure():
    q = assemble_q(charge_set(e0=2.0, c4=1.0))
    assert np.array_equal(q, np.diag([3.0, 3.0, 1.0, 1.0]))


def test_assemble_j12_in_l_block():
    q = assemble_q(charge_set(j12=1.0))
    expect = np.zeros((4, 4), dtype=complex)
    expect[0, 2] = 1j
    expect[2, 0] = -1j
    expect[1, 3] = -1j
    expect[3, 1] = 1j
    assert np.array_equal(q, expect)


def test_assemble_cp3_and_j34_diagonals():
    q = assemble_q(charge_set(cp3=1.0))
    assert np.array_equal(np.diag(q), np.array([1, -1, -1, 1], dtype=complex))
    q2 = assemble_q(charge_set(j34=1.0))
    assert np.array_equal(np.diag(q2), np.array([-1, 1, -1, 1], dtype=complex))


def test_energy_shift_is_identity_shift():
    rng = np.random.default_rng(2)
    cs = random_charge_set(rng)
    shifted = ChargeSet(e0=cs.e0 + 5.0, c=cs.c, cp=cs.cp, j=cs.j)
    assert np.allclose(assemble_q(shifted), assemble_q(cs) + 5.0 * np.eye(4))


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_assembled_matrix_is_hermitian(seed):
    cs = random_charge_set(np.random.default_rng(seed))
    q = assemble_q(cs)
    assert np.array_equal(q, q.conj().T)
    # trace identity: tr Q = 4 E0
    assert np.trace(q).real == pytest.approx(4.0 * cs.e0, rel=1e-12, abs=1e-12)


def test_l_block_frobenius_identity():
    rng = np.random.default_rng(9)
    for _ in range(50):
        cs = random_charge_set(rng)
        q = assemble_q(cs)
        l_block = q[:2, 2:]
        assert np.sum(np.abs(l_block) ** 2) == pytest.approx(
            derived(cs).l_squared, rel=1e-12
        )


def test_psd_check_cases():
    rep = psd_check(np.eye(4))
    assert rep.psd and rep.min_eigenvalue == pytest.approx(1.0)
    rep2 = psd_check(np.diag([1.0, 1.0, 1.0, -0.5]))
    assert not rep2.psd
    with pytest.raises(ValueError):
        psd_check(np.ones((3, 3)))
    bad = np.eye(4, dtype=complex)
    bad[0, 1] = 1j  # not Hermitian
    with pytest.raises(ValueError):
        psd_check(bad)


def test_psd_minors_agree_with_eigenvalues():
    rng = np.random.default_rng(21)
    for _ in range(100):
        cs = random_charge_set(rng)
        q = assemble_q(cs)
        rep = psd_check(q)
        eig_psd = rep.min_eigenvalue >= -1e-10 * max(1.0, abs(rep.eigenvalues).max())
        assert rep.psd == eig_psd


def test_bound_equality_c4():
    rep = theorem_bounds(charge_set(e0=1.0, c4=1.0))
    assert rep.bounds[0] == pytest.approx(1.0, abs=1e-12)
    assert rep.satisfied and abs(rep.margin) < 1e-12


def test_bound_equality_cp3():
    rep = theorem_bounds(charge_set(e0=1.0, cp3=1.0))
    assert rep.bounds[3] == pytest.approx(1.0, abs=1e-12)
    assert rep.bounds[4] == pytest.approx(1.0, abs=1e-12)
    assert rep.satisfied


def test_bound_b3_value():
    rep = theorem_bounds(charge_set(e0=1.0, cp1=1.0))
    assert rep.bounds[2] == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-12)


def test_bounds_variant_flag():
    cs = charge_set(e0=2.0, c1=1.0)
    proof = theorem_bounds(cs, "proof")
    text = theorem_bounds(cs, "theorem-text")
    # proof-variant B2 has |c'| where the text shows |c|
    assert text.bounds[1] > proof.bounds[1]
    with pytest.raises(ValueError):
        theorem_bounds(cs, "other")


def test_second_minor_inequalities_raw_forms():
    # B1 and proof-B2 restated directly from the 2x2 principal minors:
    # E0^2 >= c4^2 + (|c|^2 + |Jhat|^2 + c'_4^2)/2  and
    # E0^2 >= (|c'|^2 + |J4|^2)/2 + (|c|^2 + |Jhat|^2 + c'_4^2)/4.
    rng = np.random.default_rng(4)
    for cs in sample_psd_charges(4, 50):
        d = derived(cs)
        raw1 = math.sqrt(
            cs.c[3] ** 2 + 0.5 * (d.c3 @ d.c3 + d.jhat @ d.jhat + cs.cp[3] ** 2)
        )
        raw2 = math.sqrt(
            0.5 * (d.cp3 @ d.cp3 + d.j4 @ d.j4)
            + 0.25 * (d.c3 @ d.c3 + d.jhat @ d.jhat + cs.cp[3] ** 2)
        )
        rep = theorem_bounds(cs)
        assert rep.bounds[0] == pytest.approx(raw1, rel=1e-12)
        assert rep.bounds[1] == pytest.approx(raw2, rel=1e-12)
        assert cs.e0 >= raw1 - 1e-9
        assert cs.e0 >= raw2 - 1e-9
    del rng


def test_third_minor_sum_matches_eigenvalues():
    rng = np.random.default_rng(13)
    for _ in range(100):
        cs = random_charge_set(rng)
        eig = np.linalg.eigvalsh(assemble_q(cs))
        e3 = sum(
            eig[i] * eig[j] * eig[k]
            for i in range(4) for j in range(i + 1, 4) for k in range(j + 1, 4)
        )
        assert e3 == pytest.approx(4.0 * third_minor_sum(cs), rel=1e-10,
                                   abs=1e-10)


def test_det_closed_form_matches_eigensolver():
    rng = np.random.default_rng(31)
    for _ in range(300):
        cs = random_charge_set(rng)
        det = float(np.prod(np.linalg.eigvalsh(assemble_q(cs))))
        scale = max(abs(det), 1.0)
        assert abs(det_closed_form(cs) - det) / scale < 1e-10


def test_bounds_hold_on_psd_samples():
    for variant in ("proof", "theorem-text"):
        for cs in sample_psd_charges(0, 400):
            rep = theorem_bounds(cs, variant)
            assert rep.satisfied, (variant, cs.e0, rep.margin)


def test_third_minor_nonnegative_on_psd_samples():
    for cs in sample_psd_charges(1, 300):
        assert third_minor_sum(cs) >= -1e-10
        assert det_closed_form(cs) >= -1e-8


def test_sampler_determinism_and_prefix():
    a = sample_momenta(7, 20)
    b = sample_momenta(7, 20)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)
    # counter-based streams: shorter runs are prefixes of longer ones
    short = sample_momenta(7, 5)
    assert np.array_equal(short[1], a[1][:5])


def test_sampler_boundary_cases_touch_zero():
    e0, c, cp, j, delta = sample_momenta(3, 10)
    for i in range(0, 10, 2):
        assert delta[i] == 0.0
        q = assemble_q(ChargeSet(e0=float(e0[i]), c=c[i], cp=cp[i], j=j[i]))
        assert abs(np.linalg.eigvalsh(q)[0]) < 1e-12 * max(1.0, float(e0[i]))


def test_sampler_validation():
    with pytest.raises(ValueError):
        sample_momenta(0, 0)


def test_rigidity_trivial_and_boundary():
    assert rigidity_check(charge_set(e0=0.0)).vanishes
    # zero energy with nonzero momentum is not PSD, hence out of domain
    rep = rigidity_check(charge_set(e0=0.0, c4=1.0))
    assert not rep.in_domain and not rep.vanishes
    # strictly positive energy: the hypothesis never fires
    rep2 = rigidity_check(charge_set(e0=1.0))
    assert not rep2.in_domain


def test_boundary_identity_leading_mode():
    model = RadialBumpModel(m=0.1, sigma=4.0, constants=K1)
    lam = KillingParams(1.0, 0.0, 0.0, 0.0)
    rep = boundary_identity(model, lam, Q_STD, "leading")
    assert not rep.diverged
    assert rep.gap < 1e-8
    # for the first basis parameter the quadratic form picks out 8 pi E0
    assert rep.rhs == pytest.approx(8.0 * math.pi * 15.0 * math.pi * 0.1 / 128.0,
                                    rel=1e-8)


def test_boundary_identity_exact_mode_random_lambda():
    model = OffdiagMomentumModel(q=0.05, axis=2, profile="sin_theta",
                                 constants=K1)
    rng = np.random.default_rng(6)
    lam = KillingParams(*(rng.standard_normal(4) + 1j * rng.standard_normal(4)))
    rep = boundary_identity(model, lam, Q_STD, "exact")
    assert not rep.diverged
    assert rep.gap < 1e-8
    assert rep.lhs_imag < 1e-10


def test_boundary_identity_mode_validation():
    model = RadialBumpModel(m=0.1, constants=K1)
    with pytest.raises(ValueError):
        boundary_identity(model, KillingParams(1, 0, 0, 0), Q_STD, "bogus")
