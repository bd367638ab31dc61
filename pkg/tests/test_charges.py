"""Tests for the fifteen charges: oracles, selection rules, extrapolation."""

import math

import numpy as np
import pytest

from adspet.charges import (
    CHARGE_NAMES,
    J_ORDER,
    ChargeSet,
    charge_surface_values,
    compute_charges,
    derived,
)
from adspet.geometry import ModelConstants, QuadratureSpec
from adspet.initial_data import (
    AdsExactModel,
    OffdiagMomentumModel,
    RadialBumpModel,
)

K1 = ModelConstants(1.0)
Q_STD = QuadratureSpec(16, 16, 16, (4.0, 5.0, 6.0, 7.0))

# Independent Gauss-Legendre quadrature of the energy integrand at r = 10
# with 64 nodes per angle, frozen from a standalone script.  Its residual
# against the closed form 15 pi m / 128 is 4.13e-9.
BUMP_E0_BRUTE = 0.03681553875749043


def test_exact_ads_all_charges_vanish():
    cs = compute_charges(AdsExactModel(K1), Q_STD)
    assert np.all(np.abs(cs.values()) < 1e-10)
    assert not cs.any_diverged


def test_radial_bump_energy_against_oracles():
    cs = compute_charges(RadialBumpModel(m=0.1, sigma=4.0, constants=K1), Q_STD)
    closed = 15.0 * math.pi * 0.1 / 128.0
    assert cs.e0 == pytest.approx(BUMP_E0_BRUTE, rel=1e-6)
    assert cs.e0 == pytest.approx(closed, rel=1e-8)
    others = cs.values()[1:]
    assert np.all(np.abs(others) < 1e-8)
    assert cs.diagnostics["e0"].quadrature_converged


def test_energy_scales_with_amplitude():
    # the quadratic correction dies at infinity, so E0 is linear in m
    cs1 = compute_charges(RadialBumpModel(m=0.05, constants=K1), Q_STD)
    cs2 = compute_charges(RadialBumpModel(m=0.1, constants=K1), Q_STD)
    assert cs2.e0 == pytest.approx(2.0 * cs1.e0, rel=1e-9)


def test_energy_kappa_scaling():
    # E0 = 15 pi m / (128 kappa^2)
    k2 = ModelConstants(2.0)
    q = QuadratureSpec(16, 16, 16, (2.0, 2.5, 3.0, 3.5))
    cs = compute_charges(RadialBumpModel(m=0.1, constants=k2), q)
    assert cs.e0 == pytest.approx(15.0 * math.pi * 0.1 / (128.0 * 4.0),
                                  rel=1e-8)


def test_offdiag_momentum_selection():
    # hand-derived: h_12 = q e^{-4r} sin(theta) activates only c'_4, with
    # closed form -3 pi q / 256 from the sin^4(theta) angular moment.
    cs = compute_charges(
        OffdiagMomentumModel(q=0.05, axis=2, profile="sin_theta",
                             constants=K1), Q_STD
    )
    assert cs.cp[3] == pytest.approx(-3.0 * math.pi * 0.05 / 256.0, rel=1e-9)
    assert cs.cp[3] == pytest.approx(-0.001840776945462779, rel=1e-12)
    mask = np.abs(cs.values()) > 1e-12
    assert list(np.nonzero(mask)[0]) == [CHARGE_NAMES.index("cp4")]


def test_offdiag_momentum_linear_in_q():
    def cp4(q):
        model = OffdiagMomentumModel(q=q, axis=2, profile="sin_theta",
                                     constants=K1)
        return compute_charges(model, Q_STD).cp[3]

    assert cp4(0.1) == pytest.approx(2.0 * cp4(0.05), rel=1e-12)


def test_offdiag_angular_momentum_selection():
    # h_12 ~ sin(phi) sources exactly one angular momentum: pairing with the
    # theta leg of the (2, 4) rotation gives J_24 = -q pi^2 / 512 by hand
    # (angular moments pi/2 * pi/2 * pi, radial limit q/16).
    cs = compute_charges(
        OffdiagMomentumModel(q=0.05, axis=2, profile="sin_phi",
                             constants=K1), Q_STD
    )
    assert cs.j_component(2, 4) == pytest.approx(-0.05 * math.pi**2 / 512.0,
                                                 rel=1e-9)
    mask = np.abs(cs.values()) > 1e-12
    assert list(np.nonzero(mask)[0]) == [CHARGE_NAMES.index("j24")]


def test_surface_values_settle_with_radius():
    model = RadialBumpModel(m=0.1, constants=K1)
    v6 = charge_surface_values(model, 6.0, 16, 16, 16)[0]
    v8 = charge_surface_values(model, 8.0, 16, 16, 16)[0]
    closed = 15.0 * math.pi * 0.1 / 128.0
    assert abs(v8 - closed) < abs(v6 - closed)
    assert v8 == pytest.approx(closed, rel=1e-6)


def test_radii_schedule_stability():
    model = RadialBumpModel(m=0.1, constants=K1)
    alt = QuadratureSpec(16, 16, 16, (4.5, 5.5, 6.5, 7.5))
    cs_a = compute_charges(model, Q_STD)
    cs_b = compute_charges(model, alt)
    assert cs_a.e0 == pytest.approx(cs_b.e0, rel=1e-9)


def test_charge_set_j_component():
    j = np.arange(1.0, 7.0)
    cs = ChargeSet(e0=1.0, c=np.zeros(4), cp=np.zeros(4), j=j)
    assert cs.j_component(1, 2) == 1.0
    assert cs.j_component(2, 1) == -1.0
    assert cs.j_component(3, 4) == 6.0
    assert cs.j_component(2, 2) == 0.0
    assert J_ORDER.index((1, 2)) == 0


def test_derived_quantities_examples():
    cs = ChargeSet(e0=2.0, c=np.zeros(4), cp=np.zeros(4),
                   j=np.array([1.0, 0, 0, 0, 0, 0]))  # J12 = 1
    d = derived(cs)
    assert np.allclose(d.jhat, [0.0, 0.0, 1.0])
    assert d.l_squared == pytest.approx(2.0)
    assert d.a_total == pytest.approx(1.0)

    cs2 = ChargeSet(e0=3.0, c=np.array([0, 0, 0, 3.0]), cp=np.zeros(4),
                    j=np.zeros(6))
    d2 = derived(cs2)
    assert d2.a_total == pytest.approx(9.0)
    assert d2.l_squared == 0.0


def test_charge_set_as_dict():
    cs = ChargeSet(e0=1.5, c=np.arange(4.0), cp=np.zeros(4), j=np.zeros(6))
    d = cs.as_dict()
    assert d["e0"] == 1.5
    assert d["c"] == [0.0, 1.0, 2.0, 3.0]
    assert d["j"]["12"] == 0.0


def test_values_ordering():
    cs = ChargeSet(e0=1.0, c=np.array([2, 3, 4, 5.0]),
                   cp=np.array([6, 7, 8, 9.0]),
                   j=np.array([10, 11, 12, 13, 14, 15.0]))
    assert np.array_equal(cs.values(), np.arange(1.0, 16.0))
    assert len(CHARGE_NAMES) == 15
