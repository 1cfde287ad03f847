import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _oracles import HBAR_C, trapezoid_energy
from eccentric_casimir.core import CylinderPlane, EccentricCylinders
from eccentric_casimir.ideal_forces import (
    energy_per_area_pp,
    force_cylinder_plane,
    force_eccentric_closed_form,
)
from eccentric_casimir.pfa import (
    PlatePlateEnergyProfile,
    ProfileEvaluationFailure,
    StencilOutOfDomain,
    cylinder_plane_pfa,
    dA_eff_of_theta,
    force_from_energy,
    force_integral_leading_order,
    ideal_profile,
    interaction_energy,
    leading_order_integral,
    r_of_theta,
)

UM = 1e-6
REF = EccentricCylinders(100 * UM, 101 * UM, 5e-3)
IDEAL = ideal_profile()
SLOW = settings(max_examples=15, deadline=None)


def test_coaxial_energy_constant_integrand():
    E = interaction_energy(REF, IDEAL).value
    expected = 2 * math.pi * REF.L * math.sqrt(REF.a * REF.b) * energy_per_area_pp(REF.b - REF.a)
    assert E == pytest.approx(expected, rel=1e-12)


def test_energy_against_trapezoid_oracle():
    g = REF.with_epsilon(0.5 * UM)
    res = interaction_energy(g, IDEAL)
    oracle = trapezoid_energy(g.a, g.b, g.L, g.epsilon, lambda l: -math.pi**2 * HBAR_C / (720 * l**3))
    assert res.value < 0
    assert abs(res.value / oracle - 1) < 1e-8
    assert res.abs_error_estimate / abs(res.value) < 1e-8
    assert res.evaluations > 0


def test_energy_strictly_decreasing_in_offset():
    E = [interaction_energy(REF.with_epsilon(k * 0.1 * UM), IDEAL).value for k in range(10)]
    assert all(x > y for x, y in zip(E, E[1:]))


def test_coaxial_force_is_zero():
    res = force_from_energy(REF, IDEAL)
    assert abs(res.value) <= 10 * res.abs_error_estimate + 1e-30


def test_tolerance_self_consistency():
    g = REF.with_epsilon(0.5 * UM)
    tight = force_from_energy(g, IDEAL, rtol=1e-9)
    loose = force_from_energy(g, IDEAL, rtol=2e-9)
    assert abs(tight.value - loose.value) <= loose.abs_error_estimate


@st.composite
def geometries(draw):
    a = draw(st.floats(10 * UM, 1e-3))
    gap = draw(st.floats(0.2 * UM, 5 * UM))
    return EccentricCylinders(a, a + gap, 1e-2, draw(st.floats(0.0, 0.95)) * gap)


@SLOW
@given(geometries())
def test_error_estimates_conservative(g):
    coarse = interaction_energy(g, IDEAL, rtol=1e-8)
    fine = interaction_energy(g, IDEAL, rtol=5e-9)
    assert abs(fine.value - coarse.value) <= coarse.abs_error_estimate


@SLOW
@given(st.floats(0.05, 0.9))
def test_oracle_equivalence(et):
    g = EccentricCylinders(1000 * UM, 1001 * UM, 5e-2, et * UM)
    assert g.eps_over_b <= 1e-3
    num = force_from_energy(g, IDEAL).value
    assert abs(num / force_eccentric_closed_form(g).force - 1) < 1e-3


def test_stencil_out_of_domain():
    g = REF.with_epsilon(0.9999 * UM)
    with pytest.raises(StencilOutOfDomain):
        force_from_energy(g, IDEAL, h=1e-3 * UM)


def test_profile_failure_reported():
    bad = PlatePlateEnergyProfile(lambda l: float("nan"), "broken")
    with pytest.raises(ProfileEvaluationFailure):
        interaction_energy(REF, bad)


def test_leading_order_integral():
    assert abs(leading_order_integral(0.0).value) < 1e-15
    # I(e) = -4 pi (e + 15/4 e^3 + 35/4 e^5 + ...)
    lin = leading_order_integral(0.01).value + 4 * math.pi * 0.01
    assert lin == pytest.approx(-15 * math.pi * 1e-6 - 35 * math.pi * 1e-10, rel=1e-6)
    g = REF.with_epsilon(0.3 * UM)
    assert force_integral_leading_order(g) == pytest.approx(force_eccentric_closed_form(g).force, rel=1e-9)


def test_cylinder_plane_reproduces_ideal():
    for d in (1 * UM, 0.1 * UM):
        cp = CylinderPlane(100 * UM, 5e-3, d)
        res = cylinder_plane_pfa(cp, IDEAL)
        assert res.value == pytest.approx(force_cylinder_plane(cp, "integral"), rel=1e-8)


def test_cylinder_plane_asymptote_convergence():
    devs = []
    for x in (1e-2, 1e-3, 1e-4):
        cp = CylinderPlane(100 * UM, 5e-3, x * 100 * UM)
        devs.append(abs(cylinder_plane_pfa(cp, IDEAL).value / force_cylinder_plane(cp) - 1))
    assert devs[0] < 0.03
    assert devs[0] > devs[1] > devs[2]


def test_geometric_mean_area_is_weaker():
    cp = CylinderPlane(100 * UM, 5e-3, 1 * UM)
    gm = cylinder_plane_pfa(cp, IDEAL, area="geometric_mean").value
    bare = cylinder_plane_pfa(cp, IDEAL).value
    assert 0.99 < gm / bare < 1.0
    with pytest.raises(ValueError):
        cylinder_plane_pfa(cp, IDEAL, area="other")


@pytest.mark.parametrize("kappa", [0.5, 3.0])
def test_linearity_in_profile(kappa):
    cp = CylinderPlane(100 * UM, 5e-3, 1 * UM)
    g = REF.with_epsilon(0.4 * UM)
    scaled = IDEAL.scaled(kappa)
    assert cylinder_plane_pfa(cp, scaled).value == pytest.approx(kappa * cylinder_plane_pfa(cp, IDEAL).value, rel=1e-9)
    assert force_from_energy(g, scaled).value == pytest.approx(kappa * force_from_energy(g, IDEAL).value, rel=1e-8)


def test_stencil_derivative_without_analytic_form():
    plain = PlatePlateEnergyProfile(energy_per_area_pp, "ideal, stencil")
    for l in (0.5 * UM, 3 * UM):
        assert plain.dE_dl(l) == pytest.approx(IDEAL.dE_dl(l), rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(geometries())
def test_gap_profile_invariants(g):
    th = np.linspace(0, 2 * np.pi, 10_000, endpoint=False)
    r = r_of_theta(g, th)
    assert np.all(r - g.a > 0)
    assert np.min(r - g.a) >= g.gap * (1 - 1e-9)
    assert r_of_theta(g, -np.pi / 2) - g.a == pytest.approx(g.gap, rel=1e-9, abs=1e-18)
    dA = dA_eff_of_theta(g, th)
    assert np.all(np.isfinite(dA)) and np.all(dA > 0)
    assert dA_eff_of_theta(g.with_epsilon(0.0), th) == pytest.approx(g.L * math.sqrt(g.a * g.b), rel=1e-15)
