"""Built-in surfaces: profiles, closed-form values, parameters, domains."""

import math

import numpy as np
import pytest

from nilmin import (HelicoidProfile, build_example, conjugate_semitrough,
                    harmonic_residual, helicoid, hemisphere, hopf_coefficient,
                    semitrough, translation_invariant)

# ---------------------------------------------------------------------------
# helicoid profile


def test_profile_rejects_zero_parameter():
    with pytest.raises(ValueError):
        HelicoidProfile.solve(0.0)
    with pytest.raises(ValueError):
        helicoid(0.0)


def test_profile_tangent_closed_form():
    # phi = tan(v/2) solves the profile equation with parameter 1/4
    prof = HelicoidProfile.solve(0.25)
    v = np.linspace(-1.5, 1.5, 601)
    phi, dphi, _ = prof.evaluate(v)
    assert np.max(np.abs(phi - np.tan(v / 2))) < 1e-8
    assert np.max(np.abs(dphi - 0.5 * (1 + np.tan(v / 2) ** 2))) < 1e-8
    # the domain endpoint sits at pi/2 where |phi| -> 1
    assert abs(prof.v0 - math.pi / 2) < 1e-2


def test_profile_first_integral_conserved():
    for a in (0.5, 1.0, -0.5):
        prof = HelicoidProfile.solve(a)
        assert np.max(prof.first_integral_residual()) < 1e-9


def test_profile_initial_data():
    prof = HelicoidProfile.solve(0.5)
    assert prof.initial == (0.0, math.sqrt(0.5))
    prof = HelicoidProfile.solve(-0.5)
    p0, dp0 = prof.initial
    assert dp0 == 0.0
    # root of p^2 = -a (1 - p^2)^2 in (0, 1)
    assert abs(p0 ** 2 + (-0.5) * (1 - p0 ** 2) ** 2) < 1e-12
    assert 0.0 < p0 < 1.0


def test_profile_negative_parameter_stays_positive_and_even():
    prof = HelicoidProfile.solve(-0.5)
    v = np.linspace(-0.8 * prof.v0, 0.8 * prof.v0, 101)
    phi, dphi, _ = prof.evaluate(v)
    assert np.all(phi > 0)
    assert np.max(np.abs(phi - phi[::-1])) < 1e-12      # even
    assert np.max(np.abs(dphi + dphi[::-1])) < 1e-12    # odd


def test_profile_evaluate_outside_domain():
    prof = HelicoidProfile.solve(0.5)
    with pytest.raises(ValueError):
        prof.evaluate(np.array([prof.v0 + 0.1]))


# ---------------------------------------------------------------------------
# helicoid surface values


def test_helicoid_center_F_value():
    # for the tangent profile (parameter 1/4): phi(0) = 0, phi'(0) = 1/2,
    # so F(0) = -2i (0 - 1/2) = i
    surf = helicoid(0.25)
    assert abs(complex(np.asarray(surf.F(np.asarray(0j)))) - 1j) < 1e-12


def test_helicoid_radius_trend():
    # |F| grows toward -v0 and shrinks toward +v0 (for a > 0)
    surf = helicoid(0.5)
    v = np.linspace(-0.95, 0.95, 41) * surf.profile.v0
    r = np.abs(np.asarray(surf.F(1j * v)))
    assert r[0] > 50 * r[-1]
    assert np.all(np.diff(r) < 0)


def test_helicoid_hopf_constant():
    for a in (0.5, -0.5, 1.0):
        surf = helicoid(a)
        q = hopf_coefficient(surf.gauss_map.jet(0.7 + 0.3j))
        assert abs(q - (-a)) < 1e-9


# ---------------------------------------------------------------------------
# hemisphere


def test_hemisphere_values():
    surf = hemisphere()
    assert complex(np.asarray(surf.F(np.asarray(0j)))) == 0j
    assert abs(complex(np.asarray(surf.F(np.asarray(0.5 + 0j)))) - 8.0 / 3.0) < 1e-14
    assert float(np.asarray(surf.h(np.asarray(0.3 + 0.2j)))) == 0.0
    assert surf.hopf_constant == 0j


# ---------------------------------------------------------------------------
# translation-invariant family


def test_translation_invariant_graph_identity_closed_form():
    # exact identity of the closed forms for all theta
    for theta in (0.0, 0.3, 1.0):
        surf = translation_invariant(theta)
        z = np.linspace(-1.2, 1.2, 7)[None, :] + 1j * np.linspace(-1, 1, 5)[:, None]
        F = np.asarray(surf.F(z))
        h = np.asarray(surf.h(z))
        x1, x2 = F.real, F.imag
        rhs = 0.5 * x1 * x2 + 0.5 * math.sinh(2 * theta) * (
            np.arcsinh(x2) + x2 * np.sqrt(1 + x2 ** 2))
        assert np.max(np.abs(h - rhs)) < 1e-10


def test_translation_invariant_map_is_independent_of_u():
    surf = translation_invariant(0.8)
    j1 = surf.gauss_map.jet(0.0 + 0.4j)
    j2 = surf.gauss_map.jet(5.0 + 0.4j)
    assert abs(j1.val - j2.val) < 1e-15
    assert abs(j1.dz - j2.dz) < 1e-15


def test_translation_invariant_value_on_imaginary_axis():
    # at v = 0 the map value is -i tanh(theta), inside the disk
    for theta in (0.0, 0.5, 1.5):
        g0 = complex(np.asarray(translation_invariant(theta).gauss_map.jet(0j).val))
        assert abs(g0 - (-1j * math.tanh(theta))) < 1e-14
        assert abs(g0) < 1.0


# ---------------------------------------------------------------------------
# semitrough and conjugate


def test_semitrough_values_at_base():
    surf = semitrough()
    F1 = complex(np.asarray(surf.F(np.asarray(1.0 + 0j))))
    coth1 = math.cosh(1) / math.sinh(1)
    assert abs(F1 - 1j * (coth1 - 2.0)) < 1e-14
    assert abs(float(np.asarray(surf.h(np.asarray(1.0 + 0j))))) < 1e-14


def test_semitrough_image_left_half_disk():
    surf = semitrough()
    z = np.linspace(0.2, 2.5, 12)[None, :] + 1j * np.linspace(-1.2, 1.2, 9)[:, None]
    g = np.asarray(surf.gauss_map.jet(z).val)
    assert np.all(g.real < 0)
    assert np.all(np.abs(g) < 1)


def test_conjugate_semitrough_values_at_base():
    surf = conjugate_semitrough()
    F1 = complex(np.asarray(surf.F(np.asarray(1.0 + 0j))))
    assert abs(F1 - 1j * (2.0 - math.tanh(1))) < 1e-14
    assert abs(float(np.asarray(surf.h(np.asarray(1.0 + 0j))))) < 1e-14


def test_conjugate_map_is_conjugate_of_semitrough_map():
    z = np.array([0.7 + 0.5j, 1.4 - 0.9j])
    g1 = np.asarray(semitrough().gauss_map.jet(z).val)
    g2 = np.asarray(conjugate_semitrough().gauss_map.jet(z).val)
    assert np.max(np.abs(g2 - np.conj(g1))) < 1e-14


def test_both_troughs_have_constant_hopf_minus_one():
    rng = np.random.default_rng(2)
    z = rng.uniform(0.3, 2.0, 3) + 1j * rng.uniform(-1.0, 1.0, 3)
    for surf in (semitrough(), conjugate_semitrough()):
        q = np.asarray(hopf_coefficient(surf.gauss_map.jet(z)))
        assert np.max(np.abs(q - (-1.0))) < 1e-8


# ---------------------------------------------------------------------------
# dispatcher


def test_build_example_dispatch():
    assert build_example("hemisphere").name == "hemisphere"
    assert build_example("helicoid", a=-0.5).profile.a == -0.5
    assert build_example("translation-invariant", theta=0.4).gauss_map.params == \
        (("theta", 0.4),)
    with pytest.raises(ValueError):
        build_example("nope")


def test_gallery_maps_are_harmonic_everywhere_sampled():
    for name in ("hemisphere", "translation-invariant", "helicoid",
                 "semitrough", "conjugate-semitrough"):
        surf = build_example(name, theta=0.6, a=0.5)
        Z = surf.grid.mesh()
        jets = surf.gauss_map.jet(Z)
        mask = np.asarray(surf.grid.contains(Z)) & (np.abs(np.asarray(jets.val)) < 1)
        assert np.max(np.asarray(harmonic_residual(jets))[mask]) < 1e-8
