"""Harmonicity, Hopf coefficient, disk isometries, metric factors."""

import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilmin import (DiskDomain, GaussMap, MobiusIsometry, OutOfDiskError,
                    RectDomain, WirtingerJet2, antiholomorphy_margin, eta_from_g,
                    from_callable, harmonic_residual, hemisphere, helicoid,
                    hopf_coefficient, hopf_holomorphy_residual,
                    induced_metric_factor, minkowski_factor, mobius_apply,
                    semitrough, translation_invariant)
from nilmin.maps import OutOfDomainError, conjugate_jet

# ---------------------------------------------------------------------------
# harmonic residual


def test_holomorphic_maps_are_trivially_harmonic():
    j = WirtingerJet2(val=0.3 + 0.1j, dz=0.5 + 0j, dzbar=0j, dzz=0.2j,
                      dzzbar=0j, dzbarzbar=0j)
    assert harmonic_residual(j) == 0.0


def test_antiholomorphic_maps_also_solve_the_equation():
    g = from_callable(lambda z: z.conjugate() / 2, DiskDomain(0.9))
    j = g.jet(0.2 + 0.1j)
    assert harmonic_residual(j) < 1e-9


def test_builtin_maps_are_harmonic_on_grids():
    rng = np.random.default_rng(11)
    for surf in (hemisphere(), translation_invariant(0.45), helicoid(0.5),
                 semitrough()):
        umin, umax, vmin, vmax = surf.grid.sampling.bounds() if surf.grid.sampling \
            else (surf.grid.us[0], surf.grid.us[-1], surf.grid.vs[0], surf.grid.vs[-1])
        z = rng.uniform(umin, umax, 1000) + 1j * rng.uniform(vmin, vmax, 1000)
        z = z[np.asarray(surf.gauss_map.domain.contains(z))]
        jets = surf.gauss_map.jet(z)
        keep = np.abs(np.asarray(jets.val)) < 1
        assert np.max(np.asarray(harmonic_residual(jets))[keep]) < 1e-8


def test_semitrough_jet_harmonic_at_spec_point():
    j = semitrough().gauss_map.jet(1 + 0.5j)
    assert harmonic_residual(j) < 1e-8


# ---------------------------------------------------------------------------
# antiholomorphy margin


def test_margin_hemisphere_is_one():
    g = hemisphere().gauss_map
    pts = np.linspace(-0.8, 0.8, 10)[None, :] + 1j * np.linspace(-0.5, 0.5, 7)[:, None]
    assert abs(antiholomorphy_margin(g, pts) - 1.0) < 1e-14


def test_margin_vanishes_for_antiholomorphic_map():
    g = from_callable(lambda z: z.conjugate() / 2, DiskDomain(0.9))
    pts = np.array([0.1 + 0.1j, 0.3 - 0.2j])
    assert antiholomorphy_margin(g, pts) < 1e-10


def test_margin_positive_on_helicoid_band():
    surf = helicoid(0.5)
    pts = np.linspace(0, 3, 11)[None, :] + 1j * np.linspace(-1, 1, 9)[:, None]
    assert antiholomorphy_margin(surf.gauss_map, pts) > 0.0


# ---------------------------------------------------------------------------
# Hopf coefficient and holomorphy


def test_hopf_constants():
    assert abs(hopf_coefficient(hemisphere().gauss_map.jet(0.3 + 0.2j))) == 0.0
    q = hopf_coefficient(translation_invariant(0.8).gauss_map.jet(0.4 - 0.7j))
    assert abs(q - (-0.25)) < 1e-12
    q = hopf_coefficient(semitrough().gauss_map.jet(1.2 + 0.3j))
    assert abs(q - (-1.0)) < 1e-12


def test_hopf_out_of_disk():
    j = WirtingerJet2(val=1.5 + 0j, dz=1 + 0j, dzbar=0j, dzz=0j, dzzbar=0j,
                      dzbarzbar=0j)
    with pytest.raises(OutOfDiskError):
        hopf_coefficient(j)


def test_hopf_holomorphy_residuals():
    for surf in (translation_invariant(0.5), semitrough()):
        r = hopf_holomorphy_residual(surf.gauss_map, 1.0 + 0.4j, step=1e-3)
        assert r < 1e-6
    assert hopf_holomorphy_residual(hemisphere().gauss_map, 0.2 + 0.1j) < 1e-12


def test_hopf_holomorphy_detector():
    # q of an expression with an antiholomorphic perturbation moves with it
    eps = 1e-2
    g = from_callable(lambda z: z / 2 + eps * z.conjugate() ** 2, DiskDomain(0.9),
                      step=1e-4)
    r = hopf_holomorphy_residual(g, 0.25 + 0.15j, step=1e-3)
    assert r > eps / 10


def test_holomorphy_stencil_domain_check():
    with pytest.raises(OutOfDomainError):
        hopf_holomorphy_residual(hemisphere().gauss_map, 0.9 + 0j, step=1e-1)


# ---------------------------------------------------------------------------
# eta and metric factors


def test_eta_zero_at_disk_center():
    j = WirtingerJet2(val=0j, dz=1j, dzbar=0j, dzz=0j, dzzbar=0j, dzbarzbar=0j)
    assert eta_from_g(j) == 0j


def test_eta_hemisphere_value():
    # g = i/2, g_z = i gives 8i conj(g) g_z / (3/4)^2 = 64i/9
    j = hemisphere().gauss_map.jet(0.5 + 0j)
    assert abs(eta_from_g(j) - 64j / 9) < 1e-12


def test_minkowski_factor_center():
    j = WirtingerJet2(val=0j, dz=1j, dzbar=0j, dzz=0j, dzzbar=0j, dzbarzbar=0j)
    base, ratio = minkowski_factor(j)
    assert abs(base - 16.0) < 1e-14
    assert abs(ratio - 1.0) < 1e-14


def test_minkowski_product_is_induced_metric():
    j = hemisphere().gauss_map.jet(0.5 + 0j)
    base, ratio = minkowski_factor(j)
    assert abs(base * ratio - 6400.0 / 81.0) < 1e-10
    # algebraic identity at scattered points
    for z in (0.1 + 0.6j, -0.3 + 0.2j):
        j = semitrough().gauss_map.jet(z + 1.0)
        base, ratio = minkowski_factor(j)
        assert abs(base * ratio - induced_metric_factor(j)) < 1e-12 * abs(base * ratio)


def test_minkowski_degenerate_dz():
    j = WirtingerJet2(val=0.3 + 0j, dz=0j, dzbar=1j, dzz=0j, dzzbar=0j,
                      dzbarzbar=0j)
    base, ratio = minkowski_factor(j)
    assert base == 0.0 and np.isfinite(ratio)


# ---------------------------------------------------------------------------
# Mobius isometries


def test_mobius_normalization_enforced():
    with pytest.raises(ValueError):
        MobiusIsometry(1.0, 1.0)


def test_identity_leaves_map_unchanged():
    g = hemisphere().gauss_map
    g2 = mobius_apply(MobiusIsometry.identity(), g)
    z = np.array([0.3 + 0.1j, -0.2 + 0.4j])
    j1, j2 = g.jet(z), g2.jet(z)
    for f in ("val", "dz", "dzbar", "dzz", "dzzbar", "dzbarzbar"):
        assert np.allclose(np.asarray(getattr(j1, f)), np.asarray(getattr(j2, f)),
                           atol=1e-14)


def test_rotation_multiplies_derivative_by_unit_factor():
    alpha = 0.75
    g = hemisphere().gauss_map
    g2 = mobius_apply(MobiusIsometry.rotation(alpha), g)
    z = 0.25 + 0.33j
    j1, j2 = g.jet(z), g2.jet(z)
    assert abs(j2.dz - cmath.exp(1j * alpha) * j1.dz) < 1e-14
    assert abs(abs(j2.dz) - abs(j1.dz)) < 1e-14


def test_rotation_preserves_hopf_coefficient():
    alpha = 1.1
    g = semitrough().gauss_map
    g2 = mobius_apply(MobiusIsometry.rotation(alpha), g)
    z = 0.9 + 0.2j
    assert abs(hopf_coefficient(g2.jet(z)) - hopf_coefficient(g.jet(z))) < 1e-12


def test_mobius_preserves_harmonicity():
    T = MobiusIsometry(cmath.cosh(0.6), 1j * cmath.sinh(0.6))
    for surf in (hemisphere(), semitrough()):
        g2 = mobius_apply(T, surf.gauss_map)
        z = np.array([0.5 + 0.2j, 0.8 - 0.3j]) + (1.0 if surf.name != "hemisphere" else 0.0)
        assert np.max(np.asarray(harmonic_residual(g2.jet(z)))) < 1e-8


def test_mobius_composition_matches_sequential_application():
    T1 = MobiusIsometry(cmath.cosh(0.3), 1j * cmath.sinh(0.3))
    T2 = MobiusIsometry.rotation(0.9)
    w = np.array([0.1 + 0.2j, -0.4 + 0.1j, 0.6j])
    seq = T2.apply(T1.apply(w))
    comp = T2.compose(T1).apply(w)
    assert np.max(np.abs(seq - comp)) < 1e-12


@given(st.floats(-1.2, 1.2), st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))
@settings(max_examples=40, deadline=None)
def test_mobius_maps_disk_to_disk(t, angle, warg):
    T = MobiusIsometry(cmath.cosh(t) * cmath.exp(0.5j * angle),
                       1j * cmath.sinh(t))
    w = 0.7 * cmath.exp(1j * warg)
    assert abs(T.apply(w)) < 1.0


def test_conjugating_isometry_flags_output():
    T = MobiusIsometry(1.0, 0.0, conjugate_first=True)
    g2 = mobius_apply(T, hemisphere().gauss_map)
    assert not g2.antiholomorphy_guaranteed
    # conjugated hemisphere map is antiholomorphic: margin collapses
    assert antiholomorphy_margin(g2, np.array([0.2 + 0.1j])) < 1e-14


def test_conjugate_jet_consistency():
    j = semitrough().gauss_map.jet(1.3 + 0.4j)
    cj = conjugate_jet(j)
    assert cj.val == np.conj(j.val)
    assert cj.dz == np.conj(j.dzbar)
    assert cj.dzbarzbar == np.conj(j.dzz)


# ---------------------------------------------------------------------------
# finite-difference twins


def test_fd_twin_matches_analytic_jets():
    for surf, z in ((translation_invariant(0.4), 0.3 + 0.6j),
                    (semitrough(), 1.1 - 0.5j)):
        g = surf.gauss_map
        fd = g.with_fd_jets(step=1e-4)
        j1, j2 = g.jet(z), fd.jet(z)
        assert abs(j1.val - j2.val) < 1e-13
        assert abs(j1.dz - j2.dz) < 1e-9
        assert abs(j1.dzbar - j2.dzbar) < 1e-9
        assert abs(j1.dzzbar - j2.dzzbar) < 1e-5
