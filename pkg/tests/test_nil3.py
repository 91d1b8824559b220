"""Frame calculus, connection table, normals, pointwise residuals."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilmin import (DegenerateImmersionError, ImmersionSample, OutOfDiskError,
                    WirtingerJet2, abresch_rosenberg, ambient_from_frame,
                    conformality_residual, connection_coeffs,
                    covariant_accelerations, fiber_rotation, frame_coordinates,
                    gauss_from_normal, hemisphere, induced_metric_factor,
                    left_translate, matching_translation, minimality_residual,
                    unit_normal)
from nilmin.nil3 import metric_from_sample, x_z_frame
from nilmin.weierstrass import f_integrands, h_integrand, second_derivatives
from nilmin.maps import eta_from_g

# ---------------------------------------------------------------------------
# frame coordinates


def test_frame_coordinates_origin():
    assert np.allclose(frame_coordinates([0, 0, 0], [1, 0, 0]), [1, 0, 0])


def test_frame_coordinates_examples():
    # third component picks up (x2 b1 - x1 b2)/2
    assert np.allclose(frame_coordinates([1, 2, 0], [1, 0, 0]), [1, 0, 1])
    assert np.allclose(frame_coordinates([1, 2, 3], [0, 1, 0]), [0, 1, -0.5])


def test_ambient_from_frame_examples():
    assert np.allclose(ambient_from_frame([5, -7, 2], [0, 0, 1]), [0, 0, 1])
    assert np.allclose(ambient_from_frame([1, 2, 0], [1, 0, 1]), [1, 0, 0])
    assert np.allclose(ambient_from_frame([0, 0, 5], [1, 1, 0]), [1, 1, 0])


def test_round_trip_many_random_pairs():
    rng = np.random.default_rng(7)
    x = rng.normal(size=(10000, 3)) * 5
    w = rng.normal(size=(10000, 3)) * 5
    back = ambient_from_frame(x, frame_coordinates(x, w))
    scale = 1.0 + np.abs(w).max() + np.abs(x).max() ** 2
    assert np.max(np.abs(back - w)) < 1e-15 * scale


@given(st.lists(st.floats(-100, 100), min_size=6, max_size=6))
@settings(max_examples=50, deadline=None)
def test_round_trip_property(values):
    x, w = np.array(values[:3]), np.array(values[3:])
    assert np.allclose(ambient_from_frame(x, frame_coordinates(x, w)), w,
                       rtol=0, atol=1e-9 * (1 + np.abs(w).max() + np.abs(x).max() ** 2))


# ---------------------------------------------------------------------------
# connection table


def test_connection_values():
    assert np.allclose(connection_coeffs(1, 1), [0, 0, 0])
    assert np.allclose(connection_coeffs(2, 1), [0, 0, -0.5])
    assert np.allclose(connection_coeffs(3, 2), [0.5, 0, 0])


def test_connection_index_error():
    with pytest.raises(IndexError):
        connection_coeffs(0, 1)
    with pytest.raises(IndexError):
        connection_coeffs(1, 4)


def test_connection_metric_compatibility():
    # <D_i E_j, E_k> + <E_j, D_i E_k> = 0 for the orthonormal frame
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            for k in (1, 2, 3):
                lhs = connection_coeffs(i, j)[k - 1] + connection_coeffs(i, k)[j - 1]
                assert lhs == 0.0


def test_connection_torsion_free_bracket():
    # D_1 E_2 - D_2 E_1 = E_3, matching [E_1, E_2] = E_3
    diff = connection_coeffs(1, 2) - connection_coeffs(2, 1)
    assert np.allclose(diff, [0, 0, 1])


# ---------------------------------------------------------------------------
# translations and fiber rotations


def test_axis_translations():
    x = np.array([1.0, 2.0, 3.0])
    assert np.allclose(left_translate([4, 0, 0], x), [5, 2, 3 + 4 * 2 / 2])
    assert np.allclose(left_translate([0, 4, 0], x), [1, 6, 3 - 4 * 1 / 2])
    assert np.allclose(left_translate([0, 0, 4], x), [1, 2, 7])


def test_matching_translation_round_trip():
    rng = np.random.default_rng(3)
    src, dst = rng.normal(size=3), rng.normal(size=3)
    t = matching_translation(src, dst)
    assert np.allclose(left_translate(t, src), dst, atol=1e-12)


def test_fiber_rotation_is_metric_preserving_on_frames():
    # rotation fixes heights and rotates the horizontal projection
    x = np.array([[1.0, 0.0, 2.0]])
    y = fiber_rotation(np.pi / 2, x)
    assert np.allclose(y, [[0.0, 1.0, 2.0]], atol=1e-15)


# ---------------------------------------------------------------------------
# samples built from map jets


def _sample_from_jet(jet, F, h):
    A, B = f_integrands(jet)
    eta = eta_from_g(jet)
    F_zz, F_zzb, F_zbzb, eta_z, eta_zb = second_derivatives(jet)
    return ImmersionSample(
        z=0j, F=F, h=h, F_dz=A, F_dzbar=B, F_dzz=F_zz, F_dzzbar=F_zzb,
        F_dzbarzbar=F_zbzb, h_dz=h_integrand(jet, F, A, B), eta=eta,
        eta_dz=eta_z, eta_dzbar=eta_zb)


def _hemisphere_sample(z):
    surf = hemisphere()
    jet = surf.gauss_map.jet(z)
    return _sample_from_jet(jet, complex(np.asarray(surf.F(np.asarray(z)))), 0.0), jet


def _flat_sample():
    # F = z, h = 0, eta = 0: a horizontal plane through the origin
    zero = 0j
    return ImmersionSample(z=0j, F=0.3 + 0.1j, h=0.0, F_dz=1 + 0j, F_dzbar=zero,
                           F_dzz=zero, F_dzzbar=zero, F_dzbarzbar=zero,
                           h_dz=zero, eta=zero, eta_dz=zero, eta_dzbar=zero)


def test_flat_sample_accelerations_vanish():
    acc_uu, acc_vv, _ = covariant_accelerations(_flat_sample())
    assert np.allclose(acc_uu + acc_vv, 0)


def test_flat_sample_normal_is_vertical():
    n = unit_normal(_flat_sample())
    assert np.allclose(n, [0, 0, 1])
    assert abs(gauss_from_normal(n)) < 1e-12


def test_hemisphere_sample_minimal_at_origin():
    s, _ = _hemisphere_sample(0j)
    acc_uu, acc_vv, _ = covariant_accelerations(s)
    assert np.max(np.abs(acc_uu + acc_vv)) < 1e-8


def test_hemisphere_normal_third_component():
    # at z = 1/2 the map value is i/2 and the vertical normal component is
    # (1 - |g|^2)/(1 + |g|^2) = 3/5
    s, _ = _hemisphere_sample(0.5 + 0j)
    n = unit_normal(s)
    assert abs(np.linalg.norm(n) - 1.0) < 1e-14
    assert abs(n[2] - 0.6) < 1e-8


def test_cross_product_norm_display():
    # |X_u x X_v| = |F_z|^2 + |F_zbar|^2 + |eta|^2/2, and the first two
    # components match Re/Im of (eta F_zbar - conj(eta) F_z)
    s, _ = _hemisphere_sample(0.37 + 0.21j)
    Xz = x_z_frame(s)
    Xu, Xv = 2 * Xz.real, -2 * Xz.imag
    cross = np.cross(Xu, Xv)
    norm = np.linalg.norm(cross)
    assert abs(norm - metric_from_sample(s)) < 1e-9 * norm
    w = s.eta * s.F_dzbar - np.conj(s.eta) * s.F_dz
    assert abs(cross[0] - w.real) < 1e-9 * norm
    assert abs(cross[1] - w.imag) < 1e-9 * norm
    assert abs(cross[2] - (abs(s.F_dz) ** 2 - abs(s.F_dzbar) ** 2)) < 1e-9 * norm


def test_eta_matches_vertical_frame_component():
    # eta/2 must equal h_z + (x2 x1_z - x1 x2_z)/2, the frame-vertical part of X_z
    s, _ = _hemisphere_sample(0.4 + 0.3j)
    x1, x2 = s.F.real, s.F.imag
    x1_z = 0.5 * (s.F_dz + np.conj(s.F_dzbar))
    x2_z = (s.F_dz - np.conj(s.F_dzbar)) / 2j
    vertical = s.h_dz + 0.5 * (x2 * x1_z - x1 * x2_z)
    assert abs(vertical - s.eta / 2) < 1e-12


def test_degenerate_sample_raises():
    zero = 0j
    s = ImmersionSample(z=0j, F=0j, h=0.0, F_dz=zero, F_dzbar=zero, F_dzz=zero,
                        F_dzzbar=zero, F_dzbarzbar=zero, h_dz=zero, eta=zero,
                        eta_dz=zero, eta_dzbar=zero)
    with pytest.raises(DegenerateImmersionError):
        unit_normal(s)


# ---------------------------------------------------------------------------
# gauss_from_normal


def test_gauss_from_normal_poles():
    assert gauss_from_normal([0, 0, 1]) == 0j
    assert gauss_from_normal([0, 0, -1]) == complex(np.inf)
    assert abs(gauss_from_normal([1, 0, 0]) - 1.0) < 1e-12


def test_gauss_from_normal_contract():
    with pytest.raises(ValueError):
        gauss_from_normal([0.5, 0, 0])


# ---------------------------------------------------------------------------
# residual operations


def test_conformality_detector():
    s, _ = _hemisphere_sample(0.3 + 0.4j)
    assert conformality_residual(s) < 1e-10
    perturbed = ImmersionSample(
        z=s.z, F=s.F, h=s.h, F_dz=s.F_dz, F_dzbar=s.F_dzbar + 0.1, F_dzz=s.F_dzz,
        F_dzzbar=s.F_dzzbar, F_dzbarzbar=s.F_dzbarzbar, h_dz=s.h_dz, eta=s.eta,
        eta_dz=s.eta_dz, eta_dzbar=s.eta_dzbar)
    assert conformality_residual(perturbed) > 1e-3


def test_minimality_trivial_zero():
    s = _flat_sample()
    rh, rv = minimality_residual(s)
    assert rh == 0.0 and rv == 0.0


def test_metric_factor_values():
    # at the disk center: g = 0, g_z = i gives 16
    j0 = WirtingerJet2(val=0j, dz=1j, dzbar=0j, dzz=0j, dzzbar=0j, dzbarzbar=0j)
    assert abs(induced_metric_factor(j0) - 16.0) < 1e-14
    # at z = 1/2: g = i/2, |g_z| = 1 gives 16 (5/4)^2 / (3/4)^4 = 6400/81
    j = hemisphere().gauss_map.jet(0.5 + 0j)
    assert abs(induced_metric_factor(j) - 6400.0 / 81.0) < 1e-10
    jz = WirtingerJet2(val=0.2 + 0j, dz=0j, dzbar=0j, dzz=0j, dzzbar=0j,
                       dzbarzbar=0j)
    assert induced_metric_factor(jz) == 0.0


def test_metric_factor_out_of_disk():
    j = WirtingerJet2(val=1.2 + 0j, dz=1j, dzbar=0j, dzz=0j, dzzbar=0j,
                      dzbarzbar=0j)
    with pytest.raises(OutOfDiskError):
        induced_metric_factor(j)


def test_abresch_rosenberg_vanishes_on_hemisphere():
    for z in (0j, 0.5 + 0j, 0.2 - 0.6j):
        s, _ = _hemisphere_sample(z)
        assert abs(abresch_rosenberg(s)) < 1e-8


def test_accelerations_real_for_genuine_surfaces():
    s, _ = _hemisphere_sample(0.25 + 0.35j)
    acc_uu, acc_vv, acc_uv = covariant_accelerations(s)
    for acc in (acc_uu, acc_vv, acc_uv):
        assert np.max(np.abs(acc.imag)) < 1e-10
