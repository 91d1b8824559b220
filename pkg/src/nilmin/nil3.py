"""The Heisenberg group as R^3 with its standard left-invariant metric.

The metric is dx1^2 + dx2^2 + ((x2 dx1 - x1 dx2)/2 + dx3)^2.  Tangent vectors
are written either in the coordinate basis ("ambient") or in the
left-invariant orthonormal frame

    E1 = d/dx1 - (x2/2) d/dx3,   E2 = d/dx2 + (x1/2) d/dx3,   E3 = d/dx3

("frame coordinates").  Because the frame is orthonormal, frame coordinates
carry the metric as the plain dot product.  A surface point is (F, h) with
F = x1 + i x2 the horizontal projection and h = x3 the fiber height; the
vertical part of X_z is recorded as eta = 2 <E3, X_z>.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import WirtingerJet2

__all__ = [
    "DegenerateImmersionError",
    "OutOfDiskError",
    "ImmersionSample",
    "ResidualEntry",
    "ResidualReport",
    "Tolerances",
    "frame_coordinates",
    "ambient_from_frame",
    "connection_coeffs",
    "left_translate",
    "matching_translation",
    "fiber_rotation",
    "x_z_frame",
    "unit_normal",
    "gauss_from_normal",
    "conformality_residual",
    "minimality_residual",
    "covariant_accelerations",
    "induced_metric_factor",
    "metric_from_sample",
    "abresch_rosenberg",
]


class DegenerateImmersionError(ValueError):
    """The tangent plane degenerated (|X_u x X_v| below threshold)."""


class OutOfDiskError(ValueError):
    """A map value left the open unit disk where the formulas require |g| < 1."""


# ---------------------------------------------------------------------------
# frame / ambient conversions and isometries


def frame_coordinates(x, w) -> np.ndarray:
    """Coordinates of the ambient vector w at the point x in the canonical frame.

    [b1, b2, b3] at x = (x1, x2, x3) becomes [b1, b2, b3 + (x2 b1 - x1 b2)/2].
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    out = w.copy()
    out[..., 2] = w[..., 2] + 0.5 * (x[..., 1] * w[..., 0] - x[..., 0] * w[..., 1])
    return out


def ambient_from_frame(x, a) -> np.ndarray:
    """Inverse of frame_coordinates; exact round trip."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    out = a.copy()
    out[..., 2] = a[..., 2] - 0.5 * (x[..., 1] * a[..., 0] - x[..., 0] * a[..., 1])
    return out


_CONNECTION = {
    (1, 1): (0.0, 0.0, 0.0),
    (1, 2): (0.0, 0.0, 0.5),
    (1, 3): (0.0, -0.5, 0.0),
    (2, 1): (0.0, 0.0, -0.5),
    (2, 2): (0.0, 0.0, 0.0),
    (2, 3): (0.5, 0.0, 0.0),
    (3, 1): (0.0, -0.5, 0.0),
    (3, 2): (0.5, 0.0, 0.0),
    (3, 3): (0.0, 0.0, 0.0),
}


def connection_coeffs(i: int, j: int) -> np.ndarray:
    """Frame coordinates of the covariant derivative of E_j along E_i.

    The table is constant in the point; indices run over {1, 2, 3}.
    """
    if (i, j) not in _CONNECTION:
        raise IndexError(f"frame indices must lie in {{1,2,3}}, got ({i}, {j})")
    return np.array(_CONNECTION[(i, j)])


def left_translate(t, x) -> np.ndarray:
    """Left translation by t = (t1, t2, t3) applied to points x.

    (x1, x2, x3) -> (x1 + t1, x2 + t2, x3 + t3 + (t1 x2 - t2 x1)/2); the
    canonical frame is invariant under these maps.
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    out = x + t
    out[..., 2] = x[..., 2] + t[2] + 0.5 * (t[0] * x[..., 1] - t[1] * x[..., 0])
    return out


def matching_translation(src, dst) -> np.ndarray:
    """Parameters t with left_translate(t, src) == dst, for single points."""
    src = np.asarray(src, dtype=float)
    dst = np.asarray(dst, dtype=float)
    t1 = dst[0] - src[0]
    t2 = dst[1] - src[1]
    t3 = dst[2] - src[2] - 0.5 * (t1 * src[1] - t2 * src[0])
    return np.array([t1, t2, t3])


def fiber_rotation(angle: float, x) -> np.ndarray:
    """Rotation by `angle` about the vertical axis through the origin.

    Acts as (F, h) -> (e^{i angle} F, h); an isometry that rotates the frame
    horizontally and fixes E3.
    """
    x = np.asarray(x, dtype=float)
    F = (x[..., 0] + 1j * x[..., 1]) * np.exp(1j * angle)
    out = x.copy()
    out[..., 0] = F.real
    out[..., 1] = F.imag
    return out


# ---------------------------------------------------------------------------
# immersion samples and pointwise geometry


@dataclass(frozen=True)
class ImmersionSample:
    """Pointwise data of a conformal immersion X = (F, h).

    All derivative fields are Wirtinger derivatives in the conformal
    coordinate z.  Fields may hold scalars or numpy arrays of a common
    shape, so one sample object can describe a whole grid.
    """

    z: complex | np.ndarray
    F: complex | np.ndarray
    h: float | np.ndarray
    F_dz: complex | np.ndarray
    F_dzbar: complex | np.ndarray
    F_dzz: complex | np.ndarray
    F_dzzbar: complex | np.ndarray
    F_dzbarzbar: complex | np.ndarray
    h_dz: complex | np.ndarray
    eta: complex | np.ndarray
    eta_dz: complex | np.ndarray
    eta_dzbar: complex | np.ndarray

    def position(self) -> np.ndarray:
        """Model coordinates (x1, x2, x3) of the sample points."""
        F = np.asarray(self.F)
        h = np.asarray(self.h)
        return np.stack([F.real, F.imag, np.broadcast_to(h, F.shape)], axis=-1)


def x_z_frame(s: ImmersionSample) -> np.ndarray:
    """Frame coordinates of X_z: one half of [(F+conj F)_z, i(conj F-F)_z, eta]."""
    A = np.asarray(s.F_dz)
    Bc = np.conj(np.asarray(s.F_dzbar))
    comp1 = 0.5 * (A + Bc)
    comp2 = 0.5j * (Bc - A)
    comp3 = 0.5 * np.asarray(s.eta) * np.ones_like(A)
    return np.stack([comp1, comp2, comp3], axis=-1)


def unit_normal(s: ImmersionSample) -> np.ndarray:
    """Unit normal in frame coordinates, oriented by X_u x X_v.

    The cross product is taken right-handed in the orthonormal frame; its
    norm equals |F_z|^2 + |F_zbar|^2 + |eta|^2 / 2.
    """
    Xz = x_z_frame(s)
    Xu = 2.0 * Xz.real
    Xv = -2.0 * Xz.imag
    cross = np.cross(Xu, Xv)
    norm = np.linalg.norm(cross, axis=-1)
    if np.any(norm < 1e-14):
        bad = np.argmin(norm)
        raise DegenerateImmersionError(
            f"tangent cross product degenerate (norm {np.min(norm):.3e} at flat index {bad})")
    return cross / norm[..., None]


def gauss_from_normal(n) -> complex | np.ndarray:
    """Stereographic projection of a unit frame vector from the south pole.

    Returns g with n = [2 Re g, 2 Im g, 1 - |g|^2] / (1 + |g|^2); the south
    pole maps to complex infinity.  Inputs must be unit vectors to 1e-9.
    """
    n = np.asarray(n, dtype=float)
    norms = np.linalg.norm(n, axis=-1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise ValueError("gauss_from_normal requires unit vectors")
    denom = 1.0 + n[..., 2]
    south = denom < 1e-15
    with np.errstate(divide="ignore", invalid="ignore"):
        g = (n[..., 0] + 1j * n[..., 1]) / denom
    if np.ndim(g) == 0:
        return complex(np.inf) if south else complex(g)
    g = np.asarray(g, dtype=complex)
    g[south] = complex(np.inf)
    return g


def conformality_residual(s: ImmersionSample):
    """|F_z conj(F)_z + eta^2/4|; zero exactly when X is conformal."""
    return np.abs(np.asarray(s.F_dz) * np.conj(np.asarray(s.F_dzbar))
                  + np.asarray(s.eta) ** 2 / 4.0)


def minimality_residual(s: ImmersionSample):
    """Horizontal and vertical minimality defects.

    Returns (|F_zzbar - (i/4)(conj(eta) F_z + eta F_zbar)|, |2 Re eta_zbar|);
    both vanish exactly when the mean curvature does.
    """
    eta = np.asarray(s.eta)
    horis = np.abs(np.asarray(s.F_dzzbar)
                   - 0.25j * (np.conj(eta) * np.asarray(s.F_dz) + eta * np.asarray(s.F_dzbar)))
    vert = np.abs(2.0 * np.real(np.asarray(s.eta_dzbar)))
    return horis, vert


def covariant_accelerations(s: ImmersionSample):
    """Frame coordinates of the second-order data D_u X_u, D_v X_v, D_u X_v.

    Evaluated verbatim in complex arithmetic; for a genuine immersion the
    first two are real up to rounding, while the third enters the
    holomorphic-quadratic-differential combination complex-linearly.
    """
    F_dz = np.asarray(s.F_dz)
    F_dzbar = np.asarray(s.F_dzbar)
    F_dzz = np.asarray(s.F_dzz)
    F_dzzbar = np.asarray(s.F_dzzbar)
    F_dzbzb = np.asarray(s.F_dzbarzbar)
    eta = np.asarray(s.eta)
    eta_dz = np.asarray(s.eta_dz)
    eta_dzbar = np.asarray(s.eta_dzbar)

    Fu = F_dz + F_dzbar
    Fv = 1j * (F_dz - F_dzbar)
    Fuu = F_dzz + 2.0 * F_dzzbar + F_dzbzb
    Fvv = -(F_dzz - 2.0 * F_dzzbar + F_dzbzb)
    Fuv = 1j * (F_dzz - F_dzbzb)
    eta_u = eta_dz + eta_dzbar
    eta_v = 1j * (eta_dz - eta_dzbar)

    sum_uu = Fuu + np.conj(Fuu)          # (F + conj F)_uu
    dif_uu = np.conj(Fuu) - Fuu          # (conj F - F)_uu
    sum_vv = Fvv + np.conj(Fvv)
    dif_vv = np.conj(Fvv) - Fvv
    sum_uv = Fuv + np.conj(Fuv)
    dif_uv = np.conj(Fuv) - Fuv
    sum_u = Fu + np.conj(Fu)
    dif_u = np.conj(Fu) - Fu
    sum_v = Fv + np.conj(Fv)
    dif_v = np.conj(Fv) - Fv
    eta_sum = eta + np.conj(eta)
    eta_dif = eta - np.conj(eta)
    eta_sum_u = eta_u + np.conj(eta_u)
    eta_dif_u = eta_u - np.conj(eta_u)
    eta_sum_v = eta_v + np.conj(eta_v)
    eta_dif_v = eta_v - np.conj(eta_v)

    acc_uu = 0.25 * np.stack([
        2.0 * sum_uu + 1j * eta_sum * dif_u,
        2j * dif_uu - eta_sum * sum_u,
        2.0 * eta_sum_u * np.ones_like(sum_uu),
    ], axis=-1)
    acc_vv = 0.25 * np.stack([
        2.0 * sum_vv - eta_dif * dif_v,
        2j * dif_vv - 1j * eta_dif * sum_v,
        2j * eta_dif_v * np.ones_like(sum_vv),
    ], axis=-1)
    acc_uv = 0.25 * np.stack([
        2.0 * sum_uv + 0.5j * eta_sum * dif_v - 0.5 * eta_dif * dif_u,
        2j * dif_uv - 0.5 * eta_sum * sum_v - 0.5j * eta_dif * sum_u,
        (1j * eta_dif_u + eta_sum_v) * np.ones_like(sum_uv),
    ], axis=-1)
    return acc_uu, acc_vv, acc_uv


def induced_metric_factor(g_jet: WirtingerJet2):
    """Conformal factor of the induced metric: 16 (1+|g|^2)^2 |g_z|^2 / (1-|g|^2)^4."""
    val = np.asarray(g_jet.val)
    m2 = np.abs(val) ** 2
    if np.any(m2 >= 1.0):
        raise OutOfDiskError("metric factor requires |g| < 1")
    return 16.0 * (1.0 + m2) ** 2 * np.abs(np.asarray(g_jet.dz)) ** 2 / (1.0 - m2) ** 4


def metric_from_sample(s: ImmersionSample):
    """2 <X_z, X_zbar> = |F_z|^2 + |F_zbar|^2 + |eta|^2 / 2 from sample data."""
    return (np.abs(np.asarray(s.F_dz)) ** 2 + np.abs(np.asarray(s.F_dzbar)) ** 2
            + 0.5 * np.abs(np.asarray(s.eta)) ** 2)


def abresch_rosenberg(s: ImmersionSample, n=None):
    """Coefficient of the holomorphic quadratic differential of the surface.

    <N, D_u X_u - D_v X_v - 2i D_u X_v> - i eta^2, which equals 4i times the
    Hopf coefficient of the generating disk map.
    """
    if n is None:
        n = unit_normal(s)
    acc_uu, acc_vv, acc_uv = covariant_accelerations(s)
    combo = acc_uu - acc_vv - 2j * acc_uv
    n = np.asarray(n, dtype=float)
    paired = np.sum(n * combo, axis=-1)
    return paired - 1j * np.asarray(s.eta) ** 2


# ---------------------------------------------------------------------------
# residual bookkeeping


@dataclass(frozen=True)
class Tolerances:
    """Default thresholds of the verification suite, one per named check."""

    containment: float = 1e-6          # min distance of |g| to 1 (min-kind)
    antiholomorphy_margin: float = 1e-8  # min |g_z| (min-kind)
    harmonic: float = 1e-8
    conformality: float = 1e-7
    minimality: float = 1e-6
    metric: float = 1e-6
    roundtrip: float = 1e-7
    ar_identity: float = 1e-6
    integrability: float = 1e-6
    holomorphy: float = 1e-6
    hopf: float = 1e-6
    path_independence: float = 1e-8
    closed_form: float = 1e-6
    h_imag: float = 1e-9


@dataclass(frozen=True)
class ResidualEntry:
    """One verification line: a sup-norm (or margin) against its threshold."""

    value: float
    tolerance: float
    kind: str = "sup"      # "sup": pass iff value <= tolerance; "min": pass iff value >= tolerance
    identity: str = ""

    @property
    def passed(self) -> bool:
        if self.kind == "min":
            return self.value >= self.tolerance
        return self.value <= self.tolerance


@dataclass
class ResidualReport:
    """Named residual sup-norms over a sampling grid."""

    grid_note: str = ""
    entries: dict[str, ResidualEntry] = field(default_factory=dict)

    def add(self, name: str, value: float, tolerance: float,
            kind: str = "sup", identity: str = "") -> None:
        self.entries[name] = ResidualEntry(float(value), float(tolerance), kind, identity)

    def merge(self, other: "ResidualReport") -> None:
        self.entries.update(other.entries)

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries.values())

    def failures(self) -> list[str]:
        return [name for name, e in self.entries.items() if not e.passed]
