"""Reconstruction of conformal minimal immersions from their disk-valued maps.

Given a harmonic, nowhere-antiholomorphic g with |g| < 1 on a simply
connected grid, the horizontal part F solves

    F_z = -4i g_z / (1-|g|^2)^2,      F_zbar = -4i g^2 conj(g_z) / (1-|g|^2)^2,

and the height solves h_z = eta/2 - (i/4)(conj(F) F_z - F conj(F_zbar)) with
eta = 8i conj(g) g_z / (1-|g|^2)^2.  Both systems are exact, so (F, h) is
recovered by Simpson quadrature along L-shaped axis-aligned paths from a base
point; path independence is verified rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

from .maps import Domain, GaussMap, antiholomorphy_margin, harmonic_residual, \
    hopf_coefficient, eta_from_g
from .nil3 import (ImmersionSample, ResidualReport, Tolerances,
                   abresch_rosenberg, conformality_residual, gauss_from_normal,
                   induced_metric_factor, metric_from_sample,
                   minimality_residual, unit_normal)
from .numerics import Polyline, WirtingerJet2

__all__ = [
    "PreconditionFailure",
    "IntegrationFailure",
    "IntegrationConfig",
    "GridSpec",
    "ImmersionGrid",
    "f_integrands",
    "h_integrand",
    "second_derivatives",
    "integrability_residual",
    "integrate_path",
    "integrate_immersion",
    "path_independence_check",
]


class PreconditionFailure(ValueError):
    """The map failed a hypothesis of the representation; lists what and where."""

    def __init__(self, failures: list[tuple[str, str]]):
        self.failures = failures
        super().__init__("; ".join(f"{name}: {detail}" for name, detail in failures))


class IntegrationFailure(RuntimeError):
    """Path-dependent quadrature beyond tolerance; the system was not exact."""


# ---------------------------------------------------------------------------
# pointwise integrands


def f_integrands(j: WirtingerJet2):
    """The pair (A, B) with dF = A dz + B dzbar, from the map jet."""
    val = np.asarray(j.val)
    m2 = np.abs(val) ** 2
    if np.any(m2 >= 1.0):
        from .nil3 import OutOfDiskError
        raise OutOfDiskError("representation integrands require |g| < 1")
    rho2 = (1.0 - m2) ** 2
    A = -4j * np.asarray(j.dz) / rho2
    B = -4j * val ** 2 * np.conj(np.asarray(j.dz)) / rho2
    return A, B


def h_integrand(j: WirtingerJet2, F, F_dz=None, F_dzbar=None):
    """h_z = eta/2 - (i/4)(conj(F) F_z - F conj(F_zbar)) at the jet's point."""
    if F_dz is None or F_dzbar is None:
        F_dz, F_dzbar = f_integrands(j)
    eta = eta_from_g(j)
    F = np.asarray(F)
    return eta / 2.0 - 0.25j * (np.conj(F) * np.asarray(F_dz)
                                - F * np.conj(np.asarray(F_dzbar)))


def second_derivatives(j: WirtingerJet2):
    """Second derivatives of F and first derivatives of eta from the map 2-jet.

    Everything follows from differentiating the representation formulas; the
    returned tuple is (F_zz, F_zzbar, F_zbarzbar, eta_z, eta_zbar).
    """
    w = np.asarray(j.val)
    wz = np.asarray(j.dz)
    wzb = np.asarray(j.dzbar)
    wzz = np.asarray(j.dzz)
    wzzb = np.asarray(j.dzzbar)
    wzbzb = np.asarray(j.dzbarzbar)
    cw = np.conj(w)
    rho = 1.0 - np.abs(w) ** 2
    rho_z = -(wz * cw + w * np.conj(wzb))
    rho_zb = np.conj(rho_z)
    rho3 = rho ** 3

    F_zz = -4j * (wzz * rho - 2.0 * wz * rho_z) / rho3
    F_zzb = -4j * (wzzb * rho - 2.0 * wz * rho_zb) / rho3
    F_zbzb = -4j * ((2.0 * w * wzb * np.conj(wz) + w ** 2 * np.conj(wzz)) * rho
                    - 2.0 * w ** 2 * np.conj(wz) * rho_zb) / rho3
    eta_z = 8j * ((np.conj(wzb) * wz + cw * wzz) * rho - 2.0 * cw * wz * rho_z) / rho3
    eta_zb = 8j * ((np.conj(wz) * wz + cw * wzzb) * rho - 2.0 * cw * wz * rho_zb) / rho3
    return F_zz, F_zzb, F_zbzb, eta_z, eta_zb


def integrability_residual(g: GaussMap, z, step: float = 1e-3):
    """Exactness defect of the horizontal system, by differencing.

    Estimates |d/dzbar A - d/dz B| with fourth-order stencils and
    cross-checks both sides against the closed form
    -8i g g_z conj(g_z) / (1-|g|^2)^3; returns the largest of the three
    discrepancies.  Bounded away from zero exactly on non-harmonic maps.
    """
    from .maps import _check_stencil, _derived_dz_fd, _derived_dzbar_fd
    _check_stencil(g, z, step)
    z = np.asarray(z, dtype=complex)

    def A_of(zz):
        return np.asarray(f_integrands(g.jet(zz))[0])

    def B_of(zz):
        return np.asarray(f_integrands(g.jet(zz))[1])

    A_zb = _derived_dzbar_fd(A_of, z, step)
    B_z = _derived_dz_fd(B_of, z, step)
    j = g.jet(z)
    m2 = np.abs(np.asarray(j.val)) ** 2
    closed = -8j * np.asarray(j.val) * np.asarray(j.dz) * np.conj(np.asarray(j.dz)) \
        / (1.0 - m2) ** 3
    return np.maximum(np.abs(A_zb - B_z),
                      np.maximum(np.abs(A_zb - closed), np.abs(B_z - closed)))


# ---------------------------------------------------------------------------
# grids and configuration


@dataclass(frozen=True)
class GridSpec:
    """Cartesian sampling grid, optionally masked by a sampling region."""

    us: np.ndarray
    vs: np.ndarray
    sampling: Domain | None = None

    @classmethod
    def from_domain(cls, domain: Domain, n: int, n_v: int | None = None) -> "GridSpec":
        umin, umax, vmin, vmax = domain.bounds()
        us = np.linspace(umin, umax, n)
        vs = np.linspace(vmin, vmax, n_v if n_v is not None else n)
        return cls(us=us, vs=vs, sampling=domain)

    def mesh(self) -> np.ndarray:
        return self.us[None, :] + 1j * self.vs[:, None]

    def contains(self, z):
        if self.sampling is None:
            return np.ones(np.shape(z), dtype=bool)
        return self.sampling.contains(z)

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.us[0] + self.us[-1]),
                       0.5 * (self.vs[0] + self.vs[-1]))

    def describe(self) -> str:
        base = (f"{self.us.size}x{self.vs.size} grid, "
                f"u in [{self.us[0]:g}, {self.us[-1]:g}], "
                f"v in [{self.vs[0]:g}, {self.vs[-1]:g}]")
        if self.sampling is not None:
            base += f", sampled on {self.sampling.describe()}"
        return base


@dataclass(frozen=True)
class IntegrationConfig:
    """Base point, initial values and quadrature resolution for reconstruction."""

    z0: complex | None = None
    F0: complex = 0j
    h0: float = 0.0
    subdivisions_per_unit: int = 256
    path_strategy: str = "axis-aligned"
    harmonic_tolerance: float = 1e-6
    margin_threshold: float = 1e-8
    disk_exclusion: float = 1e-6

    def __post_init__(self):
        if self.subdivisions_per_unit < 16:
            raise ValueError("subdivisions per unit length must be at least 16")
        if self.path_strategy not in ("axis-aligned", "custom"):
            raise ValueError(f"unknown path strategy {self.path_strategy!r}")


@dataclass
class ImmersionGrid:
    """Reconstructed immersion sampled on a grid, with its residual report."""

    grid: GridSpec
    gauss_map: GaussMap
    config: IntegrationConfig
    included: np.ndarray
    samples: ImmersionSample           # array-valued fields, shape (nv, nu)
    jets: WirtingerJet2
    excluded_nodes: list[tuple[int, int, str]]
    h_imag_max: float
    residual_report: ResidualReport

    def sample_at(self, i: int, j: int) -> ImmersionSample:
        """Scalar sample at row i (v index) and column j (u index)."""
        s = self.samples
        return ImmersionSample(*(np.asarray(getattr(s, f))[i, j]
                                 for f in ("z", "F", "h", "F_dz", "F_dzbar", "F_dzz",
                                           "F_dzzbar", "F_dzbarzbar", "h_dz", "eta",
                                           "eta_dz", "eta_dzbar")))

    def included_samples(self) -> ImmersionSample:
        """Flat sample over included nodes only."""
        m = self.included
        s = self.samples
        return ImmersionSample(*(np.asarray(getattr(s, f))[m]
                                 for f in ("z", "F", "h", "F_dz", "F_dzbar", "F_dzz",
                                           "F_dzzbar", "F_dzbarzbar", "h_dz", "eta",
                                           "eta_dz", "eta_dzbar")))


# ---------------------------------------------------------------------------
# quadrature along straight lines, with F cached at the height-integrand nodes


def _panel_count(length: float, per_unit: int) -> int:
    return max(2, int(math.ceil(length * per_unit)))


def _advance_straight(g: GaussMap, z_start: np.ndarray, direction: complex,
                      length: float, n_panels: int, F_start: np.ndarray,
                      h_start: np.ndarray):
    """March (F, h) along straight segments z_start + direction * [0, length].

    z_start, F_start, h_start are broadcast 1-D arrays (one entry per parallel
    line).  F is integrated by composite Simpson on panels of half the height
    panel width, so its values are available at every height-quadrature node;
    h then integrates the real 1-form h_z dz + conj(h_z dz) on the coarser
    panels.  Returns (F_end, h_end_complex) where the imaginary part of the
    height increment is kept for monitoring.
    """
    n = n_panels
    s = np.linspace(0.0, length, 4 * n + 1)
    z = z_start[None, :] + direction * s[:, None]
    jets = g.jet_fn(z)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        A, B = f_integrands_unchecked(jets)
        fm = A * direction + B * np.conj(direction)
        wF = length / (2 * n)
        contrib_F = (wF / 6.0) * (fm[0:-1:2] + 4.0 * fm[1::2] + fm[2::2])
        F_even = np.concatenate([np.zeros((1,) + F_start.shape, dtype=complex),
                                 np.cumsum(contrib_F, axis=0)], axis=0) + F_start[None, :]
        eta = eta_from_g_unchecked(jets)
        hz = eta[0::2] / 2.0 - 0.25j * (np.conj(F_even) * A[0::2]
                                        - F_even * np.conj(B[0::2]))
        r = hz * direction
        r = r + np.conj(r)
        wH = length / n
        contrib_h = (wH / 6.0) * (r[0:-1:2] + 4.0 * r[1::2] + r[2::2])
        h_end = h_start.astype(complex) + np.sum(contrib_h, axis=0)
    return F_even[-1], h_end


def f_integrands_unchecked(j: WirtingerJet2):
    # used inside quadrature where out-of-disk points are masked afterwards
    val = np.asarray(j.val)
    rho2 = (1.0 - np.abs(val) ** 2) ** 2
    A = -4j * np.asarray(j.dz) / rho2
    B = -4j * val ** 2 * np.conj(np.asarray(j.dz)) / rho2
    return A, B


def eta_from_g_unchecked(j: WirtingerJet2):
    val = np.asarray(j.val)
    return 8j * np.conj(val) * np.asarray(j.dz) / (1.0 - np.abs(val) ** 2) ** 2


def _march_targets(g: GaussMap, z_start: complex, direction: complex,
                   offsets: np.ndarray, F0: complex, h0: float, per_unit: int):
    """States at increasing offsets along one line from a scalar start."""
    F = np.array([F0], dtype=complex)
    h = np.array([h0], dtype=complex)
    z = complex(z_start)
    out_F, out_h = [], []
    prev = 0.0
    for off in offsets:
        length = float(off - prev)
        if length > 0.0:
            F, h = _advance_straight(g, np.array([z]), direction, length,
                                     _panel_count(length, per_unit), F, h)
            z = z_start + direction * off
        out_F.append(complex(F[0]))
        out_h.append(complex(h[0]))
        prev = off
    return np.array(out_F), np.array(out_h)


def integrate_path(g: GaussMap, path: Polyline, F0: complex, h0: float,
                   subdivisions_per_unit: int = 256):
    """(F, h) at the end of a polyline, plus the height-imaginary monitor."""
    F = np.array([complex(F0)])
    h = np.array([complex(h0)])
    for a, b in zip(path.vertices, path.vertices[1:]):
        seg = b - a
        length = abs(seg)
        direction = seg / length
        F, h = _advance_straight(g, np.array([complex(a)]), direction, length,
                                 _panel_count(length, subdivisions_per_unit), F, h)
    return complex(F[0]), float(h[0].real), float(abs(h[0].imag))


# ---------------------------------------------------------------------------
# grid reconstruction


def _precondition_failures(g: GaussMap, jets: WirtingerJet2, included: np.ndarray,
                           Z: np.ndarray, cfg: IntegrationConfig, z0: complex):
    failures: list[tuple[str, str]] = []
    if not included.any():
        failures.append(("containment", "no grid node keeps |g| inside the unit disk"))
        return failures
    vals = np.asarray(jets.val)
    harm = np.asarray(harmonic_residual(jets))
    hsel = harm[included]
    if hsel.max() > cfg.harmonic_tolerance:
        k = int(np.argmax(hsel))
        where = np.asarray(Z)[included][k]
        failures.append(("harmonicity",
                         f"sup residual {hsel.max():.3e} at z = {where:.6g} "
                         f"(threshold {cfg.harmonic_tolerance:g})"))
    margin = np.abs(np.asarray(jets.dz))[included]
    if margin.min() < cfg.margin_threshold:
        k = int(np.argmin(margin))
        where = np.asarray(Z)[included][k]
        failures.append(("antiholomorphy",
                         f"margin {margin.min():.3e} at z = {where:.6g} "
                         f"(threshold {cfg.margin_threshold:g})"))
    j0 = g.jet(z0)
    if abs(complex(np.asarray(j0.val))) > 1.0 - cfg.disk_exclusion:
        failures.append(("base point", f"|g(z0)| too close to 1 at z0 = {z0:.6g}"))
    return failures


def integrate_immersion(g: GaussMap, grid: GridSpec,
                        cfg: IntegrationConfig = IntegrationConfig(),
                        tolerances: Tolerances = Tolerances()) -> ImmersionGrid:
    """Reconstruct the immersion on a rectangular grid.

    Grid nodes whose map value comes within `cfg.disk_exclusion` of the unit
    circle are excluded and reported, as are nodes cut off from the base
    point by such exclusions.  Raises PreconditionFailure when the map is
    not harmonic, not nowhere-antiholomorphic, or the base point is bad.
    Deterministic: two runs with identical inputs agree bitwise.
    """
    Z = grid.mesh()
    jets = g.jet(Z)
    sampling_ok = np.broadcast_to(grid.contains(Z) & g.domain.contains(Z), Z.shape)
    absg = np.abs(np.asarray(jets.val))
    near_circle = absg > 1.0 - cfg.disk_exclusion
    included = sampling_ok & ~near_circle

    excluded: list[tuple[int, int, str]] = [
        (int(i), int(j), f"|g| = {absg[i, j]:.9f} within {cfg.disk_exclusion:g} of 1")
        for i, j in zip(*np.nonzero(sampling_ok & near_circle))
    ]

    z0 = complex(cfg.z0) if cfg.z0 is not None else grid.center
    failures = _precondition_failures(g, jets, included, Z, cfg, z0)
    if failures:
        raise PreconditionFailure(failures)

    us, vs = grid.us, grid.vs
    u0, v0 = z0.real, z0.imag
    S = cfg.subdivisions_per_unit

    # virtual base row at v = v0: states at every (u_j, v0)
    nu, nv = us.size, vs.size
    F_row = np.empty(nu, dtype=complex)
    h_row = np.empty(nu, dtype=complex)
    right = np.nonzero(us >= u0)[0]
    left = np.nonzero(us < u0)[0]
    if right.size:
        offs = us[right] - u0
        Fr, hr = _march_targets(g, complex(u0, v0), 1.0 + 0j, offs, cfg.F0, cfg.h0, S)
        F_row[right], h_row[right] = Fr, hr
    if left.size:
        offs = u0 - us[left][::-1]
        Fl, hl = _march_targets(g, complex(u0, v0), -1.0 + 0j, offs, cfg.F0, cfg.h0, S)
        F_row[left[::-1]], h_row[left[::-1]] = Fl, hl

    # columns: march all u simultaneously, upward then downward from v0
    Fg = np.full(Z.shape, np.nan, dtype=complex)
    hg = np.full(Z.shape, np.nan, dtype=complex)

    for sign in (+1.0, -1.0):
        if sign > 0:
            rows = np.nonzero(vs >= v0)[0]
            ordered = rows
        else:
            rows = np.nonzero(vs < v0)[0]
            ordered = rows[::-1]
        if not ordered.size:
            continue
        F = F_row.copy()
        h = h_row.copy()
        z_line = us + 1j * v0
        v_prev = v0
        for i in ordered:
            length = abs(vs[i] - v_prev)
            if length > 0.0:
                F, h = _advance_straight(g, z_line, sign * 1j, length,
                                         _panel_count(length, S), F, h)
                z_line = us + 1j * vs[i]
            Fg[i, :] = F
            hg[i, :] = h
            v_prev = vs[i]

    # nodes behind an excluded node (walking away from the base row) are
    # unreachable by the L-paths; drop and report them
    i_base_up = int(np.searchsorted(vs, v0))
    for j in range(nu):
        for rng in (range(i_base_up, nv), range(i_base_up - 1, -1, -1)):
            blocked = False
            for i in rng:
                if blocked and included[i, j]:
                    included[i, j] = False
                    excluded.append((i, j, "unreachable behind an excluded node"))
                if not included[i, j]:
                    blocked = True

    h_imag = np.abs(hg.imag)[included]
    h_imag_max = float(h_imag.max()) if h_imag.size else 0.0

    Fg[~included] = np.nan
    hg[~included] = np.nan

    A, B = f_integrands_unchecked(jets)
    eta = eta_from_g_unchecked(jets)
    F_zz, F_zzb, F_zbzb, eta_z, eta_zb = second_derivatives(jets)
    h_dz = eta / 2.0 - 0.25j * (np.conj(Fg) * A - Fg * np.conj(B))
    samples = ImmersionSample(
        z=Z, F=Fg, h=hg.real, F_dz=A, F_dzbar=B, F_dzz=F_zz, F_dzzbar=F_zzb,
        F_dzbarzbar=F_zbzb, h_dz=h_dz, eta=eta, eta_dz=eta_z, eta_dzbar=eta_zb,
    )

    result = ImmersionGrid(
        grid=grid, gauss_map=g, config=replace(cfg, z0=z0), included=included,
        samples=samples, jets=jets, excluded_nodes=excluded,
        h_imag_max=h_imag_max, residual_report=ResidualReport(),
    )
    result.residual_report = _core_residuals(result, tolerances)
    return result


def _core_residuals(res: ImmersionGrid, tol: Tolerances) -> ResidualReport:
    """Pointwise identities of the reconstructed surface, as sup-norms."""
    report = ResidualReport(grid_note=res.grid.describe())
    s = res.included_samples()
    jets = res.jets
    m = res.included

    report.add("conformality", float(np.max(conformality_residual(s))),
               tol.conformality, identity="F_z*conj(F)_z + eta^2/4 = 0")
    mh, mv = minimality_residual(s)
    report.add("minimality_horizontal", float(np.max(mh)), tol.minimality,
               identity="F_zzbar = (i/4)(conj(eta)*F_z + eta*F_zbar)")
    report.add("minimality_vertical", float(np.max(mv)), tol.minimality,
               identity="Re(eta_zbar) = 0")
    harm = np.asarray(harmonic_residual(jets))[m]
    report.add("harmonic", float(np.max(harm)), tol.harmonic,
               identity="(1-|g|^2)*g_zzbar + 2*conj(g)*g_z*g_zbar = 0")

    jet_sel = WirtingerJet2(*(np.asarray(getattr(jets, f))[m] for f in
                              ("val", "dz", "dzbar", "dzz", "dzzbar", "dzbarzbar")))
    lam = np.asarray(induced_metric_factor(jet_sel))
    rel = np.abs(np.asarray(metric_from_sample(s)) - lam) / lam
    report.add("metric_factor", float(np.max(rel)), tol.metric,
               identity="|F_z|^2 + |F_zbar|^2 + |eta|^2/2 = 16(1+|g|^2)^2|g_z|^2/(1-|g|^2)^4")

    normal = unit_normal(s)
    g_back = np.asarray(gauss_from_normal(normal))
    report.add("gauss_roundtrip", float(np.max(np.abs(g_back - np.asarray(jet_sel.val)))),
               tol.roundtrip, identity="stereographic(unit normal) = g")

    ar = np.asarray(abresch_rosenberg(s, normal))
    q = np.asarray(hopf_coefficient(jet_sel))
    report.add("ar_identity", float(np.max(np.abs(ar - 4j * q))), tol.ar_identity,
               identity="<N, D_uX_u - D_vX_v - 2i D_uX_v> - i eta^2 = 4i Q")

    report.add("h_increment_imag", res.h_imag_max, tol.h_imag,
               identity="Im of the reconstructed height increment = 0")
    return report


def path_independence_check(g: GaussMap, z_target: complex,
                            cfg: IntegrationConfig = IntegrationConfig(),
                            z0: complex | None = None) -> float:
    """Reconstruction discrepancy between the two L-shaped paths to a target.

    Exactness of the system (harmonicity of g on a simply connected domain)
    makes the true integrals path independent; what remains is the quadrature
    floor.  Returns max(|Delta F|, |Delta h|).
    """
    if z0 is None:
        if cfg.z0 is None:
            raise ValueError("a base point is required")
        z0 = complex(cfg.z0)
    z_target = complex(z_target)
    if z_target == z0:
        return 0.0
    corner1 = complex(z_target.real, z0.imag)
    corner2 = complex(z0.real, z_target.imag)
    results = []
    for corner in (corner1, corner2):
        verts = [z0]
        if corner not in (z0, z_target):
            verts.append(corner)
        verts.append(z_target)
        F, h, _ = integrate_path(g, Polyline(tuple(verts)), cfg.F0, cfg.h0,
                                 cfg.subdivisions_per_unit)
        results.append((F, h))
    (F1, h1), (F2, h2) = results
    return float(max(abs(F1 - F2), abs(h1 - h2)))
