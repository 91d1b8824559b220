"""Built-in surfaces with closed-form data, used as oracles for the pipeline.

Each gallery surface bundles a disk-valued map with analytic jets, reference
closed forms for (F, h), a default sampling grid, the constant value of its
holomorphic quadratic differential, and a few surface-specific checks.  The
reference closed forms are normalized so that they solve the representation
system with the surface's default base values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .maps import DiskDomain, GaussMap, RectDomain
from .numerics import WirtingerJet2, jet_from_uv, rk4_step
from .weierstrass import GridSpec, IntegrationConfig

__all__ = [
    "HelicoidProfile",
    "GallerySurface",
    "ExtraCheck",
    "hemisphere",
    "translation_invariant",
    "helicoid",
    "semitrough",
    "conjugate_semitrough",
    "EXAMPLE_NAMES",
    "build_example",
]


# ---------------------------------------------------------------------------
# helpers for assembling analytic jets


def _rational_jet(n: WirtingerJet2, d: WirtingerJet2) -> WirtingerJet2:
    """Jet of the quotient n/d from the jets of numerator and denominator."""
    D = np.asarray(d.val)
    un = np.asarray(n.dz) * D - np.asarray(n.val) * np.asarray(d.dz)
    ub = np.asarray(n.dzbar) * D - np.asarray(n.val) * np.asarray(d.dzbar)
    D2, D3 = D ** 2, D ** 3
    return WirtingerJet2(
        val=np.asarray(n.val) / D,
        dz=un / D2,
        dzbar=ub / D2,
        dzz=(np.asarray(n.dzz) * D - np.asarray(n.val) * np.asarray(d.dzz)) / D2
            - 2.0 * np.asarray(d.dz) * un / D3,
        dzzbar=(np.asarray(n.dzzbar) * D + np.asarray(n.dz) * np.asarray(d.dzbar)
                - np.asarray(n.dzbar) * np.asarray(d.dz)
                - np.asarray(n.val) * np.asarray(d.dzzbar)) / D2
            - 2.0 * np.asarray(d.dzbar) * un / D3,
        dzbarzbar=(np.asarray(n.dzbarzbar) * D
                   - np.asarray(n.val) * np.asarray(d.dzbarzbar)) / D2
            - 2.0 * np.asarray(d.dzbar) * ub / D3,
    )


# ---------------------------------------------------------------------------
# helicoid profile


def _profile_rhs_factory(a: float):
    def rhs(t, y):
        return np.array([y[1], y[0] - 2.0 * a * y[0] * (1.0 - y[0] ** 2)])
    return rhs


def _positive_min_root(a: float) -> float:
    """Unique p in (0, 1) with p^2 = -a (1 - p^2)^2, for a < 0.

    The bracketing function -a(1-p^2)^2 - p^2 is positive at 0, negative at
    1, and strictly decreasing; bisection converges to full precision.
    """
    lo, hi = 0.0, 1.0
    f = lambda p: -a * (1.0 - p * p) ** 2 - p * p
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16:
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class HelicoidProfile:
    """Dense samples of the planar profile ODE phi'' = phi - 2 a phi (1 - phi^2).

    The first integral (phi')^2 - phi^2 = a (1 - phi^2)^2 pins the initial
    data: for a > 0, phi(0) = 0 with phi'(0) = sqrt(a) (odd solution); for
    a < 0, phi(0) is the positive root of p^2 = -a (1 - p^2)^2 with
    phi'(0) = 0 (even solution).  Sampling halts once |phi| reaches
    1 - 1e-6; `v0` is the detected half-width of the open interval on which
    the profile stays inside (-1, 1).
    """

    a: float
    step: float
    vs: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    v0: float
    initial: tuple[float, float]

    @classmethod
    def solve(cls, a: float, step: float = 1e-3,
              stop: float = 1.0 - 1e-6, max_samples: int = 400000) -> "HelicoidProfile":
        if a == 0.0:
            raise ValueError("the profile parameter must be nonzero")
        if a > 0:
            y = np.array([0.0, math.sqrt(a)])
        else:
            y = np.array([_positive_min_root(a), 0.0])
        rhs = _profile_rhs_factory(a)
        phis, dphis = [y[0]], [y[1]]
        k = 0
        while k < max_samples:
            y = rk4_step(rhs, k * step, y, step)
            if abs(y[0]) >= stop:
                break
            phis.append(y[0])
            dphis.append(y[1])
            k += 1
        else:
            raise RuntimeError("profile did not reach |phi| = 1 within the sample budget")
        n = len(phis)
        return cls(a=a, step=step, vs=np.arange(n) * step,
                   phi=np.asarray(phis), dphi=np.asarray(dphis),
                   v0=n * step, initial=(float(phis[0]), float(dphis[0])))

    def _mirror(self, v):
        # a > 0: phi odd, phi' even; a < 0: phi even, phi' odd
        v = np.asarray(v, dtype=float)
        sgn = np.where(v < 0, -1.0, 1.0)
        if self.a > 0:
            return sgn, np.ones_like(sgn)
        return np.ones_like(sgn), sgn

    def evaluate(self, v):
        """(phi, phi', phi'') at arbitrary |v| < v0, vectorized.

        Interpolates by a single RK4 step of size < `step` from the nearest
        stored sample below |v|, so accuracy matches the trajectory itself.
        """
        v = np.asarray(v, dtype=float)
        sphi, sdphi = self._mirror(v)
        w = np.abs(v)
        if np.any(w >= self.v0):
            raise ValueError(f"profile evaluated outside (-{self.v0:g}, {self.v0:g})")
        k = np.minimum((w / self.step).astype(int), self.phi.size - 1)
        r = w - k * self.step
        phi = self.phi[k]
        psi = self.dphi[k]
        # one vectorized classical step of size r
        a = self.a

        def acc(p):
            return p - 2.0 * a * p * (1.0 - p * p)

        k1p, k1s = psi, acc(phi)
        k2p, k2s = psi + 0.5 * r * k1s, acc(phi + 0.5 * r * k1p)
        k3p, k3s = psi + 0.5 * r * k2s, acc(phi + 0.5 * r * k2p)
        k4p, k4s = psi + r * k3s, acc(phi + r * k3p)
        phi_v = phi + (r / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
        psi_v = psi + (r / 6.0) * (k1s + 2 * k2s + 2 * k3s + k4s)
        return sphi * phi_v, sdphi * psi_v, sphi * acc(phi_v)

    def first_integral_residual(self) -> np.ndarray:
        """|(phi')^2 - phi^2 - a (1 - phi^2)^2| along the stored trajectory."""
        return np.abs(self.dphi ** 2 - self.phi ** 2
                      - self.a * (1.0 - self.phi ** 2) ** 2)


# ---------------------------------------------------------------------------
# gallery container


@dataclass(frozen=True)
class ExtraCheck:
    """Surface-specific verification hook evaluated on the integrated grid."""

    name: str
    identity: str
    tolerance: float
    kind: str                      # "sup" or "min"
    evaluate: Callable[["object"], float]   # ImmersionGrid -> value


@dataclass(frozen=True)
class GallerySurface:
    """A built-in surface: map, reference closed forms, defaults, checks."""

    name: str
    gauss_map: GaussMap
    F: Callable[[np.ndarray], np.ndarray]
    h: Callable[[np.ndarray], np.ndarray]
    grid: GridSpec
    hopf_constant: complex
    base_point: complex
    subdivisions_per_unit: int = 256
    extra_checks: tuple[ExtraCheck, ...] = ()
    profile: HelicoidProfile | None = None

    def config(self, z0: complex | None = None, F0: complex | None = None,
               h0: float | None = None,
               subdivisions: int | None = None) -> IntegrationConfig:
        """Integration config matching the closed forms at the base point."""
        z0 = self.base_point if z0 is None else complex(z0)
        if F0 is None:
            F0 = complex(np.asarray(self.F(np.asarray(z0, dtype=complex))))
        if h0 is None:
            h0 = float(np.asarray(self.h(np.asarray(z0, dtype=complex))).real)
        return IntegrationConfig(
            z0=z0, F0=F0, h0=h0,
            subdivisions_per_unit=subdivisions or self.subdivisions_per_unit)


# ---------------------------------------------------------------------------
# the surfaces


def hemisphere() -> GallerySurface:
    """Rotationally invariant graph over the plane of height zero.

    Map g(z) = i z on the disk; F = 4 z / (1 - |z|^2), h = 0.  Its quadratic
    differential vanishes identically.
    """
    def jet_fn(z: np.ndarray) -> WirtingerJet2:
        zero = np.zeros_like(z)
        return WirtingerJet2(val=1j * z, dz=np.ones_like(z) * 1j, dzbar=zero,
                             dzz=zero, dzzbar=zero, dzbarzbar=zero)

    gm = GaussMap(name="hemisphere", domain=DiskDomain(0.9), jet_fn=jet_fn,
                  provenance="builtin")

    def F(z):
        return 4.0 * z / (1.0 - np.abs(z) ** 2)

    def h(z):
        return np.zeros(np.shape(z))

    checks = (
        ExtraCheck(
            name="planarity", identity="x3 = 0", tolerance=1e-8, kind="sup",
            evaluate=lambda res: float(np.max(np.abs(
                np.asarray(res.samples.h)[res.included]))),
        ),
    )
    return GallerySurface(
        name="hemisphere", gauss_map=gm, F=F, h=h,
        grid=GridSpec.from_domain(DiskDomain(0.8), 64),
        hopf_constant=0j, base_point=0j, extra_checks=checks)


def translation_invariant(theta: float = 0.0) -> GallerySurface:
    """Entire graphs invariant under the one-parameter horizontal translations.

    The map depends on v alone and traces a hyperbolic geodesic; in reduced
    form g(v) = -N/D with N = cosh(theta) sinh(v/2) + i sinh(theta) cosh(v/2)
    and D = cosh(theta) cosh(v/2) - i sinh(theta) sinh(v/2), which gives
    g'(v) = -1/(2 D^2) and a constant quadratic differential -1/4.
    """
    ct, st = math.cosh(theta), math.sinh(theta)
    c2t, s2t = math.cosh(2 * theta), math.sinh(2 * theta)

    def _ND(v):
        N = ct * np.sinh(v / 2.0) + 1j * st * np.cosh(v / 2.0)
        D = ct * np.cosh(v / 2.0) - 1j * st * np.sinh(v / 2.0)
        return N, D

    def jet_fn(z: np.ndarray) -> WirtingerJet2:
        v = np.asarray(z).imag
        N, D = _ND(v)
        gp = -0.5 / D ** 2                     # d/dv
        gpp = np.conj(N) / (2.0 * D ** 3)      # d2/dv2
        return WirtingerJet2(
            val=-N / D,
            dz=-0.5j * gp, dzbar=0.5j * gp,
            dzz=-0.25 * gpp, dzzbar=0.25 * gpp, dzbarzbar=-0.25 * gpp)

    gm = GaussMap(name="translation-invariant",
                  domain=RectDomain(-64.0, 64.0, -64.0, 64.0), jet_fn=jet_fn,
                  params=(("theta", float(theta)),), provenance="builtin")

    def F(z):
        z = np.asarray(z)
        return c2t * z.real - s2t * np.cosh(z.imag) + 1j * np.sinh(z.imag)

    def h(z):
        z = np.asarray(z)
        return 0.5 * c2t * z.real * np.sinh(z.imag) + 0.5 * s2t * z.imag

    def graph_identity(res) -> float:
        pos = res.samples.position()[res.included]
        x1, x2, x3 = pos[..., 0], pos[..., 1], pos[..., 2]
        rhs = 0.5 * x1 * x2 + 0.5 * s2t * (np.arcsinh(x2) + x2 * np.sqrt(1.0 + x2 ** 2))
        return float(np.max(np.abs(x3 - rhs)))

    checks = (
        ExtraCheck(
            name="graph_identity",
            identity="x3 = x1*x2/2 + sinh(2 theta)*(asinh(x2) + x2*sqrt(1+x2^2))/2",
            tolerance=1e-8, kind="sup", evaluate=graph_identity),
    )
    return GallerySurface(
        name="translation-invariant", gauss_map=gm, F=F, h=h,
        grid=GridSpec.from_domain(RectDomain(-1.5, 1.5, -1.2, 1.2), 48),
        hopf_constant=-0.25 + 0j, base_point=0j, extra_checks=checks)


def helicoid(a: float) -> GallerySurface:
    """Half of a helicoid around the vertical axis; right for a > 0, left for a < 0.

    g(u + iv) = e^{iu} phi(v) with phi the profile solution and F =
    -2i e^{iu} (phi - phi') / (1 - phi^2).  The height satisfies h_z = a
    pointwise (the first integral), hence h = 2 a u; the quadratic
    differential is the constant -a.
    """
    if a == 0.0:
        raise ValueError("helicoid parameter a must be nonzero")
    profile = HelicoidProfile.solve(a)

    def jet_fn(z: np.ndarray) -> WirtingerJet2:
        z = np.asarray(z)
        u, v = z.real, z.imag
        phi, dphi, ddphi = profile.evaluate(v)
        e = np.exp(1j * u)
        return WirtingerJet2(
            val=e * phi,
            dz=0.5j * e * (phi - dphi),
            dzbar=0.5j * e * (phi + dphi),
            dzz=0.25 * e * (2.0 * dphi - phi - ddphi),
            dzzbar=0.25 * e * (ddphi - phi),
            dzbarzbar=-0.25 * e * (phi + 2.0 * dphi + ddphi))

    v_margin = max(4.0 * profile.step, 1e-3)
    domain = RectDomain(-8 * math.pi, 8 * math.pi,
                        -profile.v0 + v_margin, profile.v0 - v_margin)
    gm = GaussMap(name="helicoid", domain=domain, jet_fn=jet_fn,
                  params=(("a", float(a)),), provenance="builtin")

    def F(z):
        z = np.asarray(z)
        phi, dphi, _ = profile.evaluate(z.imag)
        return -2j * np.exp(1j * z.real) * (phi - dphi) / (1.0 - phi ** 2)

    def h(z):
        return 2.0 * a * np.asarray(z).real

    v_grid = min(1.0, 0.75 * profile.v0)
    checks = (
        ExtraCheck(
            name="height_vs_angle", identity="h = 2*a*u", tolerance=1e-7, kind="sup",
            evaluate=lambda res: float(np.max(np.abs(
                np.asarray(res.samples.h)[res.included]
                - 2.0 * a * np.asarray(res.samples.z)[res.included].real)))),
        ExtraCheck(
            name="profile_first_integral",
            identity="(phi')^2 - phi^2 = a*(1 - phi^2)^2",
            tolerance=1e-9, kind="sup",
            evaluate=lambda res: float(np.max(profile.first_integral_residual()))),
    )
    return GallerySurface(
        name="helicoid", gauss_map=gm, F=F, h=h,
        grid=GridSpec.from_domain(RectDomain(0.0, math.pi, -v_grid, v_grid), 48),
        hopf_constant=complex(-a), base_point=0j, extra_checks=checks,
        profile=profile)


def _semitrough_jets(conjugated: bool):
    sign = -1.0 if conjugated else 1.0

    def jet_fn(z: np.ndarray) -> WirtingerJet2:
        z = np.asarray(z)
        u, v = z.real, z.imag
        c2u, s2u = np.cosh(2 * u), np.sinh(2 * u)
        c2v, s2v = np.cosh(2 * v), np.sinh(2 * v)
        i_s = 1j * sign
        num = jet_from_uv(
            val=-1.0 + i_s * c2u * s2v,
            fu=2.0 * i_s * s2u * s2v, fv=2.0 * i_s * c2u * c2v,
            fuu=4.0 * i_s * c2u * s2v, fuv=4.0 * i_s * s2u * c2v,
            fvv=4.0 * i_s * c2u * s2v)
        den = jet_from_uv(
            val=s2u + c2u * c2v,
            fu=2.0 * c2u + 2.0 * s2u * c2v, fv=2.0 * c2u * s2v,
            fuu=4.0 * s2u + 4.0 * c2u * c2v, fuv=4.0 * s2u * s2v,
            fvv=4.0 * c2u * c2v)
        return _rational_jet(num, den)

    return jet_fn


_SEMITROUGH_GRID = RectDomain(0.2, 2.5, -1.2, 1.2)


def semitrough() -> GallerySurface:
    """An entire graph swept by straight lines, asymptotic to two simpler graphs.

    On the right half-plane, g = (-1 + i cosh(2u) sinh(2v)) / (sinh(2u) +
    cosh(2u) cosh(2v)); its image fills the left half of the disk and the
    quadratic differential is the constant -1.
    """
    gm = GaussMap(name="semitrough", domain=RectDomain(0.02, 8.0, -3.0, 3.0),
                  jet_fn=_semitrough_jets(conjugated=False), provenance="builtin")

    def F(z):
        z = np.asarray(z)
        u, v = z.real, z.imag
        return (2.0 * np.sinh(v) * np.cosh(v) * _coth(u)
                + 1j * _coth(u) - 2j * u)

    def h(z):
        z = np.asarray(z)
        u, v = z.real, z.imag
        return np.sinh(v) * np.cosh(v) * (2.0 * u * _coth(u) - 1.0)

    def asymptotic_slope(res) -> float:
        # x3/x1 depends on u alone; at the largest sampled u it should be
        # within 5% (relative to x2) of the ruled asymptote -x2/2
        pos = res.samples.position()
        i, j = -1, -1
        x1, x2, x3 = pos[i, j]
        f = x3 / x1
        return float(abs(f + 0.5 * x2) / abs(x2))

    checks = (
        ExtraCheck(name="asymptotic_slope", identity="x3/x1 -> -x2/2 at large u",
                   tolerance=0.05, kind="sup", evaluate=asymptotic_slope),
    )
    return GallerySurface(
        name="semitrough", gauss_map=gm, F=F, h=h,
        grid=GridSpec.from_domain(_SEMITROUGH_GRID, 48),
        hopf_constant=-1.0 + 0j, base_point=1.0 + 0j,
        subdivisions_per_unit=512, extra_checks=checks)


def conjugate_semitrough() -> GallerySurface:
    """The surface generated by the complex conjugate of the semitrough map.

    F = -2 sinh v cosh v tanh u - i tanh u + 2iu and h = sinh v cosh v
    (2u tanh u - 1); a graph over a half-plane rather than the whole plane,
    with the same constant quadratic differential -1.
    """
    gm = GaussMap(name="conjugate-semitrough",
                  domain=RectDomain(0.02, 8.0, -3.0, 3.0),
                  jet_fn=_semitrough_jets(conjugated=True), provenance="builtin")

    def F(z):
        z = np.asarray(z)
        u, v = z.real, z.imag
        return (-2.0 * np.sinh(v) * np.cosh(v) * np.tanh(u)
                - 1j * np.tanh(u) + 2j * u)

    def h(z):
        z = np.asarray(z)
        u, v = z.real, z.imag
        return np.sinh(v) * np.cosh(v) * (2.0 * u * np.tanh(u) - 1.0)

    def halfplane_margin(res) -> float:
        pos = res.samples.position()[res.included]
        return float(np.min(pos[..., 1]))

    checks = (
        ExtraCheck(name="halfplane_image", identity="x2 > 0 on u > 0",
                   tolerance=1e-12, kind="min", evaluate=halfplane_margin),
    )
    return GallerySurface(
        name="conjugate-semitrough", gauss_map=gm, F=F, h=h,
        grid=GridSpec.from_domain(_SEMITROUGH_GRID, 48),
        hopf_constant=-1.0 + 0j, base_point=1.0 + 0j,
        subdivisions_per_unit=512, extra_checks=checks)


def _coth(u):
    return np.cosh(u) / np.sinh(u)


EXAMPLE_NAMES = ("hemisphere", "translation-invariant", "helicoid",
                 "semitrough", "conjugate-semitrough")


def build_example(name: str, theta: float = 0.0, a: float = 0.5) -> GallerySurface:
    """Instantiate a gallery surface by name, with its parameters."""
    if name == "hemisphere":
        return hemisphere()
    if name == "translation-invariant":
        return translation_invariant(theta)
    if name == "helicoid":
        return helicoid(a)
    if name == "semitrough":
        return semitrough()
    if name == "conjugate-semitrough":
        return conjugate_semitrough()
    raise ValueError(f"unknown example {name!r}; choose from {', '.join(EXAMPLE_NAMES)}")
