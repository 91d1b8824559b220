"""Disk-valued maps with order-two jets, and the operations living on them.

A GaussMap bundles a domain with a vectorized jet evaluator.  The built-in
maps carry closed-form jets; arbitrary Python callables fall back to central
differences, and `with_fd_jets` turns any map into its finite-difference twin
for cross-validation.  Evaluators are immutable and safe to share between
threads.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .nil3 import OutOfDiskError
from .numerics import WirtingerJet2, wirtinger_jet

__all__ = [
    "OutOfDomainError",
    "RectDomain",
    "DiskDomain",
    "GaussMap",
    "MobiusIsometry",
    "from_callable",
    "harmonic_residual",
    "antiholomorphy_margin",
    "hopf_coefficient",
    "hopf_holomorphy_residual",
    "eta_from_g",
    "minkowski_factor",
    "mobius_apply",
    "conjugate_jet",
]


class OutOfDomainError(ValueError):
    """A point (or a finite-difference stencil around one) left the map's domain."""


@dataclass(frozen=True)
class RectDomain:
    """Axis-aligned rectangle umin <= u <= umax, vmin <= v <= vmax."""

    umin: float
    umax: float
    vmin: float
    vmax: float

    def contains(self, z, margin: float = 0.0):
        z = np.asarray(z, dtype=complex)
        u, v = z.real, z.imag
        return ((u >= self.umin + margin) & (u <= self.umax - margin)
                & (v >= self.vmin + margin) & (v <= self.vmax - margin))

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.umin + self.umax), 0.5 * (self.vmin + self.vmax))

    def bounds(self) -> tuple[float, float, float, float]:
        return (self.umin, self.umax, self.vmin, self.vmax)

    def describe(self) -> str:
        return (f"rect u in [{self.umin:g}, {self.umax:g}], "
                f"v in [{self.vmin:g}, {self.vmax:g}]")


@dataclass(frozen=True)
class DiskDomain:
    """Closed disk |z - center| <= radius."""

    radius: float
    center: complex = 0j

    def contains(self, z, margin: float = 0.0):
        z = np.asarray(z, dtype=complex)
        return np.abs(z - self.center) <= self.radius - margin

    def bounds(self) -> tuple[float, float, float, float]:
        c, r = self.center, self.radius
        return (c.real - r, c.real + r, c.imag - r, c.imag + r)

    def describe(self) -> str:
        if self.center == 0:
            return f"disk |z| <= {self.radius:g}"
        return f"disk |z - ({self.center:g})| <= {self.radius:g}"


Domain = RectDomain | DiskDomain


@dataclass(frozen=True)
class GaussMap:
    """Disk-valued map of z with a vectorized order-two jet evaluator.

    `jet_fn` takes a complex scalar or array and returns a WirtingerJet2 of
    matching shape.  `antiholomorphy_guaranteed` is cleared when the map was
    produced by an orientation-reversing disk isometry, whose composition
    need not keep g_z away from zero.
    """

    name: str
    domain: Domain
    jet_fn: Callable[[np.ndarray], WirtingerJet2]
    params: tuple[tuple[str, float], ...] = ()
    provenance: str = "user"
    antiholomorphy_guaranteed: bool = True

    def jet(self, z) -> WirtingerJet2:
        return self.jet_fn(np.asarray(z, dtype=complex))

    def __call__(self, z):
        return self.jet(z).val

    def with_fd_jets(self, step: float | None = None) -> "GaussMap":
        """Finite-difference twin of this map, for cross-validating jets."""
        evaluator = self.jet_fn

        def value(z: complex) -> complex:
            return complex(np.asarray(evaluator(np.asarray(z, dtype=complex)).val))

        fd = _fd_jet_fn(value, step)
        return replace(self, jet_fn=fd, provenance=self.provenance + "+fd",
                       name=self.name + "(fd)")


def _fd_jet_fn(value: Callable[[complex], complex],
               step: float | None) -> Callable[[np.ndarray], WirtingerJet2]:
    def jet_fn(z: np.ndarray) -> WirtingerJet2:
        zs = np.asarray(z, dtype=complex)
        flat = zs.ravel()
        fields = [np.empty(flat.shape, dtype=complex) for _ in range(6)]
        for k, zk in enumerate(flat):
            j = wirtinger_jet(value, zk, step)
            fields[0][k] = j.val
            fields[1][k] = j.dz
            fields[2][k] = j.dzbar
            fields[3][k] = j.dzz
            fields[4][k] = j.dzzbar
            fields[5][k] = j.dzbarzbar
        shaped = [f.reshape(zs.shape) for f in fields]
        if zs.ndim == 0:
            shaped = [complex(f) for f in shaped]
        return WirtingerJet2(*shaped)

    return jet_fn


def from_callable(f: Callable[[complex], complex], domain: Domain,
                  name: str = "user", step: float | None = None) -> GaussMap:
    """Wrap a plain complex-valued Python function; jets by central differences."""
    return GaussMap(name=name, domain=domain, jet_fn=_fd_jet_fn(f, step),
                    provenance="user")


# ---------------------------------------------------------------------------
# pointwise operations


def _require_in_disk(val) -> np.ndarray:
    m = np.abs(np.asarray(val))
    if np.any(m >= 1.0):
        raise OutOfDiskError(f"map value left the unit disk (max |g| = {np.max(m):.6g})")
    return m


def harmonic_residual(j: WirtingerJet2):
    """|(1-|g|^2) g_zzbar + 2 conj(g) g_z g_zbar|.

    Vanishes exactly when the map is harmonic for the hyperbolic metric of
    the disk; holomorphic and antiholomorphic maps are trivial zeros.
    """
    val = np.asarray(j.val)
    return np.abs((1.0 - np.abs(val) ** 2) * np.asarray(j.dzzbar)
                  + 2.0 * np.conj(val) * np.asarray(j.dz) * np.asarray(j.dzbar))


def antiholomorphy_margin(g: GaussMap, points) -> float:
    """min |g_z| over the given points; positive means nowhere antiholomorphic there."""
    jet = g.jet(points)
    return float(np.min(np.abs(np.asarray(jet.dz))))


def hopf_coefficient(j: WirtingerJet2):
    """Coefficient of the holomorphic quadratic differential of a harmonic disk map.

    Q = 4 g_z conj(g_zbar) / (1 - |g|^2)^2.
    """
    m = _require_in_disk(j.val)
    return 4.0 * np.asarray(j.dz) * np.conj(np.asarray(j.dzbar)) / (1.0 - m ** 2) ** 2


def _derived_dzbar_fd(fn: Callable[[np.ndarray], np.ndarray], z: np.ndarray,
                      h: float) -> np.ndarray:
    fu = (-fn(z + 2 * h) + 8 * fn(z + h) - 8 * fn(z - h) + fn(z - 2 * h)) / (12 * h)
    fv = (-fn(z + 2j * h) + 8 * fn(z + 1j * h) - 8 * fn(z - 1j * h) + fn(z - 2j * h)) / (12 * h)
    return 0.5 * (fu + 1j * fv)


def _derived_dz_fd(fn: Callable[[np.ndarray], np.ndarray], z: np.ndarray,
                   h: float) -> np.ndarray:
    fu = (-fn(z + 2 * h) + 8 * fn(z + h) - 8 * fn(z - h) + fn(z - 2 * h)) / (12 * h)
    fv = (-fn(z + 2j * h) + 8 * fn(z + 1j * h) - 8 * fn(z - 1j * h) + fn(z - 2j * h)) / (12 * h)
    return 0.5 * (fu - 1j * fv)


def _check_stencil(g: GaussMap, z, h: float) -> None:
    z = np.asarray(z, dtype=complex)
    corners = np.stack([z + 2 * h, z - 2 * h, z + 2j * h, z - 2j * h])
    if not np.all(g.domain.contains(corners)):
        raise OutOfDomainError("finite-difference stencil leaves the map domain")


def hopf_holomorphy_residual(g: GaussMap, z, step: float = 1e-3):
    """|d/dzbar Q| estimated by fourth-order differencing of the Hopf coefficient."""
    _check_stencil(g, z, step)

    def q_of(zz):
        return np.asarray(hopf_coefficient(g.jet(zz)))

    return np.abs(_derived_dzbar_fd(q_of, np.asarray(z, dtype=complex), step))


def eta_from_g(j: WirtingerJet2):
    """Vertical derivative component from the map jet: 8i conj(g) g_z / (1-|g|^2)^2."""
    m = _require_in_disk(j.val)
    return 8j * np.conj(np.asarray(j.val)) * np.asarray(j.dz) / (1.0 - m ** 2) ** 2


def minkowski_factor(j: WirtingerJet2):
    """Spacelike-companion metric factor and the conformal ratio tying it to ours.

    Returns (16 |g_z|^2 / (1-|g|^2)^2, ((1+|g|^2)/(1-|g|^2))^2); the product
    is exactly the induced metric factor of the surface.
    """
    m = _require_in_disk(j.val)
    m2 = m ** 2
    base = 16.0 * np.abs(np.asarray(j.dz)) ** 2 / (1.0 - m2) ** 2
    ratio = ((1.0 + m2) / (1.0 - m2)) ** 2
    return base, ratio


# ---------------------------------------------------------------------------
# disk isometries


@dataclass(frozen=True)
class MobiusIsometry:
    """Disk isometry w -> (alpha w + beta) / (conj(beta) w + conj(alpha)).

    Coefficients are normalized to |alpha|^2 - |beta|^2 = 1.  With
    `conjugate_first` the map acts on conj(w) instead, which reverses
    orientation.
    """

    alpha: complex
    beta: complex
    conjugate_first: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        norm = abs(self.alpha) ** 2 - abs(self.beta) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(
                f"coefficients must satisfy |alpha|^2 - |beta|^2 = 1, got {norm!r}")

    @classmethod
    def identity(cls) -> "MobiusIsometry":
        return cls(1.0 + 0j, 0j)

    @classmethod
    def rotation(cls, angle: float) -> "MobiusIsometry":
        """Rotation by `angle` about the disk center."""
        return cls(cmath.exp(0.5j * angle), 0j)

    def apply(self, w):
        w = np.conj(w) if self.conjugate_first else np.asarray(w, dtype=complex)
        return (self.alpha * w + self.beta) / (np.conj(self.beta) * w + np.conj(self.alpha))

    def holomorphic_derivative(self, w):
        """Derivative of the fractional-linear part: 1 / (conj(beta) w + conj(alpha))^2."""
        w = np.asarray(w, dtype=complex)
        return 1.0 / (np.conj(self.beta) * w + np.conj(self.alpha)) ** 2

    def holomorphic_second_derivative(self, w):
        w = np.asarray(w, dtype=complex)
        return -2.0 * np.conj(self.beta) / (np.conj(self.beta) * w + np.conj(self.alpha)) ** 3

    def compose(self, other: "MobiusIsometry") -> "MobiusIsometry":
        """self after other (matrix product in SU(1,1), conjugations tracked)."""
        a1, b1 = self.alpha, self.beta
        a2, b2 = other.alpha, other.beta
        if self.conjugate_first:
            a2, b2 = a2.conjugate(), b2.conjugate()
        alpha = a1 * a2 + b1 * b2.conjugate()
        beta = a1 * b2 + b1 * a2.conjugate()
        return MobiusIsometry(alpha, beta,
                              conjugate_first=self.conjugate_first ^ other.conjugate_first)


def conjugate_jet(j: WirtingerJet2) -> WirtingerJet2:
    """Jet of conj(g) from the jet of g."""
    return WirtingerJet2(
        val=np.conj(j.val),
        dz=np.conj(j.dzbar),
        dzbar=np.conj(j.dz),
        dzz=np.conj(j.dzbarzbar),
        dzzbar=np.conj(j.dzzbar),
        dzbarzbar=np.conj(j.dzz),
    )


def mobius_apply(T: MobiusIsometry, g: GaussMap) -> GaussMap:
    """Compose a disk isometry with a map, propagating jets by the chain rule.

    Positive isometries preserve harmonicity and the antiholomorphy margin up
    to the unit factor |T'|; orientation-reversing ones still preserve
    harmonicity but the result is flagged, since its g_z may vanish.
    """
    inner = g.jet_fn

    def jet_fn(z: np.ndarray) -> WirtingerJet2:
        j = inner(z)
        if T.conjugate_first:
            j = conjugate_jet(j)
        w = np.asarray(j.val)
        d1 = T.holomorphic_derivative(w)
        d2 = T.holomorphic_second_derivative(w)
        return WirtingerJet2(
            val=(T.alpha * w + T.beta) / (np.conj(T.beta) * w + np.conj(T.alpha)),
            dz=d1 * np.asarray(j.dz),
            dzbar=d1 * np.asarray(j.dzbar),
            dzz=d2 * np.asarray(j.dz) ** 2 + d1 * np.asarray(j.dzz),
            dzzbar=d2 * np.asarray(j.dz) * np.asarray(j.dzbar) + d1 * np.asarray(j.dzzbar),
            dzbarzbar=d2 * np.asarray(j.dzbar) ** 2 + d1 * np.asarray(j.dzbarzbar),
        )

    params = g.params + (("mobius_alpha_re", T.alpha.real), ("mobius_alpha_im", T.alpha.imag),
                         ("mobius_beta_re", T.beta.real), ("mobius_beta_im", T.beta.imag))
    return GaussMap(
        name=f"mobius({g.name})",
        domain=g.domain,
        jet_fn=jet_fn,
        params=params,
        provenance=g.provenance,
        antiholomorphy_guaranteed=g.antiholomorphy_guaranteed and not T.conjugate_first,
    )
