"""Numerical substrate: Wirtinger jets, Simpson path quadrature, fixed-step RK4.

Domain points are complex numbers z = u + iv.  The Wirtinger operators are
d/dz = (d/du - i d/dv)/2 and d/dzbar = (d/du + i d/dv)/2.  Everything here is
a pure function of its inputs and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "EvaluationError",
    "WirtingerJet2",
    "Polyline",
    "Trajectory",
    "jet_from_uv",
    "wirtinger_jet",
    "path_integrate",
    "rk4_step",
    "rk4_solve",
]


class EvaluationError(ValueError):
    """A function returned a non-finite value during numerical evaluation."""

    def __init__(self, message: str, where: complex | float | None = None):
        super().__init__(message)
        self.where = where


@dataclass(frozen=True)
class WirtingerJet2:
    """Value and Wirtinger derivatives of a map of z = u + iv, to order two.

    Fields may hold scalars or numpy arrays of identical shape, so a single
    jet can describe a whole grid of points.  For a real-valued underlying
    function, dzbar = conj(dz) and dzzbar is real.
    """

    val: complex | np.ndarray
    dz: complex | np.ndarray
    dzbar: complex | np.ndarray
    dzz: complex | np.ndarray
    dzzbar: complex | np.ndarray
    dzbarzbar: complex | np.ndarray


def jet_from_uv(val, fu, fv, fuu, fuv, fvv) -> WirtingerJet2:
    """Assemble a Wirtinger jet from partial derivatives in (u, v)."""
    return WirtingerJet2(
        val=val,
        dz=0.5 * (fu - 1j * fv),
        dzbar=0.5 * (fu + 1j * fv),
        dzz=0.25 * (fuu - fvv - 2j * fuv),
        dzzbar=0.25 * (fuu + fvv),
        dzbarzbar=0.25 * (fuu - fvv + 2j * fuv),
    )


def wirtinger_jet(f: Callable[[complex], complex], z: complex,
                  step: float | None = None) -> WirtingerJet2:
    """Differentiate a complex-valued map numerically at a single point.

    First derivatives use the fourth-order five-point central stencil per
    axis, second derivatives the second-order three-point (and four-corner)
    stencils.  The default step is 1e-4 scaled by max(1, |z|).

    Raises EvaluationError, carrying the offending point, if f returns a
    non-finite value anywhere on the stencil.
    """
    z = complex(z)
    if step is None:
        step = 1e-4 * max(1.0, abs(z))
    if step <= 0:
        raise ValueError("step must be positive")
    h = float(step)

    def ev(p: complex) -> complex:
        w = complex(f(p))
        if not (math.isfinite(w.real) and math.isfinite(w.imag)):
            raise EvaluationError(f"non-finite value at stencil point {p}", where=p)
        return w

    c = ev(z)
    up1, um1 = ev(z + h), ev(z - h)
    up2, um2 = ev(z + 2 * h), ev(z - 2 * h)
    vp1, vm1 = ev(z + 1j * h), ev(z - 1j * h)
    vp2, vm2 = ev(z + 2j * h), ev(z - 2j * h)
    pp, pm = ev(z + h + 1j * h), ev(z + h - 1j * h)
    mp, mm = ev(z - h + 1j * h), ev(z - h - 1j * h)

    fu = (-up2 + 8 * up1 - 8 * um1 + um2) / (12 * h)
    fv = (-vp2 + 8 * vp1 - 8 * vm1 + vm2) / (12 * h)
    fuu = (up1 - 2 * c + um1) / (h * h)
    fvv = (vp1 - 2 * c + vm1) / (h * h)
    fuv = (pp - pm - mp + mm) / (4 * h * h)
    return jet_from_uv(c, fu, fv, fuu, fuv, fvv)


@dataclass(frozen=True)
class Polyline:
    """Straight-segment path in the plane with a Simpson panel count per segment."""

    vertices: tuple[complex, ...]
    subdivisions: int = 256

    def __post_init__(self):
        verts = tuple(complex(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 2:
            raise ValueError("a polyline needs at least two vertices")
        for a, b in zip(verts, verts[1:]):
            if a == b:
                raise ValueError("consecutive polyline vertices must be distinct")
        if self.subdivisions < 1:
            raise ValueError("subdivisions must be a positive integer")

    @property
    def length(self) -> float:
        return sum(abs(b - a) for a, b in zip(self.vertices, self.vertices[1:]))


def _simpson_weights(n_panels: int) -> np.ndarray:
    # composite Simpson weights on 2n+1 uniform samples of [0, 1]
    w = np.ones(2 * n_panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / (6.0 * n_panels)


def path_integrate(p_dz: Callable[[complex], complex],
                   q_dzbar: Callable[[complex], complex],
                   path: Polyline, init: complex = 0j) -> complex:
    """Integrate p dz + q dzbar along a polyline by composite Simpson.

    Returns init plus the line integral; the quadrature error decreases as
    the fourth power of the per-segment panel count.
    """
    total = complex(init)
    n = path.subdivisions
    weights = _simpson_weights(n)
    ts = np.linspace(0.0, 1.0, 2 * n + 1)
    for a, b in zip(path.vertices, path.vertices[1:]):
        dz = b - a
        dzc = dz.conjugate()
        acc = 0j
        for t, w in zip(ts, weights):
            zt = a + t * dz
            f = complex(p_dz(zt)) * dz + complex(q_dzbar(zt)) * dzc
            if not (math.isfinite(f.real) and math.isfinite(f.imag)):
                raise EvaluationError(
                    f"non-finite integrand at path parameter {t}", where=zt)
            acc += w * f
        total += acc
    return total


def rk4_step(rhs, t: float, y: np.ndarray, h: float) -> np.ndarray:
    """One classical Runge-Kutta step of size h."""
    k1 = np.asarray(rhs(t, y), dtype=float)
    k2 = np.asarray(rhs(t + 0.5 * h, y + 0.5 * h * k1), dtype=float)
    k3 = np.asarray(rhs(t + 0.5 * h, y + 0.5 * h * k2), dtype=float)
    k4 = np.asarray(rhs(t + h, y + h * k3), dtype=float)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled solution of an initial value problem.

    `truncated` signals that integration stopped early because a state
    component left the configured bound; `ts` then ends at the last valid
    sample.
    """

    ts: np.ndarray
    ys: np.ndarray
    truncated: bool = False

    @property
    def t_last(self) -> float:
        return float(self.ts[-1])


def rk4_solve(rhs, y0: Sequence[float], t_span: tuple[float, float],
              step: float, bound: float | None = None) -> Trajectory:
    """Integrate y' = rhs(t, y) with classical RK4 at uniform steps.

    t_span may be decreasing, in which case integration runs backward.  The
    global error is O(step^4).  With `bound` set, the trajectory truncates
    as soon as some |y_i| exceeds it.
    """
    t0, t1 = float(t_span[0]), float(t_span[1])
    if step <= 0:
        raise ValueError("step must be positive")
    if t0 == t1:
        y = np.asarray(y0, dtype=float)
        return Trajectory(np.array([t0]), y[None, :].copy())
    nsteps = max(1, int(round(abs(t1 - t0) / step)))
    h = (t1 - t0) / nsteps
    ts = [t0]
    ys = [np.asarray(y0, dtype=float).copy()]
    for k in range(nsteps):
        y = rk4_step(rhs, t0 + k * h, ys[-1], h)
        if not np.all(np.isfinite(y)):
            raise EvaluationError("trajectory became non-finite", where=t0 + (k + 1) * h)
        if bound is not None and np.any(np.abs(y) > bound):
            return Trajectory(np.asarray(ts), np.asarray(ys), truncated=True)
        ts.append(t0 + (k + 1) * h)
        ys.append(y)
    return Trajectory(np.asarray(ts), np.asarray(ys))
