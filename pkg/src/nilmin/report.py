"""Verification driver and report documents.

A report collects every residual check with its threshold and the formula it
tests, plus the estimated constant of the holomorphic quadratic differential.
Reports render as structured text whose residual section is tab-delimited
(one row per check), or as JSON for machine consumption; both renderings are
deterministic byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .gallery import GallerySurface
from .maps import GaussMap, harmonic_residual, hopf_coefficient, hopf_holomorphy_residual
from .nil3 import ResidualEntry, ResidualReport, Tolerances
from .numerics import WirtingerJet2
from .weierstrass import (GridSpec, ImmersionGrid, IntegrationConfig,
                          integrability_residual, integrate_immersion,
                          path_independence_check)

__all__ = ["ReportDocument", "run_verification", "precondition_report"]

_PATH_CHECK_SEED = 20260810
_FLOAT = "%.9e"


@dataclass
class ReportDocument:
    """Everything a verification run produced, ready to render."""

    map_name: str
    map_params: tuple[tuple[str, float], ...]
    grid_desc: str
    config_desc: str
    entries: dict[str, ResidualEntry] = field(default_factory=dict)
    hopf_mean: complex | None = None
    hopf_max_dev: float | None = None
    included_count: int = 0
    excluded_count: int = 0
    excluded_preview: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries.values())

    def failures(self) -> list[str]:
        return [name for name, e in self.entries.items() if not e.passed]

    # -- rendering ---------------------------------------------------------

    def render_text(self) -> str:
        out = ["surface verification report",
               f"version: {self.version}",
               "",
               "[map]",
               f"name: {self.map_name}"]
        for key, value in self.map_params:
            out.append(f"{key}: {_FLOAT % value}")
        out += ["",
                "[grid]",
                f"spec: {self.grid_desc}",
                f"config: {self.config_desc}",
                f"included nodes: {self.included_count}",
                f"excluded nodes: {self.excluded_count}"]
        for line in self.excluded_preview:
            out.append(f"excluded: {line}")
        out += ["", "[residuals]",
                "name\tvalue\tbound\tsense\tstatus\tidentity"]
        for name, e in self.entries.items():
            sense = ">=" if e.kind == "min" else "<="
            status = "PASS" if e.passed else "FAIL"
            out.append(f"{name}\t{_FLOAT % e.value}\t{_FLOAT % e.tolerance}"
                       f"\t{sense}\t{status}\t{e.identity}")
        if self.hopf_mean is not None:
            out += ["", "[quadratic differential]",
                    f"mean: {_FLOAT % self.hopf_mean.real} + {_FLOAT % self.hopf_mean.imag}i",
                    f"max deviation: {_FLOAT % self.hopf_max_dev}"]
        if self.notes:
            out.append("")
            out.append("[notes]")
            out.extend(self.notes)
        out += ["", "[result]", f"status: {'PASS' if self.passed else 'FAIL'}"]
        if not self.passed:
            out.append("failed: " + ", ".join(self.failures()))
        return "\n".join(out) + "\n"

    def render_json(self) -> str:
        payload = {
            "version": self.version,
            "map": {"name": self.map_name, "params": dict(self.map_params)},
            "grid": {"spec": self.grid_desc, "config": self.config_desc,
                     "included": self.included_count, "excluded": self.excluded_count,
                     "excluded_preview": self.excluded_preview},
            "residuals": {
                name: {"value": e.value, "bound": e.tolerance, "kind": e.kind,
                       "passed": e.passed, "identity": e.identity}
                for name, e in self.entries.items()
            },
            "quadratic_differential": None if self.hopf_mean is None else {
                "mean": [self.hopf_mean.real, self.hopf_mean.imag],
                "max_deviation": self.hopf_max_dev,
            },
            "notes": self.notes,
            "passed": self.passed,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def write(self, path) -> None:
        text = self.render_json() if str(path).endswith(".json") else self.render_text()
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# verification pipeline


def _config_desc(cfg: IntegrationConfig) -> str:
    return (f"z0 = {cfg.z0:.9g}, F0 = {cfg.F0:.9g}, h0 = {cfg.h0:.9g}, "
            f"subdivisions/unit = {cfg.subdivisions_per_unit}")


def precondition_report(g: GaussMap, grid: GridSpec, cfg: IntegrationConfig,
                        tol: Tolerances) -> ResidualReport:
    """Hypotheses of the representation as report entries (margins and sups)."""
    Z = grid.mesh()
    jets = g.jet(Z)
    mask = np.broadcast_to(grid.contains(Z) & g.domain.contains(Z), Z.shape)
    absg = np.abs(np.asarray(jets.val))
    included = mask & (absg <= 1.0 - cfg.disk_exclusion)
    report = ResidualReport(grid_note=grid.describe())
    if not included.any():
        report.add("containment", 0.0, tol.containment, kind="min",
                   identity="|g| < 1 on the sampling grid")
        return report
    report.add("containment", float(np.min(1.0 - absg[mask])), tol.containment,
               kind="min", identity="|g| < 1 on the sampling grid")
    report.add("antiholomorphy_margin",
               float(np.min(np.abs(np.asarray(jets.dz))[included])),
               tol.antiholomorphy_margin, kind="min",
               identity="min |g_z| > 0 (nowhere antiholomorphic)")
    report.add("harmonic", float(np.max(np.asarray(harmonic_residual(jets))[included])),
               tol.harmonic,
               identity="(1-|g|^2)*g_zzbar + 2*conj(g)*g_z*g_zbar = 0")
    return report


def _fd_mask(result: ImmersionGrid, step: float) -> np.ndarray:
    Z = result.grid.mesh()
    g = result.gauss_map
    ok = result.included.copy()
    for shift in (2 * step, -2 * step, 2j * step, -2j * step):
        pts = Z + shift
        ok &= np.asarray(g.domain.contains(pts))
        ok &= np.abs(np.asarray(g.jet_fn(pts).val)) < 1.0 - 1e-9
    return ok


def run_verification(g: GaussMap, grid: GridSpec, cfg: IntegrationConfig,
                     tol: Tolerances = Tolerances(),
                     surface: GallerySurface | None = None,
                     hopf_constant: complex | None = None,
                     fd_step: float = 2.5e-4,
                     path_check_targets: int = 20,
                     ) -> tuple[ReportDocument, ImmersionGrid | None]:
    """Run the full residual suite for a map on a grid.

    When a gallery surface is supplied its closed forms, documented constant
    and surface-specific checks are included.  Returns the report and the
    integrated grid (None when the preconditions already failed).
    """
    doc = ReportDocument(
        map_name=g.name, map_params=g.params, grid_desc=grid.describe(),
        config_desc="", entries={},
    )
    pre = precondition_report(g, grid, cfg, tol)
    doc.entries.update(pre.entries)
    if not pre.all_passed:
        doc.notes.append("representation hypotheses failed; reconstruction skipped")
        return doc, None

    result = integrate_immersion(g, grid, cfg, tolerances=tol)
    cfg = result.config
    doc.config_desc = _config_desc(cfg)
    doc.included_count = int(result.included.sum())
    doc.excluded_count = len(result.excluded_nodes)
    doc.excluded_preview = [
        f"node ({i}, {j}): {reason}" for i, j, reason in result.excluded_nodes[:10]
    ]
    doc.entries.update(result.residual_report.entries)

    # exactness and holomorphy by differencing, on stencil-safe nodes
    fd_ok = _fd_mask(result, fd_step)
    Z = grid.mesh()
    if fd_ok.any():
        integ = np.asarray(integrability_residual(g, Z[fd_ok], fd_step))
        doc.entries["integrability"] = ResidualEntry(
            float(np.max(integ)), tol.integrability, "sup",
            "d/dzbar F_z = d/dz F_zbar")
        holo = np.asarray(hopf_holomorphy_residual(g, Z[fd_ok], fd_step))
        doc.entries["hopf_holomorphy"] = ResidualEntry(
            float(np.max(holo)), tol.holomorphy, "sup", "d/dzbar Q = 0")

    # quadratic differential estimate
    jet_sel = WirtingerJet2(*(np.asarray(getattr(result.jets, f))[result.included]
                              for f in ("val", "dz", "dzbar", "dzz", "dzzbar",
                                        "dzbarzbar")))
    q = np.asarray(hopf_coefficient(jet_sel))
    doc.hopf_mean = complex(np.mean(q))
    reference = hopf_constant
    if reference is None and surface is not None:
        reference = surface.hopf_constant
    if reference is not None:
        dev = float(np.max(np.abs(q - reference)))
        doc.hopf_max_dev = dev
        doc.entries["hopf_constant"] = ResidualEntry(
            dev, tol.hopf, "sup",
            f"Q = 4 g_z conj(g_zbar)/(1-|g|^2)^2 equals {reference:g}")
    else:
        doc.hopf_max_dev = float(np.max(np.abs(q - doc.hopf_mean)))

    # path independence at seeded random targets
    if path_check_targets > 0:
        rng = np.random.default_rng(_PATH_CHECK_SEED)
        us, vs = grid.us, grid.vs
        worst = 0.0
        found = 0
        attempts = 0
        while found < path_check_targets and attempts < 20 * path_check_targets:
            attempts += 1
            zt = complex(rng.uniform(us[0], us[-1]), rng.uniform(vs[0], vs[-1]))
            inside = bool(np.asarray(grid.contains(zt))) \
                and bool(np.asarray(g.domain.contains(zt)))
            if not inside or abs(complex(np.asarray(g.jet_fn(np.asarray(zt)).val))) \
                    > 1.0 - cfg.disk_exclusion:
                continue
            worst = max(worst, path_independence_check(g, zt, cfg))
            found += 1
        doc.entries["path_independence"] = ResidualEntry(
            worst, tol.path_independence, "sup",
            f"line integrals agree across homotopic paths ({found} targets)")

    # closed forms and surface-specific checks
    if surface is not None:
        Fs = np.asarray(result.samples.F)[result.included]
        hs = np.asarray(result.samples.h)[result.included]
        zsel = np.asarray(result.samples.z)[result.included]
        F_ref = np.asarray(surface.F(zsel))
        h_ref = np.asarray(surface.h(zsel))
        doc.entries["closed_form_F"] = ResidualEntry(
            float(np.max(np.abs(Fs - F_ref))), tol.closed_form, "sup",
            "integrated F matches the reference closed form")
        doc.entries["closed_form_h"] = ResidualEntry(
            float(np.max(np.abs(hs - h_ref))), tol.closed_form, "sup",
            "integrated h matches the reference closed form")
        for check in surface.extra_checks:
            doc.entries[check.name] = ResidualEntry(
                float(check.evaluate(result)), check.tolerance, check.kind,
                check.identity)

    return doc, result
