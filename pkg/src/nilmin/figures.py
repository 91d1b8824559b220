"""Figure rendering for reports: a 3D view of the mesh and a residual chart.

matplotlib is imported lazily with the Agg backend so headless runs and
figure-free code paths never touch a display.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

__all__ = ["render_figures"]


def _plt():
    import matplotlib
    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt
    return plt


def render_figures(doc, mesh, out_base) -> list[Path]:
    """Write <base>_surface.png and <base>_residuals.png; returns the paths."""
    plt = _plt()
    base = Path(out_base)
    written: list[Path] = []

    if mesh is not None and len(mesh.faces):
        fig = plt.figure(figsize=(7.0, 5.6))
        ax = fig.add_subplot(projection="3d")
        v = mesh.vertices
        ax.plot_trisurf(v[:, 0], v[:, 1], v[:, 2], triangles=mesh.faces,
                        cmap="viridis", linewidth=0.0, antialiased=True)
        ax.set_xlabel("x1")
        ax.set_ylabel("x2")
        ax.set_zlabel("x3")
        ax.set_title(doc.map_name)
        path = base.with_name(base.name + "_surface.png")
        fig.savefig(path, dpi=130, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    if doc.entries:
        names = list(doc.entries)
        floor = 1e-17
        values = [max(abs(doc.entries[n].value), floor) for n in names]
        bounds = [max(abs(doc.entries[n].tolerance), floor) for n in names]
        colors = ["#2d7f5e" if doc.entries[n].passed else "#b03a2e" for n in names]
        fig, ax = plt.subplots(figsize=(7.6, 0.44 * len(names) + 1.6))
        y = np.arange(len(names))
        ax.barh(y, [math.log10(v) - math.log10(floor) for v in values],
                left=math.log10(floor), color=colors, height=0.6)
        for yi, b in zip(y, bounds):
            ax.plot([math.log10(b)] * 2, [yi - 0.38, yi + 0.38], color="k", lw=1.2)
        ax.set_yticks(y)
        ax.set_yticklabels(names, fontsize=8)
        ax.invert_yaxis()
        ax.set_xlabel("log10 residual (tick = bound)")
        ax.set_title(f"{doc.map_name}: residuals vs bounds")
        fig.tight_layout()
        path = base.with_name(base.name + "_residuals.png")
        fig.savefig(path, dpi=130)
        plt.close(fig)
        written.append(path)

    return written
