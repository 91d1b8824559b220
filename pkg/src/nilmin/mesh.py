"""Triangle meshes sampled from reconstructed surfaces, with OBJ/PLY writers.

Vertices are raw model coordinates (x1, x2, x3); a Euclidean viewer will
display the shape but not measure with the surface's ambient metric.  Normals
are converted from frame to coordinate-basis components per vertex.  Both
writers are deterministic byte for byte for identical input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .maps import harmonic_residual
from .nil3 import (ambient_from_frame, conformality_residual, induced_metric_factor,
                   minimality_residual, unit_normal)
from .numerics import WirtingerJet2

__all__ = ["SurfaceMesh", "build_mesh", "write_obj", "write_ply"]

_FMT = "%.12g"


@dataclass
class SurfaceMesh:
    """Vertices, faces, per-vertex normals and diagnostics of a sampled surface."""

    vertices: np.ndarray              # (N, 3) model coordinates
    faces: np.ndarray                 # (M, 3) vertex indices, consistent winding
    normals: np.ndarray               # (N, 3) ambient components of the unit normal
    diagnostics: dict[str, np.ndarray] = field(default_factory=dict)
    comment: str = ""

    def __post_init__(self):
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise ValueError("face indices out of range")


def build_mesh(result) -> SurfaceMesh:
    """Triangulate an integrated grid: two triangles per fully included cell.

    Winding is counter-clockwise in the (u, v) parameter plane, so the face
    orientation agrees with the upward normal branch used throughout.
    """
    included = result.included
    nv, nu = included.shape
    index = -np.ones(included.shape, dtype=int)
    order = np.nonzero(included.ravel())[0]
    index.ravel()[order] = np.arange(order.size)

    samples = result.included_samples()
    vertices = samples.position()
    frame_normals = unit_normal(samples)
    normals = ambient_from_frame(vertices, frame_normals)

    jets = result.jets
    m = included
    jet_sel = WirtingerJet2(*(np.asarray(getattr(jets, f))[m] for f in
                              ("val", "dz", "dzbar", "dzz", "dzzbar", "dzbarzbar")))
    mh, mv = minimality_residual(samples)
    diagnostics = {
        "abs_g": np.abs(np.asarray(jet_sel.val)),
        "metric_factor": np.asarray(induced_metric_factor(jet_sel)),
        "res_conformality": np.asarray(conformality_residual(samples)),
        "res_minimality_h": np.asarray(mh),
        "res_minimality_v": np.asarray(mv),
        "res_harmonic": np.asarray(harmonic_residual(jet_sel)),
    }

    faces = []
    for i in range(nv - 1):
        for j in range(nu - 1):
            if included[i, j] and included[i, j + 1] and included[i + 1, j + 1] \
                    and included[i + 1, j]:
                a = index[i, j]
                b = index[i, j + 1]
                c = index[i + 1, j + 1]
                d = index[i + 1, j]
                faces.append((a, b, c))
                faces.append((a, c, d))
    faces_arr = np.asarray(faces, dtype=int) if faces else np.zeros((0, 3), dtype=int)

    comment = f"{result.gauss_map.name} surface, {result.grid.describe()}"
    return SurfaceMesh(vertices=vertices, faces=faces_arr, normals=normals,
                       diagnostics=diagnostics, comment=comment)


def write_obj(mesh: SurfaceMesh, path) -> None:
    """ASCII OBJ: `v` model coordinates, `vn` ambient normals, 1-based faces."""
    lines = []
    if mesh.comment:
        lines.append(f"# {mesh.comment}")
    lines.append("# coordinates are model coordinates; the viewer metric is Euclidean")
    for p in mesh.vertices:
        lines.append("v " + " ".join(_FMT % c for c in p))
    for n in mesh.normals:
        lines.append("vn " + " ".join(_FMT % c for c in n))
    for f in mesh.faces:
        a, b, c = (int(k) + 1 for k in f)
        lines.append(f"f {a}//{a} {b}//{b} {c}//{c}")
    data = "\n".join(lines) + "\n"
    with open(path, "w", encoding="ascii") as fh:
        fh.write(data)


def write_ply(mesh: SurfaceMesh, path) -> None:
    """ASCII PLY with per-vertex normals and diagnostic float properties."""
    diag_names = list(mesh.diagnostics)
    header = ["ply", "format ascii 1.0"]
    if mesh.comment:
        header.append(f"comment {mesh.comment}")
    header.append("comment coordinates are model coordinates; viewer metric is Euclidean")
    header.append(f"element vertex {len(mesh.vertices)}")
    for prop in ("x", "y", "z", "nx", "ny", "nz"):
        header.append(f"property float {prop}")
    for name in diag_names:
        header.append(f"property float {name}")
    header.append(f"element face {len(mesh.faces)}")
    header.append("property list uchar int vertex_indices")
    header.append("end_header")

    lines = header
    diag_cols = [np.asarray(mesh.diagnostics[n], dtype=float) for n in diag_names]
    for k in range(len(mesh.vertices)):
        row = list(mesh.vertices[k]) + list(mesh.normals[k]) + [c[k] for c in diag_cols]
        lines.append(" ".join(_FMT % c for c in row))
    for f in mesh.faces:
        lines.append("3 " + " ".join(str(int(k)) for k in f))
    data = "\n".join(lines) + "\n"
    with open(path, "w", encoding="ascii") as fh:
        fh.write(data)
