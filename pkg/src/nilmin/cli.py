"""Command-line front end: generate, verify, export, list-examples.

Exit codes: 0 success / all checks passed, 1 verification failure,
2 precondition or input error, 3 I/O error.  Identical invocations produce
byte-identical mesh and report files.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from ._version import __version__
from .exprmap import ExpressionError, expression_jet_fn
from .gallery import EXAMPLE_NAMES, GallerySurface, build_example
from .maps import DiskDomain, GaussMap, RectDomain
from .mesh import build_mesh, write_obj, write_ply
from .nil3 import OutOfDiskError, Tolerances
from .report import run_verification
from .weierstrass import GridSpec, IntegrationConfig, PreconditionFailure

__all__ = ["main", "build_parser"]

_TOL_FLAGS = {
    "conformality": "conformality residual bound",
    "minimality": "minimality residual bound (both components)",
    "harmonic": "harmonicity residual bound",
    "integrability": "exactness residual bound",
    "metric": "relative metric-factor error bound",
    "roundtrip": "normal/map round-trip bound",
    "hopf": "quadratic-differential constancy bound",
    "holomorphy": "d/dzbar Q residual bound",
    "path-independence": "path independence bound",
    "closed-form": "closed-form comparison bound",
    "ar-identity": "quadratic-differential identity bound",
}


def _parse_complex(text: str) -> complex:
    try:
        if "," in text:
            re_part, im_part = text.split(",", 1)
            return complex(float(re_part), float(im_part))
        return complex(float(text), 0.0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected RE or RE,IM, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilmin",
        description=("Construct and verify minimal surfaces of the Heisenberg "
                     "group from harmonic maps into the hyperbolic disk."))
    parser.add_argument("--version", action="version", version=f"nilmin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, want_output: bool):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--example", choices=EXAMPLE_NAMES,
                         help="built-in surface name")
        src.add_argument("--map", dest="map_expr", metavar="EXPR",
                         help="disk map as an expression in z, conj(z), i, "
                              "+, -, *, /, exp, sinh, cosh, tanh")
        p.add_argument("--theta", type=float, default=0.0,
                       help="parameter of the translation-invariant family")
        p.add_argument("--a", type=float, default=0.5,
                       help="helicoid parameter (nonzero)")
        p.add_argument("--umin", type=float, help="grid rectangle bounds")
        p.add_argument("--umax", type=float)
        p.add_argument("--vmin", type=float)
        p.add_argument("--vmax", type=float)
        p.add_argument("--radius", type=float,
                       help="disk grid radius (alternative to the rectangle)")
        p.add_argument("--n", type=int, default=None, help="grid nodes per axis")
        p.add_argument("--z0", type=_parse_complex, default=None, metavar="RE,IM",
                       help="base point of the reconstruction")
        p.add_argument("--F0", type=_parse_complex, default=None, metavar="RE,IM",
                       help="horizontal value at the base point")
        p.add_argument("--h0", type=float, default=None,
                       help="height at the base point")
        p.add_argument("--subdivisions", type=int, default=None,
                       help="Simpson panels per unit length (min 16)")
        for flag, helptext in _TOL_FLAGS.items():
            p.add_argument(f"--tol-{flag}", type=float, default=None, help=helptext)
        if want_output:
            p.add_argument("--out", help="mesh output path")
            p.add_argument("--format", choices=("obj", "ply"), default="obj",
                           help="mesh format (default obj)")
        p.add_argument("--report", help="verification report path (.txt or .json)")
        p.add_argument("--no-figures", action="store_true",
                       help="skip rendering figures next to the report")

    gen = sub.add_parser("generate", help="integrate a surface, export mesh + report")
    add_common(gen, want_output=True)
    ver = sub.add_parser("verify", help="run the residual suite; exit 1 on failure")
    add_common(ver, want_output=False)
    exp = sub.add_parser("export", help="integrate a surface and write the mesh only")
    add_common(exp, want_output=True)
    sub.add_parser("list-examples", help="list built-in surfaces")
    return parser


def _tolerances(args) -> Tolerances:
    overrides = {}
    for flag in _TOL_FLAGS:
        value = getattr(args, f"tol_{flag.replace('-', '_')}")
        if value is not None:
            overrides[flag.replace("-", "_")] = value
    return replace(Tolerances(), **overrides)


def _resolve_surface(args):
    """Returns (gauss_map, grid, config, gallery_surface_or_None)."""
    rect_flags = [args.umin, args.umax, args.vmin, args.vmax]
    have_rect = any(f is not None for f in rect_flags)
    if have_rect and not all(f is not None for f in rect_flags):
        raise ValueError("--umin/--umax/--vmin/--vmax must be given together")
    if have_rect and args.radius is not None:
        raise ValueError("--radius conflicts with the rectangle flags")

    surface: GallerySurface | None = None
    if args.example:
        surface = build_example(args.example, theta=args.theta, a=args.a)
        g = surface.gauss_map
        grid = surface.grid
        if have_rect:
            grid = GridSpec.from_domain(
                RectDomain(args.umin, args.umax, args.vmin, args.vmax),
                args.n or grid.us.size)
        elif args.radius is not None:
            grid = GridSpec.from_domain(DiskDomain(args.radius), args.n or grid.us.size)
        elif args.n is not None:
            grid = GridSpec(
                us=_linspace_like(grid.us, args.n), vs=_linspace_like(grid.vs, args.n),
                sampling=grid.sampling)
        cfg = surface.config(z0=args.z0, F0=args.F0, h0=args.h0,
                             subdivisions=args.subdivisions)
        return g, grid, cfg, surface

    if have_rect:
        domain = RectDomain(args.umin, args.umax, args.vmin, args.vmax)
    else:
        domain = DiskDomain(args.radius if args.radius is not None else 0.8)
    try:
        jet_fn = expression_jet_fn(args.map_expr)
    except ExpressionError:
        raise
    g = GaussMap(name=f"expr:{args.map_expr}", domain=domain, jet_fn=jet_fn,
                 provenance="user")
    n = args.n or 48
    grid = GridSpec.from_domain(domain, n)
    cfg = IntegrationConfig(
        z0=args.z0 if args.z0 is not None else grid.center,
        F0=args.F0 if args.F0 is not None else 0j,
        h0=args.h0 if args.h0 is not None else 0.0,
        subdivisions_per_unit=args.subdivisions or 256)
    return g, grid, cfg, None


def _linspace_like(old, n: int):
    import numpy as np
    return np.linspace(old[0], old[-1], n)


def _write_outputs(args, doc, result, want_mesh: bool, want_report: bool) -> None:
    mesh = None
    if result is not None and (want_mesh and args.out):
        mesh = build_mesh(result)
        if args.format == "ply":
            write_ply(mesh, args.out)
        else:
            write_obj(mesh, args.out)
        print(f"mesh written to {args.out}")
    if want_report and args.report:
        doc.write(args.report)
        print(f"report written to {args.report}")
        if not args.no_figures:
            if mesh is None and result is not None:
                mesh = build_mesh(result)
            from .figures import render_figures
            from pathlib import Path
            base = Path(args.report)
            base = base.with_name(base.stem)
            for path in render_figures(doc, mesh, base):
                print(f"figure written to {path}")


def _cmd_list() -> int:
    print("built-in surfaces:")
    rows = (
        ("hemisphere", "-", "planar graph of height zero; Q = 0"),
        ("translation-invariant", "--theta", "entire graphs along a geodesic; Q = -1/4"),
        ("helicoid", "--a", "half helicoids about the vertical axis; Q = -a"),
        ("semitrough", "-", "entire graph ruled by straight lines; Q = -1"),
        ("conjugate-semitrough", "-", "half-plane graph, conjugated map; Q = -1"),
    )
    for name, param, desc in rows:
        print(f"  {name:24s} param: {param:8s} {desc}")
    return 0


def _cmd_generate(args, verdict_gates_exit: bool) -> int:
    g, grid, cfg, surface = _resolve_surface(args)
    tol = _tolerances(args)
    doc, result = run_verification(g, grid, cfg, tol, surface=surface)
    want_mesh = getattr(args, "out", None) is not None
    _write_outputs(args, doc, result,
                   want_mesh=want_mesh, want_report=args.report is not None)
    status = "PASS" if doc.passed else "FAIL"
    print(f"{doc.map_name}: {doc.included_count} nodes, "
          f"{doc.excluded_count} excluded, verification {status}")
    if doc.entries and not doc.passed:
        print("failed checks: " + ", ".join(doc.failures()))
    if result is None:
        # hypotheses failed: generation impossible
        return 1 if verdict_gates_exit else 2
    if verdict_gates_exit:
        return 0 if doc.passed else 1
    return 0


def _cmd_export(args) -> int:
    g, grid, cfg, surface = _resolve_surface(args)
    from .weierstrass import integrate_immersion
    result = integrate_immersion(g, grid, cfg)
    mesh = build_mesh(result)
    if not args.out:
        raise ValueError("export requires --out")
    if args.format == "ply":
        write_ply(mesh, args.out)
    else:
        write_obj(mesh, args.out)
    print(f"mesh written to {args.out} "
          f"({len(mesh.vertices)} vertices, {len(mesh.faces)} faces)")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list-examples":
            return _cmd_list()
        if args.command == "generate":
            return _cmd_generate(args, verdict_gates_exit=False)
        if args.command == "verify":
            return _cmd_generate(args, verdict_gates_exit=True)
        if args.command == "export":
            return _cmd_export(args)
        parser.error(f"unknown command {args.command!r}")
    except PreconditionFailure as exc:
        print(f"precondition failure: {exc}", file=sys.stderr)
        return 2
    except (ExpressionError, OutOfDiskError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
