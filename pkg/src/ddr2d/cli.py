"""Command-line entry point: mesh generation, structural verification suites,
single solves, convergence studies, and DOF-count tables.

Exit codes: 0 on success, 1 on a numerical assertion failure, 2 on usage
errors.  The DDR_THREADS environment variable (or --threads) sets the element
-local parallelism; output is bitwise independent of the thread count.
"""

from __future__ import annotations

import argparse
import os
import sys

from .mesh import build_structured_mesh, mesh_diagnostics, save_mesh
from .operators import ComplexOps
from .spaces import local_dof_count
from .verify import (check_commutation, check_exactness, estimate_poincare,
                     format_report)

FAMILIES = ("cartesian", "triangular", "hexagonal")
SHAPES = {"triangle": 3, "quadrangle": 4, "pentagon": 5, "hexagon": 6}

POLY_TOL = 1e-10
TRIG_TOL = 1e-8
COLLAPSE_FLOOR = 0.25


def _n_list(text):
    return [int(x) for x in text.split(",") if x]


def make_parser():
    p = argparse.ArgumentParser(prog="ddr", description=__doc__)
    p.add_argument("--threads", type=int, default=None,
                   help="element-local worker threads (default: DDR_THREADS or 1)")
    sub = p.add_subparsers(dest="command", required=True)

    mesh = sub.add_parser("mesh", help="mesh generation")
    msub = mesh.add_subparsers(dest="subcommand", required=True)
    gen = msub.add_parser("gen", help="generate a structured mesh file")
    gen.add_argument("--family", choices=FAMILIES, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--out", required=True)

    ver = sub.add_parser("verify", help="structural verification")
    vsub = ver.add_subparsers(dest="subcommand", required=True)
    ex = vsub.add_parser("exactness")
    ex.add_argument("--family", choices=FAMILIES, required=True)
    ex.add_argument("--n", type=int, required=True)
    ex.add_argument("--k", type=int, required=True)
    ex.add_argument("--bc", choices=("none", "homogeneous", "both"),
                    default="both")
    co = vsub.add_parser("commutation")
    co.add_argument("--family", choices=FAMILIES, required=True)
    co.add_argument("--n", type=int, required=True)
    co.add_argument("--k", type=int, required=True)
    st = vsub.add_parser("stability")
    st.add_argument("--family", choices=FAMILIES, required=True)
    st.add_argument("--n", type=_n_list, default=[2, 4, 8],
                    help="comma-separated refinement levels")
    st.add_argument("--k", type=int, required=True)

    dofs = sub.add_parser("dofs", help="DOF-count tables")
    dsub = dofs.add_subparsers(dest="subcommand", required=True)
    tab = dsub.add_parser("table")
    tab.add_argument("--shape", choices=sorted(SHAPES), default=None)
    tab.add_argument("--k", type=int, default=None)

    so = sub.add_parser("solve", help="single manufactured-solution solve")
    so.add_argument("--family", choices=FAMILIES, required=True)
    so.add_argument("--n", type=int, required=True)
    so.add_argument("--k", type=int, required=True)

    cv = sub.add_parser("convergence", help="manufactured convergence study")
    cv.add_argument("--family", choices=FAMILIES, required=True)
    cv.add_argument("--k", type=int, required=True)
    cv.add_argument("--n", type=_n_list, required=True,
                    help="comma-separated refinement levels")
    cv.add_argument("--out", required=True)
    return p


def cmd_mesh_gen(args):
    mesh = build_structured_mesh(args.family, args.n)
    save_mesh(mesh, args.out)
    for key, val in mesh_diagnostics(mesh).items():
        print(f"{key}={val}")
    return 0


def cmd_verify_exactness(args):
    mesh = build_structured_mesh(args.family, args.n)
    cops = ComplexOps(mesh, args.k, args.threads)
    bcs = ("none", "homogeneous") if args.bc == "both" else (args.bc,)
    ok = True
    for bc in bcs:
        rep = check_exactness(mesh, args.k, bc,
                              label=f"{args.family} n={args.n}", cops=cops)
        print(format_report(rep))
        ok = ok and rep.passed
    return 0 if ok else 1


def cmd_verify_commutation(args):
    mesh = build_structured_mesh(args.family, args.n)
    rep = check_commutation(mesh, args.k, label=f"{args.family} n={args.n}")
    print(format_report(rep))
    ok = all((g is None or g < (POLY_TOL if "poly" in name else TRIG_TOL))
             and (r is None or r < (POLY_TOL if "poly" in name else TRIG_TOL))
             for name, g, r in rep.entries)
    return 0 if ok else 1


def cmd_verify_stability(args):
    reports = []
    for n in args.n:
        mesh = build_structured_mesh(args.family, n)
        rep = estimate_poincare(mesh, args.k, label=f"{args.family} n={n}")
        print(format_report(rep))
        reports.append(rep)
    ok = True
    for attr in ("lambda_P", "gamma_h"):
        series = [getattr(r, attr) for r in reports]
        floor = COLLAPSE_FLOOR * series[0]
        if min(series) < floor:
            print(f"FAIL: {attr} collapses below {COLLAPSE_FLOOR} of its "
                  f"coarse-mesh value: {series}")
            ok = False
    return 0 if ok else 1


def cmd_dofs_table(args):
    shapes = [args.shape] if args.shape else sorted(SHAPES)
    ks = [args.k] if args.k is not None else list(range(5))
    print(f"{'shape':10s} {'k':>2s}  "
          f"{'V full/ser':>12s} {'Sigma full/ser':>15s} {'W full/ser':>12s}")
    for shape in shapes:
        ne = SHAPES[shape]
        for k in ks:
            cells = []
            for space in ("V", "Sigma", "W"):
                full = local_dof_count(ne, k, space, "full")
                ser = local_dof_count(ne, k, space, "serendipity")
                cells.append(f"{full}/{ser}")
            print(f"{shape:10s} {k:2d}  {cells[0]:>12s} {cells[1]:>15s} "
                  f"{cells[2]:>12s}")
    return 0


def cmd_solve(args):
    from . import scheme

    mesh = build_structured_mesh(args.family, args.n)
    cops = ComplexOps(mesh, args.k, args.threads)
    system = scheme.assemble(mesh, args.k, scheme.f_exact, scheme.u_exact,
                             scheme.rot_u_exact, args.threads, cops)
    u_h, p_h = scheme.solve(system)
    rec = scheme.error_report(cops, u_h, p_h, scheme.u_exact,
                              scheme.rot_u_exact, scheme.p_exact)
    print(scheme.CSV_HEADER)
    print(",".join("%.17g" % v for v in (rec.h,) + rec.values()))
    return 0


def cmd_convergence(args):
    from . import scheme

    def progress(n, rec):
        print(f"n={n} h={rec.h:.6g} errors="
              + " ".join("%.6e" % v for v in rec.values()))

    records, rate_list = scheme.convergence_study(
        args.family, args.k, args.n, out=args.out, threads=args.threads,
        progress=progress)
    print(f"wrote {args.out} and {args.out}.rates")
    for fine, rt in zip(records[1:], rate_list):
        print(f"h={fine.h:.6g} rates=" + " ".join("%.3f" % v for v in rt))
    return 0


def main(argv=None):
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; preserve that.
        return int(exc.code or 0)
    if args.threads is None:
        try:
            args.threads = max(1, int(os.environ.get("DDR_THREADS", "1")))
        except ValueError:
            args.threads = 1
    if getattr(args, "k", 0) is not None and getattr(args, "k", 0) < 0:
        print("k must be >= 0", file=sys.stderr)
        return 2
    handlers = {
        ("mesh", "gen"): cmd_mesh_gen,
        ("verify", "exactness"): cmd_verify_exactness,
        ("verify", "commutation"): cmd_verify_commutation,
        ("verify", "stability"): cmd_verify_stability,
        ("dofs", "table"): cmd_dofs_table,
        ("solve", None): cmd_solve,
        ("convergence", None): cmd_convergence,
    }
    key = (args.command, getattr(args, "subcommand", None))
    return handlers[key](args)


if __name__ == "__main__":
    sys.exit(main())
