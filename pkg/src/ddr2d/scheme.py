"""Stabilized saddle-point scheme for the quad-rot problem
(vrot rot)^2 u + grad p = f, div u = 0, with tangential and rotor-trace
boundary conditions, discretized on the discrete rot-rot complex.

Essential boundary values are imposed by DOF elimination: boundary components
of u are pinned to the interpolant of the exact field (zero for compatible
data) and moved to the right-hand side, so the solved unknowns live on the
boundary-restricted layouts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import bmat, csr_matrix
from scipy.sparse.linalg import spsolve

from .mesh import build_structured_mesh
from .operators import ComplexOps, interpolate_Sigma, interpolate_V

RESIDUAL_RTOL = 1e-10


# -- manufactured solution ----------------------------------------------------

def u_exact(pts):
    pts = np.atleast_2d(pts)
    s = np.sin(math.pi * (pts[:, 0] + pts[:, 1]))
    return np.stack([-s, s], axis=1)


def rot_u_exact(pts):
    pts = np.atleast_2d(pts)
    return 2 * math.pi * np.cos(math.pi * (pts[:, 0] + pts[:, 1]))


def p_exact(pts):
    pts = np.atleast_2d(pts)
    return np.sin(math.pi * pts[:, 0]) * np.sin(math.pi * pts[:, 1])


def f_exact(pts):
    pts = np.atleast_2d(pts)
    pi = math.pi
    s = np.sin(pi * (pts[:, 0] + pts[:, 1]))
    return np.stack([
        -4 * pi ** 4 * s + pi * np.cos(pi * pts[:, 0]) * np.sin(pi * pts[:, 1]),
        4 * pi ** 4 * s + pi * np.sin(pi * pts[:, 0]) * np.cos(pi * pts[:, 1]),
    ], axis=1)


# -- assembly and solve -------------------------------------------------------

def local_a(cops, element_id):
    """Local rot-rot bilinear form matrix (stabilized), symmetric PSD."""
    return cops.elem_ops[element_id].aT


@dataclass
class SaddleSystem:
    cops: ComplexOps
    A: csr_matrix        # restricted rot-rot form
    B: csr_matrix        # restricted (v, Gq) coupling
    rhs: np.ndarray      # length dim Sigma_0 + dim V_0
    u_lift: np.ndarray   # pinned boundary values on the full Sigma layout

    @property
    def matrix(self):
        return bmat([[self.A, self.B], [-self.B.T, None]], format="csc")


def assemble(mesh, k, f, u_bc=None, rot_u_bc=None, threads=None, cops=None):
    """Assemble the saddle system; u_bc/rot_u_bc supply inhomogeneous
    tangential and rotor boundary data (omitted = homogeneous)."""
    cops = cops or ComplexOps(mesh, k, threads)
    Afull = cops.rotrot
    Bfull = cops.inner_sigma @ cops.grad
    keepS = cops.layout("Sigma", "homogeneous").full_keep
    A = cops.restrict(Afull, "Sigma", "Sigma")
    B = cops.restrict(Bfull, "Sigma", "V")

    ell = cops.load_vector(f)[keepS]
    u_lift = np.zeros(cops.layout("Sigma").dim)
    if u_bc is not None:
        x = interpolate_Sigma(cops, u_bc, rot_u_bc)
        mask = np.ones(x.size, dtype=bool)
        mask[keepS] = False
        u_lift[mask] = x[mask]
        ell -= (Afull.tocsr()[keepS] @ u_lift)
        rhs_q = (Bfull.tocsr().T[cops.layout("V", "homogeneous").full_keep]
                 @ u_lift)
    else:
        rhs_q = np.zeros(B.shape[1])
    return SaddleSystem(cops, A, B, np.concatenate([ell, rhs_q]), u_lift)


def solve(system):
    """Direct sparse solve; returns (u, p) on the full (unrestricted) layouts.

    Raises RuntimeError if the relative residual exceeds the contract.
    """
    M = system.matrix
    x = spsolve(M, system.rhs)
    res = np.linalg.norm(M @ x - system.rhs)
    scale = max(np.linalg.norm(system.rhs), np.linalg.norm(x), 1.0)
    if not res <= RESIDUAL_RTOL * scale:
        raise RuntimeError(f"saddle solve residual {res:.3e} exceeds "
                           f"{RESIDUAL_RTOL:.0e} relative")
    cops = system.cops
    nS = system.A.shape[0]
    u = system.u_lift.copy()
    u[cops.layout("Sigma", "homogeneous").full_keep] = x[:nS]
    p = np.zeros(cops.layout("V").dim)
    p[cops.layout("V", "homogeneous").full_keep] = x[nS:]
    return u, p


# -- error measurement --------------------------------------------------------

@dataclass
class ErrorRecord:
    h: float
    err_ul2: float
    err_urotrot: float
    err_pl2: float
    err_pgrad: float

    def values(self):
        return (self.err_ul2, self.err_urotrot, self.err_pl2, self.err_pgrad)


def error_report(cops, u_h, p_h, u, rot_u, p):
    """Errors against the interpolated exact fields, in the scheme's norms:
    discrete inner-product norm and rot-rot norm for u, potential-based norm
    and gradient-image norm for p."""
    du = u_h - interpolate_Sigma(cops, u, rot_u)
    dp = p_h - interpolate_V(cops, p)
    return ErrorRecord(
        cops.mesh.h,
        cops.norm(cops.inner_sigma, du),
        cops.norm(cops.rotrot, du),
        cops.norm(cops.pressure_norm, dp),
        cops.norm(cops.inner_sigma, cops.grad @ dp),
    )


def rates(records):
    """Per-interval convergence rates: log(e_i/e_{i+1}) / log(h_i/h_{i+1})."""
    out = []
    for a, b in zip(records, records[1:]):
        lh = math.log(a.h / b.h)
        out.append(tuple(math.log(ea / eb) / lh if ea > 0 and eb > 0
                         else float("nan")
                         for ea, eb in zip(a.values(), b.values())))
    return out


CSV_HEADER = "MeshSize,ErrUL2,ErrURotRot,ErrPL2,ErrPGrad"
RATES_HEADER = "MeshSize,RateUL2,RateURotRot,RatePL2,RatePGrad"


def records_to_csv(records):
    lines = [CSV_HEADER]
    for r in records:
        lines.append(",".join("%.17g" % v for v in (r.h,) + r.values()))
    return "\n".join(lines) + "\n"


def rates_to_csv(records):
    lines = [RATES_HEADER]
    for fine, rate in zip(records[1:], rates(records)):
        lines.append(",".join("%.17g" % v for v in (fine.h,) + rate))
    return "\n".join(lines) + "\n"


def convergence_study(family, k, n_list, out=None, threads=None,
                      progress=None):
    """Manufactured-solution study; returns (records, rates) and optionally
    writes the CSV plus a companion `.rates` file."""
    records = []
    for n in n_list:
        mesh = build_structured_mesh(family, n)
        cops = ComplexOps(mesh, k, threads)
        system = assemble(mesh, k, f_exact, u_exact, rot_u_exact, threads,
                          cops)
        u_h, p_h = solve(system)
        rec = error_report(cops, u_h, p_h, u_exact, rot_u_exact, p_exact)
        records.append(rec)
        if progress:
            progress(n, rec)
    if out is not None:
        with open(out, "w") as fh:
            fh.write(records_to_csv(records))
        with open(str(out) + ".rates", "w") as fh:
            fh.write(rates_to_csv(records))
    return records, rates(records)
