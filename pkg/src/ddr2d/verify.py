"""Numerical certification of the structural properties of the discrete
complex: exactness (with and without homogeneous boundary conditions), cochain
commutation of the interpolators, and stability constants (discrete Poincaré
eigenvalue, saddle-point inf-sup constant, norm-equivalence bracket).

Rank computations use dense SVD and are meant for desk-scale meshes (a few
thousand DOFs at most).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .operators import (ComplexOps, interpolate_Sigma, interpolate_V,
                        interpolate_W)

RANK_RTOL = 1e-9
RANK_GAP = 10.0


def numerical_rank(M, rtol=RANK_RTOL, gap=RANK_GAP):
    """(rank, conclusive, threshold) of a dense matrix by SVD.

    The rank decision is conclusive when the singular values straddling the
    threshold are separated by at least the `gap` factor (or the matrix has
    full/zero rank with margin).
    """
    M = np.asarray(M)
    if min(M.shape) == 0:
        return 0, True, 0.0
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[0] == 0.0:
        return 0, True, 0.0
    thr = rtol * sv[0]
    r = int((sv > thr).sum())
    if r == 0:
        conclusive = True
    elif r == len(sv):
        conclusive = sv[r - 1] > gap * thr
    else:
        conclusive = sv[r - 1] >= gap * sv[r]
    return r, conclusive, thr


@dataclass
class ExactnessReport:
    mesh_label: str
    k: int
    bc: str
    dim_V: int
    dim_Sigma: int
    dim_W: int
    rank_G: int
    rank_R: int
    nullity_G: int
    nullity_R: int
    rank_tol: float
    conclusive: bool
    kernel_ok: bool = field(init=False)     # nullity(G) as predicted
    middle_ok: bool = field(init=False)     # image(G) = ker(R)
    tail_ok: bool = field(init=False)       # image(R) fills the target
    cokernel_is_mean: bool | None = None    # bc case: left kernel = mean functional
    passed: bool = field(init=False)

    def __post_init__(self):
        if self.bc == "none":
            # The full sequence starts from the constants: ker(G) is
            # one-dimensional and the rotor is onto.
            self.kernel_ok = self.nullity_G == 1
            self.tail_ok = self.rank_R == self.dim_W
        else:
            # With homogeneous boundary conditions the gradient is injective
            # and the rotor fills the zero-mean subspace of the tail space:
            # summing the rotor's element moments telescopes the edge terms to
            # the (vanishing) boundary, so the global mean is a cokernel of
            # dimension exactly one.
            self.kernel_ok = self.nullity_G == 0
            self.tail_ok = self.rank_R == self.dim_W - 1
        self.middle_ok = self.rank_G == self.nullity_R
        self.passed = bool(self.conclusive and self.kernel_ok
                           and self.middle_ok and self.tail_ok
                           and self.cokernel_is_mean in (None, True))

    def lines(self):
        yield (f"exactness {self.mesh_label} k={self.k} bc={self.bc}: "
               f"dims=({self.dim_V},{self.dim_Sigma},{self.dim_W})")
        yield (f"  rank(G)={self.rank_G} nullity(G)={self.nullity_G} "
               f"rank(R)={self.rank_R} nullity(R)={self.nullity_R} "
               f"tol={self.rank_tol:.3e}")
        yield (f"  kernel_ok={self.kernel_ok} middle_ok={self.middle_ok} "
               f"tail_ok={self.tail_ok} conclusive={self.conclusive} "
               f"passed={self.passed}")

    def kv(self):
        out = {"report": "exactness", "mesh": self.mesh_label, "k": self.k,
               "bc": self.bc, "dim_V": self.dim_V, "dim_Sigma": self.dim_Sigma,
               "dim_W": self.dim_W, "rank_G": self.rank_G,
               "rank_R": self.rank_R, "nullity_G": self.nullity_G,
               "nullity_R": self.nullity_R, "conclusive": self.conclusive,
               "passed": self.passed}
        if self.cokernel_is_mean is not None:
            out["cokernel_is_mean"] = self.cokernel_is_mean
        return out


def _mean_functional(cops, bc):
    """Vector m with m @ w = sum_T int_T w_T on the tail-space layout."""
    lay = cops.layout("W")
    m = np.zeros(lay.dim)
    for ops in cops.elem_ops:
        sl = lay.elem_slice(ops.T.id)
        # integral of each orthonormal frame member over the element
        m[sl] = (ops.P_hi[:ops.nPk] * ops.rule_hi.weights[None, :]).sum(axis=1)
    if bc == "homogeneous":
        m = m[cops.layout("W", bc).full_keep]
    return m


def check_exactness(mesh, k, bc="none", label=None, cops=None):
    if k < 0:
        raise ValueError("k must be >= 0")
    cops = cops or ComplexOps(mesh, k)
    G, R = cops.grad, cops.rot
    if bc == "homogeneous":
        G = cops.restrict(G, "Sigma", "V")
        R = cops.restrict(R, "W", "Sigma")
    Gd, Rd = G.toarray(), R.toarray()
    rG, cG, tG = numerical_rank(Gd)
    rR, cR, tR = numerical_rank(Rd)
    coker = None
    if bc == "homogeneous" and Rd.shape[0] > 0 and Rd.shape[1] > 0:
        m = _mean_functional(cops, bc)
        res = np.linalg.norm(m @ Rd)
        coker = bool(res <= 1e-9 * max(np.linalg.norm(m), 1.0)
                     * max(np.linalg.norm(Rd, 2), 1.0))
    return ExactnessReport(
        label or f"mesh(h={mesh.h:.3g})", k, bc,
        Gd.shape[1], Gd.shape[0], Rd.shape[0], rG, rR,
        Gd.shape[1] - rG, Gd.shape[0] - rR, max(tG, tR),
        bool(cG and cR), cokernel_is_mean=coker)


# -- commutation -------------------------------------------------------------


@dataclass
class CommutationReport:
    mesh_label: str
    k: int
    entries: list  # (field name, grad residual or None, rot residual or None)

    def max_residual(self):
        return max((r for _, g, r in self.entries for r in (g, r)
                    if r is not None), default=0.0)

    def lines(self):
        yield f"commutation {self.mesh_label} k={self.k}:"
        for name, g, r in self.entries:
            gs = "-" if g is None else f"{g:.3e}"
            rs = "-" if r is None else f"{r:.3e}"
            yield f"  {name:24s} grad_residual={gs} rot_residual={rs}"

    def kv(self):
        return {"report": "commutation", "mesh": self.mesh_label, "k": self.k,
                "entries": [(n, g, r) for n, g, r in self.entries]}


def default_field_suite(k):
    """Scalar/vector fields exercising both commutation squares.

    Returns a list of dicts with keys among {name, q, grad_q, v, rot_v}.
    """
    from .polybasis import monomial_exponents

    exps = monomial_exponents(k + 1)
    coef = 1.0 + 0.1 * np.arange(len(exps))

    def q_poly(pts):
        pts = np.atleast_2d(pts)
        return sum(c * pts[:, 0] ** a * pts[:, 1] ** b
                   for c, (a, b) in zip(coef, exps))

    def grad_q_poly(pts):
        pts = np.atleast_2d(pts)
        gx = sum(c * a * pts[:, 0] ** max(a - 1, 0) * pts[:, 1] ** b
                 for c, (a, b) in zip(coef, exps))
        gy = sum(c * b * pts[:, 0] ** a * pts[:, 1] ** max(b - 1, 0)
                 for c, (a, b) in zip(coef, exps))
        one = np.ones(len(pts))
        return np.stack([gx * one, gy * one], axis=1)

    pi = math.pi

    def q_trig(pts):
        pts = np.atleast_2d(pts)
        return np.sin(pi * pts[:, 0]) * np.sin(pi * pts[:, 1])

    def grad_q_trig(pts):
        pts = np.atleast_2d(pts)
        return np.stack([pi * np.cos(pi * pts[:, 0]) * np.sin(pi * pts[:, 1]),
                         pi * np.sin(pi * pts[:, 0]) * np.cos(pi * pts[:, 1])],
                        axis=1)

    def v_trig(pts):
        pts = np.atleast_2d(pts)
        s = np.sin(pi * (pts[:, 0] + pts[:, 1]))
        return np.stack([-s, s], axis=1)

    def rot_v_trig(pts):
        pts = np.atleast_2d(pts)
        return 2 * pi * np.cos(pi * (pts[:, 0] + pts[:, 1]))

    zero = lambda pts: np.zeros(len(np.atleast_2d(pts)))

    return [
        {"name": f"polynomial deg {k + 1}", "q": q_poly, "grad_q": grad_q_poly,
         "v": grad_q_poly, "rot_v": zero},
        {"name": "trig scalar", "q": q_trig, "grad_q": grad_q_trig,
         "v": grad_q_trig, "rot_v": zero},
        {"name": "trig vector", "v": v_trig, "rot_v": rot_v_trig},
    ]


def check_commutation(mesh, k, field_suite=None, label=None, cops=None):
    """Residuals of both commutation squares, in component norms."""
    cops = cops or ComplexOps(mesh, k)
    suite = field_suite if field_suite is not None else default_field_suite(k)
    TS = cops.comp_sigma
    TW = cops.comp_W
    entries = []
    for f in suite:
        g_res = r_res = None
        if "q" in f:
            d = cops.grad @ interpolate_V(cops, f["q"]) - interpolate_Sigma(
                cops, f["grad_q"], lambda pts: np.zeros(len(np.atleast_2d(pts))))
            g_res = cops.norm(TS, d)
        if "v" in f:
            d = cops.rot @ interpolate_Sigma(cops, f["v"], f["rot_v"]) \
                - interpolate_W(cops, f["rot_v"])
            r_res = cops.norm(TW, d)
        entries.append((f["name"], g_res, r_res))
    return CommutationReport(label or f"mesh(h={mesh.h:.3g})", k, entries)


# -- stability ---------------------------------------------------------------


@dataclass
class StabilityReport:
    mesh_label: str
    k: int
    lambda_P: float
    gamma_h: float
    equiv_lo: float   # norm-equivalence bracket of the discrete inner product
    equiv_hi: float   # against the component norm, on the BC subspace

    def lines(self):
        yield (f"stability {self.mesh_label} k={self.k}: "
               f"lambda_P={self.lambda_P:.6e} gamma_h={self.gamma_h:.6e} "
               f"norm_equiv=[{self.equiv_lo:.3e}, {self.equiv_hi:.3e}]")

    def kv(self):
        return {"report": "stability", "mesh": self.mesh_label, "k": self.k,
                "lambda_P": self.lambda_P, "gamma_h": self.gamma_h,
                "equiv_lo": self.equiv_lo, "equiv_hi": self.equiv_hi}


def estimate_poincare(mesh, k, label=None, cops=None):
    """Poincaré eigenvalue, inf-sup constant, and norm-equivalence bracket.

    lambda_P is the smallest generalized eigenvalue of G^T M_Sigma G against
    the V component-norm Gram on the boundary-restricted head space.  gamma_h
    is the smallest singular value of the saddle matrix whitened by the
    graph-norm Gram.
    """
    cops = cops or ComplexOps(mesh, k)
    G0 = cops.restrict(cops.grad, "Sigma", "V").toarray()
    MS0 = cops.restrict(cops.inner_sigma, "Sigma", "Sigma").toarray()
    TS0 = cops.restrict(cops.comp_sigma, "Sigma", "Sigma").toarray()
    TV0 = cops.restrict(cops.comp_V, "V", "V").toarray()
    A0 = cops.restrict(cops.rotrot, "Sigma", "Sigma").toarray()
    B0 = cops.restrict(cops.inner_sigma @ cops.grad, "Sigma", "V").toarray()

    if G0.shape[1] == 0:
        raise ValueError("empty head space; refine the mesh")
    KV = G0.T @ MS0 @ G0
    lam = float(sla.eigh(0.5 * (KV + KV.T), TV0, eigvals_only=True,
                         subset_by_index=[0, 0])[0])

    nS, nV = A0.shape[0], B0.shape[1]
    Ah = np.zeros((nS + nV, nS + nV))
    Ah[:nS, :nS] = A0
    Ah[:nS, nS:] = B0
    Ah[nS:, :nS] = -B0.T
    NS = TS0 + A0
    NV = TV0 + G0.T @ TS0 @ G0
    N = np.zeros_like(Ah)
    N[:nS, :nS] = 0.5 * (NS + NS.T)
    N[nS:, nS:] = 0.5 * (NV + NV.T)
    L = np.linalg.cholesky(N)
    white = sla.solve_triangular(L, sla.solve_triangular(L, Ah, lower=True).T,
                                 lower=True).T
    gamma = float(np.linalg.svd(white, compute_uv=False)[-1])

    ev = sla.eigh(0.5 * (MS0 + MS0.T), TS0, eigvals_only=True)
    return StabilityReport(label or f"mesh(h={mesh.h:.3g})", k, lam, gamma,
                           float(ev[0]), float(ev[-1]))


def format_report(report):
    return "\n".join(report.lines())


def format_kv(report):
    return "\n".join(f"{k}={v}" for k, v in report.kv().items())
