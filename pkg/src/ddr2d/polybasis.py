"""Scaled polynomial bases on elements and edges, Koszul-complement subspaces,
and L2-orthogonal projection.

Element frames are monomials in (x - x_T)/h_T in graded order; edge frames are
monomials in the centered arc-length parameter s/h_E.  Every basis returned by
this module is L2-orthonormalized on its carrier via a Cholesky factorization
of the raw monomial Gram, so Gram matrices of returned bases are identities up
to roundoff.  Koszul/rotor constructions manipulate monomial exponents exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import solve_triangular

from .quadrature import edge_rule_params, element_rule


def dim_P(m):
    """dim P^m in 2D, with P^{-1} = {0}."""
    return (m + 1) * (m + 2) // 2 if m >= 0 else 0


def dim_P1d(m):
    return m + 1 if m >= 0 else 0


def complement_dims(kind, m):
    if kind in ("Roly", "Goly"):
        return max(dim_P(m + 1) - 1, 0)
    if kind in ("cRoly", "cGoly"):
        return dim_P(m - 1)
    raise ValueError(kind)


@lru_cache(maxsize=None)
def monomial_exponents(m):
    """Graded-order exponent pairs for total degree <= m, as an (n, 2) array."""
    exps = [(d - j, j) for d in range(m + 1) for j in range(d + 1)]
    return np.array(exps, dtype=int).reshape(-1, 2)


@lru_cache(maxsize=None)
def _exp_index(m):
    return {tuple(e): i for i, e in enumerate(monomial_exponents(m))}


def mono_vander(points, m, center, h):
    """Vandermonde of the scaled element monomial frame at 2D points: (npts, n)."""
    z = (np.atleast_2d(points) - center) / h
    exps = monomial_exponents(m)
    return z[:, 0][:, None] ** exps[:, 0][None, :] * z[:, 1][:, None] ** exps[:, 1][None, :]


def mono_diff_matrix(m, axis, h):
    """D with d_axis m_j = sum_j' D[j, j'] m_j' on the scaled frame of degree m."""
    exps = monomial_exponents(m)
    idx = _exp_index(m)
    n = len(exps)
    D = np.zeros((n, n))
    for j, (a, b) in enumerate(exps):
        e = (a, b)
        p = e[axis]
        if p > 0:
            tgt = (a - 1, b) if axis == 0 else (a, b - 1)
            D[j, idx[tgt]] = p / h
    return D


def mono_shift_matrix(m_src, m_dst, axis, h):
    """S with (x_axis - c_axis) m_j = sum S[j, j'] m_j' (frames of degree m_src -> m_dst)."""
    exps = monomial_exponents(m_src)
    idx = _exp_index(m_dst)
    S = np.zeros((len(exps), dim_P(m_dst)))
    for j, (a, b) in enumerate(exps):
        tgt = (a + 1, b) if axis == 0 else (a, b + 1)
        S[j, idx[tgt]] = h
    return S


@dataclass
class SubspaceBasis:
    """An L2-orthonormal basis of a polynomial subspace on an element or edge.

    coeffs has shape (dim, ncomp, nframe) over the carrier's scaled monomial
    frame (ncomp = 1 for scalar spaces).  For edges the frame is 1D in the
    centered arc-length parameter.
    """

    carrier: tuple            # ('element', id) or ('edge', id)
    kind: str                 # P, vP, Roly, cRoly, Goly, cGoly, P_zero_mean
    degree: int
    frame_degree: int
    center: np.ndarray        # element center x_T, or 0.0 offset for edges
    h: float
    coeffs: np.ndarray
    gram: np.ndarray

    @property
    def dim(self):
        return self.coeffs.shape[0]

    @property
    def ncomp(self):
        return self.coeffs.shape[1]

    def eval(self, points):
        """Values at 2D points (elements) or arc-length offsets (edges): (dim, ncomp, npts)."""
        if self.carrier[0] == "edge":
            s = np.atleast_1d(points) / self.h
            V = s[:, None] ** np.arange(self.frame_degree + 1)[None, :]
        else:
            V = mono_vander(points, self.frame_degree, self.center, self.h)
        return np.einsum("icm,qm->icq", self.coeffs, V)

    def eval_scalar(self, points):
        return self.eval(points)[:, 0, :]


def _orthonormalize(coeffs, frame_gram):
    """Cholesky-orthonormalize basis rows against the monomial-frame Gram."""
    n = coeffs.shape[0]
    if n == 0:
        return coeffs, np.zeros((0, 0))
    flat = coeffs.reshape(n, -1)
    ncomp, nm = coeffs.shape[1], coeffs.shape[2]
    G = np.zeros((n, n))
    for c in range(ncomp):
        block = coeffs[:, c, :]
        G += block @ frame_gram @ block.T
    L = np.linalg.cholesky(G)
    ortho = solve_triangular(L, flat, lower=True).reshape(n, ncomp, nm)
    return ortho, np.eye(n)


def _element_frame_gram(element, mesh, frame_degree, rule=None):
    if rule is None:
        rule = element_rule(element, mesh, 2 * frame_degree)
    V = mono_vander(rule.points, frame_degree, element.x_T, element.h_T)
    return (V * rule.weights[:, None]).T @ V


def scalar_basis(mesh, entity, m):
    """Orthonormal basis of P^m on an element or edge (dim 0 for m = -1)."""
    from .mesh import Edge, Element

    if isinstance(entity, Element):
        nd = dim_P(m)
        frame_degree = max(m, 0)
        coeffs = np.zeros((nd, 1, dim_P(frame_degree)))
        for i in range(nd):
            coeffs[i, 0, i] = 1.0
        if nd == 0:
            return SubspaceBasis(("element", entity.id), "P", m, frame_degree,
                                 entity.x_T, entity.h_T, coeffs, np.zeros((0, 0)))
        G = _element_frame_gram(entity, mesh, frame_degree)
        ortho, gram = _orthonormalize(coeffs, G)
        return SubspaceBasis(("element", entity.id), "P", m, frame_degree,
                             entity.x_T, entity.h_T, ortho, gram)
    if isinstance(entity, Edge):
        nd = dim_P1d(m)
        frame_degree = max(m, 0)
        coeffs = np.zeros((nd, 1, frame_degree + 1))
        for i in range(nd):
            coeffs[i, 0, i] = 1.0
        if nd == 0:
            return SubspaceBasis(("edge", entity.id), "P", m, frame_degree,
                                 np.zeros(2), entity.length, coeffs, np.zeros((0, 0)))
        s, w = edge_rule_params(entity, 2 * frame_degree)
        z = s / entity.length
        V = z[:, None] ** np.arange(frame_degree + 1)[None, :]
        G = (V * w[:, None]).T @ V
        ortho, gram = _orthonormalize(coeffs, G)
        return SubspaceBasis(("edge", entity.id), "P", m, frame_degree,
                             np.zeros(2), entity.length, ortho, gram)
    raise TypeError(f"unsupported carrier {type(entity)!r}")


def complement_basis(mesh, element, kind, m):
    """Orthonormal basis of Roly^m, cRoly^m, Goly^m, or cGoly^m on an element.

    Roly/Goly: vector rotors/gradients of the non-constant scaled monomials of
    degree <= m+1.  cRoly/cGoly: the Koszul field (x - x_T), resp. its -pi/2
    rotation, times monomials of degree <= m-1.
    """
    h, xc = element.h_T, element.x_T
    nd = complement_dims(kind, m)
    frame_degree = max(m, 0)
    nm = dim_P(frame_degree)
    coeffs = np.zeros((nd, 2, nm))
    if kind in ("Roly", "Goly") and nd > 0:
        D1 = mono_diff_matrix(m + 1, 0, h)
        D2 = mono_diff_matrix(m + 1, 1, h)
        for i in range(nd):
            src = np.zeros(dim_P(m + 1))
            src[i + 1] = 1.0  # skip the constant monomial
            d1 = (D1.T @ src)[:nm]
            d2 = (D2.T @ src)[:nm]
            if kind == "Roly":   # vrot q = (d2 q, -d1 q)
                coeffs[i, 0], coeffs[i, 1] = d2, -d1
            else:                # grad q
                coeffs[i, 0], coeffs[i, 1] = d1, d2
    elif kind in ("cRoly", "cGoly") and nd > 0:
        S1 = mono_shift_matrix(m - 1, frame_degree, 0, h)
        S2 = mono_shift_matrix(m - 1, frame_degree, 1, h)
        for i in range(nd):
            src = np.zeros(dim_P(m - 1))
            src[i] = 1.0
            s1 = S1.T @ src
            s2 = S2.T @ src
            if kind == "cRoly":  # (x - x_T) q
                coeffs[i, 0], coeffs[i, 1] = s1, s2
            else:                # (x - x_T)^perp q = ((x2 - c2) q, -(x1 - c1) q)
                coeffs[i, 0], coeffs[i, 1] = s2, -s1
    if nd == 0:
        return SubspaceBasis(("element", element.id), kind, m, frame_degree,
                             xc, h, coeffs, np.zeros((0, 0)))
    G = _element_frame_gram(element, mesh, frame_degree)
    ortho, gram = _orthonormalize(coeffs, G)
    return SubspaceBasis(("element", element.id), kind, m, frame_degree,
                         xc, h, ortho, gram)


def l2_project(f, basis, rule, points=None):
    """Coefficients of the L2-orthogonal projection of f onto the basis.

    f maps quadrature points to values of shape (npts,) or (ncomp, npts).
    For edge carriers, pass the arc-length offsets of the rule via `points`.
    """
    if basis.dim == 0:
        return np.zeros(0)
    where = rule.points if points is None else points
    vals = np.asarray(f(where), dtype=float)
    if vals.ndim == 1:
        vals = vals[None, :]
    B = basis.eval(where)
    moments = np.einsum("icq,cq,q->i", B, vals, rule.weights)
    return np.linalg.solve(basis.gram, moments)
