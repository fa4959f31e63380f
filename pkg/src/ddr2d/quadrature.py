"""Quadrature on polygons (fan sub-triangulation from the interior point) and edges.

Triangle rules come from a tensor-collapse of Gauss-Legendre onto the reference
triangle; only polynomial exactness up to the declared degree is contractual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class QuadratureRule:
    points: np.ndarray   # (nq, 2) for elements, (nq, 2) physical points for edges
    weights: np.ndarray  # (nq,)
    exact_degree: int


@lru_cache(maxsize=None)
def _gauss01(npts):
    x, w = np.polynomial.legendre.leggauss(npts)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=None)
def _reference_triangle_rule(d):
    # Collapse map (xi, eta) -> (xi, eta (1 - xi)) on [0,1]^2; the Jacobian
    # (1 - xi) raises the xi-degree by one.
    nx = math.ceil((d + 2) / 2)
    ny = math.ceil((d + 1) / 2)
    xi, wx = _gauss01(nx)
    eta, wy = _gauss01(ny)
    X, Y = np.meshgrid(xi, eta, indexing="ij")
    W = np.outer(wx, wy) * (1.0 - X)
    pts = np.stack([X.ravel(), (Y * (1.0 - X)).ravel()], axis=1)
    return pts, W.ravel()


def triangle_rule(v0, v1, v2, d):
    """Rule exact for total degree <= d on the triangle (v0, v1, v2)."""
    ref_pts, ref_w = _reference_triangle_rule(d)
    v0, v1, v2 = (np.asarray(v, dtype=float) for v in (v0, v1, v2))
    J = np.stack([v1 - v0, v2 - v0], axis=1)
    detJ = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
    pts = v0 + ref_pts @ J.T
    return pts, ref_w * detJ


def element_rule(element, mesh, d):
    """Rule exact for total degree <= d on a polygonal element.

    Built by fanning triangles from the element interior point x_T through the
    CCW vertex loop.
    """
    if d < 0:
        raise ValueError("degree must be >= 0")
    loop = [mesh.vertices[v].x for v in element.vertices]
    pts_all, w_all = [], []
    m = len(loop)
    for i in range(m):
        p, w = triangle_rule(element.x_T, loop[i], loop[(i + 1) % m], d)
        pts_all.append(p)
        w_all.append(w)
    return QuadratureRule(np.vstack(pts_all), np.concatenate(w_all), d)


def edge_rule(edge, mesh, d):
    """Mapped Gauss-Legendre rule on an edge, exact for degree <= d."""
    npts = max(1, math.ceil((d + 1) / 2))
    s, w = _gauss01(npts)
    x0 = mesh.vertices[edge.v0].x
    x1 = mesh.vertices[edge.v1].x
    pts = x0[None, :] + s[:, None] * (x1 - x0)[None, :]
    return QuadratureRule(pts, w * edge.length, d)


def edge_rule_params(edge, d):
    """Arc-length offsets from the edge midpoint and weights for edge_rule(edge, d)."""
    npts = max(1, math.ceil((d + 1) / 2))
    s, w = _gauss01(npts)
    return (s - 0.5) * edge.length, w * edge.length
