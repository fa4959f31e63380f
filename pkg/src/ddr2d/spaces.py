"""Discrete-space DOF layouts (V, Sigma, W), serendipity and boundary-condition
variants, and the associated coefficient vectors.

Global numbering: all element blocks, then all edge blocks, then all vertex
blocks, each in id order.  Within a Sigma element block the rotor-image
sub-block precedes the Koszul-complement sub-block; within a Sigma edge block
the tangential-trace sub-block precedes the rotor-trace sub-block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .polybasis import dim_P, dim_P1d, complement_dims

SPACES = ("V", "Sigma", "W")
VARIANTS = ("full", "serendipity")
BCS = ("none", "homogeneous")

ALIGN_TOL = 1e-9


def eta_count(lines, tol=ALIGN_TOL):
    """Number of pairwise non-aligned edge lines, floored at 2.

    Each line is a (point, direction) pair.  Two edges are aligned when they
    are collinear: parallel directions (sign-insensitive) and coincident
    supporting lines.  Parallel but offset edges, as on opposite sides of a
    quadrilateral, count separately.
    """
    kept = []
    for x, d in lines:
        ang = math.atan2(d[1], d[0]) % math.pi
        new = True
        for xa, aa in kept:
            if min(abs(ang - aa), math.pi - abs(ang - aa)) < tol:
                dx = x - xa
                if abs(dx[0] * math.sin(aa) - dx[1] * math.cos(aa)) < tol:
                    new = False
                    break
        if new:
            kept.append((x, ang))
    return max(len(kept), 2)


def element_eta(mesh, element):
    return eta_count([(mesh.vertices[mesh.edges[e].v0].x, mesh.edges[e].t)
                      for e in element.edges])


def serendipity_degree(k, eta):
    """Element-interior degree l_T = max(k + 1 - eta_T, -1)."""
    return max(k + 1 - eta, -1)


def _element_subblock_dims(space, k, ell):
    """Per-element sub-block dims; ell is the serendipity degree (None = full)."""
    if space == "V":
        return (dim_P(k - 1 if ell is None else ell),)
    if space == "Sigma":
        # Serendipity reduces the Koszul-complement block to degree l_T.
        c_deg = k if ell is None else ell
        return (complement_dims("Roly", k - 1), complement_dims("cRoly", c_deg))
    if space == "W":
        return (dim_P(k),)
    raise ValueError(space)


def _edge_subblock_dims(space, k):
    if space == "V":
        return (dim_P1d(k - 1),)
    if space == "Sigma":
        return (dim_P1d(k), dim_P1d(k - 1))
    if space == "W":
        return (dim_P1d(k - 1),)
    raise ValueError(space)


def local_dof_count(n_edges, k, space, variant="full"):
    """Local DOF count on a single regular polygon with n_edges edges.

    On a convex polygon no two edges are collinear, so eta_T = n_edges.
    """
    ell = serendipity_degree(k, n_edges) if variant == "serendipity" else None
    if space == "W":
        ell = None  # no interior reduction on the complex tail
    elem = sum(_element_subblock_dims(space, k, ell))
    edge = sum(_edge_subblock_dims(space, k))
    return elem + n_edges * edge + n_edges


@dataclass
class SpaceLayout:
    mesh: object
    space: str
    k: int
    variant: str
    bc: str
    elem_subdims: list = field(init=False)   # per element: tuple of sub-block dims
    edge_subdims: tuple = field(init=False)  # same for every edge
    elem_offsets: np.ndarray = field(init=False)
    edge_offsets: np.ndarray = field(init=False)
    vertex_offsets: np.ndarray = field(init=False)
    dim: int = field(init=False)
    full_keep: np.ndarray = field(init=False)  # indices into the bc='none' layout

    def __post_init__(self):
        mesh, space, k = self.mesh, self.space, self.k
        if space not in SPACES or self.variant not in VARIANTS or self.bc not in BCS:
            raise ValueError("bad layout parameters")
        if k < 0:
            raise ValueError("k must be >= 0")
        drop_edges = set(mesh.boundary_edges()) if self.bc == "homogeneous" else set()
        drop_verts = set(mesh.boundary_vertices()) if self.bc == "homogeneous" else set()

        self.elem_subdims = []
        for T in mesh.elements:
            ell = None
            if self.variant == "serendipity" and space != "W":
                ell = serendipity_degree(k, element_eta(mesh, T))
            self.elem_subdims.append(_element_subblock_dims(space, k, ell))
        self.edge_subdims = _edge_subblock_dims(space, k)

        off = 0
        self.elem_offsets = np.zeros(len(mesh.elements) + 1, dtype=np.int64)
        for i, dims in enumerate(self.elem_subdims):
            self.elem_offsets[i] = off
            off += sum(dims)
        self.elem_offsets[-1] = off

        esz = sum(self.edge_subdims)
        self.edge_offsets = np.zeros(len(mesh.edges) + 1, dtype=np.int64)
        for i in range(len(mesh.edges)):
            self.edge_offsets[i] = off
            off += 0 if i in drop_edges else esz
        self.edge_offsets[-1] = off

        self.vertex_offsets = np.zeros(len(mesh.vertices) + 1, dtype=np.int64)
        for i in range(len(mesh.vertices)):
            self.vertex_offsets[i] = off
            off += 0 if i in drop_verts else 1
        self.vertex_offsets[-1] = off
        self.dim = off

        if self.bc == "homogeneous":
            keep = []
            foff = 0
            for dims in self.elem_subdims:
                keep.extend(range(foff, foff + sum(dims)))
                foff += sum(dims)
            for i in range(len(mesh.edges)):
                if i not in drop_edges:
                    keep.extend(range(foff, foff + esz))
                foff += esz
            for i in range(len(mesh.vertices)):
                if i not in drop_verts:
                    keep.append(foff)
                foff += 1
            self.full_keep = np.array(keep, dtype=np.int64)
        else:
            self.full_keep = np.arange(self.dim, dtype=np.int64)

    def elem_slice(self, i):
        return slice(int(self.elem_offsets[i]), int(self.elem_offsets[i + 1]))

    def edge_size(self, i):
        return int(self.edge_offsets[i + 1] - self.edge_offsets[i])

    def edge_slice(self, i):
        return slice(int(self.edge_offsets[i]), int(self.edge_offsets[i + 1]))

    def vertex_index(self, i):
        if self.vertex_offsets[i + 1] == self.vertex_offsets[i]:
            return None
        return int(self.vertex_offsets[i])

    def element_l2g(self, element):
        """Global indices of an element's local DOFs (element blocks, then each
        loop edge's block, then each loop vertex).  Only valid without bc."""
        if self.bc != "none":
            raise ValueError("local-to-global maps are defined on the full layout")
        idx = [np.arange(self.elem_offsets[element.id], self.elem_offsets[element.id + 1])]
        for e in element.edges:
            idx.append(np.arange(self.edge_offsets[e], self.edge_offsets[e + 1]))
        idx.append(np.array([self.vertex_offsets[v] for v in element.vertices], dtype=np.int64))
        return np.concatenate(idx)


def space_layout(mesh, k, space, variant="full", bc="none"):
    return SpaceLayout(mesh, space, k, variant, bc)


@dataclass
class DofVector:
    layout: SpaceLayout
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.layout.dim,):
            raise ValueError(f"value vector length {self.values.shape} does not match "
                             f"layout dim {self.layout.dim}")
