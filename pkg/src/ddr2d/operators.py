"""Local reconstructions, discrete differential operators, inner products, and
interpolators for the discrete rot-rot complex, plus global sparse assembly.

All element-local quantities are expressed in L2-orthonormal frames (element
scalar frame of degree k+2, per-edge scalar frame of degree k+1, and
orthonormal rotor/Koszul-complement bases), so volume and edge mass matrices
are identities and projections reduce to coefficient truncation.  Vector
polynomial coefficients are component-major: index c * dim_P(k) + j.

Local DOF ordering on an element matches SpaceLayout.element_l2g: element
sub-blocks, then one block per loop edge, then one value per loop vertex.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular
from scipy.sparse import coo_matrix

from .polybasis import complement_basis, dim_P, mono_diff_matrix, scalar_basis
from .quadrature import edge_rule_params, element_rule
from .parallel import thread_map
from .spaces import space_layout

INTERP_DROP_TOL = 1e-10


def hi_degree(k):
    """Quadrature degree for non-polynomial integrands (interpolation, loads)."""
    return max(2 * k + 6, 12)


def _to_ortho(C, rows_mono):
    """Ortho-frame coefficients of functions given by mono-frame coefficient rows."""
    return solve_triangular(C.T, np.atleast_2d(rows_mono).T, lower=False).T


@dataclass
class EdgeOps:
    """Per-edge machinery: orthonormal trace frame, potential and gradient maps.

    `pot` maps the data vector [moments vs frame members 0..k-1, value at v0,
    value at v1] to the ortho coefficients of the degree-(k+1) potential whose
    sub-degree moments and endpoint values match the data.  `grad` composes it
    with the tangential derivative (degree k).
    """

    edge: object
    k: int
    basis: object        # orthonormal P^{k+1} frame on the edge
    pot: np.ndarray      # (k+2, k+2)
    grad: np.ndarray     # (k+1, k+2)
    s: np.ndarray        # ops-rule arc-length offsets from the midpoint
    w: np.ndarray
    points: np.ndarray   # ops-rule physical points, (nq, 2)
    vals: np.ndarray     # frame values at the ops rule, (k+2, nq)
    s_hi: np.ndarray
    w_hi: np.ndarray
    points_hi: np.ndarray
    vals_hi: np.ndarray  # frame values at the hi rule


def build_edge_ops(mesh, edge, k):
    L = edge.length
    basis = scalar_basis(mesh, edge, k + 1)
    C = basis.coeffs[:, 0, :]

    ends = basis.eval_scalar(np.array([-0.5 * L, 0.5 * L]))
    A = np.zeros((k + 2, k + 2))
    A[:k, :k] = np.eye(k)
    A[k, :] = ends[:, 0]
    A[k + 1, :] = ends[:, 1]
    pot = np.linalg.inv(A)

    D = np.zeros((k + 2, k + 2))
    for j in range(1, k + 2):
        D[j, j - 1] = j / L
    Do = _to_ortho(C, C @ D)          # ortho coefficients of each member's derivative
    grad = (Do.T @ pot)[: k + 1, :]

    x0 = mesh.vertices[edge.v0].x
    x1 = mesh.vertices[edge.v1].x
    mid = 0.5 * (x0 + x1)

    s, w = edge_rule_params(edge, 2 * (k + 2))
    pts = mid[None, :] + s[:, None] * edge.t[None, :]
    s_hi, w_hi = edge_rule_params(edge, hi_degree(k))
    pts_hi = mid[None, :] + s_hi[:, None] * edge.t[None, :]
    return EdgeOps(edge, k, basis, pot, grad, s, w, pts, basis.eval_scalar(s),
                   s_hi, w_hi, pts_hi, basis.eval_scalar(s_hi))


class ElementOps:
    """All local reconstructions and bilinear forms on one element.

    Matrices act on local DOF vectors (V, Sigma, or W ordering) and return
    ortho-frame coefficients, so products of reconstructions reduce to
    coefficient contractions.
    """

    def __init__(self, mesh, element, k, edge_ops):
        self.mesh = mesh
        self.T = element
        self.k = k
        h = element.h_T
        ne = len(element.edges)
        self.ne = ne

        nVq = dim_P(k - 1)
        nPk = dim_P(k)
        nPk1 = dim_P(k + 1)
        nfr = dim_P(k + 2)
        nR = max(nPk - 1, 0)
        nC = dim_P(k - 1)
        self.nVq, self.nPk, self.nPk1, self.nfr = nVq, nPk, nPk1, nfr
        self.nR, self.nC = nR, nC
        self.nV = nVq + ne * k + ne
        self.nS = nR + nC + ne * (2 * k + 1) + ne
        self.nW = nPk + ne * k + ne

        # Local sub-block column indices.
        self.V_qT = np.arange(nVq)
        self.V_edge = [nVq + j * k + np.arange(k) for j in range(ne)]
        self.V_vert = nVq + ne * k + np.arange(ne)
        self.S_vR = np.arange(nR)
        self.S_vc = nR + np.arange(nC)
        sb = nR + nC
        self.S_vE = [sb + j * (2 * k + 1) + np.arange(k + 1) for j in range(ne)]
        self.S_CE = [sb + j * (2 * k + 1) + k + 1 + np.arange(k) for j in range(ne)]
        self.S_Cv = sb + ne * (2 * k + 1) + np.arange(ne)
        self.W_rT = np.arange(nPk)
        self.W_edge = [nPk + j * k + np.arange(k) for j in range(ne)]
        self.W_vert = nPk + ne * k + np.arange(ne)

        basis = scalar_basis(mesh, element, k + 2)
        self.basis = basis
        C = basis.coeffs[:, 0, :]
        self.D1o = _to_ortho(C, C @ mono_diff_matrix(k + 2, 0, h))
        self.D2o = _to_ortho(C, C @ mono_diff_matrix(k + 2, 1, h))

        def comp_ortho(b):
            out = np.zeros((b.dim, 2, nfr))
            nm = b.coeffs.shape[2]
            for c in range(2):
                pad = np.zeros((b.dim, nfr))
                pad[:, :nm] = b.coeffs[:, c, :]
                out[:, c, :] = _to_ortho(C, pad)
            return out

        self.RolyO = comp_ortho(complement_basis(mesh, element, "Roly", k - 1))
        self.cRkO = comp_ortho(complement_basis(mesh, element, "cRoly", k))
        cR2 = comp_ortho(complement_basis(mesh, element, "cRoly", k + 2))
        cG2 = comp_ortho(complement_basis(mesh, element, "cGoly", k + 2))

        # Per-edge traces and local gathers, in loop order.
        self.eops = [edge_ops[e] for e in element.edges]
        self.signs = element.signs
        self.EB = []       # element-frame x edge-frame cross mass, (nfr, k+2)
        self.PT_E = []     # element frame values at edge ops rule, (nfr, nq)
        self.PVE_loc = []  # edge potentials of V data, (k+2, nV)
        self.PWE_loc = []
        self.GE_loc = []   # edge gradients of V data, (k+1, nV)
        loop = list(element.vertices)
        for j, eo in enumerate(self.eops):
            PT = basis.eval_scalar(eo.points)
            self.PT_E.append(PT)
            self.EB.append((PT * eo.w[None, :]) @ eo.vals.T)

            QV = np.zeros((k + 2, self.nV))
            QV[np.arange(k), self.V_edge[j]] = 1.0
            QV[k, self.V_vert[loop.index(eo.edge.v0)]] = 1.0
            QV[k + 1, self.V_vert[loop.index(eo.edge.v1)]] = 1.0
            QW = np.zeros((k + 2, self.nW))
            QW[np.arange(k), self.W_edge[j]] = 1.0
            QW[k, self.W_vert[loop.index(eo.edge.v0)]] = 1.0
            QW[k + 1, self.W_vert[loop.index(eo.edge.v1)]] = 1.0
            self.PVE_loc.append(eo.pot @ QV)
            self.PWE_loc.append(eo.pot @ QW)
            self.GE_loc.append(eo.grad @ QV)

        self.Pvert = basis.eval_scalar(
            np.array([mesh.vertices[v].x for v in loop]))   # (nfr, ne)

        # ---- element gradient, tested against vector polynomials of degree k
        GT = np.zeros((2 * nPk, self.nV))
        GT[0 * nPk:1 * nPk, :nVq] = -self.D1o[:nPk, :nVq]
        GT[1 * nPk:2 * nPk, :nVq] = -self.D2o[:nPk, :nVq]
        for j, eo in enumerate(self.eops):
            M = self.EB[j][:nPk, :] @ self.PVE_loc[j]
            n = eo.edge.n
            GT[0 * nPk:1 * nPk, :] += self.signs[j] * n[0] * M
            GT[1 * nPk:2 * nPk, :] += self.signs[j] * n[1] * M
        self.GT = GT

        # ---- scalar potential of degree k+1 on the gradient side, tested
        # against the Koszul complement of degree k+2 (divergence spans P^{k+1})
        divO = cR2[:, 0, :] @ self.D1o + cR2[:, 1, :] @ self.D2o
        rhs = -np.concatenate([cR2[:, 0, :nPk], cR2[:, 1, :nPk]], axis=1) @ GT
        for j, eo in enumerate(self.eops):
            vals = np.einsum("icm,mq->icq", cR2, self.PT_E[j])
            vn = vals[:, 0, :] * eo.edge.n[0] + vals[:, 1, :] * eo.edge.n[1]
            rhs += self.signs[j] * (vn * eo.w[None, :]) @ eo.vals.T @ self.PVE_loc[j]
        self.PVT = np.linalg.solve(divO[:, :nPk1], rhs)      # (nPk1, nV)

        # ---- scalar rotor on the middle space
        RT = np.zeros((nPk, self.nS))
        if nR:
            RT[:, self.S_vR] = (self.D2o[:nPk, :] @ self.RolyO[:, 0, :].T
                                - self.D1o[:nPk, :] @ self.RolyO[:, 1, :].T)
        for j in range(ne):
            RT[:, self.S_vE[j]] -= self.signs[j] * self.EB[j][:nPk, : k + 1]
        self.RT = RT

        # ---- vector potential of degree k on the middle space, tested against
        # rotors of zero-mean P^{k+1} plus the degree-k Koszul complement
        lhs = np.zeros((2 * nPk, 2 * nPk))
        rhs = np.zeros((2 * nPk, self.nS))
        for r, jq in enumerate(range(1, nPk1)):              # q = member jq
            lhs[r, :nPk] = self.D2o[jq, :nPk]
            lhs[r, nPk:] = -self.D1o[jq, :nPk]
            if jq < nPk:
                rhs[r, :] = RT[jq, :]
            for j in range(ne):
                rhs[r, self.S_vE[j]] += self.signs[j] * self.EB[j][jq, : k + 1]
        for l in range(nC):
            r = nPk1 - 1 + l
            lhs[r, :nPk] = self.cRkO[l, 0, :nPk]
            lhs[r, nPk:] = self.cRkO[l, 1, :nPk]
            rhs[r, self.S_vc[l]] = 1.0
        self.PST = np.linalg.solve(lhs, rhs)                 # (2*nPk, nS)

        # ---- vector rotor on the tail space, tested against vP^k
        RWT = np.zeros((2 * nPk, self.nW))
        RWT[0 * nPk:1 * nPk, :nPk] = -self.D2o[:nPk, :nPk]
        RWT[1 * nPk:2 * nPk, :nPk] = self.D1o[:nPk, :nPk]
        for j, eo in enumerate(self.eops):
            M = self.EB[j][:nPk, :] @ self.PWE_loc[j]
            t = eo.edge.t
            RWT[0 * nPk:1 * nPk, :] += self.signs[j] * t[0] * M
            RWT[1 * nPk:2 * nPk, :] += self.signs[j] * t[1] * M
        self.RWT = RWT

        # ---- scalar potential of degree k+1 on the tail space, tested against
        # the rotated Koszul complement of degree k+2 (rot spans P^{k+1})
        rotO = cG2[:, 1, :] @ self.D1o - cG2[:, 0, :] @ self.D2o
        rhs = np.concatenate([cG2[:, 0, :nPk], cG2[:, 1, :nPk]], axis=1) @ RWT
        for j, eo in enumerate(self.eops):
            vals = np.einsum("icm,mq->icq", cG2, self.PT_E[j])
            vt = vals[:, 0, :] * eo.edge.t[0] + vals[:, 1, :] * eo.edge.t[1]
            rhs -= self.signs[j] * (vt * eo.w[None, :]) @ eo.vals.T @ self.PWE_loc[j]
        self.PWT = np.linalg.solve(rotO[:, :nPk1], rhs)      # (nPk1, nW)

        # ---- restriction of the middle space onto the tail space
        S = np.zeros((self.nW, self.nS))
        S[:nPk, :] = RT
        for j in range(ne):
            S[self.W_edge[j][:, None], self.S_CE[j][None, :]] = np.eye(k)
        S[self.W_vert, self.S_Cv] = 1.0
        self.S_to_W = S

        # ---- stabilization and rot-rot bilinear form
        M1 = self.PWT[:nPk, :].copy()
        M1[:, :nPk] -= np.eye(nPk)
        sT = h ** -2 * M1.T @ M1
        for j, eo in enumerate(self.eops):
            J = self.PT_E[j][:nPk1].T @ self.PWT - eo.vals.T @ self.PWE_loc[j]
            sT += h ** -1 * J.T @ (eo.w[:, None] * J)
        self.sT = sT
        self.KW = RWT.T @ RWT + sT
        self.aT = S.T @ self.KW @ S

        # ---- discrete inner product on the middle space
        MS = self.PST.T @ self.PST
        for j, eo in enumerate(self.eops):
            Pt = (eo.edge.t[0] * self.PT_E[j][:nPk].T @ self.PST[:nPk]
                  + eo.edge.t[1] * self.PT_E[j][:nPk].T @ self.PST[nPk:])
            Pt[:, self.S_vE[j]] -= eo.vals[: k + 1].T
            MS += h * Pt.T @ (eo.w[:, None] * Pt)
            PR = self.EB[j][:nPk, :k].T @ RT
            PR[:, self.S_CE[j]] -= np.eye(k)
            MS += h ** 3 * PR.T @ PR
        for j in range(ne):
            row = self.Pvert[:nPk, j] @ RT
            row[self.S_Cv[j]] -= 1.0
            MS += h ** 4 * np.outer(row, row)
        self.MS = MS

        # ---- component (scaling) norms, diagonal in the ortho frames
        dV = np.ones(self.nV)
        for j in range(ne):
            dV[self.V_edge[j]] = h
        dV[self.V_vert] = h ** 2
        self.tV = np.diag(dV)
        dS = np.ones(self.nS)
        for j in range(ne):
            dS[self.S_vE[j]] = h
            dS[self.S_CE[j]] = h ** 3
        dS[self.S_Cv] = h ** 4
        self.tS = np.diag(dS)
        dW = np.ones(self.nW)
        for j in range(ne):
            dW[self.W_edge[j]] = h
        dW[self.W_vert] = h ** 2
        self.tW = np.diag(dW)

        # ---- potential-based norm on the gradient-side space
        VN = self.PVT.T @ self.PVT
        for j in range(ne):
            VN += h * self.PVE_loc[j].T @ self.PVE_loc[j]
        self.Vnorm = VN

        # High-degree rule for non-polynomial data.
        self.rule_hi = element_rule(element, mesh, hi_degree(k))
        self.P_hi = basis.eval_scalar(self.rule_hi.points)   # (nfr, nq_hi)

    # -- data-dependent local vectors ----------------------------------------

    def load_vector(self, f):
        """Local load: moments of the vector potential against f."""
        fv = np.asarray(f(self.rule_hi.points), dtype=float)
        g = np.concatenate([
            (self.P_hi[:self.nPk] * self.rule_hi.weights[None, :]) @ fv[:, 0],
            (self.P_hi[:self.nPk] * self.rule_hi.weights[None, :]) @ fv[:, 1],
        ])
        return self.PST.T @ g

    def interp_V_element(self, q):
        qv = np.asarray(q(self.rule_hi.points), dtype=float)
        return (self.P_hi[:self.nVq] * self.rule_hi.weights[None, :]) @ qv

    def interp_W_element(self, r):
        rv = np.asarray(r(self.rule_hi.points), dtype=float)
        return (self.P_hi[:self.nPk] * self.rule_hi.weights[None, :]) @ rv

    def interp_Sigma_element(self, v):
        vv = np.asarray(v(self.rule_hi.points), dtype=float)   # (nq, 2)
        wts = self.rule_hi.weights
        vR = np.einsum("icm,mq,qc,q->i", self.RolyO,
                       self.P_hi, vv, wts, optimize=True)
        vc = np.einsum("icm,mq,qc,q->i", self.cRkO,
                       self.P_hi, vv, wts, optimize=True)
        return vR, vc


class ComplexOps:
    """Per-mesh cache of local operators and global sparse assembly.

    Global matrices are built on the unconstrained layouts; boundary
    conditions are imposed by row/column restriction (see `restrict`).
    """

    def __init__(self, mesh, k, threads=None):
        self.mesh = mesh
        self.k = k
        self.threads = threads
        self.edge_ops = thread_map(
            lambda E: build_edge_ops(mesh, E, k), mesh.edges, threads)
        self.elem_ops = thread_map(
            lambda T: ElementOps(mesh, T, k, self.edge_ops),
            mesh.elements, threads)
        self._layouts = {}
        self._cache = {}

    def layout(self, space, bc="none"):
        key = (space, bc)
        if key not in self._layouts:
            self._layouts[key] = space_layout(self.mesh, self.k, space,
                                              "full", bc)
        return self._layouts[key]

    def _sigma_l2g(self, ops):
        return self.layout("Sigma").element_l2g(ops.T)

    def _assemble_elementwise(self, attr, space):
        lay = self.layout(space)
        rows, cols, vals = [], [], []
        for ops in self.elem_ops:
            loc = getattr(ops, attr)
            idx = lay.element_l2g(ops.T)
            rr, cc = np.meshgrid(idx, idx, indexing="ij")
            rows.append(rr.ravel())
            cols.append(cc.ravel())
            vals.append(loc.ravel())
        return coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(lay.dim, lay.dim)).tocsr()

    def _get(self, name, builder):
        if name not in self._cache:
            self._cache[name] = builder()
        return self._cache[name]

    @property
    def grad(self):
        """Global discrete gradient: V -> Sigma."""
        def build():
            k = self.k
            V = self.layout("V")
            S = self.layout("Sigma")
            rows, cols, vals = [], [], []

            def add(r_idx, c_idx, block):
                rr, cc = np.meshgrid(r_idx, c_idx, indexing="ij")
                rows.append(rr.ravel())
                cols.append(cc.ravel())
                vals.append(np.asarray(block).ravel())

            nPk = dim_P(k)
            for ops in self.elem_ops:
                idxV = V.element_l2g(ops.T)
                proj = np.concatenate([
                    np.concatenate([ops.RolyO[:, 0, :nPk], ops.RolyO[:, 1, :nPk]],
                                   axis=1),
                    np.concatenate([ops.cRkO[:, 0, :nPk], ops.cRkO[:, 1, :nPk]],
                                   axis=1)]) if ops.nR + ops.nC else np.zeros((0, 2 * nPk))
                if proj.shape[0]:
                    add(np.arange(S.elem_offsets[ops.T.id],
                                  S.elem_offsets[ops.T.id + 1]),
                        idxV, proj @ ops.GT)
            for eo in self.edge_ops:
                E = eo.edge
                r_idx = S.edge_offsets[E.id] + np.arange(k + 1)
                c_idx = np.concatenate([
                    np.arange(V.edge_offsets[E.id], V.edge_offsets[E.id] + k),
                    [V.vertex_offsets[E.v0], V.vertex_offsets[E.v1]]])
                add(r_idx, c_idx, eo.grad)
            return coo_matrix(
                (np.concatenate(vals),
                 (np.concatenate(rows), np.concatenate(cols))),
                shape=(S.dim, V.dim)).tocsr()
        return self._get("grad", build)

    @property
    def rot(self):
        """Global discrete rotor: Sigma -> W."""
        def build():
            k = self.k
            S = self.layout("Sigma")
            W = self.layout("W")
            rows, cols, vals = [], [], []
            for ops in self.elem_ops:
                idxS = S.element_l2g(ops.T)
                r0 = W.elem_offsets[ops.T.id]
                rr, cc = np.meshgrid(np.arange(r0, r0 + ops.nPk), idxS,
                                     indexing="ij")
                rows.append(rr.ravel())
                cols.append(cc.ravel())
                vals.append(ops.RT.ravel())
            for E in self.mesh.edges:
                r_idx = W.edge_offsets[E.id] + np.arange(k)
                c_idx = S.edge_offsets[E.id] + k + 1 + np.arange(k)
                rows.append(r_idx)
                cols.append(c_idx)
                vals.append(np.ones(k))
            for v in range(len(self.mesh.vertices)):
                rows.append([W.vertex_offsets[v]])
                cols.append([S.vertex_offsets[v]])
                vals.append([1.0])
            return coo_matrix(
                (np.concatenate(vals),
                 (np.concatenate([np.asarray(r) for r in rows]),
                  np.concatenate([np.asarray(c) for c in cols]))),
                shape=(W.dim, S.dim)).tocsr()
        return self._get("rot", build)

    @property
    def inner_sigma(self):
        return self._get("inner_sigma",
                         lambda: self._assemble_elementwise("MS", "Sigma"))

    @property
    def rotrot(self):
        return self._get("rotrot",
                         lambda: self._assemble_elementwise("aT", "Sigma"))

    @property
    def comp_sigma(self):
        return self._get("comp_sigma",
                         lambda: self._assemble_elementwise("tS", "Sigma"))

    @property
    def comp_V(self):
        return self._get("comp_V",
                         lambda: self._assemble_elementwise("tV", "V"))

    @property
    def comp_W(self):
        return self._get("comp_W",
                         lambda: self._assemble_elementwise("tW", "W"))

    @property
    def pressure_norm(self):
        return self._get("pressure_norm",
                         lambda: self._assemble_elementwise("Vnorm", "V"))

    def restrict(self, M, row_space=None, col_space=None):
        """Drop boundary rows/columns (homogeneous essential conditions)."""
        out = M.tocsr()
        if row_space is not None:
            out = out[self.layout(row_space, "homogeneous").full_keep, :]
        if col_space is not None:
            out = out[:, self.layout(col_space, "homogeneous").full_keep]
        return out

    def load_vector(self, f):
        """Global load vector on the unconstrained middle-space layout."""
        S = self.layout("Sigma")
        out = np.zeros(S.dim)
        locs = thread_map(lambda ops: ops.load_vector(f), self.elem_ops,
                          self.threads)
        for ops, loc in zip(self.elem_ops, locs):
            np.add.at(out, S.element_l2g(ops.T), loc)
        return out

    def norm(self, gram, x, y=None):
        y = x if y is None else y
        return float(np.sqrt(abs(x @ (gram @ y))))


def _restrict_interpolant(vec, layout_full, layout_bc, what):
    dropped = np.delete(vec, layout_bc.full_keep)
    if dropped.size and np.max(np.abs(dropped)) > INTERP_DROP_TOL:
        warnings.warn(
            f"{what} interpolation drops boundary trace values up to "
            f"{np.max(np.abs(dropped)):.3e}; the field does not satisfy the "
            f"homogeneous boundary conditions", stacklevel=3)
    return vec[layout_bc.full_keep]


def interpolate_V(cops, q, bc="none"):
    """DOFs of the gradient-side interpolant of a scalar field q(points)->(n,)."""
    mesh, k = cops.mesh, cops.k
    lay = cops.layout("V")
    out = np.zeros(lay.dim)
    for ops in cops.elem_ops:
        sl = lay.elem_slice(ops.T.id)
        out[sl] = ops.interp_V_element(q)
    for eo in cops.edge_ops:
        if k > 0:
            qv = np.asarray(q(eo.points_hi), dtype=float)
            out[lay.edge_slice(eo.edge.id)] = (eo.vals_hi[:k] * eo.w_hi[None, :]) @ qv
    for v in mesh.vertices:
        out[lay.vertex_offsets[v.id]] = float(np.asarray(q(v.x[None, :]))[0])
    if bc == "homogeneous":
        return _restrict_interpolant(out, lay, cops.layout("V", bc), "V")
    return out


def interpolate_Sigma(cops, v, rot_v, bc="none"):
    """DOFs of the middle-space interpolant of a vector field.

    v(points)->(n, 2) and rot_v(points)->(n,) must both be supplied; the rotor
    trace components are read off rot_v.
    """
    mesh, k = cops.mesh, cops.k
    lay = cops.layout("Sigma")
    out = np.zeros(lay.dim)
    for ops in cops.elem_ops:
        vR, vc = ops.interp_Sigma_element(v)
        o = lay.elem_offsets[ops.T.id]
        out[o:o + ops.nR] = vR
        out[o + ops.nR:o + ops.nR + ops.nC] = vc
    for eo in cops.edge_ops:
        vv = np.asarray(v(eo.points_hi), dtype=float)
        vt = vv @ eo.edge.t
        o = lay.edge_offsets[eo.edge.id]
        out[o:o + k + 1] = (eo.vals_hi[: k + 1] * eo.w_hi[None, :]) @ vt
        if k > 0:
            rv = np.asarray(rot_v(eo.points_hi), dtype=float)
            out[o + k + 1:o + 2 * k + 1] = (eo.vals_hi[:k] * eo.w_hi[None, :]) @ rv
    for vx in mesh.vertices:
        out[lay.vertex_offsets[vx.id]] = float(np.asarray(rot_v(vx.x[None, :]))[0])
    if bc == "homogeneous":
        return _restrict_interpolant(out, lay, cops.layout("Sigma", bc), "Sigma")
    return out


def interpolate_W(cops, r, bc="none"):
    """DOFs of the tail-space interpolant of a scalar field r(points)->(n,)."""
    mesh, k = cops.mesh, cops.k
    lay = cops.layout("W")
    out = np.zeros(lay.dim)
    for ops in cops.elem_ops:
        sl = lay.elem_slice(ops.T.id)
        out[sl] = ops.interp_W_element(r)
    for eo in cops.edge_ops:
        if k > 0:
            rv = np.asarray(r(eo.points_hi), dtype=float)
            out[lay.edge_slice(eo.edge.id)] = (eo.vals_hi[:k] * eo.w_hi[None, :]) @ rv
    for v in mesh.vertices:
        out[lay.vertex_offsets[v.id]] = float(np.asarray(r(v.x[None, :]))[0])
    if bc == "homogeneous":
        return _restrict_interpolant(out, lay, cops.layout("W", bc), "W")
    return out
