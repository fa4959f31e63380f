"""Shared numerical checks: polynomial reproduction of every local
reconstruction, driven through the global interpolators."""

from __future__ import annotations

import numpy as np

from ddr2d.operators import interpolate_Sigma, interpolate_V, interpolate_W
from ddr2d.polybasis import dim_P, monomial_exponents


def random_poly(degree, ncomp, seed):
    """A vector of `ncomp` polynomials of total degree <= degree on the unit
    square, returned as (eval, grad_eval, rot_eval) callables."""
    exps = monomial_exponents(degree)
    rng = np.random.default_rng(seed)
    coef = rng.uniform(-1.0, 1.0, size=(ncomp, len(exps)))

    def ev(pts):
        pts = np.atleast_2d(pts)
        mono = np.stack([pts[:, 0] ** a * pts[:, 1] ** b for a, b in exps])
        out = coef @ mono
        return out[0] if ncomp == 1 else out.T

    def dev(pts, axis):
        pts = np.atleast_2d(pts)
        cols = []
        for a, b in exps:
            if axis == 0:
                cols.append(a * pts[:, 0] ** max(a - 1, 0) * pts[:, 1] ** b)
            else:
                cols.append(b * pts[:, 0] ** a * pts[:, 1] ** max(b - 1, 0))
        return coef @ np.stack(cols)

    def grad(pts):
        return np.stack([dev(pts, 0)[0], dev(pts, 1)[0]], axis=1)

    def rot(pts):
        return dev(pts, 0)[1] - dev(pts, 1)[0]

    return ev, grad, rot


def _proj(ops, fvals, m):
    """Coefficients of the L2 projection onto the first m ortho frame members."""
    return (ops.P_hi[:m] * ops.rule_hi.weights[None, :]) @ fvals


def _rel(err, scale):
    return err / max(scale, 1e-14)


def consistency_residuals(cops):
    """Worst relative polynomial-reproduction residual of each reconstruction.

    Returns a dict name -> residual, exercising degree-(k+1) scalar data on
    the gradient and tail sides and degree-k / degree-(k+1) vector data on the
    middle space.
    """
    mesh, k = cops.mesh, cops.k
    nPk, nPk1 = dim_P(k), dim_P(k + 1)
    q, grad_q, _ = random_poly(k + 1, 1, seed=11)
    v1, _, rot_v1 = random_poly(k + 1, 2, seed=12)
    v0, _, rot_v0 = random_poly(k, 2, seed=13)
    r = q

    xV = interpolate_V(cops, q)
    xS1 = interpolate_Sigma(cops, v1, rot_v1)
    xS0 = interpolate_Sigma(cops, v0, rot_v0)
    xW = interpolate_W(cops, r)

    layV = cops.layout("V")
    layS = cops.layout("Sigma")
    layW = cops.layout("W")

    res = {name: 0.0 for name in
           ("edge_potential", "edge_gradient", "element_gradient",
            "gradient_potential", "rotor", "vector_potential",
            "tail_rotor", "tail_potential")}

    for eo in cops.edge_ops:
        E = eo.edge
        loc = np.concatenate([
            xV[layV.edge_slice(E.id)],
            [xV[layV.vertex_index(E.v0)], xV[layV.vertex_index(E.v1)]]])
        qv = q(eo.points_hi)
        pot = loc @ eo.pot.T @ eo.vals_hi
        res["edge_potential"] = max(res["edge_potential"], _rel(
            np.max(np.abs(pot - qv)), np.max(np.abs(qv))))
        gq = grad_q(eo.points_hi) @ E.t
        ge = loc @ eo.grad.T @ eo.vals_hi[: k + 1]
        res["edge_gradient"] = max(res["edge_gradient"], _rel(
            np.max(np.abs(ge - gq)), np.max(np.abs(gq)) + 1.0))

    for ops in cops.elem_ops:
        T = ops.T
        lV = xV[layV.element_l2g(T)]
        lS1 = xS1[layS.element_l2g(T)]
        lS0 = xS0[layS.element_l2g(T)]
        lW = xW[layW.element_l2g(T)]
        pts = ops.rule_hi.points

        gq = grad_q(pts)
        tgt = np.concatenate([_proj(ops, gq[:, 0], nPk),
                              _proj(ops, gq[:, 1], nPk)])
        res["element_gradient"] = max(res["element_gradient"], _rel(
            np.max(np.abs(ops.GT @ lV - tgt)), np.max(np.abs(tgt)) + 1.0))

        tgt = _proj(ops, q(pts), nPk1)
        res["gradient_potential"] = max(res["gradient_potential"], _rel(
            np.max(np.abs(ops.PVT @ lV - tgt)), np.max(np.abs(tgt))))

        tgt = _proj(ops, rot_v1(pts), nPk)
        res["rotor"] = max(res["rotor"], _rel(
            np.max(np.abs(ops.RT @ lS1 - tgt)), np.max(np.abs(tgt)) + 1.0))

        vv = v0(pts)
        tgt = np.concatenate([_proj(ops, vv[:, 0], nPk),
                              _proj(ops, vv[:, 1], nPk)])
        res["vector_potential"] = max(res["vector_potential"], _rel(
            np.max(np.abs(ops.PST @ lS0 - tgt)), np.max(np.abs(tgt))))

        gq = grad_q(pts)   # vrot r = (d2 r, -d1 r) with r = q
        tgt = np.concatenate([_proj(ops, gq[:, 1], nPk),
                              _proj(ops, -gq[:, 0], nPk)])
        res["tail_rotor"] = max(res["tail_rotor"], _rel(
            np.max(np.abs(ops.RWT @ lW - tgt)), np.max(np.abs(tgt)) + 1.0))

        tgt = _proj(ops, r(pts), nPk1)
        res["tail_potential"] = max(res["tail_potential"], _rel(
            np.max(np.abs(ops.PWT @ lW - tgt)), np.max(np.abs(tgt))))
    return res
