"""Polynomial frames: dimensions, orthonormality, complements, projections."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddr2d.quadrature import element_rule
from ddr2d.polybasis import (complement_basis, complement_dims, dim_P,
                             dim_P1d, l2_project, mono_diff_matrix,
                             mono_vander, monomial_exponents, scalar_basis)


@settings(max_examples=20, deadline=None)
@given(m=st.integers(0, 10))
def test_dimension_formulas(m):
    assert dim_P(m) == (m + 1) * (m + 2) // 2
    assert dim_P1d(m) == m + 1
    assert len(monomial_exponents(m)) == dim_P(m)
    assert dim_P(-1) == 0


def test_monomial_exponents_graded():
    exps = monomial_exponents(4)
    degs = [a + b for a, b in exps]
    assert degs == sorted(degs)
    # graded: the first dim_P(j) members span exactly total degree <= j
    for j in range(1, 5):
        assert max(degs[: dim_P(j)]) == j


def _l2_gram(mesh, T, basis):
    rule = element_rule(T, mesh, 2 * basis.frame_degree)
    V = basis.eval(rule.points)
    return np.einsum("icq,jcq,q->ij", V, V, rule.weights)


@pytest.mark.parametrize("family", ["cartesian", "hexagonal"])
@pytest.mark.parametrize("m", [1, 3])
def test_scalar_basis_orthonormal(family, m, mesh_factory):
    mesh = mesh_factory(family, 2)
    for T in mesh.elements[:3]:
        b = scalar_basis(mesh, T, m)
        assert _l2_gram(mesh, T, b) == pytest.approx(np.eye(b.dim), abs=1e-11)
        # first member is constant, the rest have zero mean
        rule = element_rule(T, mesh, m)
        means = b.eval_scalar(rule.points) @ rule.weights
        assert abs(abs(means[0]) - np.sqrt(T.area)) < 1e-12
        if b.dim > 1:
            assert np.max(np.abs(means[1:])) < 1e-12


@pytest.mark.parametrize("kind,m", [("Roly", 1), ("cRoly", 2),
                                    ("Goly", 1), ("cGoly", 2)])
def test_complement_bases(kind, m, mesh_factory):
    mesh = mesh_factory("triangular", 1)
    T = mesh.elements[0]
    b = complement_basis(mesh, T, kind, m)
    assert b.dim == complement_dims(kind, m)
    if kind in ("Roly", "Goly"):
        assert b.dim == dim_P(m + 1) - 1
    else:
        assert b.dim == dim_P(m - 1)
    assert _l2_gram(mesh, T, b) == pytest.approx(np.eye(b.dim), abs=1e-11)


def test_roly_croly_decompose_vector_polys(mesh_factory):
    """Roly^m plus cRoly^m spans the full vector space vP^m."""
    mesh = mesh_factory("hexagonal", 1)
    T = mesh.elements[0]
    m = 2
    r = complement_basis(mesh, T, "Roly", m)
    c = complement_basis(mesh, T, "cRoly", m)
    assert r.dim + c.dim == 2 * dim_P(m)
    rule = element_rule(T, mesh, 2 * (m + 1))
    vals = np.concatenate([r.eval(rule.points), c.eval(rule.points)])
    G = np.einsum("icq,jcq,q->ij", vals, vals, rule.weights)
    assert np.linalg.matrix_rank(G, tol=1e-10) == 2 * dim_P(m)


def test_mono_diff_matrix_is_derivative():
    m, h = 3, 0.5
    center = np.array([0.3, 0.4])
    D = mono_diff_matrix(m, 0, h)
    rng = np.random.default_rng(3)
    coef = rng.uniform(-1, 1, dim_P(m))
    pts = rng.uniform(0, 1, size=(7, 2))
    eps = 1e-5
    up, dn = pts.copy(), pts.copy()
    up[:, 0] += eps
    dn[:, 0] -= eps
    fd = (mono_vander(up, m, center, h) @ coef
          - mono_vander(dn, m, center, h) @ coef) / (2 * eps)
    exact = mono_vander(pts, m, center, h) @ (D.T @ coef)
    assert exact == pytest.approx(fd, rel=1e-8, abs=1e-8)


def test_l2_project_reproduces_members(mesh_factory):
    mesh = mesh_factory("cartesian", 1)
    T = mesh.elements[0]
    b = scalar_basis(mesh, T, 2)
    rng = np.random.default_rng(5)
    coef = rng.uniform(-1, 1, b.dim)
    rule = element_rule(T, mesh, 4)

    def f(pts):
        return coef @ b.eval_scalar(pts)

    assert l2_project(f, b, rule) == pytest.approx(coef, abs=1e-12)
