"""Quadrature rules: exactness on monomials, positivity, declared degree."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddr2d.mesh import build_structured_mesh
from ddr2d.quadrature import edge_rule, edge_rule_params, element_rule


@settings(max_examples=30, deadline=None)
@given(a=st.integers(0, 6), b=st.integers(0, 6))
def test_element_rule_exact_on_unit_square(a, b):
    mesh = build_structured_mesh("cartesian", 1)
    rule = element_rule(mesh.elements[0], mesh, a + b)
    val = rule.weights @ (rule.points[:, 0] ** a * rule.points[:, 1] ** b)
    assert val == pytest.approx(1.0 / ((a + 1) * (b + 1)), rel=1e-13)


@pytest.mark.parametrize("family", ["triangular", "hexagonal"])
@settings(max_examples=20, deadline=None)
@given(a=st.integers(0, 4), b=st.integers(0, 4))
def test_element_rules_partition_monomial_integrals(family, a, b):
    """Summing an exact-degree rule over all elements integrates over the
    whole unit square regardless of element shape."""
    mesh = build_structured_mesh(family, 2)
    total = 0.0
    for T in mesh.elements:
        rule = element_rule(T, mesh, a + b)
        total += rule.weights @ (rule.points[:, 0] ** a * rule.points[:, 1] ** b)
    assert total == pytest.approx(1.0 / ((a + 1) * (b + 1)), rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(d=st.integers(0, 9))
def test_edge_rule_exact_in_arclength(d):
    mesh = build_structured_mesh("triangular", 2)
    E = mesh.edges[len(mesh.edges) // 2]
    s, w = edge_rule_params(E, d)
    L = E.length
    # integral of s^d over [-L/2, L/2]
    exact = 0.0 if d % 2 else 2 * (L / 2) ** (d + 1) / (d + 1)
    assert w @ s ** d == pytest.approx(exact, abs=1e-15, rel=1e-13)


@pytest.mark.parametrize("family", ["cartesian", "hexagonal"])
def test_weights_positive_and_sum(family):
    mesh = build_structured_mesh(family, 2)
    for T in mesh.elements:
        rule = element_rule(T, mesh, 8)
        assert np.all(rule.weights > 0)
        assert rule.weights.sum() == pytest.approx(T.area, rel=1e-12)
    for E in mesh.edges:
        rule = edge_rule(E, mesh, 8)
        assert np.all(rule.weights > 0)
        assert rule.weights.sum() == pytest.approx(E.length, rel=1e-12)
