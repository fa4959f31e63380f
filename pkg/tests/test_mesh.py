"""Structured mesh families: topology, orientation, and serialization."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddr2d import (build_structured_mesh, load_mesh, mesh_diagnostics,
                   save_mesh, validate_mesh)

FAMILIES = ("cartesian", "triangular", "hexagonal")


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_structured_families_are_valid(family, n, mesh_factory):
    mesh = mesh_factory(family, n)
    validate_mesh(mesh)
    diag = mesh_diagnostics(mesh)
    assert diag["orientation_ok"]
    assert diag["total_area"] == pytest.approx(1.0, rel=1e-12)


def test_known_entity_counts(mesh_factory):
    m = mesh_factory("cartesian", 2)
    assert (len(m.elements), len(m.edges), len(m.vertices)) == (4, 12, 9)
    m = mesh_factory("hexagonal", 4)
    assert (len(m.elements), len(m.edges), len(m.vertices)) == (33, 100, 68)


@settings(max_examples=12, deadline=None)
@given(family=st.sampled_from(FAMILIES), n=st.integers(1, 4))
def test_euler_formula(family, n):
    mesh = build_structured_mesh(family, n)
    # planar mesh of a simply connected domain: F - E + V = 1
    assert len(mesh.elements) - len(mesh.edges) + len(mesh.vertices) == 1


@pytest.mark.parametrize("family", FAMILIES)
def test_boundary_sets_are_consistent(family, mesh_factory):
    mesh = mesh_factory(family, 2)
    b_edges = mesh.boundary_edges()
    b_verts = set(mesh.boundary_vertices())
    for e in b_edges:
        E = mesh.edges[e]
        assert E.boundary
        assert {E.v0, E.v1} <= b_verts
    for e in b_edges:
        # boundary points sit on the unit-square frame
        for v in (mesh.edges[e].v0, mesh.edges[e].v1):
            x = mesh.vertices[v].x
            assert min(abs(x[0]), abs(x[0] - 1), abs(x[1]), abs(x[1] - 1)) < 1e-12


@pytest.mark.parametrize("family", FAMILIES)
def test_save_load_roundtrip(family, tmp_path, mesh_factory):
    mesh = mesh_factory(family, 2)
    path = tmp_path / "mesh.json"
    save_mesh(mesh, path)
    back = load_mesh(path)
    assert len(back.elements) == len(mesh.elements)
    assert back.h == mesh.h
    for a, b in zip(mesh.vertices, back.vertices):
        assert np.array_equal(a.x, b.x)
    for a, b in zip(mesh.elements, back.elements):
        assert a.edges == b.edges and a.signs == b.signs
        assert a.vertices == b.vertices


def test_edge_geometry(mesh_factory):
    mesh = mesh_factory("triangular", 2)
    for E in mesh.edges:
        d = mesh.vertices[E.v1].x - mesh.vertices[E.v0].x
        assert np.linalg.norm(d) == pytest.approx(E.length, rel=1e-12)
        assert E.t @ E.n == pytest.approx(0.0, abs=1e-14)
        assert abs(E.t[0] * E.n[1] - E.t[1] * E.n[0]) == pytest.approx(1.0, rel=1e-12)
