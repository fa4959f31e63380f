"""DOF layouts: local counts, global offsets, boundary restriction."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddr2d.polybasis import dim_P
from ddr2d.spaces import (local_dof_count, serendipity_degree, space_layout)


@settings(max_examples=20, deadline=None)
@given(ne=st.integers(3, 8), k=st.integers(0, 4))
def test_full_local_counts_match_formulas(ne, k):
    # head: element P^{k-1}, edge P^{k-1}, vertex values
    assert local_dof_count(ne, k, "V") == dim_P(k - 1) + ne * k + ne
    # middle: Roly^{k-1} + cRoly^k + edge (P^k, P^{k-1}) + vertex rotor values
    assert local_dof_count(ne, k, "Sigma") == (
        max(dim_P(k) - 1, 0) + dim_P(k - 1) + ne * (2 * k + 1) + ne)
    # tail: element P^k, edge P^{k-1}, vertex values
    assert local_dof_count(ne, k, "W") == dim_P(k) + ne * k + ne


@settings(max_examples=20, deadline=None)
@given(ne=st.integers(3, 8), k=st.integers(0, 4))
def test_serendipity_never_exceeds_full(ne, k):
    for space in ("V", "Sigma", "W"):
        ser = local_dof_count(ne, k, space, "serendipity")
        assert ser <= local_dof_count(ne, k, space, "full")
    assert local_dof_count(ne, k, "W", "serendipity") == \
        local_dof_count(ne, k, "W", "full")


def test_serendipity_degree_decreases_with_eta():
    for k in range(4):
        degs = [serendipity_degree(k, eta) for eta in range(2, 7)]
        assert degs == sorted(degs, reverse=True)
        assert all(d >= -1 for d in degs)


@pytest.mark.parametrize("space", ["V", "Sigma", "W"])
@pytest.mark.parametrize("k", [0, 2])
def test_layout_dims_and_l2g(space, k, mesh_factory):
    mesh = mesh_factory("hexagonal", 2)
    lay = space_layout(mesh, k, space)
    # every global index appears; shared interface indices appear twice
    counts = np.zeros(lay.dim, dtype=int)
    for T in mesh.elements:
        idx = lay.element_l2g(T)
        assert len(idx) == local_dof_count(len(T.edges), k, space)
        counts[idx] += 1
    assert counts.min() >= 1
    for T in mesh.elements:
        assert np.all(counts[lay.elem_slice(T.id)] == 1)
    for e in range(len(mesh.edges)):
        expected = 1 if mesh.edges[e].boundary else 2
        assert np.all(counts[lay.edge_slice(e)] == expected)


@pytest.mark.parametrize("space", ["V", "Sigma", "W"])
def test_homogeneous_restriction(space, mesh_factory):
    mesh = mesh_factory("cartesian", 2)
    k = 1
    full = space_layout(mesh, k, space)
    bc = space_layout(mesh, k, space, bc="homogeneous")
    assert bc.dim == len(bc.full_keep) < full.dim
    esz = sum(full.edge_subdims)
    dropped = (full.dim - bc.dim)
    assert dropped == len(mesh.boundary_edges()) * esz \
        + len(mesh.boundary_vertices())


def test_known_global_dims(mesh_factory):
    mesh = mesh_factory("cartesian", 2)
    dims = tuple(space_layout(mesh, 0, s).dim for s in ("V", "Sigma", "W"))
    assert dims == (9, 21, 13)
    dims0 = tuple(space_layout(mesh, 0, s, bc="homogeneous").dim
                  for s in ("V", "Sigma", "W"))
    assert dims0 == (1, 5, 5)
