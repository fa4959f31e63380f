"""Shared fixtures: small meshes and cached operator bundles."""

from __future__ import annotations

import functools

import pytest

from ddr2d import ComplexOps, build_structured_mesh


@functools.lru_cache(maxsize=None)
def cached_mesh(family, n):
    return build_structured_mesh(family, n)


@functools.lru_cache(maxsize=None)
def cached_ops(family, n, k):
    return ComplexOps(cached_mesh(family, n), k)


@pytest.fixture
def mesh_factory():
    return cached_mesh


@pytest.fixture
def ops_factory():
    return cached_ops
