"""Verification reports: numerical rank, exactness, commutation, stability."""

from __future__ import annotations

import numpy as np
import pytest

from ddr2d.verify import (check_commutation, check_exactness,
                          estimate_poincare, numerical_rank)


def test_numerical_rank_clean_gap():
    rng = np.random.default_rng(0)
    U, _ = np.linalg.qr(rng.normal(size=(20, 20)))
    V, _ = np.linalg.qr(rng.normal(size=(15, 15)))
    s = np.concatenate([np.linspace(1.0, 2.0, 10), np.full(5, 1e-14)])
    M = U[:, :15] @ np.diag(s) @ V.T
    rank, conclusive, _ = numerical_rank(M)
    assert rank == 10 and conclusive


def test_numerical_rank_ambiguous_spectrum():
    rng = np.random.default_rng(1)
    U, _ = np.linalg.qr(rng.normal(size=(23, 23)))
    s = np.logspace(0, -11, 23)    # no 10x gap anywhere near threshold
    M = U @ np.diag(s) @ U.T
    _, conclusive, _ = numerical_rank(M)
    assert not conclusive


@pytest.mark.parametrize("bc", ["none", "homogeneous"])
@pytest.mark.parametrize("k", [0, 1])
def test_exactness_small_meshes(bc, k, mesh_factory):
    mesh = mesh_factory("cartesian", 2)
    rep = check_exactness(mesh, k, bc)
    assert rep.passed, format(rep.kv())
    if bc == "none":
        assert rep.nullity_G == 1
        assert rep.rank_R == rep.dim_W
    else:
        assert rep.nullity_G == 0
        # with boundary conditions the rotor image is the mean-zero subspace
        assert rep.rank_R == rep.dim_W - 1
        assert rep.cokernel_is_mean


def test_commutation_machine_precision_for_polynomials(mesh_factory):
    rep = check_commutation(mesh_factory("hexagonal", 2), 1)
    for name, g, r in rep.entries:
        if "poly" in name:
            assert (g is None or g < 1e-11) and (r is None or r < 1e-11)


def test_stability_oracle_values(mesh_factory):
    """Frozen reference values computed with dense eigensolvers."""
    rep = estimate_poincare(mesh_factory("cartesian", 2), 0)
    assert rep.lambda_P == pytest.approx(3.828427, rel=1e-4)
    assert rep.gamma_h == pytest.approx(0.6238761, rel=1e-4)
    assert 0 < rep.equiv_lo <= rep.equiv_hi


def test_stability_does_not_collapse(mesh_factory):
    vals = [estimate_poincare(mesh_factory("cartesian", n), 0)
            for n in (2, 4)]
    assert vals[1].lambda_P > 0.25 * vals[0].lambda_P
    assert vals[1].gamma_h > 0.25 * vals[0].gamma_h
