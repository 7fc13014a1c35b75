"""Jet algebra against finite differences, and the two evaluation paths
against each other."""

import numpy as np
import pytest

from mnm import fd
from mnm.jets import eval_jet, eval_scalar_grid
from mnm.model import builtin, domain_margin, eval_jet2, parse_model
from mnm.rng import Xoshiro256StarStar

from helpers import tame_points

CATALOG_SCALAR = [
    "quad",
    "ex_two_minima",
    "ex_three_minima",
    "ex_four_minima",
    "rational_cycle",
    "cubic_cycle",
]


@pytest.mark.parametrize("name", CATALOG_SCALAR)
def test_jet_matches_finite_differences_on_catalog(name):
    from mnm.model import CATALOG

    model = builtin(name)
    center, half = CATALOG[name].sample_box
    for z in tame_points(model, center, half, 25, seed=11):
        for j in range(model.m):
            jet = eval_jet2(model, j, z)
            g_fd = fd.fd_residual_grad(model, j, z)
            h_fd = fd.fd_residual_hess(model, j, z)
            assert np.max(np.abs(jet.grad - g_fd)) < 1e-6
            assert np.max(np.abs(jet.hess - h_fd)) < 1e-6


def test_jet_matches_fd_multivariate():
    model = parse_model("n=3; g1 = z1*z2^2 - exp(z3/(z1+2)) + log(z2 + 3) / z3;")
    rng = Xoshiro256StarStar(3)
    done = 0
    while done < 20:
        z = np.array([rng.complex_box(0.7, 1.0 + 0.2j) for _ in range(3)])
        if domain_margin(model, z) < 0.3:
            continue
        jet = eval_jet2(model, 0, z)
        assert np.max(np.abs(jet.grad - fd.fd_residual_grad(model, 0, z))) < 1e-6
        assert np.max(np.abs(jet.hess - fd.fd_residual_hess(model, 0, z))) < 1e-6
        done += 1


def test_hessian_bitwise_symmetric_everywhere():
    model = parse_model("n=2; g1 = exp(z1*z2) - z1^3/(z2+5) + log(z1+3);")
    rng = Xoshiro256StarStar(9)
    for _ in range(50):
        z = np.array([rng.complex_box(1.0), rng.complex_box(1.0)])
        jet = eval_jet2(model, 0, z)
        assert np.array_equal(jet.hess, jet.hess.T)


@pytest.mark.parametrize("name", CATALOG_SCALAR)
def test_grid_path_matches_jet_path(name):
    model = builtin(name)
    rng = Xoshiro256StarStar(17)
    zs = np.array([rng.complex_box(2.0) for _ in range(64)])
    for j in range(model.m):
        v, d1, d2 = eval_scalar_grid(model.residuals[j], zs, order=2)
        ok = np.isfinite(v) & np.isfinite(d1) & np.isfinite(d2)
        assert np.count_nonzero(ok) > 50
        for i in np.flatnonzero(ok)[:20]:
            jet = eval_jet(model.residuals[j], zs[i : i + 1])
            assert abs(v[i] - jet.value) <= 1e-12 * (1 + abs(jet.value))
            assert abs(d1[i] - jet.grad[0]) <= 1e-12 * (1 + abs(jet.grad[0]))
            assert abs(d2[i] - jet.hess[0, 0]) <= 1e-12 * (1 + abs(jet.hess[0, 0]))


def test_grid_path_masks_poles_as_nonfinite():
    model = parse_model("n=1; g1 = 1/z1;")
    v, d1 = eval_scalar_grid(model.residuals[0], np.array([0j, 1 + 0j]), order=1)
    assert not np.isfinite(v[0])
    assert v[1] == 1.0 and d1[1] == -1.0


def test_power_chain_rules():
    model = parse_model("n=1; g1 = (z1^2 + 1)^3;")
    z = 0.7 - 0.3j
    jet = eval_jet2(model, 0, [z])
    u = z * z + 1
    assert jet.value == pytest.approx(u**3, rel=1e-14)
    assert jet.grad[0] == pytest.approx(3 * u**2 * 2 * z, rel=1e-13)
    assert jet.hess[0, 0] == pytest.approx(6 * u * (2 * z) ** 2 + 3 * u**2 * 2, rel=1e-13)


def test_negative_power():
    model = parse_model("n=1; g1 = z1^-2;")
    z = 1.5 + 0.5j
    jet = eval_jet2(model, 0, [z])
    assert jet.value == pytest.approx(z**-2, rel=1e-14)
    assert jet.grad[0] == pytest.approx(-2 * z**-3, rel=1e-13)
    assert jet.hess[0, 0] == pytest.approx(6 * z**-4, rel=1e-13)
