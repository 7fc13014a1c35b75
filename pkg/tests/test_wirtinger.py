import numpy as np
import pytest

from mnm import fd
from mnm.linalg import hermitian_eigenvalues, signature_real_symmetric
from mnm.model import CATALOG, builtin, eval_jet2, parse_model
from mnm.wirtinger import (
    bundle,
    complex_hessian,
    mixed_hessian_rank,
    real_gradient,
    real_hessian,
)

from helpers import tame_points

ALL_SCALAR = ["quad", "ex_two_minima", "ex_three_minima", "ex_four_minima",
              "rational_cycle", "cubic_cycle"]


class TestBundle:
    def test_quad_arithmetic(self):
        m = builtin("quad", a=1)
        b = bundle(m, [2 + 0j])
        assert b.f == pytest.approx(9.0)
        assert b.grad_conj[0] == pytest.approx(12.0)  # g * conj(g') = 3 * 4
        assert b.mixed_hess[0, 0] == pytest.approx(16.0)  # |g'|^2
        assert b.holo_hess[0, 0] == pytest.approx(6.0)  # g * conj(g'') = 3 * 2

    def test_gradient_vanishes_at_zero_residuals(self):
        m = builtin("quad", a=-1 + 1j)
        root = np.sqrt(complex(-1, 1))
        b = bundle(m, [root])
        assert np.linalg.norm(b.grad_conj) < 1e-14

    def test_objective_matches_sum_of_squares(self):
        m = builtin("ex_two_minima")
        z = [0.7 - 0.2j]
        b = bundle(m, z)
        want = sum(abs(eval_jet2(m, j, z).value) ** 2 for j in range(m.m))
        assert b.f == pytest.approx(want, rel=1e-12)

    def test_mixed_hessian_is_hermitian_and_psd(self):
        m = parse_model("n=3; g1 = z1*z2 - z3^2; g2 = exp(z1) - z2; g3 = z3*z1 + 1;")
        for z in tame_points(m, 0j, 1.0, 10, seed=21):
            B = bundle(m, z).mixed_hess
            assert np.linalg.norm(B - B.conj().T) < 1e-12 * max(1.0, np.linalg.norm(B))
            w = hermitian_eigenvalues(B)
            assert w[0] >= -1e-10 * max(1.0, abs(w[-1]))

    def test_grad_conj_matches_wirtinger_operator_fd(self):
        for name in ALL_SCALAR:
            m = builtin(name)
            center, half = CATALOG[name].sample_box
            for z in tame_points(m, center, half, 8, seed=13, value_cap=100.0, grad_cap=100.0):
                gc = bundle(m, z).grad_conj
                gc_fd = fd.fd_grad_conj(m, z)
                assert np.max(np.abs(gc - gc_fd)) < 1e-6

    def test_mixed_hess_matches_fd_of_gradient_field(self):
        for name in ("quad", "rational_cycle", "cubic_cycle"):
            m = builtin(name)
            center, half = CATALOG[name].sample_box
            for z in tame_points(m, center, half, 5, seed=29, value_cap=100.0):
                b = bundle(m, z)
                B_fd = fd.fd_mixed_hess(m, z)
                assert np.max(np.abs(b.mixed_hess - B_fd)) < 1e-6


class TestRealHessian:
    def test_modulus_squared_is_identity_scaled(self):
        m = parse_model("n=1; g1 = z1;")
        H = real_hessian(m, [0.4 - 2j])
        assert np.allclose(H, 2.0 * np.eye(2), atol=1e-14)

    def test_real_gradient_matches_fd(self):
        m = builtin("ex_two_minima")
        center, half = CATALOG["ex_two_minima"].sample_box
        for z in tame_points(m, center, half, 6, seed=31, value_cap=50.0, grad_cap=50.0):
            g = real_gradient(bundle(m, z))
            g_fd = fd.fd_real_gradient(m, z)
            assert np.max(np.abs(g - g_fd)) < 1e-5

    def test_transform_matches_fd_hessian_on_catalog(self):
        for name in ALL_SCALAR:
            m = builtin(name)
            center, half = CATALOG[name].sample_box
            for z in tame_points(m, center, half, 4, seed=37, value_cap=2.0, grad_cap=30.0):
                H = real_hessian(m, z)
                H_fd = fd.fd_real_hessian(m, z, h=2.5e-5)
                assert np.max(np.abs(H - H_fd)) < 1e-5

    def test_transform_matches_fd_hessian_multivariate(self):
        m = parse_model("n=2; g1 = z1^2*z2 - 1; g2 = z2^2 + z1 - 0.5;")
        for z in tame_points(m, 0j, 1.0, 8, seed=41, value_cap=10.0):
            H = real_hessian(m, z)
            H_fd = fd.fd_real_hessian(m, z, h=1e-4)
            assert np.max(np.abs(H - H_fd)) < 1e-5 * max(1.0, np.max(np.abs(H)))

    def test_quad_minimum_is_positive_definite(self):
        a = -1 + 1j
        m = builtin("quad", a=a)
        H_fd = fd.fd_real_hessian(m, [np.sqrt(complex(a))], h=1e-5)
        assert signature_real_symmetric(H_fd, tol=1e-7).as_tuple() == (2, 0, 0)
        H = real_hessian(m, [np.sqrt(complex(a))])
        assert signature_real_symmetric(H, tol=1e-9).as_tuple() == (2, 0, 0)

    def test_quad_saddle_signature(self):
        m = builtin("quad", a=-1 + 1j)
        H = real_hessian(m, [0j])
        H_fd = fd.fd_real_hessian(m, [0j], h=1e-5)
        assert signature_real_symmetric(H, tol=1e-9).as_tuple() == (1, 0, 1)
        assert signature_real_symmetric(H_fd, tol=1e-7).as_tuple() == (1, 0, 1)


class TestComplexHessianBlocks:
    def test_block_layout(self):
        m = builtin("quad", a=1)
        b = bundle(m, [2 + 1j])
        H = complex_hessian(b)
        assert H[1, 0] == b.mixed_hess[0, 0]  # d2f/dzbar dz
        assert H[1, 1] == b.holo_hess[0, 0]   # d2f/dzbar^2
        assert H[0, 0] == np.conj(b.holo_hess[0, 0])
        assert H[0, 1] == np.conj(b.mixed_hess[0, 0])


class TestRankDetector:
    def test_full_rank_when_derivatives_span(self):
        m = builtin("ex_two_minima")
        assert mixed_hessian_rank(bundle(m, [0.3 + 0.2j])) == 1

    def test_rank_counts_span_dimension(self):
        # two residuals with proportional gradients at z: rank 1 in C^2
        m = parse_model("n=2; g1 = z1 + z2; g2 = 2*z1 + 2*z2 + 1;")
        assert mixed_hessian_rank(bundle(m, [0.5 + 0j, -0.25j])) == 1
        m2 = parse_model("n=2; g1 = z1 + z2; g2 = z1 - z2;")
        assert mixed_hessian_rank(bundle(m2, [0.5 + 0j, -0.25j])) == 2

    def test_bilinear_symmetry_kernel(self):
        m = builtin("bilinear")
        b = bundle(m, [1.0 + 0.5j, 2.0 - 1j])
        assert mixed_hessian_rank(b) == 1  # kernel direction (z1, -z2)
