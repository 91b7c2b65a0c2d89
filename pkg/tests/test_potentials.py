import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combopred.errors import StepInfeasibleError
from combopred.potentials import (
    NegEntropy,
    OmegaPotential,
    PolyPotential,
    check_omega_axioms,
    parse_potential,
)

interior = st.lists(st.floats(0.05, 3.0), min_size=1, max_size=4).map(np.array)


class TestGradients:
    def test_negentropy_grad_at_ones(self):
        p = NegEntropy(eta=1.0)
        np.testing.assert_allclose(p.grad(np.array([1.0, 1.0])), [1.0, 1.0])

    def test_poly_grad_q2(self):
        p = PolyPotential(eta=1.0, q=2.0)
        np.testing.assert_allclose(p.grad(np.array([1.0])), [-1.0])

    def test_poly_grad_eta2(self):
        p = PolyPotential(eta=2.0, q=2.0)
        np.testing.assert_allclose(p.grad(np.array([4.0])), [-0.25])

    def test_boundary_is_domain_error(self):
        for p in (NegEntropy(eta=1.0), PolyPotential(eta=1.0, q=2.0)):
            with pytest.raises(ValueError):
                p.grad(np.array([0.0, 1.0]))

    @given(interior, st.floats(0.2, 3.0), st.floats(1.3, 4.0))
    @settings(max_examples=60)
    def test_duality_roundtrip(self, u, eta, q):
        for p in (NegEntropy(eta=eta), PolyPotential(eta=eta, q=q)):
            np.testing.assert_allclose(p.grad_inv(p.grad(u)), u, rtol=1e-10, atol=1e-12)

    @given(interior, st.floats(0.2, 3.0))
    @settings(max_examples=40)
    def test_grad_strictly_increasing(self, u, eta):
        for p in (NegEntropy(eta=eta), PolyPotential(eta=eta, q=2.0)):
            bumped = p.grad(u + 1e-3)
            assert np.all(bumped > p.grad(u))


class TestSteps:
    def test_negentropy_step_example(self):
        p = NegEntropy(eta=1.0)
        out = p.step(np.array([1.0, 1.0]), np.array([math.log(2.0), 0.0]))
        np.testing.assert_allclose(out, [0.5, 1.0])

    def test_poly_step_example(self):
        p = PolyPotential(eta=1.0, q=2.0)
        np.testing.assert_allclose(p.step(np.array([1.0]), np.array([1.0])), [0.25])

    @given(interior, st.floats(0.2, 2.0))
    @settings(max_examples=40)
    def test_zero_estimate_is_identity(self, w, eta):
        for p in (NegEntropy(eta=eta), PolyPotential(eta=eta, q=2.0)):
            np.testing.assert_allclose(p.step(w, np.zeros_like(w)), w, rtol=1e-12)

    def test_step_solves_dual_equation(self):
        p = PolyPotential(eta=0.7, q=3.0)
        w = np.array([0.3, 0.9])
        est = np.array([0.5, 0.0])
        np.testing.assert_allclose(p.grad(p.step(w, est)), p.grad(w) - est, rtol=1e-12)

    def test_poly_infeasible_step(self):
        p = PolyPotential(eta=1.0, q=2.0)
        with pytest.raises(StepInfeasibleError):
            p.step(np.array([1.0]), np.array([-2.0]))

    def test_negentropy_accepts_negative_estimates(self):
        p = NegEntropy(eta=1.0)
        np.testing.assert_allclose(p.step(np.array([0.5]), np.array([-1.0])), [0.5 * math.e])


class TestBregman:
    def test_negentropy_value(self):
        p = NegEntropy(eta=1.0)
        val = p.bregman(np.array([0.5, 0.5]), np.array([1.0, 1.0]))
        np.testing.assert_allclose(val, 1.0 - math.log(2.0), rtol=1e-12)

    @given(interior, st.floats(0.2, 3.0))
    @settings(max_examples=40)
    def test_zero_at_equal_points(self, u, eta):
        for p in (NegEntropy(eta=eta), PolyPotential(eta=eta, q=2.0)):
            assert abs(p.bregman(u, u)) < 1e-12

    @given(interior, st.data())
    @settings(max_examples=60)
    def test_nonnegative_and_separating(self, u, data):
        v = data.draw(st.lists(st.floats(0.05, 3.0), min_size=len(u), max_size=len(u)).map(np.array))
        for p in (NegEntropy(eta=0.8), PolyPotential(eta=0.8, q=2.5)):
            val = p.bregman(u, v)
            assert val >= -1e-12
            if np.max(np.abs(u - v)) > 1e-3:
                assert val > 0.0

    def test_matches_first_order_definition(self):
        # D_F(u, v) = F(u) - F(v) - (u - v) . grad(v), with F from the psi integral.
        u = np.array([0.4, 1.3])
        v = np.array([0.9, 0.2])
        eta, q = 0.9, 2.0

        def F_neg(x):
            return np.sum(x * np.log(x)) / eta

        def F_poly(x):
            return -q / ((q - 1.0) * eta) * np.sum(x ** ((q - 1.0) / q))

        for p, F in ((NegEntropy(eta=eta), F_neg), (PolyPotential(eta=eta, q=q), F_poly)):
            direct = F(u) - F(v) - (u - v) @ p.grad(v)
            np.testing.assert_allclose(p.bregman(u, v), direct, rtol=1e-10)

    def test_convex_in_first_argument(self):
        rng = np.random.default_rng(5)
        for p in (NegEntropy(eta=1.0), PolyPotential(eta=1.0, q=2.0)):
            for _ in range(25):
                v = rng.uniform(0.1, 2.0, size=3)
                a, b = rng.uniform(0.05, 2.0, (2, 3))
                lam = rng.uniform()
                mid = p.bregman(lam * a + (1 - lam) * b, v)
                assert mid <= lam * p.bregman(a, v) + (1 - lam) * p.bregman(b, v) + 1e-10

    def test_boundary_first_argument_allowed(self):
        for p in (NegEntropy(eta=1.0), PolyPotential(eta=1.0, q=2.0)):
            val = p.bregman(np.array([0.0, 1.0]), np.array([0.5, 0.5]))
            assert np.isfinite(val) and val >= 0.0

    def test_poly_anchor_bound_over_hull_points(self):
        # For u in [0,1]^d, D_F(u, all-ones) <= d / (eta (q-1)).
        rng = np.random.default_rng(7)
        eta, q, d = 0.5, 2.0, 6
        p = PolyPotential(eta=eta, q=q)
        ones = np.ones(d)
        for _ in range(50):
            u = rng.uniform(0.0, 1.0, size=d)
            assert p.bregman(u, ones) <= d / (eta * (q - 1.0)) + 1e-9

    def test_negentropy_anchor_bound_over_hull_points(self):
        rng = np.random.default_rng(8)
        eta, d = 0.5, 6
        p = NegEntropy(eta=eta)
        ones = np.ones(d)
        for _ in range(50):
            u = rng.uniform(0.0, 1.0, size=d)
            assert p.bregman(u, ones) <= d / eta + 1e-9


class TestDualBregman:
    @given(interior, st.floats(0.3, 2.0))
    @settings(max_examples=30)
    def test_zero_at_equal_dual_points(self, u, eta):
        for p in (NegEntropy(eta=eta), PolyPotential(eta=eta, q=2.0)):
            a = p.grad(u)
            assert abs(p.dual_bregman(a, a)) < 1e-12

    def test_step_divergence_identity_negentropy(self):
        p = NegEntropy(eta=1.0)
        w = np.array([1.0, 1.0])
        est = np.array([math.log(2.0), 0.0])
        lhs = p.dual_bregman(p.grad(w) - est, p.grad(w))
        rhs = p.bregman(w, p.step(w, est))
        np.testing.assert_allclose(lhs, rhs, rtol=1e-12)

    def test_step_divergence_identity_poly(self):
        p = PolyPotential(eta=1.0, q=2.0)
        w = np.array([1.0])
        est = np.array([1.0])
        lhs = p.dual_bregman(p.grad(w) - est, p.grad(w))
        rhs = p.bregman(w, p.step(w, est))
        np.testing.assert_allclose(lhs, rhs, rtol=1e-12)

    @given(interior, st.data(), st.floats(0.3, 2.0), st.floats(1.5, 3.0))
    @settings(max_examples=60)
    def test_step_divergence_identity_random(self, w, data, eta, q):
        est = np.array(
            data.draw(st.lists(st.floats(0.0, 2.0), min_size=len(w), max_size=len(w)))
        )
        for p in (NegEntropy(eta=eta), PolyPotential(eta=eta, q=q)):
            lhs = p.dual_bregman(p.grad(w) - est, p.grad(w))
            rhs = p.bregman(w, p.step(w, est))
            np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-12)

    @given(interior, st.data(), st.floats(0.3, 2.0))
    @settings(max_examples=60)
    def test_quadratic_upper_bound_for_nonnegative_estimates(self, w, data, eta):
        est = np.array(
            data.draw(st.lists(st.floats(0.0, 1.5), min_size=len(w), max_size=len(w)))
        )
        for p in (NegEntropy(eta=eta), PolyPotential(eta=eta, q=2.0)):
            drop = p.bregman(w, p.step(w, est))
            quad = np.sum(est**2 / (2.0 * p.hess_diag(w)))
            assert drop <= quad + 1e-10


class TestOmegaAxioms:
    def test_builtin_inverse_maps_satisfy_axioms(self):
        neg = NegEntropy(eta=1.0)
        check_omega_axioms(lambda x: float(neg.grad_inv(x)), a=math.inf, omega=0.0)
        poly = PolyPotential(eta=1.0, q=2.0)
        check_omega_axioms(lambda x: float(poly.grad_inv(np.array([x]))[0]), a=0.0, omega=0.0)

    def test_decreasing_psi_rejected(self):
        with pytest.raises(ValueError):
            check_omega_axioms(lambda x: math.exp(-x), a=math.inf, omega=0.0)

    def test_generic_matches_negentropy(self):
        generic = OmegaPotential(lambda x: math.exp(x - 1.0), a=math.inf, omega=0.0)
        closed = NegEntropy(eta=1.0)
        u = np.array([0.4, 1.7])
        v = np.array([0.8, 0.6])
        np.testing.assert_allclose(generic.grad(u), closed.grad(u), rtol=1e-9)
        np.testing.assert_allclose(generic.bregman(u, v), closed.bregman(u, v), rtol=1e-8)
        est = np.array([0.3, 0.0])
        np.testing.assert_allclose(generic.step(v, est), closed.step(v, est), rtol=1e-9)


class TestParse:
    def test_parse(self):
        p = parse_potential("negentropy:eta=0.5")
        assert isinstance(p, NegEntropy) and p.eta == 0.5
        p = parse_potential("poly:eta=0.25,q=3")
        assert isinstance(p, PolyPotential) and (p.eta, p.q) == (0.25, 3.0)

    def test_parse_auto_eta_with_context(self):
        p = parse_potential("negentropy:eta=auto:thm4", d=4, n=100)
        np.testing.assert_allclose(p.eta, math.sqrt(0.02))
        p = parse_potential("poly:eta=auto:thm6,q=2", d=4, n=100)
        np.testing.assert_allclose(p.eta, math.sqrt(2.0 / (2.0 * 1.0 * 100)))

    def test_parse_auto_eta_needs_context(self):
        with pytest.raises(ValueError, match="context"):
            parse_potential("negentropy:eta=auto:thm4")

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            NegEntropy(eta=0.0)
        with pytest.raises(ValueError):
            PolyPotential(eta=1.0, q=1.0)
        with pytest.raises(ValueError):
            parse_potential("spline:eta=1")
