import math

import numpy as np
import pytest

from combopred.action_sets import ActionSet, make_k_subsets, make_pair_games_set, make_simplex
from combopred.errors import NumericUnderflowError, StepInfeasibleError
from combopred.forecasters import (
    Exp2Forecaster,
    MirrorForecaster,
    auto_eta,
    bandit_estimate,
    build_forecaster,
    init_weights,
    parse_forecaster,
    semibandit_estimate,
)
from combopred.geometry import pinv_psd
from combopred.potentials import NegEntropy, PolyPotential


class TestAutoEta:
    def test_quoted_values(self):
        np.testing.assert_allclose(auto_eta("thm4", d=4, n=100), math.sqrt(2.0 / 100.0))
        np.testing.assert_allclose(
            auto_eta("polyinf", d=10, n=10_000, q=2.0), math.sqrt(2.0) / 100.0
        )
        np.testing.assert_allclose(auto_eta("thm11linf", d=4, n=100, k=2), 0.1)
        np.testing.assert_allclose(auto_eta("thm8", d=5, n=50), math.sqrt(2 * math.log(2) / 250))
        np.testing.assert_allclose(auto_eta("thm5", d=6, n=24), math.sqrt(0.5))

    def test_unknown_rule(self):
        with pytest.raises(ValueError):
            auto_eta("thm99", d=4, n=100)

    def test_missing_parameters(self):
        with pytest.raises(ValueError):
            auto_eta("thm11l2", d=4, n=100)
        with pytest.raises(ValueError):
            auto_eta("thm6", d=4, n=100)


class TestEstimators:
    def test_semibandit_hand_example(self):
        est = semibandit_estimate(
            np.array([0.6, 0.0]), np.array([1.0, 0.0]), np.array([0.5, 0.5])
        )
        np.testing.assert_allclose(est, [1.2, 0.0])

    def test_bandit_hand_example(self):
        P = np.diag([0.5, 0.5])
        est = bandit_estimate(np.array([0.5]), np.array([[1.0, 0.0]]), pinv_psd(P))
        np.testing.assert_allclose(est, [[1.0, 0.0]])

    def test_semibandit_underflow_guard(self):
        with pytest.raises(NumericUnderflowError):
            semibandit_estimate(np.array([0.5]), np.array([1.0]), np.array([1e-15]))

    def test_semibandit_unbiased_by_enumeration(self):
        aset = make_k_subsets(4, 2)
        rng = np.random.default_rng(0)
        p = rng.dirichlet(np.ones(aset.size))
        q = p @ aset.vertices
        loss = rng.uniform(0.0, 1.0, size=4)
        mean_est = np.zeros(4)
        for prob, v in zip(p, aset.vertices):
            mean_est += prob * semibandit_estimate(loss * v, v, q)
        np.testing.assert_allclose(mean_est, loss, atol=1e-10)

    def test_bandit_unbiased_by_enumeration(self):
        aset = make_pair_games_set(4)
        rng = np.random.default_rng(1)
        p = rng.dirichlet(np.ones(aset.size))
        P = np.einsum("m,mi,mj->ij", p, aset.vertices, aset.vertices)
        Pp = pinv_psd(P)
        loss = rng.uniform(0.0, 1.0, size=4)
        mean_est = np.zeros(4)
        for prob, v in zip(p, aset.vertices):
            mean_est += prob * bandit_estimate(np.array([loss @ v]), v[None, :], Pp)[0]
        for v in aset.vertices:  # full-support mixture spans every action
            np.testing.assert_allclose(mean_est @ v, loss @ v, atol=1e-8)


class TestInitWeights:
    def test_simplex_uniform(self):
        w1 = init_weights(NegEntropy(eta=1.0), make_simplex(4), np.ones(4))
        np.testing.assert_allclose(w1, 0.25, rtol=1e-10)

    def test_k_subsets_symmetric(self):
        for p in (NegEntropy(eta=0.5), PolyPotential(eta=0.5, q=2.0)):
            w1 = init_weights(p, make_k_subsets(4, 2), np.ones(4))
            np.testing.assert_allclose(w1, 0.5, atol=1e-9)

    def test_anchor_inside_hull_is_fixed(self):
        aset = make_k_subsets(4, 2)
        anchor = np.array([0.3, 0.7, 0.6, 0.4])
        w1 = init_weights(NegEntropy(eta=1.0), aset, anchor)
        np.testing.assert_allclose(w1, anchor, atol=1e-9)

    def test_k_subsets_vs_scipy_oracle(self):
        from scipy.optimize import minimize

        aset = make_k_subsets(4, 2)
        p = NegEntropy(eta=1.0)
        w1 = init_weights(p, aset, np.ones(4))

        def objective(lam):
            return p.bregman(np.clip(lam @ aset.vertices, 1e-9, None), np.ones(4))

        m = aset.size
        res = minimize(objective, np.full(m, 1.0 / m), bounds=[(0, 1)] * m,
                       constraints=[{"type": "eq", "fun": lambda lam: lam.sum() - 1}],
                       method="SLSQP")
        assert p.bregman(w1, np.ones(4)) <= res.fun + 1e-7


class TestMirrorRounds:
    def test_zero_loss_keeps_point(self):
        eng = MirrorForecaster(NegEntropy(eta=0.5), make_k_subsets(4, 2), feedback="full")
        w0 = eng.W.copy()
        eng.update(np.zeros((1, 4)))
        np.testing.assert_allclose(eng.W, w0, atol=1e-10)

    def test_simplex_round_is_exponential_weights(self):
        aset = make_simplex(3)
        eta = 0.7
        eng = MirrorForecaster(NegEntropy(eta=eta), aset, feedback="full")
        loss = np.array([0.9, 0.1, 0.4])
        eng.update(loss[None, :])
        manual = np.exp(-eta * loss) / np.exp(-eta * loss).sum() * 1.0
        start = np.full(3, 1 / 3)
        manual = start * np.exp(-eta * loss)
        manual /= manual.sum()
        np.testing.assert_allclose(eng.W[0], manual, rtol=1e-10)

    def test_k_subsets_round_shrinks_hit_coordinate(self):
        aset = make_k_subsets(4, 2)
        eng = MirrorForecaster(NegEntropy(eta=0.1), aset, feedback="full")
        np.testing.assert_allclose(eng.W[0], 0.5, atol=1e-9)
        eng.update(np.array([[1.0, 0.0, 0.0, 0.0]]))
        assert eng.W[0, 0] < 0.5
        np.testing.assert_allclose(eng.W[0].sum(), 2.0, atol=1e-9)

    def test_mixture_certifies_the_point(self):
        aset = make_k_subsets(5, 2)
        eng = MirrorForecaster(PolyPotential(eta=0.4, q=2.0), aset, feedback="full", reps=3)
        rng = np.random.default_rng(2)
        for _ in range(5):
            eng.update(rng.uniform(0.0, 1.0, size=(3, 5)))
        np.testing.assert_allclose(
            np.einsum("ra,rad->rd", eng.probs, eng.atoms), eng.W, atol=1e-8
        )

    def test_hull_mean_identity(self):
        # sum_v p(v) x.v equals x.w for any fixed x.
        aset = make_k_subsets(4, 2)
        eng = MirrorForecaster(NegEntropy(eta=0.3), aset, feedback="full")
        eng.update(np.array([[0.2, 0.9, 0.1, 0.5]]))
        rng = np.random.default_rng(3)
        x = rng.normal(size=4)
        lhs = np.sum(eng.probs[0] * (eng.atoms[0] @ x))
        np.testing.assert_allclose(lhs, x @ eng.W[0], atol=1e-10)

    def test_descent_certificate_semibandit(self):
        aset = make_k_subsets(4, 2)
        for potential in (NegEntropy(eta=0.2), PolyPotential(eta=0.2, q=2.0)):
            eng = MirrorForecaster(potential, aset, feedback="semibandit", reps=8)
            rng = np.random.default_rng(4)
            for t in range(40):
                V = eng.draw(rng.random(8))
                loss = rng.uniform(0.0, 1.0, size=4)
                est = eng.estimate(loss * V, V)
                eng.update(est)
            assert eng.bound_margin >= -1e-6

    def test_quadratic_certificate_for_nonnegative_estimates(self):
        aset = make_k_subsets(4, 2)
        potential = NegEntropy(eta=0.2)
        eng = MirrorForecaster(potential, aset, feedback="semibandit", reps=4)
        rng = np.random.default_rng(5)
        quad = np.zeros(4)
        for t in range(30):
            V = eng.draw(rng.random(4))
            loss = rng.uniform(0.0, 1.0, size=4)
            est = eng.estimate(loss * V, V)
            quad += np.sum(est**2 / (2.0 * potential.hess_diag(np.maximum(eng.W, 1e-12))), axis=1)
            eng.update(est)
        lhs = eng.cum_lw[:, None] - eng.cum_est @ eng.panel.T
        rhs = eng.panel_df[None, :] + quad[:, None]
        assert float((rhs - lhs).min()) >= -1e-6

    def test_step_infeasible_records_round(self):
        aset = make_k_subsets(4, 2)
        eng = MirrorForecaster(PolyPotential(eta=2.0, q=2.0), aset, feedback="full")
        with pytest.raises(StepInfeasibleError) as err:
            eng.update(np.full((1, 4), -5.0))
        assert err.value.round_index == 1


class TestExp2Rounds:
    def test_hand_update(self):
        aset = make_simplex(2)
        eng = Exp2Forecaster(aset, eta=1.0)
        eng.update(np.array([[math.log(2.0), 0.0]]))
        np.testing.assert_allclose(eng.weights()[0], [1.0 / 3.0, 2.0 / 3.0], rtol=1e-12)

    def test_zero_and_constant_losses_keep_weights(self):
        aset = make_k_subsets(4, 2)
        eng = Exp2Forecaster(aset, eta=0.5)
        w0 = eng.weights().copy()
        eng.update(np.zeros((1, aset.size)))
        np.testing.assert_allclose(eng.weights(), w0, atol=1e-12)
        eng.update(np.full((1, aset.size), 3.7))
        np.testing.assert_allclose(eng.weights(), w0, atol=1e-12)

    def test_linexp_equals_exp2_on_simplex(self):
        aset = make_simplex(3)
        eta = 0.45
        mirror = MirrorForecaster(NegEntropy(eta=eta), aset, feedback="full")
        expanded = Exp2Forecaster(aset, eta=eta)
        rng = np.random.default_rng(6)
        for _ in range(10):
            loss = rng.uniform(0.0, 1.0, size=3)
            mirror.update(loss[None, :])
            expanded.update((aset.vertices @ loss)[None, :])
            np.testing.assert_allclose(mirror.W[0], expanded.marginals()[0], atol=1e-10)

    def test_descent_certificate_bandit(self):
        aset = make_pair_games_set(4)
        eng = Exp2Forecaster(aset, eta=0.2, feedback="bandit", reps=8)
        rng = np.random.default_rng(7)
        for _ in range(40):
            V, vidx = eng.draw(rng.random(8))
            loss = rng.uniform(0.0, 1.0, size=4)
            lam = eng.vertex_losses(V @ loss, V, vidx)
            eng.update(lam)
        assert eng.bound_margin >= -1e-6


class TestSpanner:
    def test_gamma_one_samples_uniformly_over_basis(self):
        aset = ActionSet(2, np.array([[1, 0], [0, 1], [1, 1]], dtype=float))
        eng = Exp2Forecaster(aset, eta=1.0, feedback="bandit", spanner_gamma=1.0)
        basis, _, explore, _ = eng.spanner
        p = eng.sampling_probs()[0]
        np.testing.assert_allclose(p, explore, atol=1e-12)
        np.testing.assert_allclose(p.sum(), 1.0, atol=1e-12)

    def test_standard_basis_reduces_to_plain_bandit_estimator(self):
        aset = make_simplex(3)
        plain = Exp2Forecaster(aset, eta=0.5, feedback="bandit")
        span = Exp2Forecaster(aset, eta=0.5, feedback="bandit", spanner_gamma=0.0)
        loss = np.array([0.3, 0.8, 0.1])
        V = aset.vertices[[1]]
        lam_plain = plain.vertex_losses(np.array([loss @ V[0]]), V, np.array([1]))
        lam_span = span.vertex_losses(np.array([loss @ V[0]]), V, np.array([1]))
        np.testing.assert_allclose(lam_plain, lam_span, atol=1e-9)

    def test_unbiased_estimates_by_enumeration(self):
        aset = ActionSet(2, np.array([[1, 0], [0, 1], [1, 1]], dtype=float))
        eng = Exp2Forecaster(aset, eta=1.0, feedback="bandit", spanner_gamma=0.0)
        loss = np.array([1.0, 0.0])
        p = eng.sampling_probs()[0]
        mean_lam = np.zeros(aset.size)
        for j, (prob, v) in enumerate(zip(p, aset.vertices)):
            lam = eng.vertex_losses(np.array([loss @ v]), v[None, :], np.array([j]))
            mean_lam += prob * lam[0]
        np.testing.assert_allclose(mean_lam, aset.vertices @ loss, atol=1e-9)


class TestSpecParsing:
    def test_parse_variants(self):
        s = parse_forecaster("linexp:eta=auto:thm4")
        assert s.kind == "linexp" and s.eta_rule == "thm4" and s.eta is None
        s = parse_forecaster("linpoly:q=2,eta=0.25")
        assert s.q == 2.0 and s.eta == 0.25
        s = parse_forecaster("exp2spanner:eta=0.1,gamma=0.05,C=1.5")
        assert (s.gamma, s.C) == (0.05, 1.5)

    def test_build_resolves_auto_rate(self):
        aset = make_k_subsets(4, 2)
        eng = build_forecaster("linexp:eta=auto:thm4", aset, n=100, feedback="full")
        np.testing.assert_allclose(eng.potential.eta, math.sqrt(0.02))

    def test_build_polyinf_defaults(self):
        eng = build_forecaster("polyinf:eta=auto:polyinf", make_simplex(5), n=400, feedback="bandit")
        assert eng.potential.q == 2.0
        np.testing.assert_allclose(eng.W[0], 0.2, atol=1e-9)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            parse_forecaster("hedge:eta=1")
