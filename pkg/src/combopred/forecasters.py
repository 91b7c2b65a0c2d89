"""Forecasters for combinatorial prediction games.

Two engine families, both carrying a leading repetition axis so Monte Carlo
runs vectorise across independent repetitions:

* :class:`MirrorForecaster` — dual gradient step with a coordinate-wise
  Legendre potential, Bregman projection back onto Conv(S), and vertex-mixture
  resampling.  Instantiates ``linexp`` (negative entropy), ``linpoly`` /
  ``polyinf`` (polynomial potential).
* :class:`Exp2Forecaster` — exponential weights over the expanded expert set
  of all vertices, optionally sampling through a barycentric spanner with
  forced exploration (``exp2spanner``).

Both engines optionally track the running mirror-descent regret certificate:
for every comparator u in a vertex panel,

    sum_t est_t . (w_t - u)  <=  D_F(u, w_1) + sum_t D_F*(grad(w_t) - est_t, grad(w_t)),

whose worst margin across a run is exposed for the acceptance checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .action_sets import ActionSet
from .errors import EstimatorDegenerateError, NumericUnderflowError, StepInfeasibleError
from .geometry import barycentric_spanner, bregman_project, hull_solver, pinv_psd
from .potentials import BOUNDARY_CLAMP, NegEntropy, PolyPotential

BOUND_PANEL_LIMIT = 64


# ---------------------------------------------------------------------------
# learning-rate tunings
# ---------------------------------------------------------------------------


def _sym_load(d, k):
    return max(math.log(d / k), 1.0)


_ETA_RULES = {
    "thm4": lambda d, n, k, q: math.sqrt(2.0 / n),
    "thm5": lambda d, n, k, q: math.sqrt(2.0 * d / n),
    "thm6": lambda d, n, k, q: math.sqrt(2.0 / (q * (q - 1.0) * n)),
    "thm7": lambda d, n, k, q: math.sqrt(2.0 * d / (q * (q - 1.0) * n)),
    "thm8": lambda d, n, k, q: math.sqrt(2.0 * math.log(2.0) / (n * d)),
    "thm9": lambda d, n, k, q: math.sqrt(2.0 * d * math.log(2.0) / n),
    "thm10": lambda d, n, k, q: math.sqrt(2.0 / n),
    "thm11linf": lambda d, n, k, q: math.sqrt(2.0 * k * _sym_load(d, k) / (n * d)),
    "thm11l2": lambda d, n, k, q: k * math.sqrt(_sym_load(d, k) / (n * d)),
    "thm12": lambda d, n, k, q: math.sqrt(2.0 / (q * (q - 1.0) * n)),
    "thm13": lambda d, n, k, q: math.sqrt(2.0 * d ** (1.0 / q) / (q * (q - 1.0) * n)),
    "thm14": lambda d, n, k, q: math.sqrt(2.0 * math.log(2.0) / (n * d)),
    "thm15": lambda d, n, k, q: math.sqrt(2.0 * math.log(2.0) / n),
    "polyinf": lambda d, n, k, q: math.sqrt(2.0) * d ** (1.0 / q - 0.5) / math.sqrt((q - 1.0) * n),
}


def auto_eta(rule: str, *, d: int, n: int, k: int | None = None, q: float | None = None) -> float:
    """Theorem-tuned learning rate for the given bound identifier."""
    if rule not in _ETA_RULES:
        raise ValueError(f"unknown learning-rate rule {rule!r}")
    if rule in ("thm11linf", "thm11l2") and k is None:
        raise ValueError(f"rule {rule!r} needs the symmetry order k")
    if rule in ("thm6", "thm7", "thm12", "thm13", "polyinf") and q is None:
        raise ValueError(f"rule {rule!r} needs the exponent q")
    return float(_ETA_RULES[rule](d, n, k, q))


# ---------------------------------------------------------------------------
# loss estimators (step (c) of the round)
# ---------------------------------------------------------------------------


def full_estimate(loss):
    """Full information: the estimate is the observed loss vector itself."""
    return np.asarray(loss, dtype=float)


def semibandit_estimate(masked_loss, V, marginals):
    """Importance-weighted coordinate estimate l_i V_i / q_i.

    ``masked_loss`` is the observed l_i 1{V_i=1}; ``marginals`` are the
    selection probabilities q_i = P(V_i = 1) under the played distribution.
    Unbiased coordinate-wise wherever q_i > 0.
    """
    V = np.asarray(V, dtype=float)
    q = np.asarray(marginals, dtype=float)
    on = V > 0.0
    if np.any(on & (q < 1e-12)):
        raise NumericUnderflowError("selection probability underflowed on an observed coordinate")
    return np.where(on, np.asarray(masked_loss, dtype=float) / np.where(on, q, 1.0), 0.0)


def bandit_estimate(loss_scalar, V, moment_pinv):
    """Rank-one bandit estimate P+ V (l . V) from the scalar feedback.

    Unbiased against any comparator inside the span of the support of the
    played distribution (P+ P is the orthogonal projector onto that span).
    """
    V = np.asarray(V, dtype=float)
    scaled = np.squeeze(moment_pinv @ V[..., :, None], axis=-1)
    return scaled * np.asarray(loss_scalar, dtype=float)[..., None]


def spanner_estimate(loss_scalar, t2_v, q_pinv, t2_all):
    """Per-vertex loss estimates through the spanner coordinates.

    Computes c = Q+ T2(V) (l . V) and returns c . T2(v) for every vertex v.
    """
    coeff = np.squeeze(q_pinv @ np.asarray(t2_v)[..., :, None], axis=-1)
    coeff = coeff * np.asarray(loss_scalar, dtype=float)[..., None]
    return coeff @ t2_all.T


# ---------------------------------------------------------------------------
# initial weights
# ---------------------------------------------------------------------------


def init_weights(potential, aset: ActionSet, anchor) -> np.ndarray:
    """Bregman projection of the anchor point onto Conv(S)."""
    anchor = np.asarray(anchor, dtype=float)
    return bregman_project(potential, aset, anchor).w


def _anchor_vector(aset: ActionSet, anchor: str) -> np.ndarray:
    if anchor == "ones":
        return np.ones(aset.d)
    if anchor == "centroid":
        return aset.vertices.mean(axis=0)
    if anchor == "kd":
        if not (aset.structure and aset.structure[0] == "sum_k"):
            raise ValueError("anchor 'kd' needs a complete k-subset action set")
        return np.full(aset.d, aset.structure[1] / aset.d)
    raise ValueError(f"unknown anchor {anchor!r}")


# ---------------------------------------------------------------------------
# mirror-descent engine (linexp / linpoly / polyinf)
# ---------------------------------------------------------------------------


class MirrorForecaster:
    """Dual gradient step + Bregman projection + mixture resampling, batched."""

    def __init__(
        self,
        potential,
        aset: ActionSet,
        *,
        reps: int = 1,
        anchor: str = "ones",
        feedback: str = "full",
        track_bound: bool = True,
        pinv_tol: float = 1e-10,
        projection_tol: float = 1e-9,
        projection_iters: int = 10_000,
    ):
        self.potential = potential
        self.aset = aset
        self.feedback = feedback
        self.pinv_tol = pinv_tol
        self.solver = hull_solver(aset, tol=projection_tol, max_iter=projection_iters)
        self.w1 = init_weights(potential, aset, _anchor_vector(aset, anchor))
        R = max(int(reps), 1)
        self.W = np.tile(self.w1, (R, 1))
        self.atoms, self.probs = self.solver.decompose(self.W)
        self.round = 0
        self.clamped = 0
        self.track_bound = track_bound
        if track_bound:
            self.panel = aset.vertices[:BOUND_PANEL_LIMIT]
            self.panel_df = potential.bregman(self.panel, self.w1)
            self.cum_lw = np.zeros(R)
            self.cum_est = np.zeros((R, aset.d))
            self.cum_dual = np.zeros(R)
            self.bound_margin = math.inf

    @property
    def reps(self) -> int:
        return self.W.shape[0]

    def marginals(self) -> np.ndarray:
        """Coordinate selection probabilities; equals the mean point w_t."""
        return self.W

    def draw(self, uniforms):
        """One action per repetition by inverse CDF over the mixture atoms."""
        cdf = np.cumsum(self.probs, axis=1)
        j = np.minimum((uniforms[:, None] > cdf).sum(axis=1), cdf.shape[1] - 1)
        V = np.take_along_axis(self.atoms, j[:, None, None], axis=1)[:, 0, :]
        return V

    def estimate(self, obs, V):
        if self.feedback == "full":
            est = full_estimate(obs)
            if est.ndim == 1:
                est = np.broadcast_to(est, self.W.shape)
            return est
        if self.feedback == "semibandit":
            return semibandit_estimate(obs, V, self.W)
        moment = np.einsum("ra,rai,raj->rij", self.probs, self.atoms, self.atoms)
        pp = pinv_psd(moment, tol=self.pinv_tol, validate=False)
        return bandit_estimate(obs, V, pp)

    def update(self, est):
        """Apply the dual step and project; advances one round."""
        self.round += 1
        W_safe = np.maximum(self.W, BOUNDARY_CLAMP)
        self.clamped += int((self.W < BOUNDARY_CLAMP).sum())
        est = np.asarray(est, dtype=float)
        g = self.potential.grad(W_safe)
        x = g - est
        if not np.all(self.potential.dual_feasible(x)):
            raise StepInfeasibleError(
                "dual point left the mirror map's range (estimate too negative)",
                round_index=self.round,
            )
        if self.track_bound:
            self.cum_lw += np.sum(est * self.W, axis=1)
            self.cum_est += est
            self.cum_dual += self.potential.dual_bregman(x, g)
        self.W = self.solver.project(self.potential, self.potential.grad_inv(x))
        self.atoms, self.probs = self.solver.decompose(self.W)
        if self.track_bound:
            lhs = self.cum_lw[:, None] - self.cum_est @ self.panel.T
            rhs = self.panel_df[None, :] + self.cum_dual[:, None]
            self.bound_margin = min(self.bound_margin, float((rhs - lhs).min()))


# ---------------------------------------------------------------------------
# exponential weights over the vertex list (exp2 / exp2spanner)
# ---------------------------------------------------------------------------


class Exp2Forecaster:
    """Exponential weights over all vertices, in log space, batched."""

    def __init__(
        self,
        aset: ActionSet,
        eta: float,
        *,
        reps: int = 1,
        feedback: str = "full",
        spanner_gamma: float | None = None,
        spanner_C: float = 1.01,
        track_bound: bool = True,
        pinv_tol: float = 1e-10,
    ):
        self.aset = aset
        self.eta = float(eta)
        self.feedback = feedback
        self.pinv_tol = pinv_tol
        R = max(int(reps), 1)
        m = aset.size
        self.logw = np.zeros((R, m))
        self.round = 0
        self.spanner = None
        if spanner_gamma is not None:
            if not 0.0 <= spanner_gamma <= 1.0:
                raise ValueError("exploration weight gamma must lie in [0, 1]")
            basis = barycentric_spanner(aset, C=spanner_C)
            t2_all = np.array([basis.t2(v) for v in aset.vertices])
            explore = np.zeros(m)
            explore[basis.indices] += 1.0 / basis.m
            self.spanner = (basis, t2_all, explore, float(spanner_gamma))
        self.track_bound = track_bound
        if track_bound:
            self.df_u1 = math.log(m) / self.eta
            self.cum_lw = np.zeros(R)
            self.cum_lam = np.zeros((R, m))
            self.cum_dual = np.zeros(R)
            self.bound_margin = math.inf

    @property
    def reps(self) -> int:
        return self.logw.shape[0]

    def weights(self) -> np.ndarray:
        z = self.logw - self.logw.max(axis=1, keepdims=True)
        w = np.exp(z)
        return w / w.sum(axis=1, keepdims=True)

    def sampling_probs(self) -> np.ndarray:
        p = self.weights()
        if self.spanner is not None:
            _, _, explore, gamma = self.spanner
            p = (1.0 - gamma) * p + gamma * explore[None, :]
        return p

    def marginals(self) -> np.ndarray:
        return self.sampling_probs() @ self.aset.vertices

    def draw(self, uniforms):
        p = self.sampling_probs()
        cdf = np.cumsum(p, axis=1)
        j = np.minimum((uniforms[:, None] > cdf).sum(axis=1), cdf.shape[1] - 1)
        return self.aset.vertices[j], j

    def vertex_losses(self, obs, V, vidx):
        """Per-vertex loss estimates for the configured feedback model."""
        verts = self.aset.vertices
        if self.spanner is not None and self.feedback == "bandit":
            basis, t2_all, _, _ = self.spanner
            p = self.sampling_probs()
            Q = np.einsum("rm,ma,mb->rab", p, t2_all, t2_all)
            evals = np.linalg.eigvalsh(Q)
            if np.any(evals[..., 0] <= self.pinv_tol * np.maximum(evals[..., -1], 0.0)):
                raise EstimatorDegenerateError(
                    "sampling moment matrix is rank-deficient beyond the pinv tolerance"
                )
            qp = pinv_psd(Q, tol=self.pinv_tol, validate=False)
            return spanner_estimate(obs, t2_all[vidx], qp, t2_all)
        if self.feedback == "full":
            obs = np.asarray(obs, dtype=float)
            lam = obs @ verts.T
            if lam.ndim == 1:
                lam = np.broadcast_to(lam, (self.reps, verts.shape[0]))
            return lam
        if self.feedback == "semibandit":
            q = self.sampling_probs() @ verts
            est = semibandit_estimate(obs, V, q)
            return est @ verts.T
        p = self.sampling_probs()
        moment = np.einsum("rm,mi,mj->rij", p, verts, verts)
        pp = pinv_psd(moment, tol=self.pinv_tol, validate=False)
        est = bandit_estimate(obs, V, pp)
        return est @ verts.T

    def update(self, lam):
        """Multiplicative weight update with per-vertex losses ``lam``."""
        self.round += 1
        lam = np.asarray(lam, dtype=float)
        if self.track_bound:
            w = self.weights()
            self.cum_lw += np.sum(w * lam, axis=1)
            self.cum_lam += lam
            with np.errstate(over="ignore"):
                self.cum_dual += np.sum(w * lam + w * (np.exp(-self.eta * lam) - 1.0) / self.eta, axis=1)
        self.logw = self.logw - self.eta * lam
        self.logw -= self.logw.max(axis=1, keepdims=True)
        if self.track_bound:
            lhs = self.cum_lw[:, None] - self.cum_lam
            rhs = self.df_u1 + self.cum_dual[:, None]
            self.bound_margin = min(self.bound_margin, float((rhs - lhs).min()))


# ---------------------------------------------------------------------------
# forecaster specs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ForecasterSpec:
    """Parsed forecaster configuration; ``eta_rule`` set when eta is ``auto``."""

    kind: str
    eta: float | None = None
    eta_rule: str | None = None
    q: float | None = None
    gamma: float | None = None
    C: float = 1.01
    anchor: str | None = None

    def label(self) -> str:
        eta = self.eta if self.eta is not None else f"auto:{self.eta_rule}"
        extra = f",q={self.q}" if self.q is not None else ""
        return f"{self.kind}:eta={eta}{extra}"


def parse_forecaster(spec: str) -> ForecasterSpec:
    """Parse strings like ``linexp:eta=auto:thm4`` or ``linpoly:q=2,eta=0.1``."""
    kind, _, body = spec.partition(":")
    kv = {}
    for item in body.split(","):
        if item:
            key, _, val = item.partition("=")
            kv[key.strip()] = val.strip()
    if kind not in ("exp2", "linexp", "linpoly", "polyinf", "exp2spanner"):
        raise ValueError(f"unknown forecaster kind {kind!r}")
    eta = eta_rule = None
    raw = kv.get("eta")
    if raw is not None:
        if raw.startswith("auto"):
            eta_rule = raw.partition(":")[2] or None
        else:
            eta = float(raw)
    q = float(kv["q"]) if "q" in kv else None
    gamma = float(kv["gamma"]) if "gamma" in kv else None
    C = float(kv.get("C", 1.01))
    anchor = kv.get("anchor")
    return ForecasterSpec(kind=kind, eta=eta, eta_rule=eta_rule, q=q, gamma=gamma, C=C, anchor=anchor)


def resolve_eta(spec: ForecasterSpec, aset: ActionSet, n: int) -> float:
    if spec.eta is not None:
        return spec.eta
    if spec.eta_rule is None:
        raise ValueError(f"forecaster {spec.kind!r} needs eta=<value> or eta=auto:<rule>")
    k = aset.structure[1] if (aset.structure and aset.structure[0] == "sum_k") else None
    return auto_eta(spec.eta_rule, d=aset.d, n=n, k=k, q=spec.q)


def build_forecaster(spec, aset: ActionSet, n: int, feedback: str, reps: int = 1,
                     track_bound: bool = True, projection_tol: float = 1e-9,
                     projection_iters: int = 10_000):
    """Instantiate the engine a spec describes, resolving auto learning rates."""
    if isinstance(spec, str):
        spec = parse_forecaster(spec)
    if spec.kind == "polyinf" and spec.q is None:
        spec = replace(spec, q=2.0)
    eta = resolve_eta(spec, aset, n)
    if spec.kind == "exp2":
        return Exp2Forecaster(aset, eta, reps=reps, feedback=feedback, track_bound=track_bound)
    if spec.kind == "exp2spanner":
        gamma = spec.gamma if spec.gamma is not None else n ** (-1.0 / 3.0)
        return Exp2Forecaster(
            aset,
            eta,
            reps=reps,
            feedback=feedback,
            spanner_gamma=gamma,
            spanner_C=spec.C,
            track_bound=track_bound,
        )
    if spec.kind == "linexp":
        potential = NegEntropy(eta=eta)
        anchor = spec.anchor or "ones"
    elif spec.kind == "linpoly":
        if spec.q is None:
            raise ValueError("linpoly needs q=<value>")
        potential = PolyPotential(eta=eta, q=spec.q)
        anchor = spec.anchor or "ones"
    else:  # polyinf
        potential = PolyPotential(eta=eta, q=spec.q)
        anchor = spec.anchor or "centroid"
    return MirrorForecaster(
        potential, aset, reps=reps, anchor=anchor, feedback=feedback,
        track_bound=track_bound,
        projection_tol=projection_tol, projection_iters=projection_iters,
    )
