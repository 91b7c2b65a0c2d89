"""Loss-sequence generators: deterministic constructions and stochastic baselines.

Every adversary carries its constraint tag (``linf``: coordinate-wise losses
in [0,1]; ``l2``: l . v <= 1 for every action v), knows whether it is
deterministic, and can report the exact per-coordinate expected total loss
over a horizon — the harness uses that to compute the best fixed action in
closed form.

Deterministic kinds implement ``loss_row(t)`` (1-based round index);
stochastic kinds implement ``sample(n, rng)`` returning one repetition's
(n, d) loss array from the supplied generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .action_sets import ActionSet


def validate_loss(loss, constraint: str, aset: ActionSet | None = None, tol: float = 1e-9):
    """Check one or many loss vectors against a constraint tag.

    Returns (ok, report); the l2 check enumerates the action set's vertices.
    """
    loss = np.atleast_2d(np.asarray(loss, dtype=float))
    if not np.all(np.isfinite(loss)):
        return False, "loss has non-finite entries"
    if loss.min() < -tol:
        return False, f"loss has negative coordinate {loss.min():.3e}"
    if constraint == "linf":
        worst = loss.max()
        if worst > 1.0 + tol:
            return False, f"coordinate {worst:.6f} exceeds 1 (linf)"
        return True, None
    if constraint == "l2":
        if aset is None:
            raise ValueError("l2 validation needs the action set")
        worst = float((loss @ aset.vertices.T).max())
        if worst > 1.0 + tol:
            return False, f"l . v = {worst:.6f} exceeds 1 (l2)"
        return True, None
    raise ValueError(f"unknown constraint {constraint!r}")


@dataclass(frozen=True)
class FixedSequence:
    """Losses read from an explicit (T, d) array, cycled past its length."""

    rows: np.ndarray
    constraint: str = "linf"
    deterministic: bool = True

    @property
    def d(self) -> int:
        return self.rows.shape[1]

    def loss_row(self, t: int) -> np.ndarray:
        return self.rows[(t - 1) % self.rows.shape[0]]

    def total_means(self, n: int) -> np.ndarray:
        reps, rem = divmod(n, self.rows.shape[0])
        return reps * self.rows.sum(axis=0) + self.rows[:rem].sum(axis=0)


@dataclass(frozen=True)
class AlternatingHalves:
    """Deterministic two-phase sequence: odd rounds load the first half of the
    coordinates with ``scale``, even rounds the second half."""

    d: int
    scale: float = 1.0
    constraint: str = "linf"
    deterministic: bool = True

    def loss_row(self, t: int) -> np.ndarray:
        row = np.zeros(self.d)
        half = (self.d + 1) // 2
        if t % 2 == 1:
            row[:half] = self.scale
        else:
            row[half:] = self.scale
        return row

    def total_means(self, n: int) -> np.ndarray:
        odd, even = (n + 1) // 2, n // 2
        half = (self.d + 1) // 2
        out = np.empty(self.d)
        out[:half] = odd * self.scale
        out[half:] = even * self.scale
        return out


@dataclass(frozen=True)
class AlternatingInterval:
    """Unit losses alternating between the two intervals of the second half.

    Needs d divisible by 4: odd rounds charge coordinates
    [d/2, d/2 + d/4), even rounds [d/2 + d/4, d); the first half is free.
    """

    d: int
    constraint: str = "linf"
    deterministic: bool = True

    def __post_init__(self):
        if self.d % 4 != 0:
            raise ValueError("d must be a multiple of 4")

    def loss_row(self, t: int) -> np.ndarray:
        row = np.zeros(self.d)
        half, quarter = self.d // 2, self.d // 4
        if t % 2 == 1:
            row[half : half + quarter] = 1.0
        else:
            row[half + quarter :] = 1.0
        return row

    def total_means(self, n: int) -> np.ndarray:
        odd, even = (n + 1) // 2, n // 2
        half, quarter = self.d // 2, self.d // 4
        out = np.zeros(self.d)
        out[half : half + quarter] = odd
        out[half + quarter :] = even
        return out


def epsilon_interval_value(eta: float, n: int) -> float:
    """The tuned gap for the constant-interval sequence: min(log 2 / (eta n), 1)."""
    return min(math.log(2.0) / (eta * n), 1.0)


@dataclass(frozen=True)
class EpsilonInterval:
    """Constant losses 1-eps on the first quarter, 1 on the second quarter.

    ``eps=None`` means "tune from the forecaster's learning rate"; the
    harness resolves it to min(log 2 / (eta n), 1) before the run.
    """

    d: int
    eps: float | None
    constraint: str = "linf"
    deterministic: bool = True

    def __post_init__(self):
        if self.d % 4 != 0:
            raise ValueError("d must be a multiple of 4")
        if self.eps is not None and not 0.0 <= self.eps <= 1.0:
            raise ValueError("eps must lie in [0, 1]")

    def _row(self) -> np.ndarray:
        row = np.zeros(self.d)
        quarter = self.d // 4
        row[:quarter] = 1.0 - self.eps
        row[quarter : 2 * quarter] = 1.0
        return row

    def loss_row(self, t: int) -> np.ndarray:
        if self.eps is None:
            raise ValueError("eps unresolved; pass eps or run through the harness")
        return self._row()

    def total_means(self, n: int) -> np.ndarray:
        return n * self._row()


@dataclass(frozen=True)
class BernoulliLosses:
    """Independent per-coordinate Bernoulli losses scaled by a constant."""

    means: np.ndarray
    scale: float = 1.0
    constraint: str = "linf"
    deterministic: bool = False

    @property
    def d(self) -> int:
        return len(self.means)

    def sample(self, n: int, rng) -> np.ndarray:
        u = rng.random((n, self.d))
        return (u < np.asarray(self.means)[None, :]) * self.scale

    def total_means(self, n: int) -> np.ndarray:
        return n * self.scale * np.asarray(self.means, dtype=float)


def pair_means(alpha, eps: float) -> np.ndarray:
    """Coordinate means of the paired-experts adversary.

    In game i the expert named by alpha_i draws Bernoulli(1/2), the other
    expert Bernoulli(1/2 + eps); coordinate 2i+j-1 hosts expert j.
    """
    alpha = np.asarray(alpha, dtype=int)
    if not np.all((alpha == 1) | (alpha == 2)):
        raise ValueError("alpha entries must be 1 or 2")
    means = np.empty(2 * alpha.size)
    means[0::2] = np.where(alpha == 1, 0.5, 0.5 + eps)
    means[1::2] = np.where(alpha == 2, 0.5, 0.5 + eps)
    return means


@dataclass(frozen=True)
class PairBernoulli:
    """Independent two-expert games; the alpha expert is eps better per round."""

    alpha: tuple
    eps: float
    constraint: str = "linf"
    deterministic: bool = False

    def __post_init__(self):
        if not 0.0 <= self.eps <= 0.5:
            raise ValueError("eps must lie in [0, 1/2]")

    @property
    def d(self) -> int:
        return 2 * len(self.alpha)

    def means(self) -> np.ndarray:
        return pair_means(self.alpha, self.eps)

    def sample(self, n: int, rng) -> np.ndarray:
        u = rng.random((n, self.d))
        return (u < self.means()[None, :]).astype(float)

    def total_means(self, n: int) -> np.ndarray:
        return n * self.means()


@dataclass(frozen=True)
class MaskedPairBernoulli:
    """Paired-experts losses revealed on one uniformly chosen coordinate.

    Each round draws E_t uniform over the d coordinates and zeroes every
    other coordinate, which makes any realized loss vector l2-feasible.
    ``kind`` records which feedback game the construction targets.
    """

    alpha: tuple
    eps: float
    kind: str = "full"
    constraint: str = "l2"
    deterministic: bool = False

    def __post_init__(self):
        if not 0.0 <= self.eps <= 0.5:
            raise ValueError("eps must lie in [0, 1/2]")
        if self.kind not in ("full", "bandit"):
            raise ValueError("kind must be 'full' or 'bandit'")

    @property
    def d(self) -> int:
        return 2 * len(self.alpha)

    def means(self) -> np.ndarray:
        return pair_means(self.alpha, self.eps)

    def sample(self, n: int, rng) -> np.ndarray:
        u = rng.random((n, self.d))
        bern = (u < self.means()[None, :]).astype(float)
        active = rng.integers(0, self.d, size=n)
        mask = np.zeros((n, self.d))
        mask[np.arange(n), active] = 1.0
        return bern * mask

    def total_means(self, n: int) -> np.ndarray:
        return n * self.means() / self.d


def default_eps_grid(d: int, n: int):
    """Sweep values for the paired-experts gap: {1/8, 1/4} * sqrt(d/n)."""
    base = math.sqrt(d / n)
    return [0.125 * base, 0.25 * base]


def all_alphas(d: int):
    """Every assignment of the better expert across the d/2 games."""
    import itertools

    return [alpha for alpha in itertools.product((1, 2), repeat=d // 2)]


def resolve_eps(adversary, eta: float, n: int):
    """Fill in the tuned eps of a constant-interval adversary when left auto."""
    if isinstance(adversary, EpsilonInterval) and adversary.eps is None:
        return replace(adversary, eps=epsilon_interval_value(eta, n))
    return adversary


def load_fixed(path, constraint: str = "linf") -> FixedSequence:
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([float(x) for x in line.split()])
    if not rows:
        raise ValueError(f"no loss rows in {path}")
    return FixedSequence(rows=np.array(rows), constraint=constraint)


def parse_adversary(spec: str, d: int, constraint: str = "linf"):
    """Adversary from a CLI spec string.

    Recognised forms: ``thm16a``, ``thm16e:eps=<v|auto>``,
    ``alpha:eps=<v>,alpha=<bits of 1/2>``, ``thm18:kind=<full|bandit>,eps=<v>
    [,alpha=<bits>]``, ``bernoulli:means=<csv>[,scale=<v>]``, ``fixed:<file>``,
    ``althalves[:scale=<v>]``.
    """
    kind, _, body = spec.partition(":")
    kv: dict[str, str] = {}
    if kind != "fixed":
        last = None
        for item in body.split(","):
            if not item:
                continue
            if "=" in item:
                key, _, val = item.partition("=")
                last = key.strip()
                kv[last] = val.strip()
            elif last is not None:
                kv[last] += "," + item.strip()  # csv values keep their commas
    if kind == "thm16a":
        return AlternatingInterval(d)
    if kind == "thm16e":
        raw = kv.get("eps", "auto")
        return EpsilonInterval(d, eps=None if raw == "auto" else float(raw))
    if kind == "alpha":
        alpha = tuple(int(ch) for ch in kv["alpha"])
        return PairBernoulli(alpha=alpha, eps=float(kv["eps"]))
    if kind == "thm18":
        alpha = tuple(int(ch) for ch in kv.get("alpha", "1" * (d // 2)))
        return MaskedPairBernoulli(alpha=alpha, eps=float(kv["eps"]), kind=kv.get("kind", "full"))
    if kind == "bernoulli":
        means = np.array([float(x) for x in kv["means"].split(",")])
        scale = float(kv.get("scale", 1.0))
        return BernoulliLosses(means=means, scale=scale, constraint=kv.get("constraint", "linf"))
    if kind == "althalves":
        return AlternatingHalves(d, scale=float(kv.get("scale", 1.0)))
    if kind == "fixed":
        return load_fixed(body, constraint=constraint)
    raise ValueError(f"unknown adversary spec {spec!r}")
