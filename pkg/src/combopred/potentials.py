"""Coordinate-wise Legendre potentials: mirror maps, dual steps, divergences.

Each potential F on D = [omega, inf)^d is described by its coordinate-wise
gradient ``grad`` (strictly increasing), the inverse map ``grad_inv`` (the
increasing convex bijection psi of the mirror framework), the diagonal Hessian
``hess_diag``, and closed-form Bregman divergences on both the primal and the
dual side.  All array arguments broadcast; divergences sum over the last axis.

Built-in families:

* :class:`NegEntropy` — F(u) = (1/eta) sum u_i log u_i.  Dual steps multiply
  the weights by exp(-eta * estimate); any real dual point is feasible.
* :class:`PolyPotential` — psi(x) = (-eta x)^(-q) for q > 1, i.e.
  F(u) = -q/((q-1) eta) sum u_i^((q-1)/q).  Dual points must stay negative,
  so steps require estimates that keep grad(w) - est < 0 (nonnegative
  estimates always qualify).
* :class:`OmegaPotential` — any user-supplied increasing convex bijection psi,
  with numerical inversion and quadrature divergences; its defining axioms are
  checked on a log-spaced grid at construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StepInfeasibleError

BOUNDARY_CLAMP = 1e-12


def _require_interior(u: np.ndarray, omega: float) -> None:
    if np.any(np.asarray(u) <= omega):
        raise ValueError("point has coordinates on or below the domain boundary; clamp first")


@dataclass(frozen=True)
class NegEntropy:
    """Scaled negative entropy; the mirror map of exponential-weights updates."""

    eta: float
    omega: float = 0.0

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError("eta must be positive")

    def grad(self, u):
        u = np.asarray(u, dtype=float)
        _require_interior(u, 0.0)
        return (np.log(u) + 1.0) / self.eta

    def grad_inv(self, x):
        with np.errstate(over="ignore"):
            return np.exp(self.eta * np.asarray(x, dtype=float) - 1.0)

    def hess_diag(self, u):
        u = np.asarray(u, dtype=float)
        _require_interior(u, 0.0)
        return 1.0 / (self.eta * u)

    def dual_feasible(self, x):
        return np.isfinite(x)

    def step(self, w, est):
        """Solve grad(w') = grad(w) - est; closed form w' = w exp(-eta est)."""
        w = np.asarray(w, dtype=float)
        _require_interior(w, 0.0)
        return w * np.exp(-self.eta * np.asarray(est, dtype=float))

    def bregman(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        _require_interior(v, 0.0)
        if np.any(u < 0):
            raise ValueError("first argument must lie in [0, inf)^d")
        with np.errstate(divide="ignore", invalid="ignore"):
            ulog = np.where(u > 0.0, u * np.log(u / v), 0.0)
        return np.sum(ulog - u + v, axis=-1) / self.eta

    def dual_bregman(self, a, b):
        ga, gb = self.grad_inv(a), self.grad_inv(b)
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return np.sum((ga - gb) / self.eta - (a - b) * gb, axis=-1)


@dataclass(frozen=True)
class PolyPotential:
    """Polynomial mirror map psi(x) = (-eta x)^(-q); minimax-rate bandit potential."""

    eta: float
    q: float
    omega: float = 0.0

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if self.q <= 1:
            raise ValueError("q must exceed 1")

    def grad(self, u):
        u = np.asarray(u, dtype=float)
        _require_interior(u, 0.0)
        return -(u ** (-1.0 / self.q)) / self.eta

    def grad_inv(self, x):
        x = np.asarray(x, dtype=float)
        neg = x < 0.0
        base = np.where(neg, -self.eta * x, 1.0)
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(neg, base ** (-self.q), np.inf)

    def hess_diag(self, u):
        u = np.asarray(u, dtype=float)
        _require_interior(u, 0.0)
        return u ** (-1.0 - 1.0 / self.q) / (self.q * self.eta)

    def dual_feasible(self, x):
        return np.asarray(x) < 0.0

    def step(self, w, est):
        x = self.grad(w) - np.asarray(est, dtype=float)
        if not np.all(x < 0.0):
            raise StepInfeasibleError(
                "dual point left (-inf, 0): estimate too negative for the polynomial map"
            )
        return (-self.eta * x) ** (-self.q)

    def bregman(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        _require_interior(v, 0.0)
        if np.any(u < 0):
            raise ValueError("first argument must lie in [0, inf)^d")
        r = 1.0 - 1.0 / self.q
        term = v**r / (self.q - 1.0) - self.q * u**r / (self.q - 1.0) + u * v ** (-1.0 / self.q)
        return np.sum(term, axis=-1) / self.eta

    def dual_bregman(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if np.any(a >= 0.0) or np.any(b >= 0.0):
            raise ValueError("dual points must be coordinate-wise negative")
        anti = ((-self.eta * a) ** (1.0 - self.q) - (-self.eta * b) ** (1.0 - self.q)) / (
            self.eta * (self.q - 1.0)
        )
        return np.sum(anti - (a - b) * (-self.eta * b) ** (-self.q), axis=-1)


def check_omega_axioms(psi, a: float, omega: float, n_grid: int = 80) -> None:
    """Grid check of the axioms an increasing convex mirror bijection must satisfy.

    psi must be positive, increasing and convex on (-inf, a), tend to ``omega``
    at -inf and to +inf at ``a``, and have an inverse integrable on
    [omega, omega+1].  Raises ValueError on the first violated axiom.
    """
    offsets = np.geomspace(1e-6, 40.0, n_grid)
    if math.isinf(a):
        xs = np.concatenate([-offsets[::-1], offsets])
    else:
        xs = np.concatenate([a - 40.0 - offsets[::-1], a - offsets[::-1]])
    vals = np.array([float(psi(x)) for x in xs])
    if np.any(~np.isfinite(vals)) or np.any(vals <= omega):
        raise ValueError("psi must be finite and exceed omega on its domain")
    if np.any(np.diff(vals) <= 0):
        raise ValueError("psi must be strictly increasing")
    slopes = np.diff(vals) / np.diff(xs)
    if np.any(np.diff(slopes) < -1e-9 * np.maximum(1.0, np.abs(slopes[1:]))):
        raise ValueError("psi must be convex")
    if vals[0] > omega + 0.25 * (vals[-1] - omega):
        raise ValueError("psi does not approach omega at -inf on the test grid")
    if vals[-1] < vals[0] + 1.0:
        raise ValueError("psi does not blow up toward the domain endpoint on the test grid")
    from scipy.integrate import quad

    lo_x = _invert_monotone(psi, omega + 1e-9, a)
    hi_x = _invert_monotone(psi, omega + 1.0, a)
    val, _ = quad(lambda s: abs(_invert_monotone(psi, s, a)), omega + 1e-9, omega + 1.0, limit=200)
    if not np.isfinite(val) or not np.isfinite(lo_x + hi_x):
        raise ValueError("psi inverse is not integrable near omega")


def _invert_monotone(psi, s: float, a: float) -> float:
    """Solve psi(x) = s for increasing psi on (-inf, a) by bracketed bisection."""
    from scipy.optimize import brentq

    if math.isinf(a):
        hi = 1.0
        while psi(hi) < s:
            hi *= 2.0
            if hi > 1e12:
                raise ValueError("failed to bracket psi inverse from above")
    else:
        delta = 1.0
        while psi(a - delta) < s:
            delta /= 2.0
            if delta < 1e-14:
                raise ValueError("failed to bracket psi inverse from above")
        hi = a - delta
    lo = min(hi - 1.0, -1.0)
    while psi(lo) > s:
        lo = lo * 2.0 if lo < 0 else lo - 1.0
        if lo < -1e12:
            raise ValueError("failed to bracket psi inverse from below")
    return float(brentq(lambda x: psi(x) - s, lo, hi, xtol=1e-14, rtol=8.9e-16))


class OmegaPotential:
    """Potential built from a user-supplied mirror bijection psi on (-inf, a).

    Gradients invert psi numerically and divergences integrate it with
    adaptive quadrature (absolute tolerance 1e-10), so this class is meant for
    correctness experiments, not hot loops.
    """

    def __init__(self, psi, a: float = math.inf, omega: float = 0.0, check_axioms: bool = True):
        self.psi = psi
        self.a = a
        self.omega = omega
        if check_axioms:
            check_omega_axioms(psi, a, omega)

    def grad(self, u):
        u = np.asarray(u, dtype=float)
        _require_interior(u, self.omega)
        return np.vectorize(lambda s: _invert_monotone(self.psi, s, self.a))(u)

    def grad_inv(self, x):
        return np.vectorize(lambda t: float(self.psi(t)))(np.asarray(x, dtype=float))

    def hess_diag(self, u):
        x = self.grad(u)
        h = 1e-6
        dpsi = (self.grad_inv(x + h) - self.grad_inv(x - h)) / (2.0 * h)
        return 1.0 / dpsi

    def dual_feasible(self, x):
        return np.asarray(x) < self.a

    def step(self, w, est):
        x = self.grad(w) - np.asarray(est, dtype=float)
        if not np.all(self.dual_feasible(x)):
            raise StepInfeasibleError("dual point left the domain of psi")
        return self.grad_inv(x)

    def _quad_sum(self, fn, lo, hi):
        from scipy.integrate import quad

        total = 0.0
        for lo_i, hi_i in zip(np.ravel(lo), np.ravel(hi)):
            val, _ = quad(fn, lo_i, hi_i, epsabs=1e-10, limit=200)
            total += val
        return total

    def bregman(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        _require_interior(v, self.omega)
        if u.ndim > 1 or v.ndim > 1:
            raise ValueError("quadrature divergences support single points only")
        gv = self.grad(v)
        total = 0.0
        for u_i, v_i, gv_i in zip(u, v, gv):
            seg = self._quad_sum(lambda s: _invert_monotone(self.psi, s, self.a), v_i, u_i)
            total += seg - (u_i - v_i) * gv_i
        return total

    def dual_bregman(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.ndim > 1 or b.ndim > 1:
            raise ValueError("quadrature divergences support single points only")
        total = 0.0
        for a_i, b_i in zip(a, b):
            seg = self._quad_sum(lambda s: float(self.psi(s)), b_i, a_i)
            total += seg - (a_i - b_i) * float(self.psi(b_i))
        return total


def parse_potential(spec: str, *, d: int | None = None, n: int | None = None, k: int | None = None):
    """Potential from a spec string: ``negentropy:eta=<float|auto:rule>`` or
    ``poly:eta=<float|auto:rule>,q=<float>``.

    ``auto`` learning rates need the game context (d, n, and k for the
    symmetric-set rules) to resolve.
    """
    kind, _, body = spec.partition(":")
    kv = {}
    for item in body.split(","):
        if item:
            key, _, val = item.partition("=")
            kv[key.strip()] = val.strip()
    if kind not in ("negentropy", "poly"):
        raise ValueError(f"unknown potential spec {spec!r}")
    q = float(kv["q"]) if "q" in kv else None
    raw = kv.get("eta", "")
    if raw.startswith("auto"):
        rule = raw.partition(":")[2]
        if not rule:
            raise ValueError("eta=auto needs a rule, e.g. eta=auto:thm4")
        if d is None or n is None:
            raise ValueError("resolving eta=auto needs the game context d and n")
        from .forecasters import auto_eta

        eta = auto_eta(rule, d=d, n=n, k=k, q=q)
    else:
        eta = float(raw)
    if kind == "negentropy":
        return NegEntropy(eta=eta)
    if q is None:
        raise ValueError("poly potential needs q=<float>")
    return PolyPotential(eta=eta, q=q)
