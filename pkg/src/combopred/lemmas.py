"""Exact numerical verification of the three technical inequalities.

* ``tech1`` — for k >= 1 and 1 <= c <= 2, the weighted central-binomial ratio
  sum_i (1 - i/k) C(k,i)^2 c^i / sum_i C(k,i)^2 c^i is at least 1/3, with
  equality at (k=1, c=2).  Evaluated by exact summation with log-domain
  binomial coefficients.
* ``klbinomials`` — for sums B, B' of n+1 independent Bernoullis differing in
  one parameter (p vs p'), with ell >= n/2 of the shared parameters equal to
  q in {p, p'}: KL(B, B') <= 2 (p'-p)^2 / ((1-p')(n+2) q).  Masses are built
  by convolution in extended precision and the divergence summed exactly.
* ``log4`` — -log x <= -(x-1) + (x-1)^2 / (2 x0) for all x >= x0, x0 in (0,1).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln


def binomial_ratio(k: int, c: float) -> float:
    """sum_i (1 - i/k) C(k,i)^2 c^i / sum_i C(k,i)^2 c^i, exactly in log domain."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    i = np.arange(k + 1)
    logterms = 2.0 * (gammaln(k + 1) - gammaln(i + 1) - gammaln(k - i + 1)) + i * math.log(c)
    terms = np.exp(logterms - logterms.max())
    return float(((1.0 - i / k) * terms).sum() / terms.sum())


def poisson_binomial_pmf(params) -> np.ndarray:
    """Mass function of a sum of independent Bernoullis, in extended precision."""
    pmf = np.array([1.0], dtype=np.longdouble)
    for p in params:
        p = np.longdouble(p)
        nxt = np.zeros(pmf.size + 1, dtype=np.longdouble)
        nxt[: pmf.size] += (1 - p) * pmf
        nxt[1:] += p * pmf
        pmf = nxt
    return pmf


def kl_discrete(p: np.ndarray, q: np.ndarray) -> float:
    """KL divergence of two finitely supported distributions on the same grid."""
    p = np.asarray(p, dtype=np.longdouble)
    q = np.asarray(q, dtype=np.longdouble)
    mask = p > 0
    if np.any(q[mask] <= 0):
        return math.inf
    return float(np.sum(p[mask] * np.log(p[mask] / q[mask])))


def kl_binomials_case(n: int, ell: int, p: float, p_prime: float, q: float, tail: float = 0.5):
    """(KL(B, B'), bound) for one parameter configuration.

    B sums Bernoulli(p) with ell copies of Bernoulli(q) and n-ell copies of
    Bernoulli(tail); B' replaces p by p'.  Requires 1 <= n/2 <= ell <= n and
    q in {p, p'}.
    """
    if not (n >= 1 and n / 2 <= ell <= n):
        raise ValueError("need 1/2 <= n/2 <= ell <= n")
    if q not in (p, p_prime):
        raise ValueError("q must equal p or p'")
    shared = poisson_binomial_pmf([q] * ell + [tail] * (n - ell))
    b = np.convolve(np.array([1 - p, p], dtype=np.longdouble), shared)
    b_prime = np.convolve(np.array([1 - p_prime, p_prime], dtype=np.longdouble), shared)
    bound = 2.0 * (p_prime - p) ** 2 / ((1.0 - p_prime) * (n + 2) * q)
    return kl_discrete(b, b_prime), bound


def log_quad_margin(x: float, x0: float) -> float:
    """Slack of -log x <= -(x-1) + (x-1)^2/(2 x0); nonnegative when it holds."""
    return -(x - 1.0) + (x - 1.0) ** 2 / (2.0 * x0) + math.log(x)
