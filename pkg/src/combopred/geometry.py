"""Hull machinery: Bregman projections, vertex decompositions, pinv, spanners.

The generic projection solver is away-step Frank-Wolfe over the explicit
vertex list; its active set doubles as the vertex distribution certifying
hull membership.  Two structured hull families get exact fast paths usable in
vectorised (batched-over-repetitions) form:

* ``("sum_k", k)`` — the complete k-subset hull {w in [0,1]^d : sum w = k};
  the projection is w_i = min(1, psi(grad_i - lambda)) with a single scalar
  dual variable found by bisection, and the decomposition is greedy peeling
  of top-k vertices.
* ``("blocks", ...)`` — one-hot choice per coordinate block (the simplex,
  products of two-expert games); the projection solves one normalisation
  constant per block and the decomposition couples all blocks through a
  single shared uniform level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .action_sets import ActionSet
from .errors import ConvergenceError, InfeasibilityError
from .potentials import BOUNDARY_CLAMP

_BISECT_ITERS = 90


@dataclass(frozen=True)
class VertexDistribution:
    """Probabilities over vertex rows of an action set, with their mean point."""

    indices: np.ndarray
    probs: np.ndarray
    vertices: np.ndarray

    def mean(self) -> np.ndarray:
        return self.probs @ self.vertices


@dataclass(frozen=True)
class Projection:
    """Result of a Bregman projection: the point and a certifying distribution."""

    w: np.ndarray
    distribution: VertexDistribution
    gap: float
    iterations: int


# ---------------------------------------------------------------------------
# batched structured solvers
# ---------------------------------------------------------------------------


def _solve_sum_constraint(potential, X, k: float, cap: bool) -> np.ndarray:
    """Dual variables lam (one per row) with sum_j clip(psi(X_j - lam)) = k.

    X holds dual points row-wise; the row sums of psi(X - lam) (capped at 1
    when ``cap``) are decreasing in lam, so plain bisection converges from a
    bracket granted by monotonicity of the mirror map.
    """
    s = X.shape[-1]
    offset = float(potential.grad(np.array([k / s]))[0])
    lo = X.min(axis=-1) - offset - 1.0
    hi = X.max(axis=-1) - offset + 1.0
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        w = potential.grad_inv(X - mid[..., None])
        if cap:
            w = np.minimum(w, 1.0)
        too_big = w.sum(axis=-1) > k
        lo = np.where(too_big, mid, lo)
        hi = np.where(too_big, hi, mid)
    return 0.5 * (lo + hi)


class _SumKSolver:
    """Projection/decomposition on the complete k-subset hull, batched."""

    def __init__(self, d: int, k: int):
        self.d = d
        self.k = k

    def project(self, potential, wp: np.ndarray) -> np.ndarray:
        wp = np.maximum(wp, BOUNDARY_CLAMP)
        if self.k == self.d:
            return np.ones_like(wp)
        from .potentials import NegEntropy

        if isinstance(potential, NegEntropy):
            scale = self.k / wp.sum(axis=-1, keepdims=True)
            w = wp * scale
            if np.all(w <= 1.0):
                return w
        X = potential.grad(wp)
        lam = _solve_sum_constraint(potential, X, float(self.k), cap=True)
        return np.minimum(potential.grad_inv(X - lam[..., None]), 1.0)

    def decompose(self, W: np.ndarray):
        """Greedy peeling: repeatedly split off the top-k vertex.

        Each step pins at least one coordinate to {0, 1}, so at most d+1
        vertices are emitted.  Returns padded (R, d+1, d) atoms and (R, d+1)
        probabilities summing to one.
        """
        W = np.atleast_2d(W)
        R, d = W.shape
        k = self.k
        w = W.copy()
        atoms = np.zeros((R, d + 1, d))
        probs = np.zeros((R, d + 1))
        scale = np.ones(R)
        active = np.ones(R, dtype=bool)
        for a in range(d + 1):
            w = np.where(w > 1.0 - 1e-11, 1.0, np.where(w < 1e-11, 0.0, w))
            order = np.argsort(-w, axis=1, kind="stable")[:, :k]
            v = np.zeros((R, d))
            np.put_along_axis(v, order, 1.0, axis=1)
            sel = v == 1.0
            theta_in = np.where(sel, w, np.inf).min(axis=1)
            theta_out = np.where(sel, np.inf, 1.0 - w).min(axis=1) if k < d else np.full(R, np.inf)
            theta = np.clip(np.minimum(theta_in, theta_out), 0.0, 1.0)
            done = theta >= 1.0 - 1e-12
            theta = np.where(done, 1.0, theta)
            probs[:, a] = np.where(active, scale * theta, 0.0)
            atoms[:, a] = np.where(active[:, None], v, 0.0)
            cont = active & ~done
            if not cont.any():
                break
            denom = np.where(cont, 1.0 - theta, 1.0)
            w = np.where(cont[:, None], (w - theta[:, None] * v) / denom[:, None], w)
            w = np.clip(w, 0.0, 1.0)
            scale = np.where(cont, scale * denom, scale)
            active = cont
        return atoms, probs


class _BlockSolver:
    """Projection/decomposition on products of one-hot blocks, batched."""

    def __init__(self, d: int, blocks):
        self.d = d
        self.blocks = [np.array(b, dtype=int) for b in blocks]

    def project(self, potential, wp: np.ndarray) -> np.ndarray:
        wp = np.maximum(wp, BOUNDARY_CLAMP)
        from .potentials import NegEntropy

        out = np.empty_like(wp)
        if isinstance(potential, NegEntropy):
            for b in self.blocks:
                out[..., b] = wp[..., b] / wp[..., b].sum(axis=-1, keepdims=True)
            return out
        X = potential.grad(wp)
        for b in self.blocks:
            lam = _solve_sum_constraint(potential, X[..., b], 1.0, cap=False)
            out[..., b] = potential.grad_inv(X[..., b] - lam[..., None])
        return out

    def decompose(self, W: np.ndarray):
        """Couple all blocks through one shared uniform level.

        The unit interval is cut at every block's internal CDF breakpoint;
        each segment selects one choice per block, giving at most
        d - #blocks + 1 atoms whose mixture reproduces W coordinate-wise.
        """
        W = np.atleast_2d(W)
        R, d = W.shape
        cuts = []
        for b in self.blocks:
            cs = np.cumsum(W[:, b], axis=1)
            cuts.append(cs[:, :-1])
        bps = np.sort(np.concatenate(cuts, axis=1), axis=1) if cuts else np.zeros((R, 0))
        edges = np.concatenate([np.zeros((R, 1)), np.clip(bps, 0.0, 1.0), np.ones((R, 1))], axis=1)
        lo, hi = edges[:, :-1], edges[:, 1:]
        probs = np.clip(hi - lo, 0.0, None)
        mids = 0.5 * (lo + hi)
        A = probs.shape[1]
        atoms = np.zeros((R, A, d))
        for b in self.blocks:
            cs = np.cumsum(W[:, b], axis=1)[:, :-1]
            choice = (cs[:, None, :] <= mids[:, :, None]).sum(axis=2)
            coords = b[choice]
            np.put_along_axis(atoms, coords[:, :, None], 1.0, axis=2)
        return atoms, probs


class _GenericSolver:
    """Fallback: per-row Frank-Wolfe over the vertex list."""

    def __init__(self, aset: ActionSet, tol: float = 1e-9, max_iter: int = 10_000):
        self.aset = aset
        self.tol = tol
        self.max_iter = max_iter
        self._warm = None

    def project(self, potential, wp: np.ndarray) -> np.ndarray:
        wp = np.atleast_2d(wp)
        out = np.empty_like(wp)
        warms = self._warm if self._warm is not None else [None] * wp.shape[0]
        new_warm = []
        atoms_all, probs_all = [], []
        for r in range(wp.shape[0]):
            w, lam, _, _ = _fw_project(
                potential, self.aset.vertices, wp[r],
                tol=self.tol, max_iter=self.max_iter, warm=warms[r],
            )
            out[r] = w
            new_warm.append(lam.copy())
            keep = np.flatnonzero(lam > 1e-14)
            atoms_all.append(keep)
            probs_all.append(lam[keep])
        self._warm = new_warm
        self._last = (atoms_all, probs_all)
        return out

    def decompose(self, W: np.ndarray):
        W = np.atleast_2d(W)
        R, d = W.shape
        A = d + 1
        atoms = np.zeros((R, A, d))
        probs = np.zeros((R, A))
        cached = getattr(self, "_last", None)
        for r in range(R):
            if cached is not None:
                idx, p = cached[0][r], cached[1][r]
                va, pa = reduce_support(self.aset.vertices[idx], p / p.sum(), max_atoms=A)
            else:
                dist = caratheodory_decompose(self.aset, W[r])
                va, pa = dist.vertices, dist.probs
            atoms[r, : len(pa)] = va
            probs[r, : len(pa)] = pa
        return atoms, probs


def hull_solver(aset: ActionSet, tol: float = 1e-9, max_iter: int = 10_000):
    """Solver for Conv(S): structured fast path when recognised, else Frank-Wolfe."""
    if aset.structure and aset.structure[0] == "sum_k":
        return _SumKSolver(aset.d, aset.structure[1])
    if aset.structure and aset.structure[0] == "blocks":
        return _BlockSolver(aset.d, aset.structure[1])
    return _GenericSolver(aset, tol=tol, max_iter=max_iter)


# ---------------------------------------------------------------------------
# Frank-Wolfe with away steps
# ---------------------------------------------------------------------------


def _dual_linesearch(potential, gwp, w, direction, gamma_max, iters=70):
    """Exact line search on gamma -> D_F(w + gamma dir, w'); derivative bisection."""

    def dphi(g):
        pt = np.maximum(w + g * direction, BOUNDARY_CLAMP)
        return float(direction @ (potential.grad(pt) - gwp))

    if dphi(gamma_max) <= 0.0:
        return gamma_max
    lo, hi = 0.0, gamma_max
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if dphi(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


def _fw_project(potential, vertices, w_prime, tol=1e-9, max_iter=10_000, warm=None):
    """Away-step Frank-Wolfe minimisation of w -> D_F(w, w') over the hull.

    Returns (w, vertex weights, final gap, iterations).  The weight vector
    over the vertex list is the membership certificate; ties in vertex
    selection break toward the lowest row index.
    """
    m = vertices.shape[0]
    wp = np.maximum(np.asarray(w_prime, dtype=float), BOUNDARY_CLAMP)
    gwp = potential.grad(wp)
    lam = np.full(m, 1.0 / m) if warm is None else np.asarray(warm, dtype=float).copy()
    w = lam @ vertices
    gap = np.inf
    for it in range(max_iter):
        g = potential.grad(np.maximum(w, BOUNDARY_CLAMP)) - gwp
        scores = vertices @ g
        s = int(np.argmin(scores))
        wg = float(w @ g)
        gap = wg - scores[s]
        if gap <= tol:
            return w, lam, gap, it
        act = np.flatnonzero(lam > 1e-15)
        a = int(act[np.argmax(scores[act])])
        away_ok = lam[a] < 1.0 - 1e-12
        if away_ok and (scores[a] - wg) > gap:
            direction = w - vertices[a]
            gamma_max = lam[a] / (1.0 - lam[a])
            gamma = _dual_linesearch(potential, gwp, w, direction, gamma_max)
            lam *= 1.0 + gamma
            lam[a] -= gamma
        else:
            direction = vertices[s] - w
            gamma = _dual_linesearch(potential, gwp, w, direction, 1.0)
            lam *= 1.0 - gamma
            lam[s] += gamma
        lam = np.clip(lam, 0.0, None)
        lam /= lam.sum()
        w = lam @ vertices
    raise ConvergenceError(f"projection gap {gap:.3e} above {tol:.1e} after {max_iter} iterations", gap=gap)


def bregman_project(potential, aset: ActionSet, w_prime, tol=1e-9, max_iter=10_000) -> Projection:
    """Bregman projection of w' onto Conv(S), with a certifying distribution."""
    w_prime = np.asarray(w_prime, dtype=float)
    solver = hull_solver(aset)
    if not isinstance(solver, _GenericSolver):
        w = solver.project(potential, w_prime[None, :])[0]
        atoms, probs = solver.decompose(w[None, :])
        keep = probs[0] > 1e-15
        dist = VertexDistribution(
            indices=aset.index_of(atoms[0][keep]),
            probs=probs[0][keep] / probs[0][keep].sum(),
            vertices=atoms[0][keep],
        )
        return Projection(w=w, distribution=dist, gap=0.0, iterations=0)
    w, lam, gap, it = _fw_project(potential, aset.vertices, w_prime, tol=tol, max_iter=max_iter)
    idx = np.flatnonzero(lam > 1e-14)
    va, pa = reduce_support(aset.vertices[idx], lam[idx] / lam[idx].sum(), max_atoms=aset.d + 1)
    dist = VertexDistribution(indices=aset.index_of(va), probs=pa, vertices=va)
    return Projection(w=w, distribution=dist, gap=gap, iterations=it)


# ---------------------------------------------------------------------------
# hull membership / feasibility by Frank-Wolfe on quadratic objectives
# ---------------------------------------------------------------------------


def _fw_quadratic(vertices, grad_fn, linesearch_fn, f_fn, f_target, max_iter=100_000):
    """Shared away-step FW loop for the quadratic feasibility objectives."""
    m = vertices.shape[0]
    lam = np.full(m, 1.0 / m)
    w = lam @ vertices
    for _ in range(max_iter):
        f = f_fn(w)
        if f <= f_target:
            return w, lam, 0.0
        g = grad_fn(w)
        scores = vertices @ g
        s = int(np.argmin(scores))
        wg = float(w @ g)
        gap = wg - scores[s]
        lower_bound = f - gap
        if gap <= 1e-18:
            return w, lam, lower_bound
        act = np.flatnonzero(lam > 1e-15)
        a = int(act[np.argmax(scores[act])])
        if lam[a] < 1.0 - 1e-12 and (scores[a] - wg) > gap:
            direction = w - vertices[a]
            gamma_max = lam[a] / (1.0 - lam[a])
            gamma = linesearch_fn(w, direction, gamma_max)
            lam *= 1.0 + gamma
            lam[a] -= gamma
        else:
            direction = vertices[s] - w
            gamma = linesearch_fn(w, direction, 1.0)
            lam *= 1.0 - gamma
            lam[s] += gamma
        lam = np.clip(lam, 0.0, None)
        lam /= lam.sum()
        w = lam @ vertices
    return w, lam, max(f_fn(w) - gap, 0.0)


def caratheodory_decompose(aset: ActionSet, w, tol=1e-8) -> VertexDistribution:
    """Distribution over at most d+1 vertices whose mean is w.

    Runs quadratic-objective Frank-Wolfe toward w and reduces the active set
    by null-space elimination.  Points farther than ``tol`` from the hull
    raise :class:`InfeasibilityError` carrying a separating direction.
    """
    w = np.asarray(w, dtype=float)
    if np.all((w == 0.0) | (w == 1.0)):
        idx = aset.index_of(w[None, :])
        if idx[0] >= 0:
            return VertexDistribution(
                indices=np.array([int(idx[0])]), probs=np.array([1.0]), vertices=w[None, :].copy()
            )
    solver = hull_solver(aset)
    if not isinstance(solver, _GenericSolver):
        feasible = _structured_membership(aset, w, tol)
        if not feasible:
            raise InfeasibilityError(
                "point violates the hull's defining constraints",
                certificate=_structured_certificate(aset, w),
            )
        atoms, probs = solver.decompose(w[None, :])
        keep = probs[0] > 1e-15
        va, pa = atoms[0][keep], probs[0][keep]
        if np.max(np.abs(pa @ va - w)) > tol:
            raise InfeasibilityError("structured decomposition failed to reproduce the point", None)
        return VertexDistribution(indices=aset.index_of(va), probs=pa / pa.sum(), vertices=va)

    target = w

    def f_fn(pt):
        return 0.5 * float(np.sum((pt - target) ** 2))

    def grad_fn(pt):
        return pt - target

    def linesearch(pt, direction, gmax):
        denom = float(direction @ direction)
        if denom <= 0.0:
            return 0.0
        return float(np.clip(-((pt - target) @ direction) / denom, 0.0, gmax))

    w_hat, lam, lower_bound = _fw_quadratic(
        aset.vertices, grad_fn, linesearch, f_fn, f_target=0.5 * (0.1 * tol) ** 2
    )
    if np.max(np.abs(w_hat - target)) > tol:
        g = w_hat - target
        margin = float((aset.vertices @ g).min() - g @ target)
        raise InfeasibilityError(
            f"point is {np.max(np.abs(w_hat - target)):.2e} away from the hull "
            f"(> {tol:.1e}); certified lower bound {lower_bound:.2e}",
            certificate=(g, margin),
        )
    keep = np.flatnonzero(lam > 1e-14)
    va, pa = reduce_support(aset.vertices[keep], lam[keep] / lam[keep].sum(), max_atoms=aset.d + 1)
    return VertexDistribution(indices=aset.index_of(va), probs=pa, vertices=va)


def _structured_certificate(aset: ActionSet, w):
    """Separating direction g with g . v >= g . w + margin for all vertices."""
    d = aset.d
    if np.min(w) < 0.0:
        i = int(np.argmin(w))
        g = np.zeros(d)
        g[i] = 1.0
        return g, float(-w[i])
    if np.max(w) > 1.0:
        i = int(np.argmax(w))
        g = np.zeros(d)
        g[i] = -1.0
        return g, float(w[i] - 1.0)
    groups = [np.arange(d)] if aset.structure[0] == "sum_k" else [np.array(b) for b in aset.structure[1]]
    targets = [aset.structure[1]] if aset.structure[0] == "sum_k" else [1.0] * len(groups)
    for coords, target in zip(groups, targets):
        total = float(w[coords].sum())
        if abs(total - target) > 1e-12:
            g = np.zeros(d)
            g[coords] = -1.0 if total > target else 1.0
            return g, abs(total - target)
    return np.zeros(d), 0.0


def _structured_membership(aset: ActionSet, w, tol) -> bool:
    kind = aset.structure[0]
    if np.any(w < -tol) or np.any(w > 1.0 + tol):
        return False
    if kind == "sum_k":
        return abs(w.sum() - aset.structure[1]) <= tol * aset.d
    for b in aset.structure[1]:
        if abs(w[list(b)].sum() - 1.0) > tol * aset.d:
            return False
    return True


def hull_point_above(aset: ActionSet, lo: float, tol: float = 1e-8):
    """Point of Conv(S) with all coordinates >= lo, or None when none exists."""

    def f_fn(pt):
        return 0.5 * float(np.sum(np.maximum(lo - pt, 0.0) ** 2))

    def grad_fn(pt):
        return -np.maximum(lo - pt, 0.0)

    def linesearch(pt, direction, gmax):
        def dphi(g):
            return float(-direction @ np.maximum(lo - pt - g * direction, 0.0))

        if dphi(gmax) <= 0.0:
            return gmax
        a, b = 0.0, gmax
        for _ in range(60):
            mid = 0.5 * (a + b)
            if dphi(mid) <= 0.0:
                a = mid
            else:
                b = mid
        return a

    w_hat, _, lower_bound = _fw_quadratic(
        aset.vertices, grad_fn, linesearch, f_fn, f_target=0.5 * (0.1 * tol) ** 2
    )
    if np.min(w_hat) >= lo - tol:
        return w_hat
    if lower_bound > 0.5 * tol**2:
        return None
    return None


def reduce_support(atoms: np.ndarray, probs: np.ndarray, max_atoms: int):
    """Shrink a mixture to at most ``max_atoms`` atoms, preserving the mean.

    Standard null-space elimination: any surplus atom set admits a signed
    combination with zero mean and zero total mass; shifting along it zeroes
    one probability per pass.
    """
    atoms = np.asarray(atoms, dtype=float)
    probs = np.asarray(probs, dtype=float).copy()
    while probs.size > max_atoms:
        M = np.vstack([atoms.T, np.ones(probs.size)])
        _, _, vt = np.linalg.svd(M)
        gamma = vt[-1]
        if gamma.max() <= 0.0:
            gamma = -gamma
        pos = gamma > 1e-14
        if not pos.any():
            break
        ratios = np.where(pos, probs / np.where(pos, gamma, 1.0), np.inf)
        j = int(np.argmin(ratios))
        probs = probs - ratios[j] * gamma
        probs[j] = 0.0
        keep = probs > 1e-15
        keep[j] = False
        atoms, probs = atoms[keep], probs[keep]
    probs = np.clip(probs, 0.0, None)
    return atoms, probs / probs.sum()


# ---------------------------------------------------------------------------
# PSD pseudoinverse and barycentric spanners
# ---------------------------------------------------------------------------


def pinv_psd(M, tol: float = 1e-10, validate: bool = True) -> np.ndarray:
    """Moore-Penrose pseudoinverse of a symmetric PSD matrix (batched OK).

    Uses the symmetric eigendecomposition and zeroes eigenvalues below
    ``tol`` times the largest one.  Asymmetric or indefinite inputs raise.
    """
    M = np.asarray(M, dtype=float)
    Mt = np.swapaxes(M, -1, -2)
    if validate and np.max(np.abs(M - Mt)) > 1e-10:
        raise ValueError("matrix is not symmetric within 1e-10")
    evals, evecs = np.linalg.eigh(0.5 * (M + Mt))
    if validate and np.min(evals) < -1e-10:
        raise ValueError("matrix has an eigenvalue below -1e-10; not PSD")
    lam_max = np.clip(evals[..., -1:], 0.0, None)
    inv = np.where(evals > tol * lam_max, 1.0 / np.where(evals > 0, evals, 1.0), 0.0)
    return (evecs * inv[..., None, :]) @ np.swapaxes(evecs, -1, -2)


@dataclass(frozen=True)
class SpannerBasis:
    """Near-maximal-volume vertex basis of span(S) with its two transforms.

    ``t1`` maps a loss vector to its inner products with the basis vertices;
    ``t2`` writes a span vector in basis coordinates (bounded by C in absolute
    value for every vertex of S).  For any v in span, l . v = t1(l) . t2(v).
    """

    indices: np.ndarray
    basis: np.ndarray
    C: float

    def __post_init__(self):
        object.__setattr__(self, "_pinv_bt", np.linalg.pinv(self.basis.T))

    @property
    def m(self) -> int:
        return self.basis.shape[0]

    def t1(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.basis.T

    def t2(self, x, tol: float = 1e-8) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        coeffs = x @ self._pinv_bt.T
        residual = np.max(np.abs(coeffs @ self.basis - x))
        if residual > tol:
            raise ValueError(f"vector is outside span(S): residual {residual:.2e}")
        return coeffs


def barycentric_spanner(aset: ActionSet, C: float = 1.01) -> SpannerBasis:
    """C-approximate maximal-volume basis by determinant-improving swaps.

    Work happens in orthonormal coordinates of span(S).  Phase one greedily
    fills each slot with the determinant-maximising vertex; phase two swaps
    any vertex whose basis coefficient exceeds C in absolute value, which
    multiplies the volume by that coefficient and therefore terminates.
    """
    if C <= 1.0:
        raise ValueError("approximation factor C must exceed 1")
    V = aset.vertices
    u, svals, _ = np.linalg.svd(V.T, full_matrices=False)
    rank = int(np.sum(svals > 1e-10 * svals[0]))
    Q = u[:, :rank]
    X = Q.T @ V.T  # (rank, m) span coordinates of every vertex
    B = np.eye(rank)
    chosen = np.full(rank, -1)
    for j in range(rank):
        coeff = np.linalg.solve(B, X)
        pick = int(np.argmax(np.abs(coeff[j])))
        B[:, j] = X[:, pick]
        chosen[j] = pick
    for _ in range(10_000):
        coeff = np.linalg.solve(B, X)
        worst = np.unravel_index(np.argmax(np.abs(coeff)), coeff.shape)
        if abs(coeff[worst]) <= C:
            break
        j, pick = int(worst[0]), int(worst[1])
        B[:, j] = X[:, pick]
        chosen[j] = pick
    return SpannerBasis(indices=chosen.copy(), basis=V[chosen].copy(), C=C)


def projection_first_order_margin(potential, aset: ActionSet, w_hat, w_prime) -> float:
    """min over vertices v of <gradF(w_hat) - gradF(w'), v - w_hat>; >= -tol at optima."""
    g = potential.grad(np.maximum(w_hat, BOUNDARY_CLAMP)) - potential.grad(
        np.maximum(w_prime, BOUNDARY_CLAMP)
    )
    return float((aset.vertices @ g).min() - w_hat @ g)
