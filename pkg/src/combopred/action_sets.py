"""Combinatorial action sets: finite subsets of {0,1}^d with structured generators.

An :class:`ActionSet` stores its vertices explicitly (lexicographically ordered)
and is the single geometric object every other module consumes.  Generators
exist for the standard families used in the experiments: all k-subsets, paths
of a DAG, the two-interval set on which exponential weights is provably slow,
and products of independent two-expert games.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyActionSetError, EnumerationLimitError

DEFAULT_ENUMERATION_CAP = 100_000


def _row_codes(rows: np.ndarray) -> np.ndarray:
    """Packed byte codes for 0/1 rows, usable as sortable dictionary keys."""
    packed = np.packbits(rows.astype(np.uint8), axis=1)
    return packed.view([("", packed.dtype)] * packed.shape[1]).ravel()


@dataclass(frozen=True)
class ActionSet:
    """A finite set of binary action vectors.

    Attributes
    ----------
    d : ambient dimension.
    vertices : (m, d) float array with entries in {0, 1}, rows distinct and
        sorted lexicographically by coordinate.
    label : free-form tag.
    structure : optional fast-path tag, one of
        ``("sum_k", k)`` — the complete set of L1-norm-k vectors (k=1 is the
        standard simplex), or ``("blocks", ((i, j), ...))`` — one-hot choice
        per coordinate block.  ``None`` means no structure was recognised.
    """

    d: int
    vertices: np.ndarray
    label: str = ""
    structure: tuple | None = None

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] == 0:
            raise EmptyActionSetError("action set must contain at least one vertex")
        if v.shape[1] != self.d:
            raise ValueError(f"vertices have length {v.shape[1]}, expected d={self.d}")
        if not np.all((v == 0.0) | (v == 1.0)):
            raise ValueError("vertex entries must be 0 or 1")
        order = np.lexsort(v.T[::-1])
        v = np.ascontiguousarray(v[order])
        codes = _row_codes(v)
        if np.unique(codes).size != v.shape[0]:
            raise ValueError("vertices must be pairwise distinct")
        if not np.all(v.max(axis=0) == 1.0):
            uncovered = np.flatnonzero(v.max(axis=0) == 0.0)
            raise ValueError(f"coordinates {uncovered.tolist()} are zero on every vertex")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "_codes", codes)
        object.__setattr__(self, "structure", self.structure or _detect_structure(v))

    @property
    def size(self) -> int:
        return self.vertices.shape[0]

    def index_of(self, rows: np.ndarray) -> np.ndarray:
        """Row indices of the given 0/1 vectors; -1 for vectors not in the set."""
        rows = np.atleast_2d(np.asarray(rows))
        codes = _row_codes(rows)
        pos = np.searchsorted(self._codes, codes)
        pos = np.clip(pos, 0, self.size - 1)
        ok = self._codes[pos] == codes
        return np.where(ok, pos, -1)


def _detect_structure(v: np.ndarray) -> tuple | None:
    sums = v.sum(axis=1)
    k = int(sums[0])
    if np.all(sums == k) and v.shape[0] == math.comb(v.shape[1], k):
        return ("sum_k", k)
    return None


@dataclass(frozen=True)
class AlmostSymmetryCertificate:
    """Witness (or absence of one) that a set is almost symmetric of order k."""

    k: int
    witness: np.ndarray | None

    @property
    def is_almost_symmetric(self) -> bool:
        return self.witness is not None


def make_k_subsets(d: int, k: int, cap: int = DEFAULT_ENUMERATION_CAP) -> ActionSet:
    """All binary vectors of length d with exactly k ones."""
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
    count = math.comb(d, k)
    if count > cap:
        raise EnumerationLimitError(f"C({d},{k})={count} exceeds cap {cap}")
    rows = np.zeros((count, d))
    for i, idx in enumerate(itertools.combinations(range(d), k)):
        rows[i, list(idx)] = 1.0
    return ActionSet(d, rows, label=f"ksubsets(d={d},k={k})", structure=("sum_k", k))


def make_simplex(d: int) -> ActionSet:
    """The standard basis (one-hot vectors): the d-armed game."""
    return make_k_subsets(d, 1)


def make_path_dag(
    edges: list[tuple],
    source,
    sink,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> ActionSet:
    """One vertex per source->sink path of a DAG; coordinate i marks edge i.

    ``edges`` is an ordered list of (u, v) pairs; parallel edges are allowed
    and keep separate coordinates.  Raises on cyclic graphs, on graphs without
    any source->sink path, and when the path count exceeds ``cap``.
    """
    import networkx as nx

    g = nx.MultiDiGraph()
    g.add_nodes_from([source, sink])
    for i, (u, w) in enumerate(edges):
        g.add_edge(u, w, key=i)
    if not nx.is_directed_acyclic_graph(g):
        raise ValueError("edge list contains a directed cycle")
    rows = []
    for path in nx.all_simple_edge_paths(g, source, sink):
        row = np.zeros(len(edges))
        for _, _, key in path:
            row[key] = 1.0
        rows.append(row)
        if len(rows) > cap:
            raise EnumerationLimitError(f"path count exceeds cap {cap}")
    if not rows:
        raise EmptyActionSetError(f"no path from {source!r} to {sink!r}")
    return ActionSet(len(edges), np.array(rows), label="paths")


def make_exp2_lowerbound_set(d: int) -> ActionSet:
    """The two-interval set witnessing slowness of exponential weights.

    Requires d divisible by 4.  A vertex picks d/4 of the first d/2
    coordinates, plus exactly one of the two disjoint length-d/4 intervals in
    the second half (the other interval is all-zero).  Cardinality is
    2*C(d/2, d/4).
    """
    if d < 4 or d % 4 != 0:
        raise ValueError(f"d must be a positive multiple of 4, got {d}")
    half, quarter = d // 2, d // 4
    rows = []
    for idx in itertools.combinations(range(half), quarter):
        for interval in (range(half, half + quarter), range(half + quarter, d)):
            row = np.zeros(d)
            row[list(idx)] = 1.0
            row[list(interval)] = 1.0
            rows.append(row)
    return ActionSet(d, np.array(rows), label=f"exp2lb(d={d})")


def make_pair_games_set(d: int, cap: int = DEFAULT_ENUMERATION_CAP) -> ActionSet:
    """Product of d/2 independent two-expert games: v_{2i} + v_{2i+1} = 1."""
    if d < 2 or d % 2 != 0:
        raise ValueError(f"d must be a positive even integer, got {d}")
    pairs = d // 2
    if 2**pairs > cap:
        raise EnumerationLimitError(f"2^{pairs} exceeds cap {cap}")
    rows = np.zeros((2**pairs, d))
    for i, bits in enumerate(itertools.product((0, 1), repeat=pairs)):
        for j, b in enumerate(bits):
            rows[i, 2 * j + b] = 1.0
    blocks = tuple(tuple(range(2 * j, 2 * j + 2)) for j in range(pairs))
    return ActionSet(d, rows, label=f"pairs(d={d})", structure=("blocks", blocks))


def check_almost_symmetric(aset: ActionSet, k: int, tol: float = 1e-8) -> AlmostSymmetryCertificate:
    """Certificate that every vertex has L1 norm <= k and the hull meets [k/2d, 1]^d.

    The witness search is a feasibility program over the hull, solved by the
    same Frank-Wolfe routine as the hull-membership decomposition.  Absence of
    a witness is a valid result (witness=None).
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if aset.vertices.sum(axis=1).max() > k:
        return AlmostSymmetryCertificate(k, None)
    lo = k / (2.0 * aset.d)
    centroid = aset.vertices.mean(axis=0)
    if np.all(centroid >= lo - tol):
        return AlmostSymmetryCertificate(k, centroid)
    from .geometry import hull_point_above

    witness = hull_point_above(aset, lo, tol=tol)
    return AlmostSymmetryCertificate(k, witness)


def load_explicit(path) -> ActionSet:
    """Action set from a text file with one space-separated 0/1 vector per line."""
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([float(x) for x in line.split()])
    if not rows:
        raise EmptyActionSetError(f"no vectors in {path}")
    arr = np.array(rows)
    return ActionSet(arr.shape[1], arr, label=f"explicit:{path}")


def load_path_dag(path, cap: int = DEFAULT_ENUMERATION_CAP) -> ActionSet:
    """DAG file: first line ``source sink``, then one ``u v`` edge per line."""
    lines = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            lines.append(line.split())
    if len(lines) < 2:
        raise ValueError(f"{path}: need a 'source sink' line and at least one edge")
    source, sink = lines[0]
    edges = [(u, v) for u, v in lines[1:]]
    return make_path_dag(edges, source, sink, cap=cap)


def _parse_kv(body: str) -> dict:
    out = {}
    if body:
        for item in body.split(","):
            key, _, val = item.partition("=")
            out[key.strip()] = val.strip()
    return out


def parse_action_set(spec: str, cap: int = DEFAULT_ENUMERATION_CAP) -> ActionSet:
    """Build an action set from a CLI spec string.

    Recognised forms: ``ksubsets:d=8,k=2``, ``paths:<file>``, ``exp2lb:d=8``,
    ``pairs:d=8``, ``explicit:<file>``.
    """
    kind, _, body = spec.partition(":")
    if kind == "ksubsets":
        kv = _parse_kv(body)
        return make_k_subsets(int(kv["d"]), int(kv["k"]), cap=cap)
    if kind == "exp2lb":
        return make_exp2_lowerbound_set(int(_parse_kv(body)["d"]))
    if kind == "pairs":
        return make_pair_games_set(int(_parse_kv(body)["d"]), cap=cap)
    if kind == "paths":
        return load_path_dag(body, cap=cap)
    if kind == "explicit":
        return load_explicit(body)
    raise ValueError(f"unknown action-set spec {spec!r}")
