"""Trails and persistent Cheeger constants for graph pairs.

A trail is a walk whose edges are pairwise distinct; vertices may repeat,
so back-and-forth trails through a shared vertex are included. Counting is
exponential in the number of edges, so everything here is guarded.

Counts use a memoized recursion over (current vertex, set of used edges).
The continuation count from such a state does not depend on where the
trail started, so one table serves all start vertices.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .complex import SimplicialComplex, SimplicialPair
from .linalg import DEFAULT_TOL, Tolerances
from .persistent import persistent_laplacian_schur

__all__ = [
    "GuardExceeded",
    "MAX_EDGES",
    "MAX_CUT_VERTICES",
    "TrailSet",
    "enumerate_trails",
    "trail_count_matrix",
    "strong_trail_weights",
    "persistent_cheeger",
    "strong_persistent_cheeger",
    "cheeger_constant",
    "cheeger_report",
]

MAX_EDGES = 16
MAX_CUT_VERTICES = 10


class GuardExceeded(ValueError):
    """Input too large for exhaustive enumeration."""


@dataclass(frozen=True)
class TrailSet:
    source: frozenset
    target: frozenset
    trails: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.trails)

    def lengths(self) -> list[int]:
        return [len(p) - 1 for p in self.trails]

    def reciprocal_length_sum(self) -> float:
        return sum(1.0 / n for n in self.lengths() if n > 0)


class _Graph:
    def __init__(self, L: SimplicialComplex):
        if L.dim > 1:
            raise ValueError("expected a graph (dimension <= 1)")
        if L.n(1) > MAX_EDGES:
            raise GuardExceeded(f"{L.n(1)} edges exceeds the enumeration guard of {MAX_EDGES}")
        self.vertices = L.vertices
        self.pos = {v: i for i, v in enumerate(self.vertices)}
        self.adj: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        for e, (a, b) in enumerate(L.level(1)):
            i, j = self.pos[a], self.pos[b]
            self.adj[i].append((j, e))
            self.adj[j].append((i, e))
        for nbrs in self.adj:
            nbrs.sort()
        self.n_edges = L.n(1)


def _vertex_set(L: SimplicialComplex, X) -> frozenset:
    X = frozenset(X)
    if not X:
        raise ValueError("vertex sets must be non-empty")
    missing = X - set(L.vertices)
    if missing:
        raise ValueError(f"vertices {sorted(missing)} not in the graph")
    return X


def enumerate_trails(L: SimplicialComplex, A, B, strong: bool = False) -> TrailSet:
    """All trails from A to B, depth-first with neighbours in vertex order.

    Length-0 trails are listed for vertices in both A and B. With
    ``strong=True`` interior vertices must avoid ``A | B`` and length-0
    trails are dropped.
    """
    G = _Graph(L)
    A, B = _vertex_set(L, A), _vertex_set(L, B)
    stop = {G.pos[v] for v in A | B} if strong else set()
    targets = {G.pos[v] for v in B}
    out = []

    def walk(path, used):
        v = path[-1]
        if v in targets and (not strong or len(path) > 1):
            out.append(tuple(G.vertices[i] for i in path))
        if strong and len(path) > 1 and v in stop:
            return
        for u, e in G.adj[v]:
            if not used >> e & 1:
                path.append(u)
                walk(path, used | 1 << e)
                path.pop()

    for a in sorted(A):
        walk([G.pos[a]], 0)
    return TrailSet(A, B, tuple(out))


def trail_count_matrix(L: SimplicialComplex) -> tuple[tuple[int, ...], np.ndarray]:
    """``N[i, j]`` = number of trails from vertex i to vertex j (length 0 included).

    Rows and columns follow the sorted vertex order.
    """
    _Graph(L)
    verts, edges = tuple(sorted(L.vertices)), tuple(sorted(L.level(1)))
    return verts, np.array(_trail_counts(verts, edges), dtype=np.int64)


@lru_cache(maxsize=512)
def _trail_counts(vertices: tuple, edges: tuple) -> tuple[tuple[int, ...], ...]:
    # cached per graph: Cheeger sweeps revisit one L with many vertex subsets
    G = _Graph(SimplicialComplex.from_simplices([(v,) for v in vertices] + list(edges)))
    n = len(G.vertices)

    @lru_cache(maxsize=None)
    def cont(v: int, used: int) -> tuple[int, ...]:
        acc = [0] * n
        acc[v] = 1
        for u, e in G.adj[v]:
            if not used >> e & 1:
                for k, c in enumerate(cont(u, used | 1 << e)):
                    acc[k] += c
        return tuple(acc)

    return tuple(cont(i, 0) for i in range(n))


def strong_trail_weights(L: SimplicialComplex, VK) -> tuple[tuple[int, ...], np.ndarray]:
    """``S[i, j]`` = sum of 1/length over trails i -> j with interior outside ``VK``.

    Rows and columns follow the sorted order of ``VK``.
    """
    G = _Graph(L)
    VK = sorted(_vertex_set(L, VK))
    stop = frozenset(G.pos[v] for v in VK)
    col = {G.pos[v]: k for k, v in enumerate(VK)}
    m, E = len(VK), G.n_edges

    @lru_cache(maxsize=None)
    def cont(v: int, used: int) -> np.ndarray:
        # counts[k, l]: continuations ending at the k-th vertex of VK after l more edges
        acc = np.zeros((m, E + 1), dtype=np.int64)
        if v in stop:
            acc[col[v], 0] = 1
            return acc
        for u, e in G.adj[v]:
            if not used >> e & 1:
                acc[:, 1:] += cont(u, used | 1 << e)[:, :-1]
        return acc

    S = np.zeros((m, m))
    recip = np.array([0.0] + [1.0 / l for l in range(1, E + 1)])
    for a in VK:
        i = G.pos[a]
        for u, e in G.adj[i]:
            counts = np.zeros((m, E + 1), dtype=np.int64)
            counts[:, 1:] = cont(u, 1 << e)[:, :-1]
            S[col[i]] += counts @ recip
    return tuple(VK), S


def _check_graph_pair(pair: SimplicialPair) -> list[int]:
    K, L = pair.K, pair.L
    if K.dim > 1 or L.dim > 1:
        raise ValueError("Cheeger constants need a graph pair")
    if not L.has_unit_weights():
        raise ValueError("Cheeger constants are defined for unweighted graphs")
    VK = list(K.vertices)
    if len(VK) < 2:
        raise ValueError("K needs at least two vertices")
    if len(VK) > MAX_CUT_VERTICES:
        raise GuardExceeded(f"|V_K| = {len(VK)} exceeds the subset guard of {MAX_CUT_VERTICES}")
    return VK


def _cuts(m: int):
    idx = range(m)
    for r in range(1, m):
        for A in combinations(idx, r):
            yield list(A), [i for i in idx if i not in A]


def _min_cut_ratio(W: np.ndarray) -> float:
    m = W.shape[0]
    return min(m * W[np.ix_(A, B)].sum() / (len(A) * len(B)) for A, B in _cuts(m))


def persistent_cheeger(pair: SimplicialPair) -> float:
    """Minimum over cuts of V_K of ``|V_K| |P_L(A, V_K - A)| / (|A| |V_K - A|)``."""
    VK = _check_graph_pair(pair)
    verts, N = trail_count_matrix(pair.L)
    pos = {v: i for i, v in enumerate(verts)}
    idx = [pos[v] for v in VK]
    return float(_min_cut_ratio(N[np.ix_(idx, idx)].astype(float)))


def strong_persistent_cheeger(pair: SimplicialPair) -> float:
    """Same minimum with trails whose interior avoids V_K, weighted by 1/length."""
    VK = _check_graph_pair(pair)
    _, S = strong_trail_weights(pair.L, VK)
    return float(_min_cut_ratio(S))


def cheeger_constant(K: SimplicialComplex) -> float:
    """Classical cut-based Cheeger constant of a graph."""
    if K.dim > 1:
        raise ValueError("expected a graph")
    V = list(K.vertices)
    if len(V) < 2:
        raise ValueError("need at least two vertices")
    if len(V) > MAX_CUT_VERTICES:
        raise GuardExceeded(f"{len(V)} vertices exceeds the subset guard of {MAX_CUT_VERTICES}")
    pos = {v: i for i, v in enumerate(V)}
    W = np.zeros((len(V), len(V)))
    for a, b in K.level(1):
        W[pos[a], pos[b]] = W[pos[b], pos[a]] = 1.0
    return float(_min_cut_ratio(W))


def cheeger_report(pair: SimplicialPair, atol: float = 1e-8,
                   tol: Tolerances = DEFAULT_TOL) -> dict:
    """Second persistent eigenvalue against both Cheeger constants.

    ``conjecture_holds`` compares against the strong constant and is
    informational only.
    """
    _check_graph_pair(pair)
    M = persistent_laplacian_schur(pair, 0, tol).full
    lam2 = float(np.linalg.eigvalsh((M + M.T) / 2)[1])
    h = persistent_cheeger(pair)
    h_s = strong_persistent_cheeger(pair)
    return {
        "lambda_0_2": lam2,
        "h": h,
        "h_s": h_s,
        "inequality_holds": bool(lam2 <= h + atol),
        "conjecture_holds": bool(lam2 <= h_s + atol),
    }
