"""Independent reference computations for the test-suite.

Nothing here imports the numerical kernels under test. Boundary matrices are
rebuilt from vertex lists, ranks and kernels are exact (sympy rationals),
and homology goes through the Smith normal form over the integers.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import networkx as nx
import numpy as np
import sympy
from sympy.matrices.normalforms import smith_normal_form


def boundary_int(rows, cols) -> sympy.Matrix:
    """Signed incidence of sorted simplices: facet omitting position i gets (-1)^i."""
    pos = {tuple(r): i for i, r in enumerate(rows)}
    M = sympy.zeros(len(rows), len(cols))
    for j, s in enumerate(cols):
        s = tuple(s)
        if len(s) == 1:
            continue
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            M[pos[f], j] = (-1) ** i
    return M


def levels_of(simplices) -> list[list[tuple]]:
    """Face closure, split by dimension, each level sorted."""
    simplices = {f for s in simplices for r in range(1, len(s) + 1)
                 for f in combinations(sorted(s), r)}
    dim = max((len(s) for s in simplices), default=0) - 1
    return [sorted(s for s in simplices if len(s) == q + 1) for q in range(dim + 1)]


def _rank_snf(M: sympy.Matrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    S = smith_normal_form(M, domain=sympy.ZZ)
    return sum(1 for i in range(min(S.rows, S.cols)) if S[i, i] != 0)


def snf_betti_numbers(simplices) -> list[int]:
    """Betti numbers over the rationals via integer Smith normal forms."""
    lv = levels_of(simplices)
    ranks = [0] + [_rank_snf(boundary_int(lv[q - 1], lv[q])) for q in range(1, len(lv))] + [0]
    return [len(lv[q]) - ranks[q] - ranks[q + 1] for q in range(len(lv))]


def exact_rank(M) -> int:
    A = sympy.Matrix(M)
    if A.rows == 0 or A.cols == 0:
        return 0
    return A.rank()


def exact_persistent_betti(K_levels, L_levels, q: int) -> int:
    """dim of (cycles of K) + (boundaries of L) minus dim (boundaries of L), exactly."""
    if q >= len(K_levels) or not K_levels[q]:
        return 0
    nK, nL = len(K_levels[q]), len(L_levels[q])
    if q == 0:
        Z = sympy.eye(nK)
    else:
        null = boundary_int(K_levels[q - 1], K_levels[q]).nullspace()
        Z = sympy.Matrix.hstack(*null) if null else sympy.zeros(nK, 0)
    Zpad = sympy.zeros(nL, Z.cols)
    pos = {s: i for i, s in enumerate(L_levels[q])}
    for i, s in enumerate(K_levels[q]):
        Zpad[pos[s], :] = Z[i, :]
    B = boundary_int(L_levels[q], L_levels[q + 1]) if q + 1 < len(L_levels) else sympy.zeros(nL, 0)
    return exact_rank(sympy.Matrix.hstack(Zpad, B)) - exact_rank(B)


def _rat(x: float) -> sympy.Rational:
    return sympy.Rational(Fraction(x))


def exact_persistent_up(K_levels, L_levels, q: int, weights=None) -> np.ndarray:
    """Up persistent Laplacian from its definition, in exact arithmetic.

    Orders are taken as given; ``K_levels[q]`` must be a prefix of
    ``L_levels[q]``. Weighted inner products use ``<s, s> = 1 / w(s)``.
    """
    w = weights or {}
    nK = len(K_levels[q]) if q < len(K_levels) else 0
    if q + 1 >= len(L_levels) or not L_levels[q + 1] or nK == 0:
        return np.zeros((nK, nK))
    B = boundary_int(L_levels[q], L_levels[q + 1])
    outside = B[nK:, :]
    if outside.rows == 0:
        null = [sympy.eye(B.cols)[:, j] for j in range(B.cols)]
    else:
        null = outside.nullspace()
    if not null:
        return np.zeros((nK, nK))
    Z = sympy.Matrix.hstack(*null)
    Winv_up = sympy.diag(*[1 / _rat(w.get(s, 1.0)) for s in L_levels[q + 1]])
    Winv_q = sympy.diag(*[1 / _rat(w.get(s, 1.0)) for s in K_levels[q]])
    BLK = B[:nK, :] * Z
    M = BLK * (Z.T * Winv_up * Z).inv() * BLK.T * Winv_q
    return np.array(M.evalf(30).tolist(), dtype=float)


def graph_laplacian(vertices, edges, weights=None) -> np.ndarray:
    G = nx.Graph()
    G.add_nodes_from(vertices)
    for e in edges:
        G.add_edge(*e, weight=(weights or {}).get(tuple(e), 1.0))
    return nx.laplacian_matrix(G, nodelist=list(vertices), weight="weight").toarray().astype(float)


def components_touched(K_vertices, L_vertices, L_edges) -> int:
    G = nx.Graph()
    G.add_nodes_from(L_vertices)
    G.add_edges_from(L_edges)
    return sum(1 for comp in nx.connected_components(G) if comp & set(K_vertices))


def resistance_pinv(vertices, edges, v, w, weights=None) -> float:
    """Resistance from the Moore-Penrose inverse of the networkx Laplacian."""
    Lap = graph_laplacian(vertices, edges, weights)
    pos = {x: i for i, x in enumerate(vertices)}
    d = np.zeros(len(vertices))
    d[pos[v]], d[pos[w]] = -1.0, 1.0
    return float(d @ np.linalg.pinv(Lap) @ d)


def series(*rs) -> float:
    return float(sum(rs))


def parallel(*rs) -> float:
    return 1.0 / sum(1.0 / r for r in rs)


def brute_trails(edges, A, B) -> int:
    """Count edge-distinct walks from A to B by listing edge sequences."""
    adj: dict = {}
    for k, (a, b) in enumerate(edges):
        adj.setdefault(a, []).append((b, k))
        adj.setdefault(b, []).append((a, k))
    count = 0
    stack = [(a, frozenset()) for a in A]
    while stack:
        v, used = stack.pop()
        if v in B:
            count += 1
        for u, k in adj.get(v, []):
            if k not in used:
                stack.append((u, used | {k}))
    return count


def classical_cheeger(vertices, edges) -> float:
    V = list(vertices)
    best = np.inf
    for r in range(1, len(V)):
        for A in combinations(V, r):
            A = set(A)
            cut = sum(1 for a, b in edges if (a in A) != (b in A))
            best = min(best, len(V) * cut / (len(A) * (len(V) - len(A))))
    return float(best)
