"""Random instance generators and property checks.

Used by the ``selftest`` command and the test-suite. Generators take a
``numpy.random.Generator`` so runs are reproducible from a seed.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np
import scipy.linalg
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .complex import Filtration, SimplicialComplex, SimplicialPair, _boundary, facets, make_pair
from .filtration import all_pairs_up_laplacians, monotonicity_violations, persistent_spectra
from .linalg import DEFAULT_TOL, Tolerances, rank
from .persistent import persistent_betti, persistent_laplacian_reduction, persistent_laplacian_schur

__all__ = [
    "random_complex",
    "random_subcomplex",
    "random_pair",
    "random_filtration",
    "random_connected_graph",
    "random_network",
    "rank_betti",
    "touched_components",
    "run_selftest",
]


def random_complex(rng: np.random.Generator, n_vertices: int = 6, max_dim: int = 2,
                   n_generators: int | None = None) -> SimplicialComplex:
    """Closure of a few random simplices on ``range(n_vertices)``; all vertices kept."""
    if n_generators is None:
        n_generators = int(rng.integers(1, 2 * n_vertices + 1))
    gens = [(v,) for v in range(n_vertices)]
    for _ in range(n_generators):
        d = int(rng.integers(1, max_dim + 1)) if max_dim >= 1 else 0
        d = min(d, n_vertices - 1)
        gens.append(tuple(sorted(rng.choice(n_vertices, size=d + 1, replace=False).tolist())))
    return SimplicialComplex.from_simplices(gens)


def random_subcomplex(rng: np.random.Generator, L: SimplicialComplex, p: float = 0.6) -> SimplicialComplex:
    """Keep each simplex with probability ``p`` provided all its facets survived."""
    kept: set = set()
    for q in range(L.dim + 1):
        for s in L.level(q):
            if rng.random() < p and all(f in kept for f in facets(s) if q > 0):
                kept.add(s)
    return L.subcomplex(lambda s: s in kept)


def random_pair(rng: np.random.Generator, max_vertices: int = 10, max_dim: int = 3,
                p: float = 0.6, weighted: bool = False) -> SimplicialPair:
    n = int(rng.integers(2, max_vertices + 1))
    L = random_complex(rng, n, max_dim, int(rng.integers(1, n + 3)))
    if weighted:
        L = SimplicialComplex(L.simplices, {s: float(rng.uniform(0.5, 2.0)) for s in L})
    K = random_subcomplex(rng, L, p)
    return make_pair(K, L)


def random_filtration(rng: np.random.Generator, n_vertices: int = 5, max_dim: int = 2,
                      max_simplices: int = 25, n_levels: int = 5) -> Filtration:
    """Random integer births, raised where needed so faces come first."""
    while True:
        K = random_complex(rng, n_vertices, max_dim)
        if len(K) <= max_simplices:
            break
    births: dict = {}
    for s in K:
        b = float(rng.integers(0, n_levels))
        if len(s) > 1:
            b = max([b] + [births[f] for f in facets(s)])
        births[s] = b
    return Filtration.from_births(births)


def random_connected_graph(rng: np.random.Generator, n: int, p: float = 0.4,
                           weighted: bool = False) -> SimplicialComplex:
    """Random spanning tree plus independent extra edges."""
    perm = rng.permutation(n)
    edges = {tuple(sorted((int(perm[i]), int(perm[rng.integers(0, i)])))) for i in range(1, n)}
    for e in combinations(range(n), 2):
        if rng.random() < p:
            edges.add(e)
    simplices = [(v,) for v in range(n)] + sorted(edges)
    w = {e: float(rng.uniform(0.5, 2.0)) for e in edges} if weighted else None
    return SimplicialComplex.from_simplices(simplices, w)


def random_network(rng: np.random.Generator, n: int = 6, n_triangles: int = 4,
                   weighted: bool = True) -> SimplicialComplex:
    """2-dim simplicial network: random triangles, conductances on the triangles only."""
    tris = set()
    while len(tris) < n_triangles:
        tris.add(tuple(sorted(rng.choice(n, size=3, replace=False).tolist())))
    w = {t: float(rng.uniform(0.5, 2.0)) for t in tris} if weighted else None
    return SimplicialComplex.from_simplices(sorted(tris), w)


def rank_betti(pair: SimplicialPair, q: int, tol: Tolerances = DEFAULT_TOL) -> int:
    """Persistent Betti number from ranks: cycles of K modulo boundaries of L."""
    if q > pair.K.dim:
        return 0
    BqK = _boundary(pair.K, q).astype(float)
    Z = scipy.linalg.null_space(BqK) if BqK.shape[0] else np.eye(pair.K.n(q))
    Zpad = np.zeros((pair.L.n(q), Z.shape[1]))
    Zpad[:pair.K.n(q)] = Z
    B = _boundary(pair.L, q + 1).astype(float)
    return rank(np.hstack([Zpad, B]), tol) - rank(B, tol)


def touched_components(pair: SimplicialPair) -> int:
    """Number of connected components of L containing a vertex of K."""
    L = pair.L
    n = L.n(0)
    rows = [L.index((a,)) for a, b in L.level(1)]
    cols = [L.index((b,)) for a, b in L.level(1)]
    _, labels = connected_components(coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n)),
                                     directed=False)
    return len({labels[i] for i in range(pair.K.n(0))})


def run_selftest(seed: int = 0, trials: int = 100, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Randomized agreement checks; each entry reports the number of failures."""
    rng = np.random.default_rng(seed)
    out = {"method_agreement": 0, "betti_oracle": 0, "zero_eigenvalue_count": 0,
           "all_pairs_vs_pairwise": 0, "monotonicity": 0, "max_discrepancy": 0.0}
    for _ in range(trials):
        pair = random_pair(rng, max_vertices=8, max_dim=3)
        for q in range(pair.L.dim + 1):
            a = persistent_laplacian_schur(pair, q, tol).full
            b = persistent_laplacian_reduction(pair, q, tol).full
            d = float(np.max(np.abs(a - b))) if a.size else 0.0
            out["max_discrepancy"] = max(out["max_discrepancy"], d)
            out["method_agreement"] += d > 1e-8
            out["betti_oracle"] += persistent_betti(pair, q, tol=tol) != rank_betti(pair, q, tol)
        if pair.K.n(0):
            out["zero_eigenvalue_count"] += persistent_betti(pair, 0, tol=tol) != touched_components(pair)
    for _ in range(max(1, trials // 5)):
        F = random_filtration(rng)
        for q in range(F.complex.dim):
            for t in F.grid:
                res = all_pairs_up_laplacians(F, q, t, tol)
                for s, M in res.matrices.items():
                    ref = persistent_laplacian_schur(F.pair_at(s, t), q, tol).up if M.size else M
                    out["all_pairs_vs_pairwise"] += bool(M.size and np.max(np.abs(M - ref)) > 1e-8)
            spectra = persistent_spectra(F, q, True, tol)
            out["monotonicity"] += len(monotonicity_violations(F, q, True, spectra=spectra))
    out["ok"] = all(v == 0 for k, v in out.items() if k != "max_discrepancy")
    return out
