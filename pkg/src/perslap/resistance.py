"""Effective resistance on graphs and simplicial networks.

A q0-dim simplicial network is a complex of dimension q0 whose only
non-unit weights sit on q0-simplices (the conductances). Resistance on a
current generator ``sigma`` is the quadratic form of its formal boundary
against the pseudoinverse of the (q0-1)-th up-Laplacian. Graphs are the
``q0 = 1`` case and go through the same code.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .complex import Simplex, SimplicialComplex, SimplicialPair, _canonical, _boundary, boundary_vector, make_pair
from .laplacian import hodge_laplacian, up_laplacian
from .linalg import DEFAULT_TOL, Tolerances, pseudoinverse, rank
from .persistent import persistent_laplacian_schur

__all__ = [
    "NotACurrentGenerator",
    "CurrentGenerator",
    "check_network",
    "is_connected",
    "effective_resistance_graph",
    "two_point_persistent_laplacian",
    "resistance_forms",
    "simplicial_effective_resistance",
    "kernel_projection_norm",
    "current_balance_solve",
    "resistance_via_current",
    "kron_resistances",
    "kron_preservation_check",
]

FORM_ATOL = 1e-8


class NotACurrentGenerator(ValueError):
    """The formal boundary of sigma is not a boundary in the complex."""


@dataclass(frozen=True)
class CurrentGenerator:
    """A (q0+1)-point vertex set, not necessarily a simplex of the complex."""

    q0: int
    sigma: Simplex

    def __post_init__(self):
        s = _canonical(self.sigma)
        if self.q0 < 1:
            raise ValueError("q0 must be a positive integer")
        if len(s) != self.q0 + 1:
            raise ValueError(f"sigma needs {self.q0 + 1} distinct vertices, got {s}")
        object.__setattr__(self, "sigma", s)

    def boundary(self, K: SimplicialComplex) -> np.ndarray:
        """Coordinates of the formal boundary in ``C_{q0-1}(K)``."""
        try:
            return boundary_vector(K, self.sigma)
        except ValueError as exc:
            raise NotACurrentGenerator(str(exc)) from exc

    def is_generator(self, K: SimplicialComplex, tol: Tolerances = DEFAULT_TOL) -> bool:
        try:
            D = self.boundary(K)
        except NotACurrentGenerator:
            return False
        B = _boundary(K, self.q0).astype(float)
        return rank(np.column_stack([B, D]), tol) == rank(B, tol)


def _as_generator(K: SimplicialComplex, sigma, q0: int | None = None) -> CurrentGenerator:
    if isinstance(sigma, CurrentGenerator):
        return sigma
    s = _canonical(sigma)
    return CurrentGenerator(len(s) - 1 if q0 is None else q0, s)


def check_network(K: SimplicialComplex, q0: int):
    """Raise unless K is a q0-dim simplicial network."""
    if K.dim != q0:
        raise ValueError(f"network must have dimension {q0}, got {K.dim}")
    for s in K.weights:
        if len(s) != q0 + 1:
            raise ValueError(f"non-unit weight on {s}; only {q0}-simplices carry conductances")


def is_connected(K: SimplicialComplex) -> bool:
    n = K.n(0)
    if n == 0:
        return False
    E = K.level(1)
    rows = [K.index((e[0],)) for e in E]
    cols = [K.index((e[1],)) for e in E]
    A = coo_matrix((np.ones(len(E)), (rows, cols)), shape=(n, n))
    return connected_components(A, directed=False)[0] == 1


def _quadratic_pinv(M: np.ndarray, D: np.ndarray, tol: Tolerances) -> float:
    return float(D @ pseudoinverse(M, tol, symmetric=True) @ D)


def effective_resistance_graph(L: SimplicialComplex, v: int, w: int,
                               tol: Tolerances = DEFAULT_TOL) -> float:
    """Resistance between two vertices, edge weights read as conductances."""
    if L.dim > 1:
        raise ValueError("expected a graph (dimension <= 1)")
    if v == w:
        raise ValueError("v and w must differ")
    for x in (v, w):
        if (x,) not in L:
            raise ValueError(f"vertex {x} not in the graph")
    if not is_connected(L):
        raise ValueError("graph is not connected")
    return simplicial_effective_resistance(L, CurrentGenerator(1, (v, w)), tol)


def two_point_persistent_laplacian(L: SimplicialComplex, v: int, w: int,
                                   tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Persistent Laplacian of ``{v, w} -> L``; equals ``(1/R) [[1,-1],[-1,1]]``."""
    R = effective_resistance_graph(L, v, w, tol)
    K = SimplicialComplex.from_simplices([(v,), (w,)])
    M = persistent_laplacian_schur(make_pair(K, L), 0, tol).full
    expected = np.array([[1.0, -1.0], [-1.0, 1.0]]) / R
    if np.max(np.abs(M - expected)) > FORM_ATOL:
        raise RuntimeError("two-point persistent Laplacian disagrees with 1/R")
    return M


def resistance_forms(network: SimplicialComplex, sigma, tol: Tolerances = DEFAULT_TOL) -> tuple[float, float]:
    """Resistance via the up-Laplacian and via the full Laplacian pseudoinverse."""
    g = _as_generator(network, sigma)
    check_network(network, g.q0)
    if not g.is_generator(network, tol):
        raise NotACurrentGenerator(f"{g.sigma} is not a current generator")
    D = g.boundary(network)
    lap = hodge_laplacian(network, g.q0 - 1)
    return _quadratic_pinv(lap.up, D, tol), _quadratic_pinv(lap.full, D, tol)


def simplicial_effective_resistance(network: SimplicialComplex, sigma,
                                    tol: Tolerances = DEFAULT_TOL) -> float:
    """Up-Laplacian resistance, cross-checked against the full-Laplacian form."""
    up, full = resistance_forms(network, sigma, tol)
    if abs(up - full) > FORM_ATOL * max(1.0, abs(up)):
        raise RuntimeError(f"resistance forms disagree: {up} vs {full}")
    return up


def kernel_projection_norm(network: SimplicialComplex, sigma, tol: Tolerances = DEFAULT_TOL) -> float:
    """Norm of the boundary of sigma projected onto ``ker Delta_up``."""
    g = _as_generator(network, sigma)
    D = g.boundary(network)
    M = up_laplacian(network, g.q0 - 1)
    vals, vecs = np.linalg.eigh(M)
    scale = max(np.max(np.abs(vals)), 1.0) if vals.size else 1.0
    K = vecs[:, vals <= tol.rank_tol * scale]
    return float(np.linalg.norm(K.T @ D))


def current_balance_solve(network: SimplicialComplex, J, q0: int | None = None,
                          atol: float = 1e-8, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Potentials ``U`` with ``Delta_up U = J`` on the (q0-1)-chains."""
    q0 = network.dim if q0 is None else q0
    check_network(network, q0)
    M = up_laplacian(network, q0 - 1)
    J = np.asarray(J, dtype=float)
    if J.shape != (M.shape[0],):
        raise ValueError(f"J must have length {M.shape[0]}")
    U = pseudoinverse(M, tol, symmetric=True) @ J
    if np.linalg.norm(M @ U - J) > atol * max(1.0, np.linalg.norm(J)):
        raise ValueError("current-balance system is inconsistent (J not orthogonal to the kernel)")
    return U


def resistance_via_current(network: SimplicialComplex, sigma, j: float = 1.0,
                           tol: Tolerances = DEFAULT_TOL) -> float:
    """Inject ``j`` units along sigma and read off ``D^T U / j``."""
    g = _as_generator(network, sigma)
    if not g.is_generator(network, tol):
        raise NotACurrentGenerator(f"{g.sigma} is not a current generator")
    D = g.boundary(network)
    U = current_balance_solve(network, j * D, g.q0, tol=tol)
    return float(D @ U / j)


def kron_resistances(pair: SimplicialPair, q0: int, sigma,
                     tol: Tolerances = DEFAULT_TOL) -> tuple[float, float]:
    """Resistance of sigma in L and through the persistent up-Laplacian of the pair."""
    g = _as_generator(pair.L, sigma, q0)
    check_network(pair.L, q0)
    if not g.is_generator(pair.L, tol):
        raise NotACurrentGenerator(f"{g.sigma} is not a current generator in L")
    for i in range(len(g.sigma)):
        f = g.sigma[:i] + g.sigma[i + 1:]
        if f not in pair.K:
            raise ValueError(f"boundary of {g.sigma} leaves K (face {f})")
    D_L = g.boundary(pair.L)
    D_K = D_L[:pair.K.n(q0 - 1)]
    R_L = _quadratic_pinv(up_laplacian(pair.L, q0 - 1), D_L, tol)
    R_KL = _quadratic_pinv(persistent_laplacian_schur(pair, q0 - 1, tol).up, D_K, tol)
    return R_L, R_KL


def kron_preservation_check(pair: SimplicialPair, q0: int, sigma, atol: float = 1e-8,
                            tol: Tolerances = DEFAULT_TOL) -> bool:
    R_L, R_KL = kron_resistances(pair, q0, sigma, tol)
    return abs(R_L - R_KL) <= atol
