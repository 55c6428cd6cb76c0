"""Combinatorial up/down Laplacians of a single complex.

Two independent constructions are provided: boundary-matrix products and the
degree-minus-adjacency scan. With non-unit weights the matrices are taken
with respect to the weighted inner product ``<[s], [s]> = 1 / w(s)`` and are
in general not symmetric.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .complex import SimplicialComplex, _boundary, facets
from .linalg import DEFAULT_TOL, Tolerances, eigenvalues_sym, is_symmetric, nullity, rank

__all__ = [
    "LaplacianMatrices",
    "up_laplacian",
    "down_laplacian",
    "hodge_laplacian",
    "laplacian_via_degree_adjacency",
    "laplacian_spectrum",
    "betti",
]


@dataclass(frozen=True)
class LaplacianMatrices:
    q: int
    up: np.ndarray
    down: np.ndarray

    @property
    def full(self) -> np.ndarray:
        return self.up + self.down


def _check_q(K: SimplicialComplex, q: int):
    if q < 0 or q > K.dim:
        raise ValueError(f"q={q} out of range for a complex of dimension {K.dim}")


def up_laplacian(K: SimplicialComplex, q: int) -> np.ndarray:
    """``B_{q+1} W_{q+1} B_{q+1}^T W_q^{-1}``; zero at the top dimension."""
    _check_q(K, q)
    B = _boundary(K, q + 1).astype(float)
    return (B * K.weight_vector(q + 1)) @ B.T / K.weight_vector(q)[None, :]


def down_laplacian(K: SimplicialComplex, q: int) -> np.ndarray:
    """``W_q B_q^T W_{q-1}^{-1} B_q``; zero for ``q = 0``."""
    _check_q(K, q)
    if q == 0:
        return np.zeros((K.n(0), K.n(0)))
    B = _boundary(K, q).astype(float)
    return K.weight_vector(q)[:, None] * ((B.T / K.weight_vector(q - 1)) @ B)


def hodge_laplacian(K: SimplicialComplex, q: int) -> LaplacianMatrices:
    return LaplacianMatrices(q, up_laplacian(K, q), down_laplacian(K, q))


def laplacian_via_degree_adjacency(K: SimplicialComplex, q: int) -> LaplacianMatrices:
    """Build up/down Laplacians as degree minus signed adjacency.

    The up part scans each (q+1)-simplex and its pairs of facets; the down
    part scans pairs of q-simplices sharing a (q-1)-face.
    """
    _check_q(K, q)
    n = K.n(q)
    S = K.level(q)
    w = K.weight

    D_up = np.zeros(n)
    A_up = np.zeros((n, n))
    for tau in K.level(q + 1):
        faces = facets(tau)
        idx = [K.index(f) for f in faces]
        for pos, i in enumerate(idx):
            D_up[i] += w(tau) / w(faces[pos])
        for (a, i), (b, j) in combinations(enumerate(idx), 2):
            sign = (-1) ** a * (-1) ** b
            A_up[i, j] = -w(tau) / w(faces[b]) * sign
            A_up[j, i] = -w(tau) / w(faces[a]) * sign

    D_down = np.zeros(n)
    A_down = np.zeros((n, n))
    if q > 0:
        for i, s in enumerate(S):
            D_down[i] = sum(w(s) / w(f) for f in facets(s))
        for i, j in combinations(range(n), 2):
            si, sj = S[i], S[j]
            common = tuple(sorted(set(si) & set(sj)))
            if len(common) != q:
                continue
            sign = _incidence(si, common) * _incidence(sj, common)
            A_down[i, j] = -w(si) / w(common) * sign
            A_down[j, i] = -w(sj) / w(common) * sign

    return LaplacianMatrices(q, np.diag(D_up) - A_up, np.diag(D_down) - A_down)


def _incidence(simplex, face) -> int:
    """Sign of ``[face]`` in the boundary of ``[simplex]``."""
    (missing,) = set(simplex) - set(face)
    return 1 if simplex.index(missing) % 2 == 0 else -1


def laplacian_spectrum(K: SimplicialComplex, q: int, part: str = "full",
                       symmetric_hint: bool | None = None, tol: Tolerances = DEFAULT_TOL):
    """Sorted eigenvalues of the chosen Laplacian part.

    The weighted operator is symmetric only when ``w_q`` is identically 1.
    ``symmetric_hint=True`` asserts this and is checked numerically; with
    ``symmetric_hint=False`` a general eigensolver is used and real parts are
    returned.
    """
    L = hodge_laplacian(K, q)
    M = {"full": L.full, "up": L.up, "down": L.down}[part]
    if symmetric_hint is None:
        symmetric_hint = K.has_unit_weights(q)
    if symmetric_hint:
        if not is_symmetric(M):
            raise ValueError("symmetric_hint given but the Laplacian is not symmetric")
        return eigenvalues_sym(M, tol).values
    return np.sort(np.linalg.eigvals(M).real)


def betti(K: SimplicialComplex, q: int, tol: Tolerances = DEFAULT_TOL) -> int:
    """Betti number as the nullity of the q-th Laplacian."""
    _check_q(K, q)
    M = hodge_laplacian(K, q).full
    if is_symmetric(M):
        return nullity(M, tol)
    return M.shape[0] - rank(M, tol)
