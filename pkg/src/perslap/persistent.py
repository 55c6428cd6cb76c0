"""Persistent Laplacians of a simplicial pair ``K -> L``.

Two routes produce the same matrix on ``C_q(K)``:

* reduction: column-reduce the rows of ``B_{q+1}(L)`` outside K to get a
  basis ``Z`` of the chains whose boundary lands in K, then form
  ``B_LK (Z^T W^-1 Z)^-1 B_LK^T W_q^-1``;
* schur: take the generalized Schur complement of the up-Laplacian of L
  with respect to the q-simplices of L outside K.

Both add the down-Laplacian of K.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .complex import SimplicialPair, _boundary
from .laplacian import down_laplacian, up_laplacian
from .linalg import (DEFAULT_TOL, Spectrum, Tolerances, column_reduce, eigenvalues_sym,
                     is_symmetric, nullity, rank, schur_complement)

__all__ = [
    "PersistentLaplacian",
    "chain_subspace_basis",
    "up_from_basis",
    "persistent_laplacian",
    "persistent_laplacian_reduction",
    "persistent_laplacian_schur",
    "naive_submatrix_counterexample",
    "persistent_betti",
    "persistent_spectrum",
    "interior_simplices",
    "interior_simplex_check",
]


@dataclass(frozen=True)
class PersistentLaplacian:
    q: int
    up: np.ndarray
    down: np.ndarray
    method: str
    n_chain: int | None = None  # dim of C_{q+1}^{L,K}; only known on the reduction route

    @property
    def full(self) -> np.ndarray:
        return self.up + self.down


def _check_q(pair: SimplicialPair, q: int):
    if q < 0 or q > pair.L.dim:
        raise ValueError(f"q={q} out of range for L of dimension {pair.L.dim}")


def _down_K(pair: SimplicialPair, q: int) -> np.ndarray:
    if q > pair.K.dim:
        return np.zeros((0, 0))
    return down_laplacian(pair.K, q)


def _up_L(pair: SimplicialPair, q: int) -> np.ndarray:
    return up_laplacian(pair.L, q)


def chain_subspace_basis(pair: SimplicialPair, q1: int,
                         tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Basis ``Z`` of ``C_{q1}^{L,K}`` and the boundary matrix on it.

    Returns ``(Z, B_LK)`` with ``Z`` of shape ``(n_{q1}^L, r)`` and ``B_LK``
    of shape ``(n_{q1-1}^K, r)``; ``r = 0`` means the subspace is trivial.
    """
    if q1 < 1:
        raise ValueError("chain_subspace_basis needs q1 >= 1")
    q = q1 - 1
    B = _boundary(pair.L, q1).astype(float)
    nK = pair.K.n(q)
    if pair.L.level(q)[:nK] != pair.K.level(q):
        raise ValueError("ordering convention violated")
    R, Y = column_reduce(B[nK:, :], tol)
    I = np.flatnonzero(~R.any(axis=0))
    Z = Y[:, I]
    return Z, B[:nK, :] @ Z


def up_from_basis(pair: SimplicialPair, q: int, Z: np.ndarray) -> np.ndarray:
    """Up persistent Laplacian from an arbitrary basis ``Z`` of ``C_{q+1}^{L,K}``."""
    nK = pair.K.n(q)
    if Z.shape[1] == 0:
        return np.zeros((nK, nK))
    B = _boundary(pair.L, q + 1).astype(float)
    B_LK = B[:nK, :] @ Z
    gram = Z.T @ (Z / pair.L.weight_vector(q + 1)[:, None])
    X = scipy.linalg.cho_solve(scipy.linalg.cho_factor(gram), B_LK.T)
    return B_LK @ X / pair.K.weight_vector(q)[None, :]


def persistent_laplacian_reduction(pair: SimplicialPair, q: int,
                                   tol: Tolerances = DEFAULT_TOL) -> PersistentLaplacian:
    """Persistent Laplacian by column reduction of the boundary matrix."""
    _check_q(pair, q)
    down = _down_K(pair, q)
    nK, nL = pair.K.n(q), pair.L.n(q)
    if nK == 0:
        return PersistentLaplacian(q, np.zeros((0, 0)), down, "reduction", 0)
    if nK == nL:
        return PersistentLaplacian(q, _up_L(pair, q), down, "reduction", pair.L.n(q + 1))
    if pair.L.n(q + 1) == 0:
        return PersistentLaplacian(q, np.zeros((nK, nK)), down, "reduction", 0)
    Z, _ = chain_subspace_basis(pair, q + 1, tol)
    try:
        up = up_from_basis(pair, q, Z)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError("column reduction produced a rank-deficient basis") from exc
    return PersistentLaplacian(q, up, down, "reduction", Z.shape[1])


def persistent_laplacian_schur(pair: SimplicialPair, q: int,
                               tol: Tolerances = DEFAULT_TOL) -> PersistentLaplacian:
    """Persistent Laplacian as a Schur complement of L's up-Laplacian."""
    _check_q(pair, q)
    down = _down_K(pair, q)
    nK, nL = pair.K.n(q), pair.L.n(q)
    if nK == 0:
        return PersistentLaplacian(q, np.zeros((0, 0)), down, "schur")
    up_L = _up_L(pair, q)
    if nK == nL:
        return PersistentLaplacian(q, up_L, down, "schur")
    return PersistentLaplacian(q, schur_complement(up_L, pair.complement(q), tol), down, "schur")


def persistent_laplacian(pair: SimplicialPair, q: int, method: str = "schur",
                         tol: Tolerances = DEFAULT_TOL) -> PersistentLaplacian:
    if method == "schur":
        return persistent_laplacian_schur(pair, q, tol)
    if method == "reduction":
        return persistent_laplacian_reduction(pair, q, tol)
    raise ValueError(f"unknown method {method!r}")


def _kernel_dim(M: np.ndarray, tol: Tolerances, scale: float | None = None) -> int:
    if M.shape[0] == 0:
        return 0
    if is_symmetric(M):
        return nullity(M, tol, scale)
    return M.shape[0] - rank(M, tol, scale)


def _input_scale(pair: SimplicialPair, q: int) -> float:
    """Magnitude of the matrices the persistent Laplacian is built from.

    Zero thresholds are taken relative to this rather than to the result,
    which may be a round-off-sized remnant of an exactly zero matrix.
    """
    up = _up_L(pair, q)
    down = _down_K(pair, q)
    return max(float(np.max(np.abs(up), initial=0.0)), float(np.max(np.abs(down), initial=0.0)))


def persistent_betti(pair: SimplicialPair, q: int, method: str = "schur",
                     tol: Tolerances = DEFAULT_TOL) -> int:
    """Persistent Betti number as the nullity of the persistent Laplacian."""
    M = persistent_laplacian(pair, q, method, tol).full
    return _kernel_dim(M, tol, _input_scale(pair, q))


def naive_submatrix_counterexample(pair: SimplicialPair, q: int,
                                   tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, bool]:
    """The tempting but wrong construction ``B B^T`` with ``B`` the K-rows of ``B_{q+1}(L)``.

    Returns the matrix and whether ``nullity(B B^T + down)`` happens to equal
    the persistent Betti number.
    """
    _check_q(pair, q)
    nK = pair.K.n(q)
    B = _boundary(pair.L, q + 1).astype(float)[:nK, :]
    BBt = B @ B.T
    naive = _kernel_dim(BBt + _down_K(pair, q), tol, _input_scale(pair, q))
    return BBt, naive == persistent_betti(pair, q, tol=tol)


def persistent_spectrum(pair: SimplicialPair, q: int, method: str = "schur",
                        part: str = "full", general: bool = False,
                        tol: Tolerances = DEFAULT_TOL) -> Spectrum:
    """Sorted eigenvalues of the persistent Laplacian (or its up part).

    Weighted pairs with non-unit ``w_q`` give a non-symmetric matrix; those
    are refused unless ``general=True``, in which case real parts of a
    general eigensolve are returned.
    """
    P = persistent_laplacian(pair, q, method, tol)
    M = P.full if part == "full" else P.up
    if pair.L.has_unit_weights(q) and is_symmetric(M):
        return eigenvalues_sym(M, tol)
    if not general:
        raise ValueError("persistent Laplacian is not symmetric (non-unit weights); pass general=True")
    return Spectrum(np.sort(np.linalg.eigvals(M).real) if M.size else np.zeros(0), tol)


def interior_simplices(pair: SimplicialPair, q: int) -> list[int]:
    """Indices of q-simplices of K whose cofaces in L only meet q-simplices of K."""
    K, L = pair.K, pair.L
    cofaces: dict = {s: [] for s in L.level(q)}
    for tau in L.level(q + 1):
        for i in range(len(tau)):
            cofaces[tau[:i] + tau[i + 1:]].append(tau)
    out = []
    for i, s in enumerate(K.level(q)):
        ok = True
        for tau in cofaces[s]:
            if any((tau[:j] + tau[j + 1:]) not in K for j in range(len(tau))):
                ok = False
                break
        if ok:
            out.append(i)
    return out


def interior_simplex_check(pair: SimplicialPair, q: int, chain_on_L,
                           atol: float = 1e-8, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Check that the up-Laplacians of L and of the pair agree on interior simplices.

    ``chain_on_L`` is a coefficient vector on the q-simplices of L; its
    projection to K is coordinate truncation.
    """
    _check_q(pair, q)
    c = np.asarray(chain_on_L, dtype=float)
    if c.shape != (pair.L.n(q),):
        raise ValueError(f"chain must have length {pair.L.n(q)}")
    nK = pair.K.n(q)
    lhs = _up_L(pair, q) @ c
    rhs = persistent_laplacian_schur(pair, q, tol).up @ c[:nK]
    idx = interior_simplices(pair, q)
    return bool(np.all(np.abs(lhs[idx] - rhs[idx]) <= atol))
