"""Dense linear-algebra kernels: column reduction, pseudoinverse, spectra,
rank/nullity and the generalized Schur complement.

Matrices are plain ``numpy.ndarray`` objects of dtype float64. Index sets
are 0-based.
"""
from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "Spectrum",
    "column_reduce",
    "pseudoinverse",
    "eigenvalues_sym",
    "is_symmetric",
    "rank",
    "nullity",
    "schur_complement",
    "is_proper",
]


@dataclass(frozen=True)
class Tolerances:
    """Thresholds for numerical rank decisions.

    rank_tol is relative to the largest singular/eigen-value; pivot_tol is
    relative to the largest entry of the matrix being column reduced.
    """

    rank_tol: float = 1e-10
    pivot_tol: float = 1e-12

    def __post_init__(self):
        if not (self.rank_tol > 0 and self.pivot_tol > 0):
            raise ValueError("tolerances must be positive")

    def as_dict(self) -> dict:
        return {"rank_tol": self.rank_tol, "pivot_tol": self.pivot_tol}


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted in nondecreasing order, with multiplicity."""

    values: np.ndarray
    tol: Tolerances = DEFAULT_TOL

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]

    def zero_multiplicity(self, scale: float | None = None) -> int:
        """Eigenvalues at or below ``rank_tol * scale``.

        ``scale`` defaults to the largest magnitude in the spectrum; pass the
        size of the matrices the spectrum was derived from when round-off
        could leave an all-zero matrix with tiny non-zero eigenvalues.
        """
        if len(self.values) == 0:
            return 0
        if scale is None:
            scale = float(np.max(np.abs(self.values)))
        if scale == 0:
            return len(self.values)
        return int(np.sum(self.values <= self.tol.rank_tol * scale))

    def tolist(self) -> list[float]:
        return [float(v) for v in self.values]


def _as_matrix(M) -> np.ndarray:
    A = np.asarray(M, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def column_reduce(D, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Left-to-right column reduction ``R = D @ Y``.

    Each column is reduced against earlier columns whose lowest non-zero row
    (largest row index) coincides with its own, until its low is unique or
    the column vanishes. Entries with magnitude at most
    ``pivot_tol * max|D|`` count as zero and are flushed to 0 in ``R``.
    ``Y`` is unit upper triangular, hence non-singular.
    """
    R = _as_matrix(D).copy()
    m, n = R.shape
    Y = np.eye(n)
    scale = np.max(np.abs(R)) if R.size else 0.0
    if scale == 0:
        return np.zeros_like(R), Y
    thr = tol.pivot_tol * scale

    pivot_of_low: dict[int, int] = {}
    for j in range(n):
        while True:
            col = R[:, j]
            nz = np.flatnonzero(np.abs(col) > thr)
            if nz.size == 0:
                R[:, j] = 0.0
                break
            low = int(nz[-1])
            i = pivot_of_low.get(low)
            if i is None:
                pivot_of_low[low] = j
                col[np.abs(col) <= thr] = 0.0
                break
            factor = R[low, j] / R[low, i]
            R[:, j] -= factor * R[:, i]
            Y[:, j] -= factor * Y[:, i]
            R[low, j] = 0.0
    return R, Y


def is_symmetric(M, atol: float = 1e-8) -> bool:
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    if A.size == 0:
        return True
    scale = max(1.0, float(np.max(np.abs(A))))
    return bool(np.max(np.abs(A - A.T)) <= atol * scale)


def pseudoinverse(M, tol: Tolerances = DEFAULT_TOL, symmetric: bool | None = None) -> np.ndarray:
    """Moore-Penrose inverse.

    Symmetric input goes through ``eigh`` (spectral pseudoinverse); anything
    else through the SVD. Values at or below ``rank_tol`` times the largest
    magnitude are treated as zero.
    """
    A = _as_matrix(M)
    if A.size == 0:
        return np.zeros((A.shape[1], A.shape[0]))
    if symmetric is None:
        symmetric = A.shape[0] == A.shape[1] and np.array_equal(A, A.T)
    if symmetric:
        w, V = np.linalg.eigh((A + A.T) / 2)
        cutoff = tol.rank_tol * np.max(np.abs(w))
        keep = np.abs(w) > cutoff
        return (V[:, keep] / w[keep]) @ V[:, keep].T
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    keep = s > tol.rank_tol * s[0]
    return (Vt[keep].T / s[keep]) @ U[:, keep].T


def eigenvalues_sym(M, tol: Tolerances = DEFAULT_TOL) -> Spectrum:
    """Full sorted spectrum of a (numerically) symmetric matrix."""
    A = _as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"eigenvalues need a square matrix, got {A.shape}")
    if not is_symmetric(A):
        raise ValueError("matrix is not symmetric to within 1e-8")
    if A.size == 0:
        return Spectrum(np.zeros(0), tol)
    return Spectrum(np.linalg.eigvalsh((A + A.T) / 2), tol)


def rank(M, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> int:
    """Singular values above ``rank_tol * scale`` (default scale: the largest one)."""
    A = _as_matrix(M)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    ref = s[0] if scale is None else scale
    if ref == 0:
        return 0
    return int(np.sum(s > tol.rank_tol * ref))


def nullity(M, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> int:
    """Number of eigenvalues at or below ``rank_tol * scale`` of a symmetric PSD matrix."""
    A = _as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"nullity needs a square matrix, got {A.shape}")
    return eigenvalues_sym(A, tol).zero_multiplicity(scale)


def _split(n: int, I: Iterable[int]) -> tuple[np.ndarray, np.ndarray]:
    idx = np.unique(np.asarray(list(I), dtype=int))
    if idx.size and (idx[0] < 0 or idx[-1] >= n):
        raise ValueError(f"index set out of range for size {n}")
    if idx.size == 0 or idx.size == n:
        raise ValueError("index set must be non-empty and proper")
    rest = np.setdiff1d(np.arange(n), idx)
    return idx, rest


def schur_complement(M, I: Iterable[int], tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Generalized Schur complement ``M / M[I, I]``.

    Returns ``M[J, J] - M[J, I] pinv(M[I, I]) M[I, J]`` where ``J`` is the
    complement of ``I``, rows/columns in increasing index order.
    """
    A = _as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise ValueError("Schur complement needs a square matrix")
    idx, rest = _split(A.shape[0], I)
    D = A[np.ix_(idx, idx)]
    return A[np.ix_(rest, rest)] - A[np.ix_(rest, idx)] @ pseudoinverse(D, tol) @ A[np.ix_(idx, rest)]


def is_proper(M, I: Iterable[int], tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether ``M[I, I]`` is proper: ker D in ker B and ker D^T in ker C^T.

    Here ``B = M[J, I]`` and ``C = M[I, J]``. Kernel inclusions are tested by
    comparing ranks of stacked matrices.
    """
    A = _as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise ValueError("properness needs a square matrix")
    idx, rest = _split(A.shape[0], I)
    D = A[np.ix_(idx, idx)]
    B = A[np.ix_(rest, idx)]
    C = A[np.ix_(idx, rest)]
    rD = rank(D, tol)
    return rank(np.vstack([D, B]), tol) == rD and rank(np.hstack([D, C]), tol) == rD
