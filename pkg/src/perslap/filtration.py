"""Persistent Laplacians across a filtration.

For a fixed end index ``t`` all up-persistent Laplacians ``Delta_up^{s,t}``
come out of one sweep of single-index Kron eliminations on the up-Laplacian
of ``K_t``, removing q-simplices in reverse filtration order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from .complex import Filtration
from .laplacian import down_laplacian, up_laplacian
from .linalg import DEFAULT_TOL, Tolerances, eigenvalues_sym

__all__ = [
    "AllPairsResult",
    "PersistentEigenvalueFunction",
    "kron_step",
    "all_pairs_up_laplacians",
    "persistent_spectra",
    "persistent_eigenvalue_function",
    "monotonicity_violations",
    "four_point_violations",
    "interleaving_distance_filtrations",
    "interleaving_distance_functions",
    "stability_grid",
]


@dataclass(frozen=True)
class AllPairsResult:
    """Up-persistent Laplacians ``Delta_up^{s,t}`` for every grid value ``s <= t``.

    ``by_size`` holds every intermediate of the sweep keyed by the number of
    retained q-simplices, i.e. the one-simplex-at-a-time refinement.
    """

    q: int
    t: float
    matrices: dict[float, np.ndarray]
    by_size: dict[int, np.ndarray] = field(repr=False)


def kron_step(M: np.ndarray, threshold: float = 0.0) -> np.ndarray:
    """Eliminate the last row/column of ``M`` (Schur complement of a 1x1 block).

    A pivot with magnitude ``<= threshold`` is treated as zero, in which case
    the leading block is returned unchanged.
    """
    l = M.shape[0] - 1
    piv = M[l, l]
    if abs(piv) <= threshold:
        return M[:l, :l].copy()
    return M[:l, :l] - np.outer(M[:l, l], M[l, :l]) / piv


def _n_q_at(F: Filtration, q: int, s: float) -> int:
    return sum(1 for x in F.complex.level(q) if F.births[x] <= s)


def all_pairs_up_laplacians(F: Filtration, q: int, t: float,
                            tol: Tolerances = DEFAULT_TOL) -> AllPairsResult:
    if t not in F.grid:
        raise ValueError(f"t={t} is not a birth value of the filtration")
    Kt = F.slice(t)
    if q < 0:
        raise ValueError("q must be non-negative")
    sizes = {s: _n_q_at(F, q, s) for s in F.grid if s <= t}
    if q > Kt.dim:
        empty = np.zeros((0, 0))
        return AllPairsResult(q, t, {s: empty for s in sizes}, {0: empty})
    M = up_laplacian(Kt, q)
    threshold = tol.pivot_tol * (np.max(np.abs(M)) if M.size else 0.0)
    by_size = {M.shape[0]: M}
    lowest = min(sizes.values())
    while M.shape[0] > lowest:
        M = kron_step(M, threshold)
        by_size[M.shape[0]] = M
    return AllPairsResult(q, t, {s: by_size[n] for s, n in sizes.items()}, by_size)


def persistent_spectra(F: Filtration, q: int, up_only: bool = True,
                       tol: Tolerances = DEFAULT_TOL) -> dict[tuple[float, float], np.ndarray]:
    """Sorted eigenvalues of ``Delta^{s,t}`` (or its up part) for all grid ``s <= t``."""
    out = {}
    downs = {}
    for t in F.grid:
        res = all_pairs_up_laplacians(F, q, t, tol)
        for s, up in res.matrices.items():
            M = up
            if not up_only and up.shape[0]:
                if s not in downs:
                    downs[s] = down_laplacian(F.slice(s), q)
                M = up + downs[s]
            out[(s, t)] = eigenvalues_sym(M, tol).values if M.shape[0] else np.zeros(0)
    return out


@dataclass(frozen=True)
class PersistentEigenvalueFunction:
    """k-th (1-based) persistent eigenvalue on grid pairs; None where undefined.

    Calling it on arbitrary reals ``a <= b`` evaluates the step function
    ``[a, b] -> lambda^{floor(a), floor(b)}``, floors taken in the
    filtration's birth grid. Below the first birth the value is undefined.
    """

    q: int
    k: int
    up_only: bool
    grid: tuple[float, ...]
    values: dict[tuple[float, float], float | None]

    def _floor(self, x: float) -> float | None:
        i = np.searchsorted(self.grid, x, side="right")
        return self.grid[i - 1] if i > 0 else None

    def __call__(self, a: float, b: float) -> float | None:
        if a > b:
            raise ValueError("interval needs a <= b")
        fa, fb = self._floor(a), self._floor(b)
        if fa is None:
            return None
        return self.values[(fa, fb)]

    def undefined(self) -> list[tuple[float, float]]:
        return [st for st, v in self.values.items() if v is None]


def persistent_eigenvalue_function(F: Filtration, q: int, k: int, up_only: bool = True,
                                   spectra: dict | None = None,
                                   tol: Tolerances = DEFAULT_TOL) -> PersistentEigenvalueFunction:
    if k < 1:
        raise ValueError("k is 1-based")
    if spectra is None:
        spectra = persistent_spectra(F, q, up_only, tol)
    values = {st: (float(ev[k - 1]) if k <= len(ev) else None) for st, ev in spectra.items()}
    return PersistentEigenvalueFunction(q, k, up_only, F.grid, values)


def monotonicity_violations(F: Filtration, q: int, up_only: bool = True, atol: float = 1e-8,
                            spectra: dict | None = None,
                            tol: Tolerances = DEFAULT_TOL) -> list[dict]:
    """Triples ``t1 <= t2 <= t3`` breaking eigenvalue monotonicity.

    Always checks ``lambda_k^{t1,t2} <= lambda_k^{t1,t3}``; for the up part
    also ``lambda_k^{t2,t3} <= lambda_k^{t1,t3}``, for every k defined at t1.
    """
    if spectra is None:
        spectra = persistent_spectra(F, q, up_only, tol)
    bad = []
    for t1, t2, t3 in combinations_with_replacement(F.grid, 3):
        ref = spectra[(t1, t3)]
        checks = [("start", spectra[(t1, t2)])]
        if up_only:
            checks.append(("end", spectra[(t2, t3)]))
        for kind, ev in checks:
            for k in range(len(ref)):
                if ev[k] > ref[k] + atol:
                    bad.append({"t1": t1, "t2": t2, "t3": t3, "k": k + 1, "kind": kind,
                                "lhs": float(ev[k]), "rhs": float(ref[k])})
    return bad


def four_point_violations(F: Filtration, q: int, atol: float = 1e-8,
                          spectra: dict | None = None,
                          tol: Tolerances = DEFAULT_TOL) -> list[dict]:
    """Quadruples ``t1 <= ... <= t4`` with ``lambda_up_k^{t1,t4} < lambda_up_k^{t2,t3}``."""
    if spectra is None:
        spectra = persistent_spectra(F, q, True, tol)
    bad = []
    for t1, t2, t3, t4 in combinations_with_replacement(F.grid, 4):
        outer, inner = spectra[(t1, t4)], spectra[(t2, t3)]
        for k in range(len(outer)):
            if inner[k] > outer[k] + atol:
                bad.append({"t": (t1, t2, t3, t4), "k": k + 1,
                            "outer": float(outer[k]), "inner": float(inner[k])})
    return bad


def interleaving_distance_filtrations(F1: Filtration, F2: Filtration) -> float:
    """Smallest shift making the two filtrations mutually nested.

    Equals the largest birth difference over shared simplices, or infinity
    when the simplex sets differ.
    """
    if F1.vertices != F2.vertices:
        raise ValueError("filtrations must share the same vertex set")
    if set(F1.births) != set(F2.births):
        return math.inf
    return max((abs(F1.births[s] - F2.births[s]) for s in F1.births), default=0.0)


def stability_grid(*filtrations: Filtration) -> list[float]:
    """All birth values of the given filtrations plus consecutive midpoints."""
    pts = sorted({t for F in filtrations for t in F.grid})
    mids = [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    return sorted(set(pts) | set(mids))


def interleaving_distance_functions(f, g, index_grid, atol: float = 1e-8) -> float:
    """Grid-resolved interleaving distance between two interval functions.

    ``f`` and ``g`` map ``(a, b)`` to a value or None (undefined). Intervals
    range over grid pairs ``a <= b``; candidate shifts are all pairwise
    differences of grid values. A constraint involving an undefined value is
    vacuous. Returns the smallest candidate that works, or infinity.
    """
    grid = sorted(set(float(x) for x in index_grid))
    intervals = [(a, b) for i, a in enumerate(grid) for b in grid[i:]]
    fv = {I: f(*I) for I in intervals}
    gv = {I: g(*I) for I in intervals}
    candidates = sorted({0.0} | {abs(x - y) for x in grid for y in grid})

    def ok(eps: float) -> bool:
        for (a, b) in intervals:
            for this, other, vals in ((f, g, gv), (g, f, fv)):
                target = vals[(a, b)]
                if target is None:
                    continue
                widened = this(a - eps, b + eps)
                if widened is not None and widened < target - atol:
                    return False
        return True

    for eps in candidates:
        if ok(eps):
            return eps
    return math.inf
