"""Oriented simplicial complexes, pairs and filtrations.

A simplex is a strictly increasing tuple of non-negative vertex labels; the
sorted order fixes its orientation. Every complex keeps, per dimension, an
explicit ordering of its simplices. Matrices built from a complex (boundary
maps, Laplacians) always use that ordering for rows and columns.
"""
from __future__ import annotations

import math
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

Simplex = tuple[int, ...]

__all__ = [
    "Simplex",
    "ParseError",
    "SimplicialComplex",
    "SimplicialPair",
    "Filtration",
    "facets",
    "boundary_matrix",
    "boundary_vector",
    "make_pair",
    "parse_complex",
    "parse_filtration",
    "serialize_complex",
    "serialize_filtration",
]


class ParseError(ValueError):
    """Raised for malformed or inconsistent complex/filtration text."""


def facets(simplex: Simplex) -> list[Simplex]:
    """Codimension-one faces, the i-th one omitting vertex i."""
    return [simplex[:i] + simplex[i + 1:] for i in range(len(simplex))]


def _canonical(vertices: Iterable[int]) -> Simplex:
    s = tuple(int(v) for v in vertices)
    if any(v < 0 for v in s):
        raise ValueError(f"negative vertex label in {s}")
    if any(a >= b for a, b in zip(s, s[1:])):
        srt = tuple(sorted(s))
        if len(set(srt)) != len(srt):
            raise ValueError(f"repeated vertex in {s}")
        return srt
    return s


def _closure(simplices: Iterable[Simplex]) -> set[Simplex]:
    out: set[Simplex] = set()
    stack = list(simplices)
    while stack:
        s = stack.pop()
        if s in out or not s:
            continue
        out.add(s)
        if len(s) > 1:
            stack.extend(facets(s))
    return out


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """Finite simplicial complex with an ordered simplex list per dimension.

    ``simplices[q]`` lists the q-simplices in basis order. ``weights`` maps a
    simplex to a positive weight; missing entries mean weight 1.
    """

    simplices: tuple[tuple[Simplex, ...], ...]
    weights: Mapping[Simplex, float] = field(default_factory=dict)
    _index: tuple[dict[Simplex, int], ...] = field(init=False, repr=False)

    def __post_init__(self):
        simplices = tuple(tuple(_canonical(s) for s in level) for level in self.simplices)
        while simplices and not simplices[-1]:
            simplices = simplices[:-1]
        index = []
        for q, level in enumerate(simplices):
            idx = {}
            for i, s in enumerate(level):
                if len(s) != q + 1:
                    raise ValueError(f"simplex {s} listed in dimension {q}")
                if s in idx:
                    raise ValueError(f"duplicate simplex {s}")
                idx[s] = i
            index.append(idx)
        for q in range(1, len(simplices)):
            for s in simplices[q]:
                for f in facets(s):
                    if f not in index[q - 1]:
                        raise ValueError(f"face {f} of {s} is missing")
        weights = {}
        for s, w in dict(self.weights).items():
            s = _canonical(s)
            if not (len(s) - 1 < len(index) and s in index[len(s) - 1]):
                raise ValueError(f"weight given for unknown simplex {s}")
            w = float(w)
            if not (w > 0 and math.isfinite(w)):
                raise ValueError(f"weight of {s} must be positive, got {w}")
            if w != 1.0:
                weights[s] = w
        object.__setattr__(self, "simplices", simplices)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "_index", tuple(index))

    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable[int]],
                       weights: Mapping[Simplex, float] | None = None,
                       close: bool = True) -> "SimplicialComplex":
        """Build a complex in canonical order (dimension, then lexicographic)."""
        given = {_canonical(s) for s in simplices}
        given.discard(())
        allsimp = _closure(given) if close else given
        dim = max((len(s) - 1 for s in allsimp), default=-1)
        levels = [sorted(s for s in allsimp if len(s) == q + 1) for q in range(dim + 1)]
        w = {_canonical(k): v for k, v in (weights or {}).items()}
        return cls(tuple(tuple(lv) for lv in levels), w)

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def n(self, q: int) -> int:
        """Number of q-simplices (0 outside ``0..dim``)."""
        if 0 <= q < len(self.simplices):
            return len(self.simplices[q])
        return 0

    def level(self, q: int) -> tuple[Simplex, ...]:
        if 0 <= q < len(self.simplices):
            return self.simplices[q]
        return ()

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(s[0] for s in self.level(0))

    def index(self, simplex: Iterable[int]) -> int:
        s = _canonical(simplex)
        return self._index[len(s) - 1][s]

    def __contains__(self, simplex) -> bool:
        s = _canonical(simplex)
        q = len(s) - 1
        return 0 <= q < len(self._index) and s in self._index[q]

    def __iter__(self):
        for level in self.simplices:
            yield from level

    def __len__(self) -> int:
        return sum(len(level) for level in self.simplices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.simplices == other.simplices and self.weights == other.weights

    __hash__ = None

    def __repr__(self) -> str:
        counts = ", ".join(str(len(lv)) for lv in self.simplices)
        return f"SimplicialComplex(dim={self.dim}, counts=[{counts}])"

    def weight(self, simplex: Simplex) -> float:
        return self.weights.get(_canonical(simplex), 1.0)

    def weight_vector(self, q: int) -> np.ndarray:
        return np.array([self.weights.get(s, 1.0) for s in self.level(q)], dtype=float)

    def has_unit_weights(self, q: int | None = None) -> bool:
        if q is None:
            return not self.weights
        return all(len(s) != q + 1 for s in self.weights)

    def reordered(self, orders: Iterable[Iterable[Simplex]]) -> "SimplicialComplex":
        """Same complex with the given per-dimension orderings."""
        levels = tuple(tuple(_canonical(s) for s in lv) for lv in orders)
        if [sorted(lv) for lv in levels] != [sorted(lv) for lv in self.simplices]:
            raise ValueError("reordering must be a permutation of each dimension")
        return SimplicialComplex(levels, self.weights)

    def subcomplex(self, keep) -> "SimplicialComplex":
        """Sub-complex of simplices for which ``keep(simplex)`` is true, order kept."""
        levels = tuple(tuple(s for s in lv if keep(s)) for lv in self.simplices)
        kept = {s for lv in levels for s in lv}
        return SimplicialComplex(levels, {s: w for s, w in self.weights.items() if s in kept})


def _boundary(K: SimplicialComplex, q: int) -> np.ndarray:
    rows = K.level(q - 1)
    cols = K.level(q)
    B = np.zeros((len(rows) if q > 0 else 0, len(cols)), dtype=np.int8)
    if q == 0:
        return B
    row_index = K._index[q - 1]
    for j, s in enumerate(cols):
        for i, f in enumerate(facets(s)):
            B[row_index[f], j] = 1 if i % 2 == 0 else -1
    return B


def boundary_matrix(K: SimplicialComplex, q: int) -> np.ndarray:
    """Signed boundary matrix of shape ``(n_{q-1}, n_q)`` with int8 entries.

    ``q = 0`` gives the ``0 x n_0`` matrix. ``q = dim + 1`` is accepted and
    gives an ``n_dim x 0`` matrix so that up-Laplacians at the top dimension
    need no special casing.
    """
    if q < 0 or q > K.dim + 1:
        raise ValueError(f"q={q} out of range for a complex of dimension {K.dim}")
    return _boundary(K, q)


def boundary_vector(K: SimplicialComplex, simplex: Iterable[int]) -> np.ndarray:
    """Coordinates of the formal boundary of ``simplex`` in ``C_{q-1}(K)``.

    ``simplex`` need not belong to ``K`` but all of its facets must.
    """
    s = _canonical(simplex)
    q = len(s) - 1
    if q < 1:
        raise ValueError("boundary of a vertex is zero by convention")
    v = np.zeros(K.n(q - 1))
    for i, f in enumerate(facets(s)):
        if f not in K:
            raise ValueError(f"facet {f} of {s} is not in the complex")
        v[K.index(f)] = 1.0 if i % 2 == 0 else -1.0
    return v


@dataclass(frozen=True, eq=False)
class SimplicialPair:
    """A pair ``K -> L`` whose orderings put K's simplices first in every dimension."""

    K: SimplicialComplex
    L: SimplicialComplex

    def __post_init__(self):
        for q in range(self.L.dim + 1):
            nk = self.K.n(q)
            if self.L.level(q)[:nk] != self.K.level(q):
                raise ValueError(f"ordering convention violated in dimension {q}")
        if self.K.dim > self.L.dim:
            raise ValueError("K is not contained in L")
        for s, w in self.K.weights.items():
            if self.L.weight(s) != w:
                raise ValueError(f"weight mismatch on shared simplex {s}")
        for s, w in self.L.weights.items():
            if s in self.K and self.K.weight(s) != w:
                raise ValueError(f"weight mismatch on shared simplex {s}")

    def n_K(self, q: int) -> int:
        return self.K.n(q)

    def n_L(self, q: int) -> int:
        return self.L.n(q)

    def complement(self, q: int) -> np.ndarray:
        """0-based indices of L's q-simplices that are not in K."""
        return np.arange(self.K.n(q), self.L.n(q))


def make_pair(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialPair:
    """Reorder L so K's simplices come first in each dimension (stable)."""
    for s in K:
        if s not in L:
            raise ValueError(f"simplex {s} of K is not in L")
    for s in K:
        if K.weight(s) != L.weight(s):
            raise ValueError(f"weight mismatch on shared simplex {s}")
    orders = []
    for q in range(L.dim + 1):
        lv = L.level(q)
        orders.append([s for s in lv if s in K] + [s for s in lv if s not in K])
    L2 = L.reordered(orders)
    K2 = K.reordered([orders[q][:K.n(q)] for q in range(K.dim + 1)])
    return SimplicialPair(K2, L2)


@dataclass(frozen=True, eq=False)
class Filtration:
    """Simplices of a complex tagged with birth values.

    The global order sorts each dimension by (birth, lexicographic), so every
    slice is a prefix per dimension and ``pair_at`` needs no reordering.
    """

    complex: SimplicialComplex
    births: Mapping[Simplex, float]
    grid: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        births = {_canonical(s): float(t) for s, t in dict(self.births).items()}
        K = self.complex
        for s in K:
            if s not in births:
                raise ValueError(f"no birth value for {s}")
            if not math.isfinite(births[s]):
                raise ValueError(f"birth of {s} must be finite")
        if len(births) != len(K):
            raise ValueError("birth values given for simplices outside the complex")
        for s in K:
            if len(s) > 1:
                for f in facets(s):
                    if births[f] > births[s]:
                        raise ValueError(f"face {f} is born after its coface {s}")
        orders = [sorted(lv, key=lambda s: (births[s], s)) for lv in K.simplices]
        object.__setattr__(self, "complex", K.reordered(orders))
        object.__setattr__(self, "births", births)
        object.__setattr__(self, "grid", tuple(sorted(set(births.values()))))

    @classmethod
    def from_births(cls, births: Mapping[Iterable[int], float],
                    weights: Mapping[Simplex, float] | None = None) -> "Filtration":
        b = {_canonical(s): float(t) for s, t in births.items()}
        return cls(SimplicialComplex.from_simplices(b, weights, close=False), b)

    def birth(self, simplex) -> float:
        return self.births[_canonical(simplex)]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.complex.vertices))

    def simplex_order(self) -> list[Simplex]:
        """One-simplex-at-a-time refinement: ties broken by dimension, then lexicographically."""
        return sorted(self.complex, key=lambda s: (self.births[s], len(s), s))

    def slice(self, t: float) -> SimplicialComplex:
        return self.complex.subcomplex(lambda s: self.births[s] <= t)

    def floor(self, t: float) -> float | None:
        """Largest grid value ``<= t``; None below the first birth."""
        i = np.searchsorted(self.grid, t, side="right")
        return self.grid[i - 1] if i > 0 else None

    def pair_at(self, s: float, t: float) -> SimplicialPair:
        if s > t:
            raise ValueError(f"need s <= t, got s={s}, t={t}")
        return SimplicialPair(self.slice(s), self.slice(t))


_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|[-+]?inf"
_FIELD = re.compile(rf"^\s*([tw])\s*=\s*({_NUM})\s*$")


def _parse_records(text: str) -> dict[Simplex, dict[str, float]]:
    records: dict[Simplex, dict[str, float]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *extras = line.split(";")
        try:
            verts = [int(tok) for tok in head.split()]
        except ValueError:
            raise ParseError(f"line {lineno}: bad vertex list {head.strip()!r}") from None
        if not verts:
            raise ParseError(f"line {lineno}: no vertices")
        if any(v < 0 for v in verts):
            raise ParseError(f"line {lineno}: vertex labels must be non-negative")
        if len(set(verts)) != len(verts):
            raise ParseError(f"line {lineno}: repeated vertex")
        rec: dict[str, float] = {}
        for ex in extras:
            m = _FIELD.match(ex)
            if not m:
                raise ParseError(f"line {lineno}: cannot parse field {ex.strip()!r}")
            key, val = m.group(1), float(m.group(2))
            if key in rec:
                raise ParseError(f"line {lineno}: field {key} given twice")
            if key == "w" and not (val > 0 and math.isfinite(val)):
                raise ParseError(f"line {lineno}: weight must be positive, got {val}")
            if key == "t" and not math.isfinite(val):
                raise ParseError(f"line {lineno}: birth must be finite")
            rec[key] = val
        s = tuple(sorted(verts))
        if s in records:
            old = records[s]
            for key in ("t", "w"):
                if old.get(key, None if key == "t" else 1.0) != rec.get(key, None if key == "t" else 1.0):
                    raise ParseError(f"line {lineno}: duplicate simplex {s} with conflicting {key}")
        records[s] = rec
    return records


def _complete(records: dict[Simplex, dict[str, float]], strict: bool):
    """Fill in missing faces, weights and births; returns (births, weights)."""
    allsimp = _closure(records)
    missing = allsimp - set(records)
    if strict and missing:
        raise ParseError(f"missing faces (strict mode): {sorted(missing)[:5]}")
    births: dict[Simplex, float] = {}
    weights = {s: r["w"] for s, r in records.items() if "w" in r}
    for s in sorted(allsimp, key=len, reverse=True):
        rec = records.get(s)
        if rec is not None:
            births[s] = rec.get("t", 0.0)
        else:
            cof = [births[c] for c in allsimp if len(c) == len(s) + 1 and set(s) <= set(c)]
            births[s] = min(cof)
    for s, t in births.items():
        if len(s) > 1:
            for f in facets(s):
                if births[f] > t:
                    raise ParseError(f"face {f} (t={births[f]}) is born after {s} (t={t})")
    return births, weights


def parse_complex(text: str, strict: bool = False) -> SimplicialComplex:
    """Parse the line format ``v0 v1 ... vq [; t=<real>] [; w=<real>]``.

    Birth values are validated but dropped; use :func:`parse_filtration` to
    keep them. Missing faces are inserted with weight 1 unless ``strict``.
    """
    births, weights = _complete(_parse_records(text), strict)
    return SimplicialComplex.from_simplices(births, weights, close=False)


def parse_filtration(text: str, strict: bool = False) -> Filtration:
    """Parse a filtration; a missing ``t`` means 0 and inserted faces take the
    earliest birth among their cofaces."""
    births, weights = _complete(_parse_records(text), strict)
    return Filtration(SimplicialComplex.from_simplices(births, weights, close=False), births)


def _fmt(x: float) -> str:
    return repr(float(x))


def serialize_complex(K: SimplicialComplex) -> str:
    lines = []
    for s in sorted(K, key=lambda s: (len(s), s)):
        line = " ".join(map(str, s))
        if s in K.weights:
            line += f" ; w={_fmt(K.weights[s])}"
        lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")


def serialize_filtration(F: Filtration) -> str:
    lines = []
    for s in F.simplex_order():
        line = " ".join(map(str, s)) + f" ; t={_fmt(F.births[s])}"
        if s in F.complex.weights:
            line += f" ; w={_fmt(F.complex.weights[s])}"
        lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")
