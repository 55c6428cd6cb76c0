"""
Persistent Laplacian of a simplicial pair
=========================================

Two endpoints sit inside a path of three edges. The persistent Laplacian
sees the path only through what it does between the endpoints.
"""

import numpy as np

from perslap import SimplicialComplex, make_pair
from perslap.persistent import (naive_submatrix_counterexample, persistent_betti,
                                persistent_laplacian, persistent_spectrum)

np.set_printoptions(precision=4, suppress=True)

# K holds the endpoints 1 and 2, L joins them by the path 1-3-4-2
K = SimplicialComplex.from_simplices([(1,), (2,)])
L = SimplicialComplex.from_simplices([(1, 3), (3, 4), (2, 4)])
pair = make_pair(K, L)

# both constructions give a third of the two-vertex unit Laplacian
for method in ("schur", "reduction"):
    print(method, "\n", persistent_laplacian(pair, 0, method).full)

# one zero eigenvalue: the endpoints are joined inside L
print("spectrum", persistent_spectrum(pair, 0).values)
print("persistent Betti number", persistent_betti(pair, 0))

# cutting the K rows out of the boundary matrix of L loses the path entirely
BBt, agrees = naive_submatrix_counterexample(pair, 0)
print("naive B B^T\n", BBt, "\nmatches the Betti number:", agrees)

# parallel routes between two vertices add like conductances
edges, nxt = [], 2
for length in (1, 2, 3):
    path = [0] + list(range(nxt, nxt + length - 1)) + [1]
    nxt += length - 1
    edges += list(zip(path, path[1:]))
routes = make_pair(SimplicialComplex.from_simplices([(0,), (1,)]),
                   SimplicialComplex.from_simplices(edges))
print("routes of length 1, 2, 3\n", persistent_laplacian(routes, 0).full)
print("expected factor", 1 + 1 / 2 + 1 / 3)

# a hollow triangle filled in: the loop of K dies in L
circle = SimplicialComplex.from_simplices([(0, 1), (1, 2), (0, 2)])
disk = SimplicialComplex.from_simplices([(0, 1, 2)])
print("loop survives in the disk:", persistent_betti(make_pair(circle, disk), 1))
print("loop survives in itself:", persistent_betti(make_pair(circle, circle), 1))
