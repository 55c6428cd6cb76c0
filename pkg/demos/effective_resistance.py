"""
Effective resistance and Kron reduction
=======================================

Reading edge weights as conductances, the persistent Laplacian of a pair
keeps every resistance between vertices of the smaller complex.
"""

import numpy as np

from perslap import SimplicialComplex, make_pair
from perslap.checks import random_connected_graph, random_network
from perslap.resistance import (effective_resistance_graph, kron_resistances, resistance_forms,
                                resistance_via_current, two_point_persistent_laplacian)

np.set_printoptions(precision=4, suppress=True)

# a triangle: one edge in parallel with two in series
triangle = SimplicialComplex.from_simplices([(0, 1), (1, 2), (0, 2)])
print("triangle", effective_resistance_graph(triangle, 0, 1))

# the two-vertex persistent Laplacian is the unit Laplacian scaled by 1/R
path = SimplicialComplex.from_simplices([(1, 3), (3, 4), (2, 4)])
print(two_point_persistent_laplacian(path, 1, 2))

# keep a few vertices of a weighted graph; resistances among them survive
rng = np.random.default_rng(1)
L = random_connected_graph(rng, 8, weighted=True)
K = SimplicialComplex.from_simplices([(0,), (3,), (5,)])
R_L, R_KL = kron_resistances(make_pair(K, L), 1, (0, 5))
print("in L", R_L, "through the pair", R_KL)

# inject one unit of current and read the potential drop
print("via current balance", resistance_via_current(L, (0, 5)))

# on triangles, conductances live on 2-simplices and current flows through edges
N = random_network(rng, 6, 5)
sigma = N.level(2)[0]
up, full = resistance_forms(N, sigma)
print("2-dim network, up form", up, "full form", full)
