"""
Cheeger constants for graph pairs
=================================

Counting edge-distinct trails across cuts of the smaller vertex set gives an
upper bound on the second persistent eigenvalue.
"""

from itertools import combinations

from perslap import SimplicialComplex, make_pair
from perslap.cheeger import cheeger_report, enumerate_trails

# two routes of lengths 1 and 2: two trails, lambda_2 = 2 (1 + 1/2)
L = SimplicialComplex.from_simplices([(0, 1), (0, 2), (1, 2)])
pair = make_pair(SimplicialComplex.from_simplices([(0,), (1,)]), L)
print(enumerate_trails(L, {0}, {1}).trails)
print(cheeger_report(pair))

# three routes of length 2 also admit zigzag trails
routes = SimplicialComplex.from_simplices([(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)])
print("trails", len(enumerate_trails(routes, {0}, {1})),
      "interior-avoiding", len(enumerate_trails(routes, {0}, {1}, strong=True)))

# every graph on four labelled vertices, every choice of at least two kept vertices
slots = list(combinations(range(4), 2))
worst = 0.0
for mask in range(1 << len(slots)):
    edges = [e for i, e in enumerate(slots) if mask >> i & 1]
    L = SimplicialComplex.from_simplices([(v,) for v in range(4)] + edges)
    for r in range(2, 5):
        for VK in combinations(range(4), r):
            rep = cheeger_report(make_pair(SimplicialComplex.from_simplices([(v,) for v in VK]), L))
            worst = max(worst, rep["lambda_0_2"] - rep["h"])
print("largest lambda_2 - h over four-vertex pairs:", worst)
