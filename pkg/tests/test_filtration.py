import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from perslap.checks import random_filtration
from perslap.complex import Filtration, facets
from perslap.filtration import (all_pairs_up_laplacians, four_point_violations,
                                interleaving_distance_filtrations, interleaving_distance_functions,
                                kron_step, monotonicity_violations, persistent_eigenvalue_function,
                                persistent_spectra, stability_grid)
from perslap.laplacian import hodge_laplacian, up_laplacian
from perslap.linalg import schur_complement
from perslap.persistent import persistent_laplacian_schur

UNIT = np.array([[1.0, -1.0], [-1.0, 1.0]])


def four_point_filtration():
    return Filtration.from_births({(1,): 0, (2,): 0, (3,): 1, (4,): 1,
                                  (1, 3): 2, (3, 4): 2, (2, 4): 2})


def shifted(F, eps):
    return Filtration.from_births({s: b + eps for s, b in F.births.items()})


def perturbed(rng, F, step=0.5, spread=2):
    """Births moved by small multiples of ``step``, raised where faces would come late."""
    births = {}
    for s in sorted(F.births, key=len):
        b = F.births[s] + step * int(rng.integers(-spread, spread + 1))
        if len(s) > 1:
            b = max([b] + [births[f] for f in facets(s)])
        births[s] = b
    return Filtration.from_births(births)


def test_one_step_is_single_schur():
    F = Filtration.from_births({(0,): 0, (1,): 0, (0, 1): 0, (2,): 1, (1, 2): 1})
    res = all_pairs_up_laplacians(F, 0, 1.0)
    up = up_laplacian(F.slice(1.0), 0)
    assert np.allclose(res.matrices[0.0], schur_complement(up, [2]))
    assert np.allclose(res.matrices[1.0], up)


def test_vertices_only_gives_zero():
    F = Filtration.from_births({(0,): 0, (1,): 1, (2,): 2})
    for t in F.grid:
        for M in all_pairs_up_laplacians(F, 0, t).matrices.values():
            assert not M.any()


def test_four_point_filtration():
    res = all_pairs_up_laplacians(four_point_filtration(), 0, 2.0)
    assert np.allclose(res.matrices[0.0], UNIT / 3)


def test_t_must_be_a_birth():
    with pytest.raises(ValueError):
        all_pairs_up_laplacians(four_point_filtration(), 0, 1.5)


def test_subtraction_sign_is_the_one_that_matches():
    # eliminating vertices 4 then 3 with the printed "+" form gives a wrong matrix
    F = four_point_filtration()
    up = up_laplacian(F.slice(2.0), 0)
    M = up
    for _ in range(2):
        l = M.shape[0] - 1
        M = M[:l, :l] + np.outer(M[:l, l], M[l, :l]) / M[l, l]
    assert not np.allclose(M, UNIT / 3)
    assert np.allclose(kron_step(kron_step(up)), UNIT / 3)


def test_zero_pivot_copies():
    M = np.array([[2.0, 0], [0, 0]])
    assert np.array_equal(kron_step(M, 1e-12), [[2.0]])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_all_pairs_match_pairwise(seed):
    F = random_filtration(np.random.default_rng(seed), max_simplices=25)
    for q in range(F.complex.dim + 1):
        for t in F.grid:
            res = all_pairs_up_laplacians(F, q, t)
            Kt = F.slice(t)
            if q > Kt.dim:
                continue
            assert np.allclose(res.matrices[t], up_laplacian(Kt, q))
            for s, M in res.matrices.items():
                pair = F.pair_at(s, t)
                if pair.K.n(q) == 0:
                    assert M.shape == (0, 0)
                    continue
                assert np.allclose(M, persistent_laplacian_schur(pair, q).up, atol=1e-8)
                assert np.allclose(M, M.T, atol=1e-10)
                assert np.linalg.eigvalsh(M).min() >= -1e-8
            # every one-simplex step is a Schur complement of the top matrix
            up = up_laplacian(Kt, q)
            for n, M in res.by_size.items():
                if 0 < n < up.shape[0]:
                    assert np.allclose(M, schur_complement(up, range(n, up.shape[0])), atol=1e-8)


def test_eigenvalue_function_diagonal_is_slice_spectrum():
    F = random_filtration(np.random.default_rng(3))
    for q in range(F.complex.dim + 1):
        spectra = persistent_spectra(F, q, up_only=False)
        for t in F.grid:
            Kt = F.slice(t)
            if q > Kt.dim:
                continue
            assert np.allclose(spectra[(t, t)], np.linalg.eigvalsh(hodge_laplacian(Kt, q).full), atol=1e-10)


def test_first_eigenvalue_in_degree_zero_vanishes():
    F = random_filtration(np.random.default_rng(8))
    f = persistent_eigenvalue_function(F, 0, 1)
    assert all(v is None or abs(v) < 1e-10 for v in f.values.values())


@pytest.mark.parametrize("length", [1, 2, 3, 5])
def test_endpoints_then_path(length):
    path = [0] + list(range(2, length + 1)) + [1]
    births = {(0,): 0.0, (1,): 0.0}
    births.update({(v,): 1.0 for v in path[1:-1]})
    births.update({tuple(sorted(e)): 1.0 for e in zip(path, path[1:])})
    F = Filtration.from_births(births)
    f = persistent_eigenvalue_function(F, 0, 2)
    assert f(0.0, 1.0) == pytest.approx(2 / length)
    assert f(0.2, 7.0) == pytest.approx(2 / length)
    assert f(-1.0, 1.0) is None
    with pytest.raises(ValueError):
        f(1.0, 0.0)


def test_undefined_entries_reported():
    F = four_point_filtration()
    f = persistent_eigenvalue_function(F, 0, 3)
    assert (0.0, 2.0) in f.undefined()
    assert f.values[(1.0, 2.0)] is not None
    with pytest.raises(ValueError):
        persistent_eigenvalue_function(F, 0, 0)


def test_interleaving_filtrations():
    F = random_filtration(np.random.default_rng(1))
    assert interleaving_distance_filtrations(F, F) == 0
    assert interleaving_distance_filtrations(F, shifted(F, 0.75)) == pytest.approx(0.75)
    G = Filtration.from_births({s: b for s, b in F.births.items() if len(s) == 1})
    if len(G.births) != len(F.births):
        assert interleaving_distance_filtrations(F, G) == math.inf
    H = Filtration.from_births({(99,): 0.0})
    with pytest.raises(ValueError):
        interleaving_distance_filtrations(F, H)


def test_interleaving_functions_basic():
    F = random_filtration(np.random.default_rng(2))
    f = persistent_eigenvalue_function(F, 0, 2)
    grid = stability_grid(F)
    assert interleaving_distance_functions(f, f, grid) == 0
    zero = lambda a, b: 0.0
    # the condition is two-sided: against zero it only holds when f vanishes too
    f1 = persistent_eigenvalue_function(F, 0, 1)
    assert interleaving_distance_functions(f1, zero, grid) == 0
    if any(v for v in f.values.values()):
        assert interleaving_distance_functions(f, zero, grid) > 0


def test_interleaving_functions_shift():
    F = four_point_filtration()
    G = shifted(F, 0.5)
    f = persistent_eigenvalue_function(F, 0, 2)
    g = persistent_eigenvalue_function(G, 0, 2)
    d = interleaving_distance_functions(f, g, stability_grid(F, G))
    assert d <= 0.5


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_monotonicity(seed):
    F = random_filtration(np.random.default_rng(seed))
    for q in range(F.complex.dim + 1):
        assert monotonicity_violations(F, q, up_only=True) == []
        assert monotonicity_violations(F, q, up_only=False) == []
        assert four_point_violations(F, q) == []


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_stability(seed):
    rng = np.random.default_rng(seed)
    F1 = random_filtration(rng, n_vertices=4, max_simplices=12, n_levels=3)
    F2 = perturbed(rng, F1)
    d = interleaving_distance_filtrations(F1, F2)
    grid = stability_grid(F1, F2)
    resolution = max(np.diff(grid), default=0.0)
    for q in range(F1.complex.dim):
        for k in (1, 2, 3):
            f = persistent_eigenvalue_function(F1, q, k)
            g = persistent_eigenvalue_function(F2, q, k)
            assert interleaving_distance_functions(f, g, grid) <= d + resolution
