import random

import numpy as np
import pytest

import mvtrack as mv
from mvtrack.algebra import (HomologyBasis, boundary_matrix, cone_pair, induced_map,
                             nullspace, rank, reduced_betti, relative_homology, solve)

from helpers import random_complex, closed_subsets


def test_rank_basics():
    assert rank(np.zeros((3, 4), dtype=np.int64)) == 0
    assert rank(np.eye(5, dtype=np.int64)) == 5
    assert rank(np.array([[1, 1], [1, 4]]), p=3) == 1
    assert rank(np.array([[1, 1], [1, 4]]), p=5) == 2


def test_rank_of_triangle_boundary(triangle):
    edges = [(0, 1), (0, 2), (1, 2)]
    mat = boundary_matrix([(0, 1, 2)], edges, 2)
    assert mat.shape == (3, 1)
    assert rank(mat, 2) == 1


def test_nullspace_and_solve():
    mat = np.array([[1, 1, 0], [0, 1, 1]], dtype=np.int64)
    basis = nullspace(mat, 2)
    assert basis.shape[1] == 1
    assert not ((mat @ basis) % 2).any()
    x = solve(mat, np.array([1, 0]), 2)
    assert ((mat @ x) % 2 == np.array([1, 0])).all()
    assert solve(np.zeros((2, 2), dtype=np.int64), np.array([1, 0]), 2) is None


def test_relative_homology_examples(triangle):
    top = frozenset({(0, 1, 2)})
    assert relative_homology(triangle, triangle.closure(top), triangle.mouth(top)) == (0, 0, 1)
    assert relative_homology(triangle, frozenset({(0,)}), frozenset()) == (1, 0, 0)
    assert relative_homology(triangle, triangle.simplices, triangle.simplices) == (0, 0, 0)


def test_relative_homology_of_saddle_sets(merging_saddles):
    cx = merging_saddles.cx
    seed = merging_saddles.seed
    assert relative_homology(cx, cx.closure(seed), cx.mouth(seed)) == (0, 1, 0)


def test_relative_homology_rejects_bad_pairs(triangle):
    with pytest.raises(ValueError):
        relative_homology(triangle, frozenset({(0, 1)}), frozenset())
    with pytest.raises(ValueError):
        relative_homology(triangle, frozenset({(0,)}), frozenset({(1,)}))
    with pytest.raises(ValueError):
        relative_homology(triangle, frozenset({(0,)}), frozenset(), p=4)


def test_cone_pair_examples(triangle):
    coned = cone_pair(triangle, frozenset({(0,)}), frozenset())
    assert (3,) in coned.simplices and len(coned) == 2

    edge = triangle.closure({(0, 1)})
    ends = frozenset({(0,), (1,)})
    coned = cone_pair(triangle, edge, ends)
    assert reduced_betti(coned) == (0, 1)
    assert relative_homology(triangle, edge, ends)[:2] == (0, 1)

    with pytest.raises(ValueError):
        cone_pair(triangle, edge, ends, apex=0)


def test_cone_pair_is_monotone(triangle):
    small = cone_pair(triangle, triangle.closure({(0, 1)}), frozenset({(0,)}), apex=9)
    big = cone_pair(triangle, triangle.simplices, triangle.closure({(0, 1)}), apex=9)
    assert small.simplices <= big.simplices


def test_relative_equals_coned_reduced_on_random_pairs():
    rng = random.Random(5)
    for _ in range(40):
        cx = random_complex(rng, n_vertices=5, n_maximal=3, max_dim=2, max_size=15)
        closed = closed_subsets(cx)
        pset = rng.choice(closed)
        esets = [e for e in closed if e <= pset]
        eset = rng.choice(esets)
        for p in (2, 3):
            rel = relative_homology(cx, pset, eset, p)
            red = reduced_betti(cone_pair(cx, pset, eset), p)
            padded = tuple(red) + (0,) * (len(rel) - len(red))
            assert rel == padded[:len(rel)] and not any(padded[len(rel):])


def test_euler_characteristic_consistency():
    rng = random.Random(6)
    for _ in range(30):
        cx = random_complex(rng, n_vertices=5, n_maximal=3, max_dim=2, max_size=15)
        closed = closed_subsets(cx)
        pset = rng.choice(closed)
        eset = rng.choice([e for e in closed if e <= pset])
        betti = relative_homology(cx, pset, eset, 2)
        chi_homology = sum((-1) ** k * b for k, b in enumerate(betti))
        chi_count = sum((-1) ** (len(s) - 1) for s in pset - eset)
        assert chi_homology == chi_count


RP2 = [(1, 2, 3), (1, 2, 4), (1, 3, 5), (1, 4, 6), (1, 5, 6),
       (2, 3, 6), (2, 4, 5), (2, 5, 6), (3, 4, 5), (3, 4, 6)]


def test_characteristic_matters_on_projective_plane():
    """Betti numbers over GF(2) and odd characteristics differ, which pins
    the boundary sign convention."""
    cx = mv.Complex.from_maximal(RP2)
    every = cx.simplices
    assert relative_homology(cx, every, frozenset(), 2) == (1, 1, 1)
    assert relative_homology(cx, every, frozenset(), 3) == (1, 0, 0)
    assert relative_homology(cx, every, frozenset(), 5) == (1, 0, 0)
    punctured = every - {(1,)}
    assert relative_homology(cx, cx.closure(punctured), cx.mouth(punctured), 2) \
        == (0, 1, 1)
    assert relative_homology(cx, cx.closure(punctured), cx.mouth(punctured), 3) \
        == (0, 0, 0)
    assert reduced_betti(cone_pair(cx, cx.closure(punctured), cx.mouth(punctured)), 3) \
        == (0, 0, 0)


def test_criticality_depends_on_characteristic():
    cx = mv.Complex.from_maximal(RP2)
    punctured = cx.simplices - {(1,)}
    assert cx.is_convex(punctured)
    fld = mv.MultivectorField.from_parts(cx, [punctured], complete_singletons=True)
    ident = fld.mv_id(min(punctured))
    assert fld.is_critical(ident, 2)
    assert not fld.is_critical(ident, 3)
    assert mv.invariant_part(fld, cx.simplices, 2) == cx.simplices
    assert mv.invariant_part(fld, cx.simplices, 3) == frozenset({(1,)})


def test_homology_basis_and_induced_map(triangle):
    boundary_only = mv.Complex(triangle.simplices - {(0, 1, 2)})
    hb_small = HomologyBasis(boundary_only, 2)
    assert hb_small.betti == [0, 1]
    hb_big = HomologyBasis(triangle, 2)
    assert hb_big.betti == [0, 0, 0]
    mat = induced_map(hb_small, hb_big, 1)
    assert mat.shape == (0, 1)
