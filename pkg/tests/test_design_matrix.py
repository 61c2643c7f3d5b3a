import itertools
from math import gcd, prod

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hmgraver.complex_core import HMPair, SimplicialComplex, enumerate_pairs, extend, faces
from hmgraver.design_matrix import (DesignMatrix, bareiss_det, build_design_matrix,
                                    ghost_repeat, in_kernel, integer_kernel_basis,
                                    kernels_equal, lambda_lift, marginal_matrix, rank)

PATH_322_CSV = """\
1,1,1,1,1,1,1,1,1,1,1,1
1,1,1,1,0,0,0,0,0,0,0,0
0,0,0,0,1,1,1,1,0,0,0,0
1,1,0,0,1,1,0,0,1,1,0,0
1,0,1,0,1,0,1,0,1,0,1,0
1,1,0,0,0,0,0,0,0,0,0,0
0,0,0,0,1,1,0,0,0,0,0,0
1,0,0,0,1,0,0,0,1,0,0,0"""

DISJOINT_10 = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, 0, 0, 0, 0],
    [1, 1, 0, 0, 1, 1, 0, 0],
    [1, 0, 1, 0, 1, 0, 1, 0],
    [1, 1, 0, 0, 0, 0, 0, 0],
]

A = np.array([[1, 1, 0], [0, 1, 1]])

# every weighted complex on at most 3 vertices with weights in {2,3,4}
SMALL = list(enumerate_pairs(3, (2, 3, 4)))
small_pairs = st.sampled_from(SMALL)


def test_path_matrix_csv():
    D = build_design_matrix(HMPair.parse("12 23", (3, 2, 2)))
    assert D.shape == (8, 12)
    assert D.to_csv() == PATH_322_CSV
    assert D.rows[0] == ((), ())
    assert D.rows[-1] == (("2", "3"), (1, 1))
    assert D.cols[:3] == ((1, 1, 1), (1, 1, 2), (1, 2, 1))


def test_disjoint_simplices_matrix():
    D = build_design_matrix(HMPair.parse("12 3", (2, 2, 2)))
    assert D.entries.tolist() == DISJOINT_10


def test_dual_nucleus_matrix():
    # D_{1,0} is the dual of {12, 3}: facets 1 and 2, with 3 a ghost
    D = build_design_matrix(HMPair.parse("1 2", (2, 2, 2), ground="123"))
    assert D.entries.tolist() == DISJOINT_10[:3]


def test_ghost_only_row():
    D = build_design_matrix(HMPair(SimplicialComplex(("1",), [frozenset()]), (5,)))
    assert D.entries.tolist() == [[1] * 5]


def test_json_round_trip():
    D = build_design_matrix(HMPair.parse("12 23", (3, 2, 2)))
    assert DesignMatrix.from_json(D.to_json()) == D


@settings(max_examples=150, deadline=None)
@given(small_pairs)
def test_counts_and_full_rank(pair):
    D = build_design_matrix(pair)
    wm = pair.weight_map()
    nrows = sum(prod(wm[v] - 1 for v in F) for F in faces(pair.complex))
    assert D.shape == (nrows, prod(pair.weights))
    assert rank(D) == nrows


@settings(max_examples=150, deadline=None)
@given(small_pairs)
def test_row_blocks(pair):
    D = build_design_matrix(pair)
    assert D.entries[0].tolist() == [1] * D.shape[1]
    # within the rows of one face, each column has at most one 1, and exactly
    # one when its state avoids the top value on every vertex of the face
    for F in faces(pair.complex):
        fv = pair.complex.sort_face(F)
        block = [k for k, (f, _) in enumerate(D.rows) if f == fv]
        sums = D.entries[block].sum(axis=0)
        idx = [pair.complex.index(v) for v in fv]
        for c, s in zip(D.cols, sums):
            expected = int(all(c[i] < pair.weights[i] for i in idx))
            assert s == expected


@settings(max_examples=100, deadline=None)
@given(small_pairs, st.integers(2, 3))
def test_ghost_contract(pair, q):
    G = HMPair(extend(pair.complex, "ghost", "g"), (q,) + pair.weights)
    assert np.array_equal(ghost_repeat(build_design_matrix(pair), q),
                          build_design_matrix(G).entries)


@settings(max_examples=60, deadline=None)
@given(small_pairs, st.integers(2, 3))
def test_lambda_contract(pair, p):
    if pair.complex.is_full_simplex() or prod(pair.weights) * p > 60:
        return
    L = HMPair(extend(pair.complex, "lawrence", "l"), (p,) + pair.weights)
    assert kernels_equal(lambda_lift(build_design_matrix(pair), p), build_design_matrix(L))


def test_marginal_kernel_agrees():
    for pair in SMALL[::7]:
        assert kernels_equal(marginal_matrix(pair), build_design_matrix(pair))


def test_ghost_repeat_examples():
    assert ghost_repeat(A, 2).tolist() == [[1, 1, 0, 1, 1, 0], [0, 1, 1, 0, 1, 1]]
    assert np.array_equal(ghost_repeat(A, 1), A)
    D0 = build_design_matrix(HMPair.parse("1", (2,)))
    GD0 = build_design_matrix(HMPair(extend(SimplicialComplex.parse("1"), "ghost", "g"), (2, 2)))
    assert np.array_equal(ghost_repeat(D0, 2), GD0.entries)


def test_lambda_lift_examples():
    L2 = lambda_lift(A, 2)
    assert L2.tolist() == [[1, 1, 0, 0, 0, 0], [0, 1, 1, 0, 0, 0],
                           [1, 0, 0, 1, 0, 0], [0, 1, 0, 0, 1, 0], [0, 0, 1, 0, 0, 1]]
    L3 = lambda_lift(A, 3)
    assert L3.shape == (7, 9)
    assert np.array_equal(L3[:2, :3], A) and np.array_equal(L3[2:4, 3:6], A)
    assert not L3[:4, 6:].any()


def test_lambda_lift_kernel_path():
    pair = HMPair.parse("12 23", (2, 2, 2))
    L = HMPair(extend(pair.complex, "lawrence", "l"), (2,) + pair.weights)
    assert kernels_equal(lambda_lift(build_design_matrix(pair), 2), build_design_matrix(L))


def test_kernel_basis_examples():
    B = integer_kernel_basis(A)
    assert rank(A) == 2
    assert [tuple(abs(x) for x in v) for v in B] == [(1, 1, 1)]
    assert B[0][0] == -B[0][1] == B[0][2]
    assert integer_kernel_basis(np.eye(3, dtype=int)) == []
    v, = integer_kernel_basis(np.array([[1, 1]]))
    assert tuple(v) in {(1, -1), (-1, 1)}


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=5, max_size=5), min_size=1, max_size=4))
def test_kernel_basis_properties(rows):
    M = np.array(rows)
    B = integer_kernel_basis(M)
    assert len(B) == M.shape[1] - rank(M)
    assert all(in_kernel(M, v) for v in B)
    if B:
        # a lattice basis of a saturated lattice: maximal minors have gcd 1
        K = np.array(B, dtype=object)
        r = len(B)
        g = 0
        for cols in itertools.combinations(range(M.shape[1]), r):
            g = gcd(g, int(bareiss_det(K[:, list(cols)])))
        assert g == 1


def test_kernels_equal_examples():
    assert kernels_equal(A, A)
    assert not kernels_equal(np.array([[1, 0]]), np.array([[0, 1]]))
    with pytest.raises(ValueError):
        kernels_equal(np.array([[1, 0]]), np.array([[1, 0, 0]]))


def test_bareiss():
    assert bareiss_det(np.array([[2, 1], [1, 3]])) == 5
    assert bareiss_det(np.array([[0, 1], [1, 0]])) == -1
    assert bareiss_det(np.array([[1, 2], [2, 4]])) == 0
    M = np.array([[3, 1, 4], [1, 5, 9], [2, 6, 5]])
    assert bareiss_det(M) == round(np.linalg.det(M))
