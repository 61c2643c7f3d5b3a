import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hmgraver.complex_core import HMPair, SimplicialComplex, enumerate_pairs
from hmgraver.design_matrix import (build_design_matrix, column_states, ghost_repeat,
                                    in_kernel, lambda_lift)
from hmgraver.graver_engine import (GraverBasis, GuardError, SignedVector,
                                    graver_disjoint_nucleus, graver_dual_nucleus,
                                    graver_for_unimodular_pair, graver_from_certificate,
                                    graver_oracle, graver_oracle_pair,
                                    is_valid_unimodular_graver_element, lift_cone,
                                    lift_ghost, lift_lambda2, lift_lambda3_over_ghost,
                                    sample_graver)
from hmgraver.unimodularity import certificates, classify

A = np.array([[1, 1, 0], [0, 1, 1]])
V = (1, -1, 1)


def e(*terms):
    """Vector over binary 3-vertex states from (coefficient, 'ijk') terms."""
    cols = list(itertools.product((1, 2), repeat=3))
    v = [0] * 8
    for c, s in terms:
        v[cols.index(tuple(int(x) for x in s))] += c
    return v


def is_conformal_sum_free(B: GraverBasis):
    """No element is u + w with u, w other elements conformal to it."""
    elems = [np.array(v) for v in B] + [-np.array(v) for v in B]
    bag = {tuple(v) for v in elems}
    for x in elems:
        for u in elems:
            if np.array_equal(u, x):
                continue
            if np.all(u * x >= 0) and np.all(np.abs(u) <= np.abs(x)) and tuple(x - u) in bag:
                return False
    return True


def circuits_only(M, B):
    """Every element has a support that is minimal among kernel supports."""
    from hmgraver.design_matrix import rank
    M = np.asarray(M)
    for v in B:
        supp = [k for k, x in enumerate(v) if x]
        if rank(M[:, supp]) != len(supp) - 1:
            return False
    return True


# -- the oracle -----------------------------------------------------------------

def test_oracle_small_examples():
    assert graver_oracle(A).elements == (V,)
    assert len(graver_oracle(np.array([[2, 1], [1, 1]]))) == 0
    B = graver_oracle_pair(HMPair.parse("12 3", (2, 2, 2)))
    assert len(B) == 6
    assert e((1, "221"), (1, "212"), (-1, "222"), (-1, "211")) in B


def test_oracle_guard():
    with pytest.raises(GuardError):
        graver_oracle(np.ones((1, 20), dtype=int), max_columns=10)


def test_oracle_non_unimodular_entries():
    # the triangle with weights 3 has a Graver element with an entry 2
    B = graver_oracle_pair(HMPair.parse("12 13 23", (3, 3, 3)))
    assert B.max_abs() == 2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-2, 2), min_size=5, max_size=5), min_size=1, max_size=3))
def test_oracle_soundness(rows):
    M = np.array(rows)
    B = graver_oracle(M)
    assert all(in_kernel(M, v) for v in B)
    assert is_conformal_sum_free(B)


# -- nucleus bases ------------------------------------------------------------

def test_disjoint_nucleus_examples():
    B = graver_disjoint_nucleus(1, 0, (2, 2, 2))
    assert e((1, "221"), (1, "212"), (-1, "222"), (-1, "211")) in B
    assert graver_disjoint_nucleus(0, 0, (2, 2)).elements == ((1, -1, -1, 1),)


def test_dual_nucleus_examples():
    B = graver_dual_nucleus(1, 0)
    assert e((1, "221"), (1, "111"), (-1, "211"), (-1, "121")) in B
    assert len(graver_dual_nucleus(0, 0)) == 6
    assert all(sum(v) == 0 for v in graver_dual_nucleus(0, 0))


@pytest.mark.parametrize("m,n", [(0, 0), (1, 0), (1, 1)])
def test_dual_nucleus_in_kernel_and_oracle(m, n):
    B = graver_dual_nucleus(m, n)
    pair = HMPair(SimplicialComplex(B.ground, _dual_facets(m, n)), B.weights)
    D = build_design_matrix(pair)
    assert all(in_kernel(D, v) for v in B)
    assert B == graver_oracle_pair(pair)


def _dual_facets(m, n):
    left = [str(k) for k in range(1, m + 2)]
    right = [str(k) for k in range(m + 2, m + n + 3)]
    g = frozenset(left + right)
    return [g - {p, q} for p in left for q in right]


@pytest.mark.parametrize("m,n,d", [(0, 0, (2, 2)), (0, 0, (3, 3)), (0, 0, (2, 4)),
                                   (1, 0, (2, 2, 2)), (1, 0, (3, 2, 2)), (1, 1, (2, 2, 2, 2))])
def test_disjoint_nucleus_matches_oracle(m, n, d):
    B = graver_disjoint_nucleus(m, n, d)
    left = "".join(str(k) for k in range(1, m + 2))
    right = "".join(str(k) for k in range(m + 2, m + n + 3))
    assert B == graver_oracle_pair(HMPair.parse(f"{left} {right}", d))


# -- lifts over the small matrix A -----------------------------------------------

def test_lift_cone():
    B = graver_oracle(A)
    for q in (2, 3):
        L = lift_cone(B, q)
        M = np.kron(np.eye(q, dtype=int), A)
        assert len(L) == q * len(B)
        assert set(L) == set(graver_oracle(M))
    assert set(lift_cone(B, 2)) == {V + (0, 0, 0), (0, 0, 0) + V}
    assert len(lift_cone(graver_oracle(np.eye(2, dtype=int)), 2)) == 0


def test_lift_ghost():
    B = graver_oracle(A)
    for q in (2, 3):
        L = lift_ghost(B, q)
        n = A.shape[1]
        assert len(L) == n * q * (q - 1) // 2 + sum(q ** sum(1 for x in u if x) for u in B)
        assert set(L) == set(graver_oracle(ghost_repeat(A, q)))
    assert len(lift_ghost(B, 2)) == 11
    empty = graver_oracle(np.eye(3, dtype=int))
    assert len(lift_ghost(empty, 2)) == 3
    assert set(lift_ghost(B, 1)) == set(B)


def test_lift_ghost_rejects_large_entries():
    B = GraverBasis(range(2), [(1, -2)])
    with pytest.raises(ValueError):
        lift_ghost(B, 2)


def test_lift_lambda2():
    B = graver_oracle(A)
    L = lift_lambda2(B)
    assert L.elements == (V + (-1, 1, -1),)
    assert set(L) == set(graver_oracle(lambda_lift(A, 2)))
    assert all(in_kernel(lambda_lift(A, 2), v) for v in L)
    assert len(lift_lambda2(graver_oracle(np.eye(2, dtype=int)))) == 0


def _part(*slots):
    """One part of a vector of Lambda_3 G_3 A: slot vectors listed in order."""
    out = []
    for s in slots:
        out.extend(s)
    return out


E1, E2, E3, Z = (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0)


def neg(x):
    return tuple(-a for a in x)


def add(x, y):
    return tuple(a + b for a, b in zip(x, y))


def test_lambda3_base():
    B3 = graver_oracle(lambda_lift(A, 3))
    assert len(B3) == 3
    forms = {V + neg(V) + Z, V + Z + neg(V), Z + V + neg(V)}
    assert set(B3) == forms


@pytest.mark.parametrize("q", [2, 3])
def test_lambda3_over_ghost_matches_oracle(q):
    B3 = graver_oracle(lambda_lift(A, 3))
    L = lift_lambda3_over_ghost(B3, q, 3)
    M = lambda_lift(ghost_repeat(A, q), 3)
    assert all(in_kernel(M, v) for v in L)
    if q == 2:
        assert set(L) == set(graver_oracle(M))
        assert len(L) == 177


def test_lambda3_quoted_vectors():
    B3 = graver_oracle(lambda_lift(A, 3))
    L = lift_lambda3_over_ghost(B3, 3, 3)
    spread = _part(add(E1, E3), neg(E2), Z) + _part(neg(add(E1, E3)), E2, Z) + _part(Z, Z, Z)
    swap = _part(E1, neg(E1), Z) + _part(neg(E1), E1, Z) + _part(Z, Z, Z)
    moved = _part(E1, neg(E1), Z) + _part(neg(E1), Z, E1) + _part(Z, E1, neg(E1))
    for v in (spread, swap, moved):
        assert v in L


# -- the full pipeline ----------------------------------------------------------

PIPELINE_PAIRS = [
    HMPair.parse("1 2", (3, 3)),
    HMPair.parse("12 3", (2, 2, 2)),
    HMPair.parse("12 3", (3, 2, 2)),
    HMPair.parse("12 13 23", (2, 2, 2)),
    HMPair.parse("12 3", (2, 2, 2, 3), ground="1234"),
    HMPair.parse("12 13 23", (3, 2, 2)),
]


@pytest.mark.parametrize("pair", PIPELINE_PAIRS, ids=repr)
def test_pipeline_matches_oracle(pair):
    oracle = graver_oracle_pair(pair)
    for cert in certificates(pair):
        assert set(graver_from_certificate(pair, cert)) == set(oracle)


def test_pipeline_simplex_empty():
    assert len(graver_for_unimodular_pair(HMPair.parse("123", (5, 9, 2)))) == 0


def test_pipeline_triangle_single_element():
    assert len(graver_for_unimodular_pair(HMPair.parse("12 13 23", (2, 2, 2)))) == 1


def test_pipeline_rejects_nonunimodular():
    with pytest.raises(ValueError):
        graver_for_unimodular_pair(HMPair.parse("12 13 23", (3, 3, 3)))


UNIMODULAR_SMALL = [p for p in enumerate_pairs(3, (2, 3), max_columns=18) if classify(p).unimodular]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(UNIMODULAR_SMALL))
def test_unimodular_graver_is_circuits(pair):
    B = graver_for_unimodular_pair(pair)
    D = build_design_matrix(pair)
    assert B.max_abs() <= 1
    assert circuits_only(D.entries, B)
    assert set(B) == set(graver_oracle_pair(pair))


# -- sampling -------------------------------------------------------------------

def test_sample_membership_and_determinism():
    pair = HMPair.parse("12 3", (2, 2, 2))
    B = graver_oracle_pair(pair)
    D = build_design_matrix(pair)
    cols = column_states(pair)
    for seed in range(50):
        v = sample_graver(pair, seed)
        assert isinstance(v, SignedVector)
        assert v.to_dense(cols) in B
        assert is_valid_unimodular_graver_element(D.entries, v.to_dense(cols))
    assert sample_graver(pair, 7) == sample_graver(pair, 7)


def test_sample_empty_basis():
    with pytest.raises(ValueError):
        sample_graver(HMPair.parse("123", (2, 2, 2)), 0)


@pytest.mark.parametrize("pair", [HMPair.parse("12 13 23", (3, 2, 2)),
                                  HMPair.parse("12 3", (2, 2, 2, 3), ground="1234"),
                                  HMPair.parse("13 14 23 24", (2, 2, 2, 2))], ids=repr)
def test_sample_other_pairs(pair):
    B = graver_oracle_pair(pair)
    cols = column_states(pair)
    for seed in range(25):
        assert sample_graver(pair, seed).to_dense(cols) in B


def test_validator_rejects():
    D = build_design_matrix(HMPair.parse("12 3", (2, 2, 2))).entries
    good = e((1, "221"), (1, "212"), (-1, "222"), (-1, "211"))
    assert is_valid_unimodular_graver_element(D, good)
    assert not is_valid_unimodular_graver_element(D, [2 * x for x in good])
    assert not is_valid_unimodular_graver_element(D, e((1, "111"), (-1, "112")))
    # a sum of two disjoint circuits is in the kernel but not a circuit
    B = sorted(graver_oracle(D), key=lambda v: sum(map(abs, v)))
    for u, w in itertools.combinations(B, 2):
        if not any(a and b for a, b in zip(u, w)):
            assert not is_valid_unimodular_graver_element(D, [a + b for a, b in zip(u, w)])
            break


def test_signed_vector_json():
    v = SignedVector(((("1", 2), 1), (("2", 1), -1)))
    assert v.canonical() == v and (-v).canonical() == v
    assert '"val": -1' in v.to_json()
