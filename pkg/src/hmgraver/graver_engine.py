"""Graver bases: a completion oracle, and the combinatorial description for
unimodular HM pairs (signed cycles, signed bonds, lifting rules), plus random
sampling of single Graver elements.

Vectors are kept dense (tuples of ints) inside a GraverBasis; the canonical
sign makes the entry at the first column of the support positive.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .complex_core import (HMPair, NuclearCertificate, SimplicialComplex,
                           merge_column_states, merge_face_rewrite)
from .design_matrix import (_entries, build_design_matrix, column_states,
                            integer_kernel_basis, tableau)


class GuardError(RuntimeError):
    """An input exceeds a configured size guard."""


DEFAULT_ORACLE_COLUMNS = 150


# ---------------------------------------------------------------------------
# vectors and bases


def canonical_sign(v: Sequence[int]) -> tuple:
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


@dataclass(frozen=True)
class SignedVector:
    """Sparse integer vector: ((column label, nonzero value), ...) in column order."""
    items: tuple

    @classmethod
    def from_dense(cls, columns: Sequence, v: Sequence[int]) -> "SignedVector":
        return cls(tuple((c, int(x)) for c, x in zip(columns, v) if x))

    def to_dense(self, columns: Sequence) -> tuple:
        pos = {c: k for k, c in enumerate(columns)}
        out = [0] * len(columns)
        for c, x in self.items:
            out[pos[c]] = x
        return tuple(out)

    @property
    def support(self) -> tuple:
        return tuple(c for c, _ in self.items)

    def positive(self) -> "SignedVector":
        return SignedVector(tuple((c, x) for c, x in self.items if x > 0))

    def negative(self) -> "SignedVector":
        return SignedVector(tuple((c, -x) for c, x in self.items if x < 0))

    def canonical(self) -> "SignedVector":
        if self.items and self.items[0][1] < 0:
            return -self
        return self

    def __neg__(self):
        return SignedVector(tuple((c, -x) for c, x in self.items))

    def to_json(self) -> str:
        return json.dumps([{"col": _jsonable(c), "val": x} for c, x in self.items])


def _jsonable(c):
    return list(c) if isinstance(c, tuple) else c


def _sort_key(v: tuple) -> tuple:
    return tuple((k, x) for k, x in enumerate(v) if x)


class GraverBasis:
    """Canonically signed, sorted set of kernel vectors over labeled columns.

    ``ground`` and ``weights`` are set when the columns are states of an HM
    pair (so that the basis can be reordered when vertices are permuted).
    """

    def __init__(self, columns: Sequence, vectors: Iterable[Sequence[int]],
                 ground: Optional[tuple] = None, weights: Optional[tuple] = None):
        self.columns = tuple(columns)
        n = len(self.columns)
        elems = set()
        for v in vectors:
            v = tuple(int(x) for x in v)
            if len(v) != n:
                raise ValueError("vector length does not match the columns")
            if any(v):
                elems.add(canonical_sign(v))
        self.elements = tuple(sorted(elems, key=_sort_key))
        self._set = frozenset(self.elements)
        self.ground = ground
        self.weights = weights

    @classmethod
    def for_pair(cls, pair: HMPair, vectors) -> "GraverBasis":
        return cls(column_states(pair), vectors, pair.ground, pair.weights)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, v) -> bool:
        if isinstance(v, SignedVector):
            v = v.to_dense(self.columns)
        return canonical_sign(tuple(v)) in self._set

    def __eq__(self, other):
        if not isinstance(other, GraverBasis):
            return NotImplemented
        return self.columns == other.columns and self._set == other._set

    def __repr__(self):
        return f"GraverBasis({len(self)} elements on {len(self.columns)} columns)"

    def signed_vectors(self) -> list:
        return [SignedVector.from_dense(self.columns, v) for v in self.elements]

    def to_jsonl(self) -> str:
        return "\n".join(sv.to_json() for sv in self.signed_vectors())

    def max_abs(self) -> int:
        return max((abs(x) for v in self.elements for x in v), default=0)

    def reorder(self, ground: Sequence) -> "GraverBasis":
        """Same vectors with the vertices listed in a different order."""
        if self.ground is None:
            raise ValueError("basis has no vertex labels")
        ground = tuple(ground)
        wm = dict(zip(self.ground, self.weights))
        weights = tuple(wm[v] for v in ground)
        pos = [self.ground.index(v) for v in ground]
        new_cols = list(itertools.product(*[range(1, w + 1) for w in weights]))
        new_index = {c: k for k, c in enumerate(new_cols)}
        perm = [new_index[tuple(c[p] for p in pos)] for c in self.columns]
        vecs = []
        for v in self.elements:
            out = [0] * len(v)
            for k, x in enumerate(v):
                if x:
                    out[perm[k]] = x
            vecs.append(out)
        return GraverBasis(new_cols, vecs, ground, weights)

    def relabel(self, mapping) -> "GraverBasis":
        ground = tuple(mapping[v] for v in self.ground)
        return GraverBasis(self.columns, self.elements, ground, self.weights)


# ---------------------------------------------------------------------------
# the completion oracle


def _conformal_leq(P: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Rows h of P with h <= p in the conformal order."""
    return np.all((P * p >= 0) & (np.abs(P) <= np.abs(p)), axis=1)


def _sign_masks(P: np.ndarray):
    """Positive and negative supports of the rows of P packed into uint64 words."""
    P = np.atleast_2d(P)
    m = P.shape[1]
    width = max(1, -(-m // 64)) * 64
    pad = np.zeros((P.shape[0], width - m), dtype=bool)
    pos = np.packbits(np.hstack([P > 0, pad]), axis=1).view(np.uint64)
    neg = np.packbits(np.hstack([P < 0, pad]), axis=1).view(np.uint64)
    return pos, neg


class _Reducers:
    """Growing set of projected vectors with a fast conformal-order lookup:
    sign supports are compared as bit masks before the magnitudes."""

    def __init__(self, P: np.ndarray):
        P = np.asarray(P, dtype=np.int64)
        self.m = P.shape[1]
        self.size = len(P)
        cap = max(16, 2 * self.size)
        self.P = np.zeros((cap, self.m), dtype=np.int64)
        self.P[:self.size] = P
        pos, neg = _sign_masks(P) if self.size else _sign_masks(np.zeros((0, self.m), dtype=np.int64))
        self.pos = np.zeros((cap, pos.shape[1]), dtype=np.uint64)
        self.neg = np.zeros((cap, pos.shape[1]), dtype=np.uint64)
        self.pos[:self.size] = pos
        self.neg[:self.size] = neg

    def _masks(self, p: np.ndarray):
        buf = np.zeros(self.pos.shape[1] * 64, dtype=bool)
        buf[:self.m] = p > 0
        pos = np.packbits(buf).view(np.uint64)
        buf[:self.m] = p < 0
        neg = np.packbits(buf).view(np.uint64)
        return pos, neg

    def add(self, p: np.ndarray):
        if self.size == len(self.P):
            for name in ("P", "pos", "neg"):
                a = getattr(self, name)
                setattr(self, name, np.vstack([a, np.zeros_like(a)]))
        pos, neg = self._masks(p)
        self.P[self.size] = p
        self.pos[self.size] = pos
        self.neg[self.size] = neg
        self.size += 1

    def below(self, p: np.ndarray) -> np.ndarray:
        """Indices of stored rows h with h <= p in the conformal order."""
        pos, neg = self._masks(p)
        k = self.size
        if len(pos) == 1:
            bad = (self.pos[:k, 0] & ~pos[0]) | (self.neg[:k, 0] & ~neg[0])
            cand = np.flatnonzero(bad == 0)
        else:
            bad = (self.pos[:k] & ~pos) | (self.neg[:k] & ~neg)
            cand = np.flatnonzero(~bad.any(axis=1))
        if len(cand) == 0:
            return cand
        return cand[(np.abs(self.P[cand]) <= np.abs(p)).all(axis=1)]

    def first_below(self, p: np.ndarray) -> int:
        hit = self.below(p)
        return int(hit[0]) if len(hit) else -1


def _minimal(G: np.ndarray, S: list) -> np.ndarray:
    P = G[:, S]
    R = _Reducers(P)
    keep = []
    for i in range(len(P)):
        hit = R.below(P[i])
        if not np.any(hit != i):
            keep.append(i)
    return G[keep]


def _lift(G: np.ndarray, S: list, s: int) -> np.ndarray:
    """One project-and-lift step: complete G on coordinates S + [s]."""
    cols = S + [s]
    rows = list(G)
    R = _Reducers(G[:, cols])
    pairs: list = []

    def new_pairs(idx, upto=None):
        P = R.P[:R.size]
        f = P[idx]
        Q = P if upto is None else P[:upto]
        ok = np.all(Q[:, :-1] * f[:-1] >= 0, axis=1) & (Q[:, -1] * f[-1] < 0)
        return [(idx, j) for j in np.nonzero(ok)[0]]

    for i in range(len(rows)):
        pairs.extend(new_pairs(i, upto=i))
    while pairs:
        i, j = pairs.pop()
        v = rows[i] + rows[j]
        p = v[cols]
        while p.any():
            h = R.first_below(p)
            if h < 0:
                break
            v = v - rows[h]
            p = v[cols]
        if p.any():
            rows.append(v)
            R.add(p)
            pairs.extend(new_pairs(len(rows) - 1))
    return np.array(rows, dtype=np.int64).reshape(len(rows), G.shape[1])


class _Violation(Exception):
    def __init__(self, vector):
        self.vector = vector


def _project_and_lift(A: np.ndarray, stop_on_large: bool) -> np.ndarray:
    n = A.shape[1]
    T = _integral_tableau(A)
    if T is None:
        return None
    basic, nonbasic, Ti = T
    start = []
    for k, j in enumerate(nonbasic):
        v = np.zeros(n, dtype=np.int64)
        v[j] = 1
        for r, b in enumerate(basic):
            v[b] = -Ti[r, k]
        start.append(v)
        start.append(-v)
    G = np.array(start, dtype=np.int64).reshape(-1, n)

    def check(G):
        if stop_on_large and len(G):
            big = np.nonzero(np.abs(G).max(axis=1) > 1)[0]
            if len(big):
                raise _Violation(G[big[0]])

    check(G)
    S = list(nonbasic)
    for s in basic:
        G = _lift(G, S, s)
        S = S + [s]
        G = _minimal(G, S)
        check(G)
    return G


def _integral_tableau(A: np.ndarray):
    """A basis whose tableau is integral, found by pivots that shrink |det|."""
    n = A.shape[1]
    if A.shape[0] == 0:
        return [], list(range(n)), np.zeros((0, n), dtype=np.int64)
    order = None
    for _ in range(4 * n + 10):
        T = tableau(A, order)
        if T.is_integral():
            return T.basic, T.nonbasic, T.integral()
        # a fractional entry t with |t| < 1 gives a basis with smaller |det|
        swap = None
        for (r, k), x in np.ndenumerate(T.num):
            if x and abs(x) < T.den:
                swap = (r, k)
                break
        if swap is None:
            return None
        r, k = swap
        basis = list(T.basic)
        basis[r] = T.nonbasic[k]
        order = basis + [j for j in range(n) if j not in basis]
    return None


def _pottier(A: np.ndarray, stop_on_large: bool) -> np.ndarray:
    """Completion from a lattice basis with the conformal normal form."""
    n = A.shape[1]
    basis = [np.array(v, dtype=np.int64) for v in integer_kernel_basis(A)]
    G = []
    for v in basis:
        G.append(v)
        G.append(-v)
    if not G:
        return np.zeros((0, n), dtype=np.int64)
    R = _Reducers(np.array(G))
    pairs = [(i, j) for i in range(len(G)) for j in range(i)]
    while pairs:
        i, j = pairs.pop()
        v = G[i] + G[j]
        while v.any():
            h = R.first_below(v)
            if h < 0:
                break
            v = v - G[h]
        if v.any():
            G.append(v)
            R.add(v)
            pairs.extend((len(G) - 1, k) for k in range(len(G) - 1))
    out = _minimal(np.array(G), list(range(n)))
    if stop_on_large and len(out):
        big = np.nonzero(np.abs(out).max(axis=1) > 1)[0]
        if len(big):
            raise _Violation(out[big[0]])
    return out


def _oracle_rows(A, stop_on_large: bool, max_columns: Optional[int]) -> np.ndarray:
    A = np.asarray(_entries(A), dtype=np.int64)
    n = A.shape[1]
    if max_columns is not None and n > max_columns:
        raise GuardError(f"Graver oracle limited to {max_columns} columns, matrix has {n}")
    G = _project_and_lift(A, stop_on_large)
    if G is None:
        G = _pottier(A, stop_on_large)
    return G


def graver_oracle(A, columns: Optional[Sequence] = None,
                  max_columns: Optional[int] = DEFAULT_ORACLE_COLUMNS) -> GraverBasis:
    """Exact Graver basis of an integer matrix by completion."""
    n = np.asarray(_entries(A)).shape[1]
    rows = _oracle_rows(A, False, max_columns)
    cols = range(n) if columns is None else columns
    return GraverBasis(cols, rows)


def graver_oracle_pair(pair: HMPair, max_columns: Optional[int] = DEFAULT_ORACLE_COLUMNS) -> GraverBasis:
    D = build_design_matrix(pair)
    rows = _oracle_rows(D.entries, False, max_columns)
    return GraverBasis.for_pair(pair, rows)


def find_large_graver_element(A, max_columns: Optional[int] = DEFAULT_ORACLE_COLUMNS):
    """A Graver element with an entry of absolute value >= 2, or None.

    Runs the oracle and stops at the first such element.
    """
    try:
        _oracle_rows(A, True, max_columns)
    except _Violation as exc:
        return canonical_sign(tuple(int(x) for x in exc.vector))
    return None


# ---------------------------------------------------------------------------
# nucleus bases from graphs


@dataclass(frozen=True)
class BipartiteDigraph:
    """Complete bipartite digraph on state tuples of two vertex sets.

    Edge (l, r) is labeled l + r.  With "uniform" orientation every edge
    points left -> right; with "parity" an edge is reversed iff its label has
    an odd number of 2s.
    """
    left: tuple
    right: tuple
    orientation: str = "uniform"

    @classmethod
    def complete(cls, left_weights, right_weights, orientation="uniform"):
        L = tuple(itertools.product(*[range(1, w + 1) for w in left_weights]))
        R = tuple(itertools.product(*[range(1, w + 1) for w in right_weights]))
        return cls(L, R, orientation)

    def edges(self) -> list:
        return [l + r for l in self.left for r in self.right]

    def forward(self, l, r) -> bool:
        """True if the edge between l and r points left -> right."""
        if self.orientation == "uniform":
            return True
        return (l + r).count(2) % 2 == 0


def simple_cycles(G: BipartiteDigraph) -> Iterator[tuple]:
    """Simple cycles l0 r0 l1 r1 ... l(k-1) r(k-1) as index lists (pl, pr).

    Each cycle is listed once: it starts at its smallest left vertex and of
    the two directions the one with pr[0] < pr[-1] is kept.
    """
    nl, nr = len(G.left), len(G.right)

    def rec(pl, pr, used_l, used_r):
        for r in range(nr):
            if r in used_r:
                continue
            if len(pl) >= 2 and pr[0] < r:
                yield pl, pr + [r]
            for l in range(pl[0] + 1, nl):
                if l not in used_l:
                    yield from rec(pl + [l], pr + [r], used_l | {l}, used_r | {r})

    for s in range(nl):
        yield from rec([s], [], {s}, set())


def cycle_vector(G: BipartiteDigraph, pl: list, pr: list, columns_index: dict, n: int) -> list:
    """Signed vector of the cycle l0 r0 l1 r1 ... : +1 where the walk follows
    the edge orientation, -1 where it goes against it."""
    v = [0] * n
    k = len(pl)
    for i in range(k):
        l, r = G.left[pl[i]], G.right[pr[i]]
        v[columns_index[l + r]] += 1 if G.forward(l, r) else -1          # l -> r
        l2 = G.left[pl[(i + 1) % k]]
        v[columns_index[l2 + r]] += -1 if G.forward(l2, r) else 1        # r -> l2
    return v


def graver_disjoint_nucleus(m: int, n: int, d: Sequence[int]) -> GraverBasis:
    """Signed circuits of the complete bipartite digraph of Delta_m + Delta_n."""
    d = tuple(d)
    if len(d) != m + n + 2:
        raise ValueError("need one weight per nucleus vertex")
    G = BipartiteDigraph.complete(d[:m + 1], d[m + 1:])
    cols = G.edges()
    index = {c: k for k, c in enumerate(cols)}
    vecs = [cycle_vector(G, pl, pr, index, len(cols)) for pl, pr in simple_cycles(G)]
    ground = tuple(str(k) for k in range(1, m + n + 3))
    return GraverBasis(cols, vecs, ground, d)


def bonds(G: BipartiteDigraph) -> Iterator[frozenset]:
    """Vertex sets S (containing the first left vertex) whose cut is a bond."""
    verts = [("L", l) for l in G.left] + [("R", r) for r in G.right]
    first, rest = verts[0], verts[1:]

    def connected(X):
        if len(X) == 1:
            return True
        sides = {s for s, _ in X}
        return sides == {"L", "R"}

    for r in range(len(rest)):
        for combo in itertools.combinations(rest, r):
            S = frozenset((first,) + combo)
            T = frozenset(verts) - S
            if T and connected(S) and connected(T):
                yield S


def bond_vector(G: BipartiteDigraph, S: frozenset, columns_index: dict, n: int) -> list:
    """+1 on edges pointing out of S, -1 on edges pointing into S."""
    v = [0] * n
    for l in G.left:
        for r in G.right:
            ls, rs = ("L", l) in S, ("R", r) in S
            if ls == rs:
                continue
            out_of_S = G.forward(l, r) == ls
            v[columns_index[l + r]] = 1 if out_of_S else -1
    return v


def graver_dual_nucleus(m: int, n: int) -> GraverBasis:
    """Signed bonds of the parity-oriented digraph, for D_{m,n} with weights 2."""
    G = BipartiteDigraph.complete((2,) * (m + 1), (2,) * (n + 1), "parity")
    cols = G.edges()
    index = {c: k for k, c in enumerate(cols)}
    vecs = [bond_vector(G, S, index, len(cols)) for S in bonds(G)]
    ground = tuple(str(k) for k in range(1, m + n + 3))
    return GraverBasis(cols, vecs, ground, (2,) * (m + n + 2))


# ---------------------------------------------------------------------------
# lifting rules; the new vertex is the slowest index (first in the ground)


def _block_layout(B: GraverBasis, q: int, vertex: str):
    n = len(B.columns)
    ground = None if B.ground is None else (vertex,) + B.ground
    weights = None if B.weights is None else (q,) + B.weights
    if B.ground is None:
        cols = [(s,) + ((c,) if not isinstance(c, tuple) else c)
                for s in range(1, q + 1) for c in B.columns]
    else:
        cols = [(s,) + c for s in range(1, q + 1) for c in B.columns]
    return n, cols, ground, weights


def lift_cone(B: GraverBasis, q: int, vertex: str = "c") -> GraverBasis:
    n, cols, ground, weights = _block_layout(B, q, vertex)
    vecs = []
    for u in B:
        for s in range(q):
            v = [0] * (q * n)
            v[s * n:(s + 1) * n] = u
            vecs.append(v)
    return GraverBasis(cols, vecs, ground, weights)


def _swaps(n: int, q: int) -> list:
    vecs = []
    for i in range(n):
        for j in range(q):
            for k in range(j + 1, q):
                v = [0] * (q * n)
                v[j * n + i] = 1
                v[k * n + i] = -1
                vecs.append(v)
    return vecs


def _spreadings(u: Sequence[int], q: int) -> Iterator[list]:
    n = len(u)
    supp = [i for i, x in enumerate(u) if x]
    for slots in itertools.product(range(q), repeat=len(supp)):
        v = [0] * (q * n)
        for i, s in zip(supp, slots):
            v[s * n + i] = u[i]
        yield v


def lift_ghost(B: GraverBasis, q: int, vertex: str = "g") -> GraverBasis:
    if B.max_abs() > 1:
        raise ValueError("ghost lift needs a basis with entries in {0,1,-1}")
    n, cols, ground, weights = _block_layout(B, q, vertex)
    vecs = _swaps(n, q)
    for u in B:
        vecs.extend(_spreadings(u, q))
    return GraverBasis(cols, vecs, ground, weights)


def lift_lambda2(B: GraverBasis, vertex: str = "l") -> GraverBasis:
    n, cols, ground, weights = _block_layout(B, 2, vertex)
    vecs = [list(u) + [-x for x in u] for u in B]
    return GraverBasis(cols, vecs, ground, weights)


def _lambda3_index(part: int, slot: int, i: int, q: int, n: int) -> int:
    return part * q * n + slot * n + i


def _lambda3_moves(v: list, q: int, n: int, column: int) -> Iterator[list]:
    """All single moves of one column class (see lift_lambda3_over_ghost)."""
    idx = lambda p, s: _lambda3_index(p, s, column, q, n)
    for P, Q, R in itertools.permutations(range(3)):
        if any(v[idx(R, s)] for s in range(q)):
            continue
        for j in range(q):
            x = v[idx(P, j)]
            if not x or v[idx(Q, j)] != -x:
                continue
            for k in range(q):
                if k == j or v[idx(Q, k)]:
                    continue
                w = list(v)
                w[idx(Q, k)] = -x
                w[idx(Q, j)] = 0
                w[idx(R, j)] = -x
                w[idx(R, k)] = x
                yield w


def lift_lambda3_over_ghost(B3: GraverBasis, q: int, n: int, vertex: str = "g") -> GraverBasis:
    """Graver basis of Lambda_3 G_q A from that of Lambda_3 A.

    B3's columns are (part, column of A) with the part slowest; the result's
    columns are (part, ghost slot, column of A).  Generated from
    swaps between two parts inside one column class, spreadings of the
    elements of B3, and then moves: in a column class where parts P and Q
    hold x and -x in slot j and part R is empty, Q's entry moves to a free
    slot k while R receives -x in slot j and x in slot k.  Each column class
    is moved at most once.  These forms are necessary for Graver elements,
    not sufficient, so the result is filtered to conformally minimal vectors.
    """
    if len(B3.columns) != 3 * n:
        raise ValueError("basis does not match Lambda_3 of an n-column matrix")
    if B3.max_abs() > 1:
        raise ValueError("expected a basis with entries in {0,1,-1}")
    N = 3 * q * n
    seeds = []
    for i in range(n):
        for P, Q in itertools.combinations(range(3), 2):
            for j in range(q):
                for k in range(j + 1, q):
                    v = [0] * N
                    v[_lambda3_index(P, j, i, q, n)] = 1
                    v[_lambda3_index(P, k, i, q, n)] = -1
                    v[_lambda3_index(Q, j, i, q, n)] = -1
                    v[_lambda3_index(Q, k, i, q, n)] = 1
                    seeds.append(v)
    for w in B3:
        # one slot per column of A, shared by the three parts, so that the
        # parts still cancel slot by slot
        supp = [i for i in range(n) if any(w[p * n + i] for p in range(3))]
        for slots in itertools.product(range(q), repeat=len(supp)):
            v = [0] * N
            for i, s in zip(supp, slots):
                for p in range(3):
                    v[_lambda3_index(p, s, i, q, n)] = w[p * n + i]
            seeds.append(v)
    seen = set()
    out = []
    frontier = []
    for v in seeds:
        key = canonical_sign(v)
        if key not in seen:
            seen.add(key)
            out.append(v)
            frontier.append((v, frozenset()))
    while frontier:
        v, moved = frontier.pop()
        for i in range(n):
            if i in moved:
                continue
            for w in _lambda3_moves(v, q, n, i):
                key = canonical_sign(w)
                if key not in seen:
                    seen.add(key)
                    out.append(w)
                    frontier.append((w, moved | {i}))
    # every generated vector lies in the kernel and the generated set
    # contains the Graver basis, so its conformally minimal elements are
    # exactly the Graver basis
    if out:
        G = np.array(out, dtype=np.int64)
        out = list(_minimal(G, list(range(N))))
    cols = [(p + 1, s + 1) + ((i,) if B3.ground is None else B3.columns[i][1:])
            for p in range(3) for s in range(q) for i in range(n)]
    if B3.ground is None:
        ground, weights = None, None
    else:
        ground = (B3.ground[0], vertex) + B3.ground[1:]
        weights = (3, q) + B3.weights[1:]
        cols = [(p + 1, s + 1) + B3.columns[i][1:]
                for p in range(3) for s in range(q) for i in range(n)]
    return GraverBasis(cols, out, ground, weights)


# ---------------------------------------------------------------------------
# the pipeline for unimodular pairs


MAX_LAMBDA3_BASE = 16


@lru_cache(maxsize=None)
def _triangle_base(p: int) -> GraverBasis:
    """Oracle Graver basis of the triangle with weights (3, 2, p)."""
    pair = HMPair(SimplicialComplex(("1", "2", "3"), [{"1", "2"}, {"1", "3"}, {"2", "3"}]),
                  (3, 2, p))
    return graver_oracle_pair(pair, max_columns=None)


def lambda3_base(pair: HMPair, w: str, L: tuple, u: str,
                 max_base: int = MAX_LAMBDA3_BASE) -> GraverBasis:
    """Graver basis of Lambda_w(Delta_L + Delta_u) with weight 3 on w and 2 on u.

    Merging the face L into one vertex gives the triangle (3, 2, p), p the
    product of the weights on L; its oracle basis is mapped back.
    """
    p = prod(pair.weight(v) for v in L)
    if p > max_base:
        raise GuardError(f"Lambda_3 base case with p = {p} exceeds the limit {max_base}")
    base = _triangle_base(p).relabel({"1": w, "2": u, "3": "#merged"})
    merged = merge_face_rewrite(pair, L, label="#merged")
    base = base.reorder(merged.ground)
    states = merge_column_states(pair, L, merged)
    index = {c: k for k, c in enumerate(column_states(pair))}
    target = [index[s] for s in states]
    vecs = []
    for v in base:
        out = [0] * len(index)
        for k, x in enumerate(v):
            if x:
                out[target[k]] = x
        vecs.append(out)
    return GraverBasis.for_pair(pair, vecs)


def _sub_pair(pair: HMPair, complex_: SimplicialComplex) -> HMPair:
    wm = pair.weight_map()
    return HMPair(complex_, tuple(wm[v] for v in complex_.ground))


def _nucleus_basis(cert: NuclearCertificate, pair: HMPair) -> GraverBasis:
    wm = pair.weight_map()
    nuc = cert.nucleus_complex()
    npair = _sub_pair(pair, nuc)
    if cert.nucleus == "simplex":
        return GraverBasis.for_pair(npair, [])
    if cert.nucleus == "disjoint":
        d = tuple(wm[v] for v in nuc.ground)
        B = graver_disjoint_nucleus(cert.m, cert.n, d)
    else:
        B = graver_dual_nucleus(cert.m, cert.n)
    mapping = dict(zip(B.ground, nuc.ground))
    return B.relabel(mapping)


def _apply_step(B: GraverBasis, op: str, v: str, q: int) -> GraverBasis:
    if op == "cone":
        return lift_cone(B, q, v)
    if op == "ghost":
        return lift_ghost(B, q, v)
    if op == "lawrence":
        if q != 2:
            raise ValueError("plain Lawrence lift needs weight 2")
        return lift_lambda2(B, v)
    raise ValueError(op)


def graver_from_certificate(pair: HMPair, cert: NuclearCertificate,
                            max_base: int = MAX_LAMBDA3_BASE) -> GraverBasis:
    wm = pair.weight_map()
    steps = list(cert.steps)
    heavy = [k for k, s in enumerate(steps) if s.op == "lawrence" and wm[s.vertex] == 3]
    if cert.weight_case == "single-3-lawrence" and heavy:
        t = heavy[0]
        w = steps[t].vertex
        L, (u,) = cert.left, cert.right
        cur = SimplicialComplex(L + (u,), [frozenset(L), frozenset([u])])
        from .complex_core import extend
        Y = extend(cur, "lawrence", w)
        B = lambda3_base(_sub_pair(pair, Y), w, L, u, max_base)
        for s in steps[:t]:
            q = wm[s.vertex]
            if s.op == "ghost":
                n = len(B.columns) // 3
                B = lift_lambda3_over_ghost(B, q, n, s.vertex)
            else:
                inner = _apply_step(B, s.op, s.vertex, q)
                B = inner.reorder((w, s.vertex) + B.ground[1:])
        rest = steps[t + 1:]
    else:
        B = _nucleus_basis(cert, pair)
        rest = steps
    for s in rest:
        B = _apply_step(B, s.op, s.vertex, wm[s.vertex])
    return B.reorder(pair.ground)


def graver_for_unimodular_pair(pair: HMPair, max_base: int = MAX_LAMBDA3_BASE) -> GraverBasis:
    from .unimodularity import classify, InconsistencyError
    verdict = classify(pair)
    if not verdict.unimodular:
        raise ValueError("pair is not unimodular")
    return graver_from_certificate(pair, verdict.certificate, max_base)


# ---------------------------------------------------------------------------
# validation and sampling


def is_valid_unimodular_graver_element(A, v: Sequence[int]) -> bool:
    """Kernel membership, entries in {0,1,-1}, and support a circuit."""
    from .design_matrix import rank
    A = np.asarray(_entries(A), dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if not v.any() or np.abs(v).max() > 1 or (A @ v).any():
        return False
    supp = np.nonzero(v)[0]
    return rank(A[:, supp]) == len(supp) - 1


def _random_cycle(G: BipartiteDigraph, rng: random.Random):
    """Loop-erased random walk on K_{L,R} until a vertex repeats."""
    nl, nr = len(G.left), len(G.right)
    walk = [("L", rng.randrange(nl))]
    while True:
        side, _ = walk[-1]
        nxt = ("R", rng.randrange(nr)) if side == "L" else ("L", rng.randrange(nl))
        if nxt in walk:
            k = walk.index(nxt)
            loop = walk[k:]
            if len(loop) >= 4:
                if loop[0][0] == "R":
                    loop = loop[1:] + loop[:1]
                pl = [x for s, x in loop if s == "L"]
                pr = [x for s, x in loop if s == "R"]
                return pl, pr
            walk = walk[:k + 1]
            continue
        walk.append(nxt)


def _random_bond(G: BipartiteDigraph, rng: random.Random) -> frozenset:
    verts = [("L", l) for l in G.left] + [("R", r) for r in G.right]
    while True:
        S = frozenset(x for x in verts if rng.random() < 0.5)
        T = frozenset(verts) - S
        if not S or not T:
            continue
        ok = all(len(X) == 1 or {s for s, _ in X} == {"L", "R"} for X in (S, T))
        if ok:
            return S


def _sample_lambda3_over_ghost(w: Optional[list], q: int, n: int,
                                rng: random.Random) -> list:
    """A random candidate of Lambda_3 G_q A built from an element w of the
    Lambda_3 A basis (or a swap when w is None)."""
    N = 3 * q * n
    v = [0] * N
    if w is None or rng.random() < 0.25:
        i = rng.randrange(n)
        P, Q = rng.sample(range(3), 2)
        j, k = rng.sample(range(q), 2)
        v[_lambda3_index(P, j, i, q, n)] = 1
        v[_lambda3_index(P, k, i, q, n)] = -1
        v[_lambda3_index(Q, j, i, q, n)] = -1
        v[_lambda3_index(Q, k, i, q, n)] = 1
    else:
        for i in range(n):
            slot = rng.randrange(q)
            for p in range(3):
                if w[p * n + i]:
                    v[_lambda3_index(p, slot, i, q, n)] = w[p * n + i]
    for i in rng.sample(range(n), n):
        if rng.random() < 0.5:
            moves = list(_lambda3_moves(v, q, n, i))
            if moves:
                v = rng.choice(moves)
    return v


def _validation_matrix(pair: HMPair) -> np.ndarray:
    # pair equality ignores the vertex order, the column layout does not
    return _marginal_cached(pair.ground, pair.weights, pair.complex.facets)


@lru_cache(maxsize=64)
def _marginal_cached(ground: tuple, weights: tuple, facets: frozenset) -> np.ndarray:
    from .design_matrix import marginal_matrix
    return marginal_matrix(HMPair(SimplicialComplex(ground, facets), weights))


def _states(weights: Sequence[int]) -> list:
    return list(itertools.product(*[range(1, x + 1) for x in weights]))


def _sample_candidate(pair: HMPair, cert: NuclearCertificate, rng: random.Random):
    """One random candidate vector following the certificate, or None."""
    wm = pair.weight_map()
    steps = list(cert.steps)
    heavy = [k for k, s in enumerate(steps) if s.op == "lawrence" and wm[s.vertex] == 3]
    if cert.weight_case == "single-3-lawrence" and heavy:
        from .complex_core import extend
        t = heavy[0]
        w = steps[t].vertex
        L, (u,) = cert.left, cert.right
        Y = extend(SimplicialComplex(L + (u,), [frozenset(L), frozenset([u])]), "lawrence", w)
        B3 = lambda3_base(_sub_pair(pair, Y), w, L, u)
        vec = list(rng.choice(B3.elements)) if len(B3) else None
        ground = B3.ground
        for s in steps[:t]:
            q = wm[s.vertex]
            new_ground = (w, s.vertex) + ground[1:]
            if s.op == "ghost":
                n = len(_states(wm[x] for x in ground[1:]))
                vec = _sample_lambda3_over_ghost(vec, q, n, rng)
            elif vec is not None:
                weights = tuple(wm[x] for x in ground)
                tmp = GraverBasis(_states(weights), [vec], ground, weights)
                lifted = _sample_step(tmp, s.op, s.vertex, q, rng).reorder(new_ground)
                vec = list(lifted.elements[0])
            ground = new_ground
        rest = steps[t + 1:]
    else:
        nuc = cert.nucleus_complex()
        ground = nuc.ground
        d = tuple(wm[x] for x in ground)
        if cert.nucleus == "simplex":
            vec = None
        elif cert.nucleus == "disjoint":
            G = BipartiteDigraph.complete(d[:cert.m + 1], d[cert.m + 1:])
            index = {c: k for k, c in enumerate(G.edges())}
            pl, pr = _random_cycle(G, rng)
            vec = cycle_vector(G, pl, pr, index, len(index))
        else:
            G = BipartiteDigraph.complete((2,) * (cert.m + 1), (2,) * (cert.n + 1), "parity")
            index = {c: k for k, c in enumerate(G.edges())}
            vec = bond_vector(G, _random_bond(G, rng), index, len(index))
        rest = steps
    for s in rest:
        q = wm[s.vertex]
        ncols = len(_states(wm[x] for x in ground))
        if s.op == "ghost":
            new = [0] * (q * ncols)
            if vec is None or rng.random() < 0.3:
                i = rng.randrange(ncols)
                j, k = rng.sample(range(q), 2)
                new[j * ncols + i] = 1
                new[k * ncols + i] = -1
            else:
                for i, x in enumerate(vec):
                    if x:
                        new[rng.randrange(q) * ncols + i] = x
            vec = new
        elif vec is not None:
            if s.op == "cone":
                new = [0] * (q * ncols)
                b = rng.randrange(q)
                new[b * ncols:(b + 1) * ncols] = vec
                vec = new
            else:
                vec = list(vec) + [-x for x in vec]
        ground = (s.vertex,) + ground
    if vec is None:
        return None
    weights = tuple(wm[x] for x in ground)
    B = GraverBasis(_states(weights), [vec], ground, weights).reorder(pair.ground)
    return B.elements[0]


def sample_graver(pair: HMPair, seed: int = 0, certificate: Optional[NuclearCertificate] = None,
                  max_attempts: int = 1000) -> SignedVector:
    """One random Graver element of a unimodular pair, deterministic in seed.

    Candidates follow the lifting rules of the certificate with random
    choices; each is checked to be a circuit of the design matrix (for a
    unimodular matrix these are exactly the Graver elements) and redrawn
    otherwise.  The distribution is not uniform.
    """
    from .unimodularity import classify
    rng = random.Random(seed)
    if certificate is None:
        verdict = classify(pair)
        if not verdict.unimodular:
            raise ValueError("pair is not unimodular")
        certificate = verdict.certificate
    if certificate.nucleus == "simplex" and not any(s.op == "ghost" for s in certificate.steps):
        raise ValueError("Graver basis is empty")
    A = _validation_matrix(pair)
    for _ in range(max_attempts):
        vec = _sample_candidate(pair, certificate, rng)
        if vec is not None and is_valid_unimodular_graver_element(A, vec):
            return SignedVector.from_dense(column_states(pair), vec)
    raise ValueError("no valid Graver element found within the attempt budget")


def _sample_step(B: GraverBasis, op: str, v: str, q: int, rng: random.Random) -> GraverBasis:
    u = B.elements[0]
    n = len(u)
    if op == "cone":
        b = rng.randrange(q)
        new = [0] * (q * n)
        new[b * n:(b + 1) * n] = u
    else:
        new = list(u) + [-x for x in u]
    cols = [(s,) + c for s in range(1, q + 1) for c in B.columns]
    return GraverBasis(cols, [new], (v,) + B.ground, (q,) + B.weights)
