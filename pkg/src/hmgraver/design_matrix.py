"""Design matrices A_{C,d}, the G_q / Lambda_p operations, and exact integer
linear algebra (fraction-free elimination, kernels, determinants).

Integer matrices are numpy arrays.  Elimination runs on ``dtype=object``
arrays so that every intermediate value is an exact Python integer.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .complex_core import HMPair, faces


# ---------------------------------------------------------------------------
# the labeled design matrix


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    ground: tuple
    rows: tuple        # ((face vertices, j tuple), ...)
    cols: tuple        # (state tuple, ...)
    entries: np.ndarray

    @property
    def shape(self):
        return self.entries.shape

    def column_index(self) -> dict:
        return {c: k for k, c in enumerate(self.cols)}

    def __eq__(self, other):
        if not isinstance(other, DesignMatrix):
            return NotImplemented
        return (self.ground == other.ground and self.rows == other.rows
                and self.cols == other.cols
                and np.array_equal(self.entries, other.entries))

    def to_csv(self) -> str:
        return matrix_to_csv(self.entries)

    def to_json(self) -> str:
        return json.dumps({
            "ground": list(self.ground),
            "rows": [{"face": list(f), "index": list(j)} for f, j in self.rows],
            "cols": [list(c) for c in self.cols],
            "entries": self.entries.tolist(),
        })

    @classmethod
    def from_json(cls, text: str) -> "DesignMatrix":
        obj = json.loads(text)
        rows = tuple((tuple(r["face"]), tuple(r["index"])) for r in obj["rows"])
        cols = tuple(tuple(c) for c in obj["cols"])
        entries = np.array(obj["entries"], dtype=np.int64).reshape(len(rows), len(cols))
        return cls(tuple(obj["ground"]), rows, cols, entries)


def matrix_to_csv(A) -> str:
    return "\n".join(",".join(str(int(x)) for x in row) for row in np.asarray(A))


def column_states(pair: HMPair) -> list:
    return list(itertools.product(*[range(1, w + 1) for w in pair.weights]))


def build_design_matrix(pair: HMPair) -> DesignMatrix:
    C = pair.complex
    wm = pair.weight_map()
    cols = column_states(pair)
    S = np.array(cols, dtype=np.int64).reshape(len(cols), len(C.ground))
    rows = []
    blocks = []
    for F in faces(C):
        fv = C.sort_face(F)
        idx = [C.index(v) for v in fv]
        for j in itertools.product(*[range(1, wm[v]) for v in fv]):
            rows.append((fv, j))
            if fv:
                blocks.append(np.all(S[:, idx] == np.array(j), axis=1))
            else:
                blocks.append(np.ones(len(cols), dtype=bool))
    entries = np.array(blocks, dtype=np.int64).reshape(len(rows), len(cols))
    return DesignMatrix(C.ground, tuple(rows), tuple(cols), entries)


def marginal_matrix(pair: HMPair) -> np.ndarray:
    """Facet-marginal presentation: one row per (facet, full facet state).

    Its row space equals that of the design matrix, so the integer kernels
    agree; it is sparser, which the unimodularity reductions exploit.
    """
    C = pair.complex
    wm = pair.weight_map()
    cols = column_states(pair)
    S = np.array(cols, dtype=np.int64).reshape(len(cols), len(C.ground))
    blocks = []
    for F in C.sorted_facets():
        fv = C.sort_face(F)
        idx = [C.index(v) for v in fv]
        for s in itertools.product(*[range(1, wm[v] + 1) for v in fv]):
            if fv:
                blocks.append(np.all(S[:, idx] == np.array(s), axis=1))
            else:
                blocks.append(np.ones(len(cols), dtype=bool))
    return np.array(blocks, dtype=np.int64).reshape(len(blocks), len(cols))


def _entries(A) -> np.ndarray:
    return A.entries if isinstance(A, DesignMatrix) else np.asarray(A)


def ghost_repeat(A, q: int) -> np.ndarray:
    if q < 1:
        raise ValueError("q must be at least 1")
    return np.hstack([_entries(A)] * q)


def lambda_lift(A, p: int) -> np.ndarray:
    if p < 2:
        raise ValueError("p must be at least 2")
    A = _entries(A)
    r, n = A.shape
    out = np.zeros(((p - 1) * r + n, p * n), dtype=A.dtype)
    for k in range(p - 1):
        out[k * r:(k + 1) * r, k * n:(k + 1) * n] = A
    for k in range(p):
        out[(p - 1) * r:, k * n:(k + 1) * n] = np.eye(n, dtype=A.dtype)
    return out


# ---------------------------------------------------------------------------
# exact elimination


def _obj(A) -> np.ndarray:
    A = _entries(A)
    out = np.empty(A.shape, dtype=object)
    out[...] = [[int(x) for x in row] for row in np.asarray(A)] if A.size else out
    return out


@dataclass
class Echelon:
    """Fraction-free reduced echelon form: rows[:rank] restricted to the pivot
    columns equal ``det`` times the identity."""
    matrix: np.ndarray      # object array
    pivots: list
    det: int

    @property
    def rank(self) -> int:
        return len(self.pivots)


def fraction_free_echelon(A, column_order: Optional[Sequence[int]] = None) -> Echelon:
    """Bareiss-style Gauss-Jordan elimination over the integers.

    ``column_order`` controls which columns are tried first as pivots.
    """
    M = _obj(A)
    m, n = M.shape
    order = range(n) if column_order is None else column_order
    r = 0
    prev = 1
    pivots = []
    for c in order:
        if r == m:
            break
        nz = [i for i in range(r, m) if M[i, c] != 0]
        if not nz:
            continue
        i = nz[0]
        if i != r:
            M[[r, i]] = M[[i, r]]
        p = M[r, c]
        col = M[:, c].copy()
        prow = M[r].copy()
        M = (p * M - np.outer(col, prow)) // prev
        M[r] = prow
        prev = p
        pivots.append(c)
        r += 1
    # bring the pivot rows to a common scale det * identity
    for k in range(r):
        if M[k, pivots[k]] != prev:
            M[k] = M[k] * prev // M[k, pivots[k]]
    return Echelon(M, pivots, prev)


def rank(A) -> int:
    A = _entries(A)
    if A.size == 0:
        return 0
    return fraction_free_echelon(A).rank


def bareiss_det(M) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    M = _obj(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("square matrix required")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k, k] == 0:
            nz = [i for i in range(k + 1, n) if M[i, k] != 0]
            if not nz:
                return 0
            M[[k, nz[0]]] = M[[nz[0], k]]
            sign = -sign
        for i in range(k + 1, n):
            M[i, k + 1:] = (M[i, k + 1:] * M[k, k] - M[i, k] * M[k, k + 1:]) // prev
            M[i, k] = 0
        prev = M[k, k]
    return sign * int(M[n - 1, n - 1])


@dataclass
class Tableau:
    """x_B = -T x_N on the integer kernel, with T = num / den."""
    basic: list
    nonbasic: list
    num: np.ndarray      # object array, rank x len(nonbasic)
    den: int

    def is_integral(self) -> bool:
        return all(x % self.den == 0 for x in self.num.flat)

    def integral(self) -> np.ndarray:
        out = np.empty(self.num.shape, dtype=np.int64)
        for idx, x in np.ndenumerate(self.num):
            q, r = divmod(x, self.den)
            if r:
                raise ValueError("tableau is not integral")
            out[idx] = q
        return out


def tableau(A, column_order: Optional[Sequence[int]] = None) -> Tableau:
    A = _entries(A)
    n = A.shape[1]
    if A.shape[0] == 0:
        return Tableau([], list(range(n)), np.empty((0, n), dtype=object), 1)
    E = fraction_free_echelon(A, column_order)
    piv = E.pivots
    nb = [j for j in range(n) if j not in set(piv)]
    num = E.matrix[:E.rank][:, nb] if nb else np.empty((E.rank, 0), dtype=object)
    den = E.det
    if den < 0:
        num, den = -num, -den
    return Tableau(list(piv), nb, num, den)


def _kernel_hnf(A) -> list:
    """Lattice basis of ker_Z A by unimodular column operations."""
    A = _entries(A)
    m, n = A.shape
    cols = [[int(A[i, j]) for i in range(m)] for j in range(n)]
    U = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    piv = 0
    for i in range(m):
        while True:
            nz = [k for k in range(piv, n) if cols[k][i] != 0]
            if len(nz) <= 1:
                break
            k0 = min(nz, key=lambda k: abs(cols[k][i]))
            for k in nz:
                if k == k0:
                    continue
                f = cols[k][i] // cols[k0][i]
                cols[k] = [a - f * b for a, b in zip(cols[k], cols[k0])]
                U[k] = [a - f * b for a, b in zip(U[k], U[k0])]
        if nz:
            k = nz[0]
            cols[piv], cols[k] = cols[k], cols[piv]
            U[piv], U[k] = U[k], U[piv]
            piv += 1
    return [tuple(U[k]) for k in range(piv, n)]


def integer_kernel_basis(A) -> list:
    """A lattice basis of {x integer : Ax = 0}, as tuples of Python ints."""
    A = _entries(A)
    n = A.shape[1]
    T = tableau(A)
    if T.is_integral():
        Ti = T.integral()
        out = []
        for k, j in enumerate(T.nonbasic):
            v = [0] * n
            v[j] = 1
            for r, b in enumerate(T.basic):
                v[b] = -int(Ti[r, k])
            out.append(tuple(v))
        return out
    return _kernel_hnf(A)


def in_kernel(A, v) -> bool:
    A = _entries(A)
    return all(sum(int(a) * int(x) for a, x in zip(row, v) if x) == 0 for row in A)


def kernels_equal(A, B) -> bool:
    A, B = _entries(A), _entries(B)
    if A.shape[1] != B.shape[1]:
        raise ValueError("kernel comparison needs equal column counts")
    return (all(in_kernel(B, v) for v in integer_kernel_basis(A))
            and all(in_kernel(A, v) for v in integer_kernel_basis(B)))


def permute_columns(A, order: Sequence[int]) -> np.ndarray:
    return _entries(A)[:, list(order)]
