"""Deciding unimodularity: by maximal minors, by Graver-basis entries, and by
the structural classification (nuclear certificate or forbidden minor)."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .complex_core import (HMPair, MinorWitness, NuclearCertificate,
                           SimplicialComplex, alexander_dual, check_witness,
                           embed_as_minor, maximal_faces,
                           nuclear_decompositions)
from .design_matrix import (_entries, bareiss_det, build_design_matrix,
                            fraction_free_echelon, kernels_equal,
                            marginal_matrix, tableau)
from .graver_engine import (DEFAULT_ORACLE_COLUMNS, GuardError, SignedVector,
                            column_states, find_large_graver_element)


class InconsistencyError(AssertionError):
    """Neither a certificate nor a witness was found: an implementation bug."""


# ---------------------------------------------------------------------------
# the forbidden catalog


@dataclass(frozen=True)
class CatalogEntry:
    forbidden_id: str
    item: int
    name: str
    pair: HMPair


def _entry(fid, item, name, facets, weights=None, ground=None):
    C = SimplicialComplex.parse(facets, ground)
    w = weights if weights is not None else (2,) * len(C.ground)
    return CatalogEntry(fid, item, name, HMPair(C, w))


def boundary_plus_point(k: int) -> CatalogEntry:
    """Boundary of the k-simplex with one isolated vertex (all weights 2)."""
    ground = tuple(str(i) for i in range(1, k + 3))
    simplex = ground[:k + 1]
    facets = [frozenset(c) for c in itertools.combinations(simplex, k)]
    facets.append(frozenset([ground[-1]]))
    C = SimplicialComplex(ground, maximal_faces(facets))
    return CatalogEntry(f"boundary-simplex-{k}-plus-point", 1,
                        f"boundary of the {k}-simplex plus an isolated vertex",
                        HMPair(C, (2,) * len(ground)))


def _octahedron() -> SimplicialComplex:
    ground = tuple("123456")
    pairs = [("1", "2"), ("3", "4"), ("5", "6")]
    facets = [frozenset(c) for c in itertools.product(*pairs)]
    return SimplicialComplex(ground, facets)


def _fixed_catalog() -> tuple:
    octa = _octahedron()
    octa_dual = alexander_dual(octa)
    entries = [
        CatalogEntry("octahedron", 1, "boundary of the octahedron",
                     HMPair(octa, (2,) * 6)),
        CatalogEntry("octahedron-dual", 1, "Alexander dual of the octahedron boundary",
                     HMPair(octa_dual, (2,) * 6)),
        _entry("path-4", 1, "path on four vertices", "12 23 34"),
        _entry("five-vertex-a", 1, "facets 12 15 234 345", "12 15 234 345"),
        _entry("five-vertex-b", 1, "facets 134 235 245", "134 235 245"),
        _entry("five-vertex-c", 1, "facets 12 235 34 145", "12 235 34 145"),
        _entry("item-2", 2, "triangle, weights 3,3,3", "12 23 13", (3, 3, 3)),
        _entry("item-3", 3, "facets 125 345 1234, weights 2,2,2,2,3",
               "125 345 1234", (2, 2, 2, 2, 3)),
        _entry("item-4", 4, "facets 124 34 123, weights 2,2,3,3", "124 34 123", (2, 2, 3, 3)),
        _entry("item-5", 5, "four-cycle, weights 2,2,2,3", "12 23 34 14", (2, 2, 2, 3)),
        _entry("item-6", 6, "facets 12 13 234, weights 4,2,2,2", "12 13 234", (4, 2, 2, 2)),
        _entry("item-7", 7, "facets 1234 125 235 345 145, weights 2,2,2,2,3",
               "1234 125 235 345 145", (2, 2, 2, 2, 3)),
        _entry("item-8", 8, "facets 1234 1235 145 245, weights 2,2,2,3,3",
               "1234 1235 145 245", (2, 2, 2, 3, 3)),
    ]
    return tuple(entries)


FIXED_CATALOG = _fixed_catalog()


def forbidden_catalog(max_vertices: int = 6) -> list:
    """Catalog entries with at most ``max_vertices`` vertices.

    The boundary-plus-point family is infinite; members are generated up to
    the requested size.
    """
    out = [boundary_plus_point(k) for k in range(1, max_vertices - 1)]
    out += [e for e in FIXED_CATALOG if len(e.pair.ground) <= max_vertices]
    out.sort(key=lambda e: (len(e.pair.ground), e.item, e.forbidden_id))
    return out


def catalog_entry(forbidden_id: str) -> CatalogEntry:
    for e in FIXED_CATALOG:
        if e.forbidden_id == forbidden_id:
            return e
    if forbidden_id.startswith("boundary-simplex-"):
        k = int(forbidden_id.split("-")[2])
        return boundary_plus_point(k)
    raise KeyError(forbidden_id)


# ---------------------------------------------------------------------------
# verdicts and the classification


@dataclass(frozen=True)
class Verdict:
    unimodular: bool
    certificate: Optional[NuclearCertificate] = None
    witness: Optional[MinorWitness] = None
    reason: str = ""

    def to_json(self) -> dict:
        if self.unimodular:
            out = {"outcome": "unimodular"}
            if self.certificate is not None:
                out["certificate"] = self.certificate.to_json()
        else:
            out = {"outcome": "not_unimodular"}
            if self.witness is not None:
                out["witness"] = self.witness.to_json()
                e = catalog_entry(self.witness.forbidden_id)
                out["witness"]["name"] = e.name
        if self.reason:
            out["reason"] = self.reason
        return out


def weight_case(cert: NuclearCertificate, pair: HMPair) -> Optional[str]:
    """Which weight clause of the classification a decomposition satisfies.

    Cone weights never matter.  A simplex nucleus is accepted only when no
    Lawrence step is used (other readings of the same complex cover the rest).
    """
    wm = pair.weight_map()
    lw = [wm[s.vertex] for s in cert.steps if s.op == "lawrence"]
    if cert.nucleus == "simplex":
        return "no-lawrence" if not lw else None
    if cert.nucleus == "dual":
        nucleus = cert.left + cert.right
        if all(wm[v] == 2 for v in nucleus) and all(w == 2 for w in lw):
            return "dual-binary"
        return None
    if all(w == 2 for w in lw):
        return "binary-lawrence"
    if (cert.n == 0 and wm[cert.right[0]] == 2 and all(w <= 3 for w in lw)
            and lw.count(3) <= 1):
        return "single-3-lawrence"
    return None


def certificates(pair: HMPair):
    """All weighted certificates of a pair, in discovery order."""
    for cert in nuclear_decompositions(pair.complex):
        case = weight_case(cert, pair)
        if case is not None:
            yield cert.with_weights(pair, case)


def _preferred_certificate(pair: HMPair) -> Optional[NuclearCertificate]:
    # prefer a reading that avoids the weight-3 Lawrence clause
    fallback = None
    for cert in certificates(pair):
        if cert.weight_case != "single-3-lawrence":
            return cert
        if fallback is None:
            fallback = cert
    return fallback


def find_witness(pair: HMPair) -> Optional[MinorWitness]:
    for e in forbidden_catalog(len(pair.ground)):
        w = embed_as_minor(pair, e.pair, e.forbidden_id, e.item)
        if w is not None:
            return w
    return None


def classify(pair: HMPair) -> Verdict:
    cert = _preferred_certificate(pair)
    if cert is not None:
        return Verdict(True, certificate=cert)
    witness = find_witness(pair)
    if witness is not None:
        return Verdict(False, witness=witness)
    raise InconsistencyError(f"no certificate and no forbidden minor for {pair!r}")


def validate_verdict(pair: HMPair, verdict: Verdict) -> bool:
    if verdict.unimodular:
        cert = verdict.certificate
        return (cert.replay() == pair.complex
                and weight_case(cert, pair) == cert.weight_case)
    e = catalog_entry(verdict.witness.forbidden_id)
    return check_witness(pair, verdict.witness, e.pair)


# ---------------------------------------------------------------------------
# clique complexes


def clique_complex(vertices: Sequence, edges: Iterable) -> SimplicialComplex:
    vertices = tuple(str(v) for v in vertices)
    adj = {v: set() for v in vertices}
    for a, b in edges:
        a, b = str(a), str(b)
        if a == b:
            raise ValueError("loops are not allowed")
        adj[a].add(b)
        adj[b].add(a)
    cliques = []

    def bron_kerbosch(R, P, X):
        if not P and not X:
            cliques.append(frozenset(R))
            return
        for v in list(P):
            bron_kerbosch(R | {v}, P & adj[v], X & adj[v])
            P = P - {v}
            X = X | {v}

    bron_kerbosch(set(), set(vertices), set())
    return SimplicialComplex(vertices, maximal_faces(cliques))


def _components(vertices, adj) -> list:
    seen, comps = set(), []
    for v in vertices:
        if v in seen:
            continue
        comp, stack = set(), [v]
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(adj[x] - comp)
        seen |= comp
        comps.append(comp)
    return comps


def classify_clique_complex(vertices: Sequence, edges: Iterable, weights) -> Verdict:
    """Graph-level test: complete, two cliques glued along a clique, or a
    suspension of the four-cycle with weight 2 on the cycle."""
    vertices = tuple(str(v) for v in vertices)
    wm = dict(zip(vertices, weights)) if not isinstance(weights, dict) else \
        {str(k): v for k, v in weights.items()}
    adj = {v: set() for v in vertices}
    for a, b in edges:
        adj[str(a)].add(str(b))
        adj[str(b)].add(str(a))
    n = len(vertices)
    universal = {v for v in vertices if len(adj[v]) == n - 1}
    if len(universal) == n:
        return Verdict(True, reason="complete graph")
    rest = [v for v in vertices if v not in universal]
    sub = {v: adj[v] - universal for v in rest}
    comps = _components(rest, sub)
    if len(comps) == 2 and all(all(len(sub[v]) == len(c) - 1 for v in c) for c in comps):
        return Verdict(True, reason="two complete graphs glued along a clique")
    if len(rest) == 4 and all(len(sub[v]) == 2 for v in rest) and len(comps) == 1:
        if all(wm[v] == 2 for v in rest):
            return Verdict(True, reason="suspended four-cycle with binary cycle vertices")
        return Verdict(False, reason="suspended four-cycle with a non-binary cycle vertex")
    return Verdict(False, reason="graph is not of a unimodular type")


# ---------------------------------------------------------------------------
# unimodularity of a matrix from its maximal minors


def is_unimodular_by_minors(A, max_columns: int = 12) -> bool:
    A = np.asarray(_entries(A))
    if A.shape[1] > max_columns:
        raise GuardError(f"minor test limited to {max_columns} columns, matrix has {A.shape[1]}")
    if not A.any():
        raise ValueError("matrix must be nonzero")
    E = fraction_free_echelon(A.T)   # pivots of A^T are independent rows of A
    rows = E.pivots
    Ar = A[rows]
    r = len(rows)
    values = set()
    for cols in itertools.combinations(range(A.shape[1]), r):
        d = abs(bareiss_det(Ar[:, list(cols)]))
        if d:
            values.add(d)
    return len(values) == 1


# ---------------------------------------------------------------------------
# unimodularity from Graver-basis entries


def _primitive(v: np.ndarray):
    g = int(np.gcd.reduce(np.abs(v))) if v.any() else 0
    if g == 0:
        return None, 0
    p = v // g
    first = p[np.nonzero(p)[0][0]]
    if first < 0:
        p, g = -p, -g
    return p, g


def _reduce_once(M: np.ndarray):
    """One exact reduction preserving unimodularity, or the same matrix.

    Returns (matrix, changed) or (None, True) when a circuit with an entry of
    absolute value >= 2 has been exhibited.
    """
    m, n = M.shape
    colnz = M.any(axis=0)
    if not colnz.all():
        return M[:, colnz], True
    rownz = M.any(axis=1)
    if not rownz.all():
        return M[rownz], True
    counts = (M != 0).sum(axis=1)
    for r in np.nonzero(counts == 1)[0]:
        k = np.nonzero(M[r])[0][0]             # coloop
        keep = [j for j in range(n) if j != k]
        return np.delete(M[:, keep], r, axis=0), True
    for r in np.nonzero(counts == 2)[0]:
        i, j = np.nonzero(M[r])[0]
        a, b = M[r, i], M[r, j]
        if abs(a) != abs(b):
            continue
        s = 1 if a * b > 0 else -1             # series pair: x_j = -s x_i
        M = M.copy()
        M[:, i] = M[:, i] - s * M[:, j]
        M = np.delete(M, j, axis=1)
        return np.delete(M, r, axis=0), True
    seen = {}
    for r in range(m):
        p, _ = _primitive(M[r])
        key = p.tobytes()
        if key in seen:
            return np.delete(M, r, axis=0), True
        seen[key] = r
    seen = {}
    for j in range(n):
        p, g = _primitive(M[:, j])
        key = p.tobytes()
        if key in seen:
            if abs(seen[key]) != abs(g):
                return None, True             # parallel with ratio other than +-1
            return np.delete(M, j, axis=1), True
        seen[key] = g
    return M, False


def _reduce(M: np.ndarray):
    while True:
        M, changed = _reduce_once(M)
        if M is None or not changed or M.size == 0:
            return M


def _heller_tompkins(M: np.ndarray) -> bool:
    """Sufficient TU test: entries in {0,1,-1}, at most two nonzeros per
    column, and a row signing separating same-sign pairs."""
    if M.size == 0:
        return True
    if np.abs(M).max() > 1 or ((M != 0).sum(axis=0) > 2).any():
        return False
    m = M.shape[0]
    parent = list(range(m))
    parity = [0] * m

    def find(x):
        if parent[x] == x:
            return x, 0
        root, p = find(parent[x])
        parent[x] = root
        parity[x] ^= p
        return root, parity[x]

    for j in range(M.shape[1]):
        rs = np.nonzero(M[:, j])[0]
        if len(rs) < 2:
            continue
        r1, r2 = rs
        want = 1 if M[r1, j] == M[r2, j] else 0
        (a, pa), (b, pb) = find(r1), find(r2)
        if a == b:
            if pa ^ pb != want:
                return False
        else:
            parent[a] = b
            parity[a] = pa ^ pb ^ want
    return True


def _tableau_components(T: np.ndarray) -> list:
    m, k = T.shape
    adj_r = [set(np.nonzero(T[r])[0]) for r in range(m)]
    adj_c = [set(np.nonzero(T[:, c])[0]) for c in range(k)]
    seen_r, seen_c, comps = set(), set(), []
    for r0 in range(m):
        if r0 in seen_r or not adj_r[r0]:
            continue
        rs, cs, stack = set(), set(), [("r", r0)]
        while stack:
            kind, x = stack.pop()
            if kind == "r":
                if x in rs:
                    continue
                rs.add(x)
                stack.extend(("c", c) for c in adj_r[x] if c not in cs)
            else:
                if x in cs:
                    continue
                cs.add(x)
                stack.extend(("r", r) for r in adj_c[x] if r not in rs)
        seen_r |= rs
        seen_c |= cs
        comps.append((sorted(rs), sorted(cs)))
    return comps


def _pivot_walk(T: np.ndarray, steps: int, rng: random.Random) -> bool:
    """Random basis exchanges on a {0,1,-1} tableau; False once an entry of
    absolute value >= 2 appears (a fundamental circuit that is not 0/1/-1)."""
    T = T.copy()
    for _ in range(steps):
        nz = np.argwhere(T != 0)
        if len(nz) == 0:
            return True
        r, c = nz[rng.randrange(len(nz))]
        t = T[r, c]
        row = T[r].copy()
        col = T[:, c].copy()
        T = T - np.outer(col, row) * t        # t = +-1 so 1/t = t
        T[r] = row * t
        T[:, c] = -col * t
        T[r, c] = t
        if np.abs(T).max() > 1:
            return False
    return True


@dataclass
class GraverTestStats:
    tableau_refuted: int = 0
    certified_tu: int = 0
    pivot_refuted: int = 0
    oracle_calls: int = 0
    external_tu_calls: int = 0


# Residual tableaux wider than this are handed to an external total
# unimodularity recognizer when one is installed; the completion oracle
# grows too fast on them.
ORACLE_RESIDUAL_COLUMNS = 20


def external_tu_available() -> bool:
    try:
        import sage.matrix.matrix_cmr_sparse  # noqa: F401
    except ImportError:
        return False
    return True


def _external_is_tu(T: np.ndarray) -> Optional[bool]:
    """Total unimodularity of a {0,1,-1} matrix by the CMR library (regular
    matroid decomposition), or None when it is not installed."""
    try:
        from sage.matrix.matrix_cmr_sparse import Matrix_cmr_chr_sparse
        from sage.matrix.matrix_space import MatrixSpace
        from sage.rings.integer_ring import ZZ
    except ImportError:
        return None
    m, k = T.shape
    M = Matrix_cmr_chr_sparse(MatrixSpace(ZZ, m, k, sparse=True),
                              [[int(x) for x in row] for row in T])
    return bool(M.is_totally_unimodular())


def _decide(M: np.ndarray, max_columns: Optional[int], seed: int,
            stats: Optional[GraverTestStats],
            oracle_residual_columns: Optional[int] = ORACLE_RESIDUAL_COLUMNS) -> bool:
    rng = random.Random(seed)
    stack = [np.asarray(M, dtype=np.int64)]
    while stack:
        M = _reduce(stack.pop())
        if M is None:
            return False
        if M.size == 0:
            continue
        if _heller_tompkins(M) or _heller_tompkins(M.T):
            if stats:
                stats.certified_tu += 1
            continue
        T = tableau(M)
        if any(x % T.den or abs(x) > T.den for x in T.num.flat):
            if stats:
                stats.tableau_refuted += 1
            return False                       # fundamental circuit with |entry| >= 2
        Ti = T.integral()
        comps = _tableau_components(Ti)
        if len(comps) > 1:
            for rs, cs in comps:
                block = Ti[np.ix_(rs, cs)]
                stack.append(np.hstack([np.eye(len(rs), dtype=np.int64), block]))
            continue
        if not comps:
            continue
        rs, cs = comps[0]
        Tc = Ti[np.ix_(rs, cs)]
        R = np.hstack([np.eye(len(rs), dtype=np.int64), Tc])
        if R.shape != M.shape:
            stack.append(R)
            continue
        R2 = _reduce(R)
        if R2 is None:
            return False
        if R2.shape != R.shape:
            stack.append(R2)
            continue
        if _heller_tompkins(Tc) or _heller_tompkins(Tc.T):
            if stats:
                stats.certified_tu += 1
            continue
        if not _pivot_walk(Tc, 4 * sum(Tc.shape), rng):
            if stats:
                stats.pivot_refuted += 1
            return False
        if oracle_residual_columns is not None and R.shape[1] > oracle_residual_columns:
            # [I Tc] is unimodular iff Tc is totally unimodular
            tu = _external_is_tu(Tc)
            if tu is not None:
                if stats:
                    stats.external_tu_calls += 1
                if not tu:
                    return False
                continue
        if stats:
            stats.oracle_calls += 1
        if find_large_graver_element(R, max_columns=max_columns) is not None:
            return False
    return True


def is_unimodular_by_graver(A, max_columns: Optional[int] = DEFAULT_ORACLE_COLUMNS,
                            reduce: bool = True, seed: int = 0,
                            stats: Optional[GraverTestStats] = None,
                            oracle_residual_columns: Optional[int] = ORACLE_RESIDUAL_COLUMNS) -> bool:
    """True iff every Graver element of A has entries in {0,1,-1}.

    With ``reduce`` the matrix is first simplified by operations that keep the
    set of circuit entry patterns (loops, coloops, series and parallel pairs,
    redundant rows, splitting into connected components); components that are
    totally unimodular by the two-nonzeros-per-column criterion are accepted,
    circuits with an entry of absolute value >= 2 found in a basis tableau
    reject.  What is left goes to the completion oracle, which stops at the
    first element with a large entry; residual tableaux wider than
    ``oracle_residual_columns`` go instead to an external total unimodularity
    recognizer when it is installed (pass None to always use the oracle).
    """
    A = np.asarray(_entries(A), dtype=np.int64)
    if max_columns is not None and A.shape[1] > max_columns:
        raise GuardError(f"Graver test limited to {max_columns} columns, matrix has {A.shape[1]}")
    if not reduce:
        return find_large_graver_element(A, max_columns=max_columns) is None
    return _decide(A, max_columns, seed, stats, oracle_residual_columns)


def is_unimodular_pair_by_graver(pair: HMPair, max_columns: Optional[int] = DEFAULT_ORACLE_COLUMNS,
                                 stats: Optional[GraverTestStats] = None) -> bool:
    """Graver test for a pair, run on the facet-marginal presentation after
    checking that it has the same integer kernel as the design matrix."""
    D = build_design_matrix(pair)
    if max_columns is not None and D.shape[1] > max_columns:
        raise GuardError(f"Graver test limited to {max_columns} columns, matrix has {D.shape[1]}")
    M = marginal_matrix(pair)
    if not kernels_equal(D.entries, M):
        raise InconsistencyError("facet-marginal matrix has a different kernel")
    return is_unimodular_by_graver(M, max_columns=max_columns, stats=stats)


# ---------------------------------------------------------------------------
# column-sampling certificate

# Columns per sample.  Circuits with a large entry can need a third or more
# of the columns, so small samples almost never contain one.
DEFAULT_SAMPLE_COLUMNS = 54


def certify_nonunimodular_by_submatrix(pair: HMPair, seed: int = 0, budget: int = 200,
                                       sample_size: int = DEFAULT_SAMPLE_COLUMNS) -> Optional[SignedVector]:
    """Look for a Graver element with an entry of absolute value >= 2 among
    the Graver bases of random column submatrices.  Zero-extension keeps such
    an element in the Graver basis of the full matrix."""
    D = build_design_matrix(pair)
    n = D.shape[1]
    rng = random.Random(seed)
    k = min(sample_size, n)
    for _ in range(budget):
        cols = sorted(rng.sample(range(n), k))
        v = find_large_graver_element(D.entries[:, cols], max_columns=None)
        if v is not None:
            full = [0] * n
            for c, x in zip(cols, v):
                full[c] = x
            return SignedVector.from_dense(D.cols, full).canonical()
    return None
