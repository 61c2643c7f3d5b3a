"""Vertex-weighted simplicial complexes and the operations on them.

Complexes are stored as an ordered ground set plus a facet antichain.  The
order of the ground set is only a presentation choice (it fixes the column
order of the design matrix); equality of complexes ignores it.

Extensions (cone, ghost, Lawrence) put the new vertex *first* in the ground
order, so that in the lexicographic column order it is the slowest index.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Iterator, Mapping, Optional, Sequence


Face = frozenset


class ComplexError(ValueError):
    """Raised for invalid complexes or operations with bad arguments."""


def _as_face(vertices: Iterable) -> frozenset:
    return frozenset(str(v) for v in vertices)


def maximal_faces(faces: Iterable[frozenset]) -> frozenset:
    """Inclusion-maximal members of a family of sets."""
    fs = sorted(set(faces), key=len, reverse=True)
    keep: list[frozenset] = []
    for f in fs:
        if not any(f <= g for g in keep):
            keep.append(f)
    return frozenset(keep)


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    ground: tuple
    facets: frozenset

    def __post_init__(self):
        ground = tuple(str(v) for v in self.ground)
        if len(set(ground)) != len(ground):
            raise ComplexError(f"repeated vertex in ground set {ground}")
        facets = frozenset(_as_face(f) for f in self.facets)
        if not facets:
            facets = frozenset([frozenset()])
        gset = set(ground)
        for f in facets:
            if not f <= gset:
                raise ComplexError(f"facet {sorted(f)} not contained in ground set")
        for f in facets:
            for g in facets:
                if f != g and f <= g:
                    raise ComplexError(f"facets {sorted(f)} and {sorted(g)} are comparable")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "facets", facets)
        object.__setattr__(self, "_index", {v: k for k, v in enumerate(ground)})

    @classmethod
    def from_faces(cls, ground: Sequence, faces: Iterable[Iterable]) -> "SimplicialComplex":
        """Build a complex from any generating family; keeps the maximal sets."""
        return cls(tuple(ground), maximal_faces(_as_face(f) for f in faces))

    @classmethod
    def parse(cls, facets: str, ground: Optional[Iterable] = None) -> "SimplicialComplex":
        """Shorthand with one-character labels: ``parse("12 23")``."""
        fs = [frozenset(tok) for tok in facets.replace(",", " ").split()]
        if ground is None:
            ground = sorted(set().union(*fs)) if fs else []
        return cls.from_faces(tuple(str(v) for v in ground), fs)

    # -- basic queries -------------------------------------------------
    def index(self, v) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise ComplexError(f"unknown vertex {v!r}") from None

    def face_key(self, face: Iterable) -> tuple:
        idx = sorted(self.index(v) for v in face)
        return (len(idx), tuple(idx))

    def sort_face(self, face: Iterable) -> tuple:
        """Vertices of a face listed in ground order."""
        return tuple(sorted(face, key=self.index))

    def sorted_facets(self) -> list:
        return sorted(self.facets, key=self.face_key)

    def is_face(self, face: Iterable) -> bool:
        f = _as_face(face)
        return any(f <= g for g in self.facets)

    @property
    def ghosts(self) -> tuple:
        used = set().union(*self.facets)
        return tuple(v for v in self.ground if v not in used)

    def is_full_simplex(self) -> bool:
        return self.facets == frozenset([frozenset(self.ground)])

    def with_order(self, order: Sequence) -> "SimplicialComplex":
        """Same complex with the ground set listed in ``order``."""
        if sorted(order) != sorted(self.ground):
            raise ComplexError("reordering must use the same ground set")
        return SimplicialComplex(tuple(order), self.facets)

    def relabel(self, mapping: Mapping) -> "SimplicialComplex":
        return SimplicialComplex(
            tuple(mapping[v] for v in self.ground),
            frozenset(frozenset(mapping[v] for v in f) for f in self.facets),
        )

    # -- equality ignores the presentation order -----------------------
    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return set(self.ground) == set(other.ground) and self.facets == other.facets

    def __hash__(self):
        return hash((frozenset(self.ground), self.facets))

    def __repr__(self):
        fs = ["".join(self.sort_face(f)) if all(len(v) == 1 for v in f)
              else "{" + ",".join(self.sort_face(f)) + "}"
              for f in self.sorted_facets()]
        return f"Complex(ground={list(self.ground)}, facets=[{' '.join(x or '{}' for x in fs)}])"


def faces(C: SimplicialComplex) -> list:
    """All faces (downward closure of the facets), in canonical order."""
    out = set()
    for f in C.facets:
        fl = list(f)
        for r in range(len(fl) + 1):
            out.update(frozenset(c) for c in itertools.combinations(fl, r))
    return sorted(out, key=C.face_key)


def delete_vertex(C: SimplicialComplex, v) -> SimplicialComplex:
    C.index(v)
    ground = tuple(u for u in C.ground if u != v)
    return SimplicialComplex(ground, maximal_faces(f - {v} for f in C.facets))


def link_vertex(C: SimplicialComplex, v) -> SimplicialComplex:
    """Link of v.  The link of a ghost vertex is normalized to facets {empty}."""
    C.index(v)
    ground = tuple(u for u in C.ground if u != v)
    star = [f - {v} for f in C.facets if v in f]
    return SimplicialComplex(ground, maximal_faces(star))


def minimal_nonfaces(C: SimplicialComplex) -> list:
    out = []
    for r in range(len(C.ground) + 1):
        for combo in itertools.combinations(C.ground, r):
            s = frozenset(combo)
            if C.is_face(s):
                continue
            if all(C.is_face(s - {x}) for x in s):
                out.append(s)
    return sorted(out, key=C.face_key)


def alexander_dual(C: SimplicialComplex) -> SimplicialComplex:
    if C.is_full_simplex():
        raise ComplexError("the full simplex has no non-faces, so no Alexander dual")
    g = frozenset(C.ground)
    return SimplicialComplex(C.ground, frozenset(g - n for n in minimal_nonfaces(C)))


class VertexKind(enum.Enum):
    CONE = "cone"
    GHOST = "ghost"
    LAWRENCE = "lawrence"
    ORDINARY = "ordinary"


def classify_vertex(C: SimplicialComplex, v) -> frozenset:
    C.index(v)
    kinds = set()
    if all(v in f for f in C.facets):
        kinds.add(VertexKind.CONE)
    if all(v not in f for f in C.facets):
        kinds.add(VertexKind.GHOST)
    if frozenset(C.ground) - {v} in C.facets:
        kinds.add(VertexKind.LAWRENCE)
    return frozenset(kinds or {VertexKind.ORDINARY})


def extend(C: SimplicialComplex, kind, v) -> SimplicialComplex:
    """Add a fresh cone, ghost or Lawrence vertex (placed first in ground order)."""
    kind = VertexKind(kind)
    v = str(v)
    if v in C.ground:
        raise ComplexError(f"vertex {v!r} already in the ground set")
    ground = (v,) + C.ground
    if kind is VertexKind.CONE:
        return SimplicialComplex(ground, frozenset(f | {v} for f in C.facets))
    if kind is VertexKind.GHOST:
        return SimplicialComplex(ground, C.facets)
    if kind is VertexKind.LAWRENCE:
        fs = [frozenset(C.ground)] + [f | {v} for f in C.facets]
        return SimplicialComplex(ground, maximal_faces(fs))
    raise ComplexError(f"cannot extend by a vertex of kind {kind}")


# ---------------------------------------------------------------------------
# HM pairs


@dataclass(frozen=True, eq=False)
class HMPair:
    complex: SimplicialComplex
    weights: tuple

    def __post_init__(self):
        C = self.complex
        w = self.weights
        if isinstance(w, Mapping):
            missing = [v for v in C.ground if v not in w]
            if missing:
                raise ComplexError(f"no weight for vertices {missing}")
            extra = set(w) - set(C.ground)
            if extra:
                raise ComplexError(f"weights given for unknown vertices {sorted(extra)}")
            w = tuple(int(w[v]) for v in C.ground)
        else:
            w = tuple(int(x) for x in w)
        if len(w) != len(C.ground):
            raise ComplexError("one weight per ground-set vertex is required")
        for v, x in zip(C.ground, w):
            if x < 2:
                raise ComplexError(f"weight of vertex {v!r} is {x}, must be at least 2")
        object.__setattr__(self, "weights", w)

    @classmethod
    def parse(cls, facets: str, weights, ground=None) -> "HMPair":
        return cls(SimplicialComplex.parse(facets, ground), weights)

    @property
    def ground(self) -> tuple:
        return self.complex.ground

    def weight(self, v) -> int:
        return self.weights[self.complex.index(v)]

    def weight_map(self) -> dict:
        return dict(zip(self.complex.ground, self.weights))

    def num_columns(self) -> int:
        return prod(self.weights)

    def with_order(self, order: Sequence) -> "HMPair":
        wm = self.weight_map()
        return HMPair(self.complex.with_order(order), tuple(wm[v] for v in order))

    def relabel(self, mapping: Mapping) -> "HMPair":
        return HMPair(self.complex.relabel(mapping), self.weights)

    def delete(self, v) -> "HMPair":
        wm = self.weight_map()
        C = delete_vertex(self.complex, v)
        return HMPair(C, tuple(wm[u] for u in C.ground))

    def link(self, v) -> "HMPair":
        wm = self.weight_map()
        C = link_vertex(self.complex, v)
        return HMPair(C, tuple(wm[u] for u in C.ground))

    def __eq__(self, other):
        if not isinstance(other, HMPair):
            return NotImplemented
        return self.complex == other.complex and self.weight_map() == other.weight_map()

    def __hash__(self):
        return hash((self.complex, frozenset(self.weight_map().items())))

    def __repr__(self):
        return f"HMPair({self.complex!r}, weights={self.weight_map()})"


def merge_face_rewrite(pair: HMPair, E: Iterable, label: Optional[str] = None) -> HMPair:
    """Replace the vertices of E by one vertex whose weight is their product.

    Requires every facet to either contain E or miss it.  The new vertex takes
    the position of the first vertex of E in the ground order.
    """
    C = pair.complex
    E = _as_face(E)
    for v in E:
        C.index(v)
    if not E or not C.is_face(E):
        raise ComplexError(f"{sorted(E)} is not a nonempty face")
    for f in C.facets:
        if f & E and not E <= f:
            raise ComplexError(f"facet {sorted(f)} meets {sorted(E)} without containing it")
    ordered = C.sort_face(E)
    if label is None:
        label = ordered[0] if len(ordered) == 1 else "+".join(ordered)
    if label in C.ground and label not in E:
        raise ComplexError(f"label {label!r} collides with an existing vertex")
    ground = []
    for v in C.ground:
        if v == ordered[0]:
            ground.append(label)
        elif v not in E:
            ground.append(v)
    facets = frozenset((f - E) | {label} if E <= f else f for f in C.facets)
    wm = pair.weight_map()
    wm[label] = prod(wm[v] for v in ordered)
    return HMPair(SimplicialComplex(tuple(ground), facets), tuple(wm[v] for v in ground))


def merge_column_states(pair: HMPair, E: Iterable, merged: HMPair) -> list:
    """For each column state of ``merged``, the matching state of ``pair``.

    The merged vertex state s (1-based) stands for the s-th tuple of E's states
    in lexicographic order (E listed in ground order).
    """
    C = pair.complex
    ordered = C.sort_face(_as_face(E))
    wm = pair.weight_map()
    e_states = list(itertools.product(*[range(1, wm[v] + 1) for v in ordered]))
    (label,) = [v for v in merged.ground if v not in C.ground or v == ordered[0]]
    out = []
    for state in itertools.product(*[range(1, w + 1) for w in merged.weights]):
        val = dict(zip(merged.ground, state))
        sub = dict(zip(ordered, e_states[val.pop(label) - 1]))
        val.update(sub)
        out.append(tuple(val[v] for v in C.ground))
    return out


# ---------------------------------------------------------------------------
# isomorphism and canonical forms


def _vertex_invariant(C: SimplicialComplex, v) -> tuple:
    return tuple(sorted(len(f) for f in C.facets if v in f))


def isomorphisms(src: HMPair, dst: HMPair, weights: str = "eq") -> Iterator[dict]:
    """Bijections src -> dst mapping facets onto facets.

    ``weights`` is "eq" (weights must agree), "le" (dst weight <= src weight,
    the minor-embedding convention) or "ignore".
    """
    A, B = src.complex, dst.complex
    if len(A.ground) != len(B.ground) or len(A.facets) != len(B.facets):
        return
    if sorted(map(len, A.facets)) != sorted(map(len, B.facets)):
        return
    wa, wb = src.weight_map(), dst.weight_map()
    inv_b: dict = {}
    for u in B.ground:
        inv_b.setdefault(_vertex_invariant(B, u), []).append(u)
    order = sorted(A.ground, key=lambda v: len(inv_b.get(_vertex_invariant(A, v), [])))
    cand = {}
    for v in order:
        opts = inv_b.get(_vertex_invariant(A, v), [])
        if weights == "eq":
            opts = [u for u in opts if wb[u] == wa[v]]
        elif weights == "le":
            opts = [u for u in opts if wb[u] <= wa[v]]
        if not opts:
            return
        cand[v] = opts
    mapping: dict = {}
    used: set = set()

    def rec(k):
        if k == len(order):
            image = frozenset(frozenset(mapping[x] for x in f) for f in A.facets)
            if image == B.facets:
                yield dict(mapping)
            return
        v = order[k]
        for u in cand[v]:
            if u in used:
                continue
            mapping[v] = u
            used.add(u)
            yield from rec(k + 1)
            used.discard(u)
            del mapping[v]

    yield from rec(0)


def find_isomorphism(src: HMPair, dst: HMPair, weights: str = "eq") -> Optional[dict]:
    return next(isomorphisms(src, dst, weights), None)


def canonical_form(pair: HMPair, max_perms: int = 10 ** 6) -> tuple:
    """Isomorphism-invariant key of a weighted complex.

    Vertices are first grouped by (facet-size signature, weight); the key is the
    lexicographically least facet encoding over orderings that respect the
    grouping.  Brute force, fine for the small complexes it is used on.
    """
    C = pair.complex
    wm = pair.weight_map()
    groups: dict = {}
    for v in C.ground:
        groups.setdefault((_vertex_invariant(C, v), wm[v]), []).append(v)
    keys = sorted(groups)
    if prod(factorial(len(groups[k])) for k in keys) > max_perms:
        raise ComplexError("too many symmetric vertices for brute-force canonical form")
    best = None
    for perms in itertools.product(*[itertools.permutations(groups[k]) for k in keys]):
        order = [v for p in perms for v in p]
        pos = {v: i for i, v in enumerate(order)}
        enc = tuple(sorted(tuple(sorted(pos[v] for v in f)) for f in C.facets))
        if best is None or enc < best:
            best = enc
    return (tuple(keys), tuple(len(groups[k]) for k in keys), best)


def enumerate_complexes(num_vertices: int) -> Iterator[SimplicialComplex]:
    """All complexes on the ground set "1".."n" (ghost vertices allowed),
    one per facet antichain; includes the void-like complex {emptyset}."""
    ground = tuple(str(i + 1) for i in range(num_vertices))
    subsets = [frozenset(s) for k in range(num_vertices + 1)
               for s in itertools.combinations(ground, k)]

    def rec(i, chosen):
        if i == len(subsets):
            yield SimplicialComplex(ground, frozenset(chosen))
            return
        yield from rec(i + 1, chosen)
        s = subsets[i]
        if all(not (s <= f or f <= s) for f in chosen):
            yield from rec(i + 1, chosen + [s])

    seen = set()
    for C in rec(0, []):
        if C.facets not in seen:
            seen.add(C.facets)
            yield C


def enumerate_pairs(max_vertices: int, weights: Sequence[int] = (2, 3, 4),
                    max_columns: Optional[int] = None) -> Iterator["HMPair"]:
    """HM pairs on 1..max_vertices vertices up to isomorphism."""
    for n in range(1, max_vertices + 1):
        seen = set()
        for C in enumerate_complexes(n):
            for d in itertools.product(weights, repeat=n):
                if max_columns is not None and prod(d) > max_columns:
                    continue
                pair = HMPair(C, d)
                key = canonical_form(pair)
                if key not in seen:
                    seen.add(key)
                    yield pair


# ---------------------------------------------------------------------------
# minors


@dataclass(frozen=True)
class MinorWitness:
    forbidden_id: str
    item: int
    reduction_steps: tuple          # (("delete" | "link", vertex), ...)
    weight_reduction: tuple         # ((vertex, reduced weight), ...)
    isomorphism: tuple              # ((vertex, pattern vertex), ...)

    def to_json(self) -> dict:
        return {
            "forbidden_id": self.forbidden_id,
            "item": self.item,
            "reduction_steps": [{"op": op, "vertex": v} for op, v in self.reduction_steps],
            "weight_reduction": dict(self.weight_reduction),
            "isomorphism": dict(self.isomorphism),
        }


def apply_reduction(pair: HMPair, steps: Iterable) -> HMPair:
    for op, v in steps:
        if op == "delete":
            pair = pair.delete(v)
        elif op == "link":
            pair = pair.link(v)
        else:
            raise ComplexError(f"unknown reduction step {op!r}")
    return pair


def check_witness(pair: HMPair, witness: MinorWitness, pattern: HMPair) -> bool:
    """Replay a witness and compare with the catalog pattern exactly."""
    red = apply_reduction(pair, witness.reduction_steps)
    wr = dict(witness.weight_reduction)
    if set(wr) != set(red.ground):
        return False
    for v, w in wr.items():
        if not 2 <= w <= red.weight(v):
            return False
    red = HMPair(red.complex, wr)
    iso = dict(witness.isomorphism)
    if sorted(iso.values()) != sorted(pattern.ground) or set(iso) != set(red.ground):
        return False
    return red.relabel(iso) == pattern


def embed_as_minor(target: HMPair, pattern: HMPair, forbidden_id: str = "",
                   item: int = 0) -> Optional[MinorWitness]:
    """Search for a minor of ``target`` isomorphic to ``pattern``.

    Links and deletions commute, so every minor is link_L delete_D of the
    target for disjoint vertex sets D, L.  We enumerate the surviving vertex
    set and the delete/link choice for the others, skipping repeats.
    """
    n, k = len(target.ground), len(pattern.ground)
    if k > n:
        return None
    seen = set()
    psizes = sorted(map(len, pattern.complex.facets))
    for keep in itertools.combinations(target.ground, k):
        removed = [v for v in target.ground if v not in keep]
        for choice in itertools.product(("delete", "link"), repeat=len(removed)):
            dels = [v for v, c in zip(removed, choice) if c == "delete"]
            links = [v for v, c in zip(removed, choice) if c == "link"]
            steps = [("delete", v) for v in dels] + [("link", v) for v in links]
            minor = apply_reduction(target, steps)
            key = minor.complex
            if key in seen:
                continue
            seen.add(key)
            if sorted(map(len, minor.complex.facets)) != psizes:
                continue
            iso = find_isomorphism(minor, pattern, weights="le")
            if iso is None:
                continue
            pw = pattern.weight_map()
            return MinorWitness(
                forbidden_id=forbidden_id,
                item=item,
                reduction_steps=tuple(steps),
                weight_reduction=tuple((v, pw[iso[v]]) for v in minor.ground),
                isomorphism=tuple((v, iso[v]) for v in minor.ground),
            )
    return None


# ---------------------------------------------------------------------------
# nuclear decompositions


@dataclass(frozen=True)
class Step:
    op: str            # "cone" | "ghost" | "lawrence"
    vertex: str
    weight: Optional[int] = None


@dataclass(frozen=True)
class NuclearCertificate:
    nucleus: str              # "simplex" | "disjoint" | "dual"
    m: int
    n: int                    # -1 when unused (simplex nucleus)
    left: tuple               # simplex vertices, or the first part
    right: tuple              # second part (empty for a simplex nucleus)
    steps: tuple              # Step records, in construction order
    weight_case: Optional[str] = None

    def nucleus_complex(self) -> SimplicialComplex:
        L, R = self.left, self.right
        ground = tuple(L) + tuple(R)
        if self.nucleus == "simplex":
            return SimplicialComplex(ground, [frozenset(L)])
        if self.nucleus == "disjoint":
            return SimplicialComplex(ground, [frozenset(L), frozenset(R)])
        if self.nucleus == "dual":
            g = frozenset(ground)
            return SimplicialComplex(ground, maximal_faces(g - {p, q} for p in L for q in R))
        raise ComplexError(f"unknown nucleus {self.nucleus!r}")

    def replay(self) -> SimplicialComplex:
        C = self.nucleus_complex()
        for s in self.steps:
            C = extend(C, s.op, s.vertex)
        return C

    def with_weights(self, pair: HMPair, weight_case: Optional[str]) -> "NuclearCertificate":
        wm = pair.weight_map()
        steps = tuple(Step(s.op, s.vertex, wm[s.vertex]) for s in self.steps)
        return NuclearCertificate(self.nucleus, self.m, self.n, self.left, self.right,
                                  steps, weight_case)

    def describe(self) -> str:
        if self.nucleus == "simplex":
            base = f"Delta_{self.m}"
        elif self.nucleus == "disjoint":
            base = f"Delta_{self.m} + Delta_{self.n}"
        else:
            base = f"D_{self.m},{self.n}"
        ops = {"cone": "cone", "ghost": "G", "lawrence": "Lambda"}
        s = base
        for st in self.steps:
            s = f"{ops[st.op]}[{st.vertex}]({s})"
        return s

    def to_json(self) -> dict:
        return {
            "nucleus": self.nucleus,
            "m": self.m,
            "n": self.n,
            "left": list(self.left),
            "right": list(self.right),
            "steps": [{"op": s.op, "vertex": s.vertex, "weight": s.weight} for s in self.steps],
            "weight_case": self.weight_case,
            "expression": self.describe(),
        }


def _nucleus_matches(C: SimplicialComplex) -> list:
    """All ways to read C itself as a nucleus, as (kind, m, n, left, right)."""
    out = []
    W = frozenset(C.ground)
    order = C.sort_face
    if C.facets == frozenset([W]):
        out.append(("simplex", len(W) - 1, -1, order(W), ()))
    fs = list(C.facets)
    if len(fs) == 2 and not (fs[0] & fs[1]) and fs[0] | fs[1] == W and fs[0] and fs[1]:
        a, b = sorted(fs, key=C.face_key)
        out.append(("disjoint", len(a) - 1, len(b) - 1, order(a), order(b)))
        out.append(("disjoint", len(b) - 1, len(a) - 1, order(b), order(a)))
    if len(W) >= 2 and all(len(f) == len(W) - 2 for f in fs):
        edges = [tuple(W - f) for f in fs]
        adj: dict = {v: set() for v in W}
        for p, q in edges:
            adj[p].add(q)
            adj[q].add(p)
        # two-colour the complement graph; it must be complete bipartite on W
        colour: dict = {}
        ok = True
        for s in C.ground:
            if s in colour:
                continue
            colour[s] = 0
            stack = [s]
            while stack and ok:
                x = stack.pop()
                for y in adj[x]:
                    if y not in colour:
                        colour[y] = 1 - colour[x]
                        stack.append(y)
                    elif colour[y] == colour[x]:
                        ok = False
        if ok:
            P = frozenset(v for v in W if colour[v] == 0)
            Q = W - P
            if P and Q and len(edges) == len(P) * len(Q):
                for a, b in ((P, Q), (Q, P)):
                    out.append(("dual", len(a) - 1, len(b) - 1, order(a), order(b)))
    return out


def _peels(C: SimplicialComplex) -> list:
    """Every way to remove one outermost cone/ghost/Lawrence vertex."""
    out = []
    for v in C.ground:
        kinds = classify_vertex(C, v)
        if VertexKind.CONE in kinds:
            out.append((Step("cone", v), delete_vertex(C, v)))
        if VertexKind.GHOST in kinds:
            out.append((Step("ghost", v), delete_vertex(C, v)))
        if VertexKind.LAWRENCE in kinds:
            child = link_vertex(C, v)
            if extend(child, VertexKind.LAWRENCE, v) == C:
                out.append((Step("lawrence", v), child))
    return out


@lru_cache(maxsize=4096)
def _decompositions(C: SimplicialComplex) -> tuple:
    """All (nucleus, steps) readings of C, memoized on the complex."""
    found = []
    seen = set()
    for kind, m, n, L, R in _nucleus_matches(C):
        key = (kind, L, R, frozenset())
        if key not in seen:
            seen.add(key)
            found.append((kind, m, n, L, R, ()))
    for step, child in _peels(C):
        for kind, m, n, L, R, steps in _decompositions(child):
            new = steps + (step,)
            key = (kind, L, R, frozenset((s.op, s.vertex) for s in new))
            if key in seen:
                continue
            seen.add(key)
            found.append((kind, m, n, L, R, new))
    return tuple(found)


def nuclear_decompositions(C: SimplicialComplex) -> Iterator[NuclearCertificate]:
    """Every nuclear decomposition of C (complex only, no weights)."""
    for kind, m, n, L, R, steps in _decompositions(C):
        yield NuclearCertificate(kind, m, n, L, R, steps)


def nuclear_decompose(C: SimplicialComplex) -> Optional[NuclearCertificate]:
    return next(nuclear_decompositions(C), None)


def is_nuclear(C: SimplicialComplex) -> bool:
    return nuclear_decompose(C) is not None
