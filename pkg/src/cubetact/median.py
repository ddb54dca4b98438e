"""Median-graph representation of finite CAT(0) cube complexes.

A finite CAT(0) cube complex is stored through its 1-skeleton, which is a
median graph: every vertex triple has a unique vertex lying on geodesics
between each pair.  All hyperplane-level geometry (sides, carriers, links,
extremal vertices, the cubical structure induced on a hyperplane) is derived
from that graph.
"""

from __future__ import annotations

import json
import os
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import (
    NotConnected,
    NotMedian,
    SizeLimitExceeded,
    UnknownHyperplane,
    UnknownVertex,
)

DEFAULT_VERTEX_CAP = 4096

# 8-bit popcount table, used when counting medians over packed interval vectors.
_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


def vertex_cap() -> int:
    env = os.environ.get("CUBETACT_CAP_VERTICES")
    return int(env) if env else DEFAULT_VERTEX_CAP


@dataclass(frozen=True)
class Hyperplane:
    """An edge class under square-opposite parallelism, with its two sides."""

    id: int
    dual_edges: frozenset  # frozensets {u, v}
    side_a: frozenset
    side_b: frozenset
    carrier: frozenset  # endpoints of the dual edges

    def side_of(self, v):
        if v in self.side_a:
            return self.side_a
        if v in self.side_b:
            return self.side_b
        raise UnknownVertex(v)

    def other_side(self, v):
        return self.side_b if v in self.side_a else self.side_a


@dataclass(frozen=True)
class LinkGraph:
    """Hyperplanes adjacent to a vertex, joined when they span a square there."""

    base_vertex: object
    nodes: frozenset  # hyperplane ids
    adjacency: frozenset  # frozensets {h1, h2}

    def neighbors(self, h):
        return {next(iter(e - {h})) for e in self.adjacency if h in e}


class CubeComplex:
    """Immutable container for a validated median graph and its derived data.

    Use :func:`validate_complex` to construct one; the constructor itself does
    not re-check the median property.
    """

    def __init__(self, vertices, edges, dist, squares):
        self.vertices = tuple(vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        self.edges = frozenset(frozenset(e) for e in edges)
        self.adj = {v: set() for v in self.vertices}
        for e in self.edges:
            u, v = tuple(e)
            self.adj[u].add(v)
            self.adj[v].add(u)
        self._dist = dist  # numpy (n, n) int matrix, indexed like self.vertices
        # squares are stored in cycle order (a, b, c, d): edges ab, bc, cd, da
        self.squares = tuple(squares)
        self._hyperplanes = None
        self._edge_to_h = None
        self._dimension = None

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return (
            f"CubeComplex({len(self.vertices)} vertices, {len(self.edges)} edges, "
            f"{len(self.squares)} squares)"
        )

    def check_vertex(self, v):
        if v not in self.index:
            raise UnknownVertex(v)

    def d(self, u, v):
        self.check_vertex(u)
        self.check_vertex(v)
        return int(self._dist[self.index[u], self.index[v]])

    @property
    def hyperplanes(self):
        if self._hyperplanes is None:
            self._hyperplanes = compute_hyperplanes(self)
        return self._hyperplanes

    def hyperplane(self, hid) -> Hyperplane:
        hs = self.hyperplanes
        if not isinstance(hid, int) or not 0 <= hid < len(hs):
            raise UnknownHyperplane(hid)
        return hs[hid]

    def hyperplane_of_edge(self, u, v):
        if self._edge_to_h is None:
            self._edge_to_h = {
                e: h for h in self.hyperplanes for e in h.dual_edges
            }
        e = frozenset((u, v))
        if e not in self._edge_to_h:
            raise UnknownHyperplane((u, v))
        return self._edge_to_h[e]

    @property
    def dimension(self):
        """Largest family of pairwise-transverse hyperplanes at one vertex."""
        if self._dimension is None:
            best = 1 if self.edges else 0
            for v in self.vertices:
                lk = link_graph(self, v)
                best = max(best, _clique_number(lk.nodes, lk.adjacency))
            self._dimension = best
        return self._dimension

    def geodesic_vertices(self, u, v):
        """All vertices on some geodesic between u and v (the interval)."""
        i, j = self.index[u], self.index[v]
        dv = self._dist
        return {
            w
            for w, k in self.index.items()
            if dv[i, k] + dv[k, j] == dv[i, j]
        }


def _clique_number(nodes, adjacency):
    nodes = sorted(nodes)
    adj = {v: set() for v in nodes}
    for e in adjacency:
        u, v = tuple(e)
        adj[u].add(v)
        adj[v].add(u)
    best = 0

    def grow(clique, cands):
        nonlocal best
        best = max(best, len(clique))
        for v in list(cands):
            grow(clique | {v}, cands & adj[v])
            cands = cands - {v}

    grow(set(), set(nodes))
    return best


def _bfs_distances(vertices, adj):
    n = len(vertices)
    index = {v: i for i, v in enumerate(vertices)}
    dist = np.full((n, n), -1, dtype=np.int32)
    for s in vertices:
        si = index[s]
        dist[si, si] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = dist[si, index[u]]
            for w in adj[u]:
                wi = index[w]
                if dist[si, wi] < 0:
                    dist[si, wi] = du + 1
                    queue.append(w)
    return dist


def _find_squares(vertices, adj):
    """Chordless 4-cycles, each as a cycle-ordered tuple (a, b, c, d)."""
    squares = {}
    for a in vertices:
        for b, d in combinations(sorted(adj[a]), 2):
            if b in adj[d]:
                continue  # chord bd
            for c in adj[b] & adj[d]:
                if c == a or c in adj[a]:
                    continue  # not a 4-cycle / chord ac
                key = frozenset((a, b, c, d))
                if key not in squares:
                    squares[key] = (a, b, c, d)
    return sorted(squares.values())


def median_triple_defects(dist, first_only=True):
    """Triples (a, b, c) of indices whose median count differs from one.

    ``dist`` must be a symmetric integer distance matrix.  Yields
    (a, b, c, median_indices) tuples; with first_only, stops at the first.
    """
    n = dist.shape[0]
    if n <= 2:
        return []
    d = dist.astype(np.int32)
    width = (n + 7) // 8
    pad = width * 8 - n
    packed = np.empty((n, n, width), dtype=np.uint8)
    for a in range(n):
        ia = d[a][:, None] == d[a][None, :] + d  # (b, v)
        if pad:
            ia = np.concatenate(
                [ia, np.zeros((n, pad), dtype=bool)], axis=1
            )
        packed[a] = np.packbits(ia, axis=1)
    fast_popcount = hasattr(np, "bitwise_count")
    defects = []
    for a in range(n):
        pa = packed[a]
        for b in range(a + 1, n):
            rows = pa[b][None, :] & pa & packed[b]  # (c, width)
            if fast_popcount:
                counts = np.bitwise_count(rows).sum(axis=1, dtype=np.int64)
            else:
                counts = _POPCOUNT[rows].sum(axis=1)
            bad = np.nonzero(counts != 1)[0]
            for c in bad:
                c = int(c)
                medians = [
                    v for v in range(n)
                    if (rows[c, v // 8] >> (7 - v % 8)) & 1
                ]
                defects.append((a, b, c, medians))
                if first_only:
                    return defects
    return defects


def _check_median(dist, vertices):
    """Every triple must have exactly one median; returns None or raises."""
    defects = median_triple_defects(dist, first_only=True)
    if defects:
        a, b, c, medians = defects[0]
        raise NotMedian(
            (vertices[a], vertices[b], vertices[c]),
            [vertices[v] for v in medians],
        )


def validate_complex(vertices, edges, cap=None) -> CubeComplex:
    """Check that the given graph is a finite connected median graph.

    Raises NotConnected or NotMedian (with a witness triple) otherwise.
    """
    vertices = list(dict.fromkeys(vertices))
    if not vertices:
        raise NotConnected("empty graph")
    if cap is None:
        cap = vertex_cap()
    if len(vertices) > cap:
        raise SizeLimitExceeded(f"{len(vertices)} vertices exceeds cap {cap}")
    vset = set(vertices)
    edge_set = set()
    adj = {v: set() for v in vertices}
    for e in edges:
        u, v = tuple(e)
        if u not in vset or v not in vset:
            raise UnknownVertex(e)
        if u == v:
            raise ValueError(f"self-loop at {u!r}; the graph must be simple")
        edge_set.add(frozenset((u, v)))
        adj[u].add(v)
        adj[v].add(u)

    dist = _bfs_distances(vertices, adj)
    if (dist < 0).any():
        raise NotConnected("graph is not connected")
    _check_median(dist, vertices)

    squares = _find_squares(vertices, adj)
    # In a median graph every 4-cycle is chordless; assert defensively that
    # no chordful 4-cycle slipped through (would indicate a bug above).
    for a, b, c, d in squares:
        assert b not in adj[d] and a not in adj[c]
    return CubeComplex(vertices, edge_set, dist, squares)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[rx] = ry


def compute_hyperplanes(X: CubeComplex):
    """Edge classes under the transitive closure of square-opposite parallelism."""
    edges = sorted(X.edges, key=lambda e: tuple(sorted(e)))
    uf = _UnionFind(edges)
    for a, b, c, d in X.squares:
        uf.union(frozenset((a, b)), frozenset((c, d)))
        uf.union(frozenset((b, c)), frozenset((d, a)))

    classes = {}
    for e in edges:
        classes.setdefault(uf.find(e), []).append(e)
    # deterministic ids: sort classes by their smallest edge
    ordered = sorted(classes.values(), key=lambda es: tuple(sorted(es[0])))

    hyperplanes = []
    for hid, dual in enumerate(ordered):
        dual_set = set(dual)
        # sides: components after removing the dual edges
        comp = {}
        for s in X.vertices:
            if s in comp:
                continue
            queue = deque([s])
            comp[s] = s
            while queue:
                u = queue.popleft()
                for w in X.adj[u]:
                    if frozenset((u, w)) in dual_set or w in comp:
                        continue
                    comp[w] = s
                    queue.append(w)
        roots = sorted(set(comp.values()), key=str)
        if len(roots) != 2:
            raise NotMedian(
                tuple(sorted(dual_set, key=tuple))[:1],
                [f"hyperplane leaves {len(roots)} components"],
            )
        side_a = frozenset(v for v in X.vertices if comp[v] == roots[0])
        side_b = frozenset(v for v in X.vertices if comp[v] == roots[1])
        carrier = frozenset(v for e in dual for v in e)
        for e in dual:
            u, v = tuple(e)
            assert (u in side_a) != (v in side_a), "dual edge inside one side"
        hyperplanes.append(
            Hyperplane(hid, frozenset(dual_set), side_a, side_b, carrier)
        )
    return tuple(hyperplanes)


def _interval_tensor(X: CubeComplex):
    """T[u, v, w] == True iff w lies on a geodesic from u to v."""
    t = getattr(X, "_itensor", None)
    if t is None:
        d = X._dist.astype(np.int32)
        t = (d[:, None, :] + d.T[None, :, :]) == d[:, :, None]
        X._itensor = t
    return t


def is_convex_set(X: CubeComplex, vertices):
    """Whether a vertex set is geodesically convex (interval-closed)."""
    idx = np.array(sorted(X.index[v] for v in vertices), dtype=np.intp)
    if idx.size <= 1:
        return True
    outside = np.setdiff1d(np.arange(len(X.vertices)), idx)
    if outside.size == 0:
        return True
    t = _interval_tensor(X)
    return not t[np.ix_(idx, idx, outside)].any()


def convexity_check(X: CubeComplex):
    """Halfspaces and carriers must all be convex; returns violation list."""
    violations = []
    for h in X.hyperplanes:
        for name, s in (("sideA", h.side_a), ("sideB", h.side_b),
                        ("carrier", h.carrier)):
            if not is_convex_set(X, s):
                violations.append({"hyperplane": h.id, "set": name})
    return violations


def helly_check(X: CubeComplex, family=None):
    """4-wise Helly property over halfspaces and carriers.

    Any four pairwise-intersecting sets of the family must share a vertex.
    A violating quadruple splits into two pairs whose intersections are
    disjoint, so it is enough to compare all pairs of pairwise intersections.
    """
    if family is None:
        family = []
        for h in X.hyperplanes:
            family.extend([h.side_a, h.side_b, h.carrier])
    n = len(X.vertices)
    m = len(family)
    M = np.zeros((m, n), dtype=bool)
    for i, s in enumerate(family):
        for v in s:
            M[i, X.index[v]] = True
    counts = M.astype(np.float32) @ M.astype(np.float32).T
    P = counts > 0  # pairwise intersection

    pairs = [(i, j) for i in range(m) for j in range(i + 1, m) if P[i, j]]
    if not pairs:
        return []
    I = np.array([p[0] for p in pairs], dtype=np.intp)
    J = np.array([p[1] for p in pairs], dtype=np.intp)
    R = np.array([M[i] & M[j] for i, j in pairs], dtype=np.float32)
    G = R @ R.T  # common vertices of (i ^ j) and (k ^ l)
    empty = G == 0
    ok_pairs = (
        P[np.ix_(I, I)] & P[np.ix_(I, J)] & P[np.ix_(J, I)] & P[np.ix_(J, J)]
    )
    distinct = (
        (I[:, None] != I[None, :])
        & (I[:, None] != J[None, :])
        & (J[:, None] != I[None, :])
        & (J[:, None] != J[None, :])
    )
    bad = np.argwhere(np.triu(empty & ok_pairs & distinct, k=1))
    violations = []
    for a, b in bad:
        violations.append(tuple(sorted({I[a], J[a], I[b], J[b]})))
    return sorted(set(violations))


def hyperplanes_at(X: CubeComplex, v):
    """The set W_v of ids of hyperplanes whose carrier contains v."""
    X.check_vertex(v)
    return {h.id for h in X.hyperplanes if v in h.carrier}


def separating(X: CubeComplex, A, B):
    """Hyperplanes with A entirely on one side and B entirely on the other."""
    A, B = set(A), set(B)
    for v in A | B:
        X.check_vertex(v)
    out = set()
    for h in X.hyperplanes:
        if (A <= h.side_a and B <= h.side_b) or (A <= h.side_b and B <= h.side_a):
            out.add(h.id)
    return out


def link_graph(X: CubeComplex, v) -> LinkGraph:
    X.check_vertex(v)
    nodes = hyperplanes_at(X, v)
    adjacency = set()
    for a, b, c, d in X.squares:
        if v not in (a, b, c, d):
            continue
        cyc = [frozenset((a, b)), frozenset((b, c)), frozenset((c, d)), frozenset((d, a))]
        at_v = [e for e in cyc if v in e]
        h1 = X.hyperplane_of_edge(*tuple(at_v[0])).id
        h2 = X.hyperplane_of_edge(*tuple(at_v[1])).id
        if h1 != h2:
            adjacency.add(frozenset((h1, h2)))
    return LinkGraph(v, frozenset(nodes), frozenset(adjacency))


def is_cone(nodes, adjacency):
    """Whether some node is adjacent to all others; returns (bool, apex).

    The empty graph counts as a (vacuous) cone with no apex, so that a vertex
    of a single edge comes out extremal.
    """
    nodes = set(nodes)
    if not nodes:
        return True, None
    neigh = {v: set() for v in nodes}
    for e in adjacency:
        u, v = tuple(e)
        neigh[u].add(v)
        neigh[v].add(u)
    for v in sorted(nodes, key=str):
        if neigh[v] == nodes - {v}:
            return True, v
    return False, None


def is_extremal(X: CubeComplex, v):
    lk = link_graph(X, v)
    cone, _ = is_cone(lk.nodes, lk.adjacency)
    return cone


def dual_edge_id(e):
    """Stable vertex id for a dual edge, used in hyperplane subcomplexes."""
    u, v = sorted(e, key=str)
    return f"{u}|{v}"


def hyperplane_complex(X: CubeComplex, hid) -> CubeComplex:
    """The cubical structure induced on a hyperplane.

    Vertices are the dual edges; two are joined when they lie in a common
    square of X.
    """
    h = X.hyperplane(hid)
    verts = sorted(dual_edge_id(e) for e in h.dual_edges)
    edges = set()
    for a, b, c, d in X.squares:
        pairs = [
            (frozenset((a, b)), frozenset((c, d))),
            (frozenset((b, c)), frozenset((d, a))),
        ]
        for e1, e2 in pairs:
            if e1 in h.dual_edges and e2 in h.dual_edges:
                edges.add(frozenset((dual_edge_id(e1), dual_edge_id(e2))))
    return validate_complex(verts, edges)


def random_median_complex(ambient_dim, seed_count, rng_seed, cap=None) -> CubeComplex:
    """Median closure of random 0/1-vectors inside the hypercube.

    The closure of any vertex subset of a median graph under coordinatewise
    majority is again median, so the induced Hamming-adjacency subgraph always
    passes validation.  Deterministic for a fixed rng_seed.
    """
    if not 1 <= ambient_dim <= 12:
        raise ValueError(f"ambient_dim must be in 1..12, got {ambient_dim}")
    if seed_count < 1:
        raise ValueError("seed_count must be >= 1")
    if cap is None:
        cap = vertex_cap()
    rng = random.Random(rng_seed)
    points = set()
    while len(points) < min(seed_count, 2 ** ambient_dim):
        points.add(tuple(rng.randint(0, 1) for _ in range(ambient_dim)))

    def close_majority(pts):
        frontier = set(pts)
        while frontier:
            new = set()
            all_pts = sorted(pts)
            for p in sorted(frontier):
                for q, r in combinations(all_pts, 2):
                    m = tuple(
                        (a & b) | (c & (a | b)) for a, b, c in zip(p, q, r)
                    )
                    if m not in pts and m not in new:
                        new.add(m)
            pts |= new
            if len(pts) > cap:
                raise SizeLimitExceeded(f"median closure exceeded {cap} vertices")
            frontier = new
        return pts

    def components(pts):
        comps = []
        seen = set()
        for s in sorted(pts):
            if s in seen:
                continue
            comp = {s}
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for i in range(ambient_dim):
                    w = u[:i] + (1 - u[i],) + u[i + 1:]
                    if w in pts and w not in comp:
                        comp.add(w)
                        queue.append(w)
            seen |= comp
            comps.append(comp)
        return comps

    # A majority-closed set can still induce a disconnected subgraph (two
    # antipodal seeds, say): bridge the closest inter-component pair with a
    # bit-flip path and re-close until connected.
    points = close_majority(points)
    while True:
        comps = components(points)
        if len(comps) == 1:
            break
        c0, c1 = comps[0], comps[1]
        p, q = min(
            ((p, q) for p in sorted(c0) for q in sorted(c1)),
            key=lambda pq: (sum(a != b for a, b in zip(*pq)), pq),
        )
        cur = p
        for i in range(ambient_dim):
            if cur[i] != q[i]:
                cur = cur[:i] + (q[i],) + cur[i + 1:]
                points.add(cur)
        points = close_majority(points)

    verts = sorted("".join(map(str, p)) for p in points)
    edges = {
        frozenset((u, v))
        for u, v in combinations(verts, 2)
        if sum(a != b for a, b in zip(u, v)) == 1
    }
    return validate_complex(verts, edges, cap=cap)


# ---------------------------------------------------------------------------
# Built-in instances

def _complex(vertices, edges):
    return validate_complex(vertices, [frozenset(e) for e in edges])


def builtin_complex(name) -> CubeComplex:
    name = name.upper()
    if name == "EDGE":
        return _complex(["0", "1"], [("0", "1")])
    if name == "SQUARE":
        return _complex(
            ["00", "01", "10", "11"],
            [("00", "01"), ("01", "11"), ("11", "10"), ("10", "00")],
        )
    if name == "Q3":
        verts = ["".join(bits) for bits in
                 ("000", "001", "010", "011", "100", "101", "110", "111")]
        edges = [
            (u, v)
            for u, v in combinations(verts, 2)
            if sum(a != b for a, b in zip(u, v)) == 1
        ]
        return _complex(verts, edges)
    if name == "PATH3":
        return _complex(["0", "1", "2", "3"], [("0", "1"), ("1", "2"), ("2", "3")])
    if name == "TRIPOD":
        return _complex(
            ["c", "l1", "l2", "l3"], [("c", "l1"), ("c", "l2"), ("c", "l3")]
        )
    if name == "DOMINO":
        # 2x1 grid of squares: vertices (x, y), x in 0..2, y in 0..1
        verts = [f"{x}{y}" for x in range(3) for y in range(2)]
        edges = []
        for x in range(3):
            edges.append((f"{x}0", f"{x}1"))
        for x in range(2):
            for y in range(2):
                edges.append((f"{x}{y}", f"{x + 1}{y}"))
        return _complex(verts, edges)
    raise KeyError(f"unknown builtin complex {name!r}")


BUILTIN_COMPLEXES = ("EDGE", "SQUARE", "Q3", "PATH3", "TRIPOD", "DOMINO")


# ---------------------------------------------------------------------------
# Serialization

def complex_to_json(X: CubeComplex) -> dict:
    return {
        "vertices": [str(v) for v in X.vertices],
        "edges": sorted(sorted(map(str, e)) for e in X.edges),
    }


def complex_from_json(doc) -> CubeComplex:
    return validate_complex(doc["vertices"], [frozenset(e) for e in doc["edges"]])


def hyperplane_report(X: CubeComplex) -> list:
    out = []
    for h in X.hyperplanes:
        out.append(
            {
                "id": h.id,
                "edges": sorted(sorted(map(str, e)) for e in h.dual_edges),
                "sideA": sorted(map(str, h.side_a)),
                "sideB": sorted(map(str, h.side_b)),
                "carrier": sorted(map(str, h.carrier)),
            }
        )
    return out


def complex_to_dot(X: CubeComplex) -> str:
    lines = ["graph skeleton {"]
    for v in X.vertices:
        lines.append(f'  "{v}";')
    for e in sorted(X.edges, key=lambda e: tuple(sorted(e))):
        u, v = sorted(e)
        hid = X.hyperplane_of_edge(u, v).id
        lines.append(f'  "{u}" -- "{v}" [label="{hid}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dump_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
