"""Balls in universal covers of Salvetti (RAAG) and Davis (RACG) complexes.

A defining graph picks a right-angled group; balls are generated by BFS over
normal forms, yielding a labelled median complex on which hyperplane labels,
star-inclusion structure, extension-graph truncations and the explicit exotic
automorphisms can be computed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from . import contact as _contact
from . import median as _median
from .errors import (
    BallTooSmall,
    GeneratorsAdjacent,
    LemmaViolation,
    NotACone,
    NotAnAutomorphism,
    NotInterior,
    SizeLimitExceeded,
    StarNotContained,
    UnknownGenerator,
    UnknownVertex,
)

ARTIN = "artin"
COXETER = "coxeter"


class DefiningGraph:
    """A finite simple graph whose vertices are group generators."""

    def __init__(self, vertices, edges):
        self.vertices = tuple(dict.fromkeys(vertices))
        if "1" in self.vertices:
            raise ValueError('generator name "1" is reserved for the identity')
        self.order = {g: i for i, g in enumerate(self.vertices)}
        self.adj = {g: set() for g in self.vertices}
        for e in edges:
            u, v = tuple(e)
            if u not in self.order or v not in self.order:
                raise UnknownGenerator(e)
            if u == v:
                raise ValueError(f"self-loop at {u!r}")
            self.adj[u].add(v)
            self.adj[v].add(u)
        self.edges = frozenset(
            frozenset((u, v)) for u in self.adj for v in self.adj[u]
        )

    def check_generator(self, g):
        if g not in self.order:
            raise UnknownGenerator(g)

    def commute(self, g, h):
        return h in self.adj[g]

    def lk(self, g):
        self.check_generator(g)
        return set(self.adj[g])

    def st(self, g):
        return self.lk(g) | {g}

    def join_decomposition(self):
        """Split off the vertices adjacent to everything else.

        Returns (clique_part, rest); the rest is never a cone.
        """
        n = len(self.vertices)
        clique = tuple(
            g for g in self.vertices if len(self.adj[g]) == n - 1
        )
        rest = tuple(g for g in self.vertices if g not in clique)
        return clique, rest

    def is_cone(self):
        return any(
            len(self.adj[g]) == len(self.vertices) - 1 for g in self.vertices
        )

    def is_complete(self):
        n = len(self.vertices)
        return all(len(self.adj[g]) == n - 1 for g in self.vertices)


def builtin_defining_graph(name) -> DefiningGraph:
    name = name.upper()
    if name == "P4":
        return DefiningGraph("abcd", [("a", "b"), ("b", "c"), ("c", "d")])
    if name == "C5":
        return DefiningGraph(
            "abcde",
            [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")],
        )
    if name == "STAR_EQ5":
        # a-b joined to the non-adjacent pair c, d; e attached to c and d.
        # St a = St b = {a, b, c, d}.
        return DefiningGraph(
            "abcde",
            [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"),
             ("c", "e"), ("d", "e")],
        )
    if name == "F2":
        return DefiningGraph("xy", [])
    if name == "EDGE2":
        return DefiningGraph("xy", [("x", "y")])
    if name == "SINGLE":
        return DefiningGraph("x", [])
    raise KeyError(f"unknown builtin defining graph {name!r}")


BUILTIN_GRAPHS = ("P4", "C5", "STAR_EQ5", "F2", "EDGE2", "SINGLE")


def graph_from_json(doc) -> DefiningGraph:
    return DefiningGraph(doc["vertices"], [tuple(e) for e in doc["edges"]])


def graph_to_json(gamma: DefiningGraph) -> dict:
    return {
        "vertices": list(gamma.vertices),
        "edges": sorted(sorted(e) for e in gamma.edges),
    }


# ---------------------------------------------------------------------------
# Normal forms
#
# Words are tuples of syllables (generator, exponent).  Coxeter exponents are
# always 1.  Reduction pushes one syllable at a time onto a stack, merging
# with the last same-generator syllable reachable across commuting syllables;
# the canonical representative is the ShortLex-least linearization under the
# defining graph's vertex order.

def _push(gamma, kind, sylls, g, e):
    gamma.check_generator(g)
    if kind == COXETER:
        e = e % 2
    if e == 0:
        return
    i = len(sylls) - 1
    while i >= 0:
        h, f = sylls[i]
        if h == g:
            merged = (f + e) % 2 if kind == COXETER else f + e
            if merged == 0:
                del sylls[i]
            else:
                sylls[i] = (g, merged)
            return
        if not gamma.commute(h, g):
            break
        i -= 1
    sylls.append((g, e))


def _canonicalize(gamma, sylls):
    remaining = list(sylls)
    out = []
    while remaining:
        best = None
        for i, (g, e) in enumerate(remaining):
            if any(
                h == g or not gamma.commute(h, g)
                for h, _ in remaining[:i]
            ):
                continue
            if best is None or gamma.order[g] < gamma.order[remaining[best][0]]:
                best = i
        out.append(remaining.pop(best))
    return tuple(out)


def normal_form(gamma: DefiningGraph, kind, word):
    """Canonical form of a word given as (generator, exponent) pairs.

    Two words represent the same group element iff their normal forms agree.
    """
    if kind not in (ARTIN, COXETER):
        raise ValueError(f"kind must be {ARTIN!r} or {COXETER!r}")
    sylls = []
    for g, e in word:
        if kind == COXETER and e % 2 == 0:
            continue
        step = 1 if e > 0 else -1
        if kind == COXETER:
            _push(gamma, kind, sylls, g, 1)
        else:
            for _ in range(abs(e)):
                _push(gamma, kind, sylls, g, step)
    return _canonicalize(gamma, sylls)


def nf_mult(gamma, kind, w1, w2):
    sylls = list(w1)
    for g, e in w2:
        step = 1 if e > 0 else -1
        reps = 1 if kind == COXETER else abs(e)
        for _ in range(reps):
            _push(gamma, kind, sylls, g, 1 if kind == COXETER else step)
    return _canonicalize(gamma, sylls)


def nf_inverse(kind, w):
    if kind == COXETER:
        return tuple(reversed(w))
    return tuple((g, -e) for g, e in reversed(w))


def word_length(kind, w):
    if kind == COXETER:
        return len(w)
    return sum(abs(e) for _, e in w)


def format_word(w):
    if not w:
        return "1"
    parts = []
    for g, e in w:
        parts.append(g if e == 1 else f"{g}^{e}")
    return ".".join(parts)


def parse_word(text):
    """Inverse of format_word: 'a.b^-2' -> ((a,1),(b,-2))."""
    if text in ("", "1"):
        return ()
    out = []
    for tok in text.split("."):
        if "^" in tok:
            g, e = tok.split("^")
            out.append((g, int(e)))
        else:
            out.append((tok, 1))
    return tuple(out)


def initial_letters(gamma, kind, w):
    """Letters that can start some word representing w."""
    out = set()
    for i, (g, e) in enumerate(w):
        if all(h != g and gamma.commute(h, g) for h, _ in w[:i]):
            out.add((g, 1 if kind == COXETER else (1 if e > 0 else -1)))
    return out


def ambient_median(gamma, kind, x, y, z):
    """Median of three group elements in the Cayley graph.

    Equals x times the longest common prefix (under commutation moves) of
    x^-1 y and x^-1 z.
    """
    u = nf_mult(gamma, kind, nf_inverse(kind, x), y)
    v = nf_mult(gamma, kind, nf_inverse(kind, x), z)
    m = x
    while True:
        common = initial_letters(gamma, kind, u) & initial_letters(gamma, kind, v)
        if not common:
            return m
        g, s = min(common, key=lambda le: (gamma.order[le[0]], le[1]))
        step = ((g, s),)
        inv_step = ((g, -s),) if kind == ARTIN else step
        m = nf_mult(gamma, kind, m, step)
        u = nf_mult(gamma, kind, inv_step, u)
        v = nf_mult(gamma, kind, inv_step, v)


def median_closure(gamma, kind, elements, cap):
    """Close a set of group elements under triple medians.

    Word-metric balls need not be median-closed (commuting clusters push
    medians past the radius); the closure restores the median property while
    adding as few vertices as possible.  Returns (elements, D) where elements
    is the canonically sorted closure and D its ambient distance matrix.
    """
    import numpy as np

    S = set(elements)
    while True:
        elems = sorted(S, key=lambda w: (word_length(kind, w), format_word(w)))
        n = len(elems)
        inv = [nf_inverse(kind, w) for w in elems]
        D = np.zeros((n, n), dtype=np.int32)
        for i in range(n):
            for j in range(i + 1, n):
                d = word_length(kind, nf_mult(gamma, kind, inv[i], elems[j]))
                D[i, j] = D[j, i] = d
        # Ambient medians are unique, so restricting to S only ever loses
        # them: every defect is a zero-median triple.
        defects = _median.median_triple_defects(D, first_only=False)
        if not defects:
            return elems, D
        added = False
        for a, b, c, medians in defects:
            assert not medians, "restricted set gained an extra median"
            m = ambient_median(gamma, kind, elems[a], elems[b], elems[c])
            if m not in S:
                S.add(m)
                added = True
                if len(S) > cap:
                    raise SizeLimitExceeded(
                        f"median closure of ball exceeds {cap} vertices"
                    )
        assert added, "median-free triple but closure added nothing"


# ---------------------------------------------------------------------------
# Balls

@dataclass(frozen=True)
class Ball:
    gamma: DefiningGraph
    kind: str
    radius: int
    complex: _median.CubeComplex
    words: dict  # vertex id -> normal form
    edge_label: dict  # frozenset edge -> generator
    labels: dict  # hyperplane id -> generator
    depth: dict  # vertex id -> radius - word length

    @property
    def basepoint(self):
        return "1"

    def word(self, vid):
        if vid not in self.words:
            raise UnknownVertex(vid)
        return self.words[vid]

    def vertex_of_word(self, w):
        vid = format_word(w)
        if vid not in self.words:
            raise UnknownVertex(vid)
        return vid

    def interior_vertices(self, margin):
        return {v for v, d in self.depth.items() if d >= margin}

    def interior_hyperplanes(self, margin):
        """Hyperplanes with a dual edge whose endpoints both sit at depth >= margin."""
        out = set()
        for h in self.complex.hyperplanes:
            for e in h.dual_edges:
                u, v = tuple(e)
                if self.depth[u] >= margin and self.depth[v] >= margin:
                    out.add(h.id)
                    break
        return out


def _ball_complex(vertices, edges, ambient_dist, cap):
    """Build the ball's complex, reusing the closure's median certificate.

    When the induced graph metric coincides with the ambient word metric the
    closure scan already certifies the median property, so the full check in
    validate_complex would only repeat it.
    """
    import numpy as np

    if len(vertices) > cap:
        raise SizeLimitExceeded(f"{len(vertices)} vertices exceeds cap {cap}")
    adj = {v: set() for v in vertices}
    for e in edges:
        u, v = tuple(e)
        adj[u].add(v)
        adj[v].add(u)
    dist = _median._bfs_distances(vertices, adj)
    if (dist < 0).any() or not np.array_equal(dist, ambient_dist):
        return _median.validate_complex(vertices, edges, cap=cap)
    squares = _median._find_squares(vertices, adj)
    edge_set = {frozenset(e) for e in edges}
    return _median.CubeComplex(vertices, edge_set, dist, squares)


def _letters(gamma, kind):
    if kind == COXETER:
        return [(g, 1) for g in gamma.vertices]
    return [(g, e) for g in gamma.vertices for e in (1, -1)]


def build_ball(gamma: DefiningGraph, kind, radius, cap=None) -> Ball:
    """BFS over normal forms up to the given word length.

    The resulting graph is validated as a median complex; hyperplane labels
    are checked to be well-defined.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    if cap is None:
        cap = _median.vertex_cap()
    letters = _letters(gamma, kind)

    words = {()}
    queue = deque([()])
    while queue:
        w = queue.popleft()
        for g, e in letters:
            w2 = nf_mult(gamma, kind, w, ((g, e),))
            if word_length(kind, w2) > radius:
                continue
            if w2 not in words:
                if len(words) >= cap:
                    raise SizeLimitExceeded(f"ball exceeds {cap} vertices")
                words.add(w2)
                queue.append(w2)

    # commuting clusters can push medians just past the radius; restore the
    # median property with as few extra vertices as possible
    ids, ambient_dist = median_closure(gamma, kind, words, cap)
    words = set(ids)

    edges = {}
    for w in words:
        for g, e in letters:
            w2 = nf_mult(gamma, kind, w, ((g, e),))
            if w2 in words:
                edge = frozenset((format_word(w), format_word(w2)))
                prev = edges.get(edge)
                assert prev is None or prev == g, "edge with two labels"
                edges[edge] = g

    vid_words = {format_word(w): w for w in ids}
    X = _ball_complex(list(vid_words), list(edges), ambient_dist, cap)

    labels = {}
    for h in X.hyperplanes:
        labs = {edges[e] for e in h.dual_edges}
        if len(labs) != 1:
            raise LemmaViolation(
                f"hyperplane {h.id} carries labels {sorted(labs)}"
            )
        labels[h.id] = labs.pop()

    depth = {
        vid: radius - word_length(kind, w) for vid, w in vid_words.items()
    }
    return Ball(gamma, kind, radius, X, vid_words, edges, labels, depth)


def expected_link(gamma: DefiningGraph, kind):
    """The link every deep ball vertex must have: nodes are labelled edge
    germs, joined when the labels commute (never a germ with its opposite).
    """
    if kind == COXETER:
        nodes = {(g, 1) for g in gamma.vertices}
    else:
        nodes = {(g, s) for g in gamma.vertices for s in (1, -1)}
    adjacency = {
        frozenset((a, b))
        for a, b in combinations(sorted(nodes), 2)
        if a[0] != b[0] and gamma.commute(a[0], b[0])
    }
    return nodes, adjacency


def check_ball_links(ball: Ball, margin=2):
    """Deep vertices must realize the expected link over the defining graph.

    Squares witnessing transversality need two extra letters, hence margin 2.
    """
    exp_nodes, exp_adj = expected_link(ball.gamma, ball.kind)
    X = ball.complex
    for v in sorted(ball.interior_vertices(margin)):
        lk = _median.link_graph(X, v)
        germ = {}
        for h in lk.nodes:
            hp = X.hyperplane(h)
            (e,) = [e for e in hp.dual_edges if v in e]
            (nbr,) = e - {v}
            g = ball.edge_label[e]
            if ball.kind == COXETER:
                germ[h] = (g, 1)
            else:
                diff = nf_mult(
                    ball.gamma, ball.kind,
                    nf_inverse(ball.kind, ball.words[v]), ball.words[nbr],
                )
                assert len(diff) == 1 and diff[0][0] == g
                germ[h] = (g, 1 if diff[0][1] > 0 else -1)
        if set(germ.values()) != exp_nodes:
            raise LemmaViolation(
                f"vertex {v}: germs {sorted(germ.values())} != expected"
            )
        got_adj = {
            frozenset((germ[a], germ[b])) for e in lk.adjacency
            for a, b in [tuple(e)]
        }
        if got_adj != exp_adj:
            raise LemmaViolation(f"vertex {v}: link adjacency mismatch")


def ball_to_json(ball: Ball) -> dict:
    doc = _median.complex_to_json(ball.complex)
    doc["kind"] = ball.kind
    doc["radius"] = ball.radius
    doc["graph"] = graph_to_json(ball.gamma)
    doc["labels"] = {str(h): g for h, g in sorted(ball.labels.items())}
    doc["depth"] = {v: d for v, d in sorted(ball.depth.items())}
    return doc


# ---------------------------------------------------------------------------
# Star inclusions and interaction sets on Davis balls

def definitional_I(X, hid):
    """I(w): hyperplane ids adjacent to every carrier vertex of w."""
    h = X.hyperplane(hid)
    sets = [_median.hyperplanes_at(X, v) for v in h.carrier]
    return set.intersection(*sets)


def star_inclusion_I_check(ball: Ball, margin=2) -> dict:
    """Compare I and I0 of deep hyperplanes against the star-containment formulas.

    For an interior hyperplane w, I(w) should equal the set of hyperplanes u
    whose carrier meets w's with St(label w) contained in St(label u) in the
    defining graph, and I0(w) the subset with equal stars.
    """
    if ball.kind != COXETER:
        raise ValueError("star-inclusion analysis applies to coxeter balls")
    X = ball.complex
    interior = ball.interior_hyperplanes(margin)
    report = {"margin": margin, "hyperplanes": {}, "mismatches": []}
    for h in X.hyperplanes:
        if h.id not in interior:
            continue
        I = definitional_I(X, h.id)
        I0 = {u for u in I if X.hyperplane(u).carrier == h.carrier}
        st_w = ball.gamma.st(ball.labels[h.id])
        formula_I = {
            u.id
            for u in X.hyperplanes
            if (u.carrier & h.carrier)
            and st_w <= ball.gamma.st(ball.labels[u.id])
        }
        formula_I0 = {
            u for u in formula_I if st_w == ball.gamma.st(ball.labels[u])
        }
        entry = {
            "label": ball.labels[h.id],
            "I": sorted(I),
            "I0": sorted(I0),
            "formula_I": sorted(formula_I),
            "formula_I0": sorted(formula_I0),
        }
        report["hyperplanes"][h.id] = entry
        if I != formula_I or I0 != formula_I0:
            report["mismatches"].append(h.id)
    return report


# ---------------------------------------------------------------------------
# Syllable metric

def _syllable_adjacency(ball: Ball):
    cache = getattr(ball, "_syllable_adj", None)
    if cache is not None:
        return cache
    adj = {v: set() for v in ball.words}
    letters = _letters(ball.gamma, ball.kind)
    for v, w in ball.words.items():
        for g, e in letters:
            cur = w
            while True:
                cur = nf_mult(ball.gamma, ball.kind, cur, ((g, e),))
                vid = format_word(cur)
                if vid not in ball.words:
                    break
                if vid != v:
                    adj[v].add(vid)
                    adj[vid].add(v)
                if ball.kind == COXETER:
                    break
    object.__setattr__(ball, "_syllable_adj", adj)
    return adj


def syllable_distance(ball: Ball, x, y) -> int:
    """BFS distance in the syllable graph on ball vertices.

    Vertices are adjacent when they differ by a power of a single generator.
    This is an upper bound for the true syllable metric: a shorter path
    through vertices outside the ball cannot be seen here.
    """
    x = x if isinstance(x, str) else format_word(x)
    y = y if isinstance(y, str) else format_word(y)
    if x not in ball.words:
        raise UnknownVertex(x)
    if y not in ball.words:
        raise UnknownVertex(y)
    if x == y:
        return 0
    adj = _syllable_adjacency(ball)
    dist = {x: 0}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                if w == y:
                    return dist[w]
                queue.append(w)
    raise UnknownVertex(f"{y} unreachable in the syllable graph")


# ---------------------------------------------------------------------------
# Extension graph

def _segment_classes(ball: Ball):
    """Parallelism classes of standard segments in the ball.

    A standard segment is a maximal single-label geodesic piece of a coset
    g<x> inside the ball.  Two segments sharing a hyperplane are parallel
    (the dual edges of a hyperplane all bound parallel copies of the same
    coset line), so classes are formed by merging overlapping crossed sets.
    Returns a list of (label, frozenset of hyperplane ids).
    """
    X = ball.complex
    crossed_sets = {}
    for v, w in ball.words.items():
        for g in ball.gamma.vertices:
            # walk to the segment's end in one direction, then sweep back
            cur = w
            step = ((g, 1),)
            back = ((g, -1),) if ball.kind == ARTIN else step
            while True:
                nxt = nf_mult(ball.gamma, ball.kind, cur, step)
                if format_word(nxt) not in ball.words or nxt == w:
                    break
                cur = nxt
            crossed = set()
            vid = format_word(cur)
            while True:
                nxt = nf_mult(ball.gamma, ball.kind, cur, back)
                nid = format_word(nxt)
                if nid not in ball.words or nid == vid:
                    break
                crossed.add(X.hyperplane_of_edge(vid, nid).id)
                cur, vid = nxt, nid
            if crossed:
                crossed_sets.setdefault(g, []).append(crossed)

    classes = []
    for g in ball.gamma.vertices:
        pool = crossed_sets.get(g, [])
        merged = []
        for s in pool:
            keep = []
            acc = set(s)
            for m in merged:
                if m & acc:
                    acc |= m
                else:
                    keep.append(m)
            keep.append(acc)
            merged = keep
        classes.extend((g, frozenset(m)) for m in merged)
    # hyperplane labels already separate the classes across generators; make
    # sure no hyperplane ended up in two classes
    seen = {}
    for g, cls in classes:
        for h in cls:
            assert h not in seen, f"hyperplane {h} in two parallelism classes"
            seen[h] = g
            assert ball.labels[h] == g
    return sorted(classes, key=lambda it: (it[0], sorted(it[1])))


def interior_reduced_classes(ball: Ball, margin=2, F=None):
    """Reduced crossing classes computed on interior hyperplanes only.

    Neighborhoods are taken inside the interior crossing graph, excluding the
    compared pair, mirroring the self-exclusive reduction.
    """
    if F is None:
        F = _contact.build_contact_family(ball.complex)
    interior = ball.interior_hyperplanes(margin)
    crossing = {h: F.crossing[h] & interior for h in interior}

    classes = []
    for h in sorted(interior):
        for cls in classes:
            u = cls[0]
            if crossing[h] - {h, u} == crossing[u] - {h, u}:
                cls.append(h)
                break
        else:
            classes.append([h])
    for cls in classes:
        for u, w in combinations(cls, 2):
            if crossing[u] - {u, w} != crossing[w] - {u, w}:
                raise LemmaViolation(
                    f"interior reduced class {cls} not pairwise equal"
                )
    return [frozenset(cls) for cls in classes], crossing


def extension_graph_ball(gamma: DefiningGraph, radius, margin=None, ball=None) -> dict:
    """Truncated extension graph of an artin ball, compared against the
    interior reduced crossing graph.

    Vertices are parallelism classes of standard segments; two classes are
    joined when every interior hyperplane of one is transverse to every
    interior hyperplane of the other inside the ball.  The comparison
    restricts both sides to interior hyperplanes and is skipped when two
    defining-graph vertices share a link (the lemma's precondition).
    """
    if ball is None:
        ball = build_ball(gamma, ARTIN, radius)
    if margin is None:
        margin = max(0, min(2, ball.radius - 1))
    equal_links = [
        (a, b)
        for a, b in combinations(gamma.vertices, 2)
        if gamma.lk(a) == gamma.lk(b)
    ]
    F = _contact.build_contact_family(ball.complex)
    interior = ball.interior_hyperplanes(margin)
    classes_seg = _segment_classes(ball)
    verts = [cls for _, cls in classes_seg]
    labels = {cls: g for g, cls in classes_seg}
    cores = {cls: cls & interior for cls in verts}
    edges = set()
    for c1, c2 in combinations(verts, 2):
        if not cores[c1] or not cores[c2]:
            continue
        if all(u in F.crossing[w] for u in cores[c1] for w in cores[c2]):
            edges.add(frozenset((c1, c2)))

    out = {
        "margin": margin,
        "vertices": verts,
        "labels": labels,
        "edges": edges,
        "comparison": None,
    }
    if equal_links:
        out["comparison"] = {
            "skipped": f"vertices with equal links: {equal_links}"
        }
        return out

    reduced_classes, crossing = interior_reduced_classes(ball, margin, F)
    reduced_edges = {
        frozenset((c1, c2))
        for c1, c2 in combinations(reduced_classes, 2)
        if all(u in crossing[w] for u in c1 for w in c2)
    }
    interior_verts = sorted(
        (sorted(cores[cls]) for cls in verts if cores[cls])
    )
    interior_edges = {
        frozenset((frozenset(cores[a]), frozenset(cores[b])))
        for e in edges
        for a, b in [tuple(e)]
    }
    out["comparison"] = {
        "classes": reduced_classes,
        "reduced_edges": reduced_edges,
        "same_partition": interior_verts == sorted(map(sorted, reduced_classes)),
        "same_edges": set(reduced_edges) == interior_edges,
    }
    out["comparison"]["isomorphic"] = (
        out["comparison"]["same_partition"] and out["comparison"]["same_edges"]
    )
    return out


# ---------------------------------------------------------------------------
# Exotic automorphisms

def _invert_generator(gamma, word, y):
    """The automorphism y -> y^-1 of the artin group, on normal forms."""
    return normal_form(
        gamma, ARTIN, [(g, -e if g == y else e) for g, e in word]
    )


@dataclass(frozen=True)
class HalfspaceTwist:
    perm: dict  # vertex id -> vertex id, a certified ball automorphism
    hyperplane: int  # the x-labeled hyperplane w at the identity
    side: str  # which side of w plays the role of h
    moved: tuple  # vertices with perm(v) != v


def halfspace_twist(ball: Ball, x, y, side="A") -> HalfspaceTwist:
    """Piecewise automorphism: identity beyond an x-hyperplane at the
    identity, generator inversion y -> y^-1 on the chosen side.

    The two pieces agree on the hyperplane's carrier (carrier words avoid y),
    so the result is a well-defined automorphism of the ball's skeleton that
    fixes the carrier pointwise and differs from the identity.
    """
    if ball.kind != ARTIN:
        raise ValueError("the halfspace twist lives on artin balls")
    ball.gamma.check_generator(x)
    ball.gamma.check_generator(y)
    if x == y or ball.gamma.commute(x, y):
        raise GeneratorsAdjacent(f"{x!r} and {y!r} must be non-adjacent")
    if side not in ("A", "B"):
        raise ValueError("side must be 'A' or 'B'")
    if ball.radius < 2:
        raise BallTooSmall("radius >= 2 needed to witness a nontrivial twist")

    X = ball.complex
    h = X.hyperplane_of_edge("1", x)
    halfspace = h.side_a if side == "A" else h.side_b

    perm = {}
    for v, w in ball.words.items():
        if v in halfspace and v not in h.carrier:
            image = _invert_generator(ball.gamma, w, y)
            assert word_length(ARTIN, image) == word_length(ARTIN, w)
            perm[v] = format_word(image)
        else:
            perm[v] = v
    for v in h.carrier:
        # carrier vertices contain no y letters, so the twist fixes them
        assert format_word(_invert_generator(ball.gamma, ball.words[v], y)) == v
        assert perm[v] == v

    from .reconstruction import verify_automorphism

    verify_automorphism(X.adj, perm)
    moved = tuple(sorted(v for v in perm if perm[v] != v))
    if not moved:
        raise BallTooSmall("twist collapsed to the identity on this ball")
    return HalfspaceTwist(perm, h.id, side, moved)


@dataclass(frozen=True)
class DavisPhi:
    phi: dict  # interior hyperplane id -> hyperplane id
    partition: dict  # hyperplane id -> 'A+', 'A-' or 'T'
    reflection: tuple  # normal form of the conjugate involution w b w^-1
    rho_map: dict  # partial vertex map induced by phi
    witness_square: tuple  # a square crossed by both hyperplanes
    broken_edge: tuple  # an edge of that square whose rho-image is a non-edge
    a_hyperplane: int
    b_hyperplane: int


def davis_phi(ball: Ball, a, b, base="1", margin=2) -> DavisPhi:
    """Contact automorphism that is the reflection in the b-hyperplane on one
    side of the a-hyperplane and the identity elsewhere.

    Needs St a contained in St b; the induced vertex map fixes one halfspace,
    reflects the other, and therefore breaks every square crossed by both
    hyperplanes.
    """
    if ball.kind != COXETER:
        raise ValueError("the reflection construction lives on coxeter balls")
    ball.gamma.check_generator(a)
    ball.gamma.check_generator(b)
    if a == b or not ball.gamma.st(a) <= ball.gamma.st(b):
        raise StarNotContained(f"St {a!r} is not contained in St {b!r}")
    if base not in ball.words:
        raise UnknownVertex(base)

    X = ball.complex
    w = ball.words[base]
    gamma, kind = ball.gamma, ball.kind

    def vertex(word):
        vid = format_word(word)
        return vid if vid in ball.words else None

    va = vertex(nf_mult(gamma, kind, w, ((a, 1),)))
    vb = vertex(nf_mult(gamma, kind, w, ((b, 1),)))
    vab = vertex(nf_mult(gamma, kind, w, ((a, 1), (b, 1))))
    if va is None or vb is None or vab is None:
        raise BallTooSmall(f"no a,b square at base {base!r}")
    ha = X.hyperplane_of_edge(base, va)
    hb = X.hyperplane_of_edge(base, vb)
    interior = ball.interior_hyperplanes(margin)
    if ha.id not in interior:
        raise NotInterior(f"a-hyperplane {ha.id} not interior at margin {margin}")
    if hb.id not in interior:
        raise NotInterior(f"b-hyperplane {hb.id} not interior at margin {margin}")

    a_plus = ha.side_of(va)  # the side the reflection acts on
    a_minus = ha.other_side(va)
    partition = {}
    for h in X.hyperplanes:
        if h.id not in interior:
            continue
        if h.id == ha.id or h.id in _contact_transverse(X, ha.id):
            partition[h.id] = "T"
        elif h.carrier <= a_plus:
            partition[h.id] = "A+"
        else:
            assert h.carrier <= a_minus, "carrier split without transversality"
            partition[h.id] = "A-"

    reflection = nf_mult(
        gamma, kind, nf_mult(gamma, kind, w, ((b, 1),)), nf_inverse(kind, w)
    )

    def reflect_vertex(vid):
        img = nf_mult(gamma, kind, reflection, ball.words[vid])
        return vertex(img)

    phi = {}
    for hid, part in partition.items():
        if part != "A+":
            phi[hid] = hid
            continue
        h = X.hyperplane(hid)
        images = set()
        for e in h.dual_edges:
            u, v = tuple(e)
            iu, iv = reflect_vertex(u), reflect_vertex(v)
            if iu is not None and iv is not None:
                images.add(X.hyperplane_of_edge(iu, iv).id)
        if len(images) != 1:
            raise LemmaViolation(
                f"reflection image of hyperplane {hid} ill-defined: {images}"
            )
        phi[hid] = images.pop()

    # the reflection fixes every hyperplane transverse or equal to the
    # a-hyperplane, which is what makes the piecewise definition consistent
    for hid, part in partition.items():
        if part != "T":
            continue
        h = X.hyperplane(hid)
        for e in h.dual_edges:
            u, v = tuple(e)
            iu, iv = reflect_vertex(u), reflect_vertex(v)
            if iu is not None and iv is not None:
                if X.hyperplane_of_edge(iu, iv).id != hid:
                    raise LemmaViolation(
                        f"reflection moves transverse hyperplane {hid}"
                    )
                break

    # no contact pair may straddle the two halfspaces
    for u, part_u in partition.items():
        for v, part_v in partition.items():
            if part_u == "A+" and part_v == "A-":
                if v in _contact_adjacent(X, u):
                    raise LemmaViolation(
                        f"contact edge between halves: {u} ({part_u}), {v} ({part_v})"
                    )

    # contact adjacency must be preserved wherever phi is defined
    for u, v in combinations(sorted(phi), 2):
        before = v in _contact_adjacent(X, u)
        after = phi[v] in _contact_adjacent(X, phi[u])
        if before != after:
            raise LemmaViolation(
                f"phi breaks contact adjacency on ({u}, {v})"
            )

    rho_map = {}
    for vid in ball.words:
        if vid in a_minus:
            rho_map[vid] = vid
        else:
            img = reflect_vertex(vid)
            if img is not None:
                rho_map[vid] = img

    # a square crossed by both hyperplanes: one pair of opposite vertices is
    # fixed, the other is swapped, so one of its edges maps to a non-edge
    square = (base, va, vab, vb)
    broken = None
    for u, v in ((base, va), (va, vab), (vab, vb), (vb, base)):
        if u in rho_map and v in rho_map:
            if frozenset((rho_map[u], rho_map[v])) not in X.edges:
                broken = (u, v)
                break
    if broken is None:
        raise LemmaViolation(
            f"rho(phi) preserves the square at {base!r}; no witness found"
        )
    return DavisPhi(
        phi, partition, reflection, rho_map, square, broken, ha.id, hb.id
    )


def _contact_transverse(X, hid):
    return {
        u.id
        for u in X.hyperplanes
        if u.id != hid and _contact.interaction(X, u.id, hid) == "transverse"
    }


def _contact_adjacent(X, hid):
    return {
        u.id
        for u in X.hyperplanes
        if u.id != hid
        and _contact.interaction(X, u.id, hid)
        in ("transverse", "contact_osculating")
    }


def syllable_shuffle(ball: Ball, sigma, apex=None) -> dict:
    """Shuffle the central coordinate of a cone-graph artin ball.

    When the defining graph is a cone with apex z, the group splits as a
    direct product with the z-axis; any permutation of the axis induces a
    syllable-metric isometry.  Returns the partial vertex map (defined where
    the image stays in the ball) plus certification data: the map preserves
    ball syllable distances on pairs of interior vertices and fixes every
    truncated extension-graph vertex.
    """
    if ball.kind != ARTIN:
        raise ValueError("the shuffle lives on artin balls")
    gamma = ball.gamma
    apexes = [
        g for g in gamma.vertices if len(gamma.adj[g]) == len(gamma.vertices) - 1
    ]
    if apex is None:
        if not apexes:
            raise NotACone("the defining graph has no apex vertex")
        apex = apexes[0]
    elif apex not in apexes:
        raise NotACone(f"{apex!r} is not adjacent to every other vertex")

    R = ball.radius
    table = {n: sigma.get(n, n) if isinstance(sigma, dict) else sigma(n)
             for n in range(-R, R + 1)}
    if sorted(table.values()) != list(range(-R, R + 1)):
        raise ValueError(f"sigma must permute -{R}..{R}")

    perm = {}
    for vid, w in ball.words.items():
        n = sum(e for g, e in w if g == apex)
        rest = normal_form(gamma, ARTIN, [(g, e) for g, e in w if g != apex])
        image = nf_mult(gamma, ARTIN, rest, ((apex, table[n]),) if table[n] else ())
        iid = format_word(image)
        if iid in ball.words:
            perm[vid] = iid

    moved = sorted(v for v, i in perm.items() if i != v)
    return {"apex": apex, "perm": perm, "moved": moved, "sigma": table}

def graph_star_analysis(gamma: DefiningGraph) -> dict:
    verts = gamma.vertices
    containments = []
    equal_stars = []
    equal_links = []
    for a in verts:
        for b in verts:
            if a == b:
                continue
            if gamma.st(a) <= gamma.st(b):
                containments.append((a, b))
    for a, b in combinations(verts, 2):
        if gamma.st(a) == gamma.st(b):
            equal_stars.append((a, b))
        if gamma.lk(a) == gamma.lk(b):
            equal_links.append((a, b))
    clique, rest = gamma.join_decomposition()
    return {
        "star_containments": containments,
        "equal_stars": equal_stars,
        "equal_links": equal_links,
        "join_clique": list(clique),
        "join_rest": list(rest),
        "is_cone": gamma.is_cone(),
    }
