"""Vertices as maximal cliques of the contact graph, and the maps between
automorphisms of the complex and automorphisms of its contact graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .contact import ContactFamily, all_interaction_sets, build_contact_family
from .errors import (
    AmbiguousClique,
    CliqueLimitExceeded,
    HyperplaneNotPreserved,
    LemmaViolation,
    NotAnAutomorphism,
    UnknownClique,
    UnknownVertex,
)
from .median import CubeComplex, hyperplanes_at, is_extremal

DEFAULT_CLIQUE_CAP = 100_000


@dataclass(frozen=True)
class GraphAutomorphism:
    """A vertex permutation certified against a graph's adjacency."""

    permutation: dict

    @classmethod
    def certified(cls, adjacency, permutation):
        verify_automorphism(adjacency, permutation)
        return cls(dict(permutation))

    def __call__(self, v):
        return self.permutation[v]


def verify_automorphism(adjacency, permutation):
    verts = set(adjacency)
    if set(permutation) != verts or set(permutation.values()) != verts:
        raise NotAnAutomorphism("not a bijection of the vertex set")
    for u in verts:
        if {permutation[w] for w in adjacency[u]} != adjacency[permutation[u]]:
            raise NotAnAutomorphism(f"adjacency broken at {u}")


def maximal_cliques(adjacency, cap=DEFAULT_CLIQUE_CAP):
    """All inclusion-maximal cliques, canonically sorted.

    Bron-Kerbosch with pivoting; isolated vertices yield singleton cliques.
    """
    out = []

    def expand(clique, cands, excluded):
        if not cands and not excluded:
            out.append(tuple(sorted(clique)))
            if len(out) > cap:
                raise CliqueLimitExceeded(f"more than {cap} maximal cliques")
            return
        pivot = max(cands | excluded, key=lambda v: len(adjacency[v] & cands))
        for v in sorted(cands - adjacency[pivot]):
            expand(clique | {v}, cands & adjacency[v], excluded & adjacency[v])
            cands = cands - {v}
            excluded = excluded | {v}

    adjacency = {v: set(nb) for v, nb in adjacency.items()}
    expand(set(), set(adjacency), set())
    return sorted(out)


@dataclass(frozen=True)
class CliqueAtlas:
    cliques: tuple  # maximal cliques of the contact graph, canonical order
    vertex_of: dict  # clique -> vertex id, only where uniquely attained
    clique_of: dict  # vertex id -> frozenset W_v
    extremal: dict  # vertex id -> bool


def clique_atlas(X: CubeComplex, F: ContactFamily = None, cap=DEFAULT_CLIQUE_CAP):
    """Match maximal cliques of the contact graph with vertex hyperplane sets.

    Verifies, with witnesses, that (a) every clique lies in some W_v, (b) every
    maximal clique equals some W_v, and (c) W_v is maximal and uniquely
    attained iff the link of v is not a cone.
    """
    if F is None:
        F = build_contact_family(X)
    cliques = tuple(maximal_cliques(F.contact, cap=cap))
    clique_of = {v: frozenset(hyperplanes_at(X, v)) for v in X.vertices}
    extremal = {v: is_extremal(X, v) for v in X.vertices}
    wv_sets = set(clique_of.values())

    for cl in cliques:
        # (a) is implied by (b) for maximal cliques; check (b) directly
        if frozenset(cl) not in wv_sets:
            raise LemmaViolation(f"maximal clique {cl} equals no W_v")
    # (a) for *all* cliques: every edge of the contact graph lies in a maximal
    # clique, so it is enough that subsets of maximal cliques are covered;
    # spot-check every pairwise-contact pair anyway.
    for u in F.contact:
        for w in F.contact[u]:
            if not any(u in s and w in s for s in wv_sets):
                raise LemmaViolation(f"contact pair ({u},{w}) lies in no W_v")

    attained_by = {}
    for v, s in clique_of.items():
        attained_by.setdefault(s, []).append(v)

    vertex_of = {}
    clique_set = {frozenset(cl) for cl in cliques}
    for v in X.vertices:
        s = clique_of[v]
        unique_max = s in clique_set and len(attained_by[s]) == 1
        if unique_max != (not extremal[v]):
            raise LemmaViolation(
                f"vertex {v}: maximal-and-unique={unique_max} but "
                f"extremal={extremal[v]}"
            )
        if unique_max:
            vertex_of[tuple(sorted(s))] = v
    return CliqueAtlas(cliques, vertex_of, clique_of, extremal)


def adjacency_criterion(X: CubeComplex, v, w):
    """True iff no third vertex x has W_v ∩ W_w contained in W_v ∩ W_x.

    Matches actual adjacency when hyperplanes of X have no extremal vertices;
    the direction non-adjacent => False holds unconditionally.
    """
    X.check_vertex(v)
    X.check_vertex(w)
    if v == w:
        raise ValueError("criterion needs two distinct vertices")
    wv = hyperplanes_at(X, v)
    ww = hyperplanes_at(X, w)
    inter = wv & ww
    for x in X.vertices:
        if x in (v, w):
            continue
        if inter <= (wv & hyperplanes_at(X, x)):
            return False
    return True


def reconstruct(contact_adjacency, cap=DEFAULT_CLIQUE_CAP):
    """Candidate 1-skeleton from a contact graph alone.

    Vertices are maximal cliques; cliques C1, C2 are joined unless some third
    maximal clique C3 satisfies C1 ∩ C2 ⊆ C1 ∩ C3.  Sound only under the
    no-extremal-vertices hypotheses; always emitted, so callers can compare on
    interior regions or document failures.
    """
    cliques = maximal_cliques(contact_adjacency, cap=cap)
    sets = [frozenset(cl) for cl in cliques]
    edges = set()
    for i, j in combinations(range(len(cliques)), 2):
        inter = sets[i] & sets[j]
        blocked = any(
            k not in (i, j) and inter <= (sets[i] & sets[k])
            for k in range(len(cliques))
        )
        if not blocked:
            edges.add(frozenset((cliques[i], cliques[j])))
    return {
        "vertices": cliques,
        "edges": edges,
        "adjacency": {
            cl: {next(iter(e - {cl})) for e in edges if cl in e}
            for cl in cliques
        },
    }


def induce_iota(X: CubeComplex, g):
    """Hyperplane permutation induced by an automorphism of the 1-skeleton.

    ``g`` may be a partial vertex map (a dict); the returned hyperplane map is
    defined on every hyperplane with at least one dual edge fully inside the
    domain, and consistency over all such edges is enforced.
    """
    g = g.permutation if isinstance(g, GraphAutomorphism) else dict(g)
    for u in g:
        X.check_vertex(u)
        X.check_vertex(g[u])
    # adjacency must be preserved wherever both endpoints are in the domain
    for e in X.edges:
        u, v = tuple(e)
        if u in g and v in g:
            if frozenset((g[u], g[v])) not in X.edges:
                raise NotAnAutomorphism(f"edge {sorted(e)} maps to a non-edge")

    phi = {}
    for h in X.hyperplanes:
        images = set()
        for e in h.dual_edges:
            u, v = tuple(e)
            if u in g and v in g:
                images.add(X.hyperplane_of_edge(g[u], g[v]).id)
        if len(images) > 1:
            raise HyperplaneNotPreserved(
                f"hyperplane {h.id} maps to several hyperplanes {sorted(images)}"
            )
        if images:
            phi[h.id] = images.pop()

    if len(g) == len(X.vertices):  # total map: must induce a contact automorphism
        F = build_contact_family(X)
        verify_automorphism(F.contact, phi)
    return phi


def induce_rho(X: CubeComplex, phi, atlas: CliqueAtlas = None):
    """Partial vertex map induced by a contact-graph automorphism.

    v maps to the vertex whose hyperplane set is phi(W_v); undefined where the
    clique fails to resolve to a unique vertex.  Returns (mapping, issues);
    issues marks vertices as 'ambiguous' (extremal resolution) or 'unknown'
    (image set attained by no vertex, possible for partial phi).
    """
    if atlas is None:
        atlas = clique_atlas(X)
    attained = {}
    for v, s in atlas.clique_of.items():
        attained.setdefault(s, []).append(v)

    mapping, issues = {}, {}
    for v in X.vertices:
        s = atlas.clique_of[v]
        if any(h not in phi for h in s):
            issues[v] = "unknown"
            continue
        image = frozenset(phi[h] for h in s)
        hits = attained.get(image, [])
        if not hits:
            issues[v] = "unknown"
        elif len(hits) > 1 or len(attained[s]) > 1:
            issues[v] = "ambiguous"
        else:
            mapping[v] = hits[0]
    return mapping, issues


def rho_vertex(X: CubeComplex, phi, v, atlas: CliqueAtlas = None):
    """Image of a single vertex under rho, raising on failure."""
    mapping, issues = induce_rho(X, phi, atlas)
    if v in mapping:
        return mapping[v]
    if issues.get(v) == "ambiguous":
        raise AmbiguousClique(v)
    raise UnknownClique(v)


def kernel_subgroup(X: CubeComplex, F: ContactFamily = None):
    """Generators (transpositions inside non-singleton I0 classes) of the
    subgroup of contact automorphisms fixing every maximal clique setwise.
    """
    if F is None:
        F = build_contact_family(X)
    isets = all_interaction_sets(X)
    classes = {}
    for w, s in isets.items():
        classes[frozenset(s.I0)] = None
    classes = sorted((sorted(c) for c in classes), key=tuple)

    hids = sorted(F.contact)
    cliques = maximal_cliques(F.contact)
    generators = []
    for cls in classes:
        for u, w in combinations(cls, 2):
            perm = {h: h for h in hids}
            perm[u], perm[w] = w, u
            verify_automorphism(F.contact, perm)
            for cl in cliques:
                if {perm[h] for h in cl} != set(cl):
                    raise LemmaViolation(
                        f"I0 transposition ({u} {w}) moves maximal clique {cl}"
                    )
            generators.append(perm)
    return generators
