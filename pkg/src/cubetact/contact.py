"""Contact, crossing and reduced crossing graphs over the hyperplanes of a complex.

Also computes the interaction sets I(w) (hyperplanes whose carrier contains
the carrier of w) and I0(w) (hyperplanes sharing w's carrier exactly).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import LemmaViolation, NotAnAutomorphism, UnknownHyperplane
from .median import CubeComplex, hyperplanes_at

REDUCED_MODES = ("self-exclusive", "strict")


def interaction(X: CubeComplex, u, w):
    """Classify a hyperplane pair: equal, transverse, contact_osculating, separated."""
    hu, hw = X.hyperplane(u), X.hyperplane(w)
    if hu.id == hw.id:
        return "equal"
    cache = getattr(X, "_interaction_cache", None)
    if cache is None:
        cache = X._interaction_cache = {}
    key = (min(hu.id, hw.id), max(hu.id, hw.id))
    if key in cache:
        return cache[key]
    quadrants = [
        hu.side_a & hw.side_a,
        hu.side_a & hw.side_b,
        hu.side_b & hw.side_a,
        hu.side_b & hw.side_b,
    ]
    transverse = all(quadrants)
    # cross-check: transversality is equivalent to sharing a square
    assert transverse == (key in _square_pairs(X)), (u, w)
    if transverse:
        result = "transverse"
    elif hu.carrier & hw.carrier:
        result = "contact_osculating"
    else:
        # separated: some third hyperplane has u and w on opposite sides
        separated = any(
            (hu.carrier <= h.side_a and hw.carrier <= h.side_b)
            or (hu.carrier <= h.side_b and hw.carrier <= h.side_a)
            for h in X.hyperplanes
            if h.id not in (hu.id, hw.id)
        )
        assert separated, (u, w)  # disjoint carriers always leave a separator
        result = "separated"
    cache[key] = result
    return result


def _square_pairs(X):
    """Unordered hyperplane id pairs sharing at least one square."""
    pairs = getattr(X, "_square_pair_cache", None)
    if pairs is None:
        pairs = set()
        for a, b, c, d in X.squares:
            h1 = X.hyperplane_of_edge(a, b).id
            h2 = X.hyperplane_of_edge(b, c).id
            pairs.add((min(h1, h2), max(h1, h2)))
        X._square_pair_cache = pairs
    return pairs


@dataclass(frozen=True)
class ContactFamily:
    """The three hyperplane graphs plus the quotient onto reduced classes."""

    complex: CubeComplex
    contact: dict  # hid -> set of hids
    crossing: dict  # hid -> set of hids, subgraph of contact
    classes: tuple  # tuple of sorted hid tuples
    class_of: dict  # hid -> class index
    reduced: dict  # class index -> set of class indices
    mode: str

    @property
    def hyperplane_ids(self):
        return sorted(self.contact)


def build_contact_family(X: CubeComplex, mode="self-exclusive") -> ContactFamily:
    if mode not in REDUCED_MODES:
        raise ValueError(f"mode must be one of {REDUCED_MODES}")
    hids = [h.id for h in X.hyperplanes]
    labels = {}
    for u, w in combinations(hids, 2):
        labels[(u, w)] = interaction(X, u, w)

    contact = {h: set() for h in hids}
    crossing = {h: set() for h in hids}
    for (u, w), kind in labels.items():
        if kind in ("transverse", "contact_osculating"):
            contact[u].add(w)
            contact[w].add(u)
        if kind == "transverse":
            crossing[u].add(w)
            crossing[w].add(u)

    def related(u, w):
        if mode == "strict":
            return crossing[u] == crossing[w]
        drop = {u, w}
        return crossing[u] - drop == crossing[w] - drop

    parent = {h: h for h in hids}

    def find(h):
        while parent[h] != h:
            parent[h] = parent[parent[h]]
            h = parent[h]
        return h

    for u, w in combinations(hids, 2):
        if related(u, w):
            ru, rw = find(u), find(w)
            if ru != rw:
                parent[ru] = rw

    groups = {}
    for h in hids:
        groups.setdefault(find(h), []).append(h)
    classes = tuple(sorted(tuple(sorted(g)) for g in groups.values()))
    class_of = {h: i for i, cls in enumerate(classes) for h in cls}
    # the same-neighborhood relation must hold pairwise within each class
    for cls in classes:
        for u, w in combinations(cls, 2):
            if not related(u, w):
                raise LemmaViolation(
                    f"reduced class {cls} is not pairwise neighborhood-equal "
                    f"(witness {u}, {w}, mode={mode})"
                )

    reduced = {i: set() for i in range(len(classes))}
    for (u, w), kind in labels.items():
        cu, cw = class_of[u], class_of[w]
        if kind == "transverse" and cu != cw:
            reduced[cu].add(cw)
            reduced[cw].add(cu)
    # an edge between classes means every cross pair is transverse
    for cu, nbrs in reduced.items():
        for cw in nbrs:
            for u in classes[cu]:
                for w in classes[cw]:
                    key = (u, w) if (u, w) in labels else (w, u)
                    if labels[key] != "transverse":
                        raise LemmaViolation(
                            f"classes {classes[cu]} and {classes[cw]} mix "
                            f"transverse and non-transverse pairs"
                        )

    return ContactFamily(X, contact, crossing, classes, class_of, reduced, mode)


@dataclass(frozen=True)
class InteractionSets:
    base: int
    I: frozenset
    I0: frozenset


def interaction_sets(X: CubeComplex, w) -> InteractionSets:
    """I(w) by the definitional intersection of the W_v containing w.

    Asserts the characterization: u is in I(w) iff u equals w, or u is
    transverse to w and to every other hyperplane transverse to w; and u is
    in I0(w) iff u and w have the same carrier.
    """
    hw = X.hyperplane(w)
    sets = [hyperplanes_at(X, v) for v in sorted(hw.carrier, key=str)]
    I = frozenset(set.intersection(*sets))

    transverse_to_w = {
        u.id
        for u in X.hyperplanes
        if u.id != hw.id and interaction(X, u.id, hw.id) == "transverse"
    }
    characterized = {hw.id}
    for u in transverse_to_w:
        if all(
            interaction(X, u, t) == "transverse"
            for t in transverse_to_w
            if t != u
        ):
            characterized.add(u)
    if I != frozenset(characterized):
        raise LemmaViolation(
            f"I({w}) definitional {sorted(I)} != characterization "
            f"{sorted(characterized)}"
        )

    I0 = frozenset(
        u for u in I if hw.id in _definitional_I(X, u)
    )
    for u in I0:
        if X.hyperplane(u).carrier != hw.carrier:
            raise LemmaViolation(f"{u} in I0({w}) but carriers differ")
    for u in I - I0:
        if X.hyperplane(u).carrier == hw.carrier:
            raise LemmaViolation(f"{u} not in I0({w}) but carriers agree")
    return InteractionSets(hw.id, I, I0)


def _definitional_I(X, w):
    hw = X.hyperplane(w)
    sets = [hyperplanes_at(X, v) for v in hw.carrier]
    return set.intersection(*sets)


def all_interaction_sets(X: CubeComplex):
    return {h.id: interaction_sets(X, h.id) for h in X.hyperplanes}


def check_crossing_automorphism(F: ContactFamily, phi):
    hids = set(F.crossing)
    if set(phi) != hids or set(phi.values()) != hids:
        raise NotAnAutomorphism("phi is not a bijection of the hyperplane ids")
    for u in hids:
        if {phi[w] for w in F.crossing[u]} != F.crossing[phi[u]]:
            raise NotAnAutomorphism(f"crossing adjacency broken at {u}")


def pushforward_reduced(F: ContactFamily, phi):
    """Map an automorphism of the crossing graph down to the reduced graph.

    Well-defined because crossing automorphisms preserve the equal-neighborhood
    relation; class sizes must be permuted consistently.
    """
    check_crossing_automorphism(F, phi)
    induced = {}
    for cid, cls in enumerate(F.classes):
        images = {F.class_of[phi[h]] for h in cls}
        if len(images) != 1:
            raise NotAnAutomorphism(
                f"class {cls} is scattered across classes {sorted(images)}"
            )
        target = images.pop()
        if len(F.classes[target]) != len(cls):
            raise NotAnAutomorphism(
                f"class {cls} maps to a class of different size"
            )
        induced[cid] = target
    if set(induced.values()) != set(induced):
        raise NotAnAutomorphism("induced class map is not a bijection")
    return induced


# ---------------------------------------------------------------------------
# Serialization

def _graph_json(adjacency):
    return {
        "vertices": sorted(adjacency),
        "edges": sorted(
            sorted((u, w)) for u in adjacency for w in adjacency[u] if u < w
        ),
    }


def family_to_json(F: ContactFamily) -> dict:
    return {
        "mode": F.mode,
        "contact": _graph_json(F.contact),
        "crossing": _graph_json(F.crossing),
        "reduced": {
            "classes": [list(cls) for cls in F.classes],
            "edges": sorted(
                sorted((u, w)) for u in F.reduced for w in F.reduced[u] if u < w
            ),
        },
    }


def graph_to_dot(adjacency, name="graph"):
    lines = [f"graph {name} {{"]
    for v in sorted(adjacency):
        lines.append(f'  "{v}";')
    for u in sorted(adjacency):
        for w in sorted(adjacency[u]):
            if u < w:
                lines.append(f'  "{u}" -- "{w}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
