"""Planar tree combinatorics: bi-angled trees, augmented trees, rooted binary trees.

A bi-angled tree is a planar tree with vertex degrees at most 3 whose
consecutive edges meet at angles 2pi/3 or 4pi/3.  Angles are never stored
as floats.  Instead every edge carries a *slot* index in {0, 1, 2}: embed
the tree in the hexagonal lattice, where the three possible edge
directions at a vertex are 2pi*s/3 (one bipartition class) or
2pi*s/3 + pi (the other class).  With this convention an edge occupies
the same slot index at both endpoints, the counterclockwise order of the
edges at a vertex is the slot order, and the ccw angle from edge e to
edge e' at a common vertex is 2pi/3 times ((slot(e') - slot(e)) mod 3).
A global shift of all slots mod 3 is a rotation of the plane, so the
abstract tree is the slot data modulo a global shift; canonical codes
quotient the shift out.

Isomorphism is angle-preserving (Definition-level: tree isomorphism
compatible with the angle function).  Mirror images are *not* identified:
reflections negate angles and are generally not realizable by a slot
shift, which is what makes chiral pairs distinct.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence


class TreeSizeError(ValueError):
    """Requested size exceeds the configured enumeration cap."""


class StructureError(ValueError):
    """Tree data violates a structural invariant."""


DEFAULT_TREE_CAP = 12

# ---------------------------------------------------------------------------
# Bi-angled trees
# ---------------------------------------------------------------------------


class BiAngledTree:
    """Planar tree with degree <= 3 and slot-encoded angle function.

    ``slot_nbr[v]`` is a 3-tuple giving the neighbor of ``v`` in each slot
    (or None).  Neighbors in ccw order are the non-None entries in slot
    order.
    """

    __slots__ = ("n", "slot_nbr", "_code")

    def __init__(self, n: int, slot_nbr: Sequence[Sequence[Optional[int]]]):
        if n < 1:
            raise StructureError("tree needs at least one vertex")
        if len(slot_nbr) != n:
            raise StructureError("slot table size mismatch")
        tab = tuple(tuple(row) for row in slot_nbr)
        edges = 0
        for v, row in enumerate(tab):
            if len(row) != 3:
                raise StructureError("each vertex has exactly 3 slots")
            for s, w in enumerate(row):
                if w is None:
                    continue
                if not (0 <= w < n) or w == v:
                    raise StructureError(f"bad neighbor {w} at vertex {v}")
                if tab[w][s] != v:
                    raise StructureError(
                        f"edge ({v},{w}) slot {s} not mirrored at both ends"
                    )
                edges += 1
        if edges != 2 * (n - 1):
            raise StructureError("vertex/edge count is not a tree")
        # connectivity
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in tab[v]:
                if w is not None and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            raise StructureError("tree is not connected")
        self.n = n
        self.slot_nbr = tab
        self._code = None

    # -- basic structure ----------------------------------------------------

    @staticmethod
    def single_vertex() -> "BiAngledTree":
        return BiAngledTree(1, [(None, None, None)])

    @staticmethod
    def from_edge_slots(n: int, edges: Sequence[tuple]) -> "BiAngledTree":
        """Build from (u, v, slot) triples."""
        tab = [[None, None, None] for _ in range(n)]
        for u, v, s in edges:
            if tab[u][s] is not None or tab[v][s] is not None:
                raise StructureError(f"slot {s} already used on edge ({u},{v})")
            tab[u][s] = v
            tab[v][s] = u
        return BiAngledTree(n, tab)

    def edges(self) -> list:
        out = []
        for v, row in enumerate(self.slot_nbr):
            for s, w in enumerate(row):
                if w is not None and v < w:
                    out.append((v, w, s))
        return out

    def degree(self, v: int) -> int:
        return sum(1 for w in self.slot_nbr[v] if w is not None)

    def neighbors_ccw(self, v: int) -> list:
        return [w for w in self.slot_nbr[v] if w is not None]

    def edge_slot(self, u: int, v: int) -> int:
        for s, w in enumerate(self.slot_nbr[u]):
            if w == v:
                return s
        raise StructureError(f"no edge ({u},{v})")

    def angle_thirds(self, v: int, u1: int, u2: int) -> int:
        """CCW angle at v from edge (v,u1) to edge (v,u2), in thirds of a turn."""
        return (self.edge_slot(v, u2) - self.edge_slot(v, u1)) % 3

    def attach_leaf(self, v: int, slot: int) -> "BiAngledTree":
        if self.slot_nbr[v][slot] is not None:
            raise StructureError("slot occupied")
        tab = [list(row) for row in self.slot_nbr]
        w = self.n
        tab[v][slot] = w
        row = [None, None, None]
        row[slot] = v
        tab.append(row)
        return BiAngledTree(self.n + 1, tab)

    def free_slots(self, v: int) -> list:
        return [s for s, w in enumerate(self.slot_nbr[v]) if w is None]

    # -- canonical form -----------------------------------------------------

    def _down_code(self, v: int, parent_slot: int):
        """Code of the subtree at v entered along the edge in parent_slot."""
        entries = []
        for r in (1, 2):
            s = (parent_slot + r) % 3
            w = self.slot_nbr[v][s]
            if w is not None:
                entries.append((r, self._down_code(w, s)))
        return tuple(entries)

    def _centers(self) -> list:
        if self.n == 1:
            return [0]
        deg = [self.degree(v) for v in range(self.n)]
        alive = set(range(self.n))
        leaves = [v for v in alive if deg[v] <= 1]
        while len(alive) > 2:
            nxt = []
            for v in leaves:
                alive.discard(v)
                for w in self.slot_nbr[v]:
                    if w is not None and w in alive:
                        deg[w] -= 1
                        if deg[w] == 1:
                            nxt.append(w)
            leaves = nxt
        return sorted(alive)

    def _root_candidates(self):
        """Yield (code, plan) for each admissible rooting; plan rebuilds labels."""
        centers = self._centers()
        if len(centers) == 1:
            c = centers[0]
            if self.degree(c) == 0:
                yield ("V", ()), ("v", c, 0)
                return
            for s0 in range(3):
                if self.slot_nbr[c][s0] is None:
                    continue
                entries = [(0, self._down_code(self.slot_nbr[c][s0], s0))]
                for r in (1, 2):
                    s = (s0 + r) % 3
                    w = self.slot_nbr[c][s]
                    if w is not None:
                        entries.append((r, self._down_code(w, s)))
                yield ("V", tuple(entries)), ("v", c, s0)
        else:
            u, v = centers
            s = self.edge_slot(u, v)
            cu = self._down_code(u, s)
            cv = self._down_code(v, s)
            yield ("E", (cu, cv)), ("e", u, v, s)
            yield ("E", (cv, cu)), ("e", v, u, s)

    def canonical_code(self):
        if self._code is None:
            self._code = min(code for code, _ in self._root_candidates())
        return self._code

    def canonical(self) -> "BiAngledTree":
        """Relabeled representative: ids in code order, gauge-fixed slots."""
        best = min(self._root_candidates())
        _, plan = best
        tab = [[None, None, None] for _ in range(self.n)]
        label = {}

        def assign(old_v, new_v):
            label[old_v] = new_v

        counter = [0]

        def new_id(old_v):
            assign(old_v, counter[0])
            counter[0] += 1
            return label[old_v]

        def build(old_v, old_parent_slot, new_v, new_parent_slot):
            for r in (1, 2):
                so = (old_parent_slot + r) % 3
                w = self.slot_nbr[old_v][so]
                if w is None:
                    continue
                sn = (new_parent_slot + r) % 3
                nw = new_id(w)
                tab[new_v][sn] = nw
                tab[nw][sn] = new_v
                build(w, so, nw, sn)

        if plan[0] == "v":
            _, c, s0 = plan
            nc = new_id(c)
            if self.degree(c) > 0:
                for r in (0, 1, 2):
                    so = (s0 + r) % 3
                    w = self.slot_nbr[c][so]
                    if w is None:
                        continue
                    nw = new_id(w)
                    tab[nc][r] = nw
                    tab[nw][r] = nc
                    build(w, so, nw, r)
        else:
            _, u, v, s = plan
            nu = new_id(u)
            nv = new_id(v)
            tab[nu][0] = nv
            tab[nv][0] = nu
            build(u, s, nu, 0)
            build(v, s, nv, 0)
        return BiAngledTree(self.n, tab)

    # -- serialization (spec JSON schema) ------------------------------------

    def to_json_dict(self) -> dict:
        adjacency = {str(v): self.neighbors_ccw(v) for v in range(self.n)}
        angles = []
        for v in range(self.n):
            nbrs = self.neighbors_ccw(v)
            if len(nbrs) < 2:
                continue
            for i in range(len(nbrs)):
                u1 = nbrs[i]
                u2 = nbrs[(i + 1) % len(nbrs)]
                if len(nbrs) == 2 and i == 1:
                    break  # (e2,e1) is implied by skew-symmetry
                angles.append(
                    {
                        "v": v,
                        "e1": [v, u1],
                        "e2": [v, u2],
                        "thirds": self.angle_thirds(v, u1, u2),
                    }
                )
        return {
            "kind": "biangled",
            "vertices": list(range(self.n)),
            "adjacency": adjacency,
            "angles": angles,
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "BiAngledTree":
        if doc.get("kind") != "biangled":
            raise StructureError("not a biangled tree document")
        verts = doc["vertices"]
        n = len(verts)
        idx = {v: i for i, v in enumerate(verts)}
        adjacency = {idx[int(k)]: [idx[w] for w in ws] for k, ws in doc["adjacency"].items()}
        if n == 1:
            return BiAngledTree.single_vertex()
        thirds = {}
        for a in doc.get("angles", []):
            v = idx[a["v"]]
            u1 = idx[a["e1"][1]]
            u2 = idx[a["e2"][1]]
            thirds[(v, u1, u2)] = a["thirds"] % 3

        def gap(v, u1, u2):
            if u1 == u2:
                return 0
            if (v, u1, u2) in thirds:
                return thirds[(v, u1, u2)]
            if (v, u2, u1) in thirds:
                return (-thirds[(v, u2, u1)]) % 3
            if len(adjacency[v]) == 3:
                # ccw-consecutive edges of a full vertex are 2pi/3 apart
                i1 = adjacency[v].index(u1)
                i2 = adjacency[v].index(u2)
                return (i2 - i1) % 3
            raise StructureError(f"missing angle at vertex {v}")

        # propagate slots from an arbitrary gauge
        tab = [[None, None, None] for _ in range(n)]
        root = 0
        first = adjacency[root][0]
        slot_at = {(root, first): 0}
        stack = [(root, None)]
        seen = {root}
        while stack:
            v, parent = stack.pop()
            nbrs = adjacency[v]
            ref = nbrs[0] if parent is None else parent
            s_ref = slot_at[(v, ref)]
            for u in nbrs:
                s = (s_ref + gap(v, ref, u)) % 3
                slot_at[(v, u)] = s
                if tab[v][s] is not None and tab[v][s] != u:
                    raise StructureError("inconsistent angle data")
                tab[v][s] = u
                slot_at[(u, v)] = s  # shared-slot convention
                if u not in seen:
                    seen.add(u)
                    tab[u][s] = v
                    stack.append((u, v))
        return BiAngledTree(n, tab)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def __repr__(self):
        return f"BiAngledTree(n={self.n}, edges={self.edges()})"

    def __eq__(self, other):
        return (
            isinstance(other, BiAngledTree)
            and self.n == other.n
            and self.canonical_code() == other.canonical_code()
        )

    def __hash__(self):
        return hash(self.canonical_code())


def biangled_isomorphic(t1: BiAngledTree, t2: BiAngledTree) -> bool:
    """Angle-preserving tree isomorphism (reflections not identified)."""
    return t1.n == t2.n and t1.canonical_code() == t2.canonical_code()


def enumerate_biangled(n_vertices: int, cap: int = DEFAULT_TREE_CAP) -> list:
    """All bi-angled trees with n_vertices vertices, canonical and pairwise
    non-isomorphic, by leaf growth with canonical-code deduplication."""
    if n_vertices < 1:
        raise TreeSizeError("need at least one vertex")
    if n_vertices > cap:
        raise TreeSizeError(f"{n_vertices} exceeds enumeration cap {cap}")
    level = {BiAngledTree.single_vertex().canonical_code(): BiAngledTree.single_vertex()}
    for _ in range(n_vertices - 1):
        nxt = {}
        for t in level.values():
            for v in range(t.n):
                for s in t.free_slots(v):
                    t2 = t.attach_leaf(v, s)
                    code = t2.canonical_code()
                    if code not in nxt:
                        nxt[code] = t2.canonical()
        level = nxt
    return sorted(level.values(), key=lambda t: t.canonical_code())


# ---------------------------------------------------------------------------
# Augmented trees and pinching sets
# ---------------------------------------------------------------------------

RED = "red"
BLUE = "blue"


@dataclass
class AugmentedTree:
    """Red/blue augmentation of a bi-angled tree (cusps and double points).

    Red vertices are the source-tree vertices (same ids).  Blue leaves fill
    the free slots of every red vertex; an additional blue vertex subdivides
    every original edge.  ``ccw[v]`` lists neighbors counterclockwise.
    """

    source: BiAngledTree
    colors: tuple
    ccw: tuple

    def degree(self, v: int) -> int:
        return len(self.ccw[v])

    @property
    def n(self) -> int:
        return len(self.colors)

    def blue_leaves(self) -> list:
        return [v for v in range(self.n) if self.colors[v] == BLUE and self.degree(v) == 1]

    def blue_subdividers(self) -> list:
        return [v for v in range(self.n) if self.colors[v] == BLUE and self.degree(v) == 2]

    def check_invariants(self) -> None:
        n = self.source.n
        d = n + 1
        reds = [v for v in range(self.n) if self.colors[v] == RED]
        if len(reds) != n or any(self.degree(v) != 3 for v in reds):
            raise StructureError("red vertices must be the n source vertices, degree 3")
        if len(self.blue_leaves()) != d + 1:
            raise StructureError("expected d+1 degree-1 blue vertices")
        if len(self.blue_subdividers()) != d - 2:
            raise StructureError("expected d-2 degree-2 blue vertices")
        for v in range(self.n):
            for w in self.ccw[v]:
                if self.colors[v] == self.colors[w]:
                    raise StructureError("edges must join red and blue")

    def recover_source(self) -> BiAngledTree:
        """Delete blue leaves, contract subdivision blues back into edges."""
        tab = [[None, None, None] for _ in range(self.source.n)]
        for m in self.blue_subdividers():
            u, v = self.ccw[m]
            s = _slot_of(self, u, m)
            s2 = _slot_of(self, v, m)
            if s != s2:
                raise StructureError("subdivider slots disagree")
            tab[u][s] = v
            tab[v][s] = u
        return BiAngledTree(self.source.n, tab)

    def boundary_walk(self, start: Optional[tuple] = None) -> list:
        """Closed ccw contour walk; returns the cyclic list of visited vertices.

        Rule: arriving at v along (u -> v), leave toward the ccw successor
        of u in v's rotation.  Covers each directed edge once (2E steps).
        """
        if start is None:
            v0 = next(v for v in range(self.n) if self.degree(v) >= 1)
            start = (v0, self.ccw[v0][0])
        visits = []
        u, v = start
        while True:
            visits.append(v)
            nbrs = self.ccw[v]
            w = nbrs[(nbrs.index(u) + 1) % len(nbrs)]
            u, v = v, w
            if (u, v) == start:
                break
        return visits


def _slot_of(aug: AugmentedTree, red: int, blue: int) -> int:
    return aug.ccw[red].index(blue)


def augment(t: BiAngledTree) -> AugmentedTree:
    """Augmented tree: blue leaf per free slot, blue subdivider per edge."""
    colors = [RED] * t.n
    ccw = []
    occupant = [[None, None, None] for _ in range(t.n)]
    extra_ccw = {}
    next_id = t.n
    mid = {}
    for u, v, s in t.edges():
        mid[(u, v)] = next_id
        colors.append(BLUE)
        extra_ccw[next_id] = (u, v)
        next_id += 1
    for v in range(t.n):
        for s in range(3):
            w = t.slot_nbr[v][s]
            if w is not None:
                occupant[v][s] = mid[(min(v, w), max(v, w))]
            else:
                colors.append(BLUE)
                extra_ccw[next_id] = (v,)
                occupant[v][s] = next_id
                next_id += 1
    for v in range(t.n):
        ccw.append(tuple(occupant[v]))
    for b in range(t.n, next_id):
        ccw.append(tuple(extra_ccw[b]))
    aug = AugmentedTree(source=t, colors=tuple(colors), ccw=tuple(ccw))
    aug.check_invariants()
    return aug


@dataclass(frozen=True)
class PinchSet:
    """Arc-index pairs to drive into tangential contact (Suffridge target).

    Arc indices live in 1..d+1; pairs never join adjacent arcs and the pair
    family is non-crossing on the circle.
    """

    d: int
    pairs: frozenset

    def __post_init__(self):
        m = self.d + 1
        if len(self.pairs) != self.d - 2:
            raise StructureError(f"expected {self.d - 2} pairs, got {len(self.pairs)}")
        for p in self.pairs:
            j, k = sorted(p)
            if not (1 <= j <= m and 1 <= k <= m) or j == k:
                raise StructureError(f"bad arc pair {sorted(p)}")
            if (k - j) % m in (1, m - 1):
                raise StructureError(f"adjacent arc pair {sorted(p)}")
        if _has_crossing(self.pairs, m):
            raise StructureError("pinch pairs cross")

    def sorted_pairs(self) -> list:
        return sorted(tuple(sorted(p)) for p in self.pairs)


def _has_crossing(pairs, m: int) -> bool:
    ps = [tuple(sorted(p)) for p in pairs]
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            a, b = ps[i]
            c, e = ps[j]
            if len({a, b, c, e}) < 4:
                continue
            in1 = a < c < b
            in2 = a < e < b
            if in1 != in2:
                return True
    return False


def _walk_pairs(aug: AugmentedTree):
    """Pairs of arc indices (1-based) in walk labeling, plus arc count."""
    walk = aug.boundary_walk()
    leaves = set(aug.blue_leaves())
    # rotate the walk to start at an eta (degree-1 blue) visit
    first = next(i for i, v in enumerate(walk) if v in leaves)
    walk = walk[first:] + walk[:first]
    m = len(leaves)
    seg = []
    k = 0
    for v in walk:
        if v in leaves:
            k += 1
        seg.append(k)  # the eta itself opens segment k
    subdiv = set(aug.blue_subdividers())
    hits = {}
    for i, v in enumerate(walk):
        if v in subdiv:
            hits.setdefault(v, []).append(seg[i])
    pairs = []
    for v, segs in hits.items():
        if len(segs) != 2:
            raise StructureError("subdivider not visited exactly twice")
        pairs.append((v, tuple(sorted(segs))))
    return pairs, m


def _rotate_pair(p, r: int, m: int):
    return tuple(sorted(((x - 1 + r) % m) + 1 for x in p))


def pinching_set(t: BiAngledTree) -> PinchSet:
    """Arc pairs of the Suffridge pinching target for tree t.

    The Riemann map of the augmented-tree complement is realized as the
    combinatorial ccw boundary walk; each degree-2 blue vertex is visited
    by exactly two of the d+1 boundary segments, giving one pair.  The
    free cyclic labeling is fixed by taking the lexicographically least
    rotation of the sorted pair list.
    """
    aug = augment(t)
    tagged, m = _walk_pairs(aug)
    raw = [p for _, p in tagged]
    best = min(
        sorted(_rotate_pair(p, r, m) for p in raw) for r in range(m)
    ) if raw else []
    return PinchSet(d=t.n + 1, pairs=frozenset(frozenset(p) for p in best))


# ---------------------------------------------------------------------------
# Rooted binary trees
# ---------------------------------------------------------------------------


class RootedBinaryTree:
    """Rooted tree where every vertex has an optional left and right child."""

    __slots__ = ("root", "nodes")

    def __init__(self, root: Optional[int], nodes: dict):
        self.root = root
        self.nodes = {int(k): (v[0], v[1]) for k, v in nodes.items()}
        if root is not None:
            seen = set()
            stack = [root]
            while stack:
                v = stack.pop()
                if v in seen:
                    raise StructureError("cycle in rooted binary tree")
                seen.add(v)
                left, right = self.nodes[v]
                for c in (left, right):
                    if c is not None:
                        stack.append(c)
            if seen != set(self.nodes):
                raise StructureError("unreachable nodes")

    @staticmethod
    def empty() -> "RootedBinaryTree":
        return RootedBinaryTree(None, {})

    @property
    def n(self) -> int:
        return len(self.nodes)

    def children(self, v: int):
        return self.nodes[v]

    def code(self):
        def rec(v):
            if v is None:
                return None
            left, right = self.nodes[v]
            return (rec(left), rec(right))

        return rec(self.root)

    @staticmethod
    def from_code(code) -> "RootedBinaryTree":
        nodes = {}
        counter = [0]

        def rec(c):
            if c is None:
                return None
            v = counter[0]
            counter[0] += 1
            nodes[v] = (None, None)
            left = rec(c[0])
            right = rec(c[1])
            nodes[v] = (left, right)
            return v

        root = rec(code)
        return RootedBinaryTree(root, nodes)

    def to_json_dict(self) -> dict:
        return {
            "kind": "rooted_binary",
            "root": self.root,
            "nodes": {
                str(v): {"left": left, "right": right}
                for v, (left, right) in sorted(self.nodes.items())
            },
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "RootedBinaryTree":
        if doc.get("kind") != "rooted_binary":
            raise StructureError("not a rooted binary tree document")
        nodes = {
            int(k): (v.get("left"), v.get("right")) for k, v in doc["nodes"].items()
        }
        return RootedBinaryTree(doc["root"], nodes)

    def __eq__(self, other):
        return isinstance(other, RootedBinaryTree) and self.code() == other.code()

    def __hash__(self):
        return hash(self.code())

    def __repr__(self):
        return f"RootedBinaryTree(code={self.code()!r})"


def rooted_binary_isomorphic(t1: RootedBinaryTree, t2: RootedBinaryTree) -> bool:
    return t1.code() == t2.code()


def _binary_codes(n: int) -> Iterator:
    if n == 0:
        yield None
        return
    for i in range(n):
        for left in _binary_codes(i):
            for right in _binary_codes(n - 1 - i):
                yield (left, right)


def enumerate_rooted_binary(n_vertices: int, cap: int = DEFAULT_TREE_CAP) -> list:
    if n_vertices < 0:
        raise TreeSizeError("negative size")
    if n_vertices > cap:
        raise TreeSizeError(f"{n_vertices} exceeds enumeration cap {cap}")
    return [RootedBinaryTree.from_code(c) for c in _binary_codes(n_vertices)]


def catalan_count(d: int) -> int:
    """Number of extremal members of the bounded class mod rotations: C_{d-2}."""
    if d < 2:
        raise ValueError("d must be at least 2")
    if d > 30:
        raise TreeSizeError("d > 30 not supported in exact arithmetic guard")
    n = d - 2
    return math.comb(2 * n, n) // (n + 1)


# ---------------------------------------------------------------------------
# Bounded-class pinch combinatorics
# ---------------------------------------------------------------------------


def rooted_pinch_pairs(rt: RootedBinaryTree, d: int):
    """Arc pairs (over the d-1 arcs between bounded-class cusps) realizing rt.

    Returns (pairs, root_pair) in the walk labeling.  The analog of the
    augmented tree has one extra degree-1 red vertex standing for the
    unbounded tile; the pair of the root subdivider joins an arc to itself.
    Pairs here may share or repeat indices, unlike the unbounded PinchSet.
    """
    if rt.n != d - 2:
        raise StructureError(f"tree has {rt.n} vertices, expected {d - 2}")
    if rt.n == 0:
        return [], None
    # vertex ids: 0 = unbounded-tile proxy, tiles and blues appended
    colors = {0: RED}
    ccw = {}
    next_id = [1]

    def fresh(color):
        v = next_id[0]
        next_id[0] += 1
        colors[v] = color
        return v

    subdiv_tag = {}

    def build(tile, entry_blue):
        v = fresh(RED)
        order = [entry_blue]
        for child in rt.children(tile):
            if child is None:
                b = fresh(BLUE)
                ccw[b] = (v,)
                order.append(b)
            else:
                m = fresh(BLUE)
                subdiv_tag[m] = ("edge", tile, child)
                w = build(child, m)
                ccw[m] = (v, w)
                order.append(m)
        ccw[v] = tuple(order)
        return v

    m0 = fresh(BLUE)
    subdiv_tag[m0] = ("root",)
    root_tile = build(rt.root, m0)
    ccw[m0] = (0, root_tile)
    ccw[0] = (m0,)

    n = next_id[0]
    aug = AugmentedTree(
        source=BiAngledTree.single_vertex(),  # placeholder back-reference
        colors=tuple(colors[v] for v in range(n)),
        ccw=tuple(ccw[v] for v in range(n)),
    )
    tagged, m = _walk_pairs(aug)
    if m != d - 1:
        raise StructureError("unexpected arc count in bounded augmentation")
    pairs = []
    root_pair = None
    for v, p in tagged:
        if subdiv_tag[v][0] == "root":
            root_pair = p
        pairs.append(p)
    if root_pair is None or root_pair[0] != root_pair[1]:
        raise StructureError("root pinch must join an arc to itself")
    return pairs, root_pair
