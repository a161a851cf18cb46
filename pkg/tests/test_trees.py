"""Tests for bi-angled / augmented / rooted-binary tree combinatorics."""

import itertools
import math

import pytest

from droplets.trees import (
    AugmentedTree,
    BiAngledTree,
    PinchSet,
    RootedBinaryTree,
    StructureError,
    TreeSizeError,
    augment,
    biangled_isomorphic,
    catalan_count,
    enumerate_biangled,
    enumerate_rooted_binary,
    pinching_set,
    rooted_binary_isomorphic,
    rooted_pinch_pairs,
)


def path_tree(gaps):
    """Path v0-v1-...-vk with prescribed slot gaps at the interior vertices.

    gaps[i] is slot(e_{i+1}) - slot(e_i) mod 3 at vertex i+1.
    """
    edges = []
    slot = 0
    for i, g in enumerate(gaps + [None]):
        edges.append((i, i + 1, slot))
        if g is None:
            break
        slot = (slot + g) % 3
    return BiAngledTree.from_edge_slots(len(gaps) + 2, edges)


def star_tree():
    return BiAngledTree.from_edge_slots(4, [(0, 1, 0), (0, 2, 1), (0, 3, 2)])


# ---------------------------------------------------------------------------
# brute-force oracle: enumerate labeled max-degree-3 trees with slot data and
# quotient by explicit isomorphism search
# ---------------------------------------------------------------------------


def _labeled_trees(n):
    """All labeled trees on vertices 0..n-1 as frozensets of edges."""
    if n == 1:
        yield frozenset()
        return
    verts = list(range(n))
    for edges in itertools.combinations(itertools.combinations(verts, 2), n - 1):
        deg = {v: 0 for v in verts}
        parent = {v: v for v in verts}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
            ru, rv = find(u), find(v)
            if ru == rv:
                ok = False
                break
            parent[ru] = rv
        if ok and all(d <= 3 for d in deg.values()):
            yield frozenset(edges)


def _slot_assignments(edges):
    """All consistent slot assignments for a labeled tree edge set."""
    edges = sorted(edges)
    for slots in itertools.product(range(3), repeat=len(edges)):
        used = {}
        ok = True
        for (u, v), s in zip(edges, slots):
            if (u, s) in used or (v, s) in used:
                ok = False
                break
            used[(u, s)] = v
            used[(v, s)] = u
        if ok:
            yield [(u, v, s) for (u, v), s in zip(edges, slots)]


def _brute_isomorphic(t1, t2):
    """Isomorphism by exhaustive bijection + global slot shift search."""
    if t1.n != t2.n:
        return False
    e1 = {frozenset((u, v)): s for u, v, s in t1.edges()}
    for perm in itertools.permutations(range(t2.n)):
        for shift in range(3):
            ok = True
            for (u, v, s) in t1.edges():
                key = frozenset((perm[u], perm[v]))
                s2 = None
                for a, b, sl in t2.edges():
                    if frozenset((a, b)) == key:
                        s2 = sl
                        break
                if s2 is None or (s + shift) % 3 != s2:
                    ok = False
                    break
            if ok:
                return True
    return False


def _brute_classes(n):
    reps = []
    for edge_set in _labeled_trees(n):
        for assignment in _slot_assignments(edge_set):
            t = BiAngledTree.from_edge_slots(n, assignment)
            if not any(_brute_isomorphic(t, r) for r in reps):
                reps.append(t)
    return reps


@pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (3, 1), (4, 4)])
def test_enumerate_counts_match_table(n, count):
    assert len(enumerate_biangled(n)) == count


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_enumerate_matches_bruteforce(n):
    fast = enumerate_biangled(n)
    brute = _brute_classes(n)
    assert len(fast) == len(brute)
    # canonical codes must induce the same partition the brute oracle finds
    for t in brute:
        assert sum(1 for u in fast if biangled_isomorphic(t, u)) == 1


def test_enumerate_cap():
    with pytest.raises(TreeSizeError):
        enumerate_biangled(13)


def test_isomorphic_identity_and_degree_mismatch():
    t = path_tree([1])
    assert biangled_isomorphic(t, t)
    assert not biangled_isomorphic(path_tree([1, 1]), star_tree())


def test_chiral_zigzags_not_isomorphic():
    # slot gap 1 is a right turn, gap 2 a left turn: [1,2] and [2,1] are the
    # Z/S zigzag mirror pair; reflections are not quotiented, so they must be
    # distinct (the two complex-conjugate d=5 rows of the classification)
    z = path_tree([1, 2])
    s = path_tree([2, 1])
    assert not biangled_isomorphic(z, s)


def test_hexagon_arc_selfmirror_isomorphic():
    # two equal turns trace a hexagon arc ("C" shape), which is isomorphic
    # to its mirror image via path reversal
    c1 = path_tree([1, 1])
    c2 = path_tree([2, 2])
    assert biangled_isomorphic(c1, c2)


def test_codes_are_total_invariants():
    trees = enumerate_biangled(4) + enumerate_biangled(5)
    for a in trees:
        for b in trees:
            assert biangled_isomorphic(a, b) == (a.canonical_code() == b.canonical_code())


def test_canonical_idempotent():
    for t in enumerate_biangled(4):
        c = t.canonical()
        assert c.canonical_code() == t.canonical_code()
        assert c.canonical().edges() == c.edges()


def test_json_roundtrip():
    for n in (1, 2, 3, 4):
        for t in enumerate_biangled(n):
            back = BiAngledTree.from_json_dict(t.to_json_dict())
            assert biangled_isomorphic(t, back)


# ---------------------------------------------------------------------------
# augmentation
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "n,leaf_blue,subdiv_blue",
    [(1, 3, 0), (2, 4, 1), (4, 6, 3)],
)
def test_augment_counts(n, leaf_blue, subdiv_blue):
    # d = n+1: expect d+1 degree-1 and d-2 degree-2 blue vertices
    trees = enumerate_biangled(n)
    t = trees[0] if n != 4 else star_tree().canonical()
    aug = augment(t)
    aug.check_invariants()
    assert len(aug.blue_leaves()) == leaf_blue
    assert len(aug.blue_subdividers()) == subdiv_blue


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_augment_recover_identity(n):
    for t in enumerate_biangled(n):
        rec = augment(t).recover_source()
        assert rec.edges() == t.edges()


# ---------------------------------------------------------------------------
# boundary walk: geometric oracle
# ---------------------------------------------------------------------------


def _embed(aug):
    """Coordinates of an augmented tree: reds on the hex lattice, blues at
    midpoints/leaf tips.  Valid for the small trees used here."""
    src = aug.source
    pos = {0: 0j}
    cls = {0: 0}
    stack = [0]
    seen = {0}
    while stack:
        v = stack.pop()
        for s in range(3):
            w = src.slot_nbr[v][s]
            if w is not None and w not in seen:
                ang = 2 * math.pi * s / 3 + (math.pi if cls[v] else 0)
                pos[w] = pos[v] + complex(math.cos(ang), math.sin(ang))
                cls[w] = 1 - cls[v]
                seen.add(w)
                stack.append(w)
    coords = {}
    for v in range(src.n):
        coords[v] = pos[v]
    for b in range(src.n, aug.n):
        nbrs = aug.ccw[b]
        if len(nbrs) == 2:
            coords[b] = (pos[nbrs[0]] + pos[nbrs[1]]) / 2
        else:
            u = nbrs[0]
            s = aug.ccw[u].index(b)
            ang = 2 * math.pi * s / 3 + (math.pi if cls[u] else 0)
            coords[b] = pos[u] + 0.9 * complex(math.cos(ang), math.sin(ang))
    return coords


def _geometric_walk(aug, coords):
    """Contour walk computed with actual angles; tree kept on the left."""
    def sorted_ccw(v):
        return sorted(
            (w for w in aug.ccw[v]),
            key=lambda w: math.atan2((coords[w] - coords[v]).imag, (coords[w] - coords[v]).real),
        )

    order = {v: sorted_ccw(v) for v in range(aug.n)}
    v0 = 0
    start = (v0, order[v0][0])
    visits = []
    u, v = start
    while True:
        visits.append(v)
        nbrs = order[v]
        w = nbrs[(nbrs.index(u) + 1) % len(nbrs)]
        u, v = v, w
        if (u, v) == start:
            break
    return visits


def _cyclic_equal(a, b):
    if len(a) != len(b):
        return False
    dbl = b + b
    return any(dbl[i : i + len(a)] == a for i in range(len(b)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_boundary_walk_matches_geometry(n):
    for t in enumerate_biangled(n):
        aug = augment(t)
        coords = _embed(aug)
        combo = aug.boundary_walk()
        geo = _geometric_walk(aug, coords)
        assert _cyclic_equal(combo, geo)


def test_walk_is_ccw():
    # the star's three leaves sit at angles 0, 2pi/3, 4pi/3 (slots 0, 1, 2);
    # a counterclockwise contour visits them in increasing-slot order
    t = BiAngledTree.single_vertex()
    aug = augment(t)
    walk = aug.boundary_walk()
    leaves = [v for v in walk if v in set(aug.blue_leaves())]
    slots = [aug.ccw[0].index(b) for b in leaves]
    k = slots.index(0)
    assert slots[k:] + slots[:k] == [0, 1, 2]


# ---------------------------------------------------------------------------
# pinching sets
# ---------------------------------------------------------------------------


def test_pinching_set_single_vertex_empty():
    ps = pinching_set(BiAngledTree.single_vertex())
    assert ps.d == 2 and ps.pairs == frozenset()


def test_pinching_set_two_vertex_opposite():
    t = enumerate_biangled(2)[0]
    ps = pinching_set(t)
    assert ps.sorted_pairs() == [(1, 3)]


def test_pinching_set_three_path_nested():
    # frozen from the geometric boundary-walk oracle
    t = enumerate_biangled(3)[0]
    ps = pinching_set(t)
    pairs = ps.sorted_pairs()
    assert len(pairs) == 2
    # nested (sharing no crossing): validated by the PinchSet constructor;
    # the canonical labeling gives {1,3},{1,4} for the 3-path
    assert pairs == [(1, 3), (1, 4)]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_pinching_set_count_and_validity(n):
    for t in enumerate_biangled(n):
        ps = pinching_set(t)
        assert len(ps.pairs) == n - 1  # = d-2 with d = n+1
        # constructor already enforces non-adjacent and non-crossing


def test_pinchset_rejects_adjacent():
    with pytest.raises(StructureError):
        PinchSet(d=3, pairs=frozenset([frozenset((1, 2))]))


def test_pinchset_rejects_crossing():
    with pytest.raises(StructureError):
        PinchSet(d=4, pairs=frozenset([frozenset((1, 3)), frozenset((2, 4))]))


# ---------------------------------------------------------------------------
# rooted binary trees
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n,count", [(0, 1), (1, 1), (2, 2), (3, 5), (4, 14)])
def test_enumerate_rooted_binary_counts(n, count):
    trees = enumerate_rooted_binary(n)
    assert len(trees) == count
    assert len({t.code() for t in trees}) == count
    assert count == catalan_count(n + 2)


def test_rooted_binary_empty_and_json():
    e = RootedBinaryTree.empty()
    assert e.n == 0 and e.code() is None
    for t in enumerate_rooted_binary(3):
        back = RootedBinaryTree.from_json_dict(t.to_json_dict())
        assert rooted_binary_isomorphic(t, back)


def test_catalan_values():
    assert catalan_count(2) == 1
    assert catalan_count(4) == 2
    assert catalan_count(5) == 5
    assert [catalan_count(d) for d in range(2, 10)] == [1, 1, 2, 5, 14, 42, 132, 429]
    with pytest.raises(TreeSizeError):
        catalan_count(31)


def test_catalan_matches_bruteforce_enumeration():
    for d in range(2, 10):
        if d - 2 <= 6:
            assert catalan_count(d) == len(enumerate_rooted_binary(d - 2))


# ---------------------------------------------------------------------------
# bounded-class pinch combinatorics
# ---------------------------------------------------------------------------


def test_rooted_pinch_pairs_single_tile():
    rt = enumerate_rooted_binary(1)[0]
    pairs, root_pair = rooted_pinch_pairs(rt, 3)
    assert pairs == [root_pair]
    assert root_pair[0] == root_pair[1]  # the root double joins an arc to itself


def test_rooted_pinch_pairs_chains_distinct():
    left_chain, right_chain = enumerate_rooted_binary(2)
    pl, rl = rooted_pinch_pairs(left_chain, 4)
    pr, rr = rooted_pinch_pairs(right_chain, 4)
    assert len(pl) == len(pr) == 2
    # after aligning the root self-pairs the remaining pairs must differ,
    # otherwise the two chiralities could not produce distinct polynomials
    shift_l = {tuple(sorted(((x - rl[0]) % 3 for x in p))) for p in pl}
    shift_r = {tuple(sorted(((x - rr[0]) % 3 for x in p))) for p in pr}
    assert shift_l != shift_r


def test_rooted_pinch_pairs_counts():
    for n in (1, 2, 3):
        d = n + 2
        for rt in enumerate_rooted_binary(n):
            pairs, root_pair = rooted_pinch_pairs(rt, d)
            assert len(pairs) == d - 2
            assert root_pair in pairs
