"""Boundary-curve analysis of f on the unit circle: cusps, tangential double
points, fundamental tiles, tree extraction, and the quadrilateral-modulus
diagnostic.

Detection strategy for double points: dense sampling of the curve, KD-tree
candidate pairing, then a polish stage.  Plain 2-variable Newton on
G(s,t) = f(e^is) - f(e^it) is singular exactly at the tangential contacts
the class produces (the two columns of the Jacobian are parallel there), so
candidates are finished with a Gauss-Newton pass on the consistent
overdetermined system (Re G, Im G, tangency), whose 3x2 Jacobian has full
column rank at a tangential double point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .polyfamily import (
    AnyPolynomial,
    BddPolynomial,
    CriticalData,
    ExtPolynomial,
    NotInClassError,
    critical_points,
    curvature_constant,
    univalence_exterior,
    univalence_interior,
)
from .trees import BiAngledTree, RootedBinaryTree, StructureError

TWO_PI = 2 * math.pi

EQUALITY_TOL = 1e-12
TANGENCY_TOL = 1e-6
MERGE_RADIUS = 1e-7
FORMING_WINDOW = (1e-12, 1e-4)


class ExtremalityError(ValueError):
    """Operation requires an extremal (maximally pinched) member."""


@dataclass(frozen=True)
class DoublePoint:
    """Tangential self-contact f(e^is) = f(e^it) of the boundary curve."""

    s: float
    t: float
    point: complex
    tangency_residual: float
    gap: float = 0.0

    def preimages(self) -> Tuple[complex, complex]:
        return (np.exp(1j * self.s), np.exp(1j * self.t))


@dataclass(frozen=True)
class FormingPair:
    """Near-contact reported while a pinch is still in progress."""

    arcs: Tuple[int, int]
    gap: float
    s: float
    t: float


@dataclass
class FundamentalTile:
    """One component of the desingularized droplet.

    corners are ccw as (kind, index) with kind 'cusp' or 'double'; arcs are
    the circle subarcs (angle intervals, traced ccw around the tile) whose
    images bound the tile.
    """

    corners: List[Tuple[str, int]]
    arcs: List[Tuple[float, float]]
    signed_area: float

    @property
    def bounded(self) -> bool:
        return self.signed_area > 0


@dataclass
class DropletReport:
    kind: str  # "sigma_star" | "s_star"
    d: int
    cusps: CriticalData
    doubles: List[DoublePoint]
    forming: List[FormingPair]
    is_extremal: bool
    curvature_mean: float
    curvature_std: float
    univalent: bool
    tiles: Optional[List[FundamentalTile]] = None
    tree: Optional[Union[BiAngledTree, RootedBinaryTree]] = None

    @property
    def n_cusps(self) -> int:
        return len(self.cusps)


# ---------------------------------------------------------------------------
# double points
# ---------------------------------------------------------------------------


def _boundary(f: AnyPolynomial, s):
    return f(np.exp(1j * np.asarray(s)))


def _tangent(f: AnyPolynomial, s):
    z = np.exp(1j * np.asarray(s))
    return 1j * z * f.deriv(z)


def _gauss_newton_tangential(f: AnyPolynomial, s: float, t: float, iters: int = 40):
    """Polish (s,t) on the system (Re G, Im G, tangency); quadratic at the
    tangential contact where plain Newton degenerates."""
    scale = f.coeff_scale()
    for _ in range(iters):
        g = complex(_boundary(f, s) - _boundary(f, t))
        ts = complex(_tangent(f, s))
        tt = complex(_tangent(f, t))
        tang = (ts * np.conj(tt)).imag
        r = np.array([g.real, g.imag, tang])
        if abs(g) < 1e-14 * scale and abs(tang) < 1e-14 * scale**2:
            break
        # derivatives of the tangent vectors
        zs, zt = np.exp(1j * s), np.exp(1j * t)
        dts = 1j * ts + (1j * zs) ** 2 * complex(f.second_deriv(zs))
        dtt = 1j * tt + (1j * zt) ** 2 * complex(f.second_deriv(zt))
        jac = np.array(
            [
                [ts.real, -tt.real],
                [ts.imag, -tt.imag],
                [(dts * np.conj(tt)).imag, (ts * np.conj(dtt)).imag],
            ]
        )
        try:
            upd, *_ = np.linalg.lstsq(jac, r, rcond=None)
        except np.linalg.LinAlgError:
            return None
        s, t = s - upd[0], t - upd[1]
        if not (np.isfinite(s) and np.isfinite(t)):
            return None
    return s % TWO_PI, t % TWO_PI


def _plain_newton_pair(f: AnyPolynomial, s: float, t: float, iters: int = 30):
    scale = f.coeff_scale()
    for _ in range(iters):
        g = complex(_boundary(f, s) - _boundary(f, t))
        if abs(g) < 1e-14 * scale:
            break
        ts = complex(_tangent(f, s))
        tt = complex(_tangent(f, t))
        jac = np.array([[ts.real, -tt.real], [ts.imag, -tt.imag]])
        try:
            upd = np.linalg.solve(jac, np.array([g.real, g.imag]))
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(upd)) or np.max(np.abs(upd)) > 1.0:
            return None
        s, t = s - upd[0], t - upd[1]
    return s % TWO_PI, t % TWO_PI


def _tangency_residual(f: AnyPolynomial, s: float, t: float) -> float:
    ts = complex(_tangent(f, s))
    tt = complex(_tangent(f, t))
    denom = abs(ts) * abs(tt)
    if denom == 0:
        return float("inf")
    return abs((ts * np.conj(tt)).imag) / denom


def find_double_points(
    f: AnyPolynomial,
    n_samples: int = 2**14,
    equality_tol: float = EQUALITY_TOL,
    merge_radius: float = MERGE_RADIUS,
    crit: Optional[CriticalData] = None,
) -> List[DoublePoint]:
    """All self-contacts of f on the unit circle, polished to equality_tol.

    Raises NotInClassError on a transversal crossing or when the count
    exceeds the class bound d-2.
    """
    from scipy.spatial import cKDTree

    if crit is None:
        crit = critical_points(f)
    crit_angles = crit.angles
    min_gap = float(np.min(np.diff(np.concatenate([crit_angles, [crit_angles[0] + TWO_PI]])))) if len(crit_angles) > 1 else TWO_PI
    dt_min = 0.45 * min_gap

    ts = np.linspace(0, TWO_PI, n_samples, endpoint=False)
    pts = _boundary(f, ts)
    step = np.abs(np.diff(pts, append=pts[:1]))
    capture = 3.0 * float(step.max())
    tree = cKDTree(np.column_stack([pts.real, pts.imag]))
    pairs = tree.query_pairs(r=capture, output_type="ndarray")
    scale = f.coeff_scale()
    found: List[DoublePoint] = []
    if len(pairs):
        dt = np.abs(ts[pairs[:, 0]] - ts[pairs[:, 1]])
        dt = np.minimum(dt, TWO_PI - dt)
        pairs = pairs[dt > dt_min]
    if len(pairs):
        block = max(8, n_samples // 512)
        dist = np.abs(pts[pairs[:, 0]] - pts[pairs[:, 1]])
        order = np.argsort(dist)
        seen = set()
        reps = []
        for idx in order:
            key = (pairs[idx, 0] // block, pairs[idx, 1] // block)
            if key in seen:
                continue
            seen.add(key)
            reps.append((ts[pairs[idx, 0]], ts[pairs[idx, 1]]))
        for s0, t0 in reps:
            # plain Newton first, then the tangency-aware Gauss-Newton chained
            # from its result: plain Newton meets the gap tolerance while still
            # ~1e-6 off in (s,t) at a quadratic contact, the combined pass
            # nails the angles so duplicates merge cleanly
            polished = _plain_newton_pair(f, s0, t0)
            seed = polished if polished is not None else (s0, t0)
            refined = _gauss_newton_tangential(f, seed[0], seed[1])
            best = None
            for cand in (refined, polished):
                if cand is None:
                    continue
                s, t = cand
                g = abs(complex(_boundary(f, s) - _boundary(f, t)))
                if g < equality_tol * scale:
                    best = (s, t, g)
                    break
            if best is None:
                continue
            s, t, g = best
            ds = abs(s - t) % TWO_PI
            ds = min(ds, TWO_PI - ds)
            if ds < dt_min:
                continue  # cusp neighborhood or duplicate of a single point
            if s > t:
                s, t = t, s
            if any(
                (abs(s - dp.s) < merge_radius and abs(t - dp.t) < merge_radius)
                for dp in found
            ):
                continue
            resid = _tangency_residual(f, s, t)
            point = complex(0.5 * (_boundary(f, s) + _boundary(f, t)))
            found.append(
                DoublePoint(s=float(s), t=float(t), point=point,
                            tangency_residual=float(resid), gap=float(g))
            )
    for dp in found:
        if dp.tangency_residual > TANGENCY_TOL:
            raise NotInClassError(
                f"transversal self-crossing at {dp.point:.6g} "
                f"(tangency residual {dp.tangency_residual:.2e}): not univalent"
            )
    d = f.d
    if len(found) > d - 2:
        raise NotInClassError(
            f"{len(found)} double points exceed the class bound {d - 2}"
        )
    return sorted(found, key=lambda dp: dp.s)


# ---------------------------------------------------------------------------
# near-contacts (forming pairs)
# ---------------------------------------------------------------------------


def arc_of_angle(angle: float, crit_angles: np.ndarray) -> int:
    """1-based index of the arc (between ccw-consecutive critical angles)
    containing the given boundary angle."""
    a = angle % TWO_PI
    idx = int(np.searchsorted(crit_angles, a, side="right"))
    n = len(crit_angles)
    return ((idx - 1) % n) + 1


def arc_span(j: int, crit_angles: np.ndarray) -> Tuple[float, float]:
    """Angle interval of arc j (1-based); end may exceed 2 pi when wrapping."""
    n = len(crit_angles)
    a = float(crit_angles[j - 1])
    b = float(crit_angles[j % n])
    if b <= a:
        b += TWO_PI
    return a, b


def arc_min_gap(
    f: AnyPolynomial,
    crit_angles: np.ndarray,
    j: int,
    k: int,
    samples: int = 400,
    refine: bool = True,
):
    """Minimal distance between the images of arcs j and k (1-based), with
    the minimizing pair of angles.  For j == k the diagonal band is excluded
    (self-contact of a single arc, which the bounded class can produce)."""
    a0, a1 = arc_span(j, crit_angles)
    b0, b1 = arc_span(k, crit_angles)
    pad_a = 1e-4 * (a1 - a0)
    pad_b = 1e-4 * (b1 - b0)
    sa = np.linspace(a0 + pad_a, a1 - pad_a, samples)
    sb = np.linspace(b0 + pad_b, b1 - pad_b, samples)
    pa = _boundary(f, sa)
    pb = _boundary(f, sb)
    dist = np.abs(pa[:, None] - pb[None, :])
    if j == k:
        band = (a1 - a0) / 6.0
        mask = np.abs(sa[:, None] - sb[None, :]) < band
        dist[mask] = np.inf
    i0, i1 = np.unravel_index(np.argmin(dist), dist.shape)
    s, t = float(sa[i0]), float(sb[i1])
    gap = float(dist[i0, i1])
    if not refine or not np.isfinite(gap):
        return gap, s, t
    # KKT polish: grad of |G|^2/2 wrt both angles
    for _ in range(60):
        g = complex(_boundary(f, s) - _boundary(f, t))
        ts = complex(_tangent(f, s))
        tt = complex(_tangent(f, t))
        r = np.array([(np.conj(g) * ts).real, (np.conj(g) * tt).real])
        if np.max(np.abs(r)) < 1e-14 * f.coeff_scale() ** 2:
            break
        h = 1e-7
        cols = []
        for ds, dtt in ((h, 0.0), (0.0, h)):
            g2 = complex(_boundary(f, s + ds) - _boundary(f, t + dtt))
            ts2 = complex(_tangent(f, s + ds))
            tt2 = complex(_tangent(f, t + dtt))
            r2 = np.array([(np.conj(g2) * ts2).real, (np.conj(g2) * tt2).real])
            cols.append((r2 - r) / h)
        jac = np.column_stack(cols)
        try:
            upd = np.linalg.solve(jac, r)
        except np.linalg.LinAlgError:
            break
        if np.max(np.abs(upd)) > 0.3:
            break
        s, t = s - upd[0], t - upd[1]
    g = abs(complex(_boundary(f, s) - _boundary(f, t)))
    if g < gap:
        gap = float(g)
    return gap, s % TWO_PI, t % TWO_PI


def forming_pairs(
    f: AnyPolynomial,
    crit: Optional[CriticalData] = None,
    window: Tuple[float, float] = FORMING_WINDOW,
    include_adjacent: bool = False,
) -> List[FormingPair]:
    """Arc pairs whose images approach within the forming window but have
    not been driven to contact: the solver's homotopy monitor."""
    if crit is None:
        crit = critical_points(f)
    ca = crit.angles
    n = len(ca)
    out = []
    for j in range(1, n + 1):
        for k in range(j, n + 1):
            if not include_adjacent:
                if j == k or (k - j) % n in (1, n - 1):
                    continue
            gap, s, t = arc_min_gap(f, ca, j, k)
            if window[0] < gap < window[1]:
                out.append(FormingPair(arcs=(j, k), gap=gap, s=s, t=t))
    return sorted(out, key=lambda p: p.gap)


def intersecting_arc_pairs(
    f: AnyPolynomial,
    crit: Optional[CriticalData] = None,
    doubles: Optional[List[DoublePoint]] = None,
) -> set:
    """Set of 1-based arc index pairs whose images currently touch."""
    if crit is None:
        crit = critical_points(f)
    if doubles is None:
        doubles = find_double_points(f, crit=crit)
    ca = crit.angles
    return {tuple(sorted((arc_of_angle(dp.s, ca), arc_of_angle(dp.t, ca)))) for dp in doubles}


# ---------------------------------------------------------------------------
# fundamental tiles
# ---------------------------------------------------------------------------


def _trace_tiles(
    f: AnyPolynomial,
    crit: CriticalData,
    doubles: Sequence[DoublePoint],
    ccw: bool,
    samples_per_arc: int = 64,
) -> List[FundamentalTile]:
    """Partition the circle at singular-point preimages and trace the tile
    boundaries; at a double-point preimage the trace jumps to the partner
    preimage and keeps its direction."""
    events = []  # (angle, kind, index)
    for i, a in enumerate(crit.angles):
        events.append((float(a), "cusp", i))
    partner = {}
    for m, dp in enumerate(doubles):
        events.append((dp.s % TWO_PI, "double", m))
        events.append((dp.t % TWO_PI, "double", m))
        partner[dp.s % TWO_PI] = dp.t % TWO_PI
        partner[dp.t % TWO_PI] = dp.s % TWO_PI
    events.sort()
    E = len(events)
    angles = [e[0] for e in events]

    def subarc_after(angle):
        # index of the subarc starting at the event with this angle
        i = min(range(E), key=lambda q: abs(angles[q] - angle))
        return i

    used = [False] * E
    tiles = []
    for start in range(E):
        if used[start]:
            continue
        arc_ids = []
        corners = []
        cur = start
        while True:
            if used[cur]:
                break
            used[cur] = True
            arc_ids.append(cur)
            if ccw:
                end_ev = events[(cur + 1) % E]
            else:
                end_ev = events[cur]
            kind, idx = end_ev[1], end_ev[2]
            corners.append((kind, idx))
            if kind == "cusp":
                cur = (cur + 1) % E if ccw else (cur - 1) % E
            else:
                p = partner[end_ev[0]]
                if ccw:
                    cur = subarc_after(p)
                else:
                    cur = (subarc_after(p) - 1) % E
            if cur == start:
                break
        # collect the subarc spans and a polygon for area/membership; the
        # trace direction (increasing t for the exterior class, decreasing
        # for the bounded one) keeps the tile interior on the left, so the
        # polygon and the corner cycle are ccw around the tile as stored
        spans = []
        poly = []
        for q in arc_ids:
            a = angles[q]
            b = angles[(q + 1) % E]
            if b <= a:
                b += TWO_PI
            spans.append((a, b))
            if ccw:
                ss = np.linspace(a, b, samples_per_arc, endpoint=False)
            else:
                ss = np.linspace(b, a, samples_per_arc, endpoint=False)
            poly.append(_boundary(f, ss))
        poly = np.concatenate(poly)
        area = 0.5 * float(
            np.sum(poly.real * np.roll(poly.imag, -1) - np.roll(poly.real, -1) * poly.imag)
        )
        tiles.append(FundamentalTile(corners=corners, arcs=spans, signed_area=area))
    return tiles


def fundamental_tiles(
    f: AnyPolynomial,
    crit: Optional[CriticalData] = None,
    doubles: Optional[List[DoublePoint]] = None,
) -> List[FundamentalTile]:
    """Fundamental tiles of an extremal member (precondition: extremal)."""
    if crit is None:
        crit = critical_points(f)
    if doubles is None:
        doubles = find_double_points(f, crit=crit)
    d = f.d
    if len(doubles) != d - 2:
        raise ExtremalityError(
            f"{len(doubles)} double points, extremality needs {d - 2}"
        )
    ccw = isinstance(f, ExtPolynomial)
    tiles = _trace_tiles(f, crit, doubles, ccw=ccw)
    if len(tiles) != d - 1:
        raise StructureError(f"traced {len(tiles)} tiles, expected {d - 1}")
    if isinstance(f, ExtPolynomial):
        bad = [t for t in tiles if len(t.corners) != 3]
        if bad:
            raise StructureError("an exterior-class tile does not have 3 corners")
    return tiles


# ---------------------------------------------------------------------------
# tree extraction
# ---------------------------------------------------------------------------


def extract_biangled_tree(
    f: ExtPolynomial,
    tiles: Optional[List[FundamentalTile]] = None,
) -> BiAngledTree:
    """Bi-angled tree of an extremal exterior member: one vertex per tile,
    edges across shared double points, angles from the ccw corner order.

    The ccw corner cycle of a tile maps to slot order with unit steps, and
    a shared double point carries one slot valid at both endpoint tiles;
    a breadth-first sweep propagates the assignment.
    """
    if tiles is None:
        tiles = fundamental_tiles(f)
    n = len(tiles)
    by_double = {}
    for ti, tile in enumerate(tiles):
        for pos, (kind, idx) in enumerate(tile.corners):
            if kind == "double":
                by_double.setdefault(idx, []).append((ti, pos))
    for idx, ends in by_double.items():
        if len(ends) != 2:
            raise StructureError(f"double point {idx} not shared by two tiles")
    # BFS slot assignment
    slot_of_corner = [dict() for _ in range(n)]  # corner pos -> slot

    def set_corners(ti, pos0, slot0):
        for i in range(3):
            slot_of_corner[ti][(pos0 + i) % 3] = (slot0 + i) % 3

    set_corners(0, 0, 0)
    seen = {0}
    queue = [0]
    edges = []
    while queue:
        ti = queue.pop()
        tile = tiles[ti]
        for pos, (kind, idx) in enumerate(tile.corners):
            if kind != "double":
                continue
            (t1, p1), (t2, p2) = by_double[idx]
            tj, pj = (t2, p2) if t1 == ti else (t1, p1)
            s = slot_of_corner[ti][pos]
            if tj not in seen:
                set_corners(tj, pj, s)
                seen.add(tj)
                queue.append(tj)
                edges.append((ti, tj, s))
            elif slot_of_corner[tj][pj] != s:
                raise StructureError("inconsistent slot propagation")
    if len(edges) != n - 1:
        raise StructureError("tile adjacency is not a tree")
    return BiAngledTree.from_edge_slots(n, edges).canonical()


def extract_rooted_binary_tree(
    f: BddPolynomial,
    tiles: Optional[List[FundamentalTile]] = None,
) -> RootedBinaryTree:
    """Rooted binary tree of an extremal bounded member.

    The root is the bounded tile meeting the unbounded one.  At each tile
    the entry corner points toward the parent; going ccw from it, the first
    corner carries the right child and the second the left child (the child
    directions sit at -pi/3 and +pi/3 from the outward axis, so ccw from the
    entry direction pi reaches the right-child corner first).  Degree 2 has
    no double points and yields the empty tree.
    """
    if f.d == 2:
        find_double_points(f)  # validates class membership
        return RootedBinaryTree.empty()
    if tiles is None:
        tiles = fundamental_tiles(f)
    unbounded = [i for i, t in enumerate(tiles) if not t.bounded]
    if len(unbounded) != 1:
        raise StructureError("expected exactly one unbounded tile")
    u = unbounded[0]
    doubles_of_u = [idx for kind, idx in tiles[u].corners if kind == "double"]
    if len(doubles_of_u) != 1:
        raise StructureError("unbounded tile must meet exactly one double point")
    by_double = {}
    for ti, tile in enumerate(tiles):
        for pos, (kind, idx) in enumerate(tile.corners):
            if kind == "double":
                by_double.setdefault(idx, []).append((ti, pos))
    (ta, pa), (tb, pb) = by_double[doubles_of_u[0]]
    root_tile, root_pos = ((tb, pb) if ta == u else (ta, pa))

    nodes = {}
    counter = [0]

    def build(ti, entry_pos):
        v = counter[0]
        counter[0] += 1
        nodes[v] = (None, None)
        children = []
        ncorners = len(tiles[ti].corners)
        for off in (2, 1):  # ccw offset 2 = left child, offset 1 = right child
            kind, idx = tiles[ti].corners[(entry_pos + off) % ncorners]
            if kind == "double":
                (t1, p1), (t2, p2) = by_double[idx]
                tj, pj = (t2, p2) if t1 == ti else (t1, p1)
                children.append(build(tj, pj))
            else:
                children.append(None)
        left, right = children
        nodes[v] = (left, right)
        return v

    root = build(root_tile, root_pos)
    rt = RootedBinaryTree(root, nodes)
    if rt.n != f.d - 2:
        raise StructureError(f"extracted {rt.n} vertices, expected {f.d - 2}")
    return rt


# ---------------------------------------------------------------------------
# quadrilateral modulus bounds
# ---------------------------------------------------------------------------


def quad_modulus_bounds(s_a: float, s_b: float) -> Tuple[float, float]:
    """Two-sided modulus estimate for a quadrilateral from the Euclidean
    path distances between its a-sides and b-sides."""
    if s_a <= 0 or s_b <= 0:
        raise ValueError("side distances must be positive")
    lo_l = math.log(1.0 + 2.0 * s_b / s_a)
    up_l = math.log(1.0 + 2.0 * s_a / s_b)
    lower = (lo_l * lo_l) / (math.pi * (1.0 + 2.0 * lo_l))
    upper = math.pi * (1.0 + 2.0 * up_l) / (up_l * up_l)
    return lower, upper


# ---------------------------------------------------------------------------
# full verification
# ---------------------------------------------------------------------------


def analyze(f: AnyPolynomial, n_samples: int = 2**14) -> DropletReport:
    """Full droplet report: cusps, doubles, extremality, tiles and tree."""
    crit = critical_points(f)
    doubles = find_double_points(f, n_samples=n_samples, crit=crit)
    forming = forming_pairs(f, crit=crit)
    d = f.d
    is_ext = len(doubles) == d - 2
    mean, std = curvature_constant(f)
    if isinstance(f, ExtPolynomial):
        kind = "sigma_star"
        uni = univalence_exterior(f)
    else:
        kind = "s_star"
        uni = univalence_interior(f)
    tiles = None
    tree = None
    if is_ext:
        if isinstance(f, ExtPolynomial):
            tiles = fundamental_tiles(f, crit=crit, doubles=doubles)
            tree = extract_biangled_tree(f, tiles=tiles)
        else:
            if d > 2:
                tiles = fundamental_tiles(f, crit=crit, doubles=doubles)
            tree = extract_rooted_binary_tree(f, tiles=tiles)
    return DropletReport(
        kind=kind,
        d=d,
        cusps=crit,
        doubles=doubles,
        forming=forming,
        is_extremal=is_ext,
        curvature_mean=mean,
        curvature_std=std,
        univalent=bool(uni),
        tiles=tiles,
        tree=tree,
    )


# ---------------------------------------------------------------------------
# membership helpers (used by the Schwarz renderer)
# ---------------------------------------------------------------------------


def tile_polygons(
    f: AnyPolynomial,
    tiles: Sequence[FundamentalTile],
    samples_per_arc: int = 512,
) -> List[np.ndarray]:
    """Dense boundary polygons of the bounded tiles."""
    polys = []
    for tile in tiles:
        if not tile.bounded:
            continue
        pieces = [
            _boundary(f, np.linspace(a, b, samples_per_arc, endpoint=False))
            for a, b in tile.arcs
        ]
        polys.append(np.concatenate(pieces))
    return polys


def points_in_polygon(poly: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Vectorized even-odd (crossing number) point-in-polygon test."""
    x, y = pts.real, pts.imag
    px, py = poly.real, poly.imag
    qx, qy = np.roll(px, -1), np.roll(py, -1)
    inside = np.zeros(pts.shape, dtype=bool)
    for i in range(len(poly)):
        x0, y0, x1, y1 = px[i], py[i], qx[i], qy[i]
        crosses = (y0 <= y) != (y1 <= y)
        if not np.any(crosses):
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            xi = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        inside ^= crosses & (x < xi)
    return inside


def droplet_contains(polys: Sequence[np.ndarray], pts: np.ndarray) -> np.ndarray:
    """Membership in the union of the bounded tiles."""
    flat = np.asarray(pts, dtype=complex).ravel()
    inside = np.zeros(flat.shape, dtype=bool)
    for poly in polys:
        inside |= points_in_polygon(poly, flat)
    return inside.reshape(np.shape(pts))
