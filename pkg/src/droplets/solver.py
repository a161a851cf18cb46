"""Realizing trees as extremal polynomials by pinch continuation.

The deformation runs directly in the class parameter space.  A pinch drives
the minimal distance ("gap") between two boundary arcs to zero on a geometric
schedule; at each homotopy level a least-norm Newton corrector restores the
constraint system

    per pinned contact m:  Re/Im [f(e^{i s_m}) - f(e^{i t_m})] = 0
                           Im [T(s_m) conj(T(t_m))] = 0        (tangency)
    active pair:           contact direction orthogonal to both tangents,
                           |gap| = prescribed level

where T(s) = i e^{is} f'(e^{is}).  The system is square exactly when all
d-2 contacts are pinned (3(d-2) equations against d-2 chart parameters plus
two angles per contact); earlier stages are underdetermined by the number of
pinches still to come, matching the dimension drop of each pinch, and the
corrector takes minimum-norm steps.  After every accepted step the critical
points are re-matched to their labels by nearest angle, the intersection
pattern of all non-target arc pairs is checked unchanged, and univalence is
re-certified; a violation rolls the step back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import droplet as dr
from .polyfamily import (
    AnyPolynomial,
    BddPolynomial,
    ExtPolynomial,
    NotInClassError,
    bdd_to_params,
    canonical_rotation,
    critical_points,
    ext_to_params,
    orbit_distance,
    params_to_bdd,
    params_to_ext,
    suffridge_base,
    univalence_exterior,
    univalence_interior,
)
from .trees import (
    BiAngledTree,
    RootedBinaryTree,
    StructureError,
    biangled_isomorphic,
    pinching_set,
    rooted_binary_isomorphic,
    rooted_pinch_pairs,
)

TWO_PI = 2 * math.pi

SOLVER_CAP = 10
PINNED_GAP_TOL = 1e-10
PINNED_TANGENCY_TOL = 1e-8


class ContinuationStall(RuntimeError):
    """The pinch homotopy cannot make progress; carries the last state."""

    def __init__(self, msg, state=None):
        super().__init__(msg)
        self.state = state


class PinchPreconditionError(ValueError):
    """Target arcs do not bound a common complementary component."""


class SolveMismatchError(RuntimeError):
    """Solved polynomial does not reproduce the requested tree."""


@dataclass
class PinchTarget:
    pair: Tuple[int, int]
    status: str = "pending"  # pending | forming | pinched
    gap: float = float("nan")


@dataclass
class ContinuationState:
    """Snapshot of the continuation: chart parameters, pinned contact angles,
    the active target and step bookkeeping."""

    theta: np.ndarray
    pinned: List[Tuple[float, float]]
    target: Optional[PinchTarget] = None
    step_size: float = 0.5
    residual_norm: float = 0.0
    violations: int = 0  # post-hoc intersection-pattern violations observed


@dataclass(frozen=True)
class ClassChart:
    """Adapter between a polynomial class and its real parameter chart."""

    name: str
    to_poly: Callable[[int, np.ndarray], AnyPolynomial]
    to_params: Callable[[AnyPolynomial], np.ndarray]
    univalent: Callable[[AnyPolynomial], bool]


EXT_CHART = ClassChart(
    name="sigma_star",
    to_poly=lambda d, th: params_to_ext(d, th),
    to_params=lambda f: np.array(ext_to_params(f).theta),
    univalent=lambda f: bool(univalence_exterior(f)),
)

BDD_CHART = ClassChart(
    name="s_star",
    to_poly=lambda d, th: params_to_bdd(d, th),
    to_params=lambda f: bdd_to_params(f),
    univalent=lambda f: bool(univalence_interior(f)),
)


# ---------------------------------------------------------------------------
# residual systems
# ---------------------------------------------------------------------------


def pinch_residual(f: AnyPolynomial, pins: Sequence[Tuple[float, float]]) -> np.ndarray:
    """Concatenated (Re gap, Im gap, tangency) residuals of the pinned
    contacts: length 3 * len(pins)."""
    out = np.empty(3 * len(pins))
    for m, (s, t) in enumerate(pins):
        g = complex(dr._boundary(f, s) - dr._boundary(f, t))
        ts = complex(dr._tangent(f, s))
        tt = complex(dr._tangent(f, t))
        out[3 * m] = g.real
        out[3 * m + 1] = g.imag
        out[3 * m + 2] = (ts * np.conj(tt)).imag
    return out


def state_residual(f_of_theta, d: int, state: ContinuationState) -> np.ndarray:
    """pinch_residual evaluated on a ContinuationState."""
    f = f_of_theta(d, state.theta)
    return pinch_residual(f, state.pinned)


def _pack(theta, pins, active=None):
    parts = [np.asarray(theta, float)]
    for s, t in pins:
        parts.append([s, t])
    if active is not None:
        parts.append(list(active))
    return np.concatenate(parts)


def _unpack(x, n_theta, n_pins, has_active):
    theta = x[:n_theta]
    pins = [(x[n_theta + 2 * i], x[n_theta + 2 * i + 1]) for i in range(n_pins)]
    active = None
    if has_active:
        active = (x[-2], x[-1])
    return theta, pins, active


def _fd_jacobian(func, x, h=1e-7):
    r0 = func(x)
    jac = np.empty((len(r0), len(x)))
    for i in range(len(x)):
        xp = x.copy()
        xp[i] += h
        jac[:, i] = (func(xp) - r0) / h
    return r0, jac


def _least_norm_newton(func, x0, tol, max_iter=40, max_step=0.5):
    """Newton with minimum-norm steps (lstsq); tolerant of underdetermined
    systems.  Returns (x, residual_norm, converged)."""
    x = x0.copy()
    best = (x.copy(), float("inf"))
    for _ in range(max_iter):
        r, jac = _fd_jacobian(func, x)
        norm = float(np.max(np.abs(r))) if len(r) else 0.0
        if norm < best[1]:
            best = (x.copy(), norm)
        if norm < tol:
            return x, norm, True
        try:
            step, *_ = np.linalg.lstsq(jac, r, rcond=None)
        except np.linalg.LinAlgError:
            break
        size = float(np.max(np.abs(step)))
        if size > max_step:
            step *= max_step / size
        x = x - step
        if not np.all(np.isfinite(x)):
            return best[0], best[1], False
    r = func(x)
    norm = float(np.max(np.abs(r))) if len(r) else 0.0
    if norm < best[1]:
        best = (x, norm)
    return best[0], best[1], best[1] < tol


# ---------------------------------------------------------------------------
# arc bookkeeping
# ---------------------------------------------------------------------------


class ArcTracker:
    """Carries the ccw labeling of the critical points through the
    deformation by nearest-angle matching."""

    def __init__(self, f: AnyPolynomial):
        crit = critical_points(f)
        self.angles = np.array(crit.angles)  # by label, initially sorted

    @property
    def n(self) -> int:
        return len(self.angles)

    def update(self, f: AnyPolynomial) -> None:
        new = np.array(critical_points(f).angles)  # sorted
        matched = np.empty_like(self.angles)
        taken = set()
        for lbl, old in enumerate(self.angles):
            diffs = np.abs(np.angle(np.exp(1j * (new - old))))
            for idx in np.argsort(diffs):
                if idx not in taken:
                    taken.add(idx)
                    matched[lbl] = new[idx]
                    break
        self.angles = matched

    def sorted_arc_index(self, label: int) -> int:
        """Current 1-based sorted-arc index of the labeled arc.

        Arc `label` runs from the labeled critical point `label` to its ccw
        successor; labels never cross, so this is the rank of its start."""
        order = np.argsort(self.angles % TWO_PI)
        rank = {lbl: pos for pos, lbl in enumerate(order)}
        return rank[label - 1] + 1

    def sorted_angles(self) -> np.ndarray:
        return np.sort(self.angles % TWO_PI)


def _arcs_on_common_tile(f, tracker, pair) -> bool:
    """Pinching hypothesis: both target arcs meet the boundary of a common
    bounded complementary component."""
    crit = critical_points(f)
    doubles = dr.find_double_points(f, crit=crit)
    ccw = isinstance(f, ExtPolynomial)
    tiles = dr._trace_tiles(f, crit, doubles, ccw=ccw)
    ca = tracker.sorted_angles()
    j = tracker.sorted_arc_index(pair[0])
    k = tracker.sorted_arc_index(pair[1])
    for tile in tiles:
        if not tile.bounded and not isinstance(f, ExtPolynomial):
            continue
        touched = set()
        for a, b in tile.arcs:
            mid = 0.5 * (a + b)
            touched.add(dr.arc_of_angle(mid, ca))
        if j in touched and k in touched:
            return True
    return False


# ---------------------------------------------------------------------------
# the pinch step
# ---------------------------------------------------------------------------


def _accept_checks(f, tracker_before, pins, label_pairs, chart):
    """Step acceptance: pinned residuals, class membership, univalence, and
    no unexpected contacts (the pinching theorem's 'unchanged elsewhere').

    label_pairs are the contacts expected to exist, in the persistent arc
    labeling; they are translated to current sorted arc indices through an
    updated copy of the tracker."""
    res = pinch_residual(f, pins)
    scale = f.coeff_scale()
    for m in range(len(pins)):
        if abs(complex(res[3 * m], res[3 * m + 1])) > PINNED_GAP_TOL * scale:
            return False, "pinned contact drifted"
        if abs(res[3 * m + 2]) > PINNED_TANGENCY_TOL * scale**2:
            return False, "pinned tangency drifted"
    try:
        crit = critical_points(f)
        doubles = dr.find_double_points(f, n_samples=4096, crit=crit)
    except NotInClassError as e:
        return False, f"class violation: {e}"
    clone = ArcTracker.__new__(ArcTracker)
    clone.angles = tracker_before.angles.copy()
    clone.update(f)
    expected = _current_sorted_pairs(clone, label_pairs)
    ca = crit.angles
    seen = {
        tuple(sorted((dr.arc_of_angle(dp.s, ca), dr.arc_of_angle(dp.t, ca))))
        for dp in doubles
    }
    if seen != expected:
        return False, f"unexpected contact pattern {sorted(seen)}"
    if not chart.univalent(f):
        return False, "univalence lost"
    return True, ""


def _current_sorted_pairs(tracker, label_pairs):
    return {
        tuple(sorted((tracker.sorted_arc_index(j), tracker.sorted_arc_index(k))))
        for j, k in label_pairs
    }


def pinch_step(
    f: AnyPolynomial,
    target: Tuple[int, int],
    pinned: Sequence[Tuple[float, float]] = (),
    pinned_pairs: Sequence[Tuple[int, int]] = (),
    tracker: Optional[ArcTracker] = None,
    chart: Optional[ClassChart] = None,
    gap_factor: float = 0.5,
    max_steps: int = 200,
    newton_tol: float = 1e-12,
    land_gap: float = 1e-5,
):
    """Drive the images of the target arc pair into tangential contact while
    preserving every previously pinned contact.

    Returns (f_new, pins_new, tracker, state).  Raises ContinuationStall when
    the schedule collapses with the gap still open, PinchPreconditionError if
    the pinching hypothesis fails.
    """
    if chart is None:
        chart = EXT_CHART if isinstance(f, ExtPolynomial) else BDD_CHART
    d = f.d
    if tracker is None:
        tracker = ArcTracker(f)
    n_arcs = tracker.n
    j_lbl, k_lbl = target
    if isinstance(f, ExtPolynomial):
        if (j_lbl - k_lbl) % n_arcs in (0, 1, n_arcs - 1):
            raise PinchPreconditionError(
                f"target arcs {target} are not a non-adjacent pair"
            )
    if not _arcs_on_common_tile(f, tracker, target):
        raise PinchPreconditionError(
            f"target arcs {target} do not meet a common bounded component"
        )

    theta = chart.to_params(f)
    n_theta = len(theta)
    pins = list(pinned)
    scale = f.coeff_scale()

    ca = tracker.sorted_angles()
    j = tracker.sorted_arc_index(j_lbl)
    k = tracker.sorted_arc_index(k_lbl)
    gap0, s0, t0 = dr.arc_min_gap(f, ca, j, k)
    state = ContinuationState(
        theta=np.array(theta), pinned=list(pins),
        target=PinchTarget(pair=target, status="forming", gap=gap0),
    )
    label_pairs = [tuple(p) for p in pinned_pairs]

    def active_residual(x, g_target):
        th, pn, act = _unpack(x, n_theta, len(pins), True)
        ff = chart.to_poly(d, th)
        base = pinch_residual(ff, pn)
        s, t = act
        g = complex(dr._boundary(ff, s) - dr._boundary(ff, t))
        ts = complex(dr._tangent(ff, s))
        tt = complex(dr._tangent(ff, t))
        mag = abs(g)
        if mag == 0:
            ghat = 0j
        else:
            ghat = g / mag
        extra = np.array(
            [
                (np.conj(ghat) * ts).real,
                (np.conj(ghat) * tt).real,
                mag - g_target,
            ]
        )
        return np.concatenate([base, extra])

    cur_x = _pack(theta, pins, (s0, t0))
    cur_gap = gap0
    factor = gap_factor
    steps = 0
    while cur_gap > land_gap * scale:
        if steps > max_steps:
            raise ContinuationStall("pinch exceeded the step budget", state)
        g_target = max(cur_gap * factor, 0.25 * land_gap * scale)
        x_new, norm, ok = _least_norm_newton(
            lambda x: active_residual(x, g_target), cur_x, tol=newton_tol * scale
        )
        accepted = False
        if ok:
            th, pn, act = _unpack(x_new, n_theta, len(pins), True)
            try:
                f_new = chart.to_poly(d, th)
                good, why = _accept_checks(f_new, tracker, pn, label_pairs, chart)
            except (NotInClassError, StructureError):
                good = False
            if good:
                new_gap = abs(
                    complex(dr._boundary(f_new, act[0]) - dr._boundary(f_new, act[1]))
                )
                if new_gap <= cur_gap * 1.0000001:
                    accepted = True
        if accepted:
            cur_x = x_new
            cur_gap = new_gap
            f = f_new
            tracker.update(f)
            factor = gap_factor
            state = ContinuationState(
                theta=np.array(th), pinned=list(pn), step_size=factor,
                residual_norm=norm,
                target=PinchTarget(pair=target, status="forming", gap=cur_gap),
            )
        else:
            factor = math.sqrt(factor)
            if 1.0 - factor < 1e-10 and cur_gap > 1e-6 * scale:
                raise ContinuationStall(
                    f"pinch stalled at gap {cur_gap:.3e}", state
                )
        steps += 1

    # landing: append the target as a pinned contact and solve the full system
    th, pn, act = _unpack(cur_x, n_theta, len(pins), True)
    pins_new = pn + [act]

    def landed_residual(x):
        th2, pn2, _ = _unpack(x, n_theta, len(pins_new), False)
        return pinch_residual(chart.to_poly(d, th2), pn2)

    x0 = _pack(th, pins_new)
    x_fin, norm, ok = _least_norm_newton(landed_residual, x0, tol=newton_tol * scale)
    if not ok:
        raise ContinuationStall(f"landing Newton failed (residual {norm:.2e})", state)
    th_fin, pins_fin, _ = _unpack(x_fin, n_theta, len(pins_new), False)
    f_fin = chart.to_poly(d, th_fin)
    good, why = _accept_checks(
        f_fin, tracker, pins_fin, label_pairs + [target], chart
    )
    if not good:
        raise ContinuationStall(f"landing rejected: {why}", state)
    tracker.update(f_fin)
    state = ContinuationState(
        theta=np.array(th_fin), pinned=list(pins_fin), residual_norm=norm,
        target=PinchTarget(pair=target, status="pinched", gap=0.0),
    )
    return f_fin, pins_fin, tracker, state


# ---------------------------------------------------------------------------
# full solves
# ---------------------------------------------------------------------------


def solve_suffridge(
    tree: BiAngledTree,
    cap: int = SOLVER_CAP,
    gap_factor: float = 0.5,
    newton_tol: float = 1e-12,
    verify: bool = True,
) -> ExtPolynomial:
    """Extremal exterior polynomial whose extracted tree is isomorphic to
    the input, built by pinching the hypocycloid pair by pair."""
    d = tree.n + 1
    if d > cap:
        raise StructureError(f"degree {d} exceeds solver cap {cap}")
    theta = np.zeros(d - 2)
    f = params_to_ext(d, theta)
    pairs = [tuple(p) for p in pinching_set(tree).sorted_pairs()]
    tracker = ArcTracker(f)
    pins: List[Tuple[float, float]] = []
    done_pairs: List[Tuple[int, int]] = []
    log: List[ContinuationState] = []
    for pair in pairs:
        f, pins, tracker, state = pinch_step(
            f,
            pair,
            pinned=pins,
            pinned_pairs=done_pairs,
            tracker=tracker,
            chart=EXT_CHART,
            gap_factor=gap_factor,
            newton_tol=newton_tol,
        )
        done_pairs.append(pair)
        log.append(state)
    if verify and d >= 2:
        extracted = dr.extract_biangled_tree(f)
        if not biangled_isomorphic(extracted, tree):
            raise SolveMismatchError(
                "solved polynomial extracts a non-isomorphic tree"
            )
    solve_suffridge.last_log = log
    return f


def _separating_direction(f: BddPolynomial, doubles) -> np.ndarray:
    """Chart direction for the bounded-class perturbation: self-dual r with
    r(z1+) = r(z1-) and Re[(r(zj+) - r(zj-)) / (zj+)^((d+1)/2)] = 0 for the
    remaining contacts; realized as the least-singular direction of the
    stacked real linear system over the chart basis."""
    d = f.d
    n_theta = d - 2
    basis = []
    for i in range(n_theta):
        e = np.zeros(n_theta)
        e[i] = 1.0
        g = params_to_bdd(d, e)
        basis.append(np.concatenate([[0.0], g.a[:-1] - 0.0]))  # a_2..a_{d-1} plus pad
    # doubles sorted by real part of the contact point: x_1 < x_2 < ...
    ds = sorted(doubles, key=lambda dp: dp.point.real)

    def r_eval(coeff_vec, z):
        # coeff_vec holds (pad, a_2, ..., a_{d-1}); evaluate sum a_k z^k
        acc = 0j
        for k in range(d - 1, 1, -1):
            acc = (acc + coeff_vec[k - 1]) * z
        return acc * z

    rows = []
    zp = np.exp(1j * np.array([min(dp.s, dp.t) for dp in ds]))
    zm = np.exp(1j * np.array([max(dp.s, dp.t) for dp in ds]))
    for col in range(n_theta):
        cv = basis[col]
        vals_p = np.array([r_eval(cv, z) for z in zp])
        vals_m = np.array([r_eval(cv, z) for z in zm])
        colvals = []
        # condition (3): keep the leftmost contact intact (complex equality)
        colvals.append((vals_p[0] - vals_m[0]).real)
        colvals.append((vals_p[0] - vals_m[0]).imag)
        # condition (2): separate the others without crossing
        for jj in range(1, len(ds)):
            phase = np.exp(1j * np.angle(zp[jj]) * (d + 1) / 2)
            colvals.append(((vals_p[jj] - vals_m[jj]) / phase).real)
        rows.append(colvals)
    mat = np.array(rows).T  # equations x directions
    _, _, vt = np.linalg.svd(mat)
    return vt[-1]


def solve_suffridge_bounded(
    tree: RootedBinaryTree,
    d: int,
    cap: int = SOLVER_CAP,
    gap_factor: float = 0.5,
    newton_tol: float = 1e-12,
    verify: bool = True,
) -> BddPolynomial:
    """Extremal bounded polynomial realizing a rooted binary tree.

    Starts from the base member P(z; d, 1), splits all but its leftmost
    double point with a small self-dual perturbation, re-pins the survivor,
    then pinch-continues the remaining contacts of the target tree."""
    if tree.n != d - 2:
        raise StructureError(f"tree has {tree.n} vertices, need {d - 2}")
    if d > cap:
        raise StructureError(f"degree {d} exceeds solver cap {cap}")
    if d == 2:
        return BddPolynomial(2, (0.5,))
    f = suffridge_base(d, 1)
    doubles = dr.find_double_points(f)
    scale = f.coeff_scale()

    if len(doubles) > 1:
        direction = _separating_direction(f, doubles)
        ds = sorted(doubles, key=lambda dp: dp.point.real)
        keep = ds[0]
        base_theta = bdd_to_params(f)
        f_split = None
        delta = 1e-2
        while delta > 1e-6 and f_split is None:
            for sign in (1.0, -1.0):
                th = base_theta + sign * delta * direction
                try:
                    g = params_to_bdd(d, th)
                    # re-pin the surviving contact exactly
                    def res(x):
                        th2 = x[:-2]
                        return pinch_residual(
                            params_to_bdd(d, th2), [(x[-2], x[-1])]
                        )

                    x0 = np.concatenate([th, [keep.s, keep.t]])
                    x_fin, norm, ok = _least_norm_newton(
                        res, x0, tol=newton_tol * scale
                    )
                    if not ok:
                        continue
                    g_fin = params_to_bdd(d, x_fin[:-2])
                    dps = dr.find_double_points(g_fin)
                    if len(dps) == 1 and univalence_interior(g_fin):
                        f_split = g_fin
                        pins = [(x_fin[-2], x_fin[-1])]
                        break
                except (NotInClassError, StructureError):
                    continue
            delta *= 0.5
        if f_split is None:
            raise ContinuationStall("no separating perturbation found")
        f = f_split
    else:
        dp = doubles[0]
        pins = [(dp.s, dp.t)]

    # align the walk labeling of the target pairs with the actual droplet:
    # the root pinch joins an arc to itself, anchoring the rotation
    pairs, root_pair = rooted_pinch_pairs(tree, d)
    tracker = ArcTracker(f)
    ca = tracker.sorted_angles()
    cur = dr.find_double_points(f)[0]
    a_j = dr.arc_of_angle(cur.s, ca)
    a_k = dr.arc_of_angle(cur.t, ca)
    if a_j != a_k:
        raise StructureError("base double point does not join an arc to itself")
    n_arcs = d - 1
    shift = (a_j - root_pair[0]) % n_arcs

    def relabel(p):
        return tuple(sorted(((x - 1 + shift) % n_arcs) + 1 for x in p))

    rest = [relabel(p) for p in pairs if p != root_pair]
    done_pairs = [relabel(root_pair)]
    for pair in sorted(rest):
        f, pins, tracker, _ = pinch_step(
            f,
            pair,
            pinned=pins,
            pinned_pairs=done_pairs,
            tracker=tracker,
            chart=BDD_CHART,
            gap_factor=gap_factor,
            newton_tol=newton_tol,
        )
        done_pairs.append(pair)
    if verify:
        extracted = dr.extract_rooted_binary_tree(f)
        if not rooted_binary_isomorphic(extracted, tree):
            raise SolveMismatchError(
                "solved polynomial extracts a non-isomorphic rooted tree"
            )
    return f


# ---------------------------------------------------------------------------
# projection of near-extremal members
# ---------------------------------------------------------------------------


def project_to_extremal(
    f: AnyPolynomial,
    move_cap: float = 1e-2,
    gap_window: float = 1e-2,
    newton_tol: float = 1e-12,
) -> AnyPolynomial:
    """Newton-project a near-extremal member (e.g. printed rounded
    coefficients) back onto the extremal manifold; the coefficient move must
    stay within move_cap."""
    chart = EXT_CHART if isinstance(f, ExtPolynomial) else BDD_CHART
    d = f.d
    crit = critical_points(f)
    doubles = dr.find_double_points(f, crit=crit)
    pins = [(dp.s, dp.t) for dp in doubles]
    if len(pins) < d - 2:
        include_adjacent = isinstance(f, BddPolynomial)
        near = dr.forming_pairs(
            f, crit=crit, window=(1e-14, gap_window), include_adjacent=include_adjacent
        )
        for fp in near:
            if len(pins) == d - 2:
                break
            pins.append((fp.s, fp.t))
    if len(pins) != d - 2:
        raise ContinuationStall(
            f"found {len(pins)} contact candidates, cannot project to extremal"
        )
    theta = chart.to_params(f)
    n_theta = len(theta)
    scale = f.coeff_scale()

    def res(x):
        th, pn, _ = _unpack(x, n_theta, len(pins), False)
        return pinch_residual(chart.to_poly(d, th), pn)

    x0 = _pack(theta, pins)
    x_fin, norm, ok = _least_norm_newton(res, x0, tol=newton_tol * scale)
    if not ok:
        raise ContinuationStall(f"projection Newton failed (residual {norm:.2e})")
    g = chart.to_poly(d, x_fin[:n_theta])
    move = float(np.max(np.abs(g.a - f.a)))
    if move > move_cap:
        raise ContinuationStall(f"projection moved coefficients by {move:.3e}")
    return g
