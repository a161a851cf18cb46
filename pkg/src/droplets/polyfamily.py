"""The polynomial classes under study: exterior maps z + a_1/z + ... + a_d/z^d
with a_d = -1/d univalent outside the unit disk, and bounded maps
z + a_2 z^2 + ... + a_d z^d with a_d = 1/d univalent inside it.

Both classes force all finite nonzero critical points onto the unit circle
(the product of the critical-point moduli is 1 and univalence keeps them out
of the relevant disk), which makes the derivative self-dual:

    exterior:  f'(1/z) = z^(d+1) conj(f'(conj z))
    bounded :  f' is conjugate-reciprocal in degree d-1

The self-duality pins down the dependent coefficients, leaving a real
(d-2)-dimensional parameter vector for either class; ``params_to_ext`` /
``params_to_bdd`` realize the chart and round-trip exactly.

A pleasant consequence of the roots-on-circle factorization: the conformal
curvature Re(1 + z f''/f') is *constant* on the circle, equal to (1-d)/2
for the exterior class and (d+1)/2 for the bounded one.  (Write
z^(d+1) f' as a product over the circle roots; each factor contributes
Re[z/(z - xi)] = 1/2.)  The constant is still measured, never assumed, by
the droplet verifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

ON_CIRCLE_TOL = 1e-8
CRIT_SEPARATION = 1e-6


class NotInClassError(ValueError):
    """Input violates a class invariant (with a diagnostic message)."""


class SingularityError(ValueError):
    """Evaluation at or too close to a critical point."""


class UnivalenceInconclusive(RuntimeError):
    """Certification undecidable at the working tolerance."""


class ParamError(ValueError):
    """Parameter vector has the wrong shape."""


# ---------------------------------------------------------------------------
# polynomial value types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtPolynomial:
    """f(z) = z + a_1/z + ... + a_d/z^d with a_d = -1/d."""

    d: int
    coeffs: tuple  # (a_1, ..., a_d)

    def __post_init__(self):
        if self.d < 2:
            raise NotInClassError("need d >= 2")
        c = tuple(complex(a) for a in self.coeffs)
        if len(c) != self.d:
            raise NotInClassError(f"expected {self.d} coefficients")
        if abs(c[-1] + 1.0 / self.d) > 1e-12:
            raise NotInClassError(f"a_d must be -1/d, got {c[-1]}")
        c = c[:-1] + (-1.0 / self.d,)
        object.__setattr__(self, "coeffs", c)

    @property
    def a(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        inv = 1.0 / z
        acc = np.zeros_like(z)
        for ak in self.coeffs[::-1]:
            acc = (acc + ak) * inv
        return z + acc

    def deriv(self, z):
        z = np.asarray(z, dtype=complex)
        inv = 1.0 / z
        acc = np.zeros_like(z)
        for k in range(self.d, 0, -1):
            acc = (acc - k * self.coeffs[k - 1]) * inv
        return 1.0 + acc * inv

    def second_deriv(self, z):
        z = np.asarray(z, dtype=complex)
        inv = 1.0 / z
        acc = np.zeros_like(z)
        for k in range(self.d, 0, -1):
            acc = (acc + k * (k + 1) * self.coeffs[k - 1]) * inv
        return acc * inv * inv

    def crit_poly(self) -> np.ndarray:
        """Coefficients (descending) of z^(d+1) f'(z), a monic degree-(d+1)
        polynomial whose roots are the nonzero critical points."""
        p = np.zeros(self.d + 2, dtype=complex)
        p[0] = 1.0
        for k in range(1, self.d + 1):
            p[k + 1] = -k * self.coeffs[k - 1]
        return p

    def rotated(self, i: int) -> "ExtPolynomial":
        """Conjugation by multiplication with omega^i, omega = exp(2pi i/(d+1))."""
        w = np.exp(2j * np.pi * i / (self.d + 1))
        new = [self.coeffs[k - 1] * w ** (k + 1) for k in range(1, self.d + 1)]
        new[-1] = -1.0 / self.d
        return ExtPolynomial(self.d, tuple(new))

    def coeff_scale(self) -> float:
        return 1.0 + float(np.max(np.abs(self.a)))


@dataclass(frozen=True)
class BddPolynomial:
    """f(z) = z + a_2 z^2 + ... + a_d z^d with a_d = 1/d."""

    d: int
    coeffs: tuple  # (a_2, ..., a_d)

    def __post_init__(self):
        if self.d < 2:
            raise NotInClassError("need d >= 2")
        c = tuple(complex(a) for a in self.coeffs)
        if len(c) != self.d - 1:
            raise NotInClassError(f"expected {self.d - 1} coefficients")
        if abs(c[-1] - 1.0 / self.d) > 1e-12:
            raise NotInClassError(f"a_d must be 1/d, got {c[-1]}")
        c = c[:-1] + (1.0 / self.d,)
        object.__setattr__(self, "coeffs", c)

    @property
    def a(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for ak in self.coeffs[::-1]:
            acc = (acc + ak) * z
        return z + acc * z

    def deriv(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for k in range(self.d, 1, -1):
            acc = acc * z + k * self.coeffs[k - 2]
        return 1.0 + acc * z

    def second_deriv(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for k in range(self.d, 1, -1):
            acc = acc * z + k * (k - 1) * self.coeffs[k - 2]
        return acc

    def crit_poly(self) -> np.ndarray:
        """Coefficients (descending) of f'(z), degree d-1."""
        p = np.empty(self.d, dtype=complex)
        for k in range(self.d, 1, -1):
            p[self.d - k] = k * self.coeffs[k - 2]
        p[-1] = 1.0
        return p

    def rotated(self, i: int) -> "BddPolynomial":
        """Conjugation by a (d-1)-st root of unity rotation."""
        w = np.exp(2j * np.pi * i / (self.d - 1))
        new = [self.coeffs[k - 2] * w ** (k - 1) for k in range(2, self.d + 1)]
        new[-1] = 1.0 / self.d
        return BddPolynomial(self.d, tuple(new))

    def coeff_scale(self) -> float:
        return 1.0 + float(np.max(np.abs(self.a)))


AnyPolynomial = Union[ExtPolynomial, BddPolynomial]


@dataclass(frozen=True)
class ParamVector:
    """Real chart of the exterior class: length d-2."""

    d: int
    theta: tuple

    def __post_init__(self):
        th = tuple(float(x) for x in self.theta)
        if len(th) != self.d - 2:
            raise ParamError(f"theta must have length {self.d - 2}")
        object.__setattr__(self, "theta", th)


@dataclass(frozen=True)
class CriticalData:
    """Unit-modulus critical points sorted ccw from arg in [0, 2pi)."""

    points: tuple
    values: tuple

    @property
    def angles(self) -> np.ndarray:
        return np.angle(np.array(self.points)) % (2 * np.pi)

    def __len__(self):
        return len(self.points)


# ---------------------------------------------------------------------------
# parameter charts
# ---------------------------------------------------------------------------


def params_to_ext(d: int, theta) -> ExtPolynomial:
    """Assemble the exterior map from its free real parameters.

    Odd d = 2n+1: a_1..a_{n-1} complex, a_n real, then
    a_k = ((2n-k)/k) conj(a_{2n-k}) for n < k < 2n, a_{2n} = 0.
    Even d = 2n: a_1..a_{n-1} complex, then
    a_k = ((2n-1-k)/k) conj(a_{2n-1-k}) for n <= k <= 2n-2, a_{2n-1} = 0.
    """
    if isinstance(theta, ParamVector):
        if theta.d != d:
            raise ParamError("ParamVector degree mismatch")
        th = np.array(theta.theta, dtype=float)
    else:
        th = np.array(theta, dtype=float)
    if th.shape != (d - 2,):
        raise ParamError(f"theta must have length {d - 2}")
    a = np.zeros(d + 1, dtype=complex)  # 1-indexed
    if d % 2 == 1:
        n = (d - 1) // 2
        for j in range(1, n):
            a[j] = th[2 * (j - 1)] + 1j * th[2 * (j - 1) + 1]
        if n >= 1:
            a[n] = th[2 * (n - 1)] if d > 2 else 0.0
        for k in range(n + 1, 2 * n):
            a[k] = ((2 * n - k) / k) * np.conj(a[2 * n - k])
        # a_{2n} = 0 already
    else:
        n = d // 2
        for j in range(1, n):
            a[j] = th[2 * (j - 1)] + 1j * th[2 * (j - 1) + 1]
        for k in range(n, 2 * n - 1):
            a[k] = ((2 * n - 1 - k) / k) * np.conj(a[2 * n - 1 - k])
        # a_{2n-1} = 0 already
    a[d] = -1.0 / d
    return ExtPolynomial(d, tuple(a[1:]))


def ext_to_params(f: ExtPolynomial) -> ParamVector:
    d = f.d
    a = np.concatenate([[0], f.a])  # 1-indexed
    th = []
    if d % 2 == 1:
        n = (d - 1) // 2
        for j in range(1, n):
            th += [a[j].real, a[j].imag]
        if n >= 1 and d > 2:
            th.append(a[n].real)
    else:
        n = d // 2
        for j in range(1, n):
            th += [a[j].real, a[j].imag]
    return ParamVector(d, tuple(th))


def params_to_bdd(d: int, theta) -> BddPolynomial:
    """Bounded-class chart: k a_k = (d+1-k) conj(a_{d+1-k}), a_d = 1/d.

    Free coefficients: a_k complex for 2 <= k < (d+1)/2, plus a real
    a_{(d+1)/2} when d is odd.
    """
    th = np.array(theta, dtype=float)
    if th.shape != (d - 2,):
        raise ParamError(f"theta must have length {d - 2}")
    a = np.zeros(d + 1, dtype=complex)  # 1-indexed; a_1 = 1 implicit
    pos = 0
    half = (d + 1) / 2
    for k in range(2, d):
        if k < half:
            a[k] = th[pos] + 1j * th[pos + 1]
            pos += 2
        elif k == half:
            a[k] = th[pos]
            pos += 1
    for k in range(2, d):
        if k > half:
            a[k] = ((d + 1 - k) / k) * np.conj(a[d + 1 - k])
    a[d] = 1.0 / d
    return BddPolynomial(d, tuple(a[2:]))


def bdd_to_params(f: BddPolynomial) -> np.ndarray:
    d = f.d
    a = np.concatenate([[0, 0], f.a])  # 1-indexed via padding
    th = []
    half = (d + 1) / 2
    for k in range(2, d):
        if k < half:
            th += [a[k].real, a[k].imag]
        elif k == half:
            th.append(a[k].real)
    return np.array(th, dtype=float)


# ---------------------------------------------------------------------------
# critical points
# ---------------------------------------------------------------------------


def critical_points(
    f: AnyPolynomial, on_circle_tol: float = ON_CIRCLE_TOL, polish_steps: int = 3
) -> CriticalData:
    """Roots of z^(d+1) f' (exterior) or f' (bounded): companion-matrix
    eigenvalues polished by Newton, validated to lie on the unit circle."""
    p = f.crit_poly()
    roots = np.roots(p)
    dp = np.polyder(p)
    for _ in range(polish_steps):
        val = np.polyval(p, roots)
        der = np.polyval(dp, roots)
        step = np.where(der != 0, val / der, 0.0)
        roots = roots - step
    off = np.abs(np.abs(roots) - 1.0)
    worst = float(off.max())
    if worst > on_circle_tol:
        raise NotInClassError(
            f"critical point off the unit circle: distance {worst:.3e}"
        )
    order = np.argsort(np.angle(roots) % (2 * np.pi))
    roots = roots[order]
    if len(roots) > 1:
        gaps = np.abs(np.diff(np.concatenate([roots, roots[:1]])))
        if float(gaps.min()) < CRIT_SEPARATION:
            raise NotInClassError(
                f"critical points nearly collide: separation {gaps.min():.3e}"
            )
    values = f(roots)
    return CriticalData(points=tuple(roots), values=tuple(values))


def conformal_curvature(f: AnyPolynomial, angle: float, guard: float = 1e-6) -> float:
    """Re(1 + xi f''/f') at xi = e^(i angle): curvature times |f'|."""
    xi = np.exp(1j * float(angle))
    fp = complex(f.deriv(xi))
    if abs(fp) < guard * f.coeff_scale():
        raise SingularityError(f"|f'| = {abs(fp):.3e} at angle {angle}: cusp")
    return float((1.0 + xi * complex(f.second_deriv(xi)) / fp).real)


def curvature_constant(f: AnyPolynomial, n_samples: int = 1024) -> tuple:
    """(mean, std) of the conformal curvature over non-critical samples."""
    crit = critical_points(f)
    angles = np.linspace(0, 2 * np.pi, n_samples, endpoint=False)
    keep = np.ones(n_samples, dtype=bool)
    for t in crit.angles:
        keep &= np.abs(np.angle(np.exp(1j * (angles - t)))) > 1e-2
    xi = np.exp(1j * angles[keep])
    u = 1.0 + xi * f.second_deriv(xi) / f.deriv(xi)
    return float(u.real.mean()), float(u.real.std())


# ---------------------------------------------------------------------------
# explicit bounded base family
# ---------------------------------------------------------------------------


def suffridge_base(d: int, j: int) -> BddPolynomial:
    """The classical bounded extremal family P(z; d, j) with coefficients
    A_{k,j} = ((d-k+1)/d) sin(k j pi/(d+1)) / sin(j pi/(d+1)).

    A_{d,j} = (-1)^(j+1)/d, so for even j the raw polynomial carries
    a_d = -1/d; it is returned as the rotation-conjugate representative
    with the class normalization a_d = +1/d.
    """
    if not 1 <= j <= d:
        raise ValueError("need 1 <= j <= d")
    s = np.sin(j * np.pi / (d + 1))
    coeffs = [
        ((d - k + 1) / d) * np.sin(k * j * np.pi / (d + 1)) / s
        for k in range(2, d + 1)
    ]
    coeffs = [complex(c) for c in coeffs]
    if j % 2 == 0:
        lam = np.exp(1j * np.pi / (d - 1))
        coeffs = [c * lam ** (k - 1) for k, c in zip(range(2, d + 1), coeffs)]
    coeffs[-1] = 1.0 / d  # exact value, (-1)^(j+1)/d rotated onto +1/d
    return BddPolynomial(d, tuple(coeffs))


# ---------------------------------------------------------------------------
# univalence certification
# ---------------------------------------------------------------------------


def _curve_self_intersections(f: AnyPolynomial, radius: float, n_samples: int = 4096):
    """Transversal self-intersections of f on |z| = radius, by sampling,
    KD-tree candidate pairing and plain 2-variable Newton (regular at
    transversal crossings).  Returns a list of ((s, t), point) witnesses."""
    from scipy.spatial import cKDTree

    ts = np.linspace(0, 2 * np.pi, n_samples, endpoint=False)
    pts = f(radius * np.exp(1j * ts))
    xy = np.column_stack([pts.real, pts.imag])
    step = np.abs(np.diff(pts, append=pts[:1]))
    capture = 3.0 * float(step.max())
    tree = cKDTree(xy)
    pairs = tree.query_pairs(r=capture, output_type="ndarray")
    if len(pairs) == 0:
        return []
    dt = np.abs(ts[pairs[:, 0]] - ts[pairs[:, 1]])
    dt = np.minimum(dt, 2 * np.pi - dt)
    pairs = pairs[dt > 0.15]
    if len(pairs) == 0:
        return []
    # one Newton start per candidate cluster: bin by sample-index blocks and
    # keep the closest pair in each bin (near-tangential branches otherwise
    # flood the polish loop with thousands of equivalent candidates)
    block = max(8, n_samples // 256)
    dist = np.abs(pts[pairs[:, 0]] - pts[pairs[:, 1]])
    order = np.argsort(dist)
    seen_bins = set()
    reps = []
    for idx in order:
        key = (pairs[idx, 0] // block, pairs[idx, 1] // block)
        if key in seen_bins:
            continue
        seen_bins.add(key)
        reps.append(pairs[idx])
    found = []
    for i, j in reps:
        s, t = ts[i], ts[j]
        ok = True
        for _ in range(40):
            zs = radius * np.exp(1j * s)
            zt = radius * np.exp(1j * t)
            g = complex(f(zs) - f(zt))
            if abs(g) < 1e-13 * f.coeff_scale():
                break
            js = complex(1j * zs * f.deriv(zs))
            jt = complex(-1j * zt * f.deriv(zt))
            jac = np.array([[js.real, jt.real], [js.imag, jt.imag]])
            try:
                upd = np.linalg.solve(jac, np.array([g.real, g.imag]))
            except np.linalg.LinAlgError:
                ok = False
                break
            s, t = s - upd[0], t - upd[1]
            if not (np.isfinite(s) and np.isfinite(t)):
                ok = False
                break
        else:
            ok = False
        if not ok:
            continue
        ds = abs((s - t) % (2 * np.pi))
        ds = min(ds, 2 * np.pi - ds)
        if ds < 1e-4:
            continue
        zs = radius * np.exp(1j * s)
        g = complex(f(zs) - f(radius * np.exp(1j * t)))
        if abs(g) < 1e-11 * f.coeff_scale():
            if not any(
                min(abs(s - s0), abs(t - s0)) + min(abs(t - t0), abs(s - t0)) < 1e-6
                for (s0, t0), _ in found
            ):
                found.append(((s % (2 * np.pi), t % (2 * np.pi)), complex(f(zs))))
    return found


def univalence_exterior(f: ExtPolynomial, eps: float = 1e-3, witness: bool = False):
    """Certify injectivity of f on {|z| >= 1 + eps}.

    Checks that no critical point lies outside the unit circle and that the
    image of |z| = 1 + eps is a Jordan curve (no polished self-crossing).
    Returns bool, or (bool, witness_pair) with witness=True.
    """
    roots = np.roots(f.crit_poly())
    excess = float(np.max(np.abs(roots)) - 1.0)
    if excess > eps:
        c = roots[np.argmax(np.abs(roots))]
        w = _local_noninjectivity_witness(f, c)
        return (False, w) if witness else False
    if excess > 10 * ON_CIRCLE_TOL:
        raise UnivalenceInconclusive(
            f"critical point {excess:.2e} outside the circle: between tolerances"
        )
    crossings = _curve_self_intersections(f, 1.0 + eps)
    if crossings:
        (s, t), _ = crossings[0]
        pair = ((1 + eps) * np.exp(1j * s), (1 + eps) * np.exp(1j * t))
        return (False, pair) if witness else False
    return (True, None) if witness else True


def univalence_interior(f: BddPolynomial, eps: float = 1e-3, witness: bool = False):
    """Bounded-class analog: injectivity on {|z| <= 1 - eps}."""
    roots = np.roots(f.crit_poly())
    deficit = float(1.0 - np.min(np.abs(roots)))
    if deficit > eps:
        c = roots[np.argmin(np.abs(roots))]
        w = _local_noninjectivity_witness(f, c)
        return (False, w) if witness else False
    if deficit > 10 * ON_CIRCLE_TOL:
        raise UnivalenceInconclusive(
            f"critical point {deficit:.2e} inside the circle: between tolerances"
        )
    crossings = _curve_self_intersections(f, 1.0 - eps)
    if crossings:
        (s, t), _ = crossings[0]
        pair = ((1 - eps) * np.exp(1j * s), (1 - eps) * np.exp(1j * t))
        return (False, pair) if witness else False
    return (True, None) if witness else True


def _local_noninjectivity_witness(f: AnyPolynomial, c: complex):
    """Two nearby points with equal value around a simple critical point."""
    h = 1e-3 * (1.0 + abs(c))
    z1 = c + h
    target = complex(f(z1))
    z2 = c - h
    for _ in range(60):
        val = complex(f(z2)) - target
        if abs(val) < 1e-13 * f.coeff_scale():
            break
        der = complex(f.deriv(z2))
        if der == 0:
            break
        z2 = z2 - val / der
    return (z1, z2)


# ---------------------------------------------------------------------------
# rotation canonicalization
# ---------------------------------------------------------------------------


def _lex_key(coeffs) -> tuple:
    out = []
    for c in coeffs:
        out.append(round(c.real, 9))
        out.append(round(c.imag, 9))
    return tuple(out)


def canonical_rotation(f: AnyPolynomial) -> AnyPolynomial:
    """Representative of the rotation-conjugation orbit with lexicographically
    least rounded coefficient vector; idempotent."""
    order = f.d + 1 if isinstance(f, ExtPolynomial) else f.d - 1
    best = None
    best_key = None
    for i in range(order):
        g = f.rotated(i)
        key = _lex_key(g.coeffs)
        if best_key is None or key < best_key:
            best, best_key = g, key
    return best


def orbit_distance(f: AnyPolynomial, g: AnyPolynomial) -> float:
    """Min over rotations of the coefficient distance |f - rot(g)|_inf."""
    if f.d != g.d or type(f) is not type(g):
        return float("inf")
    order = f.d + 1 if isinstance(f, ExtPolynomial) else f.d - 1
    fa = f.a
    return min(
        float(np.max(np.abs(fa - g.rotated(i).a))) for i in range(order)
    )
