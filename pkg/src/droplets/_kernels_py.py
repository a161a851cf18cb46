"""Pure-numpy fallback for the compiled kernels in droplets._speedups.

Vectorized over the point set with live masks; results match the compiled
versions up to floating-point associativity.
"""

import numpy as np


def julia_classify(q_coeffs, crits, z0, max_iter, attr_tol, escape_radius):
    q_coeffs = np.asarray(q_coeffs, dtype=np.complex128)
    crits = np.asarray(crits, dtype=np.complex128)
    z = np.array(z0, dtype=np.complex128)
    n = z.shape[0]
    cls = np.full(n, -1, dtype=np.int32)
    iters = np.full(n, max_iter, dtype=np.int32)
    live = np.ones(n, dtype=bool)
    tol2 = attr_tol * attr_tol
    r2 = escape_radius * escape_radius
    for it in range(max_iter):
        if not live.any():
            break
        zl = z[live]
        esc = (zl.real * zl.real + zl.imag * zl.imag) > r2
        hit = np.full(zl.shape, -1, dtype=np.int32)
        for k, c in enumerate(crits):
            dz = zl - c
            near = (dz.real * dz.real + dz.imag * dz.imag) < tol2
            hit[near & (hit < 0)] = k
        done = esc | (hit >= 0)
        if done.any():
            idx = np.flatnonzero(live)[done]
            cls[idx] = np.where(esc[done], -2, hit[done])
            iters[idx] = it
            keep = ~done
            live[np.flatnonzero(live)[done]] = False
            zl = zl[keep]
        if zl.size:
            w = np.full(zl.shape, q_coeffs[-1])
            for c in q_coeffs[-2::-1]:
                w = w * zl + c
            z[live] = np.conj(w)
    return cls, iters


def newton_invert_ext(a, w, z0, max_iter, tol):
    a = np.asarray(a, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    z = np.array(z0, dtype=np.complex128)
    d = a.shape[0]
    tol2 = tol * tol

    def f_fp(zz):
        inv = np.where(zz != 0, 1.0 / zz, 0.0)
        powk = inv.copy()
        f = zz - w
        fp = np.ones_like(zz)
        for k in range(d):
            f = f + a[k] * powk
            fp = fp - (k + 1) * a[k] * powk * inv
            powk = powk * inv
        return f, fp

    res2 = np.full(w.shape, np.inf)
    for _ in range(max_iter):
        f, fp = f_fp(z)
        res2 = f.real * f.real + f.imag * f.imag
        active = (res2 >= tol2) & (fp != 0) & (z != 0)
        if not active.any():
            break
        z = np.where(active, z - f / fp, z)
    f, _ = f_fp(z)
    res2 = f.real * f.real + f.imag * f.imag
    ok = (res2 < tol2) & ((z.real * z.real + z.imag * z.imag) > 1.0)
    return z, ok.astype(np.uint8)
