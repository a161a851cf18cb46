# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: Julia basin classification and batched Newton
inversion of exterior polynomials.  Semantics mirror droplets._kernels_py."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def julia_classify(cnp.complex128_t[::1] q_coeffs,
                   cnp.complex128_t[::1] crits,
                   cnp.complex128_t[::1] z0,
                   int max_iter,
                   double attr_tol,
                   double escape_radius):
    """Iterate p(z) = conj(q(z)) until an attractor or escape is reached.

    q_coeffs are ascending (q = c0 + c1 z + ...).  Returns (cls, iters):
    cls >= 0 is the index of the captured critical point, -2 escape,
    -1 undecided after max_iter.
    """
    cdef Py_ssize_t npts = z0.shape[0]
    cdef Py_ssize_t nc = q_coeffs.shape[0]
    cdef Py_ssize_t nk = crits.shape[0]
    cdef cnp.ndarray[cnp.int32_t, ndim=1] cls = np.full(npts, -1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] iters = np.zeros(npts, dtype=np.int32)
    cdef double tol2 = attr_tol * attr_tol
    cdef double r2 = escape_radius * escape_radius
    cdef double complex z, w, dz
    cdef double best
    cdef Py_ssize_t i, k, it, j
    for i in range(npts):
        z = z0[i]
        for it in range(max_iter):
            if z.real * z.real + z.imag * z.imag > r2:
                cls[i] = -2
                iters[i] = it
                break
            for k in range(nk):
                dz = z - crits[k]
                if dz.real * dz.real + dz.imag * dz.imag < tol2:
                    cls[i] = <int>k
                    iters[i] = it
                    break
            if cls[i] >= 0:
                break
            # Horner, then conjugate
            w = q_coeffs[nc - 1]
            for j in range(nc - 2, -1, -1):
                w = w * z + q_coeffs[j]
            z = w.conjugate()
        else:
            iters[i] = max_iter
    return cls, iters


def newton_invert_ext(cnp.complex128_t[::1] a,
                      cnp.complex128_t[::1] w,
                      cnp.complex128_t[::1] z0,
                      int max_iter,
                      double tol):
    """Solve f(z) = w for f(z) = z + sum a[k-1] z^-k by Newton from z0.

    Returns (z, ok) where ok flags |z| > 1 and a small final residual: the
    exterior-branch inverse used by the Schwarz reflection evaluator.
    """
    cdef Py_ssize_t npts = w.shape[0]
    cdef Py_ssize_t d = a.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(npts, dtype=np.complex128)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] ok = np.zeros(npts, dtype=np.uint8)
    cdef double complex z, inv, powk, f, fp, step
    cdef double tol2 = tol * tol
    cdef double res2
    cdef Py_ssize_t i, k, it
    for i in range(npts):
        z = z0[i]
        res2 = 1e300
        for it in range(max_iter):
            if z == 0:
                break
            inv = 1.0 / z
            powk = inv
            f = z - w[i]
            fp = 1.0
            for k in range(d):
                f = f + a[k] * powk
                fp = fp - (k + 1) * a[k] * powk * inv
                powk = powk * inv
            res2 = f.real * f.real + f.imag * f.imag
            if res2 < tol2:
                break
            if fp == 0:
                break
            step = f / fp
            z = z - step
        out[i] = z
        if res2 < tol2 and z.real * z.real + z.imag * z.imag > 1.0:
            ok[i] = 1
    return out, ok
