# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend: disk lattice sums with Neumaier-compensated
accumulation, and the Laurent-series/duplication evaluator."""

from libc.math cimport fabs, pow

import numpy as np

BACKEND_NAME = "ext"

ctypedef double complex cplx


cdef inline cplx _mk(double re, double im) nogil:
    return re + im * 1j


cdef inline double _nadd(double s, double *comp, double x) nogil:
    # Neumaier: the compensation picks up whichever operand's low bits were lost
    cdef double t = s + x
    if fabs(s) >= fabs(x):
        comp[0] += (s - t) + x
    else:
        comp[0] += (x - t) + s
    return t


def eisenstein_sums(const cplx[::1] w_half):
    """Full-lattice (sum w^-4, sum w^-6); each half-point counts twice."""
    cdef Py_ssize_t i, n = w_half.shape[0]
    cdef double s4r = 0, s4i = 0, c4r = 0, c4i = 0
    cdef double s6r = 0, s6i = 0, c6r = 0, c6i = 0
    cdef cplx inv2, inv4, inv6
    for i in range(n):
        inv2 = 1.0 / (w_half[i] * w_half[i])
        inv4 = inv2 * inv2
        inv6 = inv4 * inv2
        s4r = _nadd(s4r, &c4r, inv4.real)
        s4i = _nadd(s4i, &c4i, inv4.imag)
        s6r = _nadd(s6r, &c6r, inv6.real)
        s6i = _nadd(s6i, &c6i, inv6.imag)
    cdef cplx s4 = 2.0 * _mk(s4r + c4r, s4i + c4i)
    cdef cplx s6 = 2.0 * _mk(s6r + c6r, s6i + c6i)
    return complex(s4), complex(s6)


cdef void _wp_both(cplx z, const cplx[::1] w_half, cplx *p_out, cplx *pp_out) nogil:
    cdef Py_ssize_t i, n = w_half.shape[0]
    cdef double pr = 0, pi = 0, cpr = 0, cpi = 0
    cdef double qr = 0, qi = 0, cqr = 0, cqi = 0
    cdef cplx w, a, b, c, a2, b2, tp, tq
    for i in range(n):
        w = w_half[i]
        a = 1.0 / (z - w)
        b = 1.0 / (z + w)
        c = 1.0 / w
        a2 = a * a
        b2 = b * b
        tp = a2 + b2 - 2.0 * (c * c)
        tq = a2 * a + b2 * b
        pr = _nadd(pr, &cpr, tp.real)
        pi = _nadd(pi, &cpi, tp.imag)
        qr = _nadd(qr, &cqr, tq.real)
        qi = _nadd(qi, &cqi, tq.imag)
    p_out[0] = 1.0 / (z * z) + _mk(pr + cpr, pi + cpi)
    pp_out[0] = -2.0 / (z * z * z) - 2.0 * _mk(qr + cqr, qi + cqi)


def wp_direct(cplx z, const cplx[::1] w_half):
    cdef cplx p, pp
    _wp_both(z, w_half, &p, &pp)
    return complex(p)


def wp_prime_direct(cplx z, const cplx[::1] w_half):
    cdef cplx p, pp
    _wp_both(z, w_half, &p, &pp)
    return complex(pp)


def wp_both_direct(cplx z, const cplx[::1] w_half):
    cdef cplx p, pp
    _wp_both(z, w_half, &p, &pp)
    return complex(p), complex(pp)


def wp_both_direct_batch(zs, const cplx[::1] w_half):
    zs_arr = np.ascontiguousarray(np.asarray(zs, dtype=np.complex128).ravel())
    p_arr = np.empty(zs_arr.shape[0], dtype=np.complex128)
    pp_arr = np.empty(zs_arr.shape[0], dtype=np.complex128)
    cdef const cplx[::1] zv = zs_arr
    cdef cplx[::1] pv = p_arr
    cdef cplx[::1] qv = pp_arr
    cdef Py_ssize_t i, m = zv.shape[0]
    cdef cplx p, pp
    with nogil:
        for i in range(m):
            _wp_both(zv[i], w_half, &p, &pp)
            pv[i] = p
            qv[i] = pp
    shape = np.asarray(zs, dtype=np.complex128).shape
    return p_arr.reshape(shape), pp_arr.reshape(shape)


def wp_fast_batch(zs, int ndup, cplx g2, coeffs):
    """Laurent series at z/2^ndup, then ndup duplication steps per point."""
    zs_arr = np.ascontiguousarray(np.asarray(zs, dtype=np.complex128).ravel())
    co_arr = np.ascontiguousarray(np.asarray(coeffs, dtype=np.complex128))
    p_arr = np.empty(zs_arr.shape[0], dtype=np.complex128)
    pp_arr = np.empty(zs_arr.shape[0], dtype=np.complex128)
    cdef const cplx[::1] zv = zs_arr
    cdef const cplx[::1] cv = co_arr
    cdef cplx[::1] pv = p_arr
    cdef cplx[::1] qv = pp_arr
    cdef Py_ssize_t i, m = zv.shape[0]
    cdef int k, j, nco = <int>cv.shape[0]
    cdef double scale = pow(2.0, -<double>ndup)
    cdef cplx z, u, accp, accq, p, q, A, q2, pn, qn, c, half_g2 = 0.5 * g2
    with nogil:
        for i in range(m):
            z = zv[i] * scale
            u = z * z
            accp = 0
            accq = 0
            for k in range(nco - 1, -1, -1):
                c = cv[k]
                accp = accp * u + c
                accq = accq * u + (2.0 * (k + 1)) * c
            p = 1.0 / u + u * accp
            q = -2.0 / (u * z) + z * accq
            for j in range(ndup):
                A = 6.0 * p * p - half_g2
                q2 = q * q
                pn = (A * A) / (4.0 * q2) - 2.0 * p
                qn = A * (12.0 * p * q2 - A * A) / (4.0 * q2 * q) - q
                p = pn
                q = qn
            pv[i] = p
            qv[i] = q
    shape = np.asarray(zs, dtype=np.complex128).shape
    return p_arr.reshape(shape), pp_arr.reshape(shape)
