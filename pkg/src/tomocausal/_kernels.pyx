# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Same algorithms, same operation order as ``_pykernels``.
"""
import numpy as np

from libc.math cimport sin, cos, log, sqrt, INFINITY

from tomocausal._pykernels import ConvergenceError

cdef double _LN2 = log(2.0)


def jacobi_eigh(a, double tol=1e-14, int max_sweeps=100):
    cdef double complex[:, ::1] A = np.array(a, dtype=np.complex128, order="C")
    cdef Py_ssize_t n = A.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] V = v_arr
    cdef Py_ssize_t i, j, k, p, q
    cdef double scale = 0.0, off, r, app, aqq, tau, t, c, s
    cdef double complex z, ph, akp, akq, nkp, nkq, vkp, vkq
    cdef int sweeps = 0

    for i in range(n):
        for j in range(n):
            scale += A[i, j].real * A[i, j].real + A[i, j].imag * A[i, j].imag
    scale = sqrt(scale)
    if scale < 1.0:
        scale = 1.0

    while True:
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += A[i, j].real * A[i, j].real + A[i, j].imag * A[i, j].imag
        if sqrt(off) <= tol * scale:
            break
        if sweeps >= max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = A[p, q]
                r = sqrt(z.real * z.real + z.imag * z.imag)
                if r == 0.0:
                    continue
                ph = z.real / r - 1j * (z.imag / r)
                app = A[p, p].real
                aqq = A[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = A[k, p]
                    akq = A[k, q]
                    nkp = c * akp - s * ph * akq
                    nkq = s * akp + c * ph * akq
                    A[k, p] = nkp
                    A[k, q] = nkq
                    A[p, k] = nkp.conjugate()
                    A[q, k] = nkq.conjugate()
                A[p, p] = app - t * r
                A[q, q] = aqq + t * r
                A[p, q] = 0.0
                A[q, p] = 0.0
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * ph * vkq
                    V[k, q] = s * vkp + c * ph * vkq

    w = np.empty(n)
    for i in range(n):
        w[i] = A[i, i].real
    return w, v_arr, sweeps


cdef inline double _plogp(double p) noexcept nogil:
    if p <= 0.0:
        return 0.0
    return -p * log(p) / _LN2


cdef double _mi(const double* coef, double ta, double pa, double tb, double pb,
                double* h_a_out, double* h_b_out) noexcept nogil:
    cdef double sa = sin(ta)
    cdef double na0 = sa * cos(pa)
    cdef double na1 = sa * sin(pa)
    cdef double na2 = cos(ta)
    cdef double sb = sin(tb)
    cdef double nb0 = sb * cos(pb)
    cdef double nb1 = sb * sin(pb)
    cdef double nb2 = cos(tb)
    cdef double ea = na0 * coef[0] + na1 * coef[1] + na2 * coef[2]
    cdef double eb = nb0 * coef[3] + nb1 * coef[4] + nb2 * coef[5]
    cdef double cb0 = coef[6] * nb0 + coef[7] * nb1 + coef[8] * nb2
    cdef double cb1 = coef[9] * nb0 + coef[10] * nb1 + coef[11] * nb2
    cdef double cb2 = coef[12] * nb0 + coef[13] * nb1 + coef[14] * nb2
    cdef double eab = na0 * cb0 + na1 * cb1 + na2 * cb2
    cdef double h_a = _plogp(0.5 * (1.0 + ea)) + _plogp(0.5 * (1.0 - ea))
    cdef double h_b = _plogp(0.5 * (1.0 + eb)) + _plogp(0.5 * (1.0 - eb))
    cdef double h_ab = (
        _plogp(0.25 * (1.0 + ea + eb + eab))
        + _plogp(0.25 * (1.0 + ea - eb - eab))
        + _plogp(0.25 * (1.0 - ea + eb - eab))
        + _plogp(0.25 * (1.0 - ea - eb + eab))
    )
    h_a_out[0] = h_a
    h_b_out[0] = h_b
    return h_a + h_b - h_ab


cdef inline double _neg_mi(const double* coef, const double* x) noexcept nogil:
    cdef double ha, hb
    return -_mi(coef, x[0], x[1], x[2], x[3], &ha, &hb)


def mutual_information(coef, double ta, double pa, double tb, double pb):
    cdef double[::1] cf = np.ascontiguousarray(coef, dtype=np.float64)
    cdef double ha, hb, j
    j = _mi(&cf[0], ta, pa, tb, pb, &ha, &hb)
    return j, ha, hb


cdef void _sort_simplex(double[5][4] xs, double* fs) noexcept nogil:
    cdef int i, j, k
    cdef double fi
    cdef double xi[4]
    for i in range(1, 5):
        fi = fs[i]
        for k in range(4):
            xi[k] = xs[i][k]
        j = i - 1
        while j >= 0 and fs[j] > fi:
            fs[j + 1] = fs[j]
            for k in range(4):
                xs[j + 1][k] = xs[j][k]
            j -= 1
        fs[j + 1] = fi
        for k in range(4):
            xs[j + 1][k] = xi[k]


cdef void _build_simplex(const double* coef, double* x0, double step,
                         double[5][4] xs, double* fs) noexcept nogil:
    cdef int i, k
    cdef double base[4]
    for k in range(4):
        base[k] = x0[k]
    for i in range(5):
        for k in range(4):
            xs[i][k] = base[k]
        if i > 0:
            xs[i][i - 1] += step
        fs[i] = _neg_mi(coef, xs[i])


def nelder_mead_max(coef, x0, double step=0.3, double ftol=1e-10,
                    int max_iter=2000, int max_restarts=3):
    cdef double[::1] cf = np.ascontiguousarray(coef, dtype=np.float64)
    cdef double[::1] start = np.ascontiguousarray(x0, dtype=np.float64)
    cdef double xs[5][4]
    cdef double fs[5]
    cdef double c[4]
    cdef double xr[4]
    cdef double xe[4]
    cdef double xc[4]
    cdef double fr, fe, fc
    cdef double restart_best = INFINITY
    cdef int i, k, n = 4
    cdef long nfev = 5
    cdef int iters = 0, restarts = 0
    cdef bint converged = False
    cdef const double* cp = &cf[0]

    with nogil:
        _build_simplex(cp, &start[0], step, xs, fs)
        while True:
            _sort_simplex(xs, fs)
            if fs[n] - fs[0] <= ftol:
                if restarts > 0 and restart_best - fs[0] <= ftol:
                    converged = True
                    break
                if restarts >= max_restarts:
                    converged = True
                    break
                restart_best = fs[0]
                restarts += 1
                _build_simplex(cp, xs[0], step, xs, fs)
                nfev += 5
                continue
            if iters >= max_iter:
                break
            iters += 1

            for k in range(n):
                c[k] = 0.0
            for i in range(n):
                for k in range(n):
                    c[k] += xs[i][k]
            for k in range(n):
                c[k] /= n
            for k in range(n):
                xr[k] = c[k] + (c[k] - xs[n][k])
            fr = _neg_mi(cp, xr)
            nfev += 1
            if fr < fs[0]:
                for k in range(n):
                    xe[k] = c[k] + 2.0 * (c[k] - xs[n][k])
                fe = _neg_mi(cp, xe)
                nfev += 1
                if fe < fr:
                    for k in range(n):
                        xs[n][k] = xe[k]
                    fs[n] = fe
                else:
                    for k in range(n):
                        xs[n][k] = xr[k]
                    fs[n] = fr
                continue
            if fr < fs[n - 1]:
                for k in range(n):
                    xs[n][k] = xr[k]
                fs[n] = fr
                continue
            if fr < fs[n]:
                for k in range(n):
                    xc[k] = c[k] + 0.5 * (xr[k] - c[k])
                fc = _neg_mi(cp, xc)
                nfev += 1
                if fc <= fr:
                    for k in range(n):
                        xs[n][k] = xc[k]
                    fs[n] = fc
                    continue
            else:
                for k in range(n):
                    xc[k] = c[k] + 0.5 * (xs[n][k] - c[k])
                fc = _neg_mi(cp, xc)
                nfev += 1
                if fc < fs[n]:
                    for k in range(n):
                        xs[n][k] = xc[k]
                    fs[n] = fc
                    continue
            for i in range(1, n + 1):
                for k in range(n):
                    xs[i][k] = xs[0][k] + 0.5 * (xs[i][k] - xs[0][k])
                fs[i] = _neg_mi(cp, xs[i])
                nfev += 1

    best = np.array([xs[0][0], xs[0][1], xs[0][2], xs[0][3]])
    return best, -fs[0], iters, nfev, bool(converged)
