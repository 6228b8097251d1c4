"""Pure-Python implementations of the numerical kernels.

These mirror ``_kernels.pyx`` operation for operation and are used when the
compiled extension is unavailable (or when ``TOMOCAUSAL_PURE_PYTHON=1``).
"""
from __future__ import annotations

import math

import numpy as np

_LN2 = math.log(2.0)


class ConvergenceError(ArithmeticError):
    """Raised when the Jacobi sweep limit is hit before convergence."""


def jacobi_eigh(a, tol=1e-14, max_sweeps=100):
    """Cyclic complex Jacobi diagonalisation of a Hermitian matrix.

    Returns ``(w, v, sweeps)`` with unsorted eigenvalues ``w`` and the unitary
    ``v`` whose columns are the matching eigenvectors.
    """
    m = np.array(a, dtype=complex)
    n = m.shape[0]
    A = [[complex(m[i, j]) for j in range(n)] for i in range(n)]
    V = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]

    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += A[i][j].real ** 2 + A[i][j].imag ** 2
    scale = max(1.0, math.sqrt(scale))

    sweeps = 0
    while True:
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += A[i][j].real ** 2 + A[i][j].imag ** 2
        if math.sqrt(off) <= tol * scale:
            break
        if sweeps >= max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = A[p][q]
                r = math.sqrt(z.real * z.real + z.imag * z.imag)
                if r == 0.0:
                    continue
                # e^{-i arg z}
                ph = complex(z.real / r, -z.imag / r)
                app = A[p][p].real
                aqq = A[q][q].real
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = A[k][p]
                    akq = A[k][q]
                    nkp = c * akp - s * ph * akq
                    nkq = s * akp + c * ph * akq
                    A[k][p] = nkp
                    A[k][q] = nkq
                    A[p][k] = nkp.conjugate()
                    A[q][k] = nkq.conjugate()
                A[p][p] = complex(app - t * r, 0.0)
                A[q][q] = complex(aqq + t * r, 0.0)
                A[p][q] = 0j
                A[q][p] = 0j
                for k in range(n):
                    vkp = V[k][p]
                    vkq = V[k][q]
                    V[k][p] = c * vkp - s * ph * vkq
                    V[k][q] = s * vkp + c * ph * vkq

    w = np.array([A[i][i].real for i in range(n)])
    v = np.array(V, dtype=complex)
    return w, v, sweeps


def _plogp(p):
    if p <= 0.0:
        return 0.0
    return -p * math.log(p) / _LN2


def mutual_information(coef, ta, pa, tb, pb):
    """Classical mutual information of the tomogram for axes (ta, pa), (tb, pb).

    ``coef`` packs the local Bloch vectors and the correlation matrix as
    ``[a_x, a_y, a_z, b_x, b_y, b_z, C_xx, C_xy, ..., C_zz]``.
    Returns ``(J, H_A, H_B)`` in bits.
    """
    sa = math.sin(ta)
    na0 = sa * math.cos(pa)
    na1 = sa * math.sin(pa)
    na2 = math.cos(ta)
    sb = math.sin(tb)
    nb0 = sb * math.cos(pb)
    nb1 = sb * math.sin(pb)
    nb2 = math.cos(tb)

    ea = na0 * coef[0] + na1 * coef[1] + na2 * coef[2]
    eb = nb0 * coef[3] + nb1 * coef[4] + nb2 * coef[5]
    cb0 = coef[6] * nb0 + coef[7] * nb1 + coef[8] * nb2
    cb1 = coef[9] * nb0 + coef[10] * nb1 + coef[11] * nb2
    cb2 = coef[12] * nb0 + coef[13] * nb1 + coef[14] * nb2
    eab = na0 * cb0 + na1 * cb1 + na2 * cb2

    h_a = _plogp(0.5 * (1.0 + ea)) + _plogp(0.5 * (1.0 - ea))
    h_b = _plogp(0.5 * (1.0 + eb)) + _plogp(0.5 * (1.0 - eb))
    h_ab = (
        _plogp(0.25 * (1.0 + ea + eb + eab))
        + _plogp(0.25 * (1.0 + ea - eb - eab))
        + _plogp(0.25 * (1.0 - ea + eb - eab))
        + _plogp(0.25 * (1.0 - ea - eb + eab))
    )
    return h_a + h_b - h_ab, h_a, h_b


def _neg_mi(coef, x):
    return -mutual_information(coef, x[0], x[1], x[2], x[3])[0]


def _sort_simplex(xs, fs):
    # stable insertion sort, ascending
    for i in range(1, len(fs)):
        fi = fs[i]
        xi = xs[i]
        j = i - 1
        while j >= 0 and fs[j] > fi:
            fs[j + 1] = fs[j]
            xs[j + 1] = xs[j]
            j -= 1
        fs[j + 1] = fi
        xs[j + 1] = xi


def _build_simplex(coef, x0, step):
    xs = [list(x0)]
    for i in range(4):
        x = list(x0)
        x[i] += step
        xs.append(x)
    fs = [_neg_mi(coef, x) for x in xs]
    return xs, fs


def nelder_mead_max(coef, x0, step=0.3, ftol=1e-10, max_iter=2000, max_restarts=3):
    """Maximise the mutual information over four angles with Nelder-Mead.

    Returns ``(x, J, iterations, evaluations, converged)``.
    """
    coef = [float(c) for c in coef]
    xs, fs = _build_simplex(coef, [float(v) for v in x0], step)
    nfev = 5
    iters = 0
    restarts = 0
    restart_best = math.inf
    converged = False
    n = 4
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
            xs, fs = _build_simplex(coef, xs[0], step)
            nfev += 5
            continue
        if iters >= max_iter:
            break
        iters += 1

        c = [0.0, 0.0, 0.0, 0.0]
        for i in range(n):
            for k in range(n):
                c[k] += xs[i][k]
        for k in range(n):
            c[k] /= n
        worst = xs[n]
        xr = [c[k] + (c[k] - worst[k]) for k in range(n)]
        fr = _neg_mi(coef, xr)
        nfev += 1
        if fr < fs[0]:
            xe = [c[k] + 2.0 * (c[k] - worst[k]) for k in range(n)]
            fe = _neg_mi(coef, xe)
            nfev += 1
            if fe < fr:
                xs[n], fs[n] = xe, fe
            else:
                xs[n], fs[n] = xr, fr
            continue
        if fr < fs[n - 1]:
            xs[n], fs[n] = xr, fr
            continue
        if fr < fs[n]:
            xc = [c[k] + 0.5 * (xr[k] - c[k]) for k in range(n)]
            fc = _neg_mi(coef, xc)
            nfev += 1
            if fc <= fr:
                xs[n], fs[n] = xc, fc
                continue
        else:
            xc = [c[k] + 0.5 * (worst[k] - c[k]) for k in range(n)]
            fc = _neg_mi(coef, xc)
            nfev += 1
            if fc < fs[n]:
                xs[n], fs[n] = xc, fc
                continue
        best = xs[0]
        for i in range(1, n + 1):
            xs[i] = [best[k] + 0.5 * (xs[i][k] - best[k]) for k in range(n)]
            fs[i] = _neg_mi(coef, xs[i])
            nfev += 1

    return np.array(xs[0]), -fs[0], iters, nfev, converged
