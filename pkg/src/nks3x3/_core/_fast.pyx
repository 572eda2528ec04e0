# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled chart/metric kernels (hot backend).

Function-for-function mirror of `_slow`; see that module for the chart
conventions.  All hot loops run on fixed-size C arrays; the only Python
work is array allocation at the boundaries.
"""

from libc.math cimport fabs, sqrt

import numpy as np


cdef double SQRT3 = sqrt(3.0)


cdef inline void qmul(const double* a, const double* b, double* out) nogil:
    out[0] = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
    out[1] = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2]
    out[2] = a[0] * b[2] + a[2] * b[0] + a[3] * b[1] - a[1] * b[3]
    out[3] = a[0] * b[3] + a[3] * b[0] + a[1] * b[2] - a[2] * b[1]


cdef inline void sigma(const double* y, double* out) nogil:
    cdef double s = y[0] * y[0] + y[1] * y[1] + y[2] * y[2]
    cdef double d = 1.0 + s
    out[0] = (1.0 - s) / d
    out[1] = 2.0 * y[0] / d
    out[2] = 2.0 * y[1] / d
    out[3] = 2.0 * y[2] / d


cdef inline void dsigma(const double* y, double* out) nogil:
    # rows k = d sigma / d y_k, flattened (3, 4)
    cdef double s = y[0] * y[0] + y[1] * y[1] + y[2] * y[2]
    cdef double d = 1.0 + s
    cdef double d2 = d * d
    cdef int k, i
    for k in range(3):
        out[4 * k] = -4.0 * y[k] / d2
        for i in range(3):
            out[4 * k + 1 + i] = (-4.0 * y[i] * y[k]) / d2
        out[4 * k + 1 + k] += 2.0 * d / d2


cdef void c_chart_point(const double* center, const double* coords,
                        double* out) nogil:
    cdef double s[4]
    sigma(coords, s)
    qmul(center, s, out)
    sigma(coords + 3, s)
    qmul(center + 4, s, out + 4)


cdef void c_chart_frame(const double* center, const double* coords,
                        double* E) nogil:
    # E flattened (6, 8); row 3f+k is the pushforward of coordinate 3f+k
    cdef double d[12]
    cdef int f, k, i
    for i in range(48):
        E[i] = 0.0
    for f in range(2):
        dsigma(coords + 3 * f, d)
        for k in range(3):
            qmul(center + 4 * f, d + 4 * k, E + 8 * (3 * f + k) + 4 * f)


cdef inline void j_apply(const double* p, const double* q, const double* U,
                         const double* V, double* JU, double* JV) nogil:
    # (2 p q^-1 V - U, -2 q p^-1 U + V)/sqrt(3) with unit p, q
    cdef double a[4]
    cdef double b[4]
    cdef double t[4]
    cdef int i
    b[0] = q[0]
    b[1] = -q[1]
    b[2] = -q[2]
    b[3] = -q[3]
    qmul(p, b, a)       # a = p q^-1
    qmul(a, V, t)
    for i in range(4):
        JU[i] = (2.0 * t[i] - U[i]) / SQRT3
    a[0] = p[0]
    a[1] = -p[1]
    a[2] = -p[2]
    a[3] = -p[3]
    qmul(q, a, b)       # b = q p^-1
    qmul(b, U, t)
    for i in range(4):
        JV[i] = (-2.0 * t[i] + V[i]) / SQRT3


cdef void c_metric_from_frame(const double* p, const double* q,
                              const double* E, double* g) nogil:
    # g = (E E^T + JE JE^T) / 2, all flattened 6x6 / 6x8
    cdef double JE[48]
    cdef int k, l, i
    cdef double acc
    for k in range(6):
        j_apply(p, q, E + 8 * k, E + 8 * k + 4, JE + 8 * k, JE + 8 * k + 4)
    for k in range(6):
        for l in range(k, 6):
            acc = 0.0
            for i in range(8):
                acc += E[8 * k + i] * E[8 * l + i] + JE[8 * k + i] * JE[8 * l + i]
            g[6 * k + l] = 0.5 * acc
            g[6 * l + k] = 0.5 * acc


cdef void c_metric_matrix(const double* center, const double* coords,
                          double* g) nogil:
    cdef double point[8]
    cdef double E[48]
    c_chart_point(center, coords, point)
    c_chart_frame(center, coords, E)
    c_metric_from_frame(point, point + 4, E, g)


cdef int solve6(double* A, double* B, int nrhs) nogil:
    # Gaussian elimination with partial pivoting on A (6x6, destroyed);
    # B holds nrhs right-hand sides row-major (6 x nrhs), overwritten
    # with the solution.  Returns -1 on exact singularity.
    cdef int i, j, k, piv
    cdef double mx, f, tmp
    for k in range(6):
        piv = k
        mx = fabs(A[6 * k + k])
        for i in range(k + 1, 6):
            if fabs(A[6 * i + k]) > mx:
                mx = fabs(A[6 * i + k])
                piv = i
        if mx == 0.0:
            return -1
        if piv != k:
            for j in range(6):
                tmp = A[6 * k + j]
                A[6 * k + j] = A[6 * piv + j]
                A[6 * piv + j] = tmp
            for j in range(nrhs):
                tmp = B[nrhs * k + j]
                B[nrhs * k + j] = B[nrhs * piv + j]
                B[nrhs * piv + j] = tmp
        for i in range(k + 1, 6):
            f = A[6 * i + k] / A[6 * k + k]
            for j in range(k, 6):
                A[6 * i + j] -= f * A[6 * k + j]
            for j in range(nrhs):
                B[nrhs * i + j] -= f * B[nrhs * k + j]
    for k in range(5, -1, -1):
        for j in range(nrhs):
            tmp = B[nrhs * k + j]
            for i in range(k + 1, 6):
                tmp -= A[6 * k + i] * B[nrhs * i + j]
            B[nrhs * k + j] = tmp / A[6 * k + k]
    return 0


cdef inline double[::1] _vec(object a, Py_ssize_t n):
    arr = np.ascontiguousarray(a, dtype=np.float64).reshape(n)
    return arr


def chart_point(center, coords):
    """Ambient (p, q) in R^8 at chart coordinates (y, z)."""
    cdef double[::1] c = _vec(center, 8)
    cdef double[::1] x = _vec(coords, 6)
    out = np.empty(8)
    cdef double[::1] o = out
    c_chart_point(&c[0], &x[0], &o[0])
    return out


def chart_coords(center, point):
    """Chart coordinates of an ambient point; inverse of chart_point."""
    cdef double[::1] c = _vec(center, 8)
    cdef double[::1] pt = _vec(point, 8)
    out = np.empty(6)
    cdef double[::1] o = out
    cdef double conj[4]
    cdef double u[4]
    cdef int f, i
    for f in range(2):
        conj[0] = c[4 * f]
        for i in range(1, 4):
            conj[i] = -c[4 * f + i]
        qmul(conj, &pt[4 * f], u)
        for i in range(3):
            o[3 * f + i] = u[1 + i] / (1.0 + u[0])
    return out


def chart_frame(center, coords):
    """Pushforwards of the 6 coordinate directions, shape (6, 8)."""
    cdef double[::1] c = _vec(center, 8)
    cdef double[::1] x = _vec(coords, 6)
    out = np.empty((6, 8))
    cdef double[:, ::1] o = out
    c_chart_frame(&c[0], &x[0], &o[0, 0])
    return out


def metric_matrix(center, coords):
    """6x6 matrix of the invariant metric in the chart frame."""
    cdef double[::1] c = _vec(center, 8)
    cdef double[::1] x = _vec(coords, 6)
    out = np.empty((6, 6))
    cdef double[:, ::1] o = out
    c_metric_matrix(&c[0], &x[0], &o[0, 0])
    return out


def metric_derivs(center, coords, step):
    """Metric and its central-difference coordinate derivatives."""
    cdef double[::1] c = _vec(center, 8)
    cdef double[::1] x = _vec(coords, 6)
    cdef double h = float(step)
    g0 = np.empty((6, 6))
    dg = np.empty((6, 6, 6))
    cdef double[:, ::1] g0v = g0
    cdef double[:, :, ::1] dgv = dg
    cdef double pert[6]
    cdef double gp[36]
    cdef double gm[36]
    cdef int k, i, j
    with nogil:
        c_metric_matrix(&c[0], &x[0], &g0v[0, 0])
        for k in range(6):
            for i in range(6):
                pert[i] = x[i]
            pert[k] = x[k] + h
            c_metric_matrix(&c[0], pert, gp)
            pert[k] = x[k] - h
            c_metric_matrix(&c[0], pert, gm)
            for i in range(6):
                for j in range(6):
                    dgv[k, i, j] = (gp[6 * i + j] - gm[6 * i + j]) / (2.0 * h)
    return g0, dg


def j_matrix(center, coords):
    """Matrix of J in the chart frame: J E_k = sum_l out[l, k] E_l."""
    cdef double[::1] c = _vec(center, 8)
    cdef double[::1] x = _vec(coords, 6)
    out = np.empty((6, 6))
    cdef double[:, ::1] o = out
    cdef double point[8]
    cdef double E[48]
    cdef double JE[48]
    cdef double gram[36]
    cdef int k, l, i, status
    cdef double acc
    with nogil:
        c_chart_point(&c[0], &x[0], point)
        c_chart_frame(&c[0], &x[0], E)
        for k in range(6):
            j_apply(point, point + 4, E + 8 * k, E + 8 * k + 4,
                    JE + 8 * k, JE + 8 * k + 4)
        for k in range(6):
            for l in range(6):
                acc = 0.0
                for i in range(8):
                    acc += E[8 * k + i] * E[8 * l + i]
                gram[6 * k + l] = acc
        for k in range(6):
            for l in range(6):
                acc = 0.0
                for i in range(8):
                    acc += E[8 * k + i] * JE[8 * l + i]
                o[k, l] = acc
        status = solve6(gram, &o[0, 0], 6)
    if status != 0:
        raise np.linalg.LinAlgError("chart frame gram matrix is singular")
    return out


def tangent_coords(center, coords, tangent):
    """Chart components of an ambient tangent vector at `coords`."""
    cdef double[::1] c = _vec(center, 8)
    cdef double[::1] x = _vec(coords, 6)
    cdef double[::1] t = _vec(tangent, 8)
    out = np.empty(6)
    cdef double[::1] o = out
    cdef double E[48]
    cdef double gram[36]
    cdef int k, l, i, status
    cdef double acc
    with nogil:
        c_chart_frame(&c[0], &x[0], E)
        for k in range(6):
            for l in range(6):
                acc = 0.0
                for i in range(8):
                    acc += E[8 * k + i] * E[8 * l + i]
                gram[6 * k + l] = acc
            acc = 0.0
            for i in range(8):
                acc += E[8 * k + i] * t[i]
            o[k] = acc
        status = solve6(gram, &o[0], 1)
    if status != 0:
        raise np.linalg.LinAlgError("chart frame gram matrix is singular")
    return out
