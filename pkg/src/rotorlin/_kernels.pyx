# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inflow kernels; mirrors ``_kernels_py`` line for line."""

from libc.math cimport sqrt, fabs

import numpy as np

# below this distance from the singular point the residual uses the product form
cdef double D_FLOOR = 1e-4


cdef inline double _thrust_coefficient(double lam, double mu, double mu_z,
                                       double theta0, double h) nogil:
    return h * (0.5 * (mu_z - lam) + (1.0 / 3.0 + 0.5 * mu * mu) * theta0)


cdef inline double _fixed_point_residual(double lam, double ct, double mu,
                                         double mu_z, double eta_w) nogil:
    cdef double d = sqrt(mu * mu + (lam - mu_z) * (lam - mu_z))
    if d < D_FLOOR:
        return fabs(2.0 * eta_w * lam * d - ct) / (2.0 * eta_w * D_FLOOR)
    return fabs(lam - ct / (2.0 * eta_w * d))


cdef int _solve(double mu, double mu_z, double theta0, double lift_slope,
                double solidity, double eta_w, double tol, int max_iter,
                double relax, double* out) nogil:
    cdef double h = 0.5 * lift_slope * solidity
    cdef double ct0 = _thrust_coefficient(0.0, mu, mu_z, theta0, h)
    cdef double lam, ct, res, d, step = 0.0, last_step = 0.0, f, df
    cdef int newton = 0, flips = 0, it = 0
    if ct0 >= 0.0:
        lam = mu_z + sqrt(fabs(ct0) / (2.0 * eta_w))
    else:
        lam = mu_z - sqrt(-ct0 / (2.0 * eta_w))
    ct = _thrust_coefficient(lam, mu, mu_z, theta0, h)
    res = _fixed_point_residual(lam, ct, mu, mu_z, eta_w)
    while res > tol and it < max_iter:
        it += 1
        d = sqrt(mu * mu + (lam - mu_z) * (lam - mu_z))
        if newton == 0 and d >= D_FLOOR:
            step = relax * (ct / (2.0 * eta_w * d) - lam)
            if last_step != 0.0:
                if step * last_step < 0.0:
                    flips += 1
                if flips >= 2 or fabs(step) > 0.5 * fabs(last_step) or it > 3:
                    newton = 1
            last_step = step
        if newton == 1 or d < D_FLOOR:
            f = 2.0 * eta_w * lam * d - ct
            df = 2.0 * eta_w * d + 0.5 * h
            if d > 0.0:
                df += 2.0 * eta_w * lam * (lam - mu_z) / d
            if df == 0.0:
                break
            step = -f / df
        lam += step
        ct = _thrust_coefficient(lam, mu, mu_z, theta0, h)
        res = _fixed_point_residual(lam, ct, mu, mu_z, eta_w)
    out[0] = lam
    out[1] = ct
    out[2] = res
    return it


def solve_inflow(double mu, double mu_z, double theta0, double lift_slope,
                 double solidity, double eta_w, double tol=1e-13,
                 int max_iter=100, double relax=0.5):
    cdef double out[3]
    cdef int it = _solve(mu, mu_z, theta0, lift_slope, solidity, eta_w,
                         tol, max_iter, relax, out)
    return out[0], out[1], it, out[2], out[2] <= tol


def inflow_grid(mu, mu_z, theta0, double lift_slope, double solidity,
                double eta_w, double tol=1e-13, int max_iter=100,
                double relax=0.5):
    cdef double[::1] m = np.ascontiguousarray(mu, dtype=float)
    cdef double[::1] mz = np.ascontiguousarray(mu_z, dtype=float)
    cdef double[::1] th = np.ascontiguousarray(theta0, dtype=float)
    cdef Py_ssize_t n = m.shape[0], i
    lam_a = np.empty(n)
    ct_a = np.empty(n)
    it_a = np.empty(n, dtype=np.int64)
    res_a = np.empty(n)
    cdef double[::1] lam = lam_a
    cdef double[::1] ct = ct_a
    cdef long long[::1] iters = it_a
    cdef double[::1] res = res_a
    cdef double out[3]
    with nogil:
        for i in range(n):
            iters[i] = _solve(m[i], mz[i], th[i], lift_slope, solidity, eta_w,
                              tol, max_iter, relax, out)
            lam[i] = out[0]
            ct[i] = out[1]
            res[i] = out[2]
    return lam_a, ct_a, it_a, res_a
