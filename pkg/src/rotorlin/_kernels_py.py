"""Pure-Python inflow kernels.

Reference twin of ``_kernels.pyx``; both expose the same functions with the
same signatures and must agree to round-off.
"""

from math import sqrt

import numpy as np

WARMUP = 3
# below this distance from the singular point the residual uses the product form
D_FLOOR = 1e-4


def _thrust_coefficient(lam, mu, mu_z, theta0, half_a_sigma):
    return half_a_sigma * (0.5 * (mu_z - lam) + (1.0 / 3.0 + 0.5 * mu * mu) * theta0)


def _fixed_point_residual(lam, ct, mu, mu_z, eta_w):
    d = sqrt(mu * mu + (lam - mu_z) * (lam - mu_z))
    if d < D_FLOOR:
        return abs(2.0 * eta_w * lam * d - ct) / (2.0 * eta_w * D_FLOOR)
    return abs(lam - ct / (2.0 * eta_w * d))


def solve_inflow(mu, mu_z, theta0, lift_slope, solidity, eta_w,
                 tol=1e-13, max_iter=100, relax=0.5):
    """Solve the coupled thrust-coefficient / uniform-inflow equations.

    Damped fixed-point iteration on the inflow ratio, switching to Newton on
    ``F(lam) = 2 eta lam sqrt(mu^2 + (lam - mu_z)^2) - C_T(lam)`` once the
    damped updates alternate in sign twice, contract by less than half per
    step, or after ``WARMUP`` damped steps.

    The residual is ``|lam - C_T / (2 eta d)|`` with
    ``d = sqrt(mu^2 + (lam - mu_z)^2)``. Closer than ``D_FLOOR`` to the
    singular point ``d = 0`` it is evaluated as ``|2 eta lam d - C_T| /
    (2 eta D_FLOOR)`` so round-off is not divided by a vanishing ``d``.

    Returns
    -------
    tuple
        ``(lambda0, ct, iterations, residual, converged)``
    """
    h = 0.5 * lift_slope * solidity
    # hover closed form (lam^2 = C_T/(2 eta) with C_T frozen at lam = 0) seeds the iteration
    ct0 = _thrust_coefficient(0.0, mu, mu_z, theta0, h)
    lam = mu_z + (sqrt(abs(ct0) / (2.0 * eta_w)) if ct0 >= 0.0 else -sqrt(-ct0 / (2.0 * eta_w)))
    ct = _thrust_coefficient(lam, mu, mu_z, theta0, h)
    res = _fixed_point_residual(lam, ct, mu, mu_z, eta_w)
    newton = False
    last_step = 0.0
    flips = 0
    it = 0
    while res > tol and it < max_iter:
        it += 1
        d = sqrt(mu * mu + (lam - mu_z) * (lam - mu_z))
        if not newton and d >= D_FLOOR:
            step = relax * (ct / (2.0 * eta_w * d) - lam)
            if last_step != 0.0:
                if step * last_step < 0.0:
                    flips += 1
                # alternating twice, contracting slower than 1/2 per step, or
                # simply past the damped warm-up
                if flips >= 2 or abs(step) > 0.5 * abs(last_step) or it > WARMUP:
                    newton = True
            last_step = step
        if newton or d < D_FLOOR:
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
    return lam, ct, it, res, res <= tol


def inflow_grid(mu, mu_z, theta0, lift_slope, solidity, eta_w,
                tol=1e-13, max_iter=100, relax=0.5):
    """Vectorised :func:`solve_inflow` over equal-length 1-D arrays."""
    mu = np.ascontiguousarray(mu, dtype=float)
    mu_z = np.ascontiguousarray(mu_z, dtype=float)
    theta0 = np.ascontiguousarray(theta0, dtype=float)
    n = mu.shape[0]
    lam = np.empty(n)
    ct = np.empty(n)
    iters = np.empty(n, dtype=np.int64)
    res = np.empty(n)
    for i in range(n):
        lam[i], ct[i], iters[i], res[i], _ = solve_inflow(
            mu[i], mu_z[i], theta0[i], lift_slope, solidity, eta_w, tol, max_iter, relax)
    return lam, ct, iters, res
