"""Dense least-absolute-deviations solver.

Solves min_c ||r - A c||_1 as the linear program

    min 1'u + 1'v   s.t.  A c + u - v = r,  u >= 0, v >= 0,

whose dual is max r'y subject to A'y = 0, -1 <= y <= 1.  A Mehrotra
predictor-corrector primal-dual interior-point iteration is used; the
special structure reduces every Newton step to one m x m positive
definite solve (m = number of columns of A), so the cost per iteration
is O(n m^2).

The iteration is fully deterministic.  A final polishing step snaps the
iterate to the optimal vertex when the interpolated rows identify it,
which makes exact-fit problems exact to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_STEP_SCALE = 0.9995
_MIN_SIGMA = 1e-12


@dataclass(frozen=True, eq=False)
class LADResult:
    coefficients: np.ndarray
    objective: float
    iterations: int
    certified: bool
    dual: np.ndarray


def _max_step(x: np.ndarray, dx: np.ndarray) -> float:
    """Largest alpha in (0, 1] keeping x + alpha dx strictly positive."""
    neg = dx < 0
    if not np.any(neg):
        return 1.0
    return min(1.0, float(np.min(-x[neg] / dx[neg])) * _STEP_SCALE)


def solve_lad(
    a: np.ndarray,
    r: np.ndarray,
    tol: float = 1e-9,
    max_iter: int = 200,
    polish: bool = True,
) -> LADResult:
    """Minimize ||r - a c||_1 over c.

    Convergence requires primal and dual residuals and the scaled
    complementarity gap to all fall below tol; the result's certified
    flag records whether that happened within the iteration cap.
    """
    a = np.asarray(a, dtype=float)
    r = np.asarray(r, dtype=float)
    n, m = a.shape
    if r.shape != (n,):
        raise ValueError("shape mismatch between matrix and right-hand side")

    c, *_ = np.linalg.lstsq(a, r, rcond=None)
    e = r - a @ c
    d0 = 1.0 + 0.1 * float(np.mean(np.abs(e)))
    u = np.maximum(e, 0.0) + d0
    v = np.maximum(-e, 0.0) + d0
    y = np.zeros(n)
    w = 1.0 - y
    s = 1.0 + y

    scale_r = 1.0 + float(np.max(np.abs(r), initial=0.0))
    iterations = 0
    certified = False
    for iterations in range(1, max_iter + 1):
        r_p = r - a @ c - u + v
        r_d = -(a.T @ y)
        gap = float(u @ w + v @ s)
        obj = float(np.sum(u + v))
        if (
            np.max(np.abs(r_p), initial=0.0) <= tol * scale_r
            and np.max(np.abs(r_d), initial=0.0) <= tol
            and gap <= tol * (1.0 + abs(obj))
        ):
            certified = True
            break

        mu = gap / (2 * n)
        theta = u / w + v / s
        inv_theta = 1.0 / theta

        def newton(cu, cv):
            h = r_p - cu / w + cv / s
            lhs = (a.T * inv_theta) @ a
            rhs = a.T @ (inv_theta * h) - r_d
            try:
                dc = np.linalg.solve(lhs, rhs)
            except np.linalg.LinAlgError:
                dc = np.linalg.lstsq(lhs, rhs, rcond=None)[0]
            dy = inv_theta * (h - a @ dc)
            du = (cu + u * dy) / w
            dv = (cv - v * dy) / s
            return dc, dy, du, dv

        # predictor: pure Newton step toward complementarity zero
        dc_a, dy_a, du_a, dv_a = newton(-u * w, -v * s)
        ap = min(_max_step(u, du_a), _max_step(v, dv_a))
        ad = min(_max_step(w, -dy_a), _max_step(s, dy_a))
        mu_aff = float(
            (u + ap * du_a) @ (w - ad * dy_a) + (v + ap * dv_a) @ (s + ad * dy_a)
        ) / (2 * n)
        sigma = max(_MIN_SIGMA, min(1.0, (mu_aff / mu) ** 3)) if mu > 0 else _MIN_SIGMA

        # corrector: recentred step with second-order compensation
        cu = sigma * mu - u * w + du_a * dy_a
        cv = sigma * mu - v * s - dv_a * dy_a
        dc, dy, du, dv = newton(cu, cv)
        ap = min(_max_step(u, du), _max_step(v, dv))
        ad = min(_max_step(w, -dy), _max_step(s, dy))

        c = c + ap * dc
        u = u + ap * du
        v = v + ap * dv
        y = y + ad * dy
        w = 1.0 - y
        s = 1.0 + y

    if polish:
        c, _ = _polish(a, r, c)
    objective = float(np.sum(np.abs(r - a @ c)))
    return LADResult(coefficients=c, objective=objective, iterations=iterations, certified=certified, dual=y)


def _polish(a: np.ndarray, r: np.ndarray, c: np.ndarray) -> tuple[np.ndarray, bool]:
    """Refit on the interpolated rows to land exactly on the optimal vertex."""
    n, m = a.shape
    e = r - a @ c
    obj = float(np.sum(np.abs(e)))
    thresh = 1e-7 * (1.0 + float(np.max(np.abs(r), initial=0.0)))
    active = np.abs(e) <= thresh
    if np.count_nonzero(active) < m:
        return c, False
    c_pol, *_ = np.linalg.lstsq(a[active], r[active], rcond=None)
    obj_pol = float(np.sum(np.abs(r - a @ c_pol)))
    if obj_pol <= obj + 1e-9 * (1.0 + obj):
        return c_pol, True
    return c, False
