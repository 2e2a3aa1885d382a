"""Dense convex QP solver: diagonal cost, inequality rows, primal active set.

Minimizes ``f(x) = sum_i d_i x_i**2 + c . x`` subject to ``A x <= b`` with
``d >= 0``.  The cost may be flat along some coordinates (e.g. a slack variable
whose only penalty is linear), so the solver handles positive-semidefinite
Hessians via ray steps in the flat subspace.

Structure:

* phase 1 finds a feasible point by exact line-searched Gauss-Newton descent on
  the convex squared-violation function; a stationary point with positive
  violation certifies infeasibility (convexity makes the certificate global),
* phase 2 is a primal active-set iteration using a null-space step; blocking
  rows are linearly independent of the working set by construction,
* the working set is kept sorted and all ties break toward the lowest row
  index, so identical inputs always take the identical path.

Constraint rows are normalized internally (row and bound divided by the row
2-norm), which makes the returned point invariant to per-row rescaling of the
inequalities; multipliers are mapped back to the caller's scaling.

Every "optimal" result carries a KKT certificate: the largest of the
stationarity, primal-feasibility and complementary-slackness residuals in the
max norm (dual feasibility holds by construction).
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

_FEAS_TOL = 1e-10
_RANK_TOL = 1e-12


@dataclass
class QPResult:
    x: np.ndarray
    value: float
    status: str  # "optimal" | "infeasible"
    active_set: tuple
    multipliers: np.ndarray
    kkt_residual: float
    iterations: int


def kkt_residual(cost_diagonal, cost_linear, constraint_matrix, constraint_bound, x, multipliers):
    """Max of the stationarity / primal / complementary-slackness residuals (max norm).

    Computed on the caller's scaling; a value <= 1e-8 certifies first-order
    optimality of ``x`` for the convex program.
    """
    d = np.asarray(cost_diagonal, dtype=float)
    c = np.asarray(cost_linear, dtype=float)
    x = np.asarray(x, dtype=float)
    A = np.asarray(constraint_matrix, dtype=float).reshape(-1, d.size)
    b = np.asarray(constraint_bound, dtype=float).reshape(-1)
    mu = np.asarray(multipliers, dtype=float).reshape(-1)
    grad = 2.0 * d * x + c
    if A.shape[0]:
        grad = grad + A.T @ mu
        resid = A @ x - b
        primal = max(0.0, float(np.max(resid)))
        comp = float(np.max(np.abs(mu * resid)))
    else:
        primal = 0.0
        comp = 0.0
    return max(float(np.max(np.abs(grad))), primal, comp)


def _line_search_violation(r, q):
    """Exact minimizer t >= 0 of sum(max(0, r + t*q)**2) along a descent direction.

    Walks the breakpoints where individual residuals change sign; on each
    segment the objective is an explicit quadratic.
    """
    pts = [0.0]
    for ri, qi in zip(r, q):
        if qi != 0.0:
            t = -ri / qi
            if t > 0.0:
                pts.append(t)
    pts = sorted(set(pts))
    for k, t0 in enumerate(pts):
        t1 = pts[k + 1] if k + 1 < len(pts) else None
        mid = t0 + 1.0 if t1 is None else 0.5 * (t0 + t1)
        on = (r + mid * q) > 0.0
        sq = float(np.dot(q[on], q[on]))
        sqr = float(np.dot(q[on], r[on]))
        if sq == 0.0:
            if sqr >= 0.0:
                return t0
            continue  # still descending linearly; move to the next segment
        t_star = -sqr / sq
        if t_star <= t0:
            return t0
        if t1 is None or t_star < t1:
            return t_star
    return pts[-1]


def _min_violation_point(A, b, x0, max_iter=300):
    """Gauss-Newton minimization of the squared constraint violation.

    Returns (x, max_violation, certified) where certified=True means x is a
    stationary point of the convex violation function.
    """
    x = x0.copy()
    for _ in range(max_iter):
        r = A @ x - b
        worst = float(np.max(r)) if r.size else 0.0
        if worst <= _FEAS_TOL:
            return x, max(worst, 0.0), True
        on = r > 0.0
        grad = 2.0 * A[on].T @ r[on]
        if np.linalg.norm(grad, np.inf) <= 1e-12:
            return x, worst, True  # stationary and still violating: infeasible
        p, *_ = np.linalg.lstsq(A[on], -r[on], rcond=None)
        if np.linalg.norm(p) <= 1e-14 * (1.0 + np.linalg.norm(x)):
            return x, worst, True
        t = _line_search_violation(r, A @ p)
        if t <= 0.0:
            return x, worst, True
        x = x + t * p
    raise RuntimeError("feasibility search did not converge")


def _null_space(A_active):
    if A_active.shape[0] == 0:
        return np.eye(A_active.shape[1])
    _, s, vt = np.linalg.svd(A_active)
    rank = int(np.sum(s > max(s[0], 1.0) * _RANK_TOL)) if s.size else 0
    return vt[rank:].T


def _polish(d, c, A_act, b_act):
    """Re-solve the working-set KKT equality system to strip accumulated drift."""
    n = d.size
    k = A_act.shape[0]
    K = np.zeros((n + k, n + k))
    K[:n, :n] = np.diag(2.0 * d)
    K[:n, n:] = A_act.T
    K[n:, :n] = A_act
    rhs = np.concatenate([-c, b_act])
    sol, *_ = np.linalg.lstsq(K, rhs, rcond=None)
    return sol[:n], sol[n:]


def solve_qp(cost_diagonal, cost_linear, constraint_matrix=None, constraint_bound=None):
    """Solve min sum(d*x*x) + c.x  s.t.  A x <= b.   See module docstring.

    Raises ValueError for negative cost curvature or an objective unbounded
    below on the feasible set, RuntimeError if iteration caps are hit.
    """
    d = np.asarray(cost_diagonal, dtype=float).reshape(-1)
    c = np.asarray(cost_linear, dtype=float).reshape(-1)
    n = d.size
    if c.size != n:
        raise ValueError("cost_diagonal and cost_linear must have the same length")
    if np.any(d < 0.0):
        raise ValueError("cost_diagonal must be nonnegative")
    if constraint_matrix is None or np.size(constraint_matrix) == 0:
        A = np.zeros((0, n))
        b = np.zeros(0)
    else:
        A = np.asarray(constraint_matrix, dtype=float).reshape(-1, n)
        b = np.asarray(constraint_bound, dtype=float).reshape(-1)
        if b.size != A.shape[0]:
            raise ValueError("constraint_bound length must match constraint_matrix rows")
    m = A.shape[0]

    # screen zero rows: 0 <= b_i is vacuous, 0 <= b_i < 0 is plainly infeasible
    norms = np.linalg.norm(A, axis=1) if m else np.zeros(0)
    zero = norms <= 1e-14
    if np.any(zero & (b < -_FEAS_TOL)):
        return QPResult(
            x=np.zeros(n), value=float("nan"), status="infeasible", active_set=(),
            multipliers=np.zeros(m), kkt_residual=float("nan"), iterations=0,
        )
    keep = np.flatnonzero(~zero)
    At = A[keep] / norms[keep, None] if keep.size else np.zeros((0, n))
    bt = b[keep] / norms[keep] if keep.size else np.zeros(0)
    mk = keep.size

    # start from the unconstrained minimizer (zero along flat coordinates)
    x = np.where(d > 0.0, -c / np.where(d > 0.0, 2.0 * d, 1.0), 0.0)

    if mk:
        x, worst, certified = _min_violation_point(At, bt, x)
        if worst > _FEAS_TOL:
            if not certified:
                raise RuntimeError("could not certify feasibility status")
            return QPResult(
                x=x, value=float("nan"), status="infeasible", active_set=(),
                multipliers=np.zeros(m), kkt_residual=float("nan"), iterations=0,
            )

    working: list = []  # indices into the kept/normalized rows, sorted ascending
    in_working = np.zeros(mk, dtype=bool)  # rows never block their own null-space step
    max_iter = 100 + 10 * (n + mk)
    iterations = 0
    while True:
        iterations += 1
        if iterations > max_iter:
            raise RuntimeError("active-set iteration cap exceeded")
        grad = 2.0 * d * x + c
        Z = _null_space(At[working])
        step = None
        if Z.shape[1]:
            Hr = 2.0 * (Z.T * d) @ Z
            gr = Z.T @ grad
            lam, Q = np.linalg.eigh(Hr)
            thresh = max(float(lam[-1]) if lam.size else 0.0, 1.0) * _RANK_TOL
            gq = Q.T @ gr
            flat = lam <= thresh
            descent = flat & (np.abs(gq) > 1e-11)
            if np.any(descent):
                # the cost is linear (and decreasing) along this subspace
                ray = Z @ (Q @ np.where(descent, -gq, 0.0))
                qdir = At @ ray
                r = bt - At @ x
                blockable = (qdir > 1e-12) & ~in_working
                if not np.any(blockable):
                    raise ValueError("objective is unbounded below on the feasible set")
                alphas = np.where(blockable, np.maximum(r, 0.0) / np.where(blockable, qdir, 1.0), np.inf)
                j = int(np.argmin(alphas))
                x = x + alphas[j] * ray
                bisect.insort(working, j)
                in_working[j] = True
                continue
            y = np.where(flat, 0.0, -gq / np.where(flat, 1.0, lam))
            step = Z @ (Q @ y)
        if step is None or np.linalg.norm(step) <= 1e-12 * (1.0 + np.linalg.norm(x)):
            # subspace minimum: check multipliers, drop the worst violator
            if working:
                mu_w, *_ = np.linalg.lstsq(At[working].T, -grad, rcond=None)
            else:
                mu_w = np.zeros(0)
            if mu_w.size == 0 or np.min(mu_w) >= -_FEAS_TOL:
                break
            dropped = working.pop(int(np.argmin(mu_w)))
            in_working[dropped] = False
            continue
        qdir = At @ step
        r = bt - At @ x
        blockable = (qdir > 1e-12) & ~in_working
        alphas = np.where(blockable, np.maximum(r, 0.0) / np.where(blockable, qdir, 1.0), np.inf)
        j = int(np.argmin(alphas)) if np.any(blockable) else -1
        if j >= 0 and alphas[j] < 1.0:
            x = x + alphas[j] * step
            bisect.insort(working, j)
            in_working[j] = True
        else:
            x = x + step

    mu_w = np.maximum(mu_w, 0.0)
    if working:
        xp, mup = _polish(d, c, At[working], bt[working])
        mup = np.maximum(mup, 0.0)
        feas_ok = (not mk) or float(np.max(At @ xp - bt)) <= _FEAS_TOL
        if feas_ok:
            mu_full_old = np.zeros(mk)
            mu_full_old[working] = mu_w
            mu_full_new = np.zeros(mk)
            mu_full_new[working] = mup
            old = kkt_residual(d, c, At, bt, x, mu_full_old) if mk else kkt_residual(d, c, np.zeros((0, n)), np.zeros(0), x, np.zeros(0))
            new = kkt_residual(d, c, At, bt, xp, mu_full_new) if mk else old
            if new < old:
                x, mu_w = xp, mup

    # map multipliers back to the caller's row scaling
    multipliers = np.zeros(m)
    if working:
        rows = keep[np.asarray(working)]
        np.add.at(multipliers, rows, mu_w / norms[rows])
    resid = A @ x - b if m else np.zeros(0)
    active = tuple(int(i) for i in range(m) if norms[i] > 1e-14 and abs(resid[i]) / norms[i] <= 1e-9)
    value = float(np.dot(d * x, x) + np.dot(c, x))
    cert = kkt_residual(d, c, A, b, x, multipliers)
    return QPResult(
        x=x, value=value, status="optimal", active_set=active,
        multipliers=multipliers, kkt_residual=cert, iterations=iterations,
    )
