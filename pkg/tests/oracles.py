"""Shared reference implementations for the test suite.

The QP oracle enumerates candidate active sets and solves each equality KKT
system directly -- an independent (if exponential) path to the same convex
optimum the solver under test must find.
"""

from itertools import combinations

import numpy as np


def qp_value(d, c, x):
    return float(np.dot(d * x, x) + np.dot(c, x))


def oracle_solve_qp(d, c, A, b, tol=1e-8):
    """Brute-force KKT enumeration. Returns (x, value) or None if infeasible.

    Assumes the instance is bounded below on its feasible set. Any consistent
    KKT point of a convex program is a global minimizer; we keep the best in
    case of numerical near-misses.
    """
    d = np.asarray(d, dtype=float)
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float).reshape(-1, d.size)
    b = np.asarray(b, dtype=float).reshape(-1)
    n, m = d.size, A.shape[0]
    best = None
    for k in range(0, n + 1):
        for subset in combinations(range(m), k):
            S = list(subset)
            K = np.zeros((n + k, n + k))
            K[:n, :n] = np.diag(2.0 * d)
            K[:n, n:] = A[S].T
            K[n:, :n] = A[S]
            rhs = np.concatenate([-c, b[S]])
            sol, *_ = np.linalg.lstsq(K, rhs, rcond=None)
            if np.linalg.norm(K @ sol - rhs, np.inf) > tol:
                continue  # inconsistent system: this subset is not an active set
            x, mu = sol[:n], sol[n:]
            if mu.size and np.min(mu) < -tol:
                continue
            if m and np.max(A @ x - b) > tol:
                continue
            val = qp_value(d, c, x)
            if best is None or val < best[1]:
                best = (x, val)
    return best


def random_qp_instance(rng):
    """Random bounded convex QP with a known strictly feasible point.

    Mixes strictly convex and flat coordinates; flat coordinates with a linear
    cost receive an explicit bound row so the instance stays bounded below.
    """
    n = int(rng.integers(1, 8))
    m = int(rng.integers(0, 11))
    d = np.where(rng.random(n) < 0.25, 0.0, rng.uniform(0.1, 5.0, n))
    c = rng.uniform(-3.0, 3.0, n)
    x0 = rng.uniform(-2.0, 2.0, n)
    rows = list(rng.standard_normal((m, n)))
    bounds = [float(r @ x0 + rng.uniform(0.1, 2.0)) for r in rows]
    for i in range(n):
        if d[i] == 0.0 and c[i] != 0.0:
            e = np.zeros(n)
            e[i] = -np.sign(c[i])  # block the descent direction of the flat coordinate
            rows.append(e)
            bounds.append(float(e @ x0 + rng.uniform(0.5, 2.0)))
    A = np.array(rows).reshape(len(rows), n)
    b = np.array(bounds)
    return d, c, A, b, x0
