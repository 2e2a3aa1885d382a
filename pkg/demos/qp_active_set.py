"""
The dense active-set QP solver, stand-alone
===========================================

The controller's inner problem is min x'Dx + c'x s.t. Ax <= b with a
diagonal, possibly singular D. This script pokes the solver directly:
solve a small instance, read back the active set and the KKT certificate,
and check that rescaling any row (and its bound) by a positive constant
leaves the answer untouched -- the reason contact stiffness cannot change
what the controller commands.

Run:  python demos/qp_active_set.py
"""

import numpy as np

from wrenchguard import kkt_residual, solve_qp

# A 2-D problem with one tight and one slack constraint:
#   min x1^2 + x2^2 - 2 x1   s.t.  x1 + x2 <= 0.5,  -x2 <= 1
d = np.array([1.0, 1.0])
c = np.array([-2.0, 0.0])
A = np.array([[1.0, 1.0], [0.0, -1.0]])
b = np.array([0.5, 1.0])

res = solve_qp(d, c, A, b)
print("status:       ", res.status)
print("solution:     ", res.x)
print("active set:   ", res.active_set, "(row 0 tight, row 1 slack)")
print("multipliers:  ", res.multipliers)
print("KKT residual: %.2e" % res.kkt_residual)

# stationarity by hand: 2*D*x + c + A' mu = 0 on the active row
grad = 2.0 * d * res.x + c + A.T @ res.multipliers
print("stationarity check:", grad)

# Positive row scaling changes nothing about the feasible set, so the
# solver must return the same x (multipliers rescale inversely).
scale = np.array([250.0, 0.004])
res2 = solve_qp(d, c, A * scale[:, None], b * scale)
print("\nrows scaled by", scale)
print("solution drift:    %.2e" % np.abs(res2.x - res.x).max())
print("mu * scale drift:  %.2e" % np.abs(res2.multipliers * scale - res.multipliers).max())

# The certificate is recomputable by the caller from the returned pieces.
print("recomputed certificate: %.2e"
      % kkt_residual(d, c, A * scale[:, None], b * scale, res2.x, res2.multipliers))

# A degenerate cost (flat direction) still resolves: minimize gamma alone.
d3 = np.array([1.0, 0.0])
c3 = np.array([0.0, 3.0])
A3 = np.array([[0.0, -1.0], [1.0, -1.0]])
b3 = np.array([0.0, -2.0])
res3 = solve_qp(d3, c3, A3, b3)
print("\nflat-cost instance: x =", res3.x, "status =", res3.status,
      "KKT %.1e" % res3.kkt_residual)
