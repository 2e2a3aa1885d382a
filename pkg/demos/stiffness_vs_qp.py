"""
Stiffness baseline vs. wrench-limited QP under the same load
============================================================

A stiffness (admittance) controller trades position for force: hanging
20 N on a 40 N/m virtual spring *must* droop w/K = 0.5 m at steady state.
The QP controller treats the 25 N limit as a hard constraint instead of
a spring, so it holds pose exactly until the limit is actually reached.

Both runs use the identical load schedule from the grocery-bag scenario.

Run:  python demos/stiffness_vs_qp.py
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from wrenchguard import (
    AdmittanceParams,
    BUILTIN_SCENARIOS,
    config_from_dict,
    run_scenario,
    static_droop,
)

HERE = pathlib.Path(__file__).resolve().parent

qp_cfg = config_from_dict(BUILTIN_SCENARIOS["bag_test"]())
adm_cfg = config_from_dict(BUILTIN_SCENARIOS["stiffness_comparison"]())

qp_trace = run_scenario(qp_cfg)
adm_trace = run_scenario(adm_cfg)

t = qp_trace.t
hold = (t >= 10.0) & (t < 17.0)
z0 = qp_cfg.initial_pose.position[2]

# Closed-form steady state for the baseline: droop = w / K per axis.
params = AdmittanceParams(stiffness=adm_cfg.controller_params.stiffness,
                          damping=adm_cfg.controller_params.damping)
droop = static_droop(np.array([0.0, 0.0, -20.0, 0.0, 0.0, 0.0]), params)
print("predicted static droop at 20 N on K=%.0f N/m: %.3f m" % (params.stiffness[2], abs(droop[2])))

adm_drop = z0 - adm_trace.pose[:, 2]
qp_drop = z0 - qp_trace.pose[:, 2]
print("stiffness baseline droop during the 20 N hold: %.3f m" % adm_drop[hold].max())
print("QP controller drift during the same hold:      %.4f mm" % (1e3 * qp_drop[hold].max()))

# The baseline also lets the sensed force ride wherever the spring puts it;
# the QP only moves once the barrier is tight.
print("baseline max |fz| during hold: %.2f N" % np.abs(adm_trace.wrench[hold, 2]).max())
print("QP       max |fz| during hold: %.2f N" % np.abs(qp_trace.wrench[hold, 2]).max())

fig, ax = plt.subplots(figsize=(8, 4.5))
ax.plot(t, adm_drop, label="stiffness baseline (K=40 N/m)")
ax.plot(t, qp_drop, label="wrench-limited QP")
ax.axhline(abs(droop[2]), color="gray", ls="--", lw=0.8, label="static droop w/K")
ax.axvspan(10.0, 17.0, color="orange", alpha=0.15, label="20 N hold")
ax.set_xlabel("time [s]")
ax.set_ylabel("drop below start height [m]")
ax.legend(loc="upper left")
fig.tight_layout()
out = HERE / "stiffness_vs_qp.png"
fig.savefig(out, dpi=120)
print("wrote", out)
