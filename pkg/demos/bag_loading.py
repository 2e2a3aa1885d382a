"""
Grocery-bag loading: hold below the limit, yield above it
=========================================================

A hanging load is attached to the gripper in three phases: an empty bag,
a 20 N load, and a 25.5 N load that exceeds the 25 N vertical force limit.
While the sensed force stays inside the limit the end effector holds pose;
once the load crosses the limit the commanded velocity can only point away
from the force, so the arm lowers the bag until the ground takes the excess
weight.

Run:  python demos/bag_loading.py
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from wrenchguard import BUILTIN_SCENARIOS, config_from_dict, run_scenario, summarize

HERE = pathlib.Path(__file__).resolve().parent

config = config_from_dict(BUILTIN_SCENARIOS["bag_test"]())
trace = run_scenario(config)

t = trace.t
fz = trace.wrench[:, 2]
z = trace.pose[:, 2]
limit = config.controller_params.wrench_limits[2]

# Phase boundaries come from the scenario's event schedule (10 s, 17 s).
hold = (t >= 10.0) & (t < 17.0)
overload = t >= 17.0

print("vertical force limit:          %.1f N" % limit)
print("phase 1 (empty bag)  max |fz|: %.2f N" % np.abs(fz[t < 10.0]).max())
print("phase 2 (20 N load)  max |fz|: %.2f N" % np.abs(fz[hold]).max())
print("phase 2 height drift:          %.3f mm" % (1e3 * np.ptp(z[hold])))
print("phase 3 (25.5 N)     max |fz|: %.2f N" % np.abs(fz[overload]).max())

# The descent starts at the overload and ends when the bag grounds out.
descending = overload & (z > config.contacts[0].ground_height + 1e-6)
grounded = overload & ~descending
print("descent:  %.2f m over %.1f s" % (np.ptp(z[overload]), t[descending][-1] - 17.0))
print("after grounding, |fz| settles to %.2f N (load shed to the floor)" % np.abs(fz[grounded][-1]))

summary = summarize(trace, limits=config.controller_params.wrench_limits)
print("whole-run worst violation: %.2f%% of the limit" % (1e2 * summary["worst_violation_frac"]))

fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(8, 6))
ax1.plot(t, np.abs(fz), label="|fz| sensed")
ax1.axhline(limit, color="r", ls="--", label="25 N limit")
ax1.set_ylabel("vertical force [N]")
ax1.legend(loc="lower right")
ax2.plot(t, z, label="gripper height")
ax2.axhline(config.contacts[0].ground_height, color="k", ls=":", label="ground")
ax2.set_xlabel("time [s]")
ax2.set_ylabel("z [m]")
ax2.legend(loc="upper right")
fig.tight_layout()
out = HERE / "bag_loading.png"
fig.savefig(out, dpi=120)
print("wrote", out)
