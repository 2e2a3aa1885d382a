"""
Hand guiding against a force limit
==================================

A compliant "hand" grips the end effector and pulls it along a straight
line to a drop-off point 1.2 m away. The x-axis force limit is 10 N, so
the arm follows by riding that limit: it moves exactly fast enough to keep
the grip force at the barrier, never pushing back harder than allowed.

Run:  python demos/human_guide.py
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from wrenchguard import BUILTIN_SCENARIOS, config_from_dict, run_scenario, summarize

HERE = pathlib.Path(__file__).resolve().parent

config = config_from_dict(BUILTIN_SCENARIOS["human_guide"]())
trace = run_scenario(config)

t = trace.t
fx = trace.wrench[:, 0]
x = trace.pose[:, 0]
limit = config.controller_params.wrench_limits[0]

riding = np.abs(fx) >= 0.9 * limit
print("x force limit: %.1f N" % limit)
print("fraction of run riding the limit (|fx| > 90%%): %.0f%%" % (1e2 * riding.mean()))
print("peak |fx|: %.2f N" % np.abs(fx).max())

target = config.desired_pose.position
final = trace.pose[-1, :3]
print("drop-off target x: %.2f m, reached: %.4f m (err %.1f mm)"
      % (target[0], final[0], 1e3 * np.linalg.norm(final - target)))

s = summarize(trace, limits=config.controller_params.wrench_limits,
              desired_pose=config.desired_pose)
print("worst violation over the run: %.2f%% of the limit" % (1e2 * s["worst_violation_frac"]))

fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(8, 6))
ax1.plot(t, np.abs(fx))
ax1.axhline(limit, color="r", ls="--")
ax1.set_ylabel("|fx| [N]")
ax2.plot(t, x)
ax2.axhline(target[0], color="g", ls=":")
ax2.set_xlabel("time [s]")
ax2.set_ylabel("x [m]")
fig.tight_layout()
out = HERE / "human_guide.png"
fig.savefig(out, dpi=120)
print("wrote", out)
