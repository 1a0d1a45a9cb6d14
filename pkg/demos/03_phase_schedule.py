"""Sample the bundled deformation schedule and the leader trajectories.

The schedule chains three ten-second phases (contract, rotate, shear and
rescale) under one 4 m translation ramp, all blended with the quintic
step so position, velocity, and acceleration stay continuous. Writes the
leader plan to leader_plan.csv next to this script.
"""

from pathlib import Path

import numpy as np

from affineswarm import (
    leader_trajectory,
    load_default_scenario,
    quintic_blend,
    vertical_profile,
)
from affineswarm.bundle import plan_csv_text

scenario = load_default_scenario()
sched = scenario.schedule

print("quintic blend: beta(0)=%.1f beta(0.25)=%s beta(0.5)=%.1f beta(1)=%.1f"
      % (quintic_blend(0.0), quintic_blend(0.25), quintic_blend(0.5), quintic_blend(1.0)))

print("\ncommanded coordinates over the schedule:")
print(f"{'t':>5} {'lam1':>7} {'lam2':>7} {'psi_d':>7} {'psi_r':>7} {'d1':>7}")
for t in np.arange(0.0, 31.0, 2.5):
    c = sched.coords_at(float(t))
    print(f"{t:5.1f} {c.lambda1:7.3f} {c.lambda2:7.3f} {c.psi_d:7.3f} "
          f"{c.psi_r:7.3f} {c.d1:7.3f}")

traj = leader_trajectory(sched, scenario.config, tick_rate=100.0)
out = Path(__file__).with_name("leader_plan.csv")
out.write_text(plan_csv_text(traj))
print(f"\nwrote {len(traj.times) * 3} plan rows to {out.name}")
print("leader cf1 at t=0:  ", traj.positions[0, 0])
print("leader cf1 at t=30: ", traj.positions[-1, 0])

# Takeoff and landing legs run outside the affine framework.
times, z = vertical_profile(z_target=1.0, duration=3.0, direction="up", tick_rate=10.0)
print("\ntakeoff ramp to 1 m:", np.round(z[::6], 3))
