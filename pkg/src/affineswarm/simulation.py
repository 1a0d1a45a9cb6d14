"""Deterministic tracking simulation of the leader-follower team.

Every agent is a double integrator with proportional-derivative tracking
of its reference position. Leaders take their reference straight from the
planner (the commanded affine map); followers take the weighted sum of
their in-neighbors' actual positions, read from a snapshot taken
``delay_ticks`` control ticks earlier. Followers never see the commanded
map; their global desired positions are computed per tick for logging and
error measurement only.

The engine advances at a fixed integration step ``dt`` with references
held constant between control ticks, so identical inputs always produce
bit-identical traces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigError, SafetyError, SimulationError
from .formation import FormationMatrices, ReferenceConfig, validate_config
from .phases import PhaseSchedule, check_schedule_safety, desired_positions


@dataclass(frozen=True)
class SimParams:
    """Integration and tracker parameters.

    The control period must be an integer multiple of ``dt``. With the
    default gains the tracker is critically damped (kd = 2 sqrt(kp)).
    ``duration`` of None means "schedule span plus a 10 s settling hold".
    ``delay_ticks`` is the staleness, in control ticks, of the neighbor
    snapshot a follower reads (1 mimics a motion-capture pipeline that
    delivers the previous sample).
    """

    dt: float = 0.001
    control_rate: float = 100.0
    kp: float = 25.0
    kd: float = 10.0
    duration: float | None = None
    delay_ticks: int = 1

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.control_rate <= 0.0:
            raise ValueError("control_rate must be positive")
        if self.kp <= 0.0 or self.kd <= 0.0:
            raise ValueError("tracker gains must be positive")
        if self.delay_ticks < 0:
            raise ValueError("delay_ticks must be >= 0")
        substeps = 1.0 / (self.dt * self.control_rate)
        if abs(substeps - round(substeps)) > 1e-9 or round(substeps) < 1:
            raise ValueError(
                f"control period 1/{self.control_rate} Hz is not an integer "
                f"multiple of dt={self.dt}"
            )

    @property
    def substeps(self) -> int:
        return int(round(1.0 / (self.dt * self.control_rate)))


@dataclass(frozen=True)
class AgentState:
    position: np.ndarray
    velocity: np.ndarray


def agent_step(state: AgentState, reference: np.ndarray, params: SimParams) -> AgentState:
    """One semi-implicit integration step of the PD tracker.

    acceleration = kp (reference - position) - kd velocity; velocity is
    updated first, then position uses the new velocity.
    """
    ref = np.asarray(reference, dtype=float)
    acc = params.kp * (ref - state.position) - params.kd * state.velocity
    vel = state.velocity + params.dt * acc
    pos = state.position + params.dt * vel
    return AgentState(position=pos, velocity=vel)


def follower_reference(
    snapshot: Mapping[str, np.ndarray],
    neighbor_ids: Sequence[str],
    weights: np.ndarray,
) -> np.ndarray:
    """Weighted sum of in-neighbor positions from a local snapshot.

    ``snapshot`` is the follower's entire world view: it only ever
    contains its three in-neighbors. A missing neighbor is a simulation
    integrity bug and raises ``SimulationError``.
    """
    missing = [j for j in neighbor_ids if j not in snapshot]
    if missing:
        raise SimulationError(f"snapshot is missing in-neighbors {missing}")
    w = np.asarray(weights, dtype=float)
    stacked = np.array([snapshot[j] for j in neighbor_ids], dtype=float)
    return w @ stacked


@dataclass
class SimTrace:
    """Per-tick record of a run, in config (matrix) agent order."""

    times: np.ndarray  # (T,)
    agent_ids: tuple[str, ...]
    roles: tuple[str, ...]
    positions: np.ndarray  # (T, N, 3) actual
    references: np.ndarray  # (T, N, 3) control inputs
    desired: np.ndarray  # (T, N, 3) commanded-map images, logging only

    def agent_index(self, agent_id: str) -> int:
        return self.agent_ids.index(agent_id)

    @property
    def tick_rate(self) -> float:
        if len(self.times) < 2:
            return 0.0
        return 1.0 / float(self.times[1] - self.times[0])


def run_simulation(
    cfg: ReferenceConfig,
    matrices: FormationMatrices,
    schedule: PhaseSchedule,
    params: SimParams,
    *,
    safety_bound: float | None = None,
    skip_safety_check: bool = False,
    initial_positions: Mapping[str, np.ndarray] | None = None,
    initial_velocities: Mapping[str, np.ndarray] | None = None,
) -> SimTrace:
    """Run the decentralized acquisition loop and record a full trace.

    Agents start at their reference positions (override per id with
    ``initial_positions``/``initial_velocities``). When ``safety_bound``
    is given the commanded strains are prechecked against it and a
    failing schedule raises ``SafetyError`` unless ``skip_safety_check``
    (for deliberate negative runs).
    """
    report = validate_config(cfg)
    if not report.ok:
        raise ConfigError("invalid configuration: " + "; ".join(report.messages()))
    if matrices.agent_ids != cfg.ids:
        raise ConfigError(
            "matrices were built for a different configuration "
            f"({matrices.agent_ids} vs {cfg.ids})"
        )
    if safety_bound is not None and not skip_safety_check:
        safety = check_schedule_safety(schedule, safety_bound, params.control_rate)
        if not safety.passed:
            raise SafetyError(
                f"commanded min strain {safety.min_strain_observed:.6g} is below "
                f"the bound {safety_bound:.6g}; violating intervals "
                f"{safety.violations} (pass skip_safety_check to run anyway)"
            )

    n = len(cfg.agents)
    ids = cfg.ids
    roles = tuple(a.role for a in cfg.agents)
    duration = params.duration
    if duration is None:
        duration = schedule.t_end - schedule.t_start + 10.0
    ticks = int(round(duration * params.control_rate))
    if ticks < 1:
        raise ValueError("duration must cover at least one control tick")

    pos = cfg.reference_positions()
    vel = np.zeros((n, 3))
    if initial_positions:
        for aid, p in initial_positions.items():
            pos[cfg.index_of(aid)] = np.asarray(p, dtype=float)
    if initial_velocities:
        for aid, v in initial_velocities.items():
            vel[cfg.index_of(aid)] = np.asarray(v, dtype=float)

    followers = [
        (
            cfg.index_of(fid),
            cfg.in_neighbors[fid],
            np.array([cfg.index_of(j) for j in cfg.in_neighbors[fid]]),
            matrices.weights[fid],
        )
        for fid in cfg.follower_ids
    ]

    times = schedule.t_start + np.arange(ticks + 1) / params.control_rate
    history = np.empty((ticks + 1, n, 3))
    trace_pos = np.empty((ticks + 1, n, 3))
    trace_ref = np.empty((ticks + 1, n, 3))
    trace_des = np.empty((ticks + 1, n, 3))

    dt = params.dt
    kp, kd = params.kp, params.kd
    substeps = params.substeps

    for k in range(ticks + 1):
        t_k = float(times[k])
        if not np.all(np.isfinite(pos)) or not np.all(np.isfinite(vel)):
            bad = np.where(~np.isfinite(pos).all(axis=1))[0]
            names = [ids[i] for i in bad] if len(bad) else ids
            raise SimulationError(
                f"state diverged at t={t_k:.3f}s (tick {k}); non-finite agents: "
                f"{names}"
            )
        history[k] = pos
        des = desired_positions(cfg, schedule, t_k)
        refs = np.empty((n, 3))
        refs[:3] = des[:3]
        snap = history[max(k - params.delay_ticks, 0)]
        for row, nbr_ids, nbr_rows, w in followers:
            view = {aid: snap[r] for aid, r in zip(nbr_ids, nbr_rows)}
            refs[row] = follower_reference(view, nbr_ids, w)

        trace_pos[k] = pos
        trace_ref[k] = refs
        trace_des[k] = des

        if k < ticks:
            for _ in range(substeps):
                vel = vel + dt * (kp * (refs - pos) - kd * vel)
                pos = pos + dt * vel

    return SimTrace(
        times=times,
        agent_ids=ids,
        roles=roles,
        positions=trace_pos,
        references=trace_ref,
        desired=trace_des,
    )
