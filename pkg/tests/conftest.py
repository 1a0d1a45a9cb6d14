"""Shared fixtures, random generators, and independent oracles."""

from __future__ import annotations

import numpy as np
import pytest

from affineswarm import (
    Agent,
    AtCoordinates,
    Phase,
    PhaseSchedule,
    ReferenceConfig,
    build_matrices,
    compute_alpha,
    compute_follower_weights,
    load_default_scenario,
)


@pytest.fixture(scope="session")
def default_scenario():
    return load_default_scenario()


@pytest.fixture(scope="session")
def default_matrices(default_scenario):
    cfg = default_scenario.config
    return build_matrices(cfg, compute_follower_weights(cfg), compute_alpha(cfg))


def barycentric_oracle(point, triangle):
    """Area-ratio barycentric coordinates (independent of the linear solve)."""

    def signed_area(a, b, c):
        return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))

    a, b, c = triangle
    total = signed_area(a, b, c)
    return np.array(
        [
            signed_area(point, b, c) / total,
            signed_area(a, point, c) / total,
            signed_area(a, b, point) / total,
        ]
    )


def consensus_fixed_point(W, L, leader_values, tol=1e-13, max_iter=200_000):
    """Iterate x <- (I + W) x + L x_L to its fixed point.

    Independent oracle for the containment map: never inverts W. Works
    column-wise on (3, k) leader values; returns the (N, k) limit.
    """
    n = W.shape[0]
    leader_values = np.atleast_2d(np.asarray(leader_values, dtype=float))
    if leader_values.shape[0] != 3:
        leader_values = leader_values.T
    x = np.zeros((n, leader_values.shape[1]))
    m = np.eye(n) + W
    drive = L @ leader_values
    for _ in range(max_iter):
        x_next = m @ x + drive
        if np.abs(x_next - x).max() <= tol:
            return x_next
        x = x_next
    raise AssertionError("fixed-point iteration did not converge")


def random_config(rng: np.random.Generator, n_followers: int) -> ReferenceConfig:
    """A random valid configuration: containment and reachability hold.

    Leaders form a well-conditioned triangle; followers are sampled
    strictly inside the leader triangle; each follower's in-neighbor
    triple is drawn from the leaders plus earlier followers, accepting
    only triples that strictly contain it with margin (the leader triple
    always works as a fallback).
    """
    while True:
        leaders_xy = rng.uniform(-2.0, 2.0, size=(3, 2))
        m = np.vstack([leaders_xy.T, np.ones(3)])
        if abs(np.linalg.det(m)) > 0.5:
            break
    agents = [
        Agent(id=f"u{i + 1}", role="leader", x=float(p[0]), y=float(p[1]))
        for i, p in enumerate(leaders_xy)
    ]
    follower_xy = []
    for k in range(n_followers):
        bary = rng.dirichlet([2.0, 2.0, 2.0])
        while bary.min() < 0.06:
            bary = rng.dirichlet([2.0, 2.0, 2.0])
        p = bary @ leaders_xy
        agents.append(Agent(id=f"f{k + 1}", role="follower", x=float(p[0]), y=float(p[1])))
        follower_xy.append(p)

    ids = [a.id for a in agents]
    xy = np.array([[a.x, a.y] for a in agents])
    graph: dict[str, tuple[str, str, str]] = {}
    for k in range(n_followers):
        fid = f"f{k + 1}"
        own = follower_xy[k]
        pool = list(range(3 + k))  # leaders plus earlier followers
        chosen = None
        for _ in range(12):
            tri_idx = rng.choice(pool, size=3, replace=False)
            tri = xy[tri_idx]
            mm = np.vstack([tri.T, np.ones(3)])
            if abs(np.linalg.det(mm)) < 1e-6:
                continue
            bary = np.linalg.solve(mm, np.array([own[0], own[1], 1.0]))
            if bary.min() > 0.02:
                chosen = tuple(ids[i] for i in tri_idx)
                break
        if chosen is None:
            chosen = ("u1", "u2", "u3")
        graph[fid] = chosen
    return ReferenceConfig.from_agents(agents, z=1.0, in_neighbors=graph)


def random_schedule(rng: np.random.Generator, z: float = 1.0) -> PhaseSchedule:
    """A random gentle schedule starting from identity coordinates.

    Strains stay in [0.55, 1.05] and per-phase translations below 0.6 m
    over 3-5 s phases, so a well-tuned tracker keeps its measured error
    far below the margin the strain floor leaves.
    """
    n_phases = int(rng.integers(2, 4))
    t = 0.0
    prev = AtCoordinates()
    phases = []
    for _ in range(n_phases):
        dt = float(rng.uniform(3.0, 5.0))
        end = AtCoordinates(
            d1=prev.d1 + float(rng.uniform(-0.6, 0.6)),
            d2=prev.d2 + float(rng.uniform(-0.6, 0.6)),
            lambda1=float(rng.uniform(0.55, 1.05)),
            lambda2=float(rng.uniform(0.55, 1.05)),
            psi_d=float(rng.uniform(-0.5, 0.5)),
            psi_r=float(rng.uniform(-0.5, 0.5)),
        )
        phases.append(Phase(t0=t, tf=t + dt, start=prev, end=end))
        t += dt
        prev = end
    return PhaseSchedule(phases=tuple(phases), z=z)
