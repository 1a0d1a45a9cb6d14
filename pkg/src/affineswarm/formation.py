"""Reference configurations, communication graphs, and consensus matrices.

A team is three leaders plus any number of followers, all at fixed
reference positions in a horizontal plane. Each follower listens to
exactly three in-neighbors and must sit strictly inside their triangle,
which makes its communication weights (the barycentric coordinates of
its reference position in that triangle) strictly positive and unique.

From the weights we assemble:

* ``W`` (N x N): -1 on the diagonal, follower rows carry their weights in
  the in-neighbor columns, leader rows are pure -1 diagonal entries.
* ``L`` (N x 3): selector of the leader block, ``[I_3; 0]``.
* ``H`` (N x 3): leader rows are identity rows; follower rows hold the
  barycentric coordinates of the follower with respect to the leaders.

When every follower is reachable from every leader, ``W`` is Hurwitz and
``H = -W^{-1} L``, so leader positions alone determine where the whole
team settles. ``verify_spectrum`` checks both facts numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

ROLE_LEADER = "leader"
ROLE_FOLLOWER = "follower"

# Barycentric coordinates at or below this value count as "on the
# boundary": the follower is rejected as not strictly contained.
CONTAINMENT_TOL = 1e-9

# |det| threshold below which a neighbor/leader triangle is degenerate.
COLLINEAR_TOL = 1e-12

# Linear solves for barycentric coordinates must sum to 1 at least this
# well before renormalization.
PARTITION_TOL = 1e-12


@dataclass(frozen=True)
class Agent:
    id: str
    role: str
    x: float
    y: float


@dataclass(frozen=True)
class ReferenceConfig:
    """Initial team layout: agents in matrix order plus the follower graph.

    ``agents`` must list the three leaders first; ``from_agents`` reorders
    an arbitrary listing. ``in_neighbors`` maps each follower id to its
    ordered triple of in-neighbor ids. ``z`` is the shared plane altitude.
    """

    agents: tuple[Agent, ...]
    z: float
    in_neighbors: dict[str, tuple[str, str, str]] = field(default_factory=dict)

    @staticmethod
    def from_agents(agents, z, in_neighbors) -> "ReferenceConfig":
        """Build a config from any agent ordering (leaders are moved first)."""
        agents = tuple(agents)
        ordered = tuple(a for a in agents if a.role == ROLE_LEADER) + tuple(
            a for a in agents if a.role != ROLE_LEADER
        )
        neighbors = {fid: tuple(nbrs) for fid, nbrs in in_neighbors.items()}
        return ReferenceConfig(agents=ordered, z=float(z), in_neighbors=neighbors)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.agents)

    @property
    def leader_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.agents if a.role == ROLE_LEADER)

    @property
    def follower_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.agents if a.role == ROLE_FOLLOWER)

    def index_of(self, agent_id: str) -> int:
        return self.ids.index(agent_id)

    def agent(self, agent_id: str) -> Agent:
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise KeyError(agent_id)

    def planar_positions(self) -> np.ndarray:
        """(N, 2) array of initial positions in matrix order."""
        return np.array([[a.x, a.y] for a in self.agents], dtype=float)

    def reference_positions(self) -> np.ndarray:
        """(N, 3) array of initial positions with the plane altitude."""
        pts = np.empty((len(self.agents), 3))
        pts[:, :2] = self.planar_positions()
        pts[:, 2] = self.z
        return pts


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def messages(self) -> list[str]:
        return [f"{v.code}: {v.message}" for v in self.violations]


def _barycentric(point: np.ndarray, triangle: np.ndarray) -> np.ndarray:
    """Barycentric coordinates of a planar point in a triangle.

    ``triangle`` is (3, 2), rows are vertices. Raises ``ConfigError`` when
    the vertices are collinear.
    """
    m = np.vstack([triangle.T, np.ones(3)])
    if abs(np.linalg.det(m)) <= COLLINEAR_TOL:
        raise ConfigError("triangle vertices are collinear (singular system)")
    rhs = np.array([point[0], point[1], 1.0])
    return np.linalg.solve(m, rhs)


def _reachable_from(cfg: ReferenceConfig, source: str) -> set[str]:
    """Agents reachable from ``source`` following listener edges."""
    out_edges: dict[str, list[str]] = {a.id: [] for a in cfg.agents}
    for fid, nbrs in cfg.in_neighbors.items():
        for j in nbrs:
            if j in out_edges:
                out_edges[j].append(fid)
    seen = {source}
    stack = [source]
    while stack:
        node = stack.pop()
        for nxt in out_edges[node]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def validate_config(cfg: ReferenceConfig) -> ValidationReport:
    """Check every structural and geometric invariant of a configuration.

    Returns a report listing all violations found; an empty report means
    the configuration is usable. Checks: role counts and ordering, unique
    ids, leader independence, in-neighbor cardinality, leader
    non-collinearity, strict containment of each follower in its
    in-neighbor triangle, and reachability of every follower from every
    leader.
    """
    violations: list[Violation] = []

    ids = [a.id for a in cfg.agents]
    for dup in sorted({i for i in ids if ids.count(i) > 1}):
        violations.append(Violation("duplicate-id", f"agent id {dup!r} repeats"))

    leaders = cfg.leader_ids
    if len(leaders) != 3:
        violations.append(
            Violation("role-count", f"expected exactly 3 leaders, got {len(leaders)}")
        )
    if len(cfg.agents) >= 3 and any(
        a.role != ROLE_LEADER for a in cfg.agents[:3]
    ):
        violations.append(
            Violation("leader-order", "the first three agents must be the leaders")
        )
    for a in cfg.agents:
        if a.role not in (ROLE_LEADER, ROLE_FOLLOWER):
            violations.append(
                Violation("role", f"agent {a.id!r} has unknown role {a.role!r}")
            )

    for lid in leaders:
        if cfg.in_neighbors.get(lid):
            violations.append(
                Violation(
                    "leader-has-neighbors",
                    f"leader {lid!r} must not have in-neighbors",
                )
            )

    id_set = set(ids)
    followers_ok: list[str] = []
    for fid in cfg.follower_ids:
        nbrs = cfg.in_neighbors.get(fid)
        if nbrs is None:
            violations.append(
                Violation("neighbor-count", f"follower {fid!r} has no in-neighbors")
            )
            continue
        if len(nbrs) != 3 or len(set(nbrs)) != 3:
            violations.append(
                Violation(
                    "neighbor-count",
                    f"follower {fid!r} needs exactly 3 distinct in-neighbors, "
                    f"got {list(nbrs)}",
                )
            )
            continue
        bad = [j for j in nbrs if j not in id_set or j == fid]
        if bad:
            violations.append(
                Violation(
                    "unknown-neighbor",
                    f"follower {fid!r} lists invalid in-neighbors {bad}",
                )
            )
            continue
        followers_ok.append(fid)
    for fid in cfg.in_neighbors:
        if fid not in id_set:
            violations.append(
                Violation("unknown-neighbor", f"graph names unknown agent {fid!r}")
            )

    if len(leaders) == 3:
        tri = np.array([[cfg.agent(l).x, cfg.agent(l).y] for l in leaders])
        m = np.vstack([tri.T, np.ones(3)])
        if abs(np.linalg.det(m)) <= COLLINEAR_TOL:
            violations.append(
                Violation(
                    "collinear-leaders",
                    "leader reference positions are collinear; the barycentric "
                    "system is singular",
                )
            )

    for fid in followers_ok:
        agent = cfg.agent(fid)
        tri = np.array(
            [[cfg.agent(j).x, cfg.agent(j).y] for j in cfg.in_neighbors[fid]]
        )
        try:
            coords = _barycentric(np.array([agent.x, agent.y]), tri)
        except ConfigError:
            violations.append(
                Violation(
                    "neighbor-collinear",
                    f"in-neighbors of {fid!r} are collinear",
                )
            )
            continue
        if coords.min() <= CONTAINMENT_TOL:
            violations.append(
                Violation(
                    "containment",
                    f"follower {fid!r} is not strictly inside its in-neighbor "
                    f"triangle (barycentric coordinates {coords.round(12).tolist()})",
                )
            )

    if len(leaders) == 3 and followers_ok:
        for lid in leaders:
            reached = _reachable_from(cfg, lid)
            missing = [fid for fid in cfg.follower_ids if fid not in reached]
            if missing:
                violations.append(
                    Violation(
                        "unreachable",
                        f"no directed path from leader {lid!r} to followers {missing}",
                    )
                )

    return ValidationReport(tuple(violations))


def compute_alpha(cfg: ReferenceConfig) -> dict[str, np.ndarray]:
    """Barycentric coordinates of each follower with respect to the leaders.

    Solves the 3x3 affine system per follower; each triple is renormalized
    to sum exactly to 1 after checking the raw solve already sums to 1
    within ``PARTITION_TOL``.
    """
    leaders = cfg.leader_ids
    if len(leaders) != 3:
        raise ConfigError(f"expected 3 leaders, got {len(leaders)}")
    tri = np.array([[cfg.agent(l).x, cfg.agent(l).y] for l in leaders])
    out: dict[str, np.ndarray] = {}
    for fid in cfg.follower_ids:
        agent = cfg.agent(fid)
        try:
            coeffs = _barycentric(np.array([agent.x, agent.y]), tri)
        except ConfigError as exc:
            raise ConfigError(
                f"leader positions are collinear; cannot place {fid!r}: {exc}"
            ) from exc
        if abs(coeffs.sum() - 1.0) > PARTITION_TOL:
            raise ConfigError(
                f"barycentric solve for {fid!r} sums to {coeffs.sum()!r}, "
                "outside tolerance"
            )
        out[fid] = coeffs / coeffs.sum()
    return out


def compute_follower_weights(cfg: ReferenceConfig) -> dict[str, np.ndarray]:
    """Communication weights of each follower over its in-neighbor triple.

    The weights are the barycentric coordinates of the follower's
    reference position in its in-neighbor triangle; they must be strictly
    positive (strict containment) and are renormalized to sum exactly
    to 1.
    """
    out: dict[str, np.ndarray] = {}
    for fid in cfg.follower_ids:
        nbrs = cfg.in_neighbors.get(fid)
        if nbrs is None or len(nbrs) != 3:
            raise ConfigError(f"follower {fid!r} needs exactly 3 in-neighbors")
        agent = cfg.agent(fid)
        tri = np.array([[cfg.agent(j).x, cfg.agent(j).y] for j in nbrs])
        try:
            w = _barycentric(np.array([agent.x, agent.y]), tri)
        except ConfigError as exc:
            raise ConfigError(f"in-neighbors of {fid!r} are collinear") from exc
        if w.min() <= CONTAINMENT_TOL:
            raise ConfigError(
                f"follower {fid!r} is not strictly inside its in-neighbor "
                f"triangle; weights {w.round(12).tolist()} are not all positive"
            )
        if abs(w.sum() - 1.0) > PARTITION_TOL:
            raise ConfigError(
                f"weight solve for {fid!r} sums to {w.sum()!r}, outside tolerance"
            )
        out[fid] = w / w.sum()
    return out


@dataclass(frozen=True)
class FormationMatrices:
    """Consensus matrices assembled from one configuration.

    ``alpha`` rows follow ``follower_ids`` order; ``weights`` maps each
    follower to its in-neighbor weight triple.
    """

    alpha: np.ndarray
    weights: dict[str, np.ndarray]
    W: np.ndarray
    L: np.ndarray
    H: np.ndarray
    agent_ids: tuple[str, ...]
    follower_ids: tuple[str, ...]


def build_matrices(
    cfg: ReferenceConfig,
    weights: dict[str, np.ndarray],
    alpha: dict[str, np.ndarray],
) -> FormationMatrices:
    """Assemble W, L, and H from precomputed weights and barycentric rows."""
    n = len(cfg.agents)
    ids = cfg.ids
    w_mat = np.zeros((n, n))
    np.fill_diagonal(w_mat, -1.0)
    for fid in cfg.follower_ids:
        row = cfg.index_of(fid)
        for j, wj in zip(cfg.in_neighbors[fid], weights[fid]):
            w_mat[row, cfg.index_of(j)] = wj
    l_mat = np.zeros((n, 3))
    l_mat[:3, :3] = np.eye(3)
    h_mat = np.zeros((n, 3))
    h_mat[:3, :3] = np.eye(3)
    alpha_rows = []
    for fid in cfg.follower_ids:
        h_mat[cfg.index_of(fid)] = alpha[fid]
        alpha_rows.append(alpha[fid])
    alpha_mat = (
        np.array(alpha_rows) if alpha_rows else np.zeros((0, 3))
    )
    return FormationMatrices(
        alpha=alpha_mat,
        weights={fid: np.asarray(weights[fid], dtype=float) for fid in cfg.follower_ids},
        W=w_mat,
        L=l_mat,
        H=h_mat,
        agent_ids=ids,
        follower_ids=cfg.follower_ids,
    )


@dataclass(frozen=True)
class SpectralReport:
    """Numerical check that W is Hurwitz and H equals -W^{-1} L."""

    eigenvalues: np.ndarray
    max_real_part: float
    h_deviation: float
    hurwitz: bool
    ok: bool
    tolerance: float


def verify_spectrum(m: FormationMatrices, tol: float = 1e-9) -> SpectralReport:
    """Check the stability and steady-state identity of the weight matrix.

    All eigenvalues of ``W`` must have negative real part and the
    max-entry deviation ``|H - (-W^{-1} L)|`` must stay within ``tol``.
    A singular ``W`` (e.g. a follower cluster unreachable from the
    leaders) is reported with infinite deviation rather than raised.
    """
    eig = np.linalg.eigvals(m.W)
    max_real = float(eig.real.max())
    # A genuinely zero eigenvalue may round to +-1e-16; require a margin.
    hurwitz = max_real < -1e-12
    try:
        h_from_w = np.linalg.solve(m.W, -m.L)
        deviation = float(np.abs(m.H - h_from_w).max())
    except np.linalg.LinAlgError:
        deviation = float("inf")
    return SpectralReport(
        eigenvalues=eig,
        max_real_part=max_real,
        h_deviation=deviation,
        hurwitz=hurwitz,
        ok=bool(hurwitz and deviation <= tol),
        tolerance=tol,
    )


def min_reference_distance(cfg: ReferenceConfig) -> float:
    """Minimum pairwise distance between initial positions [m]."""
    pts = cfg.planar_positions()
    if len(pts) < 2:
        raise ValueError("need at least 2 agents for a pairwise distance")
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    iu = np.triu_indices(len(pts), k=1)
    return float(dist[iu].min())
