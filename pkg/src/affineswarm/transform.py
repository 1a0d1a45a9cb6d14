"""Planar affine-transformation kernel.

A team-level affine map sends a reference point ``a`` to ``Q a + d``.
For a planar deformation the 3x3 Jacobian factors as

    Q = R_r . R_D . Lambda . R_D^T

where ``R_r`` is a yaw rotation (rigid-body part), ``R_D`` is a yaw
rotation aligning the principal strain axes, and
``Lambda = diag(lambda1, lambda2, 1)`` holds the principal strains.
Together with the planar translation ``(d1, d2)`` this gives six
generalized coordinates for the whole map.

The factorization carries the collision-safety argument: for any planar
offset ``v``, ``|Q v| >= min(lambda1, lambda2) |v|``, so keeping both
strains above ``2 (delta + agent_radius) / d_min`` guarantees that two
agents whose reference positions are at least ``d_min`` apart can never
touch, even when every agent tracks its desired position with error up
to ``delta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Strain gap below which the strain-axis angle is treated as undefined
# and canonicalized to zero (the stretch is then numerically isotropic).
UNIFORM_STRAIN_TOL = 1e-9

# Max deviation of the third row/column from (0, 0, 1) accepted by
# decompose_jacobian before the matrix is rejected as non-planar.
PLANAR_TOL = 1e-9


def euler_matrix(beta1: float, beta2: float, beta3: float) -> np.ndarray:
    """Rotation matrix for the 3-2-1 Euler angle sequence.

    ``beta1`` rolls about x, ``beta2`` pitches about y, ``beta3`` yaws
    about z; the result is orthogonal with determinant +1.
    """
    c1, s1 = math.cos(beta1), math.sin(beta1)
    c2, s2 = math.cos(beta2), math.sin(beta2)
    c3, s3 = math.cos(beta3), math.sin(beta3)
    return np.array(
        [
            [c2 * c3, s1 * s2 * c3 - c1 * s3, c1 * s2 * c3 + s1 * s3],
            [c2 * s3, s1 * s2 * s3 + c1 * c3, c1 * s2 * s3 - s1 * c3],
            [-s2, s1 * c2, c1 * c2],
        ]
    )


def _yaw(angle: float) -> np.ndarray:
    return euler_matrix(0.0, 0.0, angle)


def _wrap_half_pi(angle: float) -> float:
    """Wrap an angle defined modulo pi into (-pi/2, pi/2]."""
    a = math.remainder(angle, math.pi)
    if a <= -math.pi / 2.0:
        a += math.pi
    return a


@dataclass(frozen=True)
class AtCoordinates:
    """The six generalized coordinates of a planar affine transformation.

    ``d1, d2`` translate in the plane [m], ``lambda1, lambda2`` are the
    principal strains (must be positive), ``psi_d`` is the strain-axis
    (shear) angle and ``psi_r`` the rigid-body yaw [rad].
    """

    d1: float = 0.0
    d2: float = 0.0
    lambda1: float = 1.0
    lambda2: float = 1.0
    psi_d: float = 0.0
    psi_r: float = 0.0

    def __post_init__(self):
        if not (self.lambda1 > 0.0 and self.lambda2 > 0.0):
            raise ValueError(
                f"principal strains must be positive, got "
                f"({self.lambda1}, {self.lambda2})"
            )

    def canonical(self) -> "AtCoordinates":
        """Equivalent coordinates with lambda1 >= lambda2 and psi_d in (-pi/2, pi/2].

        The stretch ``R_D Lambda R_D^T`` is invariant under swapping the
        strains while turning the axis by pi/2, and under turning the axis
        by pi; this picks the unique representative. When the strains are
        equal within ``UNIFORM_STRAIN_TOL`` the axis angle is undefined and
        set to zero.
        """
        l1, l2, psi = self.lambda1, self.lambda2, self.psi_d
        if l1 < l2:
            l1, l2 = l2, l1
            psi += math.pi / 2.0
        if abs(l1 - l2) <= UNIFORM_STRAIN_TOL:
            psi = 0.0
        else:
            psi = _wrap_half_pi(psi)
        return AtCoordinates(self.d1, self.d2, l1, l2, psi, self.psi_r)

    def translation(self, z: float = 0.0) -> np.ndarray:
        """Translation vector (d1, d2, z).

        The altitude offset is zero by default: reference positions carry
        the flight-plane height themselves, so a planar map leaves it
        untouched.
        """
        return np.array([self.d1, self.d2, z])


@dataclass(frozen=True)
class JacobianDecomposition:
    """A planar Jacobian together with its rotation/stretch factors.

    Satisfies ``Q = R_r @ R_D @ Lambda @ R_D.T`` with ``R_r = yaw(psi_r)``,
    ``R_D = yaw(psi_d)`` and ``Lambda = diag(lambda1, lambda2, 1)``.
    """

    Q: np.ndarray
    R_r: np.ndarray
    R_D: np.ndarray
    Lambda: np.ndarray
    lambda1: float
    lambda2: float
    psi_d: float
    psi_r: float

    def coordinates(self, d1: float = 0.0, d2: float = 0.0) -> AtCoordinates:
        return AtCoordinates(d1, d2, self.lambda1, self.lambda2, self.psi_d, self.psi_r)


def assemble_jacobian(coords: AtCoordinates) -> JacobianDecomposition:
    """Build the Jacobian ``R_r R_D Lambda R_D^T`` from generalized coordinates.

    The third row and column of the result are (0, 0, 1): a planar map
    leaves altitude fixed.
    """
    r_r = _yaw(coords.psi_r)
    r_d = _yaw(coords.psi_d)
    lam = np.diag([coords.lambda1, coords.lambda2, 1.0])
    q = r_r @ r_d @ lam @ r_d.T
    return JacobianDecomposition(
        Q=q,
        R_r=r_r,
        R_D=r_d,
        Lambda=lam,
        lambda1=coords.lambda1,
        lambda2=coords.lambda2,
        psi_d=coords.psi_d,
        psi_r=coords.psi_r,
    )


def decompose_jacobian(q: np.ndarray) -> JacobianDecomposition:
    """Polar-decompose a planar Jacobian into rotation and principal strains.

    Factors ``q`` as ``R_r U`` with ``U = R_D Lambda R_D^T`` symmetric
    positive definite, then canonicalizes so ``lambda1 >= lambda2`` and
    ``psi_d`` lies in (-pi/2, pi/2] (zero when the strains coincide).

    Raises ``ValueError`` when ``q`` is not (3, 3), when its third
    row/column deviates from (0, 0, 1) by more than ``PLANAR_TOL``, or
    when the planar block is singular or orientation-reversing
    (non-positive determinant).
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (3, 3):
        raise ValueError(f"expected a 3x3 Jacobian, got shape {q.shape}")
    planar_dev = max(
        abs(q[2, 0]), abs(q[2, 1]), abs(q[2, 2] - 1.0), abs(q[0, 2]), abs(q[1, 2])
    )
    if planar_dev > PLANAR_TOL:
        raise ValueError(
            f"Jacobian is not planar: third row/column deviates from (0,0,1) "
            f"by {planar_dev:.3e}"
        )
    block = q[:2, :2]
    det = float(np.linalg.det(block))
    if det <= 1e-12:
        raise ValueError(
            f"planar block must have positive determinant (got {det:.3e}); "
            "singular or reflecting maps are rejected"
        )
    u_svd, s, vt = np.linalg.svd(block)
    rot = u_svd @ vt  # proper rotation because det > 0
    psi_r = math.atan2(rot[1, 0], rot[0, 0])
    lambda1, lambda2 = float(s[0]), float(s[1])
    if lambda1 - lambda2 <= UNIFORM_STRAIN_TOL:
        psi_d = 0.0
    else:
        # Right singular vector of the larger strain = first principal axis.
        psi_d = _wrap_half_pi(math.atan2(vt[0, 1], vt[0, 0]))
    r_r = _yaw(psi_r)
    r_d = _yaw(psi_d)
    lam = np.diag([lambda1, lambda2, 1.0])
    return JacobianDecomposition(
        Q=q,
        R_r=r_r,
        R_D=r_d,
        Lambda=lam,
        lambda1=lambda1,
        lambda2=lambda2,
        psi_d=psi_d,
        psi_r=psi_r,
    )


def apply_at(q: np.ndarray, d: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Global desired position ``Q a + d`` of the reference point ``a``."""
    return np.asarray(q, dtype=float) @ np.asarray(a, dtype=float) + np.asarray(
        d, dtype=float
    )


def transform_points(q: np.ndarray, d: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Apply ``Q a + d`` to every row of an (N, 3) array of points."""
    pts = np.asarray(points, dtype=float)
    return pts @ np.asarray(q, dtype=float).T + np.asarray(d, dtype=float)


def min_scaling_bound(delta: float, radius: float, d_min: float) -> float:
    """Smallest admissible principal strain for collision-free deformation.

    ``2 (delta + radius) / d_min``: two agents whose reference points are
    ``d_min`` apart keep a positive surface gap as long as both strains
    stay at or above this value, where ``delta`` bounds every agent's
    tracking error and ``radius`` is the enclosing-circle radius.
    """
    if not d_min > 0.0:
        raise ValueError(f"d_min must be positive, got {d_min}")
    if delta < 0.0 or radius < 0.0:
        raise ValueError("delta and radius must be non-negative")
    return 2.0 * (delta + radius) / d_min
