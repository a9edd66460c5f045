"""Line-of-sight geometry between spacecraft.

Unit sight-line vectors in the inertial frame (s) and in observer body
frames (b = R^T s), their angular velocities mu (s' = mu x s), derived
cross-product directions, and exact relative-attitude determination from
four LOS measurements of a spacecraft pair sharing a common object.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from math import sqrt

from .so3 import cross, project_so3

# Cross products with norm at or below this are treated as degenerate geometry.
CROSS_TOL = 1e-8
# Positions closer than this (m) are treated as coincident.
COINCIDENT_TOL = 1e-9


class GeometryError(ValueError):
    """Degenerate line-of-sight geometry (coincident or collinear objects)."""


def los_unit(x_from: np.ndarray, x_to: np.ndarray) -> np.ndarray:
    """Unit vector from observer toward target, inertial frame."""
    d = x_to - x_from
    n = sqrt(d @ d)
    if n <= COINCIDENT_TOL:
        raise GeometryError(f"coincident positions (separation {n:.3e} m)")
    return d / n


def to_body(r: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Express an inertial sight line in the observer's body frame: b = R^T s."""
    return r.T @ s


def normalized_cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a x b) / ||a x b||; raises GeometryError for near-collinear inputs."""
    w = cross(a, b)
    n = sqrt(w @ w)
    if n <= CROSS_TOL:
        raise GeometryError(f"collinear sight lines (cross norm {n:.3e})")
    return w / n


def los_rate(x_from: np.ndarray, x_to: np.ndarray,
             v_from: np.ndarray, v_to: np.ndarray) -> np.ndarray:
    """Angular velocity mu of the sight line s from relative motion.

    s' = (I - s s^T)(v_to - v_from)/||x_to - x_from||. The component of mu
    along s is unobservable from s' = mu x s; the minimal-norm solution
    mu = s x s' (with mu . s = 0) is returned.
    """
    d = x_to - x_from
    n = sqrt(d @ d)
    if n <= COINCIDENT_TOL:
        raise GeometryError(f"coincident positions (separation {n:.3e} m)")
    s = d / n
    v_rel = v_to - v_from
    s_dot = (v_rel - s * (s @ v_rel)) / n
    return cross(s, s_dot)


def los_rate_cross(s_ij: np.ndarray, s_ik: np.ndarray,
                   mu_ij: np.ndarray, mu_ik: np.ndarray) -> np.ndarray:
    """Angular velocity of the normalized cross direction s_ijk.

    Differentiates s_ijk = (s_ij x s_ik)/||s_ij x s_ik|| analytically using
    s' = mu x s for each factor, then returns the minimal-norm
    mu_ijk = s_ijk x s_ijk'.
    """
    w = cross(s_ij, s_ik)
    n = sqrt(w @ w)
    if n <= CROSS_TOL:
        raise GeometryError(f"collinear sight lines (cross norm {n:.3e})")
    w_dot = cross(cross(mu_ij, s_ij), s_ik) + cross(s_ij, cross(mu_ik, s_ik))
    s_c = w / n
    s_c_dot = (w_dot - s_c * (s_c @ w_dot)) / n
    return cross(s_c, s_c_dot)


@dataclass
class LeaderLosMeasurements:
    """Leader sight lines toward the two reference objects A and B.

    bA, bB are expressed in the leader body frame; sA, sB and the angular
    velocities muA, muB in the inertial frame.
    """
    bA: np.ndarray
    bB: np.ndarray
    sA: np.ndarray
    sB: np.ndarray
    muA: np.ndarray
    muB: np.ndarray

    def __post_init__(self):
        if np.linalg.norm(cross(self.sA, self.sB)) <= CROSS_TOL:
            raise GeometryError("reference objects A and B are collinear from the leader")


@dataclass
class LosPairMeasurements:
    """The four LOS measurements of a spacecraft pair plus derived cross
    directions. Index 1 is the spacecraft ahead in the chain, index 2 the
    follower, index 3 the common object; b_ij is expressed in body frame i.

    The mu fields (inertial angular velocities of the corresponding sight
    lines) are only needed for diagnostics and may be left as None.
    """
    b12: np.ndarray
    b13: np.ndarray
    b21: np.ndarray
    b23: np.ndarray
    b123: np.ndarray
    b213: np.ndarray
    mu12: np.ndarray | None = None
    mu21: np.ndarray | None = None
    mu123: np.ndarray | None = None
    mu213: np.ndarray | None = None

    def __post_init__(self):
        if np.linalg.norm(cross(self.b12, self.b13)) <= CROSS_TOL:
            raise GeometryError("common object lies on the line joining the pair "
                                "(b12 x b13 degenerate)")
        if np.linalg.norm(cross(self.b21, self.b23)) <= CROSS_TOL:
            raise GeometryError("common object lies on the line joining the pair "
                                "(b21 x b23 degenerate)")


def pair_measurements_from_states(r1: np.ndarray, r2: np.ndarray,
                                  x1: np.ndarray, x2: np.ndarray,
                                  x3: np.ndarray,
                                  v1: np.ndarray | None = None,
                                  v2: np.ndarray | None = None,
                                  v3: np.ndarray | None = None) -> LosPairMeasurements:
    """Exact LOS measurements of the pair (1, 2) with common object 3.

    When the three velocities are supplied the sight-line angular
    velocities are filled in as well.
    """
    s12 = los_unit(x1, x2)
    s13 = los_unit(x1, x3)
    s23 = los_unit(x2, x3)
    b12 = r1.T @ s12
    b13 = r1.T @ s13
    b21 = r2.T @ (-s12)
    b23 = r2.T @ s23
    mu12 = mu21 = mu123 = mu213 = None
    if v1 is not None:
        mu12 = los_rate(x1, x2, v1, v2)
        mu21 = los_rate(x2, x1, v2, v1)
        mu13 = los_rate(x1, x3, v1, v3)
        mu23 = los_rate(x2, x3, v2, v3)
        mu123 = los_rate_cross(s12, s13, mu12, mu13)
        mu213 = los_rate_cross(-s12, s23, mu21, mu23)
    return LosPairMeasurements(
        b12=b12, b13=b13, b21=b21, b23=b23,
        b123=normalized_cross(b12, b13),
        b213=normalized_cross(b21, b23),
        mu12=mu12, mu21=mu21, mu123=mu123, mu213=mu213)


def solve_relative_attitude(m: LosPairMeasurements) -> np.ndarray:
    """Relative attitude Q21 = R1^T R2 from the four LOS measurements.

    Q21 is the unique rotation mapping b21 to -b12 and b213 to -b123: with
    the orthonormal triads T1 = [-b12, -b123, b12 x b123] and
    T2 = [b21, b213, b21 x b213], Q21 = T1 T2^T (projected to SO(3) to
    absorb measurement round-off).
    """
    t1 = np.column_stack((-m.b12, -m.b123, cross(m.b12, m.b123)))
    t2 = np.column_stack((m.b21, m.b213, cross(m.b21, m.b213)))
    return project_so3(t1 @ t2.T)
