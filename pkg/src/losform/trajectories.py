"""Desired trajectory generators.

Attitude trajectories are given as 3-2-1 Euler angles (yaw-pitch-roll,
R = Rz(yaw) Ry(pitch) Rx(roll)), each angle a sinusoid-plus-offset signal.
The desired angular velocity and acceleration are recovered by central
finite differencing of the rotation at step h; position trajectories use
the same signal form with analytic derivatives.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .so3 import vee


@dataclass(frozen=True)
class Sinusoid:
    """offset + amplitude * sin(frequency * t + phase)."""
    amplitude: float = 0.0
    frequency: float = 0.0
    phase: float = 0.0
    offset: float = 0.0

    def value(self, t: float) -> float:
        if self.amplitude == 0.0:
            return self.offset
        return self.offset + self.amplitude * np.sin(self.frequency * t + self.phase)

    def rate(self, t: float) -> float:
        if self.amplitude == 0.0:
            return 0.0
        return self.amplitude * self.frequency * np.cos(self.frequency * t + self.phase)

    def accel(self, t: float) -> float:
        if self.amplitude == 0.0:
            return 0.0
        return -self.amplitude * self.frequency ** 2 * np.sin(self.frequency * t + self.phase)

    @property
    def is_constant(self) -> bool:
        return self.amplitude == 0.0 or self.frequency == 0.0


def constant(value: float) -> Sinusoid:
    return Sinusoid(offset=value)


def cosine(amplitude: float, frequency: float, offset: float = 0.0) -> Sinusoid:
    """amplitude * cos(frequency t) + offset, as a phase-shifted sinusoid."""
    return Sinusoid(amplitude=amplitude, frequency=frequency,
                    phase=0.5 * np.pi, offset=offset)


def euler321_rotation(angles) -> np.ndarray:
    """Rotation from 3-2-1 Euler angles (yaw about z, pitch about y, roll
    about x): R = Rz(yaw) Ry(pitch) Rx(roll)."""
    a, b, g = angles
    ca, sa = np.cos(a), np.sin(a)
    cb, sb = np.cos(b), np.sin(b)
    cg, sg = np.cos(g), np.sin(g)
    return np.array([
        [ca * cb, ca * sb * sg - sa * cg, ca * sb * cg + sa * sg],
        [sa * cb, sa * sb * sg + ca * cg, sa * sb * cg - ca * sg],
        [-sb, cb * sg, cb * cg],
    ])


@dataclass(frozen=True)
class EulerTrajectory:
    """Time-varying 3-2-1 Euler-angle attitude trajectory with finite
    differencing step h for the angular rates."""
    yaw: Sinusoid = constant(0.0)
    pitch: Sinusoid = constant(0.0)
    roll: Sinusoid = constant(0.0)
    h: float = 1e-5

    def __post_init__(self):
        if self.h <= 0.0:
            raise ValueError("finite-difference step h must be positive")

    @property
    def is_constant(self) -> bool:
        return (self.yaw.is_constant and self.pitch.is_constant
                and self.roll.is_constant)

    def rotation(self, t: float) -> np.ndarray:
        return euler321_rotation((self.yaw.value(t), self.pitch.value(t),
                                  self.roll.value(t)))


def _body_rate(r_minus: np.ndarray, r0: np.ndarray, r_plus: np.ndarray,
               h: float) -> np.ndarray:
    # Omega = vee(R^T Rdot), Rdot by central difference; the O(h) symmetric
    # part of the product is discarded by vee's antisymmetrization.
    return vee(r0.T @ ((r_plus - r_minus) / (2.0 * h)), tol=None)


def sample_attitude_trajectory(traj: EulerTrajectory, t: float):
    """Desired rotation, body angular velocity and angular acceleration at
    time t (rates by O(h^2) central differences; exact zeros for constant
    trajectories)."""
    if traj.is_constant:
        return _sample_constant(traj)
    return _sample_time_varying(traj, t)


@lru_cache(maxsize=64)
def _sample_constant(traj: EulerTrajectory):
    return traj.rotation(0.0), np.zeros(3), np.zeros(3)


# RK4 evaluates the controls at repeated stage times (the two half-step
# stages coincide, and each step's end time recurs as the next step's start),
# so memoizing on (trajectory, time) roughly halves the sampling work.
@lru_cache(maxsize=64)
def _sample_time_varying(traj: EulerTrajectory, t: float):
    h = traj.h
    r_m2 = traj.rotation(t - 2.0 * h)
    r_m1 = traj.rotation(t - h)
    r_0 = traj.rotation(t)
    r_p1 = traj.rotation(t + h)
    r_p2 = traj.rotation(t + 2.0 * h)
    omega = _body_rate(r_m1, r_0, r_p1, h)
    omega_p = _body_rate(r_0, r_p1, r_p2, h)
    omega_m = _body_rate(r_m2, r_m1, r_0, h)
    domega = (omega_p - omega_m) / (2.0 * h)
    return r_0, omega, domega


@dataclass(frozen=True)
class PositionTrajectory:
    """Per-component sinusoid position signal with analytic velocity and
    acceleration."""
    x: Sinusoid = constant(0.0)
    y: Sinusoid = constant(0.0)
    z: Sinusoid = constant(0.0)

    def position(self, t: float) -> np.ndarray:
        return np.array([self.x.value(t), self.y.value(t), self.z.value(t)])

    def velocity(self, t: float) -> np.ndarray:
        return np.array([self.x.rate(t), self.y.rate(t), self.z.rate(t)])

    def acceleration(self, t: float) -> np.ndarray:
        return np.array([self.x.accel(t), self.y.accel(t), self.z.accel(t)])


def fixed_point(p) -> PositionTrajectory:
    px, py, pz = p
    return PositionTrajectory(constant(px), constant(py), constant(pz))


def desired_leader_los(r1_d: np.ndarray, sA: np.ndarray, sB: np.ndarray):
    """Desired body-frame sight lines b_j^d = R1d^T s_j."""
    return r1_d.T @ sA, r1_d.T @ sB
