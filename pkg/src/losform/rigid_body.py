"""Rigid-body equations of motion and a fixed-step RK4 integrator.

One spacecraft is a rigid body with state (R, x, v, Omega):

    m x'' = f            (f in the inertial frame)
    J Omega' + Omega x J Omega = u    (u in the body frame)
    R' = R hat(Omega)

The integrator advances the stacked state of all spacecraft with classical
RK4, re-evaluating the control callback at every stage, and re-projects
each attitude onto SO(3) after the step to keep orthonormality drift below
tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .so3 import cross, hat, project_so3

DEFAULT_DT = 1e-3


@dataclass(frozen=True)
class BodyParams:
    """Mass and inertia of one spacecraft. The inertia must be symmetric
    positive definite; its inverse and largest eigenvalue are precomputed."""
    mass: float
    inertia: np.ndarray
    inertia_inv: np.ndarray = field(init=False, repr=False)
    lambda_max: float = field(init=False)

    def __post_init__(self):
        if self.mass <= 0.0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        j = np.asarray(self.inertia, dtype=float)
        if j.shape != (3, 3):
            raise ValueError("inertia must be a 3x3 matrix")
        if np.abs(j - j.T).max() > 1e-12:
            raise ValueError("inertia matrix must be symmetric")
        eigs = np.linalg.eigvalsh(j)
        if eigs.min() <= 0.0:
            raise ValueError("inertia matrix must be positive definite")
        object.__setattr__(self, "inertia", j)
        object.__setattr__(self, "inertia_inv", np.linalg.inv(j))
        object.__setattr__(self, "lambda_max", float(eigs.max()))


@dataclass
class RigidBodyState:
    """Attitude R, inertial position x and velocity v, body angular rate Omega."""
    R: np.ndarray
    x: np.ndarray
    v: np.ndarray
    Omega: np.ndarray

    def copy(self) -> "RigidBodyState":
        return RigidBodyState(self.R.copy(), self.x.copy(),
                              self.v.copy(), self.Omega.copy())


@dataclass(frozen=True)
class WrenchInput:
    """Control force f (N, inertial frame) and moment u (N m, body frame)."""
    f: np.ndarray
    u: np.ndarray


def state_derivative(state: RigidBodyState, params: BodyParams,
                     wrench: WrenchInput):
    """Time derivatives (Rdot, xdot, vdot, Omegadot) of one spacecraft."""
    omega = state.Omega
    r_dot = state.R @ hat(omega)
    v_dot = wrench.f / params.mass
    j_omega = params.inertia @ omega
    omega_dot = params.inertia_inv @ (wrench.u - cross(omega, j_omega))
    return r_dot, state.v, v_dot, omega_dot


def _derivatives(states, params, wrenches):
    return [state_derivative(s, p, w) for s, p, w in zip(states, params, wrenches)]


def _advance(states, derivs, h):
    return [RigidBodyState(s.R + h * d[0], s.x + h * d[1],
                           s.v + h * d[2], s.Omega + h * d[3])
            for s, d in zip(states, derivs)]


def rk4_step(states, params, t, dt, control_evaluator):
    """One classical RK4 step over the stacked multi-spacecraft state.

    `control_evaluator(time, states)` must return one WrenchInput per
    spacecraft; it is re-invoked at every stage with the stage states.
    Output attitudes are re-projected onto SO(3).
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    k1 = _derivatives(states, params, control_evaluator(t, states))
    s2 = _advance(states, k1, 0.5 * dt)
    k2 = _derivatives(s2, params, control_evaluator(t + 0.5 * dt, s2))
    s3 = _advance(states, k2, 0.5 * dt)
    k3 = _derivatives(s3, params, control_evaluator(t + 0.5 * dt, s3))
    s4 = _advance(states, k3, dt)
    k4 = _derivatives(s4, params, control_evaluator(t + dt, s4))

    out = []
    w = dt / 6.0
    for s, d1, d2, d3, d4 in zip(states, k1, k2, k3, k4):
        r = s.R + w * (d1[0] + 2.0 * d2[0] + 2.0 * d3[0] + d4[0])
        x = s.x + w * (d1[1] + 2.0 * d2[1] + 2.0 * d3[1] + d4[1])
        v = s.v + w * (d1[2] + 2.0 * d2[2] + 2.0 * d3[2] + d4[2])
        om = s.Omega + w * (d1[3] + 2.0 * d2[3] + 2.0 * d3[3] + d4[3])
        out.append(RigidBodyState(project_so3(r), x, v, om))
    return out
