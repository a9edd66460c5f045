"""Scenario assembly and the closed-loop formation simulation.

A scenario wires n spacecraft into a serial chain: spacecraft 1 (index 0)
is the leader tracking absolute desired trajectories against two reference
objects; spacecraft i tracks relative trajectories against spacecraft i-1,
with a common object assigned per pair so the relative attitude is
observable from LOS alone. Each step evaluates measurements, errors and
controls in chain order, integrates with RK4, and logs time series with
Lyapunov diagnostics.
"""
from __future__ import annotations

import time as _time
from dataclasses import dataclass, field, replace

import numpy as np

from . import errors as err
from .controllers import (LoopGains, LoopErrorSnapshot, LyapunovReport,
                          attitude_moment, follower_desired_kinematics,
                          follower_force, leader_force,
                          rotational_stability_matrix,
                          translational_stability_matrix)
from .errors import LeaderGains, PairGains, kdot_from_los
from .los import (GeometryError, LosPairMeasurements, los_rate,
                  los_rate_cross, los_unit, normalized_cross)
from .rigid_body import BodyParams, RigidBodyState, WrenchInput, rk4_step
from .so3 import check_rotation, cross, vee
from .trajectories import (EulerTrajectory, PositionTrajectory,
                           sample_attitude_trajectory)

MONOTONICITY_SLACK = 1e-8


@dataclass(frozen=True)
class DistantBeacon:
    """Reference object at effectively infinite range (a distant star):
    fixed inertial direction, zero sight-line angular velocity."""
    direction: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        n = np.linalg.norm(d)
        if n < 1e-12:
            raise ValueError("beacon direction must be nonzero")
        object.__setattr__(self, "direction", d / n)


@dataclass(frozen=True)
class WorldObject:
    """Reference object with a known inertial position trajectory."""
    trajectory: PositionTrajectory


# A sight target is a spacecraft (by 0-based index), a world object, or --
# for the leader's reference objects only -- a distant beacon.
SightTarget = int | WorldObject | DistantBeacon


@dataclass(frozen=True)
class PairConfig:
    """Wiring of one follower loop: pair (i, i-1) with its desired relative
    attitude/position trajectories, common-object assignment and gains."""
    desired_attitude: EulerTrajectory
    desired_position: PositionTrajectory
    common: SightTarget
    gains: LoopGains


@dataclass
class Scenario:
    name: str
    bodies: list[BodyParams]
    initial_states: list[RigidBodyState]
    leader_attitude: EulerTrajectory
    leader_position: PositionTrajectory
    object_a: SightTarget
    object_b: SightTarget
    leader_gains: LoopGains
    pairs: list[PairConfig]
    dt: float = 1e-3
    t_final: float = 20.0
    decimation: int = 10

    @property
    def n(self) -> int:
        return len(self.bodies)

    @property
    def loop_gains(self) -> list[LoopGains]:
        return [self.leader_gains] + [p.gains for p in self.pairs]

    def bound_constants(self) -> list[err.BoundConstants]:
        out = [err.leader_bound_constants(self.leader_gains.attitude)]
        out += [err.pair_bound_constants(p.gains.attitude) for p in self.pairs]
        return out

    def validate(self):
        """Check all structural invariants; raises ValueError/GeometryError
        with a description of the first violation."""
        n = self.n
        if n < 1:
            raise ValueError("scenario needs at least one spacecraft")
        if len(self.initial_states) != n:
            raise ValueError("one initial state per spacecraft is required")
        if len(self.pairs) != n - 1:
            raise ValueError(f"serial chain of {n} spacecraft needs {n - 1} pairs, "
                             f"got {len(self.pairs)}")
        if not isinstance(self.leader_gains.attitude, LeaderGains):
            raise ValueError("leader loop must use LeaderGains")
        for i, p in enumerate(self.pairs):
            if not isinstance(p.gains.attitude, PairGains):
                raise ValueError(f"pair ({i + 2},{i + 1}) must use PairGains")
            if isinstance(p.common, int):
                if not 0 <= p.common < n:
                    raise ValueError(f"pair ({i + 2},{i + 1}) common-object index "
                                     f"{p.common} out of range")
                if p.common in (i, i + 1):
                    raise ValueError(f"pair ({i + 2},{i + 1}) common object must not "
                                     "be a member of the pair")
        for i, s in enumerate(self.initial_states):
            check_rotation(s.R, tol=1e-9)
        if self.dt <= 0.0 or self.t_final <= 0.0:
            raise ValueError("dt and t_final must be positive")
        if self.decimation < 1:
            raise ValueError("log decimation must be >= 1")
        # Geometry must be non-degenerate at t = 0.
        evaluate_controls(0.0, self.initial_states, self)


def _sight_target_state(target: SightTarget, t: float, states):
    """Inertial position and velocity of a sight target (not valid for
    DistantBeacon, which has no finite position)."""
    if isinstance(target, int):
        s = states[target]
        return s.x, s.v
    if isinstance(target, WorldObject):
        return target.trajectory.position(t), target.trajectory.velocity(t)
    raise TypeError(f"target {target!r} has no finite position")


def _leader_sight(target: SightTarget, t: float, states):
    """Sight direction from the leader toward a reference object and the
    direction's inertial angular velocity."""
    if isinstance(target, DistantBeacon):
        return target.direction, np.zeros(3)
    pos, vel = _sight_target_state(target, t, states)
    leader = states[0]
    return los_unit(leader.x, pos), los_rate(leader.x, pos, leader.v, vel)


@dataclass
class StepDiagnostics:
    """Per-loop error variables and bound constants at one sample."""
    e_att: np.ndarray         # (loops, 3) LOS error vectors e_b / e_{i,i-1}
    e_att_diag: np.ndarray    # (loops, 3) attitude error vectors e_R / e_Q
    e_Omega: np.ndarray       # (loops, 3)
    e_x: np.ndarray           # (loops, 3)
    e_v: np.ndarray           # (loops, 3)
    Psi: np.ndarray           # (loops,)
    Gamma: np.ndarray         # (loops,) per-step rate constants from K'
    B_extra: np.ndarray       # (loops,)
    Omega_d_max: float        # max desired angular rate norm at this sample
    mu_max: float             # max sight-line angular rate norm at this sample


def evaluate_controls(t: float, states, scenario: Scenario, collect: bool = False):
    """Chain evaluation of all control inputs at one instant.

    Returns the list of WrenchInput; with collect=True also a
    StepDiagnostics. Raises GeometryError (tagged with the offending pair)
    on degenerate sight-line geometry.
    """
    n = scenario.n
    wrenches = []
    if collect:
        n_loops = n if n > 1 else 1
        diag = StepDiagnostics(
            e_att=np.zeros((n_loops, 3)), e_att_diag=np.zeros((n_loops, 3)),
            e_Omega=np.zeros((n_loops, 3)), e_x=np.zeros((n_loops, 3)),
            e_v=np.zeros((n_loops, 3)), Psi=np.zeros(n_loops),
            Gamma=np.zeros(n_loops), B_extra=np.zeros(n_loops),
            Omega_d_max=0.0, mu_max=0.0)
        bounds = scenario.bound_constants()

    # Leader loop.
    leader = states[0]
    body0 = scenario.bodies[0]
    g0 = scenario.leader_gains
    r1d, omega1_d, domega1_d = sample_attitude_trajectory(scenario.leader_attitude, t)
    sA, muA = _leader_sight(scenario.object_a, t, states)
    sB, muB = _leader_sight(scenario.object_b, t, states)
    bA = leader.R.T @ sA
    bB = leader.R.T @ sB
    psi1, e_b = err.psi_leader(bA, bB, r1d.T @ sA, r1d.T @ sB, g0.attitude)
    e_omega1 = leader.Omega - omega1_d
    u1 = attitude_moment(e_b, e_omega1, omega1_d, domega1_d,
                         body0.inertia, g0.k_Omega)
    e_x1 = leader.x - scenario.leader_position.position(t)
    e_v1 = leader.v - scenario.leader_position.velocity(t)
    f1 = leader_force(e_x1, e_v1, scenario.leader_position.acceleration(t),
                      body0.mass, g0.k_x, g0.k_v)
    wrenches.append(WrenchInput(f=f1, u=u1))

    # Quantities handed down the chain.
    domega_prev = body0.inertia_inv @ (u1 - cross(leader.Omega,
                                                     body0.inertia @ leader.Omega))
    xdd_prev = f1 / body0.mass

    if collect:
        kdot1 = kdot_from_los(g0.attitude.k_bA, sA, muA, g0.attitude.k_bB, sB, muB)
        bc = bounds[0].with_kdot(kdot1, quadratic=False)
        diag.e_att[0] = e_b
        diag.e_att_diag[0] = 0.5 * vee(r1d.T @ leader.R - leader.R.T @ r1d, tol=None)
        diag.e_Omega[0] = e_omega1
        diag.e_x[0] = e_x1
        diag.e_v[0] = e_v1
        diag.Psi[0] = psi1
        diag.Gamma[0] = bc.Gamma
        diag.B_extra[0] = bc.B_extra
        diag.Omega_d_max = float(np.linalg.norm(omega1_d))
        diag.mu_max = max(float(np.linalg.norm(muA)), float(np.linalg.norm(muB)))

    # Follower loops, in chain order.
    for i in range(1, n):
        pc = scenario.pairs[i - 1]
        prev = states[i - 1]
        me = states[i]
        body = scenario.bodies[i]
        g = pc.gains
        try:
            q_d, omega_rel_d, domega_rel_d = sample_attitude_trajectory(
                pc.desired_attitude, t)
            xc, vc = _sight_target_state(pc.common, t, states)
            s12 = los_unit(prev.x, me.x)
            s13 = los_unit(prev.x, xc)
            s23 = los_unit(me.x, xc)
            b12 = prev.R.T @ s12
            b13 = prev.R.T @ s13
            b21 = me.R.T @ (-s12)
            b23 = me.R.T @ s23
            b123 = normalized_cross(b12, b13)
            b213 = normalized_cross(b21, b23)
        except GeometryError as exc:
            raise GeometryError(f"pair ({i + 1},{i}): {exc}") from exc

        psi = (g.attitude.k_alpha * (1.0 + b12 @ (q_d @ b21))
               + g.attitude.k_beta * (1.0 + b123 @ (q_d @ b213)))
        e_rel = (g.attitude.k_alpha * cross(q_d.T @ b12, b21)
                 + g.attitude.k_beta * cross(q_d.T @ b123, b213))
        kin = follower_desired_kinematics(omega_rel_d, domega_rel_d, q_d,
                                          prev.Omega, domega_prev)
        e_omega = me.Omega - kin.Omega_d
        u = attitude_moment(e_rel, e_omega, kin.Omega_d, kin.dOmega_d,
                            body.inertia, g.k_Omega)
        e_x = (me.x - prev.x) - pc.desired_position.position(t)
        e_v = (me.v - prev.v) - pc.desired_position.velocity(t)
        f = follower_force(e_x, e_v, xdd_prev,
                           pc.desired_position.acceleration(t),
                           body.mass, g.k_x, g.k_v)
        wrenches.append(WrenchInput(f=f, u=u))

        if collect:
            mu12 = los_rate(prev.x, me.x, prev.v, me.v)
            mu21 = los_rate(me.x, prev.x, me.v, prev.v)
            mu13 = los_rate(prev.x, xc, prev.v, vc)
            mu23 = los_rate(me.x, xc, me.v, vc)
            mu123 = los_rate_cross(s12, s13, mu12, mu13)
            mu213 = los_rate_cross(-s12, s23, mu21, mu23)
            s213 = me.R @ b213
            kdot = kdot_from_los(g.attitude.k_alpha, -s12, mu21,
                                 g.attitude.k_beta, s213, mu213)
            bc = bounds[i].with_kdot(kdot, quadratic=True)
            q = prev.R.T @ me.R
            diag.e_att[i] = e_rel
            diag.e_att_diag[i] = 0.5 * vee(q_d.T @ q - q.T @ q_d, tol=None)
            diag.e_Omega[i] = e_omega
            diag.e_x[i] = e_x
            diag.e_v[i] = e_v
            diag.Psi[i] = psi
            diag.Gamma[i] = bc.Gamma
            diag.B_extra[i] = bc.B_extra
            diag.Omega_d_max = max(diag.Omega_d_max,
                                   float(np.linalg.norm(omega_rel_d)),
                                   float(np.linalg.norm(kin.Omega_d)))
            diag.mu_max = max(diag.mu_max,
                              *(float(np.linalg.norm(m))
                                for m in (mu12, mu21, mu123, mu213)))

        # Hand this spacecraft's actual accelerations to the next loop.
        domega_prev = body.inertia_inv @ (u - cross(me.Omega,
                                                       body.inertia @ me.Omega))
        xdd_prev = f / body.mass

    if collect:
        return wrenches, diag
    return wrenches


@dataclass
class RunLog:
    """Decimated time series of one simulation run.

    Shapes: S samples, n spacecraft, L = n control loops (leader + pairs;
    L = 1 for a single spacecraft)."""
    scenario_name: str
    t: np.ndarray               # (S,)
    R: np.ndarray               # (S, n, 3, 3)
    x: np.ndarray               # (S, n, 3)
    v: np.ndarray               # (S, n, 3)
    Omega: np.ndarray           # (S, n, 3)
    u: np.ndarray               # (S, n, 3)
    f: np.ndarray               # (S, n, 3)
    e_att: np.ndarray           # (S, L, 3) LOS error vectors
    e_att_diag: np.ndarray      # (S, L, 3) attitude error vectors e_R / e_Q
    e_Omega: np.ndarray         # (S, L, 3)
    e_x: np.ndarray             # (S, L, 3)
    e_v: np.ndarray             # (S, L, 3)
    Psi: np.ndarray             # (S, L)
    Gamma: np.ndarray           # (S, L)
    B_extra: np.ndarray         # (S, L)
    V_rot: np.ndarray           # (S, L)
    V_trans: np.ndarray         # (S, L)
    V_total: np.ndarray         # (S,)
    min_eig_M: np.ndarray       # (S, L)
    min_eig_N: np.ndarray       # (S, L)
    summary: dict = field(default_factory=dict)

    @property
    def n_loops(self) -> int:
        return self.Psi.shape[1]


def _loop_labels(n: int) -> list[str]:
    if n == 1:
        return ["R1"]
    return ["R1"] + [f"Q{i + 1}{i}" for i in range(1, n)]


def run(scenario: Scenario, dt: float | None = None,
        t_final: float | None = None, decimation: int | None = None) -> RunLog:
    """Integrate the closed loop from t = 0 to t_final and return the
    decimated log with Lyapunov diagnostics and a summary."""
    if dt is not None or t_final is not None or decimation is not None:
        scenario = replace(scenario,
                           dt=dt if dt is not None else scenario.dt,
                           t_final=t_final if t_final is not None else scenario.t_final,
                           decimation=decimation if decimation is not None else scenario.decimation)
    scenario.validate()

    n = scenario.n
    step_dt = scenario.dt
    n_steps = int(round(scenario.t_final / step_dt))
    dec = scenario.decimation
    n_samples = n_steps // dec + 1
    n_loops = n if n > 1 else 1

    t_arr = np.zeros(n_samples)
    r_arr = np.zeros((n_samples, n, 3, 3))
    x_arr = np.zeros((n_samples, n, 3))
    v_arr = np.zeros((n_samples, n, 3))
    om_arr = np.zeros((n_samples, n, 3))
    u_arr = np.zeros((n_samples, n, 3))
    f_arr = np.zeros((n_samples, n, 3))
    e_att = np.zeros((n_samples, n_loops, 3))
    e_att_diag = np.zeros((n_samples, n_loops, 3))
    e_om = np.zeros((n_samples, n_loops, 3))
    e_x = np.zeros((n_samples, n_loops, 3))
    e_v = np.zeros((n_samples, n_loops, 3))
    psi_arr = np.zeros((n_samples, n_loops))
    gam_arr = np.zeros((n_samples, n_loops))
    b_arr = np.zeros((n_samples, n_loops))
    omega_d_max = np.zeros(n_samples)
    mu_max = np.zeros(n_samples)

    states = [s.copy() for s in scenario.initial_states]
    wall_start = _time.perf_counter()

    def log_sample(idx, t, states):
        wrenches, diag = evaluate_controls(t, states, scenario, collect=True)
        t_arr[idx] = t
        for i, (s, w) in enumerate(zip(states, wrenches)):
            r_arr[idx, i] = s.R
            x_arr[idx, i] = s.x
            v_arr[idx, i] = s.v
            om_arr[idx, i] = s.Omega
            u_arr[idx, i] = w.u
            f_arr[idx, i] = w.f
        e_att[idx] = diag.e_att
        e_att_diag[idx] = diag.e_att_diag
        e_om[idx] = diag.e_Omega
        e_x[idx] = diag.e_x
        e_v[idx] = diag.e_v
        psi_arr[idx] = diag.Psi
        gam_arr[idx] = diag.Gamma
        b_arr[idx] = diag.B_extra
        omega_d_max[idx] = diag.Omega_d_max
        mu_max[idx] = diag.mu_max

    def controls(t, sts):
        return evaluate_controls(t, sts, scenario)

    log_sample(0, 0.0, states)
    sample = 1
    for step in range(n_steps):
        t = step * step_dt
        try:
            states = rk4_step(states, scenario.bodies, t, step_dt, controls)
        except GeometryError as exc:
            raise GeometryError(f"degenerate geometry at t={t:.6f} s: {exc}") from exc
        t_next = (step + 1) * step_dt
        if not all(np.isfinite(s.Omega @ s.Omega + s.v @ s.v + s.x @ s.x)
                   for s in states):
            raise FloatingPointError(f"non-finite state at t={t_next:.6f} s")
        if (step + 1) % dec == 0:
            log_sample(sample, t_next, states)
            sample += 1
    wall = _time.perf_counter() - wall_start

    # Lyapunov post-processing with the observed run-wide rate bound.
    b_omega_d = float(omega_d_max.max())
    b_mu = float(mu_max.max())
    gains = scenario.loop_gains
    bodies = scenario.bodies[:n_loops]
    v_rot = np.zeros((n_samples, n_loops))
    v_trans = np.zeros((n_samples, n_loops))
    min_eig_m = np.zeros((n_samples, n_loops))
    min_eig_n = np.zeros((n_samples, n_loops))
    for l, (g, body) in enumerate(zip(gains, bodies)):
        j = body.inertia
        j_eo = e_om[:, l] @ j.T
        v_rot[:, l] = (0.5 * np.einsum("ij,ij->i", e_om[:, l], j_eo)
                       + psi_arr[:, l]
                       + g.c_r * np.einsum("ij,ij->i", j_eo, e_att[:, l]))
        v_trans[:, l] = (0.5 * g.k_x * np.einsum("ij,ij->i", e_x[:, l], e_x[:, l])
                         + 0.5 * body.mass * np.einsum("ij,ij->i", e_v[:, l], e_v[:, l])
                         + g.c_t * np.einsum("ij,ij->i", e_x[:, l], e_v[:, l]))
        n_mat = translational_stability_matrix(body.mass, g.k_x, g.k_v, g.c_t)
        min_eig_n[:, l] = np.linalg.eigvalsh(n_mat).min()
        for idx in range(n_samples):
            m_mat = rotational_stability_matrix(
                g.k_Omega, g.c_r, body.lambda_max, g.attitude.k_bar,
                gam_arr[idx, l], b_arr[idx, l], b_omega_d)
            min_eig_m[idx, l] = np.linalg.eigvalsh(m_mat).min()
    v_total = v_rot.sum(axis=1) + v_trans.sum(axis=1)

    labels = _loop_labels(n)
    norms = {
        "e_att": np.linalg.norm(e_att_diag, axis=2),
        "e_Omega": np.linalg.norm(e_om, axis=2),
        "e_x": np.linalg.norm(e_x, axis=2),
        "e_v": np.linalg.norm(e_v, axis=2),
    }
    slack = MONOTONICITY_SLACK * np.maximum(1.0, v_total[:-1])
    mono_violations = int(np.sum(v_total[1:] > v_total[:-1] + slack))
    summary = {
        "scenario": scenario.name,
        "n_spacecraft": n,
        "dt": step_dt,
        "t_final": scenario.t_final,
        "steps": n_steps,
        "samples": n_samples,
        "wall_time_s": wall,
        "B_Omega_d": b_omega_d,
        "B_mu": b_mu,
        "lyapunov_monotonicity_violations": mono_violations,
        "stability_matrix_indefinite_samples":
            int(np.sum((min_eig_m.min(axis=1) <= 0.0)
                       | (min_eig_n.min(axis=1) <= 0.0))),
        "loops": {
            label: {
                "final_" + name: float(arr[-1, l])
                for name, arr in norms.items()
            } | {
                "max_" + name: float(arr[:, l].max())
                for name, arr in norms.items()
            } | {"final_Psi": float(psi_arr[-1, l])}
            for l, label in enumerate(labels)
        },
        "max_u": float(np.abs(u_arr).max()),
        "max_f": float(np.abs(f_arr).max()),
    }

    return RunLog(
        scenario_name=scenario.name, t=t_arr, R=r_arr, x=x_arr, v=v_arr,
        Omega=om_arr, u=u_arr, f=f_arr, e_att=e_att, e_att_diag=e_att_diag,
        e_Omega=e_om, e_x=e_x, e_v=e_v, Psi=psi_arr, Gamma=gam_arr,
        B_extra=b_arr, V_rot=v_rot, V_trans=v_trans, V_total=v_total,
        min_eig_M=min_eig_m, min_eig_N=min_eig_n, summary=summary)
