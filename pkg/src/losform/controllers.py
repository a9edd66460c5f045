"""Control laws driven by LOS error vectors, chained desired kinematics,
and Lyapunov diagnostics.

The leader tracks an absolute attitude/position trajectory; each follower
tracks a relative trajectory with respect to the previous spacecraft in
the chain, consuming the already-computed angular acceleration and
translational acceleration of that spacecraft (daisy-chain information
flow). All attitude feedback enters through the LOS error vectors only.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundConstants, LeaderGains, PairGains
from .rigid_body import BodyParams
from .so3 import cross, hat

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class LoopGains:
    """Gains of one control loop: attitude weights plus the angular-rate,
    position and velocity feedback gains. c_r, c_t only scale the
    Lyapunov cross terms (diagnostics), not the control inputs."""
    attitude: LeaderGains | PairGains
    k_Omega: float
    k_x: float
    k_v: float
    c_r: float = 0.01
    c_t: float = 0.01

    def __post_init__(self):
        for name in ("k_Omega", "k_x", "k_v", "c_r", "c_t"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")


@dataclass
class DesiredKinematics:
    """Desired angular velocity/acceleration and the feedforward
    translational acceleration for one spacecraft."""
    Omega_d: np.ndarray
    dOmega_d: np.ndarray
    x_dd: np.ndarray


def attitude_moment(e_att: np.ndarray, e_Omega: np.ndarray,
                    Omega_d: np.ndarray, dOmega_d: np.ndarray,
                    inertia: np.ndarray, k_Omega: float) -> np.ndarray:
    """u = -e - k_Omega e_Omega + hat(Omega_d) J (e_Omega + Omega_d) + J dOmega_d.

    Shared by the leader (e = e_b) and every follower (e = e_{i,i-1})."""
    return (-e_att - k_Omega * e_Omega
            + cross(Omega_d, inertia @ (e_Omega + Omega_d))
            + inertia @ dOmega_d)


def leader_moment(e_b, e_Omega, Omega_d, dOmega_d, inertia, k_Omega):
    return attitude_moment(e_b, e_Omega, Omega_d, dOmega_d, inertia, k_Omega)


def follower_moment(e_rel, e_Omega, Omega_d, dOmega_d, inertia, k_Omega):
    return attitude_moment(e_rel, e_Omega, Omega_d, dOmega_d, inertia, k_Omega)


def leader_force(e_x: np.ndarray, e_v: np.ndarray, x_dd_des: np.ndarray,
                 mass: float, k_x: float, k_v: float) -> np.ndarray:
    """f1 = -k_x e_x - k_v e_v + m x1_dd_desired."""
    return -k_x * e_x - k_v * e_v + mass * x_dd_des


def follower_force(e_x_rel: np.ndarray, e_v_rel: np.ndarray,
                   x_prev_dd: np.ndarray, x_rel_dd_des: np.ndarray,
                   mass: float, k_x: float, k_v: float) -> np.ndarray:
    """f_i = -k_x e_x - k_v e_v + m_i (x''_{i-1} + x''^d_{i,i-1}), with the
    actual acceleration of the previous spacecraft supplied by the chain."""
    return -k_x * e_x_rel - k_v * e_v_rel + mass * (x_prev_dd + x_rel_dd_des)


def follower_desired_kinematics(Omega_rel_d: np.ndarray, dOmega_rel_d: np.ndarray,
                                q_d: np.ndarray, Omega_prev: np.ndarray,
                                dOmega_prev: np.ndarray,
                                x_dd: np.ndarray | None = None) -> DesiredKinematics:
    """Desired absolute rates of a follower from its desired relative
    trajectory and the previous spacecraft's actual motion:

        Omega_i^d  = Omega_rel^d + Qd^T Omega_{i-1}
        dOmega_i^d = dOmega_rel^d - hat(Omega_rel^d) Qd^T Omega_{i-1}
                     + Qd^T dOmega_{i-1}
    """
    qt_omega = q_d.T @ Omega_prev
    omega_d = Omega_rel_d + qt_omega
    domega_d = (dOmega_rel_d - cross(Omega_rel_d, qt_omega)
                + q_d.T @ dOmega_prev)
    if x_dd is None:
        x_dd = np.zeros(3)
    return DesiredKinematics(Omega_d=omega_d, dOmega_d=domega_d, x_dd=x_dd)


def rotational_stability_matrix(k_Omega: float, c_r: float, lambda_max: float,
                                k_bar: float, Gamma: float, B_extra: float,
                                B_Omega_d: float) -> np.ndarray:
    """2x2 matrix M of one attitude loop; V' of that loop is bounded by
    -[||e||, ||e_Omega||] M [||e||, ||e_Omega||]^T when M is positive
    definite."""
    lam = lambda_max * (2.0 * B_Omega_d + B_extra) + k_Omega
    return 0.5 * np.array([
        [2.0 * (c_r - Gamma), -c_r * lam],
        [-c_r * lam, 2.0 * k_Omega - c_r * lambda_max * k_bar * (_SQRT2 + 2.0)],
    ])


def translational_stability_matrix(mass: float, k_x: float, k_v: float,
                                   c_t: float) -> np.ndarray:
    """2x2 matrix N of one translational loop."""
    return (0.5 / mass) * np.array([
        [2.0 * c_t * k_x, c_t * k_v],
        [c_t * k_v, 2.0 * mass * (k_v - c_t)],
    ])


@dataclass
class LoopErrorSnapshot:
    """Error variables of one loop at one instant, as needed by the
    Lyapunov diagnostics."""
    Psi: float
    e_att: np.ndarray
    e_Omega: np.ndarray
    e_x: np.ndarray
    e_v: np.ndarray


@dataclass
class LyapunovReport:
    """Per-loop Lyapunov components and stability matrices. Indefinite M/N
    matrices are flagged (positive_definite), never raised."""
    V_total: float
    V_rot: list[float]
    V_trans: list[float]
    M: list[np.ndarray]
    N: list[np.ndarray]
    min_eig_M: list[float]
    min_eig_N: list[float]
    positive_definite: bool = field(init=False)

    def __post_init__(self):
        self.positive_definite = (min(self.min_eig_M) > 0.0
                                  and min(self.min_eig_N) > 0.0)


def lyapunov_report(snapshots: list[LoopErrorSnapshot],
                    bodies: list[BodyParams],
                    gains: list[LoopGains],
                    bounds: list[BoundConstants]) -> LyapunovReport:
    """Evaluate the composite Lyapunov function and its stability matrices.

    One entry per loop: loop 0 is the leader (body 0), loop i >= 1 the pair
    (i, i-1) using body i's parameters. Each rotational component is
    1/2 e_Omega . J e_Omega + Psi + c_r J e_Omega . e; each translational
    component 1/2 k_x ||e_x||^2 + 1/2 m ||e_v||^2 + c_t e_x . e_v.
    """
    v_rot, v_trans, mats_m, mats_n, eigs_m, eigs_n = [], [], [], [], [], []
    for snap, body, g, bc in zip(snapshots, bodies, gains, bounds):
        j_eo = body.inertia @ snap.e_Omega
        v_r = (0.5 * snap.e_Omega @ j_eo + snap.Psi
               + g.c_r * j_eo @ snap.e_att)
        v_t = (0.5 * g.k_x * snap.e_x @ snap.e_x
               + 0.5 * body.mass * snap.e_v @ snap.e_v
               + g.c_t * snap.e_x @ snap.e_v)
        m = rotational_stability_matrix(g.k_Omega, g.c_r, body.lambda_max,
                                        g.attitude.k_bar, bc.Gamma, bc.B_extra,
                                        bc.B_Omega_d)
        n = translational_stability_matrix(body.mass, g.k_x, g.k_v, g.c_t)
        v_rot.append(float(v_r))
        v_trans.append(float(v_t))
        mats_m.append(m)
        mats_n.append(n)
        eigs_m.append(float(np.linalg.eigvalsh(m).min()))
        eigs_n.append(float(np.linalg.eigvalsh(n).min()))
    return LyapunovReport(
        V_total=float(sum(v_rot) + sum(v_trans)),
        V_rot=v_rot, V_trans=v_trans,
        M=mats_m, N=mats_n, min_eig_M=eigs_m, min_eig_N=eigs_n)
