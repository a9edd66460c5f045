"""Rigid-body dynamics and integrator tests."""
import numpy as np
import pytest

import losform as lf

from conftest import make_rng, rand_rot

J = np.diag([3.0, 2.0, 1.0])


def _body() -> lf.BodyParams:
    return lf.BodyParams(mass=30.0, inertia=J)


def _zero_wrench(t, states):
    return [lf.WrenchInput(f=np.zeros(3), u=np.zeros(3)) for _ in states]


def test_body_params_validation():
    with pytest.raises(ValueError, match="mass"):
        lf.BodyParams(mass=0.0, inertia=J)
    with pytest.raises(ValueError, match="symmetric"):
        lf.BodyParams(mass=1.0, inertia=J + np.triu(np.ones((3, 3)), 1))
    with pytest.raises(ValueError, match="positive definite"):
        lf.BodyParams(mass=1.0, inertia=-J)
    b = _body()
    np.testing.assert_allclose(b.inertia_inv @ J, np.eye(3), atol=1e-14)
    assert b.lambda_max == 3.0


def test_state_derivative_equations():
    rng = make_rng(10)
    body = _body()
    st = lf.RigidBodyState(R=rand_rot(rng), x=rng.normal(size=3),
                           v=rng.normal(size=3), Omega=rng.normal(size=3))
    w = lf.WrenchInput(f=rng.normal(size=3), u=rng.normal(size=3))
    r_dot, x_dot, v_dot, om_dot = lf.state_derivative(st, body, w)
    np.testing.assert_allclose(r_dot, st.R @ lf.hat(st.Omega), atol=1e-14)
    np.testing.assert_array_equal(x_dot, st.v)
    np.testing.assert_allclose(v_dot, w.f / body.mass, atol=1e-15)
    np.testing.assert_allclose(
        J @ om_dot + np.cross(st.Omega, J @ st.Omega), w.u, atol=1e-12)


def test_free_rotation_conserves_energy_and_momentum():
    # Torque-free tumbling for 10 s: kinetic energy and the inertial
    # angular momentum are invariants of the exact flow.
    body = _body()
    st = lf.RigidBodyState(R=np.eye(3), x=np.zeros(3), v=np.zeros(3),
                           Omega=np.array([0.7, -1.3, 2.1]))
    energy0 = 0.5 * st.Omega @ J @ st.Omega
    pi0 = st.R @ (J @ st.Omega)
    states = [st]
    dt = 1e-3
    for k in range(10_000):
        states = lf.rk4_step(states, [body], k * dt, dt, _zero_wrench)
    s = states[0]
    energy = 0.5 * s.Omega @ J @ s.Omega
    pi = s.R @ (J @ s.Omega)
    assert abs(energy - energy0) / energy0 < 1e-8
    assert np.linalg.norm(pi - pi0) / np.linalg.norm(pi0) < 1e-7


def test_orthonormality_drift_many_steps():
    body = _body()
    st = lf.RigidBodyState(R=np.eye(3), x=np.zeros(3), v=np.zeros(3),
                           Omega=np.array([1.0, 2.0, 3.0]))
    states = [st]
    dt = 1e-3
    worst = 0.0
    for k in range(100_000):
        states = lf.rk4_step(states, [body], k * dt, dt, _zero_wrench)
        if k % 1000 == 999:
            worst = max(worst, lf.rotation_defect(states[0].R))
    worst = max(worst, lf.rotation_defect(states[0].R))
    assert worst <= 1e-9


def _integrate_free(omega0, dt, t_final):
    body = _body()
    states = [lf.RigidBodyState(R=np.eye(3), x=np.zeros(3), v=np.zeros(3),
                                Omega=np.array(omega0, dtype=float))]
    steps = int(round(t_final / dt))
    for k in range(steps):
        states = lf.rk4_step(states, [body], k * dt, dt, _zero_wrench)
    return states[0]


def test_fourth_order_convergence():
    # Halving dt must shrink the error against a fine reference by ~2^4.
    ref = _integrate_free([0.9, -1.1, 1.3], 1e-4, 1.0)

    def err(dt):
        s = _integrate_free([0.9, -1.1, 1.3], dt, 1.0)
        return (np.linalg.norm(s.R - ref.R)
                + np.linalg.norm(s.Omega - ref.Omega))

    e_coarse = err(8e-3)
    e_fine = err(4e-3)
    order = np.log2(e_coarse / e_fine)
    assert 3.6 < order < 4.4, f"observed order {order:.2f}"


def test_rk4_rejects_bad_dt():
    with pytest.raises(ValueError, match="dt"):
        lf.rk4_step([], [], 0.0, 0.0, _zero_wrench)


def test_rk4_reevaluates_controls_per_stage():
    times = []

    def tracking_wrench(t, states):
        times.append(t)
        return _zero_wrench(t, states)

    st = lf.RigidBodyState(R=np.eye(3), x=np.zeros(3), v=np.zeros(3),
                           Omega=np.zeros(3))
    lf.rk4_step([st], [_body()], 1.0, 0.1, tracking_wrench)
    assert times == [1.0, 1.05, 1.05, 1.1]
