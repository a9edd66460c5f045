"""Shared fixtures: random-state generators and session-scoped preset runs.

The full preset runs take tens of seconds each, so they are integrated once
per session and shared by the reproduction, Lyapunov and trajectory-bound
tests. The "fine" runs use a small step with no log decimation so that
logged time series can be differentiated numerically with a five-point
stencil.
"""
import numpy as np
import pytest

import losform as lf


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def rand_rot(rng: np.random.Generator) -> np.ndarray:
    """Uniform-ish random rotation via a random axis-angle vector."""
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    return lf.exp_so3(axis * rng.uniform(0.0, np.pi))


def rand_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def stencil_derivative(y: np.ndarray, h: float) -> np.ndarray:
    """Five-point central difference along axis 0; output loses two samples
    at each end."""
    return (-y[4:] + 8.0 * y[3:-1] - 8.0 * y[1:-3] + y[:-4]) / (12.0 * h)


@pytest.fixture(scope="session")
def run_two():
    return lf.run(lf.two_spacecraft_tracking())


@pytest.fixture(scope="session")
def run_four():
    return lf.run(lf.four_spacecraft_sync())


@pytest.fixture(scope="session")
def fine_two():
    return lf.run(lf.two_spacecraft_tracking(), dt=2e-4, t_final=3.0,
                  decimation=1)


@pytest.fixture(scope="session")
def fine_four():
    return lf.run(lf.four_spacecraft_sync(), dt=2e-4, t_final=3.0,
                  decimation=1)
