"""Tracking-error variables for the LOS attitude loops.

Both attitude loops have two equivalent forms for their configuration
error function Psi and error vector:

* the LOS form, computed purely from unit-vector measurements, used by the
  controllers, and
* the matrix form tr[K (I - R Rd^T)] with K built from inertial sight
  directions, used as an independent oracle and for the quadratic bound
  constants.

The bound constants (h1..h5 from the gains, plus the rate constants Gamma
and B derived from the spectrum of K') certify that Psi is locally
quadratic in the error vector and bound its time derivative.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .los import CROSS_TOL, GeometryError, LosPairMeasurements
from .so3 import cross, hat, vee

_SQ2 = np.sqrt(2.0)


@dataclass(frozen=True)
class LeaderGains:
    """Weights of the two leader sight-line error functions. Must be
    positive and distinct (distinctness is needed by the quadratic-bound
    constants)."""
    k_bA: float
    k_bB: float

    def __post_init__(self):
        if self.k_bA <= 0.0 or self.k_bB <= 0.0:
            raise ValueError("leader LOS gains must be positive")
        if self.k_bA == self.k_bB:
            raise ValueError("leader LOS gains must be distinct")

    @property
    def k_bar(self) -> float:
        return self.k_bA + self.k_bB

    @property
    def pair(self):
        return self.k_bA, self.k_bB


@dataclass(frozen=True)
class PairGains:
    """Weights of the two relative sight-line error functions (alpha: the
    mutual sight line, beta: the common-object cross direction)."""
    k_alpha: float
    k_beta: float

    def __post_init__(self):
        if self.k_alpha <= 0.0 or self.k_beta <= 0.0:
            raise ValueError("pair LOS gains must be positive")
        if self.k_alpha == self.k_beta:
            raise ValueError("pair LOS gains must be distinct")

    @property
    def k_bar(self) -> float:
        return self.k_alpha + self.k_beta

    @property
    def pair(self):
        return self.k_alpha, self.k_beta


@dataclass
class AttitudeErrorState:
    """Configuration error function Psi, LOS error vector e, angular
    velocity error e_Omega and weighting matrix K of one attitude loop."""
    Psi: float
    e: np.ndarray
    e_Omega: np.ndarray
    K: np.ndarray


@dataclass
class PositionErrorState:
    e_x: np.ndarray
    e_v: np.ndarray


@dataclass(frozen=True)
class BoundConstants:
    """Quadratic-bound constants of one attitude loop.

    h1..h5 and the sandwich coefficients psi_lower/psi_upper depend only on
    the gains and the chosen ceiling (Psi < ceiling < h1). Gamma and
    B_extra depend on the spectrum of K' and are refreshed per time step
    via with_kdot(); B_Omega_d and B_mu are observed per-run maxima.
    """
    h1: float
    h2: float
    h3: float
    h4: float
    h5: float
    ceiling: float
    psi_lower: float
    psi_upper: float
    Gamma: float = 0.0
    B_extra: float = 0.0
    B_Omega_d: float = 0.0
    B_mu: float = 0.0

    def with_kdot(self, kdot: np.ndarray, quadratic: bool) -> "BoundConstants":
        """Refresh Gamma and B_extra from the symmetric eigendecomposition
        of K'. `quadratic` selects the relative-loop form of Gamma (which
        multiplies ||e||^2 and carries a square root) over the leader form
        (which multiplies ||e||)."""
        g = np.abs(np.linalg.eigvalsh(0.5 * (kdot + kdot.T)))
        sums = np.array([g[0] + g[1], g[1] + g[2], g[2] + g[0]])
        diffs = np.array([g[0] - g[1], g[1] - g[2], g[2] - g[0]])
        h2t = 4.0 * float(np.max(diffs ** 2))
        h4t = 2.0 * float(np.max(sums))
        h5t = 4.0 * float(np.min(sums ** 2))
        gamma = self.h1 * h4t / (self.h5 * (self.h1 - self.ceiling))
        if quadratic:
            gamma = np.sqrt(gamma)
        b = 2.0 * np.sqrt((2.0 * h2t + h5t) / self.h5)
        return replace(self, Gamma=float(gamma), B_extra=float(b))


def _bound_constants(k1: float, k2: float, ceiling: float | None) -> BoundConstants:
    h1 = 2.0 * min(k1, k2)
    h2 = 4.0 * max((k1 - k2) ** 2, k1 ** 2, k2 ** 2)
    h3 = 4.0 * (k1 + k2) ** 2
    h4 = 2.0 * (k1 + k2)
    h5 = 4.0 * min(k1 ** 2, k2 ** 2)
    if ceiling is None:
        ceiling = 0.9 * h1
    if not 0.0 < ceiling < h1:
        raise ValueError(f"ceiling must lie in (0, {h1}), got {ceiling}")
    return BoundConstants(
        h1=h1, h2=h2, h3=h3, h4=h4, h5=h5, ceiling=ceiling,
        psi_lower=h1 / (h2 + h3),
        psi_upper=h1 * h4 / (h5 * (h1 - ceiling)))


def leader_bound_constants(g: LeaderGains, psi_ceiling: float | None = None) -> BoundConstants:
    """Quadratic-bound constants of the leader loop; valid while
    Psi1 < psi_ceiling (default 0.9 * h1)."""
    return _bound_constants(g.k_bA, g.k_bB, psi_ceiling)


def pair_bound_constants(g: PairGains, phi_ceiling: float | None = None) -> BoundConstants:
    """Quadratic-bound constants of a relative loop; same formulas with the
    pair gains."""
    return _bound_constants(g.k_alpha, g.k_beta, phi_ceiling)


def error_rate_coefficient(k_bar: float) -> float:
    """Coefficient c of ||e_Omega|| in the error-vector rate bound
    ||d/dt e|| <= c ||e_Omega|| + (B_Omega_d + B) ||e||.

    From ||E_Omega||_F^2 = tr[P]^2 + tr[P P^T] with P = Rd^T K R and
    tr[P P^T] = tr[K^2] <= k_bar^2, so c = sqrt(2) k_bar suffices.
    """
    return _SQ2 * k_bar


def psi_leader(bA: np.ndarray, bB: np.ndarray,
               bA_d: np.ndarray, bB_d: np.ndarray,
               g: LeaderGains):
    """Leader configuration error function and error vector from the body
    frame sight lines and their desired values."""
    psi = g.k_bA * (1.0 - bA @ bA_d) + g.k_bB * (1.0 - bB @ bB_d)
    e_b = g.k_bA * cross(bA, bA_d) + g.k_bB * cross(bB, bB_d)
    return psi, e_b


def psi_leader_matrix(r1: np.ndarray, r1_d: np.ndarray,
                      sA: np.ndarray, sB: np.ndarray,
                      g: LeaderGains):
    """Matrix form of the leader error: Psi = tr[K1 (I - R1 R1d^T)] and
    e_b = (R1d^T K1 R1 - R1^T K1 R1d)^vee with K1 = k_bA sA sA^T + k_bB sB sB^T.
    Used as the full-attitude oracle for psi_leader."""
    if np.linalg.norm(cross(sA, sB)) <= CROSS_TOL:
        raise GeometryError("reference directions sA, sB are collinear")
    k1 = g.k_bA * np.outer(sA, sA) + g.k_bB * np.outer(sB, sB)
    psi = float(np.trace(k1 @ (np.eye(3) - r1 @ r1_d.T)))
    e_b = vee(r1_d.T @ k1 @ r1 - r1.T @ k1 @ r1_d, tol=None)
    return psi, e_b, k1


def psi_pair(m: LosPairMeasurements, q21_d: np.ndarray, g: PairGains):
    """Relative configuration error function and error vector of a pair,
    computed purely from the four LOS measurements."""
    psi = (g.k_alpha * (1.0 + m.b12 @ (q21_d @ m.b21))
           + g.k_beta * (1.0 + m.b123 @ (q21_d @ m.b213)))
    e21 = (g.k_alpha * cross(q21_d.T @ m.b12, m.b21)
           + g.k_beta * cross(q21_d.T @ m.b123, m.b213))
    return psi, e21


def psi_pair_matrix(r1: np.ndarray, r2: np.ndarray, q21_d: np.ndarray,
                    s21: np.ndarray, s213: np.ndarray, g: PairGains):
    """Matrix form of the relative error: Psi = tr[K21 (I - R1 Q21d R2^T)]
    and e21 = (Q21d^T R1^T K21 R2 - R2^T K21 R1 Q21d)^vee with
    K21 = k_alpha s21 s21^T + k_beta s213 s213^T. Oracle for psi_pair."""
    k21 = g.k_alpha * np.outer(s21, s21) + g.k_beta * np.outer(s213, s213)
    psi = float(np.trace(k21 @ (np.eye(3) - r1 @ q21_d @ r2.T)))
    e21 = vee(q21_d.T @ r1.T @ k21 @ r2 - r2.T @ k21 @ r1 @ q21_d, tol=None)
    return psi, e21, k21


def angular_velocity_error(omega: np.ndarray, omega_d: np.ndarray) -> np.ndarray:
    return omega - omega_d


def position_errors(x: np.ndarray, x_d: np.ndarray,
                    v: np.ndarray, v_d: np.ndarray) -> PositionErrorState:
    return PositionErrorState(e_x=x - x_d, e_v=v - v_d)


def kdot_from_los(k1: float, s1: np.ndarray, mu1: np.ndarray,
                  k2: float, s2: np.ndarray, mu2: np.ndarray) -> np.ndarray:
    """Analytic time derivative of K = k1 s1 s1^T + k2 s2 s2^T when each
    direction evolves as s' = mu x s. The result is symmetric."""
    def term(k, s, mu):
        m = hat(mu) @ np.outer(s, s)
        return k * (m + m.T)
    return term(k1, s1, mu1) + term(k2, s2, mu2)
