"""Line-of-sight formation control on SO(3).

Simulation library for serial chains of rigid-body spacecraft whose
attitude feedback is computed purely from unit line-of-sight measurements:
rotation-group primitives, rigid-body RK4 integration, LOS geometry and
relative-attitude determination, configuration error functions with
quadratic-bound constants, chained tracking controllers, and two built-in
demonstration scenarios with Lyapunov runtime diagnostics.
"""
from .so3 import (hat, vee, exp_so3, project_so3, rotation_defect,
                  is_rotation, check_rotation)
from .rigid_body import (BodyParams, RigidBodyState, WrenchInput,
                         state_derivative, rk4_step, DEFAULT_DT)
from .los import (GeometryError, LeaderLosMeasurements, LosPairMeasurements,
                  los_unit, to_body, normalized_cross, los_rate,
                  los_rate_cross, pair_measurements_from_states,
                  solve_relative_attitude)
from .errors import (LeaderGains, PairGains, AttitudeErrorState,
                     PositionErrorState, BoundConstants,
                     leader_bound_constants, pair_bound_constants,
                     psi_leader, psi_leader_matrix, psi_pair, psi_pair_matrix,
                     angular_velocity_error, position_errors, kdot_from_los,
                     error_rate_coefficient)
from .controllers import (LoopGains, DesiredKinematics, attitude_moment,
                          leader_moment, follower_moment, leader_force,
                          follower_force, follower_desired_kinematics,
                          rotational_stability_matrix,
                          translational_stability_matrix,
                          LoopErrorSnapshot, LyapunovReport, lyapunov_report)
from .trajectories import (Sinusoid, constant, cosine, euler321_rotation,
                           EulerTrajectory, sample_attitude_trajectory,
                           PositionTrajectory, fixed_point,
                           desired_leader_los)
from .sim import (DistantBeacon, WorldObject, PairConfig, Scenario,
                  StepDiagnostics, RunLog, evaluate_controls, run)
from .presets import (two_spacecraft_tracking, four_spacecraft_sync,
                      get_preset, preset_names, PRESETS)
from .scenario_io import (SchemaError, load_scenario, save_scenario,
                          scenario_from_dict, scenario_to_dict)

__version__ = "0.1.0"

__all__ = [
    "hat", "vee", "exp_so3", "project_so3", "rotation_defect",
    "is_rotation", "check_rotation",
    "BodyParams", "RigidBodyState", "WrenchInput", "state_derivative",
    "rk4_step", "DEFAULT_DT",
    "GeometryError", "LeaderLosMeasurements", "LosPairMeasurements",
    "los_unit", "to_body", "normalized_cross", "los_rate", "los_rate_cross",
    "pair_measurements_from_states", "solve_relative_attitude",
    "LeaderGains", "PairGains", "AttitudeErrorState", "PositionErrorState",
    "BoundConstants", "leader_bound_constants", "pair_bound_constants",
    "psi_leader", "psi_leader_matrix", "psi_pair", "psi_pair_matrix",
    "angular_velocity_error", "position_errors", "kdot_from_los",
    "error_rate_coefficient",
    "LoopGains", "DesiredKinematics", "attitude_moment", "leader_moment",
    "follower_moment", "leader_force", "follower_force",
    "follower_desired_kinematics", "rotational_stability_matrix",
    "translational_stability_matrix", "LoopErrorSnapshot", "LyapunovReport",
    "lyapunov_report",
    "Sinusoid", "constant", "cosine", "euler321_rotation", "EulerTrajectory",
    "sample_attitude_trajectory", "PositionTrajectory", "fixed_point",
    "desired_leader_los",
    "DistantBeacon", "WorldObject", "PairConfig", "Scenario",
    "StepDiagnostics", "RunLog", "evaluate_controls", "run",
    "two_spacecraft_tracking", "four_spacecraft_sync", "get_preset",
    "preset_names", "PRESETS",
    "SchemaError", "load_scenario", "save_scenario", "scenario_from_dict",
    "scenario_to_dict",
]
