"""Scenario (de)serialization to a YAML key-value tree.

All physical quantities are SI, angles in radians. Signals are either a
bare number (constant) or a mapping with amplitude/frequency/phase/offset
keys. Schema violations raise SchemaError carrying the dotted field path.
"""
from __future__ import annotations

import numbers
from pathlib import Path

import numpy as np
import yaml

from .controllers import LoopGains
from .errors import LeaderGains, PairGains
from .rigid_body import BodyParams, RigidBodyState
from .sim import DistantBeacon, PairConfig, Scenario, WorldObject
from .trajectories import EulerTrajectory, PositionTrajectory, Sinusoid


class SchemaError(ValueError):
    """Scenario file violates the schema; message names the field."""


def _get(node: dict, key: str, path: str, required: bool = True, default=None):
    if not isinstance(node, dict):
        raise SchemaError(f"{path}: expected a mapping, got {type(node).__name__}")
    if key not in node:
        if required:
            raise SchemaError(f"{path}.{key}: missing required field")
        return default
    return node[key]


def _number(v, path: str) -> float:
    if isinstance(v, bool) or not isinstance(v, numbers.Real):
        raise SchemaError(f"{path}: expected a number, got {v!r}")
    return float(v)


def _vector(v, path: str, length: int = 3) -> np.ndarray:
    if not isinstance(v, (list, tuple)) or len(v) != length:
        raise SchemaError(f"{path}: expected a list of {length} numbers")
    return np.array([_number(c, f"{path}[{i}]") for i, c in enumerate(v)])


def _matrix(v, path: str) -> np.ndarray:
    if not isinstance(v, (list, tuple)) or len(v) != 3:
        raise SchemaError(f"{path}: expected a 3x3 matrix as 3 rows")
    return np.stack([_vector(row, f"{path}[{i}]") for i, row in enumerate(v)])


def _signal(v, path: str) -> Sinusoid:
    if isinstance(v, numbers.Real) and not isinstance(v, bool):
        return Sinusoid(offset=float(v))
    if not isinstance(v, dict):
        raise SchemaError(f"{path}: expected a number or a signal mapping")
    unknown = set(v) - {"amplitude", "frequency", "phase", "offset"}
    if unknown:
        raise SchemaError(f"{path}: unknown signal keys {sorted(unknown)}")
    return Sinusoid(
        amplitude=_number(v.get("amplitude", 0.0), f"{path}.amplitude"),
        frequency=_number(v.get("frequency", 0.0), f"{path}.frequency"),
        phase=_number(v.get("phase", 0.0), f"{path}.phase"),
        offset=_number(v.get("offset", 0.0), f"{path}.offset"))


def _signal_to_obj(s: Sinusoid):
    if s.amplitude == 0.0 and s.frequency == 0.0 and s.phase == 0.0:
        return float(s.offset)
    out = {}
    for key in ("amplitude", "frequency", "phase", "offset"):
        val = float(getattr(s, key))
        if val != 0.0:
            out[key] = val
    return out


def _attitude_traj(node, path: str) -> EulerTrajectory:
    kwargs = {}
    for key in ("yaw", "pitch", "roll"):
        if key in node:
            kwargs[key] = _signal(node[key], f"{path}.{key}")
    if "h" in node:
        kwargs["h"] = _number(node["h"], f"{path}.h")
    return EulerTrajectory(**kwargs)


def _attitude_to_obj(t: EulerTrajectory) -> dict:
    out = {k: _signal_to_obj(getattr(t, k)) for k in ("yaw", "pitch", "roll")}
    if t.h != 1e-5:
        out["h"] = float(t.h)
    return out


def _position_traj(node, path: str) -> PositionTrajectory:
    kwargs = {}
    for key in ("x", "y", "z"):
        if key in node:
            kwargs[key] = _signal(node[key], f"{path}.{key}")
    return PositionTrajectory(**kwargs)


def _position_to_obj(t: PositionTrajectory) -> dict:
    return {k: _signal_to_obj(getattr(t, k)) for k in ("x", "y", "z")}


def _target(node, path: str, allow_beacon: bool):
    kind = _get(node, "type", path)
    if kind == "spacecraft":
        idx = _get(node, "index", path)
        if isinstance(idx, bool) or not isinstance(idx, numbers.Integral):
            raise SchemaError(f"{path}.index: expected an integer")
        return int(idx)
    if kind == "world":
        return WorldObject(_position_traj(_get(node, "position", path),
                                          f"{path}.position"))
    if kind == "beacon":
        if not allow_beacon:
            raise SchemaError(f"{path}.type: beacons have no finite position and "
                              "cannot serve as a pair's common object")
        return DistantBeacon(_vector(_get(node, "direction", path),
                                     f"{path}.direction"))
    raise SchemaError(f"{path}.type: unknown target type {kind!r}")


def _target_to_obj(t) -> dict:
    if isinstance(t, int):
        return {"type": "spacecraft", "index": t}
    if isinstance(t, WorldObject):
        return {"type": "world", "position": _position_to_obj(t.trajectory)}
    if isinstance(t, DistantBeacon):
        return {"type": "beacon", "direction": [float(c) for c in t.direction]}
    raise TypeError(f"unserializable sight target {t!r}")


def _loop_gains(node, path: str, leader: bool) -> LoopGains:
    try:
        if leader:
            att = LeaderGains(k_bA=_number(_get(node, "k_bA", path), f"{path}.k_bA"),
                              k_bB=_number(_get(node, "k_bB", path), f"{path}.k_bB"))
        else:
            att = PairGains(
                k_alpha=_number(_get(node, "k_alpha", path), f"{path}.k_alpha"),
                k_beta=_number(_get(node, "k_beta", path), f"{path}.k_beta"))
        return LoopGains(
            attitude=att,
            k_Omega=_number(_get(node, "k_Omega", path), f"{path}.k_Omega"),
            k_x=_number(_get(node, "k_x", path), f"{path}.k_x"),
            k_v=_number(_get(node, "k_v", path), f"{path}.k_v"),
            c_r=_number(node.get("c_r", 0.01), f"{path}.c_r"),
            c_t=_number(node.get("c_t", 0.01), f"{path}.c_t"))
    except ValueError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"{path}: {exc}") from exc


def _gains_to_obj(g: LoopGains) -> dict:
    if isinstance(g.attitude, LeaderGains):
        out = {"k_bA": g.attitude.k_bA, "k_bB": g.attitude.k_bB}
    else:
        out = {"k_alpha": g.attitude.k_alpha, "k_beta": g.attitude.k_beta}
    out.update(k_Omega=g.k_Omega, k_x=g.k_x, k_v=g.k_v, c_r=g.c_r, c_t=g.c_t)
    return {k: float(v) for k, v in out.items()}


def scenario_from_dict(data: dict) -> Scenario:
    """Build a Scenario from the parsed key-value tree; raises SchemaError
    naming the first offending field."""
    if not isinstance(data, dict):
        raise SchemaError("top level: expected a mapping")
    bodies_node = _get(data, "bodies", "scenario")
    if not isinstance(bodies_node, list) or not bodies_node:
        raise SchemaError("bodies: expected a non-empty list")
    bodies = []
    for i, b in enumerate(bodies_node):
        path = f"bodies[{i}]"
        try:
            bodies.append(BodyParams(
                mass=_number(_get(b, "mass", path), f"{path}.mass"),
                inertia=_matrix(_get(b, "inertia", path), f"{path}.inertia")))
        except ValueError as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(f"{path}: {exc}") from exc

    states_node = _get(data, "initial_states", "scenario")
    if not isinstance(states_node, list):
        raise SchemaError("initial_states: expected a list")
    states = []
    for i, s in enumerate(states_node):
        path = f"initial_states[{i}]"
        states.append(RigidBodyState(
            R=_matrix(_get(s, "R", path), f"{path}.R"),
            x=_vector(_get(s, "x", path), f"{path}.x"),
            v=_vector(_get(s, "v", path), f"{path}.v"),
            Omega=_vector(_get(s, "Omega", path), f"{path}.Omega")))

    leader = _get(data, "leader", "scenario")
    pairs_node = data.get("pairs", [])
    if not isinstance(pairs_node, list):
        raise SchemaError("pairs: expected a list")
    pairs = []
    for i, p in enumerate(pairs_node):
        path = f"pairs[{i}]"
        pairs.append(PairConfig(
            desired_attitude=_attitude_traj(_get(p, "attitude", path), f"{path}.attitude"),
            desired_position=_position_traj(_get(p, "position", path), f"{path}.position"),
            common=_target(_get(p, "common", path), f"{path}.common",
                           allow_beacon=False),
            gains=_loop_gains(_get(p, "gains", path), f"{path}.gains", leader=False)))

    name = data.get("name", "custom")
    if not isinstance(name, str):
        raise SchemaError("name: expected a string")
    return Scenario(
        name=name,
        bodies=bodies,
        initial_states=states,
        leader_attitude=_attitude_traj(_get(leader, "attitude", "leader"),
                                       "leader.attitude"),
        leader_position=_position_traj(_get(leader, "position", "leader"),
                                       "leader.position"),
        object_a=_target(_get(leader, "object_a", "leader"), "leader.object_a",
                         allow_beacon=True),
        object_b=_target(_get(leader, "object_b", "leader"), "leader.object_b",
                         allow_beacon=True),
        leader_gains=_loop_gains(_get(leader, "gains", "leader"), "leader.gains",
                                 leader=True),
        pairs=pairs,
        dt=_number(data.get("dt", 1e-3), "dt"),
        t_final=_number(data.get("t_final", 20.0), "t_final"),
        decimation=int(_number(data.get("decimation", 10), "decimation")))


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "name": s.name,
        "dt": float(s.dt),
        "t_final": float(s.t_final),
        "decimation": int(s.decimation),
        "bodies": [{"mass": float(b.mass),
                    "inertia": [[float(c) for c in row] for row in b.inertia]}
                   for b in s.bodies],
        "initial_states": [{"R": [[float(c) for c in row] for row in st.R],
                            "x": [float(c) for c in st.x],
                            "v": [float(c) for c in st.v],
                            "Omega": [float(c) for c in st.Omega]}
                           for st in s.initial_states],
        "leader": {
            "attitude": _attitude_to_obj(s.leader_attitude),
            "position": _position_to_obj(s.leader_position),
            "object_a": _target_to_obj(s.object_a),
            "object_b": _target_to_obj(s.object_b),
            "gains": _gains_to_obj(s.leader_gains),
        },
        "pairs": [{
            "attitude": _attitude_to_obj(p.desired_attitude),
            "position": _position_to_obj(p.desired_position),
            "common": _target_to_obj(p.common),
            "gains": _gains_to_obj(p.gains),
        } for p in s.pairs],
    }


def load_scenario(path) -> Scenario:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise SchemaError(f"{path}: not valid YAML: {exc}") from exc
    return scenario_from_dict(data)


def save_scenario(scenario: Scenario, path):
    Path(path).write_text(
        yaml.safe_dump(scenario_to_dict(scenario), sort_keys=False))
