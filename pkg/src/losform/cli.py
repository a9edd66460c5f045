"""Command-line front end.

Subcommands: `run` integrates a preset or scenario file and writes CSV
time series plus a JSON summary; `validate` checks a scenario without
running it; `export` writes a preset to a scenario file.

Exit codes: 0 success, 2 validation failure, 3 runtime geometry failure,
4 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .controllers import (rotational_stability_matrix,
                          translational_stability_matrix)
from .los import GeometryError
from .presets import get_preset, preset_names
from .scenario_io import SchemaError, load_scenario, save_scenario
from .sim import RunLog, Scenario, _loop_labels, run

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_GEOMETRY = 3
EXIT_IO = 4


def _fmt(v: float) -> str:
    # 17 significant digits round-trips IEEE doubles exactly.
    return format(float(v), ".17g")


def _write_csv(path: Path, header: list[str], columns: list[np.ndarray]):
    rows = len(columns[0])
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for r in range(rows):
            fh.write(",".join(_fmt(col[r]) for col in columns) + "\n")


def write_states_csv(log: RunLog, path: Path):
    n = log.x.shape[1]
    header = ["t"]
    columns = [log.t]
    for i in range(n):
        tag = i + 1
        for r in range(3):
            for c in range(3):
                header.append(f"R{tag}_{r + 1}{c + 1}")
                columns.append(log.R[:, i, r, c])
        for name, arr in (("x", log.x), ("v", log.v), ("Omega", log.Omega)):
            for c in range(3):
                header.append(f"{name}{tag}_{c + 1}")
                columns.append(arr[:, i, c])
    _write_csv(path, header, columns)


def write_errors_csv(log: RunLog, path: Path):
    labels = _loop_labels(log.x.shape[1])
    header = ["t"]
    columns = [log.t]
    for l, label in enumerate(labels):
        for name, arr in (("e_" + label, log.e_att_diag),
                          ("e_Omega_" + label, log.e_Omega),
                          ("e_x_" + label, log.e_x),
                          ("e_v_" + label, log.e_v)):
            header.append(f"norm_{name}")
            columns.append(np.linalg.norm(arr[:, l], axis=1))
        header.append(f"Psi_{label}")
        columns.append(log.Psi[:, l])
    _write_csv(path, header, columns)


def write_controls_csv(log: RunLog, path: Path):
    n = log.u.shape[1]
    header = ["t"]
    columns = [log.t]
    for i in range(n):
        for name, arr in (("u", log.u), ("f", log.f)):
            for c in range(3):
                header.append(f"{name}{i + 1}_{c + 1}")
                columns.append(arr[:, i, c])
    _write_csv(path, header, columns)


def write_lyapunov_csv(log: RunLog, path: Path):
    labels = _loop_labels(log.x.shape[1])
    header = ["t", "V_total"]
    columns = [log.t, log.V_total]
    for group, arr in (("Vr", log.V_rot), ("Vt", log.V_trans),
                       ("min_eig_M", log.min_eig_M),
                       ("min_eig_N", log.min_eig_N)):
        for l, label in enumerate(labels):
            header.append(f"{group}_{label}")
            columns.append(arr[:, l])
    _write_csv(path, header, columns)


def write_outputs(log: RunLog, out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    write_states_csv(log, out_dir / "states.csv")
    write_errors_csv(log, out_dir / "errors.csv")
    write_controls_csv(log, out_dir / "controls.csv")
    write_lyapunov_csv(log, out_dir / "lyapunov.csv")
    with open(out_dir / "summary.json", "w") as fh:
        json.dump(log.summary, fh, indent=2)
        fh.write("\n")


def _load(args) -> Scenario:
    if args.preset:
        return get_preset(args.preset)
    return load_scenario(args.scenario)


def cmd_run(args) -> int:
    try:
        scenario = _load(args)
    except (SchemaError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        log = run(scenario, dt=args.dt, t_final=args.tf,
                  decimation=args.decimation)
    except (GeometryError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        write_outputs(log, Path(args.out))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.verbose:
        print(json.dumps(log.summary, indent=2))
    else:
        print(f"{scenario.name}: {log.summary['steps']} steps in "
              f"{log.summary['wall_time_s']:.2f} s; wrote {args.out}/")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        scenario = _load(args)
    except (SchemaError, KeyError, ValueError) as exc:
        print(f"FAIL load: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"FAIL load: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        scenario.validate()
    except (ValueError, GeometryError) as exc:
        print(f"FAIL invariants: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"OK invariants: {scenario.n} spacecraft, {len(scenario.pairs)} pairs, "
          f"geometry non-degenerate at t=0")
    # Structural stability precheck: M/N with the gain-dependent terms only
    # (sight-line rate terms are zero for quiescent geometry).
    ok = True
    for label, g, body in zip(_loop_labels(scenario.n), scenario.loop_gains,
                              scenario.bodies):
        m = rotational_stability_matrix(g.k_Omega, g.c_r, body.lambda_max,
                                        g.attitude.k_bar, 0.0, 0.0, 0.0)
        n = translational_stability_matrix(body.mass, g.k_x, g.k_v, g.c_t)
        em = float(np.linalg.eigvalsh(m).min())
        en = float(np.linalg.eigvalsh(n).min())
        good = em > 0.0 and en > 0.0
        ok = ok and good
        print(f"{'OK' if good else 'FAIL'} loop {label}: "
              f"min eig M = {em:.6g}, min eig N = {en:.6g}")
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_export(args) -> int:
    try:
        scenario = get_preset(args.preset)
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        save_scenario(scenario, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {args.out}")
    return EXIT_OK


def _add_source_args(p: argparse.ArgumentParser):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", metavar="NAME",
                     help=f"built-in scenario ({', '.join(preset_names())})")
    src.add_argument("--scenario", metavar="PATH", help="scenario YAML file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="losform",
        description="Line-of-sight formation control simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate a scenario and write CSV logs")
    _add_source_args(p_run)
    p_run.add_argument("--out", default="results", help="output directory")
    p_run.add_argument("--dt", type=float, default=None, help="time step override [s]")
    p_run.add_argument("--tf", type=float, default=None, help="final time override [s]")
    p_run.add_argument("--decimation", type=int, default=None,
                       help="log every k-th step")
    p_run.add_argument("-v", "--verbose", action="store_true",
                       help="print the full summary")
    p_run.set_defaults(func=cmd_run)

    p_val = sub.add_parser("validate", help="check a scenario without running it")
    _add_source_args(p_val)
    p_val.set_defaults(func=cmd_validate)

    p_exp = sub.add_parser("export", help="write a preset to a scenario file")
    p_exp.add_argument("--preset", required=True, metavar="NAME",
                       help=f"built-in scenario ({', '.join(preset_names())})")
    p_exp.add_argument("--out", required=True, metavar="PATH",
                       help="destination scenario file")
    p_exp.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
