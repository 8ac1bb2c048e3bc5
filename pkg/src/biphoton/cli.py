"""Command-line front end.

Exit codes: 0 success, 2 usage or config error, 3 data validation error
(amplitudes off unit norm). Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
import yaml

from . import braun_twiss as bt
from . import montecarlo as mc
from .errors import BiphotonError, ConfigError, NormalizationError
from .literals import (
    load_experiment,
    state_from_amplitudes,
    state_from_angles,
    state_from_text,
    tuning_from_text,
)
from .qutrit import (
    BiphotonState,
    degree_of_polarization,
    mean_stokes,
    mode_name,
    to_modes,
)


def _num(x: float, digits: int) -> str:
    x = float(x)
    if abs(x) < 0.5 * 10.0 ** -digits:
        x = 0.0
    return f"{x:.{digits}f}"


def _angle(x: float) -> str:
    return _num(x, 6)


def _amp(c: complex) -> str:
    return f"{_num(c.real, 9)},{_num(c.imag, 9)}"


def _state_label(state: BiphotonState) -> str:
    names = [mode_name(m) for m in to_modes(state)]
    return "".join(names) if all(names) else "custom"


def cmd_state(args) -> int:
    if args.named:
        state = state_from_text(args.named)
    elif args.modes:
        state = state_from_angles(args.modes)
    elif args.c:
        state = state_from_amplitudes(args.c)
    else:
        state = state_from_text(args.input)
    pair = to_modes(state, diagnose=args.diagnose)
    out = sys.stdout
    for i, c in enumerate(state.amplitudes, 1):
        print(f"c{i} = {_amp(c)}", file=out)
    names = [mode_name(m) or "?" for m in pair]
    print(f"pair = {{{names[0]},{names[1]}}}", file=out)
    for i, m in enumerate(pair, 1):
        print(f"photon{i}: theta={_angle(m.theta)} phi={_angle(m.phi)}", file=out)
    print(f"global_phase = {_angle(pair.global_phase)}", file=out)
    print(f"P = {_num(degree_of_polarization(state), 9)}", file=out)
    print("stokes = " + ",".join(_num(s, 9) for s in mean_stokes(state)), file=out)
    return 0


def cmd_coincide(args) -> int:
    state = state_from_text(args.input)
    tuning = tuning_from_text(args.tuned)
    res = bt.coincidence_probability(state, tuning)
    orthogonal = bt.orthogonality_test(state, tuning, args.tol)
    print(f"exact_probability = {_num(res.exact_probability, 9)}")
    print(f"overlap_squared = {_num(res.overlap_squared, 9)}")
    print(f"same_arm_probability = {_num(res.same_arm_probability, 9)}")
    print(f"orthogonal: {'yes' if orthogonal else 'no'}")
    return 0


def _load_mc_config(path: str | None) -> mc.ExperimentConfig:
    if path is None:
        return mc.ExperimentConfig()
    try:
        data = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if isinstance(data, dict) and "montecarlo" in data:
        data = data["montecarlo"]
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping of montecarlo settings")
    return mc.ExperimentConfig.from_dict(data)


def cmd_table(args) -> int:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    if not args.mc:
        writer.writerow(["input", "detected", "P_in", "P_det", "exact", "overlap2"])
        for name, det, p_in, p_det, exact, ov2 in mc.ideal_table():
            writer.writerow([name, det, _num(p_in, 6), _num(p_det, 6), _num(exact, 9), _num(ov2, 9)])
        return 0
    config = _load_mc_config(args.config)
    if args.observable:
        config = replace(config, observable=mc.Observable(args.observable))
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    writer.writerow(["input", "detected", "P_in", "P_det", "rate", "stderr"])
    for row in mc.reproduce_table(config, n_seeds=args.seeds):
        writer.writerow([row.input, row.detected, _num(row.p_in, 6), _num(row.p_det, 6),
                         _num(row.rate, 6), _num(row.stderr, 6)])
    return 0


def cmd_scan(args) -> int:
    state = state_from_text(args.input)
    n_theta = args.resolution
    n_phi = 2 * (args.resolution - 1) if args.resolution > 1 else 1
    theta, phi = bt.sphere_grid(n_theta, n_phi)
    dirs = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], 1)
    intensity = bt.singles_from_stokes(mean_stokes(state), dirs)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["theta", "phi", "intensity"])
    for t, p, i in zip(theta, phi, intensity):
        writer.writerow([_angle(t), _angle(p), _num(i, 9)])
    scan = bt.visibility_scan(state, args.arm)
    print(f"# arm={args.arm} max={_num(scan.max, 6)} min={_num(scan.min, 6)} "
          f"visibility={_num(scan.visibility, 6)} P={_num(degree_of_polarization(state), 6)}")
    return 0


def cmd_mc(args) -> int:
    state, tuning, config = load_experiment(args.experiment)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.observable:
        config = replace(config, observable=mc.Observable(args.observable))
    rec = mc.run(state, tuning, config)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["input", "detected", "singles1", "singles2", "coincidences",
                     "true_coincidences", "accidental_estimate", "duration", "rate", "stderr"])
    detected = "".join(mode_name(m) or "?" for m in (tuning.arm1_mode, tuning.arm2_mode))
    writer.writerow([_state_label(state), detected, rec.singles1, rec.singles2,
                     rec.coincidences, rec.true_coincidences, _num(rec.accidental_estimate, 6),
                     _num(rec.duration, 6), _num(rec.rate, 6), _num(rec.stderr, 6)])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biphoton", description="Biphoton qutrit polarization states and coincidence tests.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", help="amplitudes, Poincare pair, P and Stokes vector")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--named", help="named state, e.g. HV, RL, DDb")
    g.add_argument("--modes", help="theta1,phi1,theta2,phi2 in radians")
    g.add_argument("--c", help="amplitudes as re,im;re,im;re,im")
    g.add_argument("--input", help="any state literal (name, 'modes H D', or JSON)")
    p.add_argument("--diagnose", action="store_true",
                   help="compare with the closed-form angle expressions (logged)")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("coincide", help="coincidence probability for a tuned detector")
    p.add_argument("--input", required=True, help="input state")
    p.add_argument("--tuned", required=True, help="filter modes, e.g. H,V or HV")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_coincide)

    p = sub.add_parser("table", help="the seven-row orthogonality table as CSV")
    p.add_argument("--mc", action="store_true", help="simulate count rates")
    p.add_argument("--config", help="YAML/JSON file with montecarlo settings")
    p.add_argument("--observable", choices=[o.value for o in mc.Observable])
    p.add_argument("--seed", type=int)
    p.add_argument("--seeds", type=int, default=10, help="runs pooled per row (default 10)")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("scan", help="singles intensity over analyzer settings")
    p.add_argument("--input", required=True)
    p.add_argument("--arm", type=int, choices=(1, 2), default=1)
    p.add_argument("--resolution", type=int, default=19, help="polar grid points (default 19)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("mc", help="one Monte Carlo run from an experiment file")
    p.add_argument("experiment", help="experiment file (YAML or JSON)")
    p.add_argument("--seed", type=int)
    p.add_argument("--observable", choices=[o.value for o in mc.Observable])
    p.set_defaults(func=cmd_mc)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except NormalizationError as exc:
        print(f"biphoton: {exc}", file=sys.stderr)
        return 3
    except (BiphotonError, ValueError) as exc:
        print(f"biphoton: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
