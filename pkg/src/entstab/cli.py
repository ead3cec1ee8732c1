"""Command-line front end.

    entstab evolve   --state bell --channel depolarizing --t-max 1 --steps 200
    entstab surface  --c0-steps 11 --t-max 1 --steps 101
    entstab critical --c0 0.25,0.5,1
    entstab optimize --channel dephasing:0.2 --lambda1 0.8 --samples 10000
    entstab dps      --state werner:0.8
    entstab spin     --gamma 1 --sites 6 --t-max 1 --steps 100

Exit status: 0 on success, 2 on a configuration error, 3 on a numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Callable

import numpy as np

from . import channels, dynamics, qstate, spinchain
from .entanglement import concurrence_wootters

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class ConfigError(Exception):
    pass


# -- parsing -------------------------------------------------------------------------


def _load_json_arg(text: str):
    text = text.strip()
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    elif not text.startswith("{") and Path(text).is_file():
        text = Path(text).read_text()
    return json.loads(text)


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse numbers from {text!r}") from exc


def parse_state(spec: str, seed: int = 0) -> qstate.TwoQubitState:
    """Inline JSON, @file / path to JSON, or a preset.

    Presets: bell (singlet), bell:phi+|phi-|psi+|psi-, schmidt:LAMBDA1, pure:C0,
    werner:W, xxz:GAMMA,N, maxmixed, mixed (seeded), random:C0 (seeded mixed
    state with concurrence C0).
    """
    s = spec.strip()
    if s.startswith("{") or s.startswith("@") or (":" not in s and Path(s).is_file()):
        return qstate.state_from_json(_load_json_arg(s))
    name, _, arg = s.partition(":")
    try:
        if name == "bell":
            return qstate.from_pure(qstate.bell_state(arg or "psi-"))
        if name == "schmidt":
            lam1 = float(arg)
            if not 0 <= lam1 <= 1:
                raise ConfigError("schmidt weight must lie in [0, 1]")
            return qstate.from_pure(qstate.PureState(qstate.schmidt_vector(lam1)))
        if name == "pure":
            l1, l2 = qstate.schmidt_lambdas(float(arg))
            return qstate.from_pure(qstate.PureState(qstate.schmidt_vector(l1, l2)))
        if name == "werner":
            return qstate.werner_state(float(arg))
        if name == "xxz":
            gamma, n = _floats(arg)
            red = spinchain.ground_reduced(spinchain.XXZParams(gamma, int(n)))
            return qstate.TwoQubitState(red.matrix())
        if name == "maxmixed":
            return qstate.maximally_mixed()
        if name == "mixed":
            return qstate.random_state(seed, "mixed")
        if name == "random":
            return qstate.random_state(seed, "fixed", c0=float(arg))
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"bad state preset {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown state spec {spec!r}")


def parse_channel(spec: str) -> channels.PauliChannel:
    """JSON channel or shorthand: identity, depolarizing:P, dephasing:P3, pauli:P0,P1,P2,P3."""
    s = spec.strip()
    try:
        if s.startswith("{") or s.startswith("@"):
            return channels.channel_from_json(_load_json_arg(s))
        name, _, arg = s.partition(":")
        if name == "identity":
            return channels.IDENTITY
        if name == "depolarizing" and arg:
            return channels.make_depolarizing(float(arg))
        if name == "dephasing" and arg:
            return channels.make_dephasing(float(arg))
        if name == "pauli":
            return channels.PauliChannel(tuple(_floats(arg)))
        if Path(s).is_file():
            return channels.channel_from_json(_load_json_arg(s))
    except ValueError as exc:
        raise ConfigError(f"bad channel {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown channel spec {spec!r}")


def parse_schedule(spec: str, kappa: float) -> channels.ChannelSchedule:
    """``depolarizing`` / ``dephasing`` schedules in time, or a fixed channel approached
    as exp(-kappa t) identity + (1 - exp(-kappa t)) channel."""
    if kappa <= 0:
        raise ConfigError("--kappa must be positive")
    s = spec.strip()
    if s == "depolarizing":
        return channels.depolarizing_schedule(kappa)
    if s == "dephasing":
        return channels.dephasing_schedule(kappa)
    return channels.toward_schedule(parse_channel(s), kappa)


def time_grid(t_max: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise ConfigError("--steps must be at least 2")
    if not t_max > 0:
        raise ConfigError("--t-max must be positive")
    return np.linspace(0.0, t_max, steps)


# -- output ----------------------------------------------------------------------------


def fmt(x) -> str:
    return f"{float(x):.12g}"


def _round(obj):
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(fmt(x)) if math.isfinite(x) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _round(obj.tolist())
    return obj


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating, int)) and not isinstance(v, bool) else v for v in row])
    return buf.getvalue()


def render_json(obj) -> str:
    return json.dumps(_round(obj), indent=2, sort_keys=True) + "\n"


def emit(text: str, out: str | None) -> None:
    """Write to ``out`` atomically (temp file + rename) or to stdout."""
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    target = Path(out)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _table(args, header, rows, meta=None) -> str:
    if args.format == "csv":
        return render_csv(header, rows)
    payload = {"columns": list(header), "rows": [list(r) for r in rows]}
    if meta:
        payload.update(meta)
    return render_json(payload)


# -- commands ----------------------------------------------------------------------------


def cmd_evolve(args) -> Callable[[], str]:
    state = parse_state(args.state or "bell", args.seed)
    schedule = parse_schedule(args.channel or "depolarizing", args.kappa)
    grid = time_grid(args.t_max, args.steps)
    label = args.label or (args.state or "bell")

    def run():
        traj = dynamics.evolve_trajectory(state, schedule, grid, label, sides=args.sides)
        return _table(args, ("t", "C", "label"), list(traj.rows()))

    return run


def cmd_surface(args) -> Callable[[], str]:
    grid = time_grid(args.t_max, args.steps)
    c0s = _floats(args.c0) if args.c0 else list(np.linspace(0.0, 1.0, args.c0_steps))
    if any(not 0 <= c <= 1 for c in c0s):
        raise ConfigError("C0 values must lie in [0, 1]")
    if args.kappa <= 0:
        raise ConfigError("--kappa must be positive")

    def run():
        rows = []
        for c0 in c0s:
            cs = dynamics.depolarizing_residual(c0, args.kappa, grid)
            rows.extend((c0, t, c) for t, c in zip(grid, cs))
        return _table(args, ("C0", "t", "C"), rows, {"kappa": args.kappa})

    return run


def cmd_critical(args) -> Callable[[], str]:
    c0s = _floats(args.c0) if args.c0 else list(np.linspace(0.0, 1.0, args.c0_steps))
    if any(not 0 <= c <= 1 for c in c0s):
        raise ConfigError("C0 values must lie in (0, 1]")
    if args.kappa <= 0:
        raise ConfigError("--kappa must be positive")

    def run():
        rows = [(c0, args.kappa * dynamics.critical_time(c0, args.kappa)) for c0 in c0s]
        return _table(args, ("C0", "kappa_Tc"), rows)

    return run


def cmd_optimize(args) -> Callable[[], str]:
    ch = parse_channel(args.channel or "depolarizing:0.2")
    if not 0 <= args.lambda1 <= 1:
        raise ConfigError("--lambda1 must lie in [0, 1]")
    if args.samples < 1:
        raise ConfigError("--samples must be at least 1")

    def run():
        res = dynamics.local_unitary_search(args.lambda1, ch, args.samples, args.seed)
        report = dynamics.stability_report(args.lambda1, ch, "max")
        out = res.to_json()
        out["channel"] = ch.to_json()
        out["Q"] = list(ch.q)
        out["lambda1"] = args.lambda1
        out["samples"] = args.samples
        out["optimal_unitary"] = {
            "re": dynamics.optimal_family_unitary(ch.q).real.tolist(),
            "im": dynamics.optimal_family_unitary(ch.q).imag.tolist(),
        }
        out["oracle"] = report.to_json()
        return render_json(out)

    return run


def cmd_dps(args) -> Callable[[], str]:
    state = parse_state(args.state or "bell", args.seed)
    if args.kappa <= 0:
        raise ConfigError("--kappa must be positive")

    def run():
        verdict = dynamics.is_dps(state, args.kappa).to_json()
        verdict["concurrence"] = concurrence_wootters(state)
        return render_json(verdict)

    return run


def cmd_spin(args) -> Callable[[], str]:
    try:
        params = spinchain.XXZParams(args.gamma, args.sites)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    grid = time_grid(args.t_max, args.steps)
    if args.kappa <= 0:
        raise ConfigError("--kappa must be positive")

    def run():
        res = spinchain.spin_pipeline(params, args.kappa, grid)
        rows = list(zip(res.times, res.c_pipeline, res.c_closed_form, res.gap))
        red = res.reduced
        meta = {
            "gamma": params.gamma,
            "n_sites": params.n_sites,
            "kappa": args.kappa,
            "c0": res.c0,
            "c0_wootters": res.c0_wootters,
            "reduced": {"u": red.u, "x": red.x, "y": red.y, "v": red.v, "z": [red.z.real, red.z.imag]},
        }
        return _table(args, ("t", "C_pipeline", "C_closed_form", "gap"), rows, meta)

    return run


COMMANDS = {
    "evolve": cmd_evolve,
    "surface": cmd_surface,
    "critical": cmd_critical,
    "optimize": cmd_optimize,
    "dps": cmd_dps,
    "spin": cmd_spin,
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--channel", help="channel or schedule spec")
    shared.add_argument("--state", help="state JSON, @file or preset")
    shared.add_argument("--kappa", type=float, default=1.0)
    shared.add_argument("--t-max", type=float, default=1.0)
    shared.add_argument("--steps", type=int, default=200)
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--format", choices=("csv", "json"), default="csv")
    shared.add_argument("--out", help="output path (default: stdout)")

    parser = argparse.ArgumentParser(prog="entstab", description="Two-qubit entanglement stability under Pauli noise")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", parents=[shared], help="concurrence trajectory of a state")
    p.add_argument("--sides", choices=("both", "first", "second"), default="both")
    p.add_argument("--label")

    for name, help_ in (("surface", "residual concurrence over (C0, t)"), ("critical", "critical time per C0")):
        p = sub.add_parser(name, parents=[shared], help=help_)
        p.add_argument("--c0", help="comma-separated C0 values")
        p.add_argument("--c0-steps", type=int, default=11)

    p = sub.add_parser("optimize", parents=[shared], help="local-unitary stability search")
    p.add_argument("--lambda1", type=float, default=0.8)
    p.add_argument("--samples", type=int, default=10_000)

    sub.add_parser("dps", parents=[shared], help="decoherence-path-state test")

    p = sub.add_parser("spin", parents=[shared], help="XXZ ring pair-state pipeline")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--sites", type=int, default=4)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        job = COMMANDS[args.command](args)
    except (ConfigError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"entstab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        text = job()
    except Exception as exc:  # any failure past configuration is numerical
        print(f"entstab: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        emit(text, args.out)
    except OSError as exc:
        print(f"entstab: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
