"""Command-line front end: bounds, crossovers, norm estimation, validation runs.

Subcommands: ``phi``, ``bound``, ``crossover``, ``estimate``, ``validate``,
``simulate``.  Reports embed the artifact version, the fully resolved
configuration, and the seed, so two runs with equal configs are byte-identical
except for the ``duration_s`` field.  Exit codes: 0 success, 1 a validation
run observed a bound violation, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .errors import ConfigError, DomainError, RankPError
from .estimator import SampleSet, estimate_norm, tail_criterion_check
from .norm_bounds import IncrementSchedule
from .orlicz import RankP, legendre_numeric, phi_eval, phi_inverse
from .simulate import (
    PRESET_NAMES,
    preset_spec,
    sample_double_weibull,
    sample_halfnormal_power,
    generate_paths,
    validate_bound,
)
from .tail_bounds import compare_bounds, crossover_epsilon

DEFAULT_SEED = 123456789
SEED_ENV_VAR = "RANKP_SEED"


# ---------------------------------------------------------------------------
# argument parsing helpers
# ---------------------------------------------------------------------------


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _schedule_arg(text: str) -> tuple[float, ...]:
    parts = text.split(",")
    try:
        vals = tuple(float(tok) for tok in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"malformed schedule {text!r}") from exc
    return vals

def _default_seed() -> int:
    env = os.environ.get(SEED_ENV_VAR, "").strip()
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV_VAR} must be an integer (got {env!r})") from exc
    return DEFAULT_SEED


def _add_common_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json", help="report format")
    p.add_argument("--out", metavar="PATH", default=None, help="write to PATH instead of stdout")


def _add_grid_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", type=_float_list, default=None, help="explicit ascending epsilon list, comma separated")
    p.add_argument("--eps-min", type=float, default=None)
    p.add_argument("--eps-max", type=float, default=None)
    p.add_argument("--eps-count", type=int, default=12)
    p.add_argument("--eps-spacing", choices=("linear", "log"), default="linear")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rankp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rankp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_phi = sub.add_parser("phi", help="evaluate the rank-p function, its conjugate, and the inverse round trip")
    p_phi.add_argument("--p", type=float, required=True)
    p_phi.add_argument("--x", type=_float_list, required=True, help="comma-separated evaluation points")
    _add_common_output(p_phi)

    p_bound = sub.add_parser("bound", help="rank-p vs classic tail bounds over an epsilon grid")
    p_bound.add_argument("--p", type=float, default=2.0)
    p_bound.add_argument("--schedule", type=_schedule_arg, required=True, help="comma-separated increment bounds")
    p_bound.add_argument("--d0", type=float, default=0.0, help="declared start norm bound")
    _add_grid_args(p_bound)
    _add_common_output(p_bound)

    p_cross = sub.add_parser("crossover", help="threshold where the rank-p bound overtakes the classic one")
    p_cross.add_argument("--p", type=float, required=True)
    p_cross.add_argument("--schedule", type=_schedule_arg, default=None)
    p_cross.add_argument("--c", type=float, default=None)
    p_cross.add_argument("--d", type=float, default=None)
    _add_common_output(p_cross)

    p_est = sub.add_parser("estimate", help="estimate the rank-p norm from data (stdin, file, or generated)")
    p_est.add_argument("--p", type=float, default=2.0)
    p_est.add_argument("--in", dest="in_path", metavar="PATH", default=None, help="numeric text stream (default stdin)")
    p_est.add_argument("--dist", choices=("double-weibull", "halfnormal-power"), default=None,
                       help="self-generating mode: sample from this distribution instead of reading a stream")
    p_est.add_argument("--q", type=float, default=None, help="shape for --dist")
    p_est.add_argument("--n", type=int, default=100_000, help="sample count for --dist")
    p_est.add_argument("--seed", type=int, default=None)
    p_est.add_argument("--tail-check", action="store_true", help="also run the (C, D) tail-criterion check")
    p_est.add_argument("--C", type=float, default=2.0, help="tail-criterion constant C")
    p_est.add_argument("--D", type=float, default=None, help="tail-criterion scale D (default 1.1 * tau_hat)")
    p_est.add_argument("--delta", type=float, default=1e-3)
    _add_grid_args(p_est)
    _add_common_output(p_est)

    p_val = sub.add_parser("validate", help="Monte Carlo validation of the martingale tail bound")
    p_val.add_argument("--preset", choices=PRESET_NAMES, required=True)
    p_val.add_argument("--p", type=float, default=2.0)
    p_val.add_argument("--n-steps", type=int, default=20)
    p_val.add_argument("--n-paths", type=int, default=100_000)
    p_val.add_argument("--delta", type=float, default=1e-3)
    p_val.add_argument("--seed", type=int, default=None)
    p_val.add_argument("--threads", type=int, default=1)
    _add_grid_args(p_val)
    _add_common_output(p_val)

    p_sim = sub.add_parser("simulate", help="emit samples or path endpoints as newline-delimited text")
    group = p_sim.add_argument_group("i.i.d. sample mode")
    group.add_argument("--dist", choices=("double-weibull", "halfnormal-power"), default=None)
    group.add_argument("--q", type=float, default=None)
    group.add_argument("--n", type=int, default=1000)
    pgroup = p_sim.add_argument_group("path endpoint mode")
    pgroup.add_argument("--preset", choices=PRESET_NAMES, default=None)
    pgroup.add_argument("--p", type=float, default=2.0)
    pgroup.add_argument("--n-steps", type=int, default=20)
    pgroup.add_argument("--n-paths", type=int, default=1000)
    pgroup.add_argument("--threads", type=int, default=1)
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--out", metavar="PATH", default=None)

    return parser


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------


def _resolve_grid(args, span: float) -> list[float]:
    if args.eps is not None:
        grid = list(args.eps)
        if len(grid) == 0:
            raise ConfigError("--eps must contain at least one value")
        if any(e < 0 for e in grid) or any(b < a for a, b in zip(grid, grid[1:])):
            raise ConfigError("--eps must be nonnegative and ascending")
        return grid
    hi = args.eps_max if args.eps_max is not None else span
    count = int(args.eps_count)
    if count < 1:
        raise ConfigError("--eps-count must be >= 1")
    if args.eps_spacing == "log":
        lo = args.eps_min if args.eps_min is not None else hi / 1000.0
        if not lo > 0:
            raise ConfigError("log spacing needs --eps-min > 0")
        return [float(v) for v in np.geomspace(lo, hi, count)]
    lo = args.eps_min if args.eps_min is not None else hi / count
    if lo < 0 or hi < lo:
        raise ConfigError("need 0 <= --eps-min <= --eps-max")
    return [float(v) for v in np.linspace(lo, hi, count)]


def _emit_text(text: str, out_path: Optional[str]) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_document(doc: dict, fmt: str, out_path: Optional[str], csv_rows: list[dict] | None) -> None:
    if fmt == "json":
        _emit_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", out_path)
        return
    if not csv_rows:
        raise ConfigError("this command has no tabular payload; use --format json")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(csv_rows[0].keys()))
    writer.writeheader()
    for row in csv_rows:
        writer.writerow({k: ("" if v is None else repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    _emit_text(buf.getvalue(), out_path)


def _envelope(command: str, config: dict, seed: Optional[int], payload: dict, t0: float) -> dict:
    doc = {
        "version": __version__,
        "command": command,
        "config": config,
        "seed": seed,
        "duration_s": time.perf_counter() - t0,
    }
    doc.update(payload)
    return doc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_phi(args) -> int:
    t0 = time.perf_counter()
    rank = RankP(args.p)
    q = rank.q
    rows = []
    for x in args.x:
        value = phi_eval(rank, x)
        rows.append(
            {
                "x": float(x),
                "phi_p": float(value),
                "phi_q": float(phi_eval(q, x)),
                "inverse_roundtrip": float(phi_inverse(rank, value)),
                "conjugate_numeric": float(legendre_numeric(rank, x)),
            }
        )
    if args.format == "json":
        config = {"p": rank.p, "q": q, "x": [float(v) for v in args.x]}
        doc = _envelope("phi", config, None, {"rows": rows}, t0)
        _emit_document(doc, "json", args.out, None)
    else:
        _emit_document({}, "csv", args.out, rows)
    return 0


def _report_csv_rows(report_dict: dict) -> list[dict]:
    return [dict(row) for row in report_dict["rows"]]


def _cmd_bound(args) -> int:
    t0 = time.perf_counter()
    rank = RankP(args.p)
    schedule = IncrementSchedule(args.schedule)
    if args.d0 < 0:
        raise ConfigError("--d0 must be >= 0")
    grid = _resolve_grid(args, schedule.d)
    report = compare_bounds(grid, schedule, args.d0, rank)
    config = {
        "p": rank.p,
        "schedule": list(schedule.d_i),
        "d0": float(args.d0),
        "eps_grid": grid,
    }
    doc = _envelope("bound", config, None, report.to_dict(), t0)
    _emit_document(doc, args.format, args.out, _report_csv_rows(report.to_dict()))
    return 0


def _cmd_crossover(args) -> int:
    t0 = time.perf_counter()
    rank = RankP(args.p)
    if args.schedule is not None:
        schedule = IncrementSchedule(args.schedule)
        c, d = schedule.c, schedule.d
    elif args.c is not None and args.d is not None:
        c, d = args.c, args.d
    else:
        raise ConfigError("give either --schedule or both --c and --d")
    result = crossover_epsilon(rank, c, d)
    payload = {
        "p": rank.p,
        "q": rank.q,
        "c": result.c,
        "d": float(d),
        "gamma_p": result.gamma_p,
        "epsilon_p": result.epsilon_p,
        "bracket": list(result.bracket),
        "residual": result.residual,
    }
    config = {"p": rank.p, "c": float(c), "d": float(d)}
    doc = _envelope("crossover", config, None, payload, t0)
    _emit_document(doc, args.format, args.out, [payload])
    return 0


def _read_stream(in_path: Optional[str]) -> np.ndarray:
    if in_path:
        with open(in_path, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    tokens = text.split()
    if not tokens:
        raise ConfigError("input stream is empty")
    try:
        return np.array([float(tok) for tok in tokens], dtype=np.float64)
    except ValueError as exc:
        raise ConfigError(f"input stream contains a non-numeric token: {exc}") from exc


def _cmd_estimate(args) -> int:
    t0 = time.perf_counter()
    rank = RankP(args.p)
    seed = args.seed if args.seed is not None else _default_seed()
    if args.dist is not None:
        if args.q is None:
            raise ConfigError("--dist needs --q")
        if args.dist == "double-weibull":
            samples = sample_double_weibull(args.q, args.n, seed)
        else:
            samples = sample_halfnormal_power(args.q, args.n, seed)
    else:
        samples = SampleSet(_read_stream(args.in_path))
        seed = None
    estimate = estimate_norm(samples, rank)
    payload = {
        "p": rank.p,
        "q": rank.q,
        "n_samples": samples.n,
        "tau_hat": estimate.tau_hat,
        "argmax_lambda": estimate.argmax_lambda,
        "centering_shift": estimate.shift,
        "cgf_curve": [[float(l), float(v)] for l, v in estimate.cgf_curve],
        "tail_criterion": None,
    }
    if args.tail_check:
        D = args.D if args.D is not None else 1.1 * estimate.tau_hat
        centered, _ = samples.center()
        abs_max = float(np.max(np.abs(centered.values)))
        if args.eps is not None:
            grid = args.eps
        else:
            scale = float(np.std(centered.values)) or abs_max or 1.0
            grid = [float(v) for v in np.linspace(0.5 * scale, 1.05 * abs_max, 8)]
        check = tail_criterion_check(samples, rank, args.C, D, grid, delta=args.delta)
        payload["tail_criterion"] = {
            "C": check.C,
            "D": check.D,
            "delta": check.delta,
            "ci_slack": check.ci_slack,
            "pass": check.passed,
            "rows": [
                {"eps": r.eps, "frequency": r.frequency, "bound": r.bound, "pass": r.passed}
                for r in check.rows
            ],
        }
    config = {
        "p": rank.p,
        "source": args.dist or (args.in_path or "stdin"),
        "q": args.q,
        "n": samples.n,
        "tail_check": bool(args.tail_check),
        "C": float(args.C),
        "D": args.D,
    }
    doc = _envelope("estimate", config, seed, payload, t0)
    csv_rows = [{"lambda": l, "cgf": v} for l, v in payload["cgf_curve"]]
    _emit_document(doc, args.format, args.out, csv_rows)
    return 0


def _cmd_validate(args) -> int:
    t0 = time.perf_counter()
    seed = args.seed if args.seed is not None else _default_seed()
    spec = preset_spec(args.preset, args.p, n_steps=args.n_steps)
    grid = _resolve_grid(args, spec.schedule.d)
    report = validate_bound(spec, grid, args.n_paths, args.delta, seed, threads=args.threads)
    # threads is an execution knob, not part of the experiment: results are
    # thread-count independent, so recording it would break report identity
    config = {
        "preset": args.preset,
        "p": spec.rank.p,
        "n_steps": spec.schedule.n,
        "n_paths": int(args.n_paths),
        "delta": float(args.delta),
        "eps_grid": grid,
        "increment_law": spec.increment_law,
        "start": spec.start.label(),
    }
    doc = _envelope("validate", config, seed, report.to_dict(), t0)
    doc["all_pass"] = bool(report.all_passed)
    _emit_document(doc, args.format, args.out, _report_csv_rows(report.to_dict()))
    return 0 if report.all_passed else 1


def _cmd_simulate(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.dist is not None:
        if args.q is None:
            raise ConfigError("--dist needs --q")
        if args.dist == "double-weibull":
            samples = sample_double_weibull(args.q, args.n, seed)
        else:
            samples = sample_halfnormal_power(args.q, args.n, seed)
        text = "\n".join(repr(float(v)) for v in samples.values) + "\n"
        _emit_text(text, args.out)
        return 0
    if args.preset is None:
        raise ConfigError("give either --dist (samples) or --preset (path endpoints)")
    spec = preset_spec(args.preset, args.p, n_steps=args.n_steps)
    paths = generate_paths(spec, args.n_paths, seed, threads=args.threads)
    text = "\n".join(f"{repr(float(a))} {repr(float(b))}" for a, b in zip(paths.xi0, paths.xin)) + "\n"
    _emit_text(text, args.out)
    return 0


_COMMANDS = {
    "phi": _cmd_phi,
    "bound": _cmd_bound,
    "crossover": _cmd_crossover,
    "estimate": _cmd_estimate,
    "validate": _cmd_validate,
    "simulate": _cmd_simulate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return _COMMANDS[args.command](args)
    except (DomainError, ConfigError) as exc:
        print(f"rankp {args.command}: {exc}", file=sys.stderr)
        return 2
    except RankPError as exc:  # pragma: no cover - defensive
        print(f"rankp {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
