"""Command-line front end.

Subcommands: expect, optimal-t, simulate, sweep, pit, classes, figure.
File formats and manifest semantics are documented in FORMATS.md.

Exit codes: 0 success, 2 validation error (including argparse usage errors),
3 degenerate voting rule, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import asdict, replace
from importlib import resources

from . import __version__
from .claims import optimal_threshold
from .errors import DegenerateRuleError, ValidationError
from .expectations import TAIL_MODES, expected_society_increment
from .model import EnvironmentParams, SocietyParams
from .simulate import SimulationConfig, run
from .sweeps import (
    AXIS_NAMES,
    SweepAxis,
    SweepSpec,
    majority_threshold_classes,
    max_delta_curve,
    pit_region,
    sweep,
)

OUT_DIR_ENV = "VISE_OUT_DIR"


def _out_dir(args: argparse.Namespace) -> str:
    d = args.out_dir or os.environ.get(OUT_DIR_ENV) or "."
    os.makedirs(d, exist_ok=True)
    return d


def _write_manifest(
    out_dir: str,
    name: str,
    command: str,
    params: dict,
    outputs: list[str],
    started: float,
    seed: int | None = None,
) -> str:
    manifest = {
        "command": command,
        "tool_version": __version__,
        "params": params,
        "seed": seed,
        "outputs": outputs,
        "duration_seconds": round(time.time() - started, 3),
    }
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return path


def _resolve_ell(n: int, ell: int | None, delta: float | None) -> int:
    if (ell is None) == (delta is None):
        raise ValidationError("ell", "give exactly one of --ell or --delta")
    if ell is not None:
        return ell
    if not 0.0 <= delta <= 1.0:
        raise ValidationError("delta", f"must be in [0, 1], got {delta}")
    return int(round(delta * n))


def _society_env(args: argparse.Namespace, t: float | None) -> tuple[SocietyParams, EnvironmentParams]:
    ell = _resolve_ell(args.n, args.ell, args.delta)
    return (
        SocietyParams(n=args.n, ell=ell, alpha=args.alpha, t=t),
        EnvironmentParams(mu=args.mu, sigma=args.sigma),
    )


def _fmt(x: float | None) -> str:
    if x is None:
        return "undefined"
    return f"{x:.12g}"


# ----------------------------------------------------------------- expect

def _cmd_expect(args: argparse.Namespace) -> int:
    if args.t_opt and args.t is not None:
        raise ValidationError("t", "give either --t or --t-opt, not both")
    society, env = _society_env(args, args.t)
    t_used = args.t
    t0_case = None
    if args.t_opt:
        res = optimal_threshold(society, env, tail_mode=args.tail_mode)
        t_used, t0_case = res.t0, res.case_tag
        society = replace(society, t=t_used)
    elif args.t is None and society.g > 0:
        raise ValidationError("t", "claims threshold required: give --t or --t-opt")

    report = expected_society_increment(society, env, tail_mode=args.tail_mode)
    print(
        f"n={society.n} ell={society.ell} (delta={society.delta:.6g}) "
        f"alpha={society.alpha:g} mu={env.mu:g} sigma={env.sigma:g}"
    )
    if t0_case is not None:
        print(f"claims threshold t = t0 = {_fmt(t_used)}  [{t0_case}]")
    elif society.g > 0:
        print(f"claims threshold t = {_fmt(t_used)}")
    else:
        print("pure-egoist society: claims threshold has no effect")
    print(f"egoist expectation         : {_fmt(report.egoist)}")
    print(f"group member expectation   : {_fmt(report.group_member)}")
    print(f"society expectation        : {_fmt(report.society)}")
    print(f"group support probability P: {_fmt(report.support_prob)}")
    print(f"standardized threshold t~  : {_fmt(report.t_tilde)}")

    if args.json:
        payload = {
            "params": {
                "n": society.n,
                "ell": society.ell,
                "alpha": society.alpha,
                "mu": env.mu,
                "sigma": env.sigma,
                "t": t_used,
                "t0_case": t0_case,
                "tail_mode": args.tail_mode,
            },
            "report": asdict(report),
            "tool_version": __version__,
        }
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return 0


# --------------------------------------------------------------- optimal-t

def _cmd_optimal_t(args: argparse.Namespace) -> int:
    society, env = _society_env(args, None)
    res = optimal_threshold(society, env, tail_mode=args.tail_mode)
    print(f"t0 = {_fmt(res.t0)}")
    print(f"case: {res.case_tag}")
    print(f"society expectation at t0: {_fmt(res.society_value_at_t0)}")
    if args.json:
        payload = {
            "params": {
                "n": society.n,
                "ell": society.ell,
                "alpha": society.alpha,
                "mu": env.mu,
                "sigma": env.sigma,
                "tail_mode": args.tail_mode,
            },
            "result": asdict(res),
            "tool_version": __version__,
        }
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return 0


# ---------------------------------------------------------------- simulate

def _cmd_simulate(args: argparse.Namespace) -> int:
    started = time.time()
    society, env = _society_env(args, args.t)
    config = SimulationConfig(
        society=society,
        env=env,
        steps=args.steps,
        replications=args.replications,
        seed=args.seed,
    )
    out_dir = _out_dir(args)
    outputs: list[str] = []
    trajectory_path = None
    if args.trajectory:
        trajectory_path = os.path.join(out_dir, args.trajectory)
        outputs.append(args.trajectory)
    stats = run(config, trajectory_path=trajectory_path, workers=args.workers)

    print(f"steps={stats.steps} x replications={stats.replications} seed={stats.seed}")
    print(f"acceptance rate            : {stats.acceptance_rate:.6g}")
    print(f"egoist per-step mean +- SE : {stats.mean_egoist_step:.6g} +- {stats.se_egoist_step:.3g}")
    print(f"group per-step mean +- SE  : {stats.mean_group_step:.6g} +- {stats.se_group_step:.3g}")
    print(f"society per-step mean +- SE: {stats.mean_society_step:.6g} +- {stats.se_society_step:.3g}")

    if args.json:
        stats_path = os.path.join(out_dir, args.json)
        with open(stats_path, "w") as fh:
            json.dump(asdict(stats), fh, indent=2)
            fh.write("\n")
        outputs.append(args.json)
    if outputs:
        _write_manifest(
            out_dir,
            "simulate_manifest.json",
            "simulate",
            {
                "n": society.n,
                "ell": society.ell,
                "alpha": society.alpha,
                "mu": env.mu,
                "sigma": env.sigma,
                "t": society.t,
                "steps": args.steps,
                "replications": args.replications,
                "workers": args.workers,
            },
            outputs,
            started,
            seed=args.seed,
        )
    return 0


# ------------------------------------------------------------------- sweep

def _parse_axis(text: str) -> SweepAxis:
    try:
        name, rng = text.split("=", 1)
        lo, hi, step = (float(v) for v in rng.split(":"))
    except ValueError as exc:
        raise ValidationError("axis", f"expected NAME=LO:HI:STEP, got {text!r}") from exc
    return SweepAxis(name=name.strip(), lo=lo, hi=hi, step=step)


def _cmd_sweep(args: argparse.Namespace) -> int:
    started = time.time()
    axes = tuple(_parse_axis(a) for a in args.axis or [])
    ell = None
    if args.ell is not None or args.delta is not None:
        ell = _resolve_ell(args.n, args.ell, args.delta)
    spec = SweepSpec(
        n=args.n,
        axes=axes,
        sigma=args.sigma,
        mu=args.mu,
        ell=ell,
        alpha=args.alpha,
        t=args.t,
        t_mode=args.t_mode,
        tail_mode=args.tail_mode,
    )
    table = sweep(spec, workers=args.workers)
    out_dir = _out_dir(args)
    out_path = os.path.join(out_dir, args.out)
    table.to_csv(out_path)
    print(f"wrote {len(table.rows)} rows to {out_path}")
    _write_manifest(
        out_dir,
        "sweep_manifest.json",
        "sweep",
        {
            "n": args.n,
            "sigma": args.sigma,
            "mu": args.mu,
            "ell": ell,
            "alpha": args.alpha,
            "t": args.t,
            "t_mode": args.t_mode,
            "tail_mode": args.tail_mode,
            "axes": [asdict(a) for a in axes],
            "workers": args.workers,
        },
        [args.out],
        started,
    )
    return 0


# --------------------------------------------------------------------- pit

def _mu_grid_from_args(args: argparse.Namespace) -> tuple[float, ...]:
    count = int(math.floor((args.mu_hi - args.mu_lo) / args.mu_step + 1e-9)) + 1
    return tuple(round(args.mu_lo + i * args.mu_step, 10) for i in range(count))


def _cmd_pit(args: argparse.Namespace) -> int:
    started = time.time()
    result = pit_region(
        args.alpha,
        args.n,
        t_mode=args.t_mode,
        t=args.t,
        mu_over_sigma=_mu_grid_from_args(args),
        sigma=args.sigma,
        tail_mode=args.tail_mode,
        tolerance=args.tolerance,
    )
    prefix = args.out_prefix or f"pit_alpha{args.alpha:g}_{args.t_mode}"
    out_dir = _out_dir(args)
    mask_name = f"{prefix}_mask.csv"
    summary_name = f"{prefix}_summary.json"
    result.mask_to_csv(os.path.join(out_dir, mask_name))
    result.summary_json(os.path.join(out_dir, summary_name))
    print(f"delta_max = {result.delta_max}")
    print(f"pit points: {int(result.mask.sum())} of {result.mask.size}")
    _write_manifest(
        out_dir,
        f"{prefix}_manifest.json",
        "pit",
        {
            "alpha": args.alpha,
            "n": args.n,
            "t_mode": args.t_mode,
            "t": args.t,
            "sigma": args.sigma,
            "tail_mode": args.tail_mode,
            "tolerance": args.tolerance,
            "mu_lo": args.mu_lo,
            "mu_hi": args.mu_hi,
            "mu_step": args.mu_step,
        },
        [mask_name, summary_name],
        started,
    )
    return 0


# ----------------------------------------------------------------- classes

def _cmd_classes(args: argparse.Namespace) -> int:
    for cls in majority_threshold_classes(args.n):
        print(
            f"floor(alpha*n)={cls.k:4d}  alpha in [{cls.lo:.6g}, {cls.hi:.6g})  "
            f"representative {cls.representative:.6g}"
        )
    return 0


# ------------------------------------------------------------------ figure

def _load_presets() -> dict:
    with resources.files("vise").joinpath("figure_presets.json").open() as fh:
        return json.load(fh)


def _apply_overrides(preset: dict, overrides: list[str]) -> dict:
    preset = dict(preset)
    for text in overrides or []:
        if "=" not in text:
            raise ValidationError("set", f"expected KEY=VALUE, got {text!r}")
        key, value = text.split("=", 1)
        key = key.strip()
        if key not in preset:
            raise ValidationError("set", f"unknown preset key {key!r}; known: {sorted(preset)}")
        current = preset[key]
        if isinstance(current, list):
            preset[key] = [float(v) for v in value.split(",")]
        elif isinstance(current, int) and not isinstance(current, bool):
            preset[key] = int(value)
        elif isinstance(current, float):
            preset[key] = float(value)
        else:
            preset[key] = value
    return preset


def _axis_values(lo: float, hi: float, step: float) -> list[float]:
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 10) for i in range(count)]


def _figure_t_sweep(p: dict, out_dir: str, idx: int) -> list[str]:
    sigma = p["sigma"]
    spec = SweepSpec(
        n=p["n"],
        ell=p["ell"],
        alpha=p["alpha"],
        mu=p["mu"],
        sigma=sigma,
        axes=(SweepAxis("t_over_sigma", p["t_lo"] / sigma, p["t_hi"] / sigma, p["t_step"] / sigma),),
    )
    table = sweep(spec)
    name = f"figure{idx}.csv"
    with open(os.path.join(out_dir, name), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "egoist", "group", "society"])
        for r in table.rows:
            writer.writerow([round(r.t, 10), r.egoist, r.group_member, r.society])
    return [name]


def _figure_surface(p: dict, out_dir: str, idx: int) -> list[str]:
    spec = SweepSpec(
        n=p["n"],
        alpha=p["alpha"],
        mu=p["mu_over_sigma"] * p["sigma"],
        sigma=p["sigma"],
        axes=(
            SweepAxis("t_over_sigma", p["t_over_sigma_lo"], p["t_over_sigma_hi"], p["t_over_sigma_step"]),
            SweepAxis("delta", p["delta_lo"], p["delta_hi"], p["delta_step"]),
        ),
    )
    table = sweep(spec)
    name = f"figure{idx}.csv"
    with open(os.path.join(out_dir, name), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_over_sigma", "delta", "egoist", "group", "society", "group_minus_egoist"])
        for r in table.rows:
            diff = r.group_member - r.egoist
            writer.writerow(
                [r.t / r.sigma, r.delta, r.egoist, r.group_member, r.society, diff]
            )
    return [name]


def _t0_or_nan(n: int, ell: int, alpha: float, mu: float, sigma: float) -> tuple[float, str]:
    try:
        res = optimal_threshold(
            SocietyParams(n=n, ell=ell, alpha=alpha), EnvironmentParams(mu=mu, sigma=sigma)
        )
        return res.t0, res.case_tag
    except (DegenerateRuleError, ValidationError):
        return math.nan, "degenerate"


def _figure_t0_surfaces(p: dict, out_dir: str, idx: int) -> list[str]:
    n, sigma = p["n"], p["sigma"]
    deltas = _axis_values(p["delta_lo"], p["delta_hi"], p["delta_step"])
    outputs = []

    name_a = f"figure{idx}a.csv"
    with open(os.path.join(out_dir, name_a), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["delta", "alpha", "t0", "case"])
        for d in deltas:
            ell = int(round(d * n))
            for alpha in _axis_values(p["a_alpha_lo"], p["a_alpha_hi"], p["a_alpha_step"]):
                t0, case = _t0_or_nan(n, ell, alpha, p["a_mu"], sigma)
                writer.writerow([ell / n, alpha, t0, case])
    outputs.append(name_a)

    name_b = f"figure{idx}b.csv"
    with open(os.path.join(out_dir, name_b), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["delta", "mu", "t0", "case"])
        for d in deltas:
            ell = int(round(d * n))
            for mu in _axis_values(p["b_mu_lo"], p["b_mu_hi"], p["b_mu_step"]):
                t0, case = _t0_or_nan(n, ell, p["b_alpha"], mu, sigma)
                writer.writerow([ell / n, mu, t0, case])
    outputs.append(name_b)
    return outputs


def _figure_t0_curves(p: dict, out_dir: str, idx: int) -> list[str]:
    n, sigma = p["n"], p["sigma"]
    deltas = _axis_values(p["delta_lo"], p["delta_hi"], p["delta_step"])
    outputs = []
    for alpha in p["alphas"]:
        name = f"figure{idx}_alpha{alpha:g}.csv"
        with open(os.path.join(out_dir, name), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["delta", "t0", "case"])
            for d in deltas:
                ell = int(round(d * n))
                t0, case = _t0_or_nan(n, ell, alpha, p["mu"], sigma)
                writer.writerow([ell / n, t0, case])
        outputs.append(name)
    return outputs


def _figure_pit_overlay(p: dict, out_dir: str, idx: int) -> list[str]:
    mu_grid = tuple(_axis_values(p["mu_lo"], p["mu_hi"], p["mu_step"]))
    outputs = []
    for alpha in p["alphas"]:
        for mode in ("fixed", "optimal"):
            result = pit_region(
                alpha,
                p["n"],
                t_mode=mode,
                t=0.0,
                mu_over_sigma=mu_grid,
                sigma=p["sigma"],
                tail_mode=p["tail_mode"],
                tolerance=p["tolerance"],
            )
            base = f"figure{idx}_alpha{alpha:g}_{mode}"
            result.mask_to_csv(os.path.join(out_dir, f"{base}_mask.csv"))
            result.summary_json(os.path.join(out_dir, f"{base}_summary.json"))
            outputs.extend([f"{base}_mask.csv", f"{base}_summary.json"])
    return outputs


def _figure_delta_max(p: dict, out_dir: str, idx: int) -> list[str]:
    mu_grid = tuple(_axis_values(p["mu_lo"], p["mu_hi"], p["mu_step"]))
    outputs = []
    for n in p["n_values"]:
        n = int(n)
        alphas = tuple(c.representative for c in majority_threshold_classes(n))
        curve = max_delta_curve(
            n,
            alphas,
            sigma=p["sigma"],
            mu_over_sigma=mu_grid,
            tail_mode=p["tail_mode"],
            tolerance=p["tolerance"],
        )
        name = f"figure{idx}_n{n}.csv"
        with open(os.path.join(out_dir, name), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["alpha", "delta_max"])
            for alpha, dmax in curve:
                writer.writerow([alpha, dmax])
        outputs.append(name)
    return outputs


_FIGURE_BUILDERS = {
    "t_sweep": _figure_t_sweep,
    "surface": _figure_surface,
    "t0_surfaces": _figure_t0_surfaces,
    "t0_curves": _figure_t0_curves,
    "pit_overlay": _figure_pit_overlay,
    "delta_max_curve": _figure_delta_max,
}


def _cmd_figure(args: argparse.Namespace) -> int:
    started = time.time()
    presets = _load_presets()
    key = str(args.id)
    if key not in presets:
        raise ValidationError("id", f"figure id must be 1..8, got {args.id}")
    preset = _apply_overrides(presets[key], args.set)
    out_dir = _out_dir(args)
    outputs = _FIGURE_BUILDERS[preset["kind"]](preset, out_dir, args.id)
    for name in outputs:
        print(f"wrote {os.path.join(out_dir, name)}")
    _write_manifest(
        out_dir, f"figure{args.id}_manifest.json", f"figure {args.id}", preset, outputs, started
    )
    return 0


# ------------------------------------------------------------------ parser

def _add_model_flags(p: argparse.ArgumentParser, *, with_t: bool = True) -> None:
    p.add_argument("--n", type=int, required=True, help="society size (members)")
    p.add_argument("--ell", type=int, help="number of egoists (exclusive with --delta)")
    p.add_argument("--delta", type=float, help="egoist share in [0, 1]; ell = round(delta * n)")
    p.add_argument("--alpha", type=float, required=True, help="strict majority threshold in [0, 1]")
    p.add_argument("--mu", type=float, required=True, help="mean proposal increment (capital units)")
    p.add_argument("--sigma", type=float, required=True, help="proposal scatter, > 0 (capital units)")
    if with_t:
        p.add_argument("--t", type=float, help="group claims threshold (capital units)")
    p.add_argument(
        "--tail-mode",
        choices=TAIL_MODES,
        default="exact",
        help="vote-count tails: exact binomial sums or the normal approximation",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vise",
        description="Voting in a stochastic environment: expectations, optimal group claims, "
        "Monte Carlo simulation, sweeps, and pit-of-losses analysis.",
    )
    parser.add_argument("--version", action="version", version=f"vise {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expect", help="closed-form one-step expectations for one configuration")
    _add_model_flags(p)
    p.add_argument("--t-opt", action="store_true", help="use the optimal claims threshold t0")
    p.add_argument("--json", help="also write the report as JSON to this path")
    p.set_defaults(func=_cmd_expect)

    p = sub.add_parser("optimal-t", help="society-optimal group claims threshold")
    _add_model_flags(p, with_t=False)
    p.add_argument("--json", help="also write the result as JSON to this path")
    p.set_defaults(func=_cmd_optimal_t)

    p = sub.add_parser("simulate", help="seeded Monte Carlo voting trajectory")
    _add_model_flags(p)
    p.add_argument("--steps", type=int, required=True, help="steps per replication")
    p.add_argument("--replications", type=int, default=1, help="independent trajectories")
    p.add_argument("--seed", type=int, default=0, help="PRNG seed (PCG64 substreams per replication)")
    p.add_argument("--workers", type=int, default=None, help="worker threads (output is identical)")
    p.add_argument("--trajectory", help="write per-step CSV (see FORMATS.md) to this file name")
    p.add_argument("--json", help="write TrajectoryStats JSON to this file name")
    p.add_argument("--out-dir", help=f"output directory (default ${OUT_DIR_ENV} or '.')")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="grid evaluation of the expectation report")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--mu", type=float, help="fixed mu (or sweep mu_over_sigma)")
    p.add_argument("--ell", type=int, help="fixed egoist count")
    p.add_argument("--delta", type=float, help="fixed egoist share")
    p.add_argument("--alpha", type=float, help="fixed majority threshold")
    p.add_argument("--t", type=float, help="fixed claims threshold")
    p.add_argument("--t-mode", choices=("fixed", "optimal"), default="fixed")
    p.add_argument("--tail-mode", choices=TAIL_MODES, default="exact")
    p.add_argument(
        "--axis",
        action="append",
        metavar="NAME=LO:HI:STEP",
        help=f"swept axis, 1-2 of {AXIS_NAMES}",
    )
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="output CSV file name")
    p.add_argument("--out-dir", help=f"output directory (default ${OUT_DIR_ENV} or '.')")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("pit", help="pit-of-losses mask and neutralization bound")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t-mode", choices=("fixed", "optimal"), default="optimal")
    p.add_argument("--t", type=float, default=0.0, help="claims threshold for --t-mode fixed")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--tail-mode", choices=TAIL_MODES, default="exact")
    p.add_argument("--tolerance", type=float, default=1e-9, help="pit test: society < -tolerance")
    p.add_argument("--mu-lo", type=float, default=-0.99, help="mu/sigma grid start")
    p.add_argument("--mu-hi", type=float, default=0.0, help="mu/sigma grid end (inclusive)")
    p.add_argument("--mu-step", type=float, default=0.01)
    p.add_argument("--out-prefix", help="output file prefix (default pit_alpha<a>_<mode>)")
    p.add_argument("--out-dir", help=f"output directory (default ${OUT_DIR_ENV} or '.')")
    p.set_defaults(func=_cmd_pit)

    p = sub.add_parser("classes", help="majority-threshold equivalence classes")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_classes)

    p = sub.add_parser("figure", help="emit CSV data for one of the eight reference figures")
    p.add_argument("id", type=int, help="figure id, 1..8")
    p.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="override a preset parameter (repeatable); see figure_presets.json",
    )
    p.add_argument("--out-dir", help=f"output directory (default ${OUT_DIR_ENV} or '.')")
    p.set_defaults(func=_cmd_figure)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return int(args.func(args) or 0)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegenerateRuleError as exc:
        print(f"degenerate model: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
