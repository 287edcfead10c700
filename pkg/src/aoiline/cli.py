"""Command-line front end emitting plot-ready CSV or JSON.

Subcommands: ``pmf``, ``icdf``, ``expected``, ``simulate``, ``compare``.
Data rows go to the selected destination only; diagnostics go to stderr.
Exit codes: 0 success, 2 input or validation error, 3 horizon overflow.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .analytic import (HorizonOverflowError, QuantileQuery, expected_age, icdf,
                       pmf_auto_truncate, pmf_dp)
from .core import AoiError, pmf_mean, validate_path
from .simulator import SimConfig, run
from .stats import compare

PRESETS = {"s1": (0.9, 0.4, 0.4), "s2": (0.8, 0.7, 0.8)}
DEFAULT_TARGETS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)
DEFAULT_TAIL_TOL = 1e-12

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_LIMIT = 3


class ConfigError(AoiError):
    """Raised for unusable command lines or config files."""


@dataclass(frozen=True)
class RunSpec:
    """One fully resolved invocation; echoed verbatim into output metadata."""

    command: str
    probs: tuple[float, ...]
    format: str = "csv"
    output: str | None = None
    threads: int | None = None
    max_age: int | None = None
    tail_tol: float | None = None
    targets: tuple[float, ...] | None = None
    periods: int = 100_000
    repetitions: int = 100
    seed: int = 0
    warmup: int = 0


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    probs = common.add_mutually_exclusive_group()
    probs.add_argument("--probs", help="comma-separated per-link loss probabilities")
    probs.add_argument("--preset", choices=sorted(PRESETS),
                       help="bundled scenario: s1=(0.9,0.4,0.4), s2=(0.8,0.7,0.8)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--output", help="destination file (default: stdout)")
    common.add_argument("--config", help="JSON file with defaults; flags override it")
    common.add_argument("--threads", type=int, default=None,
                        help="simulation thread cap (default: available parallelism)")

    parser = argparse.ArgumentParser(
        prog="aoiline",
        description="Age-of-information distributions for lossy line networks.")
    parser.add_argument("--config", help="JSON file supplying the command and options")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("pmf", parents=[common],
                       help="exact age pmf rows plus tail mass and mean")
    p.add_argument("--max-age", type=int, default=None, dest="max_age")
    p.add_argument("--tail-tol", type=float, default=None, dest="tail_tol",
                   help="auto-truncate until the tail mass is below this")

    p = sub.add_parser("icdf", parents=[common],
                       help="smallest age meeting each tail-probability target")
    p.add_argument("--targets",
                   help="comma-separated descending tail probabilities "
                        "(default 1e-1,1e-2,1e-3,1e-4,1e-5)")

    sub.add_parser("expected", parents=[common], help="exact mean age")

    for name, text in (("simulate", "Monte Carlo run: empirical pmf and summary"),
                       ("compare", "simulate, then divergence from the exact pmf")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--periods", type=int, default=None)
        p.add_argument("--reps", type=int, default=None, dest="repetitions")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--warmup", type=int, default=None)
    return parser


def load_config(path: str) -> dict:
    """Read a JSON object mirroring :class:`RunSpec` fields."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    known = set(RunSpec.__dataclass_fields__) | {"preset", "reps"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    if "reps" in data:
        data["repetitions"] = data.pop("reps")
    return data


def _pick(args: argparse.Namespace, cfg: dict, key: str, fallback=None):
    value = getattr(args, key, None)
    if value is not None:
        return value
    return cfg.get(key, fallback)


def _floats(value, what: str) -> tuple[float, ...]:
    if isinstance(value, str):
        value = value.split(",")
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what} must be a comma-separated list of numbers") from exc


def _int(value, what: str) -> int:
    try:
        out = int(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what} must be an integer") from exc
    if out != value and not isinstance(value, str):
        raise ConfigError(f"{what} must be an integer")
    return out


def _resolve_probs(args: argparse.Namespace, cfg: dict) -> tuple[float, ...]:
    cli_probs = getattr(args, "probs", None)
    cli_preset = getattr(args, "preset", None)
    if cli_probs is not None:
        return _floats(cli_probs, "probs")
    if cli_preset is not None:
        return PRESETS[cli_preset]
    if "probs" in cfg and "preset" in cfg:
        raise ConfigError("config gives both probs and preset")
    if "probs" in cfg:
        return _floats(cfg["probs"], "probs")
    if "preset" in cfg:
        preset = cfg["preset"]
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}")
        return PRESETS[preset]
    raise ConfigError("probs required (give --probs, --preset, or probs in --config)")


def _resolve(args: argparse.Namespace) -> RunSpec:
    cfg = load_config(args.config) if getattr(args, "config", None) else {}
    command = args.command or cfg.get("command")
    if command not in ("pmf", "icdf", "expected", "simulate", "compare"):
        raise ConfigError("command required (subcommand or 'command' in --config)")

    probs = _resolve_probs(args, cfg)
    fmt = _pick(args, cfg, "format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    spec = {
        "command": command,
        "probs": probs,
        "format": fmt,
        "output": _pick(args, cfg, "output"),
        "threads": _pick(args, cfg, "threads"),
    }
    if spec["threads"] is not None:
        spec["threads"] = _int(spec["threads"], "threads")
        if spec["threads"] < 1:
            raise ConfigError("threads must be at least 1")

    if command == "pmf":
        max_age = _pick(args, cfg, "max_age")
        tail_tol = _pick(args, cfg, "tail_tol")
        if max_age is not None and tail_tol is not None:
            raise ConfigError("give exactly one of --max-age and --tail-tol")
        if max_age is not None:
            spec["max_age"] = _int(max_age, "max_age")
        else:
            spec["tail_tol"] = float(tail_tol) if tail_tol is not None else DEFAULT_TAIL_TOL
    elif command == "icdf":
        raw = _pick(args, cfg, "targets")
        targets = _floats(raw, "targets") if raw is not None else DEFAULT_TARGETS
        if any(a <= b for a, b in zip(targets, targets[1:])):
            raise ConfigError("targets must be strictly descending")
        spec["targets"] = targets
    elif command in ("simulate", "compare"):
        spec["periods"] = _int(_pick(args, cfg, "periods", 100_000), "periods")
        spec["repetitions"] = _int(_pick(args, cfg, "repetitions", 100), "reps")
        spec["seed"] = _int(_pick(args, cfg, "seed", 0), "seed")
        spec["warmup"] = _int(_pick(args, cfg, "warmup", 0), "warmup")
    return RunSpec(**spec)


def _cmd_pmf(spec: RunSpec):
    path = validate_path(spec.probs)
    if spec.max_age is not None:
        pmf = pmf_dp(path, spec.max_age)
    else:
        pmf = pmf_auto_truncate(path, spec.tail_tol)
    mean = pmf_mean(pmf, max(path.loss_probs)).value
    rows = [(age, float(p)) for age, p in enumerate(pmf.probs)]
    return ("age", "probability"), rows, [("tail_mass", pmf.tail_mass), ("mean", mean)]


def _cmd_icdf(spec: RunSpec):
    path = validate_path(spec.probs)
    ages = icdf(path, QuantileQuery(spec.targets))
    rows = list(zip(spec.targets, ages))
    return ("target", "age"), rows, []


def _cmd_expected(spec: RunSpec):
    value = expected_age(validate_path(spec.probs))
    return ("expected_age",), [(float(f"{value:.6g}"),)], []


def _cmd_simulate(spec: RunSpec):
    path = validate_path(spec.probs)
    config = SimConfig(path, spec.periods, spec.repetitions, spec.seed, spec.warmup)
    result = run(config, spec.threads)
    counts = result.empirical.counts
    total = result.empirical.total
    rows = [(age, counts.get(age, 0), counts.get(age, 0) / total)
            for age in range(max(counts) + 1)]
    extras = [("mean_age", result.mean_age),
              ("mean_age_sd", result.mean_age_sd),
              ("mean_peak_age", result.mean_peak_age),
              ("mean_peak_age_sd", result.mean_peak_age_sd),
              ("deliveries", result.deliveries)]
    return ("age", "count", "probability"), rows, extras


def _cmd_compare(spec: RunSpec):
    path = validate_path(spec.probs)
    config = SimConfig(path, spec.periods, spec.repetitions, spec.seed, spec.warmup)
    report = compare(path, run(config, spec.threads))
    extras = [("tv_distance", report.tv_distance),
              ("mean_gap", report.mean_gap),
              ("sample_count", report.sample_count)]
    return (("age", "empirical_probability", "analytic_probability"),
            list(report.per_age_residuals), extras)


_HANDLERS = {
    "pmf": _cmd_pmf,
    "icdf": _cmd_icdf,
    "expected": _cmd_expected,
    "simulate": _cmd_simulate,
    "compare": _cmd_compare,
}


def _cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _jsonable(value):
    if isinstance(value, float) and math.isnan(value):
        return None
    if isinstance(value, tuple):
        return list(value)
    return value


def _emit(spec: RunSpec, header, rows, extras) -> str:
    if spec.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
        for label, value in extras:
            writer.writerow([label, _cell(value)])
        return buf.getvalue()
    meta = {
        "version": __version__,
        "command": spec.command,
        "config": {k: _jsonable(v) for k, v in asdict(spec).items()},
        "seed": spec.seed if spec.command in ("simulate", "compare") else None,
    }
    meta.update((label, _jsonable(value)) for label, value in extras)
    payload = {"rows": [dict(zip(header, map(_jsonable, row))) for row in rows],
               "meta": meta}
    return json.dumps(payload, indent=2) + "\n"


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        spec = _resolve(args)
        header, rows, extras = _HANDLERS[spec.command](spec)
        text = _emit(spec, header, rows, extras)
        if spec.output:
            Path(spec.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except HorizonOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (AoiError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
