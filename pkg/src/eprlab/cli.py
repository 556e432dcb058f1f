"""Seeded experiment runner exposing every module as a subcommand.

Each invocation produces one document with three top-level sections:
config (the effective experiment parameters), results (measured
quantities), and statistics (uncertainty estimates and tolerances).
The document is serialized as JSON with sorted keys or as a flat
two-column CSV of dotted keys, so a fixed (seed, config) pair yields
byte-identical output. Presentation knobs (--format, --output,
--workers, --config) are excluded from the config echo: sampling is
split into fixed-size blocks with one random stream per block index
and aggregated by exact integer counts, so the worker count cannot
change a single byte of the results.

Exit codes: 0 success, 1 output I/O failure, 2 usage or validation
error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Callable

OUTPUT_DIR_ENV = "EPRLAB_OUTPUT_DIR"

MODEL_CHOICES = ("p1", "p2")
RULE_CHOICES = ("deterministic", "probabilistic")
MODE_CHOICES = ("predicted", "mechanistic")
FORMAT_CHOICES = ("json", "csv")


class CliError(Exception):
    """Invalid flag, config file entry, or parameter combination."""


@dataclass(frozen=True)
class Option:
    dest: str
    flag: str
    convert: Callable[[str], object]
    default: object
    help: str


def _int_in_range(flag: str, minimum: int, maximum: int | None = None):
    def convert(text: str) -> int:
        try:
            value = int(str(text).strip())
        except ValueError:
            raise CliError(f"{flag} expects an integer, got {text!r}") from None
        if value < minimum:
            raise CliError(f"{flag} must be at least {minimum}")
        if maximum is not None and value > maximum:
            raise CliError(f"{flag} must be at most {maximum}")
        return value

    return convert


def _float_value(flag: str, positive: bool = False):
    def convert(text: str) -> float:
        try:
            value = float(str(text).strip())
        except ValueError:
            raise CliError(f"{flag} expects a number, got {text!r}") from None
        if positive and value <= 0.0:
            raise CliError(f"{flag} must be positive")
        return value

    return convert


def _choice(flag: str, options: tuple[str, ...]):
    def convert(text: str) -> str:
        value = str(text).strip()
        if value not in options:
            allowed = ", ".join(options)
            raise CliError(f"{flag} must be one of: {allowed}")
        return value

    return convert


def _float_list(flag: str):
    def convert(text) -> list[float]:
        if isinstance(text, (list, tuple)):
            return [float(v) for v in text]
        parts = [p.strip() for p in str(text).split(",") if p.strip()]
        if not parts:
            raise CliError(f"{flag} expects comma-separated numbers")
        try:
            return [float(p) for p in parts]
        except ValueError:
            raise CliError(
                f"{flag} expects comma-separated numbers, got {text!r}"
            ) from None

    return convert


SEED = Option("seed", "--seed", _int_in_range("--seed", 0, 2**64 - 1), 0,
              "random seed, 64-bit unsigned (default 0)")
WORKERS = Option("workers", "--workers", _int_in_range("--workers", 1), 1,
                 "thread count for blocked sampling; never changes results")
FORMAT = Option("format", "--format", _choice("--format", FORMAT_CHOICES),
                "json", "output format: json or csv (default json)")
OUTPUT = Option("output", "--output", str, None,
                "output file path (default stdout); relative paths resolve "
                f"against ${OUTPUT_DIR_ENV} when it is set")

COMMON_OPTIONS = (SEED, WORKERS, FORMAT, OUTPUT)

MODEL = Option("model", "--model", _choice("--model", MODEL_CHOICES), "p1",
               "pair source: p1 entangled singlet, p2 preassigned definite")
P2_RULE = Option("p2_rule", "--p2-rule", _choice("--p2-rule", RULE_CHOICES),
                 "deterministic",
                 "p2 response rule: deterministic sign rule or "
                 "probabilistic projection rule")
SAMPLES = Option("samples", "--samples", _int_in_range("--samples", 1),
                 100_000, "number of pairs to sample")

# Presentation and execution knobs, excluded from the config echo so
# that the same experiment produces the same bytes everywhere.
_NON_CONFIG = {"format", "output", "workers", "config_path"}


def _base_config(settings: dict, **overrides) -> dict:
    config = {
        key: value for key, value in settings.items() if key not in _NON_CONFIG
    }
    config.update(overrides)
    return config


def _analyzer_settings(values: list[float], count: int):
    """Interpret --angles: either `count` polar angles (azimuth 0) or
    `count` polar,azimuth pairs, all in degrees."""
    from eprlab.spinlab import AnalyzerSetting

    if len(values) == count:
        pairs = [(float(v), 0.0) for v in values]
    elif len(values) == 2 * count:
        pairs = [
            (float(values[i]), float(values[i + 1]))
            for i in range(0, len(values), 2)
        ]
    else:
        raise CliError(
            f"--angles needs {count} polar angles or {2 * count} "
            f"interleaved polar,azimuth values, got {len(values)}"
        )
    settings = [AnalyzerSetting.from_degrees(t, p) for t, p in pairs]
    return settings, [[t, p] for t, p in pairs]


def _pair_model(settings: dict):
    from eprlab.spinlab import PreassignedDefinite, QuantumEntangled

    if settings["model"] == "p1":
        return QuantumEntangled()
    return PreassignedDefinite(rule=settings["p2_rule"])


def run_hydrogen(settings: dict) -> dict:
    """results: mean_radius rows {n, l, mean_radius, closed_form,
    relative_error}; ground_state_momentum {bare_real, bare_imag,
    hermitized_real, hermitized_imag}; orthonormality rows
    {n1, l1, m1, n2, l2, m2, real, imag}.
    statistics: max_relative_error_mean_radius,
    max_orthonormality_deviation."""
    from eprlab.constants import BOHR_RADIUS
    from eprlab.hydrogen import (
        RadialGrid,
        expect_r,
        expect_radial_p_ground,
        orthonormality_table,
    )

    def grid_for(n: int) -> RadialGrid | None:
        if settings["r_max"] is None and settings["points"] is None:
            return None
        r_max = settings["r_max"]
        if r_max is None:
            r_max = RadialGrid.for_n(n).r_max
        points = settings["points"]
        if points is None:
            points = RadialGrid.for_n(n).points
        return RadialGrid(r_max, points)

    rows = []
    worst_radius = 0.0
    for n in range(1, settings["max_n"] + 1):
        for l in range(n):
            value = expect_r(n, l, grid_for(n))
            closed = 0.5 * BOHR_RADIUS * (3 * n * n - l * (l + 1))
            relative = abs(value - closed) / closed
            worst_radius = max(worst_radius, relative)
            rows.append(
                {
                    "n": n,
                    "l": l,
                    "mean_radius": value,
                    "closed_form": closed,
                    "relative_error": relative,
                }
            )

    bare = expect_radial_p_ground(grid_for(1))
    hermitized = expect_radial_p_ground(grid_for(1), hermitized=True)

    table = []
    worst_overlap = 0.0
    for o1, o2, overlap in orthonormality_table(settings["ortho_max_n"]):
        expected = 1.0 if o1 == o2 else 0.0
        worst_overlap = max(worst_overlap, abs(overlap - expected))
        table.append(
            {
                "n1": o1.n, "l1": o1.l, "m1": o1.m,
                "n2": o2.n, "l2": o2.l, "m2": o2.m,
                "real": overlap.real,
                "imag": overlap.imag,
            }
        )

    return {
        "config": _base_config(settings),
        "results": {
            "mean_radius": rows,
            "ground_state_momentum": {
                "bare_real": bare.real,
                "bare_imag": bare.imag,
                "hermitized_real": hermitized.real,
                "hermitized_imag": hermitized.imag,
            },
            "orthonormality": table,
        },
        "statistics": {
            "max_relative_error_mean_radius": worst_radius,
            "max_orthonormality_deviation": worst_overlap,
        },
    }


def run_commutator_check(settings: dict) -> dict:
    """results: convergence_order, max_interior_residual,
    refined_residual, residual_constant, spacing. statistics: empty."""
    from eprlab.grids import UniformGrid1D
    from eprlab.hydrogen import grid_commutator_check

    report = grid_commutator_check(
        UniformGrid1D(length=settings["length"], points=settings["points"])
    )
    return {
        "config": _base_config(settings),
        "results": {
            "convergence_order": report.convergence_order,
            "max_interior_residual": report.max_interior_residual,
            "refined_residual": report.refined_residual,
            "residual_constant": report.residual_constant,
            "spacing": report.spacing,
        },
        "statistics": {},
    }


def run_epr(settings: dict) -> dict:
    """results: conditional_position / conditional_momentum
    {slice_at, mean, std, expected_mean}, parseval_error,
    envelope_width. statistics: position_mean_deviation,
    position_tolerance, momentum_mean_deviation, momentum_tolerance."""
    from eprlab.eprpair import (
        EprConfig,
        build_epr_state,
        condition_on_momentum,
        condition_on_position,
        momentum_representation,
    )
    from eprlab.grids import UniformGrid2D

    cfg = EprConfig(
        x0=settings["x0"],
        sigma=settings["sigma"],
        grid=UniformGrid2D(length=settings["length"], points=settings["points"]),
    )
    psi = build_epr_state(cfg)
    position = condition_on_position(psi, settings["position"])
    momentum = condition_on_momentum(psi, settings["momentum"])
    parseval_error = abs(momentum_representation(psi).norm - 1.0)

    expected_x = position.sliced_at + cfg.x0
    expected_p = -momentum.sliced_at
    return {
        "config": _base_config(settings),
        "results": {
            "conditional_position": {
                "slice_at": position.sliced_at,
                "mean": position.mean(),
                "std": position.std(),
                "expected_mean": expected_x,
            },
            "conditional_momentum": {
                "slice_at": momentum.sliced_at,
                "mean": momentum.mean(),
                "std": momentum.std(),
                "expected_mean": expected_p,
            },
            "parseval_error": parseval_error,
            "envelope_width": cfg.envelope_width,
        },
        "statistics": {
            "position_mean_deviation": abs(position.mean() - expected_x),
            "position_tolerance": cfg.sigma / 10.0,
            "momentum_mean_deviation": abs(momentum.mean() - expected_p),
            "momentum_tolerance": 1.0 / (10.0 * cfg.envelope_width),
        },
    }


def run_singlet_correlation(settings: dict) -> dict:
    """results: correlation, n_pairs, counts {up_up, up_down, down_up,
    down_down}, electron_setting, positron_setting.
    statistics: standard_error."""
    from eprlab.spinlab import pair_counts_blocked

    (a, b), pairs = _analyzer_settings(settings["angles"], 2)
    counts = pair_counts_blocked(
        _pair_model(settings),
        a,
        b,
        settings["samples"],
        settings["seed"],
        workers=settings["workers"],
    )
    value = counts.correlation
    n = counts.n_pairs
    return {
        "config": _base_config(settings, angles=pairs),
        "results": {
            "correlation": value,
            "n_pairs": n,
            "counts": {
                "up_up": counts.up_up,
                "up_down": counts.up_down,
                "down_up": counts.down_up,
                "down_down": counts.down_down,
            },
            "electron_setting": pairs[0],
            "positron_setting": pairs[1],
        },
        "statistics": {
            "standard_error": (max(0.0, 1.0 - value * value) / n) ** 0.5,
        },
    }


def run_chsh(settings: dict) -> dict:
    """results: s, correlations rows {electron_setting,
    positron_setting, sign, value, n_pairs}. statistics:
    standard_error, classical_bound, tsirelson_bound."""
    from eprlab.spinlab import DEFAULT_BLOCK_SIZE, pair_counts_blocked

    (a, a2, b, b2), pairs = _analyzer_settings(settings["angles"], 4)
    model = _pair_model(settings)
    n = settings["samples"]
    # Each correlation gets its own stream-offset range so the four
    # estimates stay independent and block-index addressable.
    blocks_per = -(-n // DEFAULT_BLOCK_SIZE)
    combination = (
        (a, pairs[0], b, pairs[2], 1.0),
        (a, pairs[0], b2, pairs[3], -1.0),
        (a2, pairs[1], b, pairs[2], 1.0),
        (a2, pairs[1], b2, pairs[3], 1.0),
    )
    s = 0.0
    variance = 0.0
    rows = []
    for j, (sa, ea, sb, eb, sign) in enumerate(combination):
        counts = pair_counts_blocked(
            model,
            sa,
            sb,
            n,
            settings["seed"],
            workers=settings["workers"],
            stream_offset=j * blocks_per,
        )
        value = counts.correlation
        s += sign * value
        variance += max(0.0, 1.0 - value * value) / counts.n_pairs
        rows.append(
            {
                "electron_setting": ea,
                "positron_setting": eb,
                "sign": sign,
                "value": value,
                "n_pairs": counts.n_pairs,
            }
        )
    return {
        "config": _base_config(settings, angles=pairs),
        "results": {"s": s, "correlations": rows},
        "statistics": {
            "standard_error": variance**0.5,
            "classical_bound": 2.0,
            "tsirelson_bound": 2.0 * 2.0**0.5,
        },
    }


def run_switch(settings: dict) -> dict:
    """results: p_electron_up, p_positron_down, n_pairs,
    n_electron_up, n_positron_down, note (non-empty when the
    mechanistic run diverges from the predicted table).
    statistics: standard_error_electron_up."""
    from eprlab.spinlab import switch_protocol_blocked

    report = switch_protocol_blocked(
        _pair_model(settings),
        settings["samples"],
        settings["mode"],
        settings["seed"],
        workers=settings["workers"],
    )
    p = report.p_electron_up
    return {
        "config": _base_config(settings),
        "results": {
            "p_electron_up": p,
            "p_positron_down": report.p_positron_down,
            "n_pairs": report.n_pairs,
            "n_electron_up": report.n_electron_up,
            "n_positron_down": report.n_positron_down,
            "note": report.note,
        },
        "statistics": {
            "standard_error_electron_up": (
                max(0.0, p * (1.0 - p)) / report.n_pairs
            )
            ** 0.5,
        },
    }


def run_untangle(settings: dict) -> dict:
    """results: n_draws, up_down, down_up,
    max_residual_schmidt_weight (0 for exact product outputs).
    statistics: branch_standard_error."""
    from eprlab.rng import make_stream
    from eprlab.spinlab import singlet, untangle

    rng = make_stream(settings["seed"], 0)
    state = singlet()
    n = settings["samples"]
    up_down = 0
    worst = 0.0
    for _ in range(n):
        out = untangle(state, rng)
        worst = max(worst, float(out.schmidt_coefficients()[1]))
        up_down += int(out.amps[0, 1] == 1.0)
    return {
        "config": _base_config(settings),
        "results": {
            "n_draws": n,
            "up_down": up_down,
            "down_up": n - up_down,
            "max_residual_schmidt_weight": worst,
        },
        "statistics": {
            "branch_standard_error": (0.25 / n) ** 0.5,
        },
    }


@dataclass(frozen=True)
class CommandSpec:
    help: str
    options: tuple[Option, ...]
    handler: Callable[[dict], dict]


COMMANDS: dict[str, CommandSpec] = {
    "hydrogen": CommandSpec(
        "orbital mean radii, ground-state radial momentum, orthonormality",
        (
            Option("max_n", "--max-n", _int_in_range("--max-n", 1, 8), 4,
                   "largest principal quantum number for mean radii"),
            Option("ortho_max_n", "--ortho-max-n",
                   _int_in_range("--ortho-max-n", 1, 4), 3,
                   "largest n in the orthonormality table"),
            Option("r_max", "--r-max", _float_value("--r-max", positive=True),
                   None, "radial grid extent in Bohr radii "
                         "(default: per-orbital 40 n^2)"),
            Option("points", "--points", _int_in_range("--points", 5), None,
                   "radial grid points (default 4096)"),
        ),
        run_hydrogen,
    ),
    "commutator-check": CommandSpec(
        "grid residual of the position-momentum commutator",
        (
            Option("length", "--length",
                   _float_value("--length", positive=True), 16.0,
                   "grid extent"),
            Option("points", "--points", _int_in_range("--points", 5), 513,
                   "grid points"),
        ),
        run_commutator_check,
    ),
    "epr": CommandSpec(
        "conditional distributions of the regularized two-particle state",
        (
            Option("length", "--length",
                   _float_value("--length", positive=True), 20.0,
                   "grid extent per axis"),
            Option("points", "--points", _int_in_range("--points", 64), 512,
                   "grid points per axis"),
            Option("sigma", "--sigma", _float_value("--sigma", positive=True),
                   0.5, "relative-coordinate width"),
            Option("x0", "--x0", _float_value("--x0"), 1.0,
                   "separation offset"),
            Option("position", "--position", _float_value("--position"), 0.5,
                   "position at which particle I is found"),
            Option("momentum", "--momentum", _float_value("--momentum"), 1.0,
                   "momentum at which particle I is found"),
        ),
        run_epr,
    ),
    "singlet-correlation": CommandSpec(
        "joint spin statistics at two analyzer settings",
        (
            MODEL,
            P2_RULE,
            SAMPLES,
            Option("angles", "--angles", _float_list("--angles"), [0.0, 60.0],
                   "two polar angles, or two polar,azimuth pairs, degrees"),
        ),
        run_singlet_correlation,
    ),
    "chsh": CommandSpec(
        "CHSH statistic from four analyzer settings",
        (
            MODEL,
            P2_RULE,
            SAMPLES,
            Option("angles", "--angles", _float_list("--angles"),
                   [0.0, 90.0, 45.0, 135.0],
                   "four polar angles (a, a2, b, b2), or four "
                   "polar,azimuth pairs, degrees"),
        ),
        run_chsh,
    ),
    "switch": CommandSpec(
        "positron flipped to match the electron, then measured",
        (
            MODEL,
            P2_RULE,
            SAMPLES,
            Option("mode", "--mode", _choice("--mode", MODE_CHOICES),
                   "predicted",
                   "predicted: definite-spins bookkeeping; mechanistic: "
                   "collapse-ordered simulation"),
        ),
        run_switch,
    ),
    "untangle": CommandSpec(
        "map singlets to definite product states and tally the branches",
        (
            Option("samples", "--samples", _int_in_range("--samples", 1),
                   1_000, "number of untangle draws"),
        ),
        run_untangle,
    ),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eprlab",
        description="Seeded, reproducible experiments on operator algebra, "
                    "hydrogen quadrature, the continuous two-particle state, "
                    "and singlet spin statistics.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, spec in COMMANDS.items():
        sub = subparsers.add_parser(name, help=spec.help)
        for option in COMMON_OPTIONS + spec.options:
            sub.add_argument(option.flag, dest=option.dest, default=None,
                             help=option.help)
        sub.add_argument(
            "--config", dest="config_path", default=None,
            help="key=value config file; explicit flags override it",
        )
    return parser


def load_config_file(path: str) -> dict[str, str]:
    """Parse key=value lines; blank lines and # comments are ignored."""
    values: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise CliError(f"cannot read config file: {exc}") from None
    for number, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise CliError(f"{path}:{number}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def resolve_settings(args: argparse.Namespace) -> dict:
    """Merge flags over config-file values over defaults, then convert."""
    spec = COMMANDS[args.command]
    options = COMMON_OPTIONS + spec.options
    file_values = (
        load_config_file(args.config_path) if args.config_path else {}
    )
    known = {option.dest for option in options}
    unknown = sorted(set(file_values) - known)
    if unknown:
        raise CliError(
            f"unknown config file keys for {args.command}: "
            + ", ".join(unknown)
        )
    settings: dict = {"command": args.command, "config_path": args.config_path}
    for option in options:
        raw = getattr(args, option.dest)
        if raw is None:
            raw = file_values.get(option.dest)
        if raw is None:
            settings[option.dest] = option.default
        else:
            settings[option.dest] = option.convert(raw)
    return settings


def _native(value):
    """Coerce numpy scalars so json and csv see plain Python numbers."""
    if isinstance(value, dict):
        return {key: _native(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_native(item) for item in value]
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    item = getattr(value, "item", None)
    if callable(item):
        return _native(item())
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _flatten(value, prefix: str, rows: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            path = f"{prefix}.{key}" if prefix else key
            _flatten(value[key], path, rows)
    elif isinstance(value, list):
        for index, item in enumerate(value):
            _flatten(item, f"{prefix}.{index}", rows)
    else:
        rows.append((prefix, _scalar_text(value)))


def _scalar_text(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(payload: dict, output_format: str) -> str:
    payload = _native(payload)
    if output_format == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    rows: list[tuple[str, str]] = []
    _flatten(payload, "", rows)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("key", "value"))
    writer.writerows(rows)
    return buffer.getvalue()


def resolve_output_path(path: str | None) -> str | None:
    if path is None:
        return None
    if not os.path.isabs(path):
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base:
            return os.path.join(base, path)
    return path


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = resolve_settings(args)
        try:
            payload = COMMANDS[settings["command"]].handler(settings)
        except ValueError as exc:
            raise CliError(str(exc)) from None
        text = render(payload, settings["format"])
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    path = resolve_output_path(settings["output"])
    try:
        if path is None:
            sys.stdout.write(text)
        else:
            with open(path, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
