"""Command-line front end: figure-data regeneration, port tables, SI design, verification.

Configuration is a flat ``key = value`` document ('#' starts a comment, one
pair per line); command-line flags override file values, and unknown keys
fail closed.  Float values accept a ``pi`` suffix (``0.75pi`` -> 3 pi / 4).
Tables are written as CSV (17 significant digits, '\\n' endings) or JSON
(array of objects); identical configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analytic, experiment, numeric, verify
from .core import (
    BALANCED_R,
    ConfigError,
    DarkPortError,
    GridError,
    InterferometerParams,
    PortPair,
)

__all__ = ["RunConfig", "RunResult", "parse_config", "execute", "write_table", "main", "app"]

MODES = ("distributions", "decompose", "sweep", "ports", "design", "verify")

_GLOBAL_KEYS = ("mode", "out", "format")

# key -> (kind, help); kind is float / int / str
_KEY_SPECS: dict[str, tuple[str, str]] = {
    "mode": ("str", "one of: " + ", ".join(MODES)),
    "out": ("str", "output file path"),
    "format": ("str", "csv or json"),
    "r": ("float", "splitter reflection magnitude in [0, 1] (default balanced)"),
    "width": ("float", "packet momentum width W (default 1)"),
    "delta_over_w": ("float", "momentum kick in units of W"),
    "phi": ("float", "path phase, radians ('pi' suffix allowed)"),
    "alpha": ("float", "interaction phase, radians"),
    "port": ("str", "post-selected exit pair: cc, cd, dc or dd (default dc)"),
    "grid_span": ("float", "half-width of report grids in units of W (default 8)"),
    "grid_points": ("int", "1D grid points, odd (default 2001)"),
    "joint_grid_points": ("int", "two-particle oracle grid points per axis, odd (default 513)"),
    "kick_points": ("int", "DFT size of the kick oracle (default 4096)"),
    "delta_over_w_min": ("float", "sweep start of delta/W"),
    "delta_over_w_max": ("float", "sweep end of delta/W"),
    "delta_over_w_steps": ("int", "sweep points along delta/W (>= 2)"),
    "phi_min": ("float", "sweep start of phi, radians"),
    "phi_max": ("float", "sweep end of phi, radians"),
    "phi_steps": ("int", "sweep points along phi (>= 2)"),
    "separation_m": ("float", "beam separation d, metres"),
    "length_m": ("float", "interferometer length L, metres"),
    "speed_m_per_s": ("float", "longitudinal speed v, m/s"),
    "waist_transverse_m": ("float", "transverse beam waist, metres"),
    "waist_longitudinal_m": ("float", "initial longitudinal width, metres"),
    "tune_target_n": ("int", "request |alpha| = 2 pi n at the tuned separation"),
    "seed": ("int", "random seed for the verification draws"),
    "draws_marginal": ("int", "parameter draws for the marginal-oracle suite"),
    "draws_ports": ("int", "parameter draws for the port-sum suites"),
}

_MODE_REQUIRED: dict[str, tuple[str, ...]] = {
    "distributions": ("delta_over_w", "phi", "alpha"),
    "decompose": ("delta_over_w", "phi", "alpha"),
    "sweep": (
        "delta_over_w_min",
        "delta_over_w_max",
        "delta_over_w_steps",
        "phi_min",
        "phi_max",
        "phi_steps",
    ),
    "ports": ("delta_over_w", "phi", "alpha"),
    "design": (
        "separation_m",
        "length_m",
        "speed_m_per_s",
        "waist_transverse_m",
        "waist_longitudinal_m",
    ),
    "verify": (),
}

_MODE_OPTIONAL: dict[str, tuple[str, ...]] = {
    "distributions": ("r", "width", "port", "grid_span", "grid_points"),
    "decompose": ("width", "grid_span", "grid_points"),
    "sweep": ("alpha",),
    "ports": ("r", "width"),
    "design": ("tune_target_n",),
    "verify": (
        "seed",
        "draws_marginal",
        "draws_ports",
        "grid_span",
        "grid_points",
        "joint_grid_points",
        "kick_points",
    ),
}


@dataclass(frozen=True)
class RunConfig:
    """Validated, fully-defaulted run description (one mode per run)."""

    mode: str
    out: str | None = None
    format: str = "csv"
    r: float = BALANCED_R
    width: float = 1.0
    delta_over_w: float | None = None
    phi: float | None = None
    alpha: float = 0.0
    port: str = "dc"
    grid_span: float = 8.0
    grid_points: int = numeric.DEFAULT_GRID_POINTS
    joint_grid_points: int = numeric.DEFAULT_JOINT_POINTS
    kick_points: int = numeric.DEFAULT_KICK_POINTS
    delta_over_w_min: float | None = None
    delta_over_w_max: float | None = None
    delta_over_w_steps: int | None = None
    phi_min: float | None = None
    phi_max: float | None = None
    phi_steps: int | None = None
    separation_m: float | None = None
    length_m: float | None = None
    speed_m_per_s: float | None = None
    waist_transverse_m: float | None = None
    waist_longitudinal_m: float | None = None
    tune_target_n: int | None = None
    seed: int = 12345
    draws_marginal: int = 100
    draws_ports: int = 1000

    def model_params(self) -> InterferometerParams:
        return InterferometerParams(
            r=self.r,
            phi=self.phi,
            alpha=self.alpha,
            delta=self.delta_over_w * self.width,
            width=self.width,
        )

    def experiment_inputs(self) -> experiment.ExperimentInputs:
        return experiment.ExperimentInputs(
            separation=self.separation_m,
            length=self.length_m,
            speed=self.speed_m_per_s,
            waist_transverse=self.waist_transverse_m,
            waist_longitudinal=self.waist_longitudinal_m,
        )


@dataclass
class RunResult:
    columns: list[str]
    rows: list[tuple]
    summary: list[str] = field(default_factory=list)
    exit_code: int = 0


def _parse_float(raw: str, key: str, line: int | None) -> float:
    text = raw.strip()
    head, factor = text, 1.0
    if text.endswith("pi"):
        head, factor = text[:-2].strip(), math.pi
        if head in ("", "+"):
            return factor
        if head == "-":
            return -factor
    try:
        value = float(head)
    except ValueError:
        raise ConfigError(f"key '{key}': cannot parse number from {raw!r}", line) from None
    if not math.isfinite(value * factor):
        raise ConfigError(f"key '{key}': value {raw!r} is not finite", line)
    return value * factor


def _parse_int(raw: str, key: str, line: int | None) -> int:
    try:
        return int(raw.strip(), 10)
    except ValueError:
        raise ConfigError(f"key '{key}': cannot parse integer from {raw!r}", line) from None


def parse_config_text(text: str) -> tuple[dict[str, str], dict[str, int]]:
    """Flat key=value parsing with unknown/duplicate keys rejected at their line."""
    raw: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, original in enumerate(text.splitlines(), start=1):
        stripped = original.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value', got {original.strip()!r}", lineno)
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _KEY_SPECS:
            raise ConfigError(f"unknown key '{key}'", lineno)
        if key in raw:
            raise ConfigError(f"duplicate key '{key}' (first set on line {lines[key]})", lineno)
        if not value:
            raise ConfigError(f"key '{key}' has an empty value", lineno)
        raw[key] = value
        lines[key] = lineno
    return raw, lines


def build_config(raw: dict[str, str], lines: dict[str, int] | None = None) -> RunConfig:
    """Type, mode and range validation of a raw key->string mapping."""
    lines = lines or {}

    def where(key: str) -> int | None:
        return lines.get(key)

    if "mode" not in raw:
        required_hint = ", ".join(_GLOBAL_KEYS[:1])
        raise ConfigError(
            f"missing required key 'mode' ({required_hint} plus the mode's own keys are required; "
            f"modes: {', '.join(MODES)})"
        )
    mode = raw["mode"].strip().lower()
    if mode not in MODES:
        raise ConfigError(f"unknown mode {raw['mode']!r}; expected one of {', '.join(MODES)}", where("mode"))

    allowed = set(_GLOBAL_KEYS) | set(_MODE_REQUIRED[mode]) | set(_MODE_OPTIONAL[mode])
    for key in raw:
        if key not in allowed:
            raise ConfigError(f"key '{key}' is not valid in mode '{mode}'", where(key))
    missing = [key for key in _MODE_REQUIRED[mode] if key not in raw]
    if missing:
        raise ConfigError(f"mode '{mode}' is missing required keys: {', '.join(missing)}")

    values: dict[str, object] = {"mode": mode}
    for key, text in raw.items():
        if key == "mode":
            continue
        kind = _KEY_SPECS[key][0]
        if kind == "float":
            values[key] = _parse_float(text, key, where(key))
        elif kind == "int":
            values[key] = _parse_int(text, key, where(key))
        else:
            values[key] = text.strip()

    config = RunConfig(**values)
    _validate_ranges(config, where)
    return config


def _validate_ranges(config: RunConfig, where) -> None:
    def bad(key: str, message: str):
        return ConfigError(f"key '{key}': {message}", where(key))

    if config.format not in ("csv", "json"):
        raise bad("format", f"expected csv or json, got {config.format!r}")
    if config.port not in tuple(p.value for p in PortPair):
        raise bad("port", f"expected one of cc, cd, dc, dd, got {config.port!r}")
    if not 0.0 <= config.r <= 1.0:
        raise bad("r", f"must lie in [0, 1], got {config.r!r}")
    if not config.width > 0.0:
        raise bad("width", f"must be positive, got {config.width!r}")
    if config.delta_over_w is not None and config.delta_over_w < 0.0:
        raise bad("delta_over_w", f"must be >= 0, got {config.delta_over_w!r}")
    if not config.grid_span > 0.0:
        raise bad("grid_span", f"must be positive, got {config.grid_span!r}")
    for key in ("grid_points", "joint_grid_points"):
        n = getattr(config, key)
        if n < 3 or n % 2 == 0:
            raise bad(key, f"must be odd and >= 3, got {n!r}")
    if config.kick_points < 16:
        raise bad("kick_points", f"must be >= 16, got {config.kick_points!r}")
    for key in ("delta_over_w_steps", "phi_steps"):
        n = getattr(config, key)
        if n is not None and n < 2:
            raise bad(key, f"sweep needs at least 2 steps, got {n!r}")
    for lo_key, hi_key in (("delta_over_w_min", "delta_over_w_max"), ("phi_min", "phi_max")):
        lo, hi = getattr(config, lo_key), getattr(config, hi_key)
        if lo is not None and hi is not None and not lo < hi:
            raise bad(hi_key, f"range must be ordered: {lo_key} < {hi_key} (got {lo!r} >= {hi!r})")
    if config.delta_over_w_min is not None and config.delta_over_w_min < 0.0:
        raise bad("delta_over_w_min", f"must be >= 0, got {config.delta_over_w_min!r}")
    for key in ("separation_m", "length_m", "speed_m_per_s", "waist_transverse_m", "waist_longitudinal_m"):
        value = getattr(config, key)
        if value is not None and not value > 0.0:
            raise bad(key, f"must be positive, got {value!r}")
    if config.tune_target_n is not None and config.tune_target_n < 1:
        raise bad("tune_target_n", f"must be a positive integer, got {config.tune_target_n!r}")
    if config.seed < 0:
        raise bad("seed", f"must be >= 0, got {config.seed!r}")
    for key in ("draws_marginal", "draws_ports"):
        if getattr(config, key) < 1:
            raise bad(key, f"must be >= 1, got {getattr(config, key)!r}")


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration document."""
    raw, lines = parse_config_text(text)
    return build_config(raw, lines)


# ---------------------------------------------------------------------------
# Mode implementations
# ---------------------------------------------------------------------------

def _report_grid(config: RunConfig) -> numeric.MomentumGrid:
    half = config.grid_span * config.width
    return numeric.MomentumGrid(-half, half, config.grid_points)


def _fmt_params(params: InterferometerParams) -> str:
    return (
        f"r={params.r:.6f}, delta/W={params.delta_over_width:g}, "
        f"phi={params.phi:.8f} rad, alpha={params.alpha:.8f} rad"
    )


def _run_distributions(config: RunConfig) -> RunResult:
    params = config.model_params()
    port = PortPair(config.port)
    grid = _report_grid(config)
    p = grid.points
    if port is PortPair.DC:
        dens1 = analytic.marginal_density(params, 1, p, normalized=True)
        dens2 = analytic.marginal_density(params, 2, p, normalized=True)
    else:
        dens1 = analytic.port_marginal_density(params, port, 1, p)
        dens2 = analytic.port_marginal_density(params, port, 2, p)
    w = params.width
    rows = [(float(pi / w), float(d1 * w), float(d2 * w)) for pi, d1, d2 in zip(p, dens1, dens2)]
    quad_mean = grid.density_mean(dens1) / w
    summary = [
        f"distributions mode: port {port.name}, {_fmt_params(params)}",
        f"  mean p1/W from quadrature of the emitted density: {quad_mean:+.6f}",
    ]
    if port is PortPair.DC:
        closed = analytic.mean_postselected(params, 1) / w
        single = analytic.mean_postselected_packet_overlap(params) / w
        summary += [
            f"  mean p1/W, closed form with branch overlap I^2:  {closed:+.6f}",
            f"  mean p1/W, closed form with packet overlap I:    {single:+.6f}",
            f"  overlap-convention difference:                   {single - closed:+.6f}",
        ]
    else:
        mean = analytic.port_mean_momenta(params, 1)[port]
        summary.append(f"  mean p1/W, closed form for port {port.name}: {mean / w:+.6f}")
    return RunResult(["p_over_W", "P1_times_W", "P2_times_W"], rows, summary)


def _run_decompose(config: RunConfig) -> RunResult:
    params = config.model_params()
    grid = _report_grid(config)
    p = grid.points
    direct, cross = analytic.term_decomposition(params, p)
    w = params.width
    rows = [
        (float(pi / w), float(ta * w), float(tb * w), float((ta + tb) * w))
        for pi, ta, tb in zip(p, direct, cross)
    ]
    summary = [
        f"decompose mode: {_fmt_params(params)}",
        f"  post-selection norm N = {analytic.postselect_norm(params):.6f}",
        f"  interference term minimum: {float(np.min(cross)) * w:+.6f} (units 1/W)",
        f"  direct term is non-negative: min {float(np.min(direct)) * w:.3e}",
    ]
    return RunResult(
        ["p_over_W", "T_a_times_W", "T_b_times_W", "P1_unnormalized_times_W"], rows, summary
    )


def _run_sweep(config: RunConfig) -> RunResult:
    deltas = np.linspace(config.delta_over_w_min, config.delta_over_w_max, config.delta_over_w_steps)
    phis = np.linspace(config.phi_min, config.phi_max, config.phi_steps)
    surface = analytic.mean_surface(deltas[:, None], phis[None, :], config.alpha)
    rows = []
    for i in range(deltas.size):  # row-major: delta outer, phi inner
        for j in range(phis.size):
            rows.append(
                (
                    float(deltas[i]),
                    float(phis[j]),
                    float(surface.mean[i, j]),
                    float(surface.mean_single_overlap[i, j]),
                    float(surface.norm[i, j]),
                )
            )
    anomalous = surface.mean > 0.0
    count = int(np.count_nonzero(anomalous))
    summary = [
        f"sweep mode: {deltas.size} x {phis.size} grid, alpha={config.alpha:.8f} rad",
        f"  anomalous (positive-mean) points: {count} of {surface.mean.size}"
        f" ({100.0 * count / surface.mean.size:.1f}%)",
    ]
    if count:
        imax = np.unravel_index(np.argmax(surface.mean), surface.mean.shape)
        summary.append(
            f"  largest anomalous mean: +{surface.mean[imax]:.6f} W at "
            f"delta/W={deltas[imax[0]]:g}, phi={phis[imax[1]]:.6f} rad"
        )
    dark = surface.norm <= 1e-12
    if np.any(dark):
        summary.append(
            f"  dark grid points emitted as 0 (removable limit), flagged by postselect_norm <= 1e-12: "
            f"{int(np.count_nonzero(dark))}"
        )
    return RunResult(
        ["delta_over_W", "phi_rad", "mean_p1_over_W", "mean_p1_single_overlap_over_W", "postselect_norm"],
        rows,
        summary,
    )


def _run_ports(config: RunConfig) -> RunResult:
    params = config.model_params()
    w = params.width
    probs = analytic.port_probabilities(params)
    means1 = analytic.port_mean_momenta(params, 1)
    means2 = analytic.port_mean_momenta(params, 2)
    balance = analytic.ehrenfest_check(params)
    rows: list[tuple] = []
    for port in PortPair:
        defined = means1[port] is not None
        rows.append(
            (
                port.name,
                float(probs[port]),
                float(means1[port] / w) if defined else 0.0,
                float(means2[port] / w) if defined else 0.0,
                int(defined),
            )
        )
    rows.append(("TOTAL", float(sum(probs.values())), balance.weighted_sum / w, -balance.weighted_sum / w, 1))
    summary = [f"ports mode: {_fmt_params(params)}"]
    for port in PortPair:
        mean_text = f"{means1[port] / w:+.6f} W" if means1[port] is not None else "undefined (dark)"
        summary.append(f"  P({port.name}) = {probs[port]:.6f}   mean p1 = {mean_text}")
    summary += [
        f"  sum of port probabilities: {sum(probs.values()):.12f}",
        f"  unconditioned mean of p1, closed form -2 t^2 r^2 delta: {balance.closed_form / w:+.6f} W",
        f"  unconditioned mean of p1, port-weighted sum:            {balance.weighted_sum / w:+.6f} W",
    ]
    return RunResult(
        ["port", "probability", "mean_p1_over_W", "mean_p2_over_W", "mean_defined"], rows, summary
    )


def _run_design(config: RunConfig) -> RunResult:
    inputs = config.experiment_inputs()
    setup = experiment.derive_setup(inputs)
    tuned = experiment.tune_separation(inputs, config.tune_target_n)
    columns = [
        "separation_m",
        "length_m",
        "speed_m_per_s",
        "waist_transverse_m",
        "waist_longitudinal_m",
        "transit_time_s",
        "force_N",
        "delta_kg_m_per_s",
        "width_W_kg_m_per_s",
        "delta_over_W",
        "alpha_rad",
        "alpha_over_pi",
        "fringe_spacing_m",
        "longitudinal_spread_m",
        "transverse_spread_m",
        "transverse_spread_relative",
        "kinetic_scale_J",
        "potential_scale_J",
        "tuned_multiple_2pi",
        "tuned_separation_m",
        "tuned_alpha_rad",
    ]
    row = [
        inputs.separation,
        inputs.length,
        inputs.speed,
        inputs.waist_transverse,
        inputs.waist_longitudinal,
        setup.transit_time,
        setup.force,
        setup.delta,
        setup.momentum_width,
        setup.delta_over_width,
        setup.alpha,
        setup.alpha / math.pi,
        setup.fringe_spacing,
        setup.longitudinal_spread,
        setup.transverse_spread,
        setup.transverse_spread_relative,
        setup.kinetic_scale,
        setup.potential_scale,
        tuned.n_multiple,
        tuned.separation,
        tuned.setup.alpha,
    ]
    for check in setup.validity:
        columns += [f"check_{check.name}_ratio", f"check_{check.name}_pass"]
        row += [check.ratio, int(check.passed)]
    summary = [
        "design mode: SI setup -> dimensionless model",
        f"  transit time           {setup.transit_time:.6e} s",
        f"  coulomb force          {setup.force:.6e} N",
        f"  momentum kick delta    {setup.delta:.6e} kg m/s",
        f"  momentum width W       {setup.momentum_width:.6e} kg m/s",
        f"  delta / W              {setup.delta_over_width:.4f}",
        f"  alpha                  {setup.alpha:.4f} rad = {setup.alpha / math.pi:.4f} pi",
        f"  fringe spacing h/delta {setup.fringe_spacing:.4e} m",
        f"  longitudinal spread    {setup.longitudinal_spread:.4e} m",
        f"  transverse growth      {setup.transverse_spread_relative:.4e} (relative)",
        f"  kinetic scale          {setup.kinetic_scale:.4e} J",
        f"  potential scale        {setup.potential_scale:.4e} J",
        f"  tuned separation       {tuned.separation * 1e3:.4f} mm gives |alpha| = {tuned.n_multiple} x 2 pi",
    ]
    summary += ["  " + check.describe() for check in setup.validity]
    return RunResult(columns, [tuple(row)], summary)


def _run_verify(config: RunConfig) -> RunResult:
    checks = verify.run_all(
        seed=config.seed,
        draws_marginal=config.draws_marginal,
        draws_ports=config.draws_ports,
        span=config.grid_span,
        grid_points=config.grid_points,
        joint_points=config.joint_grid_points,
        kick_points=config.kick_points,
    )
    rows = [(c.name, c.max_deviation, c.tolerance, int(c.passed)) for c in checks]
    summary = ["verify mode: closed forms against independent oracles"]
    summary += ["  " + c.describe() for c in checks]
    all_passed = all(c.passed for c in checks)
    summary.append(f"  overall: {'all suites passed' if all_passed else 'SUITE FAILURES PRESENT'}")
    return RunResult(
        ["check", "max_deviation", "tolerance", "passed"],
        rows,
        summary,
        exit_code=0 if all_passed else 1,
    )


_MODE_RUNNERS = {
    "distributions": _run_distributions,
    "decompose": _run_decompose,
    "sweep": _run_sweep,
    "ports": _run_ports,
    "design": _run_design,
    "verify": _run_verify,
}


def execute(config: RunConfig) -> RunResult:
    """Run one mode; raises DarkPortError / GridError on invalid physics."""
    return _MODE_RUNNERS[config.mode](config)


# ---------------------------------------------------------------------------
# Table writers
# ---------------------------------------------------------------------------

def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.16e" % float(value)


def write_table(columns: list[str], rows: list[tuple], fmt: str = "csv") -> str:
    """Render a rectangular table; deterministic bytes for identical inputs."""
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row of length {len(row)} does not match {len(columns)} columns")
    if fmt == "csv":
        lines = [",".join(columns)]
        lines += [",".join(_format_cell(cell) for cell in row) for row in rows]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        objects = []
        for row in rows:
            obj = {}
            for name, cell in zip(columns, row):
                if isinstance(cell, (bool, np.bool_, int, np.integer)):
                    obj[name] = int(cell)
                elif isinstance(cell, str):
                    obj[name] = cell
                else:
                    obj[name] = float(cell)
            objects.append(obj)
        return json.dumps(objects, indent=2) + "\n"
    raise ValueError(f"unknown table format {fmt!r}")


def _write_artifact(path: str, text: str) -> None:
    try:
        target = Path(path)
        if target.parent and not target.parent.exists():
            target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", newline="") as handle:
            handle.write(text)
    except OSError as err:
        raise OSError(f"cannot write output file {path!r}: {err}") from err


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qif-mzi",
        description=(
            "Post-selected two-electron interferometer: distributions, term decomposition, "
            "parameter sweeps, exit-port tables, SI experiment design, and oracle verification."
        ),
    )
    parser.add_argument("mode", nargs="?", default=None, help="one of: " + ", ".join(MODES))
    parser.add_argument("--config", metavar="FILE", default=None, help="key = value configuration file")
    for key, (kind, help_text) in _KEY_SPECS.items():
        if key == "mode":
            continue
        parser.add_argument(
            "--" + key.replace("_", "-"),
            dest=f"key_{key}",
            metavar=kind.upper(),
            default=None,
            help=help_text,
        )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        raw: dict[str, str] = {}
        lines: dict[str, int] = {}
        if args.config is not None:
            try:
                text = Path(args.config).read_text()
            except OSError as err:
                raise ConfigError(f"cannot read config file {args.config!r}: {err}") from err
            raw, lines = parse_config_text(text)
        if args.mode is not None:
            raw["mode"] = args.mode
            lines.pop("mode", None)
        for key in _KEY_SPECS:
            if key == "mode":
                continue
            override = getattr(args, f"key_{key}")
            if override is not None:
                raw[key] = override
                lines.pop(key, None)  # overridden: errors no longer point at the file
        config = build_config(raw, lines)
        result = execute(config)
    except ConfigError as err:
        print(f"qif-mzi: config error: {err}", file=sys.stderr)
        return 2
    except (DarkPortError, GridError) as err:
        print(f"qif-mzi: error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"qif-mzi: error: {err}", file=sys.stderr)
        return 1

    for line in result.summary:
        print(line)
    if config.out is not None:
        try:
            _write_artifact(config.out, write_table(result.columns, result.rows, config.format))
        except OSError as err:
            print(f"qif-mzi: error: {err}", file=sys.stderr)
            return 1
        print(f"wrote {len(result.rows)} row(s) to {config.out} ({config.format})")
    return result.exit_code


def app() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    app()
