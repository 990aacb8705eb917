"""Flat key=value run configuration with environment and flag overrides.

The on-disk format is one `section.key = value` pair per line, `#`
comments allowed; no nesting and no library dependence.  Every key can
also be set through the environment as MILDFLOW_<KEY> with dots
replaced by underscores (MILDFLOW_CLOUD_NU=2 overrides cloud.nu), and
programmatic overrides win over both.  Unknown keys are rejected, and
validation names the offending key together with the violated
constraint.
"""

import os
from dataclasses import dataclass, fields
from math import pi

from .solver import INTEGRATORS

ENV_PREFIX = "MILDFLOW_"

MODELS = ("cloud", "heat-semilinear", "heat-quasilinear", "heat-periodic")
INIT_KINDS = ("zero", "mode", "random")
DIFFUSIVITY_KINDS = ("constant", "one_plus_square")


class ConfigError(ValueError):
    """Bad key, bad value or violated constraint in a run configuration."""


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


@dataclass
class RunConfig:
    """Validated parameters of one CLI run; construct via parse_config."""

    model: str = "cloud"
    cloud_nu: float = 1.0
    cloud_eta: float = 0.0
    cloud_beta: float = 1.0
    heat_kind: str = "semilinear"
    heat_kappa: float = 6.0
    heat_n: int = 1
    heat_p: float = 2.0
    heat_tau: float = 0.27
    heat_a0: float = 1.0
    heat_a_kind: str = "one_plus_square"
    heat_intervals: int = 64
    heat_points: int = 65
    heat_diffusion: float = 1.0
    grid_nx: int = 64
    grid_ny: int = 48
    grid_lx: float = 2.0 * pi
    grid_periodic: bool = True
    grid_half_width: float = 8.0 * pi
    grid_n: int = 256
    solver_dt: float = 1e-3
    solver_t_end: float = 1.0
    solver_integrator: str = "etdrk2"
    solver_record_every: int = 1
    solver_snapshot_every: int = 0
    solver_blowup_factor: float = 1e6
    init_kind: str = "mode"
    init_amplitude: float = 1e-2
    run_seed: int = 0
    run_out: str = "run"


def _key_table():
    table = {}
    for field in fields(RunConfig):
        key = field.name.replace("_", ".", 1) if "_" in field.name else field.name
        table[key] = field.name
    return table


# config keys are the dataclass fields with the first underscore dotted:
# cloud_nu <-> cloud.nu, run_seed <-> run.seed, model <-> model
KEYS = _key_table()

_CONVERTERS = {bool: _parse_bool, int: int, float: float, str: str}


def config_keys() -> tuple:
    """All recognized configuration keys, sorted."""
    return tuple(sorted(KEYS))


def env_name(key: str) -> str:
    return ENV_PREFIX + key.upper().replace(".", "_")


def _convert(key: str, raw: str, kind):
    try:
        return _CONVERTERS[kind](raw)
    except ValueError:
        raise ConfigError(
            f"{key}: cannot parse {raw!r} as {kind.__name__}") from None


def _read_file(path: str) -> dict:
    pairs = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(
                    f"{path}:{lineno}: expected 'key = value', got {line.strip()!r}")
            key, raw = (part.strip() for part in stripped.split("=", 1))
            if key not in KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown config key '{key}'")
            pairs[key] = raw
    return pairs


def parse_config(path=None, overrides=None, environ=None) -> RunConfig:
    """Assemble a RunConfig from file, environment and explicit overrides.

    Precedence: defaults < file < environment < overrides.  `overrides`
    is a mapping or an iterable of 'key=value' strings.  The result is
    fully validated; every violation is reported with its key.
    """
    environ = os.environ if environ is None else environ
    raw = {}
    if path is not None:
        raw.update(_read_file(path))
    for key in KEYS:
        value = environ.get(env_name(key))
        if value is not None:
            raw[key] = value
    if overrides:
        items = overrides.items() if hasattr(overrides, "items") else None
        if items is None:
            items = []
            for entry in overrides:
                if "=" not in entry:
                    raise ConfigError(
                        f"override {entry!r} must look like key=value")
                key, value = entry.split("=", 1)
                items.append((key.strip(), value.strip()))
        for key, value in items:
            if key not in KEYS:
                raise ConfigError(f"unknown config key '{key}'")
            raw[key] = value

    config = RunConfig()
    field_types = {field.name: field.type for field in fields(RunConfig)}
    type_of = {"bool": bool, "int": int, "float": float, "str": str}
    for key, raw_value in raw.items():
        attr = KEYS[key]
        kind = field_types[attr]
        kind = type_of[kind] if isinstance(kind, str) else kind
        setattr(config, attr, _convert(key, str(raw_value), kind))
    validate_config(config)
    return config


def validate_config(config: RunConfig) -> None:
    """Re-check every module invariant the configuration touches."""
    problems = []

    def require(condition, key, constraint):
        if not condition:
            problems.append(f"{key}: {constraint}")

    require(config.model in MODELS, "model",
            f"must be one of {', '.join(MODELS)}, got '{config.model}'")
    require(config.cloud_nu > 0.0, "cloud.nu",
            f"must be positive, got {config.cloud_nu}")
    require(config.grid_nx >= 8 and config.grid_nx % 2 == 0, "grid.nx",
            f"must be an even integer of at least 8, got {config.grid_nx}")
    require(config.grid_ny >= 8, "grid.ny",
            f"must be at least 8, got {config.grid_ny}")
    require(config.grid_lx > 0.0, "grid.lx",
            f"must be positive, got {config.grid_lx}")
    require(config.grid_half_width > 0.0, "grid.half_width",
            f"must be positive, got {config.grid_half_width}")
    require(config.grid_n >= 16 and config.grid_n % 2 == 0, "grid.n",
            f"must be an even integer of at least 16, got {config.grid_n}")
    require(config.solver_dt > 0.0, "solver.dt",
            f"must be positive, got {config.solver_dt}")
    require(config.solver_t_end > 0.0, "solver.t_end",
            f"must be positive, got {config.solver_t_end}")
    require(config.solver_integrator in INTEGRATORS, "solver.integrator",
            f"must be one of {', '.join(INTEGRATORS)}, "
            f"got '{config.solver_integrator}'")
    require(config.solver_record_every >= 1, "solver.record_every",
            f"must be at least 1, got {config.solver_record_every}")
    require(config.solver_snapshot_every >= 0, "solver.snapshot_every",
            f"must be nonnegative, got {config.solver_snapshot_every}")
    require(config.solver_blowup_factor > 1.0, "solver.blowup_factor",
            f"must exceed 1, got {config.solver_blowup_factor}")
    require(config.init_kind in INIT_KINDS, "init.kind",
            f"must be one of {', '.join(INIT_KINDS)}, got '{config.init_kind}'")
    require(config.init_amplitude >= 0.0, "init.amplitude",
            f"must be nonnegative, got {config.init_amplitude}")
    require(config.run_seed >= 0, "run.seed",
            f"must be nonnegative, got {config.run_seed}")
    require(config.heat_kind in ("semilinear", "quasilinear"), "heat.kind",
            "must be 'semilinear' or 'quasilinear', "
            f"got '{config.heat_kind}'")
    require(config.heat_a0 > 0.0, "heat.a0",
            f"must be positive, got {config.heat_a0}")
    require(config.heat_a_kind in DIFFUSIVITY_KINDS, "heat.a_kind",
            f"must be one of {', '.join(DIFFUSIVITY_KINDS)}, "
            f"got '{config.heat_a_kind}'")
    require(config.heat_diffusion > 0.0, "heat.diffusion",
            f"must be positive, got {config.heat_diffusion}")
    require(config.heat_intervals >= 8, "heat.intervals",
            f"must be at least 8, got {config.heat_intervals}")
    require(config.heat_points >= 9, "heat.points",
            f"must be at least 9, got {config.heat_points}")
    require(config.heat_p >= 1.0, "heat.p",
            f"must be at least 1, got {config.heat_p}")

    # critical-exponent windows of the heat models, re-derived here so a
    # bad kappa is caught before any state is allocated
    if config.model.startswith("heat"):
        require(config.heat_n == 1, "heat.n",
                f"the desk-scale heat models are one dimensional, "
                f"got {config.heat_n}")
        kind = {"heat-semilinear": "semilinear",
                "heat-quasilinear": "quasilinear"}.get(config.model,
                                                       config.heat_kind)
        if kind == "semilinear" and config.heat_n >= 1:
            floor = 1.0 + 2.0 / config.heat_n
            require(config.heat_kappa > floor, "heat.kappa",
                    f"semilinear model needs kappa > 1 + 2/n = {floor:g} "
                    f"for heat.n = {config.heat_n}, got {config.heat_kappa}")
        if kind == "quasilinear":
            require(config.heat_kappa > 3.0, "heat.kappa",
                    "quasilinear gradient model needs kappa > 3, "
                    f"got {config.heat_kappa}")
            require(0.0 < config.heat_tau < 1.0, "heat.tau",
                    f"must lie in (0, 1), got {config.heat_tau}")
            if config.model == "heat-quasilinear":
                # the Hoelder-space desk model pins p and tau tightly
                require(config.heat_p > 2.0, "heat.p",
                        f"quasilinear model needs p > 2n = 2, "
                        f"got {config.heat_p}")
                if config.heat_p > 2.0:
                    hi = 1.0 - 1.0 / config.heat_p
                    require(0.5 < 2.0 * config.heat_tau < hi, "heat.tau",
                            "quasilinear model needs 1/2 < 2 tau < 1 - 1/p"
                            f" = {hi:g}, got 2 tau = {2.0 * config.heat_tau:g}")

    if problems:
        raise ConfigError("; ".join(problems))


def config_echo(config: RunConfig) -> dict:
    """Flat, sorted key -> value mapping for embedding in summaries."""
    return {key: getattr(config, attr) for key, attr in sorted(KEYS.items())}
