"""Command-line front end.

Every subcommand reads the same flat key=value configuration (file,
MILDFLOW_* environment, --set overrides, convenience flags), runs one
experiment, and writes its outputs atomically under the run directory.
Identical configuration and seed give byte-identical outputs, so no
timestamps or machine identifiers enter any file.

Exit codes: 0 success (a detected blow-up is still a successful run and
is recorded in the summary), 2 constraint or configuration infeasibility,
1 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .cloud import (CloudCoefficients, CloudModel, analytic_bound_nonperiodic,
                    assemble_mode, periodic_stability_condition)
from .config import (MODELS, ConfigError, RunConfig, config_echo, parse_config)
from .exponents import ExponentError, quasilinear_recipe, semilinear_recipe
from .heat import (DiffusivitySpec, PeriodicGrid, PeriodicHeatModel,
                   QuasilinearHeatModel, SemilinearHeatModel,
                   scaling_roundtrip_test)
from .io import (sigma_label, write_csv, write_json, write_series,
                 write_snapshot)
from .lab import (FixedPointDivergence, InfeasibleProblem,
                  contraction_experiment, decay_experiment)
from .propagators import InstabilityError
from .solver import SolverConfig, fit_decay_rate, run_simulation
from .strip import (dirichlet_mode_field, open_strip, periodic_strip,
                    random_dirichlet_field, sobolev_norm, to_grid)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_CONSTRAINT = 2


# ---------------------------------------------------------------- helpers

def _collect_overrides(args, mapping, base=()):
    """Configuration overrides in increasing precedence: command defaults,
    then --set pairs, then convenience flags."""
    overrides = list(base) + list(args.set or [])
    for attr, key in mapping:
        value = getattr(args, attr, None)
        if value is not None:
            overrides.append(f"{key}={value}")
    return overrides


def _geometry(config: RunConfig):
    if config.grid_periodic:
        return periodic_strip(config.grid_nx, config.grid_ny)
    return open_strip(config.grid_nx, config.grid_ny,
                      half_length=config.grid_lx / 2.0)


def _cloud_coeffs(config: RunConfig) -> CloudCoefficients:
    return CloudCoefficients(nu=config.cloud_nu, eta=config.cloud_eta,
                             beta=config.cloud_beta)


def _normalized(model, state, amplitude: float):
    """Scale the state so its H1 norm equals the requested amplitude."""
    base = model.norm(state, 1.0)
    if base <= 0.0:
        return np.zeros_like(state)
    return state * (amplitude / base)


def _build_model_and_state(config: RunConfig):
    """Model instance, initial state, and snapshot metadata (lx, flags)."""
    rng = np.random.default_rng(config.run_seed)
    kind = config.init_kind
    amp = config.init_amplitude

    if config.model == "cloud":
        geometry = _geometry(config)
        model = CloudModel(_cloud_coeffs(config), geometry)
        if kind == "zero":
            state = np.zeros((geometry.nx, geometry.ny - 2), dtype=complex)
        elif kind == "mode":
            field = dirichlet_mode_field(geometry, n=1, m=1)
            state = model.state_from_field(field)
        else:
            field = random_dirichlet_field(geometry, rng)
            state = model.state_from_field(field)
        if kind != "zero":
            state = _normalized(model, state, amp)
        return model, state, 2.0 * geometry.half_length, int(geometry.periodic_x)

    if config.model == "heat-semilinear":
        model = SemilinearHeatModel(intervals=config.heat_intervals,
                                    kappa=config.heat_kappa, p=config.heat_p)
        if kind == "zero":
            state = np.zeros(config.heat_intervals - 1)
        elif kind == "mode":
            state = model.state_from_function(lambda x: np.sin(np.pi * x))
        else:
            coeffs = rng.standard_normal(5) / (1.0 + np.arange(5)) ** 1.5
            state = model.state_from_function(
                lambda x: sum(c * np.sin((m + 1) * np.pi * x)
                              for m, c in enumerate(coeffs)))
        if kind != "zero":
            state = _normalized(model, state, amp)
        return model, state, 1.0, 0

    if config.model == "heat-quasilinear":
        spec = DiffusivitySpec(kind=config.heat_a_kind, a0=config.heat_a0)
        model = QuasilinearHeatModel(points=config.heat_points,
                                     kappa=config.heat_kappa, p=config.heat_p,
                                     tau=config.heat_tau, diffusivity=spec)
        if kind == "zero":
            state = np.zeros(config.heat_points)
        elif kind == "mode":
            state = model.state_from_function(lambda x: np.cos(np.pi * x))
        else:
            coeffs = rng.standard_normal(5) / (1.0 + np.arange(5)) ** 1.5
            state = model.state_from_function(
                lambda x: sum(c * np.cos((m + 1) * np.pi * x)
                              for m, c in enumerate(coeffs)))
        if kind != "zero":
            state = _normalized(model, state, amp)
        return model, state, 1.0, 0

    # heat-periodic
    grid = PeriodicGrid(half_width=config.grid_half_width, n=config.grid_n)
    model = PeriodicHeatModel(grid, kind=config.heat_kind,
                              kappa=config.heat_kappa,
                              diffusion=config.heat_diffusion)
    x = grid.nodes
    if kind == "zero":
        values = np.zeros(grid.n)
    elif kind == "mode":
        values = np.exp(-0.5 * x ** 2)
    else:
        k0 = math.pi / grid.half_width
        values = np.zeros(grid.n)
        for j in range(1, 7):
            a, b = rng.standard_normal(2)
            values += (a * np.cos(j * k0 * x) + b * np.sin(j * k0 * x)) \
                / (1.0 + j) ** 1.5
    state = model.state_from_values(values)
    if kind != "zero":
        state = _normalized(model, state, amp)
    return model, state, 2.0 * grid.half_width, 1


def _solver_config(config: RunConfig) -> SolverConfig:
    weighted = config.model == "cloud"
    return SolverConfig(
        dt=config.solver_dt,
        t_end=config.solver_t_end,
        integrator=config.solver_integrator,
        record_every=config.solver_record_every,
        snapshot_every=config.solver_snapshot_every,
        monitor_sigmas=(0.0, 1.0, 1.5) if weighted else (0.0, 1.0),
        weighted_sigma=1.5 if weighted else None,
        weighted_mu=0.25 if weighted else None,
        blowup_factor=config.solver_blowup_factor,
    )


def _snapshot_values(config: RunConfig, model, state) -> np.ndarray:
    """Real-valued field on the natural grid, always two dimensional."""
    if config.model == "cloud":
        return to_grid(model.field_from_state(state))
    if config.model == "heat-periodic":
        return model.values(state)[None, :]
    return model.nodal_values(state)[None, :]


def _write_snapshots(out_dir, config, model, trajectory, lx, flags):
    count = 0
    for t, state in trajectory.snapshots:
        step = int(round(t / config.solver_dt))
        path = os.path.join(out_dir, "snapshots", f"step_{step:08d}.bin")
        write_snapshot(path, _snapshot_values(config, model, state), lx, flags)
        count += 1
    return count


def _fit_record(trajectory, sigma: float, t_min: float):
    try:
        fit = fit_decay_rate(trajectory, sigma, t_min=t_min)
    except (KeyError, ValueError):
        return None
    return {"rate": fit.rate, "amplitude": fit.amplitude,
            "residual": fit.residual, "samples": fit.samples,
            "sigma": sigma, "t_min": t_min}


def _summary_skeleton(command: str, config: RunConfig) -> dict:
    return {"version": __version__, "command": command,
            "config": config_echo(config)}


def _write_summary(out_dir: str, summary: dict) -> str:
    path = os.path.join(out_dir, "summary.json")
    write_json(path, summary)
    return path


# ------------------------------------------------------------- simulate

SIM_FLAGS = [
    ("model", "model"), ("nu", "cloud.nu"), ("eta", "cloud.eta"),
    ("beta", "cloud.beta"), ("t_end", "solver.t_end"), ("dt", "solver.dt"),
    ("integrator", "solver.integrator"), ("record_every", "solver.record_every"),
    ("snapshot_every", "solver.snapshot_every"), ("init", "init.kind"),
    ("amplitude", "init.amplitude"), ("seed", "run.seed"), ("out", "run.out"),
]

HEAT_FLAGS = [
    ("kappa", "heat.kappa"), ("p", "heat.p"), ("tau", "heat.tau"),
    ("diffusion", "heat.diffusion"), ("intervals", "heat.intervals"),
    ("points", "heat.points"), ("t_end", "solver.t_end"), ("dt", "solver.dt"),
    ("integrator", "solver.integrator"), ("record_every", "solver.record_every"),
    ("snapshot_every", "solver.snapshot_every"), ("init", "init.kind"),
    ("amplitude", "init.amplitude"), ("seed", "run.seed"), ("out", "run.out"),
]


def _simulate_with(config: RunConfig, command: str) -> int:
    model, u0, lx, flags = _build_model_and_state(config)
    solver_cfg = _solver_config(config)
    trajectory = run_simulation(model, u0, solver_cfg)

    out_dir = config.run_out
    write_series(os.path.join(out_dir, "series.csv"), trajectory)
    n_snapshots = _write_snapshots(out_dir, config, model, trajectory,
                                   lx, flags)

    summary = _summary_skeleton(command, config)
    summary["model"] = config.model
    summary["steps"] = int(round(config.solver_t_end / config.solver_dt))
    summary["recorded_samples"] = int(trajectory.times.size)
    summary["snapshots"] = n_snapshots
    summary["blowup"] = (
        None if not trajectory.flagged
        else {"time": trajectory.blowup_time,
              "reason": trajectory.blowup_reason})
    summary["final"] = {
        "time": trajectory.final_time,
        "norms": {sigma_label(s): float(v[-1])
                  for s, v in sorted(trajectory.norms.items())},
    }
    summary["fitted"] = (
        None if trajectory.flagged
        else _fit_record(trajectory, 1.0, 0.25 * config.solver_t_end))
    path = _write_summary(out_dir, summary)

    status = "blow-up flagged" if trajectory.flagged else "completed"
    print(f"{status}: {trajectory.times.size} samples -> {path}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = parse_config(args.config, _collect_overrides(args, SIM_FLAGS))
    return _simulate_with(config, "simulate")


def cmd_heat_simulate(args) -> int:
    model_name = {"semilinear": "heat-semilinear",
                  "quasilinear": "heat-quasilinear",
                  "periodic": "heat-periodic"}[args.kind]
    config = parse_config(args.config, _collect_overrides(
        args, HEAT_FLAGS, base=[f"model={model_name}"]))
    return _simulate_with(config, "heat simulate")


# -------------------------------------------------------- spectral-bound

def cmd_spectral_bound(args) -> int:
    base = ["grid.periodic=false"] if args.open_strip else []
    mapping = [("nu", "cloud.nu"), ("eta", "cloud.eta"), ("beta", "cloud.beta"),
               ("lx", "grid.lx"), ("nx", "grid.nx"), ("ny", "grid.ny"),
               ("out", "run.out")]
    config = parse_config(args.config,
                          _collect_overrides(args, mapping, base=base))
    geometry = _geometry(config)
    coeffs = _cloud_coeffs(config)
    n_max = args.n_max if args.n_max is not None else geometry.nx // 2

    rows = []
    bound = -math.inf
    worst_condition = 0.0
    defective = []
    for n in range(n_max + 1):
        op = assemble_mode(n, coeffs, geometry)
        idx = int(np.argmax(op.eigenvalues.real))
        top = op.eigenvalues[idx]
        rows.append((n, top.real, top.imag))
        bound = max(bound, float(top.real))
        worst_condition = max(worst_condition, op.condition)
        if op.defective:
            defective.append(n)

    if geometry.periodic_x:
        analytic = -periodic_stability_condition(coeffs).margin
    else:
        analytic = analytic_bound_nonperiodic(coeffs)

    out_dir = config.run_out
    write_csv(os.path.join(out_dir, "modes.csv"),
              ["n", "re_lambda_max", "im_lambda_at_max"],
              [np.array([r[0] for r in rows], dtype=float),
               np.array([r[1] for r in rows]),
               np.array([r[2] for r in rows])])

    summary = _summary_skeleton("spectral-bound", config)
    summary["numeric_bound"] = bound
    summary["analytic_bound"] = analytic
    summary["n_max"] = n_max
    summary["periodic"] = geometry.periodic_x
    summary["max_eigenvector_condition"] = worst_condition
    summary["defective_modes"] = defective
    path = _write_summary(out_dir, summary)

    print(f"spectral bound {bound:.10g} (analytic bound {analytic:.10g}) "
          f"-> {path}")
    return EXIT_OK


# ------------------------------------------------------------ decay-test

def cmd_decay_test(args) -> int:
    mapping = [("nu", "cloud.nu"), ("eta", "cloud.eta"), ("beta", "cloud.beta"),
               ("t_end", "solver.t_end"), ("dt", "solver.dt"),
               ("amplitude", "init.amplitude"), ("seed", "run.seed"),
               ("init", "init.kind"), ("out", "run.out")]
    config = parse_config(args.config, _collect_overrides(
        args, mapping, base=["model=cloud", "solver.t_end=5.0"]))
    if not config.grid_periodic:
        raise ConfigError("grid.periodic: the decay test runs on the "
                          "periodic strip; set grid.periodic = true")
    coeffs = _cloud_coeffs(config)
    check = periodic_stability_condition(coeffs)
    if not check.satisfied:
        raise ConfigError(
            "cloud coefficients violate the decay condition "
            "eta + beta^2/(16 nu) < pi^2 nu "
            f"(margin {check.margin:.6g}); no exponential decay to verify")

    model, u0, _, _ = _build_model_and_state(config)
    if not np.any(u0):
        raise ConfigError("init.kind: decay test needs nonzero initial data")
    u0_h1 = model.norm(u0, 1.0)
    trajectory = run_simulation(model, u0, _solver_config(config))

    out_dir = config.run_out
    write_series(os.path.join(out_dir, "series.csv"), trajectory)

    summary = _summary_skeleton("decay-test", config)
    summary["stability_margin"] = check.margin
    summary["initial_h1"] = u0_h1
    summary["blowup"] = (
        None if not trajectory.flagged
        else {"time": trajectory.blowup_time,
              "reason": trajectory.blowup_reason})
    fitted = None if trajectory.flagged else _fit_record(
        trajectory, 1.0, min(1.0, 0.2 * config.solver_t_end))
    summary["fitted"] = fitted
    if fitted is not None and fitted["rate"] > 0.0:
        # sup_t e^{rate t / 2} (|u|_H1 + t^{1/4} |u|_H1.5), the weighted
        # quantity the mild-solution bound controls by a fixed multiple
        # of the initial H1 norm
        t = trajectory.times
        quotient = np.exp(0.5 * fitted["rate"] * t) \
            * (trajectory.norms[1.0] + trajectory.weighted)
        summary["weighted_sup"] = float(np.max(quotient))
        summary["bound_factor"] = float(np.max(quotient) / u0_h1)
        summary["decays"] = True
    else:
        summary["weighted_sup"] = None
        summary["bound_factor"] = None
        summary["decays"] = False
    path = _write_summary(out_dir, summary)

    rate = fitted["rate"] if fitted else float("nan")
    print(f"fitted decay rate {rate:.6g} "
          f"(guaranteed margin {check.margin:.6g}) -> {path}")
    return EXIT_OK


# ---------------------------------------------------------- scaling-test

def cmd_scaling_test(args) -> int:
    mapping = [("kappa", "heat.kappa"), ("diffusion", "heat.diffusion"),
               ("t_end", "solver.t_end"), ("dt", "solver.dt"),
               ("amplitude", "init.amplitude"), ("half_width", "grid.half_width"),
               ("n", "grid.n"), ("out", "run.out")]
    base = [f"model=heat-periodic", f"heat.kind={args.kind}",
            "heat.kappa=5.0", "solver.t_end=0.5", "init.amplitude=0.5"]
    config = parse_config(args.config,
                          _collect_overrides(args, mapping, base=base))

    grid = PeriodicGrid(half_width=config.grid_half_width, n=config.grid_n)
    u0 = config.init_amplitude * np.exp(-0.5 * grid.nodes ** 2)
    solver_cfg = SolverConfig(dt=config.solver_dt, t_end=config.solver_t_end,
                              integrator=config.solver_integrator,
                              monitor_sigmas=(0.0,))

    reports = {}
    for label, nonlinear in (("nonlinear", True), ("linear", False)):
        report = scaling_roundtrip_test(
            u0, args.lam, config.solver_t_end, solver_cfg, grid,
            model_kind=config.heat_kind, kappa=config.heat_kappa,
            diffusion=config.heat_diffusion, nonlinear=nonlinear)
        reports[label] = {"discrepancy": report.discrepancy,
                          "reference_norm": report.reference_norm}

    summary = _summary_skeleton("scaling-test", config)
    summary["lambda"] = args.lam
    summary["kind"] = config.heat_kind
    summary["kappa"] = config.heat_kappa
    summary["nonlinear"] = reports["nonlinear"]
    summary["linear"] = reports["linear"]
    path = _write_summary(config.run_out, summary)

    print(f"scaling roundtrip at lambda={args.lam:g}: nonlinear "
          f"{reports['nonlinear']['discrepancy']:.3e}, pure heat "
          f"{reports['linear']['discrepancy']:.3e} -> {path}")
    return EXIT_OK


# ------------------------------------------------------------------ lab

def cmd_lab_contraction(args) -> int:
    report = contraction_experiment(dim=args.dim, seed=args.seed,
                                    quasilinear=args.quasilinear)
    payload = {"version": __version__, "command": "lab contraction"}
    payload.update(report)
    path = os.path.join(args.out, "summary.json")
    write_json(path, payload)
    print(json.dumps(payload, sort_keys=True, indent=2))
    return EXIT_OK


def cmd_lab_decay(args) -> int:
    report = decay_experiment(dim=args.dim, seed=args.seed, varpi=args.varpi,
                              epsilon=args.epsilon)
    payload = {"version": __version__, "command": "lab decay"}
    payload.update(report)
    path = os.path.join(args.out, "summary.json")
    write_json(path, payload)
    print(json.dumps(payload, sort_keys=True, indent=2))
    return EXIT_OK


# ------------------------------------------------------------ exponents

def cmd_exponents(args) -> int:
    if args.kind == "semilinear":
        recipe = semilinear_recipe(args.n, args.p, args.kappa)
    else:
        recipe = quasilinear_recipe(args.n, args.p, args.kappa, args.tau)

    payload = {
        "version": __version__,
        "command": "exponents",
        "kind": args.kind,
        "n": recipe.n, "p": recipe.p, "kappa": recipe.kappa_exp,
        "s_c": recipe.s_c, "s": recipe.s, "mu": recipe.mu,
        "exponents": {
            "gamma": recipe.exponents.gamma,
            "alpha": recipe.exponents.alpha,
            "beta": recipe.exponents.beta_exp,
            "xi": recipe.exponents.xi,
            "q": recipe.exponents.q,
            "mu": recipe.exponents.mu,
        },
    }
    if args.kind == "quasilinear":
        payload["tau"] = recipe.tau
        payload["s_bar"] = recipe.s_bar
        payload["theta_holder"] = recipe.theta_holder
    if args.out is not None:
        write_json(os.path.join(args.out, "summary.json"), payload)
    print(json.dumps(payload, sort_keys=True, indent=2))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _add_config_flags(parser, default_out=None):
    parser.add_argument("--config", metavar="FILE",
                        help="key = value configuration file")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE",
                        default=[], help="override one configuration key")
    parser.add_argument("--out", default=default_out,
                        help="run directory for outputs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mildflow",
        description="spectral mild-solution simulator and verification lab "
                    "for critical parabolic equations")
    parser.add_argument("--version", action="version",
                        version=f"mildflow {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="time-march the configured model")
    _add_config_flags(p)
    p.add_argument("--model", choices=MODELS)
    p.add_argument("--nu", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--integrator", choices=("etdrk2", "exp_euler"))
    p.add_argument("--record-every", dest="record_every", type=int)
    p.add_argument("--snapshot-every", dest="snapshot_every", type=int)
    p.add_argument("--init", choices=("zero", "mode", "random"))
    p.add_argument("--amplitude", type=float)
    p.add_argument("--seed", type=int)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("spectral-bound",
                       help="max real part of the mode-operator spectra")
    _add_config_flags(p)
    p.add_argument("--nu", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--open", dest="open_strip", action="store_true",
                   help="use the truncated open strip instead of periodic")
    p.add_argument("--lx", type=float, help="strip length for --open")
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--n-max", dest="n_max", type=int,
                   help="largest mode index to assemble")
    p.set_defaults(handler=cmd_spectral_bound)

    p = sub.add_parser("decay-test",
                       help="verify exponential decay on the periodic strip")
    _add_config_flags(p)
    p.add_argument("--nu", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--amplitude", type=float)
    p.add_argument("--init", choices=("mode", "random"))
    p.add_argument("--seed", type=int)
    p.set_defaults(handler=cmd_decay_test)

    p = sub.add_parser("scaling-test",
                       help="self-similar scaling roundtrip on the line")
    _add_config_flags(p)
    p.add_argument("--lambda", dest="lam", type=float, default=2.0,
                   help="scaling factor")
    p.add_argument("--kind", choices=("semilinear", "quasilinear"),
                   default="semilinear")
    p.add_argument("--kappa", type=float)
    p.add_argument("--diffusion", type=float)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--amplitude", type=float)
    p.add_argument("--half-width", dest="half_width", type=float)
    p.add_argument("--n", type=int, help="grid points on the periodic line")
    p.set_defaults(handler=cmd_scaling_test)

    p = sub.add_parser("lab", help="matrix fixed-point laboratory")
    lab_sub = p.add_subparsers(dest="lab_command", required=True)

    q = lab_sub.add_parser("contraction",
                           help="select contraction parameters and iterate")
    q.add_argument("--dim", type=int, default=8)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--quasilinear", action="store_true")
    q.add_argument("--out", default="run")
    q.set_defaults(handler=cmd_lab_contraction)

    q = lab_sub.add_parser("decay",
                           help="weighted exponential-decay verification")
    q.add_argument("--dim", type=int, default=6)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--varpi", type=float, default=None,
                   help="decay rate to verify (default: half the spectral gap)")
    q.add_argument("--epsilon", type=float, default=0.5)
    q.add_argument("--out", default="run")
    q.set_defaults(handler=cmd_lab_decay)

    p = sub.add_parser("exponents",
                       help="critical exponent recipes for the heat models")
    p.add_argument("kind", choices=("semilinear", "quasilinear"))
    p.add_argument("--n", type=int, default=1, help="space dimension")
    p.add_argument("--p", type=float, default=2.0, help="Lebesgue exponent")
    p.add_argument("--kappa", type=float, default=6.0,
                   help="nonlinearity power")
    p.add_argument("--tau", type=float, default=0.27,
                   help="Hoelder index (quasilinear only)")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_exponents)

    p = sub.add_parser("heat", help="one-dimensional heat model runs")
    heat_sub = p.add_subparsers(dest="heat_command", required=True)

    q = heat_sub.add_parser("simulate", help="time-march a heat model")
    _add_config_flags(q)
    q.add_argument("--kind", choices=("semilinear", "quasilinear", "periodic"),
                   default="semilinear")
    q.add_argument("--kappa", type=float)
    q.add_argument("--p", type=float)
    q.add_argument("--tau", type=float)
    q.add_argument("--diffusion", type=float)
    q.add_argument("--intervals", type=int)
    q.add_argument("--points", type=int)
    q.add_argument("--t-end", dest="t_end", type=float)
    q.add_argument("--dt", type=float)
    q.add_argument("--integrator", choices=("etdrk2", "exp_euler"))
    q.add_argument("--record-every", dest="record_every", type=int)
    q.add_argument("--snapshot-every", dest="snapshot_every", type=int)
    q.add_argument("--init", choices=("zero", "mode", "random"))
    q.add_argument("--amplitude", type=float)
    q.add_argument("--seed", type=int)
    q.set_defaults(handler=cmd_heat_simulate)

    q = heat_sub.add_parser("scaling-test",
                            help="scaling roundtrip for the periodic model")
    _add_config_flags(q)
    q.add_argument("--lambda", dest="lam", type=float, default=2.0)
    q.add_argument("--kind", choices=("semilinear", "quasilinear"),
                   default="semilinear")
    q.add_argument("--kappa", type=float)
    q.add_argument("--diffusion", type=float)
    q.add_argument("--t-end", dest="t_end", type=float)
    q.add_argument("--dt", type=float)
    q.add_argument("--amplitude", type=float)
    q.add_argument("--half-width", dest="half_width", type=float)
    q.add_argument("--n", type=int)
    q.set_defaults(handler=cmd_scaling_test)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except (ConfigError, ExponentError, InfeasibleProblem) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except (InstabilityError, FixedPointDivergence, FloatingPointError,
            RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
