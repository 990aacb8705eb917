"""Time integration for mild solutions.

Two stepping families share one trajectory recorder:

* exponential integrators (first-order exponential Euler and the
  two-stage second-order scheme) for autonomous generators, including a
  frozen-coefficient variant that reassembles the generator each step
  for quasilinear problems;
* Picard iteration for the integral fixed-point map itself, discretized
  by product integration of a piecewise-linear nonlinearity on a graded
  mesh clustered at t = 0 where the weighted norms live.

Blow-up is flagged, never silently integrated through: a trajectory
stops at the first nonfinite state, norm-threshold crossing, or
semigroup overflow, and carries the flag time and reason.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .propagators import InstabilityError, phi1, phi2

INTEGRATORS = ("exp_euler", "etdrk2")


@dataclass(frozen=True)
class SolverConfig:
    dt: float = 1e-3
    t_end: float = 1.0
    integrator: str = "etdrk2"
    record_every: int = 1
    snapshot_every: int = 0
    monitor_sigmas: tuple = (0.0, 1.0)
    weighted_sigma: Optional[float] = None
    weighted_mu: Optional[float] = None
    blowup_factor: float = 1e6
    blowup_threshold: Optional[float] = None
    picard_segments: int = 128
    picard_tol: float = 1e-10
    picard_max_iter: int = 50
    mesh_power: Optional[float] = None

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_end > 0.0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.integrator not in INTEGRATORS:
            raise ValueError(
                f"integrator must be one of {INTEGRATORS}, got {self.integrator!r}")
        if self.record_every < 1:
            raise ValueError("record_every must be at least 1")
        if self.picard_segments < 2:
            raise ValueError("picard_segments must be at least 2")


@dataclass
class Trajectory:
    """Recorded norm histories; arrays end at the blow-up flag if raised."""

    times: np.ndarray
    norms: dict
    f_norms: np.ndarray
    weighted: Optional[np.ndarray]
    final_state: np.ndarray
    final_time: float
    blowup_time: Optional[float] = None
    blowup_reason: Optional[str] = None
    snapshots: list = field(default_factory=list)

    @property
    def flagged(self) -> bool:
        return self.blowup_time is not None


def step_exponential(state, dt, propagator, nonlinearity,
                     method: str = "etdrk2"):
    """One exponential-integrator step; returns (new_state, f(state)).

    exp_euler:  u+ = e^{h A} u + h phi1(h A) f(u)
    etdrk2:     a  = e^{h A} u + h phi1(h A) f(u)
                u+ = a + h phi2(h A) (f(a) - f(u))
    """
    f0 = nonlinearity(state)
    stage = propagator.propagate(dt, state) + dt * propagator.phi1_action(dt, f0)
    if method == "exp_euler":
        return stage, f0
    if method != "etdrk2":
        raise ValueError(f"unknown integrator {method!r}")
    f_stage = nonlinearity(stage)
    return stage + dt * propagator.phi2_action(dt, f_stage - f0), f0


def _frozen_step(model, state, dt, method):
    prop = model.frozen_propagator(state)
    return step_exponential(state, dt, prop, model.nonlinearity, method)


def run_simulation(model, u0, config: SolverConfig) -> Trajectory:
    """March the model from u0, recording norms and watching for blow-up.

    Models with a fixed .propagator use it every step; otherwise the
    model must supply frozen_propagator(state) and the generator is
    reassembled from the current state each step.
    """
    autonomous = hasattr(model, "propagator")
    state = np.array(u0, copy=True)
    n_steps = int(round(config.t_end / config.dt))
    threshold = config.blowup_threshold
    if threshold is None:
        base = model.norm(state, config.monitor_sigmas[0])
        threshold = config.blowup_factor * max(base, 1.0)

    times, f_norms, weighted = [], [], []
    norm_series = {s: [] for s in config.monitor_sigmas}
    snapshots = []
    blowup_time = None
    blowup_reason = None
    t = 0.0
    last_f = model.nonlinearity(state)

    def record(t_now, st, f_val):
        times.append(t_now)
        for s in config.monitor_sigmas:
            norm_series[s].append(model.norm(st, s))
        f_norms.append(model.norm(f_val, 0.0))
        if config.weighted_sigma is not None:
            mu = config.weighted_mu if config.weighted_mu is not None else 0.0
            weighted.append(t_now ** mu * model.norm(st, config.weighted_sigma)
                            if t_now > 0.0 else 0.0)

    record(0.0, state, last_f)
    if config.snapshot_every:
        snapshots.append((0.0, state.copy()))

    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, n_steps + 1):
            try:
                if autonomous:
                    new_state, last_f = step_exponential(
                        state, config.dt, model.propagator,
                        model.nonlinearity, config.integrator)
                else:
                    new_state, last_f = _frozen_step(
                        model, state, config.dt, config.integrator)
            except InstabilityError:
                blowup_time, blowup_reason = t, "semigroup-overflow"
                break
            except FloatingPointError:
                blowup_time, blowup_reason = t, "nonfinite"
                break
            t = k * config.dt
            if not np.all(np.isfinite(new_state)):
                blowup_time, blowup_reason = t, "nonfinite"
                break
            state = new_state
            monitored = model.norm(state, config.monitor_sigmas[0])
            if not np.isfinite(monitored) or monitored > threshold:
                f_now = model.nonlinearity(state)
                record(t, state, f_now)
                blowup_time, blowup_reason = t, "norm-threshold"
                break
            if k % config.record_every == 0 or k == n_steps:
                record(t, state, model.nonlinearity(state))
            if config.snapshot_every and k % config.snapshot_every == 0:
                snapshots.append((t, state.copy()))

    return Trajectory(
        times=np.asarray(times),
        norms={s: np.asarray(v) for s, v in norm_series.items()},
        f_norms=np.asarray(f_norms),
        weighted=np.asarray(weighted) if config.weighted_sigma is not None else None,
        final_state=state,
        final_time=t,
        blowup_time=blowup_time,
        blowup_reason=blowup_reason,
        snapshots=snapshots,
    )


def graded_mesh(t_end: float, segments: int, power: float) -> np.ndarray:
    """Nodes t_k = T (k/K)^power, clustered at zero for power > 1."""
    return t_end * (np.arange(segments + 1) / segments) ** power


@dataclass
class PicardResult:
    times: np.ndarray
    states: list
    iterations: int
    converged: bool
    distances: np.ndarray
    contraction_ratios: np.ndarray

    @property
    def final_state(self):
        return self.states[-1]


def picard_solve(u0, t_end: float, config: SolverConfig, propagator,
                 nonlinearity: Callable, norm_fn: Callable,
                 mu: float = 0.0, sigma_sup: float = 0.0,
                 sigma_weighted: Optional[float] = None) -> PicardResult:
    """Iterate the mild-solution map to a fixed point on a graded mesh.

    The map F(u)(t) = e^{tA} u0 + int_0^t e^{(t-s)A} f(u(s)) ds is
    discretized by exact product integration of the piecewise-linear
    interpolant of f(u): with g_j = h phi1(h lam) f_j + h phi2(h lam)
    (f_{j+1} - f_j) on segment j, the running sum obeys the stable
    forward recursion S_{k+1} = e^{(t_{k+1}-t_k) lam} S_k + g_k, so a
    sweep costs one nonlinearity evaluation per node.

    Successive iterates are compared in the sup norm at level sigma_sup
    plus the t^mu weighted sup at level sigma_weighted; convergence
    ratios of that distance estimate the contraction factor.
    """
    if getattr(propagator, "defective", False) or \
            getattr(propagator, "any_defective", False):
        raise ValueError("Picard iteration needs a diagonalizable generator")
    power = config.mesh_power if config.mesh_power is not None else 2.0
    tau = graded_mesh(t_end, config.picard_segments, power)
    h = np.diff(tau)
    lam = propagator.lam
    want_real = not np.iscomplexobj(np.asarray(u0))
    u0_hat = propagator.to_eigen(np.asarray(u0))

    def reconstruct(coeffs):
        out = propagator.from_eigen(coeffs)
        return out.real if want_real and np.iscomplexobj(out) else out

    def distance(states_a, states_b):
        d_sup = 0.0
        d_weight = 0.0
        for t_k, a, b in zip(tau, states_a, states_b):
            diff = a - b
            d_sup = max(d_sup, norm_fn(diff, sigma_sup))
            if sigma_weighted is not None and t_k > 0.0:
                d_weight = max(d_weight, t_k ** mu * norm_fn(diff, sigma_weighted))
        return d_sup + d_weight

    # first iterate: the free semigroup orbit of the initial value
    states = [reconstruct(np.exp(t_k * lam) * u0_hat) for t_k in tau]
    distances = []
    converged = False
    iterations = 0
    scale = max(norm_fn(np.asarray(u0), sigma_sup), 1e-30)
    for iterations in range(1, config.picard_max_iter + 1):
        f_hat = [propagator.to_eigen(nonlinearity(s)) for s in states]
        new_states = [states[0]]
        running = np.zeros(u0_hat.shape, dtype=complex)
        for j in range(len(h)):
            zj = h[j] * lam
            g = h[j] * (phi1(zj) * f_hat[j]
                        + phi2(zj) * (f_hat[j + 1] - f_hat[j]))
            running = np.exp(zj) * running + g
            new_states.append(
                reconstruct(np.exp(tau[j + 1] * lam) * u0_hat + running))
        dist = distance(new_states, states)
        distances.append(dist)
        states = new_states
        if dist < config.picard_tol * scale:
            converged = True
            break
    distances = np.asarray(distances)
    ratios = distances[1:] / np.maximum(distances[:-1], 1e-300)
    return PicardResult(times=tau, states=states, iterations=iterations,
                        converged=converged, distances=distances,
                        contraction_ratios=ratios)


@dataclass(frozen=True)
class DecayFit:
    rate: float
    amplitude: float
    residual: float
    samples: int


def fit_decay_rate(trajectory: Trajectory, sigma: float,
                   t_min: float = 0.0) -> DecayFit:
    """Least-squares fit of norm(t) ~ amplitude * exp(-rate t).

    Only samples with t >= t_min and positive norm enter; at least ten
    are required for a meaningful slope.
    """
    if sigma not in trajectory.norms:
        raise KeyError(f"sigma {sigma} was not monitored")
    t = trajectory.times
    v = trajectory.norms[sigma]
    mask = (t >= t_min) & (v > 0.0) & np.isfinite(v)
    t, v = t[mask], v[mask]
    if t.size < 10:
        raise ValueError(
            f"decay fit needs at least 10 usable samples, got {t.size}")
    coeff, res = np.polyfit(t, np.log(v), 1, full=True)[:2]
    residual = float(res[0]) if res.size else 0.0
    return DecayFit(rate=-float(coeff[0]), amplitude=float(np.exp(coeff[1])),
                    residual=residual, samples=int(t.size))
