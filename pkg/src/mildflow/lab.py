"""Matrix-scale laboratory for the weighted fixed-point contraction argument.

A problem couples a dense symmetric negative-definite generator A on R^m
with a superlinear nonlinearity on the fractional-power ladder
||x||_theta = ||(-A)^theta x||_2.  The lab estimates the semigroup
constants by sampling, selects the smallness parameters (L, r, T) by
closed-form inversion of the contraction inequalities, produces the mild
solution by Picard iteration so every contraction ratio is observable,
and checks the exponential-decay estimate over a sweep of initial-value
scales.

Everything here is finite-dimensional and self-adjoint on purpose: the
fractional powers are exact, so the only gaps between theory and
measurement are the sampled sups (covered by safety factors) and the
graded-mesh discretization of the weighted metric (a documented lower
bound of the continuum metric).
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .exponents import BetaConstants, ExponentSet
from .propagators import DensePropagator
from .solver import SolverConfig, picard_solve, run_simulation

__all__ = [
    "ContractionParameters",
    "DecayReport",
    "DecayScaleResult",
    "FixedPointDivergence",
    "FixedPointProblem",
    "InfeasibleProblem",
    "SemigroupConstants",
    "check_contraction_inequalities",
    "contraction_experiment",
    "decay_experiment",
    "estimate_semigroup_constants",
    "fractional_norm",
    "random_problem",
    "run_fixed_point",
    "select_parameters",
    "tail_profile",
    "verify_decay",
]

# Sampled sups understate the true constants; selection overshoots them.
SUP_SAFETY = 1.1
SELECT_SAFETY = 0.9
T_FLOOR = 1e-12
L_FLOOR = 1e-8


class InfeasibleProblem(ValueError):
    """No admissible smallness parameters; names the binding inequality."""

    def __init__(self, binding: str, message: str):
        super().__init__(message)
        self.binding = binding


class FixedPointDivergence(RuntimeError):
    """Picard iteration failed to contract; carries the ratio history."""

    def __init__(self, message: str, ratios: np.ndarray):
        super().__init__(message)
        self.ratios = np.asarray(ratios)


def fractional_norm(generator, theta: float, vector) -> float:
    """Norm of (-A)^theta x for a symmetric negative-definite A.

    The ladder norm is computed exactly through the eigendecomposition;
    theta = 0 is the Euclidean norm, theta = 1 the graph norm of A.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    a = np.asarray(generator, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("generator must be a square matrix")
    scale = max(1.0, float(np.abs(a).max()))
    if not np.allclose(a, a.T, atol=1e-12 * scale):
        raise ValueError("generator must be symmetric")
    lam, vecs = np.linalg.eigh(0.5 * (a + a.T))
    if lam.max() >= 0.0:
        raise ValueError("generator must be negative definite")
    coeff = vecs.T @ np.asarray(vector, dtype=float)
    return float(np.linalg.norm((-lam) ** theta * coeff))


@dataclass
class FixedPointProblem:
    """Generator, nonlinearity and exponent data for one contraction run.

    The default nonlinearity is f(u) = epsilon ||u||_xi^(q-1) u; a user
    hook replaces it wholesale but must still vanish at the origin.
    lipschitz_n, when left unset, is estimated by pair sampling on the
    ball of radius ball_radius at the xi level.
    """

    generator: np.ndarray
    exponents: ExponentSet
    epsilon: float = 1.0
    ball_radius: float = 1.0
    lipschitz_n: Optional[float] = None
    nonlinearity: Optional[Callable] = None

    def __post_init__(self):
        a = np.asarray(self.generator, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("generator must be a square matrix")
        scale = max(1.0, float(np.abs(a).max()))
        if not np.allclose(a, a.T, atol=1e-12 * scale):
            raise ValueError("generator must be symmetric")
        self.generator = 0.5 * (a + a.T)
        lam, vecs = np.linalg.eigh(self.generator)
        if lam.max() >= 0.0:
            raise ValueError("generator must be negative definite")
        self._decay_rates = -lam
        self._vectors = vecs
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be nonnegative")
        if self.ball_radius <= 0.0:
            raise ValueError("ball_radius must be positive")
        self._propagator = None

    @property
    def dimension(self) -> int:
        return self.generator.shape[0]

    @property
    def spectrum(self) -> np.ndarray:
        """Positive decay rates, aligned with the cached eigenbasis."""
        return self._decay_rates

    @property
    def lambda_min(self) -> float:
        return float(self._decay_rates.min())

    @property
    def lambda_max(self) -> float:
        return float(self._decay_rates.max())

    @property
    def propagator(self) -> DensePropagator:
        if self._propagator is None:
            self._propagator = DensePropagator(self.generator)
        return self._propagator

    def eigen_coefficients(self, vector) -> np.ndarray:
        return self._vectors.T @ np.asarray(vector, dtype=float)

    def norm(self, vector, theta: float) -> float:
        if not 0.0 <= theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {theta}")
        coeff = self._vectors.T @ np.asarray(vector, dtype=float)
        return float(np.linalg.norm(self._decay_rates ** theta * coeff))

    def f(self, u) -> np.ndarray:
        if self.nonlinearity is not None:
            return np.asarray(self.nonlinearity(u))
        u = np.asarray(u, dtype=float)
        strength = self.norm(u, self.exponents.xi) ** (self.exponents.q - 1.0)
        return self.epsilon * strength * u

    def lipschitz(self, samples: int = 400, rng=None) -> float:
        """Sampled Lipschitz constant of f on the xi-ball, with safety.

        Ratio ||f(w)-f(v)||_gamma / ((||w||_xi^(q-1)+||v||_xi^(q-1))
        ||w-v||_xi) maximized over random pairs in the ball, one third of
        them nearly coincident to probe the local regime.
        """
        if self.lipschitz_n is not None:
            return self.lipschitz_n
        rng = np.random.default_rng(0) if rng is None else rng
        exps = self.exponents
        best = 0.0
        for trial in range(samples):
            w = self._random_ball_point(rng)
            if trial % 3 == 0:
                v = w + 1e-4 * self.ball_radius * rng.standard_normal(w.shape)
            else:
                v = self._random_ball_point(rng)
            gap = self.norm(w - v, exps.xi)
            denom = (self.norm(w, exps.xi) ** (exps.q - 1.0)
                     + self.norm(v, exps.xi) ** (exps.q - 1.0)) * gap
            if denom < 1e-30:
                continue
            best = max(best, self.norm(self.f(w) - self.f(v), exps.gamma) / denom)
        self.lipschitz_n = SUP_SAFETY * max(best, 1e-12)
        return self.lipschitz_n

    def _random_ball_point(self, rng) -> np.ndarray:
        x = rng.standard_normal(self.dimension)
        nrm = self.norm(x, self.exponents.xi)
        return x * (self.ball_radius * rng.uniform(0.05, 1.0) / max(nrm, 1e-30))


@dataclass(frozen=True)
class SemigroupConstants:
    """Sampled operator-norm constants of the analytic semigroup.

    omega0 bounds t^(theta-vartheta) ||(-A)^theta e^{tA} (-A)^-vartheta||
    over every sampled pair; omega1 and omega2 enter only the runs with a
    state-dependent generator budget and stay None otherwise.
    """

    omega0: float
    omega1: Optional[float] = None
    omega2: Optional[float] = None
    sampled_pairs: tuple = ()

    def __post_init__(self):
        if self.omega0 < 1.0:
            raise ValueError(f"omega0 must be at least 1, got {self.omega0}")
        for name, value in (("omega1", self.omega1), ("omega2", self.omega2)):
            if value is not None and value < 1.0:
                raise ValueError(f"{name} must be at least 1, got {value}")


def estimate_semigroup_constants(problem: FixedPointProblem,
                                 theta_pairs=None, time_grid=None,
                                 omega1: Optional[float] = None,
                                 omega2: Optional[float] = None
                                 ) -> SemigroupConstants:
    """Sample t^(theta-vartheta) ||(-A)^theta e^{tA} (-A)^-vartheta||_2.

    For a self-adjoint generator the norm is max_k rate_k^(theta-vartheta)
    e^{-rate_k t}, evaluated on a log time grid; the t -> 0 limit (exactly
    1 when theta = vartheta, 0 otherwise) is included so contraction
    pairs come out sharp.  omega0 aggregates all pairs with a 1.1 safety
    margin and is clamped to at least 1.
    """
    exps = problem.exponents
    if theta_pairs is None:
        theta_pairs = [
            (0.0, 0.0),
            (exps.alpha, exps.gamma),
            (exps.xi, exps.gamma),
            (exps.xi, exps.alpha),
            (exps.contraction_level, exps.gamma),
        ]
        theta_pairs = sorted(set(theta_pairs))
    rates = problem.spectrum
    if time_grid is None:
        time_grid = np.geomspace(1e-6 / problem.lambda_max,
                                 50.0 / problem.lambda_min, 600)
    else:
        time_grid = np.asarray(time_grid, dtype=float)
        if time_grid.min() <= 0.0:
            raise ValueError("time grid must be strictly positive")

    sampled = []
    overall = 0.0
    for theta, vartheta in theta_pairs:
        if theta < vartheta:
            raise ValueError(
                f"sampled pair needs theta >= vartheta, got ({theta}, {vartheta})")
        delta = theta - vartheta
        values = (time_grid[:, None] ** delta
                  * rates[None, :] ** delta
                  * np.exp(-time_grid[:, None] * rates[None, :]))
        sup = float(values.max())
        if delta == 0.0:
            sup = max(sup, 1.0)
        sampled.append((float(theta), float(vartheta), sup))
        overall = max(overall, sup)

    quasilinear = exps.beta_exp is not None
    if quasilinear:
        omega1 = 1.0 if omega1 is None else omega1
        omega2 = 1.0 if omega2 is None else omega2
    return SemigroupConstants(
        omega0=max(1.0, SUP_SAFETY * overall),
        omega1=omega1, omega2=omega2, sampled_pairs=tuple(sampled))


@dataclass(frozen=True)
class ContractionParameters:
    """Smallness parameters of the contraction window, all in (0, 1)."""

    L: float
    r: float
    T: float

    def __post_init__(self):
        for name, value in (("L", self.L), ("r", self.r), ("T", self.T)):
            if not 0.0 < value < 1.0:
                raise ValueError(
                    f"{name} must lie strictly in (0, 1), got {value}")


def tail_profile(problem: FixedPointProblem, u0, t_max: float = 1.0,
                 points: int = 1200) -> Callable[[float], float]:
    """Running sup of t^mu ||e^{tA} u0||_xi, monotone by construction.

    Evaluated once on a fixed log grid and accumulated, so the bisection
    in select_parameters sees a genuinely nondecreasing profile.
    """
    exps = problem.exponents
    rates = problem.spectrum
    hat = problem.eigen_coefficients(u0)
    ts = np.geomspace(T_FLOOR, t_max, points)
    modes = (rates[None, :] ** exps.xi * np.exp(-ts[:, None] * rates[None, :])
             * hat[None, :])
    values = ts ** exps.mu * np.sqrt((modes ** 2).sum(axis=1))
    running = np.maximum.accumulate(values)

    def profile(t_end: float) -> float:
        direct = t_end ** exps.mu * np.sqrt(
            ((rates ** exps.xi * np.exp(-t_end * rates) * hat) ** 2).sum())
        idx = np.searchsorted(ts, t_end, side="right") - 1
        return float(max(direct, running[idx] if idx >= 0 else 0.0))

    return profile


def _budget_terms(constants: SemigroupConstants, exponents: ExponentSet,
                  beta_consts: BetaConstants):
    quasilinear = exponents.beta_exp is not None
    w0 = constants.omega0
    if quasilinear:
        if constants.omega1 is None or constants.omega2 is None:
            raise ValueError(
                "selection with a quasilinear exponent set needs omega1 and omega2")
        w1, w2 = constants.omega1, constants.omega2
    else:
        w1 = w2 = 0.0
    return quasilinear, w0, w1, w2, beta_consts.contraction_pair_sum


def check_contraction_inequalities(params: ContractionParameters,
                                   constants: SemigroupConstants,
                                   exponents: ExponentSet,
                                   n_star: float,
                                   beta_consts: Optional[BetaConstants] = None,
                                   m_profile: Optional[Callable] = None,
                                   reference_alpha_norm: float = 0.0,
                                   initial_xi_norm: float = 0.0) -> dict:
    """Slack (lhs - rhs, nonpositive when satisfied) of every inequality.

    The time-regularity window exponent is eliminated: asking for some
    admissible rho with T^rho <= r turns the window pair into the
    monotone conditions T^(alpha-beta) < r and
    coefficient * T^(alpha-beta) / r <= 1.
    """
    if beta_consts is None:
        beta_consts = BetaConstants.from_exponents(exponents)
    quasilinear, w0, w1, w2, pair_sum = _budget_terms(
        constants, exponents, beta_consts)
    L, r, T = params.L, params.r, params.T
    q = exponents.q

    slacks = {
        "lipschitz_budget":
            (2.0 * w0 + w1) * n_star * pair_sum * L ** (q - 1.0) - 0.25,
        "ball_radius":
            r * (w0 + 2.0 * w1 * reference_alpha_norm) - L / 4.0,
    }
    if m_profile is not None:
        slacks["tail_smallness"] = m_profile(T) - L / 4.0
    if quasilinear:
        window = T ** (exponents.alpha - exponents.beta_exp)
        coeff = (w2 * (reference_alpha_norm + r)
                 + w0 * n_star * (w2 * beta_consts.at_level("alpha")
                                  + beta_consts.at_level("beta_exp")))
        slacks["drift_radius"] = 4.0 * w1 * r - 0.125
        slacks["initial_weight"] = \
            w1 * initial_xi_norm * T ** exponents.mu - 1.0 / 16.0
        slacks["window_compatibility"] = window - r
        slacks["holder_budget"] = coeff * window / r - 1.0
    return slacks


def select_parameters(constants: SemigroupConstants, exponents: ExponentSet,
                      n_star: float,
                      beta_consts: Optional[BetaConstants] = None,
                      m_profile: Optional[Callable] = None,
                      reference_alpha_norm: float = 0.0,
                      initial_xi_norm: float = 0.0,
                      ball_radius: Optional[float] = None,
                      t_max: float = 0.99) -> ContractionParameters:
    """Invert the contraction inequalities for the largest (L, r, T).

    L comes from the Lipschitz budget in closed form, r from the ball
    inequalities given L, and T from bisection of the remaining monotone
    conditions (the tail profile M(T), the weighted initial-value term
    and, with a quasilinear exponent set, the time-regularity window).
    A 0.9 safety factor compensates the sampled constants.
    """
    if n_star <= 0.0:
        raise ValueError("n_star must be positive")
    if beta_consts is None:
        beta_consts = BetaConstants.from_exponents(exponents)
    quasilinear, w0, w1, w2, pair_sum = _budget_terms(
        constants, exponents, beta_consts)
    q = exponents.q

    bound = (1.0 / (4.0 * (2.0 * w0 + w1) * n_star * pair_sum)) \
        ** (1.0 / (q - 1.0))
    L = SELECT_SAFETY * min(1.0, bound)
    if L < L_FLOOR:
        raise InfeasibleProblem(
            "lipschitz_budget",
            "no usable contraction constant: the Lipschitz budget "
            f"(2*omega0+omega1)*N*(B_low+B_xi)*L^(q-1) <= 1/4 forces "
            f"L <= {bound:.3e}")

    r_caps = [L / (4.0 * (w0 + 2.0 * w1 * reference_alpha_norm)), 0.999]
    if quasilinear:
        r_caps.append(1.0 / (32.0 * w1))
    if ball_radius is not None:
        r_caps.append(ball_radius)
    r = SELECT_SAFETY * min(r_caps)

    profile = m_profile if m_profile is not None else (lambda _t: 0.0)
    if quasilinear:
        coeff = (w2 * (reference_alpha_norm + r)
                 + w0 * n_star * (w2 * beta_consts.at_level("alpha")
                                  + beta_consts.at_level("beta_exp")))

    def blocking(t_end: float) -> Optional[str]:
        if profile(t_end) > L / 4.0:
            return "tail_smallness"
        if quasilinear:
            if w1 * initial_xi_norm * t_end ** exponents.mu > 1.0 / 16.0:
                return "initial_weight"
            window = t_end ** (exponents.alpha - exponents.beta_exp)
            if window >= r:
                return "window_compatibility"
            if coeff * window / r > 1.0:
                return "holder_budget"
        return None

    if blocking(t_max) is None:
        T = t_max
    else:
        binding = blocking(T_FLOOR)
        if binding is not None:
            raise InfeasibleProblem(
                binding,
                f"no contraction window above T = {T_FLOOR}: inequality "
                f"'{binding}' already fails there")
        lo, hi = T_FLOOR, t_max
        for _ in range(200):
            mid = np.sqrt(lo * hi)
            if blocking(mid) is None:
                lo = mid
            else:
                hi = mid
        T = lo

    params = ContractionParameters(L=L, r=r, T=T)
    slacks = check_contraction_inequalities(
        params, constants, exponents, n_star, beta_consts, profile,
        reference_alpha_norm=reference_alpha_norm,
        initial_xi_norm=initial_xi_norm)
    worst = max(slacks.values())
    if worst > 1e-9:
        raise InfeasibleProblem(
            max(slacks, key=slacks.get),
            f"selection re-validation failed with slack {worst:.3e}")
    return params


def run_fixed_point(problem: FixedPointProblem, params: ContractionParameters,
                    u0, config: Optional[SolverConfig] = None):
    """Picard-iterate the mild-solution map inside the selected window.

    Returns the converged iteration record and the largest observed
    ratio of successive weighted distances, which estimates the
    contraction factor of the map on the ball.
    """
    exps = problem.exponents
    u0 = np.asarray(u0, dtype=float)
    fz = problem.f(np.zeros(problem.dimension))
    if problem.norm(fz, exps.gamma) > 1e-12:
        raise ValueError("nonlinearity must vanish at the origin")
    alpha_norm = problem.norm(u0, exps.alpha)
    if alpha_norm > params.r * (1.0 + 1e-12):
        raise ValueError(
            f"initial value outside the contraction ball: ||u0||_alpha = "
            f"{alpha_norm:.6e} exceeds r = {params.r:.6e}")
    if config is None:
        config = SolverConfig(picard_segments=96, picard_tol=1e-10,
                              picard_max_iter=60)
    result = picard_solve(
        u0, params.T, config, problem.propagator, problem.f, problem.norm,
        mu=exps.mu, sigma_sup=exps.contraction_level, sigma_weighted=exps.xi)
    ratios = result.contraction_ratios
    ratio = float(ratios.max()) if ratios.size else 0.0
    if not result.converged:
        raise FixedPointDivergence(
            f"Picard iteration did not settle within {config.picard_max_iter} "
            f"sweeps (last ratio {ratio:.3f})", ratios)
    return result, ratio


class _EvolutionModel:
    """Adapter exposing a FixedPointProblem to the time stepper."""

    def __init__(self, problem: FixedPointProblem):
        self.problem = problem
        self.propagator = problem.propagator

    def nonlinearity(self, state):
        return self.problem.f(state)

    def norm(self, state, sigma):
        return self.problem.norm(state, sigma)


@dataclass(frozen=True)
class DecayScaleResult:
    scale: float
    quotient: float
    bounded: bool
    blowup_time: Optional[float]


@dataclass(frozen=True)
class DecayReport:
    varpi: float
    t_end: float
    m_report: Optional[float]
    largest_passing_scale: Optional[float]
    scales: tuple


def verify_decay(problem: FixedPointProblem, varpi: float,
                 scales=(1e-3, 1e-2, 1e-1), direction=None,
                 dt: Optional[float] = None, rng=None) -> DecayReport:
    """Check the weighted exponential-decay estimate over a scale sweep.

    Each initial value scale*direction is evolved to T = 20/varpi and the
    quotient sup_t e^{varpi t} (||u||_alpha + t^mu ||u||_xi) / ||u0||_alpha
    recorded.  A scale whose quotient still grows near the horizon (or
    whose run hit the blow-up guard) is reported as outside the decay
    neighborhood rather than failed; m_report aggregates the passing
    scales only.
    """
    exps = problem.exponents
    lam_min = problem.lambda_min
    if not 0.0 < varpi < lam_min:
        raise ValueError(
            f"varpi must lie in (0, {lam_min:.6g}), got {varpi}")
    t_end = 20.0 / varpi
    if dt is None:
        dt = min(t_end / 2000.0, 0.2 / problem.lambda_max)
    if direction is None:
        rng = np.random.default_rng(0) if rng is None else rng
        direction = rng.standard_normal(problem.dimension)
    direction = np.asarray(direction, dtype=float)
    direction = direction / max(problem.norm(direction, exps.alpha), 1e-30)

    model = _EvolutionModel(problem)
    steps = int(round(t_end / dt))
    record_every = max(1, steps // 1500)
    records = []
    for scale in sorted(float(s) for s in scales):
        u0 = scale * direction
        config = SolverConfig(dt=dt, t_end=t_end, record_every=record_every,
                              monitor_sigmas=(exps.alpha, exps.xi))
        traj = run_simulation(model, u0, config)
        base = max(problem.norm(u0, exps.alpha), 1e-30)
        weight = np.exp(varpi * traj.times) * (
            traj.norms[exps.alpha]
            + traj.times ** exps.mu * traj.norms[exps.xi]) / base
        finite = weight[np.isfinite(weight)]
        quotient = float(finite.max()) if finite.size else float("inf")
        if traj.flagged or finite.size < weight.size:
            bounded = False
        else:
            head = weight[traj.times <= 0.6 * t_end]
            tail = weight[traj.times > 0.6 * t_end]
            grew = tail.size > 0 and tail.max() > 1.02 * max(
                head.max(), 1e-30)
            bounded = not grew
        records.append(DecayScaleResult(
            scale=scale, quotient=quotient, bounded=bounded,
            blowup_time=traj.blowup_time))

    passing = [rec for rec in records if rec.bounded]
    m_report = max((rec.quotient for rec in passing), default=None)
    largest = max((rec.scale for rec in passing), default=None)
    return DecayReport(varpi=varpi, t_end=t_end, m_report=m_report,
                       largest_passing_scale=largest, scales=tuple(records))


def random_problem(dim: int, rng, quasilinear: bool = False,
                   epsilon: Optional[float] = None) -> FixedPointProblem:
    """Random symmetric negative-definite problem with admissible exponents.

    Exponents are drawn so the critical identity holds exactly with
    q in roughly [1.8, 3.5]; rates live in [0.6, 6] to keep the ladder
    norms of the random data well scaled.
    """
    from .exponents import validate_exponents

    rates = np.sort(rng.uniform(0.6, 6.0, size=dim))
    basis, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    generator = -(basis * rates) @ basis.T
    generator = 0.5 * (generator + generator.T)

    gamma = rng.uniform(0.0, 0.25)
    alpha = rng.uniform(gamma + 0.2, 0.75)
    q_lo = max(1.8, (1.0 + gamma - alpha) / (0.98 - alpha) + 0.01)
    q = rng.uniform(q_lo, max(3.5, q_lo + 0.5))
    xi = alpha + (1.0 + gamma - alpha) / q
    beta_exp = gamma + 0.5 * (alpha - gamma) if quasilinear else None
    exps = validate_exponents(gamma, alpha, xi, q, beta_exp=beta_exp)

    if epsilon is None:
        epsilon = float(rng.uniform(0.2, 2.0))
    return FixedPointProblem(generator=generator, exponents=exps,
                             epsilon=epsilon, ball_radius=1.0)


def _plan(problem: FixedPointProblem, rng):
    """Constants, Lipschitz estimate and parameters for one problem."""
    constants = estimate_semigroup_constants(problem)
    n_star = problem.lipschitz(rng=rng)
    beta_consts = BetaConstants.from_exponents(problem.exponents)
    first = select_parameters(constants, problem.exponents, n_star,
                              beta_consts, ball_radius=problem.ball_radius)
    direction = rng.standard_normal(problem.dimension)
    direction /= max(problem.norm(direction, problem.exponents.alpha), 1e-30)
    u0 = 0.9 * first.r * direction
    params = select_parameters(
        constants, problem.exponents, n_star, beta_consts,
        m_profile=tail_profile(problem, u0),
        initial_xi_norm=problem.norm(u0, problem.exponents.xi),
        ball_radius=problem.ball_radius)
    return constants, n_star, beta_consts, params, u0


def contraction_experiment(dim: int = 8, seed: int = 0,
                           quasilinear: bool = False) -> dict:
    """Full pipeline on one random problem, reported as plain data."""
    rng = np.random.default_rng(seed)
    problem = random_problem(dim, rng, quasilinear=quasilinear)
    constants, n_star, beta_consts, params, u0 = _plan(problem, rng)
    result, ratio = run_fixed_point(problem, params, u0)
    slacks = check_contraction_inequalities(
        params, constants, problem.exponents, n_star, beta_consts,
        tail_profile(problem, u0),
        initial_xi_norm=problem.norm(u0, problem.exponents.xi))
    exps = problem.exponents
    return {
        "dim": dim,
        "seed": seed,
        "exponents": {"gamma": exps.gamma, "alpha": exps.alpha,
                      "xi": exps.xi, "q": exps.q, "beta": exps.beta_exp,
                      "mu": exps.mu},
        "spectrum": {"lambda_min": problem.lambda_min,
                     "lambda_max": problem.lambda_max},
        "constants": {"omega0": constants.omega0,
                      "omega1": constants.omega1,
                      "omega2": constants.omega2,
                      "lipschitz_n": n_star},
        "parameters": {"L": params.L, "r": params.r, "T": params.T},
        "inequalities": {name: {"slack": value, "satisfied": value <= 0.0}
                         for name, value in slacks.items()},
        "contraction_ratio": ratio,
        "iterations": result.iterations,
        "converged": bool(result.converged),
        "final_alpha_norm": problem.norm(result.final_state, exps.alpha),
    }


def decay_experiment(dim: int = 6, seed: int = 0,
                     varpi: Optional[float] = None,
                     epsilon: float = 0.5, scales=None) -> dict:
    """Decay sweep on one random semilinear problem, as plain data."""
    rng = np.random.default_rng(seed)
    problem = random_problem(dim, rng, epsilon=epsilon)
    constants = estimate_semigroup_constants(problem)
    if varpi is None:
        varpi = 0.5 * problem.lambda_min
    if scales is None:
        scales = (1e-3, 1e-2, 1e-1, 1.0)
    report = verify_decay(problem, varpi, scales=scales, rng=rng)
    return {
        "dim": dim,
        "seed": seed,
        "varpi": report.varpi,
        "t_end": report.t_end,
        "omega0": constants.omega0,
        "m_report": report.m_report,
        "largest_passing_scale": report.largest_passing_scale,
        "scales": [{"scale": rec.scale, "quotient": rec.quotient,
                    "bounded": rec.bounded, "blowup_time": rec.blowup_time}
                   for rec in report.scales],
    }
