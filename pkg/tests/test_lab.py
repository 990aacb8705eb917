"""Tests for the matrix-scale fixed-point laboratory."""

import math

import numpy as np
import pytest

from mildflow.exponents import BetaConstants, validate_exponents
from mildflow.lab import (
    ContractionParameters,
    FixedPointProblem,
    InfeasibleProblem,
    SemigroupConstants,
    check_contraction_inequalities,
    contraction_experiment,
    decay_experiment,
    estimate_semigroup_constants,
    fractional_norm,
    random_problem,
    run_fixed_point,
    select_parameters,
    tail_profile,
    verify_decay,
)

# Oracles ------------------------------------------------------------------

def logistic_exact(u0, t):
    """Closed form of u' = -u + u^2."""
    decay = np.exp(-t)
    return u0 * decay / (1.0 - u0 * (1.0 - decay))


def mode_sup_exact(delta):
    """sup_t (t * lam)^delta e^{-lam t} = (delta/e)^delta, lam-independent."""
    return 1.0 if delta == 0.0 else (delta / math.e) ** delta


# Frozen bound of the Lipschitz budget for omega0=omega1=1, N*=1, q=2 and
# exponents (0.1, 0.2, 0.5, 0.8): 1 / (12 * (B(0.9,0.4) + B(0.3,0.4))).
FROZEN_L_BOUND = 0.010748140142761027

QUASI = validate_exponents(0.1, 0.5, 0.8, 2.0, beta_exp=0.2)
SEMI = validate_exponents(0.1, 0.5, 0.8, 2.0)
UNIT_CONSTANTS = SemigroupConstants(omega0=1.0, omega1=1.0, omega2=1.0)


def scalar_problem(epsilon=1.0, exps=SEMI):
    return FixedPointProblem(np.array([[-1.0]]), exps, epsilon=epsilon)


# Fractional norms ----------------------------------------------------------

def test_fractional_norm_frozen_values():
    a = np.diag([-1.0, -4.0])
    x = np.array([1.0, 1.0])
    assert fractional_norm(a, 0.5, x) == pytest.approx(math.sqrt(5.0), rel=1e-14)
    assert fractional_norm(a, 0.0, x) == pytest.approx(math.sqrt(2.0), rel=1e-14)
    assert fractional_norm(a, 1.0, x) == pytest.approx(math.sqrt(17.0), rel=1e-14)


def test_fractional_norm_rejects_bad_input():
    with pytest.raises(ValueError, match="theta"):
        fractional_norm(np.diag([-1.0]), 1.5, np.ones(1))
    with pytest.raises(ValueError, match="symmetric"):
        fractional_norm(np.array([[-1.0, 3.0], [0.0, -2.0]]), 0.5, np.ones(2))
    with pytest.raises(ValueError, match="negative definite"):
        fractional_norm(np.diag([1.0, -2.0]), 0.5, np.ones(2))


def test_interpolation_inequality_random():
    rng = np.random.default_rng(11)
    for _ in range(100):
        dim = int(rng.integers(2, 16))
        rates = rng.uniform(0.3, 20.0, dim)
        basis, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
        a = -(basis * rates) @ basis.T
        a = 0.5 * (a + a.T)
        x = rng.standard_normal(dim)
        theta = rng.uniform(0.0, 1.0)
        lhs = fractional_norm(a, theta, x)
        rhs = fractional_norm(a, 0.0, x) ** (1.0 - theta) \
            * fractional_norm(a, 1.0, x) ** theta
        assert lhs <= rhs * (1.0 + 1e-12)


def test_log_convexity_in_theta():
    rng = np.random.default_rng(4)
    prob = random_problem(9, rng)
    x = rng.standard_normal(9)
    for _ in range(50):
        ta, tb = np.sort(rng.uniform(0.0, 1.0, 2))
        mid = prob.norm(x, 0.5 * (ta + tb))
        assert mid ** 2 <= prob.norm(x, ta) * prob.norm(x, tb) * (1.0 + 1e-10)


# Semigroup constants --------------------------------------------------------

def test_semigroup_constants_scalar_frozen():
    consts = estimate_semigroup_constants(
        scalar_problem(), theta_pairs=[(1.0, 0.0), (0.0, 0.0)])
    by_pair = {(t, v): s for t, v, s in consts.sampled_pairs}
    assert by_pair[(1.0, 0.0)] == pytest.approx(1.0 / math.e, rel=1e-3)
    assert by_pair[(0.0, 0.0)] == 1.0
    assert consts.omega0 >= max(by_pair.values())
    assert consts.omega0 >= 1.0


def test_semigroup_constants_two_mode_closed_form():
    prob = FixedPointProblem(np.diag([-1.0, -10.0]), SEMI)
    consts = estimate_semigroup_constants(prob, theta_pairs=[(0.5, 0.0)])
    sup = consts.sampled_pairs[0][2]
    assert sup == pytest.approx((2.0 * math.e) ** -0.5, rel=1e-4)
    assert sup == pytest.approx(mode_sup_exact(0.5), rel=1e-4)


def test_semigroup_constants_pair_and_grid_validation():
    prob = scalar_problem()
    with pytest.raises(ValueError, match="theta >= vartheta"):
        estimate_semigroup_constants(prob, theta_pairs=[(0.0, 0.5)])
    with pytest.raises(ValueError, match="positive"):
        estimate_semigroup_constants(prob, time_grid=np.array([0.0, 1.0]))


def test_semigroup_constants_type_validation():
    with pytest.raises(ValueError, match="omega0"):
        SemigroupConstants(omega0=0.5)
    with pytest.raises(ValueError, match="omega1"):
        SemigroupConstants(omega0=1.0, omega1=0.2)


def test_omega_defaults_by_exponent_kind():
    semi = estimate_semigroup_constants(scalar_problem())
    assert semi.omega1 is None and semi.omega2 is None
    quasi = estimate_semigroup_constants(scalar_problem(exps=QUASI))
    assert quasi.omega1 == 1.0 and quasi.omega2 == 1.0
    override = estimate_semigroup_constants(
        scalar_problem(exps=QUASI), omega1=2.0, omega2=3.0)
    assert override.omega1 == 2.0 and override.omega2 == 3.0


# Parameter selection --------------------------------------------------------

def test_select_parameters_frozen_contraction_budget():
    params = select_parameters(UNIT_CONSTANTS, QUASI, 1.0)
    assert params.L == pytest.approx(0.9 * FROZEN_L_BOUND, rel=1e-9)
    assert params.L <= FROZEN_L_BOUND
    # r caps at 0.9 * L / (4 * omega0) here (the drift cap 1/32 is larger)
    assert params.r == pytest.approx(0.9 * params.L / 4.0, rel=1e-12)
    assert 0.0 < params.T < 1.0


def test_select_parameters_revalidation_slack():
    params = select_parameters(UNIT_CONSTANTS, QUASI, 1.0)
    slacks = check_contraction_inequalities(params, UNIT_CONSTANTS, QUASI, 1.0)
    assert set(slacks) == {
        "lipschitz_budget", "ball_radius", "drift_radius",
        "initial_weight", "window_compatibility", "holder_budget"}
    assert all(value <= 1e-12 for value in slacks.values())


def test_select_parameters_large_q_cap():
    levels = []
    for q in (2.0, 51.0, 2001.0):
        exps = validate_exponents(0.1, 0.5, 0.5 + 0.6 / q, q, beta_exp=0.2)
        levels.append(select_parameters(UNIT_CONSTANTS, exps, 1.0).L)
    assert levels == sorted(levels)
    assert 0.88 <= levels[-1] <= 0.9 + 1e-12


def test_select_parameters_infeasible_names_budget():
    with pytest.raises(InfeasibleProblem) as err:
        select_parameters(UNIT_CONSTANTS, QUASI, 1e9)
    assert err.value.binding == "lipschitz_budget"


def test_select_parameters_semilinear_window_free():
    consts = SemigroupConstants(omega0=1.0)
    params = select_parameters(consts, SEMI, 1.0)
    slacks = check_contraction_inequalities(params, consts, SEMI, 1.0)
    assert set(slacks) == {"lipschitz_budget", "ball_radius"}
    assert params.T == pytest.approx(0.99)


def test_select_parameters_quasilinear_needs_omegas():
    with pytest.raises(ValueError, match="omega1"):
        select_parameters(SemigroupConstants(omega0=1.0), QUASI, 1.0)


def test_contraction_parameters_range_validation():
    with pytest.raises(ValueError, match="L"):
        ContractionParameters(L=0.0, r=0.1, T=0.1)
    with pytest.raises(ValueError, match="T"):
        ContractionParameters(L=0.1, r=0.1, T=1.5)


def test_tail_profile_monotone_and_small_for_ball_data():
    rng = np.random.default_rng(3)
    prob = random_problem(7, rng)
    u0 = rng.standard_normal(7)
    u0 *= 1e-2 / prob.norm(u0, prob.exponents.alpha)
    profile = tail_profile(prob, u0)
    ts = np.geomspace(1e-10, 0.9, 40)
    vals = [profile(t) for t in ts]
    assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))
    # weighted tail of ball data stays below the ball radius itself
    assert max(vals) <= 1e-2


# Nonlinearity contract ------------------------------------------------------

def test_default_nonlinearity_vanishes_at_origin():
    rng = np.random.default_rng(5)
    for _ in range(20):
        prob = random_problem(int(rng.integers(1, 9)), rng)
        fz = prob.f(np.zeros(prob.dimension))
        assert prob.norm(fz, prob.exponents.gamma) == 0.0


def test_lipschitz_estimate_scalar_quadratic():
    # for |u| u on the unit ball the sampled ratio is exactly 1 because
    # ||w|w - |v|v| <= (|w| + |v|) |w - v| with equality as v -> w
    n_star = scalar_problem().lipschitz(samples=300)
    assert 0.9 <= n_star <= 1.1 * (1.0 + 1e-9)


def test_user_hook_nonlinearity_is_used():
    calls = []

    def hook(u):
        calls.append(1)
        return 0.0 * np.asarray(u)

    prob = FixedPointProblem(np.array([[-1.0]]), SEMI, nonlinearity=hook)
    assert prob.f(np.ones(1)) == pytest.approx(0.0)
    assert calls


# Fixed-point runs -----------------------------------------------------------

def plan_for(problem, rng, u0_factor=0.9):
    consts = estimate_semigroup_constants(problem)
    n_star = problem.lipschitz(rng=rng)
    beta_consts = BetaConstants.from_exponents(problem.exponents)
    first = select_parameters(consts, problem.exponents, n_star, beta_consts,
                              ball_radius=problem.ball_radius)
    direction = rng.standard_normal(problem.dimension)
    direction /= problem.norm(direction, problem.exponents.alpha)
    u0 = u0_factor * first.r * direction
    params = select_parameters(
        consts, problem.exponents, n_star, beta_consts,
        m_profile=tail_profile(problem, u0),
        initial_xi_norm=problem.norm(u0, problem.exponents.xi),
        ball_radius=problem.ball_radius)
    return params, u0


def test_fixed_point_matches_logistic_closed_form():
    prob = scalar_problem()
    rng = np.random.default_rng(0)
    params, _ = plan_for(prob, rng)
    u0 = np.array([0.1 * params.r])
    result, ratio = run_fixed_point(prob, params, u0)
    exact = logistic_exact(float(u0[0]), params.T)
    assert result.final_state[0] == pytest.approx(exact, abs=1e-8)
    assert ratio <= 0.5
    assert result.converged


def test_fixed_point_zero_initial_value():
    prob = scalar_problem()
    params = ContractionParameters(L=0.01, r=0.002, T=0.5)
    result, ratio = run_fixed_point(prob, params, np.zeros(1))
    assert ratio == 0.0
    assert float(np.abs(result.final_state).max()) == 0.0


def test_fixed_point_rejects_out_of_ball_data():
    prob = scalar_problem()
    params = ContractionParameters(L=0.01, r=0.002, T=0.5)
    with pytest.raises(ValueError, match="contraction ball"):
        run_fixed_point(prob, params, np.array([0.01]))


def test_fixed_point_rejects_origin_violating_hook():
    prob = FixedPointProblem(np.array([[-1.0]]), SEMI,
                             nonlinearity=lambda u: np.asarray(u) + 1.0)
    params = ContractionParameters(L=0.01, r=0.002, T=0.5)
    with pytest.raises(ValueError, match="vanish at the origin"):
        run_fixed_point(prob, params, np.zeros(1))


def test_random_problems_contract_within_iteration_budget():
    # geometric convergence at rate <= 1/2 bounds the sweep count by
    # ceil(log(tol) / log(1/2)) + 5 for the relative tolerance in use
    budget = math.ceil(math.log(1e-10) / math.log(0.5)) + 5
    worst = 0.0
    for seed in range(10):
        rng = np.random.default_rng(300 + seed)
        prob = random_problem(int(rng.integers(2, 13)), rng)
        params, u0 = plan_for(prob, rng)
        result, ratio = run_fixed_point(prob, params, u0)
        assert result.converged
        assert result.iterations <= budget
        worst = max(worst, ratio)
    assert worst <= 0.5


def test_quasilinear_window_run_contracts():
    # q = 3 leaves the time-regularity window comfortably feasible; at
    # q = 2 the window shrinks through the bisection floor
    exps = validate_exponents(0.1, 0.5, 0.7, 3.0, beta_exp=0.2)
    prob = scalar_problem(exps=exps)
    rng = np.random.default_rng(21)
    params, u0 = plan_for(prob, rng)
    assert params.T < 1e-6  # the regularity window forces a tiny horizon
    result, ratio = run_fixed_point(prob, params, u0)
    assert result.converged
    assert ratio <= 0.5


# Decay verification ---------------------------------------------------------

def test_verify_decay_linear_semigroup():
    rng = np.random.default_rng(7)
    prob = random_problem(6, rng, epsilon=0.0)
    consts = estimate_semigroup_constants(prob)
    varpi = 0.5 * prob.lambda_min
    report = verify_decay(prob, varpi, scales=(1e-3, 1e-1, 1.0), rng=rng)
    assert all(rec.bounded for rec in report.scales)
    assert report.largest_passing_scale == 1.0
    mu = prob.exponents.mu
    shift = (prob.lambda_min / (prob.lambda_min - varpi)) ** mu
    honest = 1.0 + (mu / math.e) ** mu * shift
    assert report.m_report <= honest * 1.005
    assert report.m_report < 5.0 * consts.omega0
    assert report.m_report >= 1.0  # the t=0 sample alone contributes 1


def test_verify_decay_flags_supercritical_scale():
    prob = scalar_problem()
    report = verify_decay(prob, 0.5, scales=(1e-3, 5.0),
                          direction=np.array([1.0]))
    small, large = report.scales
    assert small.bounded and small.quotient < 5.0
    assert not large.bounded
    assert large.blowup_time is not None
    assert report.largest_passing_scale == pytest.approx(1e-3)
    assert report.m_report == pytest.approx(small.quotient)


def test_verify_decay_varpi_precondition():
    prob = scalar_problem()
    with pytest.raises(ValueError, match="varpi"):
        verify_decay(prob, 1.5)
    with pytest.raises(ValueError, match="varpi"):
        verify_decay(prob, 0.0)


# Experiment reports ---------------------------------------------------------

def test_contraction_experiment_report_shape():
    import json

    report = contraction_experiment(dim=6, seed=3)
    assert report["converged"]
    assert report["contraction_ratio"] <= 0.5
    assert all(entry["satisfied"]
               for entry in report["inequalities"].values())
    json.dumps(report)


def test_decay_experiment_report_shape():
    import json

    report = decay_experiment(dim=5, seed=2)
    assert report["largest_passing_scale"] is not None
    assert report["m_report"] < 5.0 * report["omega0"]
    json.dumps(report)
