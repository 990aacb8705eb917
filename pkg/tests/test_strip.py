"""Strip spaces: transforms, derivatives, the cumulative-integral operator,
and multiplier norms against quadrature oracles."""

import math

import numpy as np
import pytest

from mildflow.strip import (
    StripGeometry,
    apply_T,
    boundary_defect,
    conjugate_symmetry_defect,
    dealias_x,
    derivative_x,
    derivative_y,
    dirichlet_mode_field,
    field_from_function,
    from_grid,
    h1_norm_quadrature,
    l2_norm,
    open_strip,
    periodic_strip,
    project_dirichlet,
    random_dirichlet_field,
    rough_dirichlet_field,
    sobolev_norm,
    sobolev_norm_set,
    to_grid,
    zero_field,
)

GEOM = periodic_strip(nx=32, ny=24)


def test_geometry_validation():
    with pytest.raises(ValueError):
        StripGeometry(periodic_x=True, half_length=math.pi, nx=10, ny=4)
    with pytest.raises(ValueError):
        StripGeometry(periodic_x=True, half_length=1.0, nx=16, ny=16)
    with pytest.raises(ValueError):
        StripGeometry(periodic_x=False, half_length=8 * math.pi, nx=15, ny=16)


def test_round_trip_identity():
    rng = np.random.default_rng(1)
    values = rng.standard_normal((GEOM.nx, GEOM.ny))
    back = to_grid(from_grid(values, GEOM))
    assert np.max(np.abs(back - values)) <= 1e-12


def test_zero_field_zero_grid():
    assert np.all(to_grid(zero_field(GEOM)) == 0.0)


def test_constant_in_x_profile():
    f = field_from_function(GEOM, lambda x, y: np.sin(math.pi * y) + 0.0 * x)
    grid = to_grid(f)
    expected = np.sin(math.pi * GEOM.y_nodes())
    assert np.max(np.abs(grid - expected[None, :])) <= 1e-12


def test_derivative_x_constant_is_zero():
    f = field_from_function(GEOM, lambda x, y: 1.0 + 0.0 * x + 0.0 * y)
    assert np.max(np.abs(to_grid(derivative_x(f)))) <= 1e-12


def test_derivative_x_single_mode_exact():
    f = field_from_function(GEOM, lambda x, y: np.sin(x) + 0.0 * y)
    got = to_grid(derivative_x(f))
    expected = np.cos(GEOM.x_nodes())[:, None] * np.ones(GEOM.ny)
    assert np.max(np.abs(got - expected)) <= 1e-12


def test_derivative_y_sine():
    geom = periodic_strip(nx=16, ny=32)
    f = field_from_function(geom, lambda x, y: np.sin(math.pi * y) + 0.0 * x)
    got = to_grid(derivative_y(f))
    expected = math.pi * np.cos(math.pi * geom.y_nodes())[None, :]
    assert np.max(np.abs(got - expected)) <= 1e-8


def test_apply_T_constant():
    f = field_from_function(GEOM, lambda x, y: np.ones_like(x + y))
    got = to_grid(apply_T(f))
    expected = GEOM.y_nodes()[None, :]
    assert np.max(np.abs(got - expected)) <= 1e-12
    # Lemma-style norm check on the single profile: ||y||^2 = 1/3 over y.
    tw = apply_T(f)
    ratio = (l2_norm(tw) / l2_norm(f)) ** 2
    assert ratio == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_apply_T_sine_profile():
    f = field_from_function(GEOM, lambda x, y: np.sin(math.pi * y) + 0.0 * x)
    got = to_grid(apply_T(f))
    y = GEOM.y_nodes()
    expected = ((1.0 - np.cos(math.pi * y)) / math.pi)[None, :]
    assert np.max(np.abs(got - expected)) <= 1e-10
    # output does not vanish at y = 1
    assert abs(to_grid(apply_T(f))[0, -1] - 2.0 / math.pi) <= 1e-10


def test_apply_T_linear():
    rng = np.random.default_rng(2)
    a = from_grid(rng.standard_normal((GEOM.nx, GEOM.ny)), GEOM)
    b = from_grid(rng.standard_normal((GEOM.nx, GEOM.ny)), GEOM)
    lhs = apply_T(SpectralFieldLike_add(a, b, 2.0, -3.0))
    rhs = SpectralFieldLike_add(apply_T(a), apply_T(b), 2.0, -3.0)
    assert np.max(np.abs(lhs.coeffs - rhs.coeffs)) <= 1e-12


def SpectralFieldLike_add(a, b, ca, cb):
    from mildflow.strip import SpectralField

    return SpectralField(a.geometry, ca * a.coeffs + cb * b.coeffs)


def test_fundamental_theorem_of_calculus_smooth():
    f = random_dirichlet_field(periodic_strip(nx=16, ny=32),
                               np.random.default_rng(3))
    back = derivative_y(apply_T(f))
    assert np.max(np.abs(back.coeffs - f.coeffs)) <= 1e-8


def test_T_operator_norm_bound_random():
    rng = np.random.default_rng(4)
    for _ in range(100):
        values = rng.standard_normal((GEOM.nx, GEOM.ny))
        w = from_grid(values, GEOM)
        assert l2_norm(apply_T(w)) <= l2_norm(w) + 1e-10


def test_sobolev_norm_single_mode():
    f = field_from_function(GEOM, lambda x, y: np.sin(math.pi * y) + 0.0 * x)
    n0 = sobolev_norm(f, 0.0)
    assert n0 == pytest.approx(math.sqrt(GEOM.half_length), rel=1e-12)
    n1 = sobolev_norm(f, 1.0)
    assert n1 / n0 == pytest.approx(math.sqrt(1.0 + math.pi ** 2), rel=1e-12)


def test_sobolev_norm_sigma_range():
    f = zero_field(GEOM)
    with pytest.raises(ValueError):
        sobolev_norm(f, 2.5)


def test_sobolev_zero_order_matches_quadrature_on_sine_span():
    rng = np.random.default_rng(5)
    for _ in range(5):
        f = random_dirichlet_field(GEOM, rng)
        assert sobolev_norm(f, 0.0) == pytest.approx(l2_norm(f), rel=1e-10)


def test_h1_multiplier_vs_quadrature_within_5_percent():
    rng = np.random.default_rng(6)
    geom = periodic_strip(nx=32, ny=32)
    for _ in range(5):
        f = random_dirichlet_field(geom, rng)
        mult = sobolev_norm(f, 1.0)
        quadr = h1_norm_quadrature(f)
        assert abs(mult - quadr) / quadr <= 0.05


def test_norms_monotone_in_sigma():
    rng = np.random.default_rng(7)
    f = random_dirichlet_field(GEOM, rng)
    sigmas = [0.0, 0.5, 1.0, 1.5, 2.0]
    norms = sobolev_norm_set(f, sigmas)
    for lo, hi in zip(sigmas, sigmas[1:]):
        assert norms[lo] <= norms[hi] * (1.0 + 1e-12)


def test_conjugate_symmetry_preserved():
    rng = np.random.default_rng(8)
    f = from_grid(rng.standard_normal((GEOM.nx, GEOM.ny)), GEOM)
    for op in (derivative_x, derivative_y, apply_T, dealias_x, project_dirichlet):
        assert conjugate_symmetry_defect(op(f)) <= 1e-12


def test_projection_enforces_boundary_rows():
    rng = np.random.default_rng(9)
    f = from_grid(rng.standard_normal((GEOM.nx, GEOM.ny)), GEOM)
    assert boundary_defect(project_dirichlet(f)) <= 1e-12


def test_dirichlet_mode_field_norm():
    geom = periodic_strip(nx=32, ny=24)
    f = dirichlet_mode_field(geom, n=1, m=1)
    # cos(x) sin(pi y): ||.||^2 = 2Lx * (1/2) * (1/2)
    assert l2_norm(f) == pytest.approx(math.sqrt(geom.half_length / 2.0), rel=1e-12)
    lam = 1.0 + math.pi ** 2
    expected = math.sqrt((1.0 + lam)) * l2_norm(f)
    assert sobolev_norm(f, 1.0) == pytest.approx(expected, rel=1e-10)


def test_rough_field_finite_target_norm():
    geom = periodic_strip(nx=64, ny=48)
    rng = np.random.default_rng(10)
    f = rough_dirichlet_field(geom, rng, sigma=1.0)
    n1 = sobolev_norm(f, 1.0)
    n15 = sobolev_norm(f, 1.5)
    assert math.isfinite(n1) and n1 > 0.0
    # rougher than H^1.5: the higher norm is markedly larger
    assert n15 / n1 > 3.0
    assert conjugate_symmetry_defect(f) <= 1e-12
    assert boundary_defect(f) <= 1e-12


def test_open_strip_wavenumbers():
    geom = open_strip(nx=32, ny=16)
    k = geom.wavenumbers()
    assert k[1] == pytest.approx(1.0 / 8.0)
    assert geom.dealias_cut == 10
