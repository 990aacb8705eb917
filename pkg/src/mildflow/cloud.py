"""Strip circulation model: linear operator, spectral bounds, nonlinearity.

The scalar field u lives on a horizontal strip with Dirichlet walls.
Its generator couples diffusion, a zeroth-order source, and a drift fed
by the vertical integral of the x-derivative:

    A u = nu Laplace(u) + eta u - beta T(du/dx),   (T w)(y) = int_0^y w

Fourier modes in x decouple, so A splits into one dense block per mode
acting on interior wall-normal collocation values:

    A_n = nu (D_yy - k_n^2 I) + eta I - i beta k_n F

with F the interior block of the cumulative-integration matrix. The
blocks for -n are complex conjugates of those for +n.

The nonlinearity is quadratic advection with integral feedback:

    f(u) = (du/dy) T(du/dx) - u du/dx
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigvals, expm

from .chebyshev import cumulative_matrix, diff_matrix
from .propagators import EIG_CONDITION_LIMIT, ModeStackPropagator
from .strip import (
    SpectralField,
    StripGeometry,
    apply_T,
    dealias_x,
    derivative_x,
    derivative_y,
    from_grid,
    sobolev_norm,
    to_grid,
)


@dataclass(frozen=True)
class CloudCoefficients:
    """Diffusivity nu, linear gain eta, integral-drift strength beta."""

    nu: float = 1.0
    eta: float = 0.0
    beta: float = 1.0

    def __post_init__(self):
        if not self.nu > 0.0:
            raise ValueError(f"diffusivity nu must be positive, got {self.nu}")


def _interior_blocks(geometry: StripGeometry):
    ny = geometry.ny
    d = diff_matrix(ny)
    d2 = (d @ d)[1:-1, 1:-1]
    f_block = cumulative_matrix(ny)[1:-1, 1:-1]
    return d2, f_block


def mode_matrix(n: int, coeffs: CloudCoefficients,
                geometry: StripGeometry) -> np.ndarray:
    """Dense interior operator block for the signed Fourier mode n."""
    d2, f_block = _interior_blocks(geometry)
    k = n * math.pi / geometry.half_length
    m = geometry.ny - 2
    eye = np.eye(m)
    mat = coeffs.nu * (d2 - k * k * eye) + coeffs.eta * eye
    return mat.astype(complex) - 1j * coeffs.beta * k * f_block


@dataclass
class ModeOperator:
    """One assembled mode block with its eigendecomposition."""

    mode_index: int
    wavenumber: float
    matrix: np.ndarray
    eigenvalues: np.ndarray = field(repr=False, default=None)
    vectors: np.ndarray = field(repr=False, default=None)
    vectors_inv: np.ndarray = field(repr=False, default=None)
    condition: float = np.nan
    defective: bool = False

    @property
    def top_real_part(self) -> float:
        return float(np.max(self.eigenvalues.real))

    def conjugated(self) -> "ModeOperator":
        """The block for mode -n; the spectrum mirrors across the real axis."""
        return ModeOperator(
            mode_index=-self.mode_index,
            wavenumber=-self.wavenumber,
            matrix=self.matrix.conj(),
            eigenvalues=self.eigenvalues.conj(),
            vectors=self.vectors.conj(),
            vectors_inv=self.vectors_inv.conj(),
            condition=self.condition,
            defective=self.defective,
        )


def assemble_mode(n: int, coeffs: CloudCoefficients,
                  geometry: StripGeometry) -> ModeOperator:
    mat = mode_matrix(n, coeffs, geometry)
    lam, vecs = np.linalg.eig(mat)
    cond = float(np.linalg.cond(vecs))
    defective = not np.isfinite(cond) or cond > EIG_CONDITION_LIMIT
    return ModeOperator(
        mode_index=n,
        wavenumber=n * math.pi / geometry.half_length,
        matrix=mat,
        eigenvalues=lam,
        vectors=vecs,
        vectors_inv=None if defective else np.linalg.inv(vecs),
        condition=cond,
        defective=defective,
    )


def semigroup_apply(mode_op: ModeOperator, t: float,
                    vector: np.ndarray) -> np.ndarray:
    """exp(t A_n) vector for t >= 0."""
    if t < 0.0:
        raise ValueError(f"semigroup time must be nonnegative, got {t}")
    vec = np.asarray(vector, dtype=complex)
    if mode_op.defective:
        return expm(t * mode_op.matrix) @ vec
    mult = np.exp(t * mode_op.eigenvalues)
    return mode_op.vectors @ (mult * (mode_op.vectors_inv @ vec))


def spectral_bound_numeric(coeffs: CloudCoefficients, geometry: StripGeometry,
                           n_max: int | None = None) -> float:
    """max Re spec(A_n) over modes 0..n_max (negative modes are mirrors)."""
    if n_max is None:
        n_max = geometry.nx // 2
    bound = -np.inf
    for n in range(n_max + 1):
        lam = eigvals(mode_matrix(n, coeffs, geometry))
        bound = max(bound, float(np.max(lam.real)))
    return bound


def mode_spectra(coeffs: CloudCoefficients, geometry: StripGeometry,
                 n_max: int | None = None):
    """Per-mode (n, max real part, imaginary part at that maximum)."""
    if n_max is None:
        n_max = geometry.nx // 2
    records = []
    for n in range(n_max + 1):
        lam = eigvals(mode_matrix(n, coeffs, geometry))
        idx = int(np.argmax(lam.real))
        records.append((n, float(lam[idx].real), float(lam[idx].imag)))
    return records


def analytic_bound_nonperiodic(coeffs: CloudCoefficients) -> float:
    """Closed-form upper bound for the spectral bound, valid for every mode
    set; sharp enough to give decay for weak drift."""
    nu, eta, beta = coeffs.nu, coeffs.eta, coeffs.beta
    return (eta + abs(beta) * math.pi / 2.0
            + max(abs(beta) / (2.0 * nu), math.pi) * (abs(beta) / 2.0 - math.pi * nu))


@dataclass(frozen=True)
class StabilityCheck:
    satisfied: bool
    margin: float


def periodic_stability_condition(coeffs: CloudCoefficients) -> StabilityCheck:
    """On the 2 pi periodic strip the spectrum stays in the open left half
    plane whenever eta + beta^2/(16 nu) < pi^2 nu."""
    margin = math.pi ** 2 * coeffs.nu - coeffs.eta \
        - coeffs.beta ** 2 / (16.0 * coeffs.nu)
    return StabilityCheck(satisfied=margin > 0.0, margin=margin)


def nonlinearity_cloud(u: SpectralField) -> SpectralField:
    """f(u) = u_y T(u_x) - u u_x, pseudospectral with 2/3 dealiasing in x."""
    ux = derivative_x(u)
    uy = derivative_y(u)
    tux = apply_T(ux)
    prod = to_grid(uy) * to_grid(tux) - to_grid(u) * to_grid(ux)
    return dealias_x(from_grid(prod, u.geometry))


class CloudModel:
    """State space and operator bundle for time integration.

    The state is the full (nx, ny-2) array of interior collocation values
    in Fourier-mode order. Modes above the dealias cutoff still decay
    under the linear flow but receive no nonlinear feedback.
    """

    def __init__(self, coeffs: CloudCoefficients, geometry: StripGeometry,
                 nonlinear: bool = True):
        self.coeffs = coeffs
        self.geometry = geometry
        self.nonlinear = nonlinear
        self.mode_numbers = np.rint(
            np.fft.fftfreq(geometry.nx) * geometry.nx).astype(int)
        by_abs = {}
        for n in sorted(set(abs(self.mode_numbers))):
            by_abs[n] = assemble_mode(int(n), coeffs, geometry)
        ops = []
        for n in self.mode_numbers:
            base = by_abs[abs(n)]
            ops.append(base if n >= 0 else base.conjugated())
        self.mode_operators = ops
        m = geometry.ny - 2
        ident = np.eye(m, dtype=complex)
        self.propagator = ModeStackPropagator(
            lam=np.stack([op.eigenvalues for op in ops]),
            vectors=np.stack([op.vectors if not op.defective else ident
                              for op in ops]),
            vectors_inv=np.stack([op.vectors_inv if not op.defective else ident
                                  for op in ops]),
            matrices=np.stack([op.matrix for op in ops]),
            defective_mask=[op.defective for op in ops],
        )

    def field_from_state(self, state: np.ndarray) -> SpectralField:
        full = np.zeros((self.geometry.nx, self.geometry.ny), dtype=complex)
        full[:, 1:-1] = state
        return SpectralField(self.geometry, full)

    def state_from_field(self, u: SpectralField) -> np.ndarray:
        return u.coeffs[:, 1:-1].copy()

    def nonlinearity(self, state: np.ndarray) -> np.ndarray:
        if not self.nonlinear:
            return np.zeros_like(state)
        f = nonlinearity_cloud(self.field_from_state(state))
        return f.coeffs[:, 1:-1]

    def norm(self, state: np.ndarray, sigma: float) -> float:
        return sobolev_norm(self.field_from_state(state), sigma)

    def norms(self, state: np.ndarray, sigmas) -> tuple:
        u = self.field_from_state(state)
        return tuple(sobolev_norm(u, s) for s in sigmas)

    def spectral_abscissa(self) -> float:
        return self.propagator.spectral_abscissa()
