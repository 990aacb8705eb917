"""Chebyshev-Gauss-Lobatto collocation on the unit interval [0, 1].

Dense differentiation, coefficient-transform and cumulative-integration
matrices for the vertical direction of the strip. Nodes are stored in
ascending order, y_0 = 0, y_{n-1} = 1. The cumulative-integration matrix
is exact for polynomials up to the collocation degree (the antiderivative
series keeps its top coefficient), which is what makes the discrete
operator-norm checks trustworthy at the 1e-10 level.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


def lobatto_nodes(n: int) -> np.ndarray:
    """Ascending Chebyshev-Gauss-Lobatto nodes on [0, 1]."""
    if n < 2:
        raise ValueError("need at least two collocation nodes")
    j = np.arange(n)
    return 0.5 * (1.0 - np.cos(np.pi * j / (n - 1)))


@lru_cache(maxsize=32)
def diff_matrix(n: int) -> np.ndarray:
    """d/dy at the ascending nodes; exact on polynomials of degree < n."""
    # Standard Lobatto differentiation matrix in the variable
    # x = cos(j pi / (n-1)) (descending), then flipped to ascending y and
    # scaled by the [0,1] chain rule dy = dx/2.
    m = n - 1
    x = np.cos(np.pi * np.arange(n) / m)
    c = np.ones(n)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(n)
    dx = x[:, None] - x[None, :]
    d = np.outer(c, 1.0 / c) / (dx + np.eye(n))
    d -= np.diag(d.sum(axis=1))
    # y = (1 - x)/2 keeps the index order and contributes dy = -dx/2.
    return -2.0 * d


@lru_cache(maxsize=32)
def coeff_matrix(n: int) -> np.ndarray:
    """Nodal values (ascending y) -> Chebyshev coefficients in s = 2y - 1."""
    return np.linalg.inv(chebyshev_vandermonde(lobatto_nodes(n), n))


def chebyshev_vandermonde(y: np.ndarray, ncoeff: int) -> np.ndarray:
    """T_k(2y - 1) evaluated at the given points, k = 0..ncoeff-1."""
    s = np.clip(2.0 * np.asarray(y, dtype=float) - 1.0, -1.0, 1.0)
    theta = np.arccos(s)
    return np.cos(np.outer(theta, np.arange(ncoeff)))


@lru_cache(maxsize=32)
def cumulative_matrix(n: int) -> np.ndarray:
    """Map nodal values to nodal values of y -> integral_0^y.

    Exact for all polynomials of degree <= n-1: the antiderivative series
    is extended by one Chebyshev mode instead of truncated.
    """
    coef = coeff_matrix(n)
    # Antiderivative in s = 2y - 1: b_1 = a_0 - a_2/2,
    # b_k = (a_{k-1} - a_{k+1}) / (2k) for k >= 2, constants fixed below.
    anti = np.zeros((n + 1, n))
    anti[1, 0] = 1.0
    if n > 2:
        anti[1, 2] = -0.5
    for k in range(2, n + 1):
        anti[k, k - 1] = 1.0 / (2.0 * k)
        if k + 1 < n:
            anti[k, k + 1] -= 1.0 / (2.0 * k)
    # Constant term from the lower limit: antiderivative vanishes at s = -1.
    signs = (-1.0) ** np.arange(n + 1)
    anti[0, :] = -signs[1:] @ anti[1:, :]
    evaluate = chebyshev_vandermonde(lobatto_nodes(n), n + 1)
    # ds = 2 dy
    return 0.5 * evaluate @ anti @ coef


@lru_cache(maxsize=32)
def gauss_legendre_unit(nq: int):
    """Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(nq)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=32)
def quadrature_eval_matrix(n: int, nq: int) -> np.ndarray:
    """Nodal values -> values at the nq Gauss-Legendre points.

    With nq >= n + 1 the induced L2 quadrature is exact for products of
    two collocation polynomials.
    """
    yq, _ = gauss_legendre_unit(nq)
    return chebyshev_vandermonde(yq, n) @ coeff_matrix(n)
