"""Sato-Tate measure, Chebyshev-U evaluation, CDF/quantile, quadrature helpers.

The measure is d(mu) = (2/pi) sin^2(theta) d(theta) on [0, pi].  The
second-kind Chebyshev polynomials U_m(cos theta) = sin((m+1)theta)/sin(theta)
are an orthonormal family for it, which is what makes them the right test
functions for equidistribution sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

M_MAX = 512

# Within this distance of theta in {0, pi} the sine-ratio form loses digits,
# so evaluation switches to the three-term recurrence in x = cos(theta).
ENDPOINT_COLLAR = 1e-6


@dataclass(frozen=True)
class Interval:
    """Closed subinterval [alpha, beta] of [0, pi]."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.alpha <= self.beta <= math.pi):
            raise ValueError(f"need 0 <= alpha <= beta <= pi, got [{self.alpha}, {self.beta}]")


FULL_INTERVAL = Interval(0.0, math.pi)


def mu_st(interval: Interval) -> float:
    """Sato-Tate mass of a closed interval, by the closed-form antiderivative."""
    a, b = interval.alpha, interval.beta
    return ((b - a) - (math.sin(2 * b) - math.sin(2 * a)) / 2.0) / math.pi


def st_cdf(theta):
    """F(theta) = mu_st([0, theta]); accepts scalars or numpy arrays."""
    return (theta - np.sin(2.0 * theta) / 2.0) / math.pi


def st_quantile(u: float) -> float:
    """Inverse CDF by safeguarded Newton iteration with a bisection bracket.

    F'(theta) = (2/pi) sin^2(theta) vanishes at the endpoints, so raw Newton
    can escape [0, pi]; every step is clipped back into the current bracket.
    """
    if not 0.0 <= u <= 1.0:
        raise ValueError("u must lie in [0, 1]")
    if u == 0.0:
        return 0.0
    if u == 1.0:
        return math.pi
    lo, hi = 0.0, math.pi
    theta = math.pi * u  # decent start: uniform-measure guess
    for _ in range(200):
        f = float(st_cdf(theta)) - u
        if f > 0:
            hi = theta
        elif f < 0:
            lo = theta
        else:
            return theta
        deriv = (2.0 / math.pi) * math.sin(theta) ** 2
        if deriv > 0:
            step = theta - f / deriv
        else:
            step = 0.5 * (lo + hi)
        if not lo < step < hi:
            step = 0.5 * (lo + hi)
        if abs(step - theta) < 1e-15:
            theta = step
            break
        theta = step
    return theta


def _cheb_u_recurrence(m: int, x):
    """U_m(x) by the three-term recurrence; stable near x = +-1."""
    u_prev = np.ones_like(x)
    if m == 0:
        return u_prev
    u = 2.0 * x
    for _ in range(m - 1):
        u_prev, u = u, 2.0 * x * u - u_prev
    return u


def cheb_u(m: int, theta):
    """U_m(cos theta) for theta in [0, pi]; scalar or array.

    Uses the sine-ratio form except within ENDPOINT_COLLAR of the endpoints,
    where the recurrence (with exact limit values U_m(+-1) = (+-1)^m (m+1))
    takes over.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if m > M_MAX:
        raise ValueError(f"m must be <= {M_MAX}")
    theta_arr = np.asarray(theta, dtype=float)
    scalar = theta_arr.ndim == 0
    theta_arr = np.atleast_1d(theta_arr)
    if m == 0:
        out = np.ones_like(theta_arr)
        return float(out[0]) if scalar else out

    out = np.empty_like(theta_arr)
    near_edge = (theta_arr < ENDPOINT_COLLAR) | (theta_arr > math.pi - ENDPOINT_COLLAR)
    interior = ~near_edge
    if np.any(interior):
        t = theta_arr[interior]
        out[interior] = np.sin((m + 1) * t) / np.sin(t)
    if np.any(near_edge):
        out[near_edge] = _cheb_u_recurrence(m, np.cos(theta_arr[near_edge]))
    return float(out[0]) if scalar else out


def cheb_u_table(m_max: int, theta: np.ndarray) -> np.ndarray:
    """Rows U_0(cos theta) .. U_{m_max}(cos theta) for a fixed theta vector.

    The full recurrence is used: building the whole table row by row is both
    cheaper and smoother than m separate sine-ratio evaluations, and the
    recurrence is exact at the endpoints.
    """
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    theta = np.asarray(theta, dtype=float)
    table = np.empty((m_max + 1, theta.size))
    table[0] = 1.0
    if m_max >= 1:
        x2 = 2.0 * np.cos(theta)
        table[1] = x2
        for m in range(2, m_max + 1):
            table[m] = x2 * table[m - 1] - table[m - 2]
    return table


def gauss_legendre_nodes(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped from [-1, 1] to [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def cheb_inner_product(m: int, n: int) -> float:
    """<U_m, U_n> in L^2([0, pi], mu_ST) by Gauss-Legendre quadrature.

    The integrand is a trigonometric polynomial of degree m + n + 2, so
    4(m+n) + 16 nodes oversample it heavily; the result matches delta_{mn}
    to ~1e-14.
    """
    if not (0 <= m <= 64 and 0 <= n <= 64):
        raise ValueError("indices must lie in [0, 64]")
    nodes, weights = gauss_legendre_nodes(4 * (m + n) + 16, 0.0, math.pi)
    vals = cheb_u(m, nodes) * cheb_u(n, nodes) * (2.0 / math.pi) * np.sin(nodes) ** 2
    return float(np.dot(weights, vals))
