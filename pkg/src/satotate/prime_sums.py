"""Weighted Chebyshev prime sums and the explicit smoothing weight.

The log-weighted sums theta_{f,m}(x) = sum_{p<=x, good} U_m(cos theta_p) log p
and their joint analogue are the raw material of every equidistribution
bound.  The smoothing weight phi(t; x, ell, eps) is a plateau on [1/2, 1]
with polynomial edges of width eps/log x: a boxcar convolved ell times with
a uniform density of width 2A, A = eps/(2 ell log x), so that its Laplace
transform has the closed product form used for the smoothed sums
psi(x) = sum phi(log n / log x) * Lambda(n)-type coefficients.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from satotate.angles import AngleSeries
from satotate.errors import BadPrime, RangeExceeded
from satotate.measure import cheb_u, gauss_legendre_nodes

LONGDOUBLE = np.longdouble


def _good_upto(series: AngleSeries, x: int) -> tuple[np.ndarray, np.ndarray]:
    if x > series.x_max:
        raise RangeExceeded(f"x = {x} exceeds series coverage x_max = {series.x_max}")
    return series.upto(x)


def theta_fm(series: AngleSeries, m: int, x: int) -> float:
    """theta_{f,m}(x) = sum over good p <= x of U_m(cos theta_p) log p."""
    if m < 0:
        raise ValueError("m must be >= 0")
    ps, thetas = _good_upto(series, x)
    if ps.size == 0:
        return 0.0
    return float(np.sum(cheb_u(m, thetas) * np.log(ps)))


def cheb_prime_sum(series: AngleSeries, m: int, x: int) -> tuple[float, float]:
    """(plain, weighted): sum of U_m(cos theta_p) and of U_m(cos theta_p) log p."""
    ps, thetas = _good_upto(series, x)
    if ps.size == 0:
        return 0.0, 0.0
    u = cheb_u(m, thetas)
    return float(np.sum(u)), float(np.sum(u * np.log(ps)))


def theta_joint(series1: AngleSeries, series2: AngleSeries, m1: int, m2: int, x: int) -> float:
    """Joint weighted sum over primes good for both forms."""
    from satotate.discrepancy import common_good

    if x > series1.x_max or x > series2.x_max:
        raise RangeExceeded("x exceeds coverage of at least one series")
    ps, t1, t2 = common_good(series1, series2, x)
    if ps.size == 0:
        return 0.0
    return float(np.sum(cheb_u(m1, t1) * cheb_u(m2, t2) * np.log(ps)))


def _residual_from_terms(w: np.ndarray, logp: np.ndarray, x: int) -> float:
    """|LHS - RHS| of the partial-summation identity for term weights w * log p.

    LHS is sum w_p; RHS routes through theta(x)/log x minus the integral of
    theta(t)/(t log^2 t), which the step structure of theta collapses to
    sum w_p log p (1/log p - 1/log x).  The two paths are algebraically
    identical, so the returned value is pure floating-point noise; sums are
    accumulated in extended precision to keep it far below 1e-9 relative.
    """
    lx = math.log(x)
    w_ld = w.astype(LONGDOUBLE)
    logp_ld = logp.astype(LONGDOUBLE)
    lhs = np.sum(w_ld)
    weighted = np.sum(w_ld * logp_ld)
    integral = np.sum(w_ld * logp_ld * (1.0 / logp_ld - LONGDOUBLE(1.0) / LONGDOUBLE(lx)))
    rhs = weighted / LONGDOUBLE(lx) + integral
    return float(abs(lhs - rhs))


def partial_summation_residual(series: AngleSeries, m: int, x: int) -> float:
    """Residual of sum U_m = theta_{f,m}(x)/log x - int_2^x theta_{f,m}(t)/(t log^2 t) dt."""
    if x < 3:
        raise ValueError("x must be >= 3")
    ps, thetas = _good_upto(series, x)
    if ps.size == 0:
        return 0.0
    return _residual_from_terms(cheb_u(m, thetas), np.log(ps), x)


def partial_summation_residual_joint(
    series1: AngleSeries, series2: AngleSeries, m1: int, m2: int, x: int
) -> float:
    """Residual of the joint partial-summation identity."""
    from satotate.discrepancy import common_good

    if x < 3:
        raise ValueError("x must be >= 3")
    if x > series1.x_max or x > series2.x_max:
        raise RangeExceeded("x exceeds coverage of at least one series")
    ps, t1, t2 = common_good(series1, series2, x)
    if ps.size == 0:
        return 0.0
    return _residual_from_terms(cheb_u(m1, t1) * cheb_u(m2, t2), np.log(ps), x)


def lambda_sym(series: AngleSeries, m: int, p: int, ell: int) -> float:
    """Prime-power coefficient of -L'/L for the m-th symmetric power at p^ell.

    Equals U_m(cos(ell * theta_p)) log p at good p: the Satake parameters at
    a good prime are e^(i (2j - m) theta_p), and their ell-th power sum is
    the same geometric sum evaluated at ell * theta_p.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if m < 0:
        raise ValueError("m must be >= 0")
    try:
        theta = series.theta_at(p)
    except KeyError:
        raise BadPrime(f"{p} is not a good prime of the series") from None
    # reduce ell*theta mod 2*pi into [0, pi] by evenness of cos
    t = math.fmod(ell * theta, 2.0 * math.pi)
    if t < 0:
        t += 2.0 * math.pi
    if t > math.pi:
        t = 2.0 * math.pi - t
    return cheb_u(m, t) * math.log(p)


# -- the smoothing weight ------------------------------------------------------


@dataclass(frozen=True)
class SmoothingWeight:
    """Parameters (x, ell, eps) of the plateau weight; A = eps/(2 ell log x)."""

    x: float
    ell: int
    eps: float

    def __post_init__(self) -> None:
        if self.x < 3:
            raise ValueError("x must be >= 3")
        if self.ell < 1:
            raise ValueError("ell must be >= 1")
        if not 0.0 < self.eps < 0.25:
            raise ValueError("eps must lie in (0, 1/4)")

    @property
    def log_x(self) -> float:
        return math.log(self.x)

    @property
    def A(self) -> float:
        return self.eps / (2.0 * self.ell * self.log_x)

    @property
    def support(self) -> tuple[float, float]:
        half_width = self.eps / self.log_x
        return 0.5 - half_width, 1.0 + half_width


def paper_proof_weight(x: float, m: int, c_zero_density: float = 1.0) -> SmoothingWeight:
    """The proof-driven preset ell = 4 c m, eps = 8 ell x^(-1/(8 ell)).

    Valid only when eps lands in (0, 1/4), which requires x beyond
    (32 ell)^(8 ell); at desk scale this raises, by design.
    """
    ell = max(1, round(4 * c_zero_density * m))
    eps = 8.0 * ell * x ** (-1.0 / (8.0 * ell))
    if not 0.0 < eps < 0.25:
        raise ValueError(
            f"paper-proof preset needs x > (32*ell)^(8*ell) ~ {float(32 * ell) ** (8 * ell):.3g}; "
            f"got eps = {eps:.3g} at x = {x:.3g}"
        )
    return SmoothingWeight(x, ell, eps)


@lru_cache(maxsize=128)
def _irwin_hall_coeffs(ell: int) -> tuple[tuple[float, float], ...]:
    """((sign * C(ell,k) / ell!, k) for k = 0..ell); CDF pieces of sum of ell U[0,1]."""
    fact = math.factorial(ell)
    return tuple(((-1) ** k * math.comb(ell, k) / fact, float(k)) for k in range(ell + 1))


def _irwin_hall_cdf(y: float, ell: int) -> float:
    """P(Y_1 + ... + Y_ell <= y) for iid uniform Y_i on [0, 1]."""
    if y <= 0.0:
        return 0.0
    if y >= ell:
        return 1.0
    total = 0.0
    for coeff, k in _irwin_hall_coeffs(ell):
        if y > k:
            total += coeff * (y - k) ** ell
    return total


def weight_phi(w: SmoothingWeight, t: float) -> float:
    """phi(t): 1 on [1/2, 1], polynomial edges, 0 outside the support.

    Realised as the difference of two scaled Irwin-Hall CDFs, i.e. the boxcar
    1_[1/2 - eps/log x, 1] convolved with ell uniform densities of width 2A.
    The plateau and the complement of the support are returned exactly; the
    edge polynomials are clamped to [0, 1] against rounding noise.
    """
    if 0.5 <= t <= 1.0:
        return 1.0
    lo, hi = w.support
    if t <= lo or t >= hi:
        return 0.0
    two_a = 2.0 * w.A
    a = 0.5 - w.ell * two_a  # left end of the boxcar = 1/2 - eps/log x
    rise = _irwin_hall_cdf((t - a) / two_a, w.ell)
    fall = _irwin_hall_cdf((t - 1.0) / two_a, w.ell)
    return min(1.0, max(0.0, rise - fall))


def weight_phi_array(w: SmoothingWeight, t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    two_a = 2.0 * w.A
    a = 0.5 - w.ell * two_a
    raw = _irwin_hall_cdf_array((t - a) / two_a, w.ell) - _irwin_hall_cdf_array(
        (t - 1.0) / two_a, w.ell
    )
    out = np.clip(raw, 0.0, 1.0)
    out[(t >= 0.5) & (t <= 1.0)] = 1.0
    lo, hi = w.support
    out[(t <= lo) | (t >= hi)] = 0.0
    return out


def _irwin_hall_cdf_array(y: np.ndarray, ell: int) -> np.ndarray:
    out = np.zeros_like(y)
    out[y >= ell] = 1.0
    mid = (y > 0.0) & (y < ell)
    if np.any(mid):
        ym = y[mid]
        acc = np.zeros_like(ym)
        for coeff, k in _irwin_hall_coeffs(ell):
            acc += np.where(ym > k, coeff * np.maximum(ym - k, 0.0) ** ell, 0.0)
        out[mid] = acc
    return out


def _e_ratio(w: complex) -> complex:
    """(e^w - 1)/w, i.e. (1 - e^w)/(-w), with a series fallback for small |w|."""
    if abs(w) < 1e-4:
        return 1.0 + w / 2.0 + w * w / 6.0 + w * w * w / 24.0 + w * w * w * w / 120.0
    return (cmath.exp(w) - 1.0) / w


def weight_laplace(w: SmoothingWeight, z: complex) -> complex:
    """Phi(z) = int phi(t) e^(-zt) dt, entire, by the closed product form.

    Phi(0) = 1/2 + eps/log x exactly in the z -> 0 limit.
    """
    z = complex(z)
    two_la = 2.0 * w.ell * w.A
    plateau = 0.5 + two_la
    factor = plateau * _e_ratio(plateau * z)
    edges = _e_ratio(2.0 * w.A * z) ** w.ell
    return cmath.exp(-(1.0 + two_la) * z) * factor * edges


def _phi_breakpoints(w: SmoothingWeight) -> list[float]:
    two_a = 2.0 * w.A
    a = 0.5 - w.ell * two_a
    knots = [a + k * two_a for k in range(w.ell + 1)]  # rising edge
    knots += [1.0 + k * two_a for k in range(w.ell + 1)]  # falling edge
    return knots


def weight_laplace_quadrature(w: SmoothingWeight, z: complex, nodes: int = 40) -> complex:
    """int phi(t) e^(-zt) dt by Gauss-Legendre on each polynomial piece of phi."""
    z = complex(z)
    pts = _phi_breakpoints(w)
    total = 0.0 + 0.0j
    for a, b in zip(pts[:-1], pts[1:]):
        if b <= a:
            continue
        xs, ws = gauss_legendre_nodes(nodes, a, b)
        phi_vals = weight_phi_array(w, xs)
        total += complex(np.sum(ws * phi_vals * np.exp(-z * xs)))
    return total


def weight_selfcheck(w: SmoothingWeight, zs) -> float:
    """max_z |quadrature(phi e^(-zt)) - Phi(z)|: the gate certifying phi vs Phi."""
    zs = list(zs)
    if not zs:
        raise ValueError("need at least one z")
    return max(abs(weight_laplace_quadrature(w, z) - weight_laplace(w, z)) for z in zs)


# -- smoothed prime-power sums ---------------------------------------------------


def smoothed_psi(series: AngleSeries, m: int, w: SmoothingWeight) -> float:
    """sum over good p, ell >= 1, p^ell <= x e^eps of phi(ell log p/log x) U_m(cos ell theta_p) log p.

    Requires series coverage up to x e^eps (the right edge of the support of
    phi); the left edge makes everything below sqrt(x) e^(-eps) vanish.
    """
    x = w.x
    upper = x * math.exp(w.eps)
    if series.x_max < upper:
        raise RangeExceeded(
            f"need series coverage to x e^eps = {upper:.0f}, have x_max = {series.x_max}"
        )
    log_x = w.log_x
    lower_t = w.support[0]
    total = 0.0
    max_ell = int(math.log(upper) / math.log(2.0)) + 1
    for ell in range(1, max_ell + 1):
        p_hi = upper ** (1.0 / ell)
        if p_hi < 2.0:
            break
        k = int(np.searchsorted(series.primes, math.floor(p_hi), side="right"))
        ps = series.primes[:k]
        thetas = series.thetas[:k]
        logp = np.log(ps)
        args = ell * logp / log_x
        mask = args >= lower_t  # phi vanishes below the support
        if not np.any(mask):
            continue
        args = args[mask]
        logp = logp[mask]
        scaled = ell * thetas[mask]
        # fold ell*theta into [0, pi]
        folded = np.abs(np.mod(scaled + math.pi, 2.0 * math.pi) - math.pi)
        phi_vals = weight_phi_array(w, args)
        total += float(np.sum(phi_vals * cheb_u(m, folded) * logp))
    return total
