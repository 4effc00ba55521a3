"""Empirical counts, exact discrepancies, and discrepancy-bound machinery.

Angle sets are pushed through the Sato-Tate CDF, which turns equidistribution
against mu_ST into equidistribution against the uniform measure on [0, 1];
all discrepancy work happens there.  "Exact discrepancy" always means the
supremum over all closed subintervals (including degenerate ones, so the
value is never below 1/n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from satotate.angles import AngleSeries
from satotate.curves import CurveSpec, ec_ap
from satotate.errors import DegenerateFit, RangeExceeded, SearchExceeded
from satotate.measure import Interval, cheb_u_table, mu_st, st_cdf
from satotate.primes import PrimeRange, primes_in


def _level_prime_divisors(q: int) -> list[int]:
    out = []
    d = 2
    while d * d <= q:
        if q % d == 0:
            out.append(d)
            while q % d == 0:
                q //= d
        d += 1
    if q > 1:
        out.append(q)
    return out


def pi_of_x(series: AngleSeries, x: int) -> int:
    """pi(x) recovered from the series: good primes <= x plus ramified p <= x."""
    good, _ = series.upto(x)
    ramified = sum(1 for p in _level_prime_divisors(series.meta.level_q) if p <= x)
    return int(good.size) + ramified


def _check_range(series: AngleSeries, x: int) -> None:
    if x > series.x_max:
        raise RangeExceeded(f"x = {x} exceeds series coverage x_max = {series.x_max}")


def count_in_interval(series: AngleSeries, interval: Interval, x: int) -> int:
    """pi_{f,I}(x): good primes p <= x with theta_p in the closed interval."""
    _check_range(series, x)
    _, thetas = series.upto(x)
    return int(np.count_nonzero((thetas >= interval.alpha) & (thetas <= interval.beta)))


def common_good(series1: AngleSeries, series2: AngleSeries, x: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(primes, thetas1, thetas2) over primes <= x good for both forms."""
    p1, t1 = series1.upto(x)
    p2, t2 = series2.upto(x)
    common, i1, i2 = np.intersect1d(p1, p2, assume_unique=True, return_indices=True)
    return common, t1[i1], t2[i2]


def joint_count(
    series1: AngleSeries, series2: AngleSeries, i1: Interval, i2: Interval, x: int
) -> int:
    """Joint count over primes good for both forms, per the product indicator."""
    _check_range(series1, x)
    _check_range(series2, x)
    _, t1, t2 = common_good(series1, series2, x)
    in1 = (t1 >= i1.alpha) & (t1 <= i1.beta)
    in2 = (t2 >= i2.alpha) & (t2 <= i2.beta)
    return int(np.count_nonzero(in1 & in2))


# -- exact interval discrepancy -------------------------------------------------


def uniform_interval_discrepancy(u: np.ndarray) -> float:
    """Exact sup over closed intervals [a,b] of |#{u_i in [a,b]}/n - (b-a)|.

    Sorted sweep: with g_i = i/n - u_(i) the overshoot side is
    max_{i<=j}(g_j - g_i) + 1/n (intervals pinched onto points), and with
    h_i = u_(i) - i/n plus sentinels u_0 = 0, u_{n+1} = 1 the undershoot side
    is max_{i<j}(h_j - h_i) + 1/n (open gaps between points).  O(n log n).
    """
    u = np.sort(np.asarray(u, dtype=float))
    n = u.size
    if n == 0:
        return 0.0
    idx = np.arange(1, n + 1) / n
    g = idx - u
    over = float(np.max(g - np.minimum.accumulate(g))) + 1.0 / n
    h = np.concatenate(([0.0], u - idx, [-1.0 / n]))
    under = float(np.max(h - np.minimum.accumulate(h))) + 1.0 / n
    return max(over, under)


def exact_discrepancy_1d(series: AngleSeries, x: int) -> float:
    """Exact all-interval discrepancy of {F_ST(theta_p) : p <= x} vs uniform."""
    _check_range(series, x)
    _, thetas = series.upto(x)
    if thetas.size == 0:
        return 0.0
    return uniform_interval_discrepancy(st_cdf(thetas))


def erdos_turan_bound(series: AngleSeries, x: int, M: int) -> float:
    """One-dimensional Erdos-Turan bound for the CDF-transformed angles.

    1/(M+1) + (3/n) sum_{m<=M} |S_m|/m with S_m = sum_p e(m u_p); dominates
    the exact all-interval discrepancy for every point set and every M >= 1.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    _check_range(series, x)
    _, thetas = series.upto(x)
    n = thetas.size
    if n == 0:
        raise ValueError("series has no points up to x")
    base = np.exp(2j * math.pi * st_cdf(thetas))
    # e(m u) = e(u)^m: one running product keeps memory at O(n) for any M;
    # the unit-modulus drift is ~M eps, far below every tolerance in play
    cur = np.ones_like(base)
    total = 0.0
    for m in range(1, M + 1):
        cur = cur * base
        total += abs(cur.sum()) / m
    return 1.0 / (M + 1) + (3.0 / n) * total


# -- Chebyshev-sum bound shapes ---------------------------------------------------

DEFAULT_ET_CONSTANT = 4.0


def cheb_sum_bound(
    series: AngleSeries,
    x: int,
    M: int,
    c_et1: float = DEFAULT_ET_CONSTANT,
) -> float:
    """c * (pi(x)/M + sum_{m<=M} |sum_p U_m(cos theta_p)| / m).

    An absolute-count bound candidate; the hidden constant is configurable
    and reports record whether the candidate dominates the observed error
    rather than asserting it.
    """
    if M < 3:
        raise ValueError("M must be >= 3")
    if c_et1 <= 0:
        raise ValueError("c_et1 must be positive")
    _check_range(series, x)
    _, thetas = series.upto(x)
    table = cheb_u_table(M, thetas)
    sums = np.abs(table[1:].sum(axis=1))
    ms = np.arange(1, M + 1)
    return c_et1 * (pi_of_x(series, x) / M + float(np.sum(sums / ms)))


def cheb_sum_bound_2d(
    series1: AngleSeries,
    series2: AngleSeries,
    x: int,
    M: int,
    c_et2: float = DEFAULT_ET_CONSTANT,
) -> float:
    """Joint bound shape over pairs 0 <= m1, m2 <= M, (m1, m2) != (0, 0).

    c * (pi(x)/M + sum |sum_p U_{m1} U_{m2}| / ((m1+1)(m2+1))), the pair sum
    taken over primes good for both forms; marginal pairs (m, 0) and (0, m)
    are included, so M = 3 expands to 15 terms.
    """
    if M < 3:
        raise ValueError("M must be >= 3")
    _, t1, t2 = common_good(series1, series2, x)
    _check_range(series1, x)
    _check_range(series2, x)
    u1 = cheb_u_table(M, t1)
    u2 = cheb_u_table(M, t2)
    cross = np.abs(u1 @ u2.T)  # (M+1, M+1); [m1, m2] = |sum_p U_m1 U_m2|
    weights = 1.0 / np.outer(np.arange(1, M + 2), np.arange(1, M + 2))
    total = float(np.sum(cross * weights) - cross[0, 0] * weights[0, 0])
    return float(c_et2 * (pi_of_x(series1, x) / M + total))


def joint_box_discrepancy(
    series1: AngleSeries, series2: AngleSeries, x: int, grid: int = 64
) -> float:
    """Sup over boxes with corners on a (grid+1)^2 lattice of |empirical - area|.

    Coordinates are CDF-transformed, so the product measure of a box is its
    area.  Boxes are [i1/G, i2/G) x [j1/G, j2/G) via binned prefix sums; the
    restriction to lattice corners under-resolves the true sup by at most
    2 * (2/G) by continuity of the uniform measure.
    """
    if grid < 2:
        raise ValueError("grid must be >= 2")
    _check_range(series1, x)
    _check_range(series2, x)
    _, t1, t2 = common_good(series1, series2, x)
    n = t1.size
    if n == 0:
        return 0.0
    u = np.clip((st_cdf(t1) * grid).astype(np.int64), 0, grid - 1)
    v = np.clip((st_cdf(t2) * grid).astype(np.int64), 0, grid - 1)
    hist = np.zeros((grid, grid))
    np.add.at(hist, (u, v), 1.0)
    # prefix[i, j] = #points with u-bin < i, v-bin < j
    prefix = np.zeros((grid + 1, grid + 1))
    prefix[1:, 1:] = hist.cumsum(axis=0).cumsum(axis=1)
    edges = np.arange(grid + 1) / grid
    worst = 0.0
    for i1 in range(grid):
        for i2 in range(i1 + 1, grid + 1):
            row = prefix[i2] - prefix[i1]  # counts in u-range, cumulative in v
            counts = row[None, :] - row[:, None]  # [j1, j2]
            areas = (edges[i2] - edges[i1]) * (edges[None, :] - edges[:, None])
            dev = np.abs(counts / n - areas)
            worst = max(worst, float(np.max(np.triu(dev, k=1))))
    return worst


# -- least prime with theta_p in I ------------------------------------------------

DEFAULT_SEARCH_CEILING = 10**7
DEFAULT_GRH_LEAST_PRIME_C = 100.0


@dataclass(frozen=True)
class LeastPrimeResult:
    p: int
    grh_ceiling: int


def grh_least_prime_ceiling(k: int, q: int, mu: float, c: float = DEFAULT_GRH_LEAST_PRIME_C) -> int:
    """ceil(c * mu^-4 * log(kq/mu)^2): the GRH-shape ceiling for comparison."""
    if mu <= 0:
        raise ValueError("interval must have positive measure")
    return math.ceil(c * mu**-4 * math.log(k * q / mu) ** 2)


def least_prime_in_interval(
    source: "CurveSpec | AngleSeries",
    interval: Interval,
    ceiling: int = DEFAULT_SEARCH_CEILING,
    c: float = DEFAULT_GRH_LEAST_PRIME_C,
) -> LeastPrimeResult:
    """Smallest good prime with theta_p in I, plus the GRH bound-shape value.

    A CurveSpec source streams primes and computes a_p on demand, so no
    prebuilt series bounds the search; an AngleSeries source scans its
    cached points (and cannot see past its x_max).
    """
    mu = mu_st(interval)
    if mu <= 0.0:
        raise ValueError("interval must have positive Sato-Tate measure")

    if isinstance(source, AngleSeries):
        k, q = source.meta.weight_k, source.meta.level_q
        bound = grh_least_prime_ceiling(k, q, mu, c)
        limit = min(ceiling, source.x_max)
        mask = (source.thetas >= interval.alpha) & (source.thetas <= interval.beta)
        mask &= source.primes <= limit
        hits = np.flatnonzero(mask)
        if hits.size == 0:
            raise SearchExceeded(f"no good prime <= {limit} with theta_p in I")
        return LeastPrimeResult(int(source.primes[hits[0]]), bound)

    curve = source
    bound = grh_least_prime_ceiling(2, curve.conductor, mu, c)
    from satotate.angles import angle_from_ap  # local import to avoid a cycle

    for p in primes_in(PrimeRange(2, ceiling)):
        if curve.conductor % p == 0:
            continue
        theta = angle_from_ap(float(ec_ap(curve, p)), p, 2)
        if interval.alpha <= theta <= interval.beta:
            return LeastPrimeResult(p, bound)
    raise SearchExceeded(f"no good prime <= {ceiling} with theta_p in I")


# -- theoretical bound shapes and decay fits --------------------------------------


def theoretical_bound_curve(
    x: int, k: int, q: int, variant: str, c: float = 1.0, pi_x: int | None = None
) -> float:
    """Evaluate a named bound shape with a user constant.

    'unconditional-st1': c * pi(x) * log(kq log x) / sqrt(log x)
    'grh-thm13':         c * x^(3/4) * log(kq x) / log x
    The absolute constants are non-explicit, so c exists for empirical
    calibration only.
    """
    if x < 3:
        raise ValueError("x must be >= 3")
    if c <= 0:
        raise ValueError("c must be positive")
    lx = math.log(x)
    if variant == "unconditional-st1":
        if pi_x is None:
            from satotate.primes import prime_count

            pi_x = prime_count(x)
        return c * pi_x * math.log(k * q * lx) / math.sqrt(lx)
    if variant == "grh-thm13":
        return c * x**0.75 * math.log(k * q * x) / lx
    raise ValueError(f"unknown variant {variant!r}")


def fit_decay_exponent(xs, errors) -> tuple[float, float]:
    """(slope, intercept) of log(error) against log(x), by least squares."""
    xs = np.asarray(xs, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if xs.size != errors.size or xs.size < 3:
        raise DegenerateFit("need at least 3 samples")
    if np.any(errors <= 0):
        raise DegenerateFit("errors must be positive")
    if np.any(np.diff(xs) <= 0):
        raise DegenerateFit("xs must be strictly increasing")
    slope, intercept = np.polyfit(np.log(xs), np.log(errors), 1)
    return float(slope), float(intercept)


# -- reports -----------------------------------------------------------------------


@dataclass(frozen=True)
class DiscrepancyReport:
    x: int
    pi_x: int
    count: int
    expected: float
    error_abs: float
    exact_sup_discrepancy: float
    et_bound: float
    cheb_bound: float

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "pi_x": self.pi_x,
            "count": self.count,
            "expected": self.expected,
            "error_abs": self.error_abs,
            "exact_sup_discrepancy": self.exact_sup_discrepancy,
            "et_bound": self.et_bound,
            "cheb_bound": self.cheb_bound,
        }


@dataclass(frozen=True)
class JointReport:
    x: int
    pi_x: int
    joint_count: int
    expected: float
    error_abs: float
    box_discrepancy_grid: float
    cheb2_bound: float

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "pi_x": self.pi_x,
            "joint_count": self.joint_count,
            "expected": self.expected,
            "error_abs": self.error_abs,
            "box_discrepancy_grid": self.box_discrepancy_grid,
            "cheb2_bound": self.cheb2_bound,
        }


def discrepancy_report(
    series: AngleSeries,
    interval: Interval,
    x: int,
    M: int = 50,
    c_et1: float = DEFAULT_ET_CONSTANT,
) -> DiscrepancyReport:
    pi_x = pi_of_x(series, x)
    count = count_in_interval(series, interval, x)
    expected = mu_st(interval) * pi_x
    return DiscrepancyReport(
        x=x,
        pi_x=pi_x,
        count=count,
        expected=expected,
        error_abs=abs(count - expected),
        exact_sup_discrepancy=exact_discrepancy_1d(series, x),
        et_bound=erdos_turan_bound(series, x, M),
        cheb_bound=cheb_sum_bound(series, x, M, c_et1),
    )


def joint_report(
    series1: AngleSeries,
    series2: AngleSeries,
    i1: Interval,
    i2: Interval,
    x: int,
    M: int = 10,
    grid: int = 64,
    c_et2: float = DEFAULT_ET_CONSTANT,
) -> JointReport:
    pi_x = pi_of_x(series1, x)
    jc = joint_count(series1, series2, i1, i2, x)
    expected = mu_st(i1) * mu_st(i2) * pi_x
    return JointReport(
        x=x,
        pi_x=pi_x,
        joint_count=jc,
        expected=expected,
        error_abs=abs(jc - expected),
        box_discrepancy_grid=joint_box_discrepancy(series1, series2, x, grid),
        cheb2_bound=cheb_sum_bound_2d(series1, series2, x, M, c_et2),
    )
