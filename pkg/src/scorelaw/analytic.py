"""Closed-form limit distribution of the score process and the exact
expectation recursion for the simulation kernel.

The limiting fraction of individuals with score s is

    c(u, s) = (m/a) * G(s + b/a) * G(u + (b+1)/a)
              / (G(s + (b+a+1)/a) * G(u + b/a)),

with G the gamma function, equivalently the recurrence
c(u,u) = m/(a*u+b+1), c(u,s) = c(u,s-1) * (a*s-a+b)/(a*s+b+1), and the
tail behaves like coefficient * s^(-(1+1/a)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln
from scipy.stats import binom

from .params import ParameterError, SimParams


def _check_domain(u: int, a: float, b: float, m: float) -> None:
    if not a > 0:
        raise ParameterError(f"a must be positive, got {a}")
    if b < 0:
        raise ParameterError(f"b must be nonnegative, got {b}")
    if not m > 0:
        raise ParameterError(f"m must be positive, got {m}")
    if u < 1:
        raise ParameterError(f"u must be >= 1, got {u}")


@dataclass
class LimitDistribution:
    """c(u, s) tabulated on s = u .. s_max, with its tail asymptote."""

    u: int
    a: float
    b: float
    m: float
    support: np.ndarray  # integer scores u..s_max
    values: np.ndarray  # c(u, s) per support entry
    tail_coefficient: float
    exponent: float

    def __getitem__(self, s: int) -> float:
        if not (self.u <= s <= self.support[-1]):
            raise KeyError(s)
        return float(self.values[s - self.u])

    def as_dict(self) -> dict[int, float]:
        return {int(s): float(c) for s, c in zip(self.support, self.values)}


def _lgamma_shift(z, d: float):
    """log Gamma(z + d) - log Gamma(z), elementwise for z >= 1, d >= 0.

    Subtracting two gammaln values loses ~5 digits by z = 1e6 (each is of
    order z*log(z) while the difference is of order d*log(z)), so the
    difference is built directly: integer part of d as a product of log
    factors, fractional part via a Stirling-series difference evaluated at
    arguments shifted above 32.
    """
    z = np.asarray(z, dtype=float)
    total = np.zeros_like(z)
    k = int(math.floor(d))
    f = d - k
    for j in range(k):
        total += np.log(z + f + j)
    if f > 1e-15:
        shift_correction = np.zeros_like(z)
        zs = z.copy()
        while True:
            low = zs < 32.0
            if not low.any():
                break
            shift_correction[low] += np.log1p(f / zs[low])
            zs[low] += 1.0
        diff = (zs - 0.5) * np.log1p(f / zs) + f * np.log(zs + f) - f
        for coeff, power in ((1 / 12, 1), (-1 / 360, 3), (1 / 1260, 5), (-1 / 1680, 7)):
            diff += coeff * ((zs + f) ** -power - zs**-power)
        total += diff - shift_correction
    return total


def c_gamma(u: int, s, a: float, b: float, m: float):
    """Limiting fraction c(u, s), evaluated through log-gamma differences.

    Accepts a scalar or array s; raw gamma overflows double precision near
    argument 171 while this form is stable and ~1e-14 accurate for s up to
    1e6 and beyond.
    """
    _check_domain(u, a, b, m)
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < u):
        raise ParameterError(f"s must be >= u={u}")
    log_c = (
        math.log(m / a)
        + _lgamma_shift(np.array(u + b / a), 1 / a)
        - _lgamma_shift(s_arr + b / a, (a + 1) / a)
    )
    out = np.exp(log_c)
    return float(out) if np.isscalar(s) else out


def c_recurrence(u: int, s_max: int, a: float, b: float, m: float) -> LimitDistribution:
    """Tabulate c(u, s) for s in [u, s_max] by the ratio recurrence."""
    _check_domain(u, a, b, m)
    if s_max < u:
        raise ParameterError(f"s_max={s_max} must be >= u={u}")
    s = np.arange(u, s_max + 1, dtype=float)
    c0 = m / (a * u + b + 1)
    if s_max == u:
        values = np.array([c0])
    else:
        ratios = (a * s[1:] - a + b) / (a * s[1:] + b + 1)
        values = c0 * np.concatenate([[1.0], np.cumprod(ratios)])
    coeff, expo = tail_coefficient(u, a, b, m)
    return LimitDistribution(u, a, b, m, s.astype(int), values, coeff, expo)


def tail_coefficient(u: int, a: float, b: float, m: float) -> tuple[float, float]:
    """Constant and exponent of the tail asymptote c(u,s) ~ coeff * s^(-exponent)."""
    _check_domain(u, a, b, m)
    log_coeff = (
        math.log(m / a) + gammaln(u + (b + 1) / a) - gammaln(u + b / a)
    )
    return math.exp(log_coeff), 1.0 + 1.0 / a


def mass_identity_check(u: int, a: float, b: float, m: float, s_max: int) -> float:
    """Residual m - sum_{s<=s_max} c(u,s); positive and ~ s_max^(-1/a)."""
    dist = c_recurrence(u, s_max, a, b, m)
    return m - float(np.sum(dist.values))


def deviation_threshold(s: int, n: int) -> float:
    """Concentration radius s * sqrt(n) * ln(n) for X_n(s) around its mean."""
    return s * math.sqrt(n) * math.log(n)


@dataclass
class ExpectationGrid:
    """Exact E X_n(s) for the simulation kernel on n in [n0, n_max],
    s in [u, s_max]; escaped_mass[n] accounts for expectation mass that the
    recursion pushed above s_max."""

    params: SimParams
    n_max: int
    s_max: int
    E: np.ndarray  # shape (n_max - n0 + 1, s_max - u + 1)
    escaped_mass: np.ndarray

    def row(self, n: int) -> np.ndarray:
        return self.E[n - self.params.n0]

    def value(self, n: int, s: int) -> float:
        return float(self.E[n - self.params.n0, s - self.params.u])

    def row_sum(self, n: int) -> float:
        return float(self.E[n - self.params.n0].sum()) + float(
            self.escaped_mass[n - self.params.n0]
        )


def expected_histogram_oracle(
    params: SimParams, n_max: int, s_max: int, allow_clamp: bool = False
) -> ExpectationGrid:
    """Integrate the kernel's exact expectation recursion.

    E X_{n+1}(s) = sum_j E X_n(s-j) * P(Binomial(t, (a(s-j)+b)/(t n)) = j)
                   + m * 1{s=u}.

    Scores only move upward, so truncating at s_max leaves every retained
    entry exact; the outflow is accumulated in escaped_mass.
    """
    if s_max < params.u:
        raise ParameterError(f"s_max={s_max} must be >= u={params.u}")
    if n_max < params.n0:
        raise ParameterError(f"n_max={n_max} must be >= n0={params.n0}")
    u, t, a, b, m = params.u, params.t, params.a, params.b, params.m
    n0 = params.n0
    width = s_max - u + 1
    rows = n_max - n0 + 1
    E = np.zeros((rows, width))
    escaped = np.zeros(rows)
    E[0, 0] = math.ceil(m)

    scores = np.arange(u, s_max + 1, dtype=float)
    weights = a * scores + b
    log_binom = np.array(
        [math.lgamma(t + 1) - math.lgamma(j + 1) - math.lgamma(t - j + 1) for j in range(t + 1)]
    )

    for idx in range(rows - 1):
        n = n0 + idx
        pi = weights / (t * n)
        cur = E[idx]
        if np.any((pi > 1.0) & (cur > 0)):
            if not allow_clamp:
                raise ArithmeticError(
                    f"selection probability above 1 at n={n} where expectation "
                    "mass is present; pass allow_clamp=True to clip"
                )
        pi = np.clip(pi, 0.0, 1.0)
        # pmf[j, s-index] of the per-individual increment, via logs to keep
        # the edge cases pi in {0, 1} exact.
        with np.errstate(divide="ignore", invalid="ignore"):
            log_pi = np.where(pi > 0, np.log(np.where(pi > 0, pi, 1.0)), -np.inf)
            log_1mpi = np.where(pi < 1, np.log1p(-np.where(pi < 1, pi, 0.0)), -np.inf)
        nxt = np.zeros(width)
        out_mass = 0.0
        for j in range(t + 1):
            lp = log_binom[j]
            lp = lp + (j * log_pi if j else 0.0) + ((t - j) * log_1mpi if j < t else 0.0)
            pmf_j = np.exp(lp)
            contrib = cur * pmf_j
            if j == 0:
                nxt += contrib
            else:
                nxt[j:] += contrib[:-j] if j < width else 0.0
                out_mass += contrib[max(width - j, 0):].sum()
        nxt[0] += m
        E[idx + 1] = nxt
        escaped[idx + 1] = escaped[idx] + out_mass

    return ExpectationGrid(params, n_max, s_max, E, escaped)


def kernel_increment_pmf(params: SimParams, s: int, n: int) -> np.ndarray:
    """Exact one-step increment pmf Binomial(t, (a*s+b)/(t*n)) for one
    individual of score s at time n (requires the probability to be <= 1)."""
    pi = params.weight(s) / (params.t * n)
    if pi > 1:
        raise ParameterError(f"(a*s+b)/(t*n) = {pi} > 1 at s={s}, n={n}")
    return binom.pmf(np.arange(params.t + 1), params.t, pi)
