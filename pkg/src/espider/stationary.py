"""Stationary law of the level process.

With ``rho = lam/mu`` the stationary level distribution does not depend on
the number of rays or on the switching matrix:

    rho_k = g * rho**k * C(2N, N+k) / C(2N, N),   g = 1 / 2F1(-N, 1; 1+N; -rho)

so that ``rho_0 = g``. All probabilities are handled in log space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gammaln

from .special import SignedLogValue, hyp2f1_terminating, ln_binomial

__all__ = [
    "g",
    "rho_k",
    "log_rho_vector",
    "moments",
    "g_approx",
    "LargeNLimits",
    "limits_large_N",
    "entropy",
    "EntropyArgmax",
    "entropy_argmax",
    "ClassicalReport",
    "classical_comparison",
    "StationarySummary",
    "summary",
]


def _check(rho, N):
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")


@lru_cache(maxsize=1024)
def g(rho: float, N: int) -> SignedLogValue:
    """Empty-system probability, ``1 / 2F1(-N, 1; 1+N; -rho)``."""
    _check(rho, N)
    return hyp2f1_terminating(-int(N), 1.0, 1.0 + N, -rho).reciprocal()


def rho_k(k: int, rho: float, N: int) -> SignedLogValue:
    """Stationary probability of level ``k``."""
    _check(rho, N)
    if not 0 <= k <= N:
        raise ValueError(f"k must lie in 0..{N}, got {k}")
    # grouped so that k = 0 adds exactly zero to log g
    log_val = g(rho, N).log_mag + (k * math.log(rho)
                                   + (ln_binomial(2 * N, N + k) - ln_binomial(2 * N, N)))
    return SignedLogValue(1, log_val)


def log_rho_vector(rho: float, N: int) -> np.ndarray:
    """``log rho_k`` for k = 0..N as an array."""
    _check(rho, N)
    k = np.arange(N + 1)
    ln_binom = gammaln(2 * N + 1) - gammaln(N + k + 1) - gammaln(N - k + 1)
    return g(rho, N).log_mag + (k * math.log(rho) + (ln_binom - ln_binom[0]))


def moments(rho: float, N: int) -> tuple[float, float, float]:
    """Mean, variance and coefficient of variation of the stationary level."""
    _check(rho, N)
    gv = float(g(rho, N))
    s = rho - 1 + gv
    mean = N * s / (1 + rho)
    var = N / (1 + rho) ** 2 * (rho * (2 - gv - gv * N) + N * (1 - gv) * gv)
    assert mean > 0
    cv = math.sqrt(rho * (2 - gv) / (N * s * s) - gv / s)
    return mean, var, cv


def g_approx(rho: float, N: int) -> SignedLogValue:
    """Large-N elementary approximation of ``g`` for ``0 < rho < 1``."""
    if not 0 < rho < 1:
        raise ValueError("the large-N approximation of g needs 0 < rho < 1")
    _check(rho, N)
    L = math.log((rho + 1) ** 2 / (4 * rho))
    L52 = L ** 2.5
    log_num = ((3 - 2 * N) * math.log(2) + math.lgamma(2 * N + 1) - 2 * math.lgamma(N + 1)
               + 0.5 * math.log(math.pi) + 2.5 * math.log(N)
               + 3 * math.log(1 - rho) + 2.5 * math.log(L))
    # (rho-1)^3 is negative, hence the sign bookkeeping
    den = 3 * (rho - 1) ** 3 + N * L52 * ((3 * rho + 1) ** 2 - 8 * N * (rho - 1) ** 2)
    if den == 0:
        raise ZeroDivisionError("approximation denominator vanishes")
    sign = -1 * (1 if den > 0 else -1)
    return SignedLogValue(sign, log_num - math.log(abs(den)))


@dataclass(frozen=True)
class LargeNLimits:
    """Limits of mean, variance and CV as N grows (``inf`` where they diverge)."""

    rho: float
    mean: float
    var: float
    cv: float
    diverges: bool


def limits_large_N(rho: float) -> LargeNLimits:
    if not rho > 0:
        raise ValueError("rho must be positive")
    if rho > 1:
        return LargeNLimits(rho, math.inf, math.inf, 0.0, True)
    if rho == 1:
        return LargeNLimits(rho, math.inf, math.inf, math.sqrt(math.pi / 2 - 1), True)
    L = math.log((rho + 1) ** 2 / (4 * rho))
    L52 = L ** 2.5
    poly = 145 * rho ** 4 + 492 * rho ** 3 + 374 * rho ** 2 + 12 * rho + 1
    var = (3 * (1 - rho) ** 3 / (8 * (1 + rho) ** 2 * L52)
           - poly / (128 * (1 - rho * rho) ** 2))
    cv = math.sqrt(24 * (1 - rho) ** 5 / L52 - poly / 2) / (8 * rho * (1 + rho))
    return LargeNLimits(rho, rho / (1 - rho), var, cv, False)


def entropy(rho: float, N: int) -> float:
    """Shannon entropy (nats) of the stationary level law."""
    lr = log_rho_vector(rho, N)
    lr = lr[lr >= -745.0]
    return float(-np.sum(np.exp(lr) * lr))


@dataclass(frozen=True)
class EntropyArgmax:
    N: int
    argmax: float
    max_entropy: float
    unimodal: bool
    candidates: tuple = ()
    grid: np.ndarray = field(default=None, repr=False, compare=False)
    grid_entropy: np.ndarray = field(default=None, repr=False, compare=False)


def entropy_argmax(N: int, lo: float = 0.1, hi: float = 20.0, tol: float = 1e-3,
                   n_grid: int = 400) -> EntropyArgmax:
    """Maximizer of the entropy over ``rho`` in ``(lo, hi)``.

    A log-spaced grid scan locates the local maxima; each is refined by
    golden-section search. If more than one local maximum survives, all of
    them are returned in ``candidates`` and ``unimodal`` is False.
    """
    grid = np.geomspace(lo, hi, n_grid)
    H = np.array([entropy(r, N) for r in grid])
    peaks = [i for i in range(n_grid)
             if (i == 0 or H[i] >= H[i - 1]) and (i == n_grid - 1 or H[i] >= H[i + 1])]

    def neg(r):
        return -entropy(r, N)

    refined = []
    for i in peaks:
        a, b = grid[max(i - 1, 0)], grid[min(i + 1, n_grid - 1)]
        if 0 < i < n_grid - 1:
            res = minimize_scalar(neg, bracket=(a, grid[i], b), method="golden",
                                  options={"xtol": tol * 1e-3})
            x = float(res.x)
        else:
            x = float(grid[i])
        refined.append((x, entropy(x, N)))
    # merge maxima closer than the tolerance
    refined.sort()
    merged = []
    for x, h in refined:
        if merged and abs(x - merged[-1][0]) < tol:
            if h > merged[-1][1]:
                merged[-1] = (x, h)
        else:
            merged.append((x, h))
    best = max(merged, key=lambda p: p[1])
    return EntropyArgmax(N, best[0], best[1], len(merged) == 1, tuple(merged), grid, H)


@dataclass(frozen=True)
class ClassicalReport:
    """Comparison with the classical one-urn Ehrenfest law at ``rho = 1``."""

    N: int
    q_tilde: np.ndarray
    c_formula: float
    c_direct: float
    max_abs_error: float
    holds: bool


def classical_comparison(N: int, tol: float = 1e-10) -> ClassicalReport:
    """Check ``rho_k = (q_k + q_{-k}) / c`` with ``q_k = C(2N, N-k) 4**-N``.

    ``c`` is evaluated from its hypergeometric closed form and compared with
    the direct value ``1 + q_0``.
    """
    _check(1.0, N)
    k = np.arange(N + 1)
    ln4N = N * math.log(4.0)
    q = np.exp([ln_binomial(2 * N, N - int(i)) - ln4N for i in k])
    # q_{-k} = q_k by symmetry of the binomial
    f = float(hyp2f1_terminating(1 - N, 1.0, N + 2.0, -1.0))
    c_form = (2 * math.exp(ln_binomial(2 * N, N) - ln4N)
              + 2 * math.exp(ln_binomial(2 * N, N - 1) - ln4N) * f)
    c_direct = 1.0 + q[0]
    rho = np.exp(log_rho_vector(1.0, N))
    pred = 2 * q / c_form
    err = float(np.max(np.abs(pred - rho)))
    err = max(err, abs(c_form - c_direct))
    return ClassicalReport(N, q, c_form, c_direct, err, err <= tol)


@dataclass(frozen=True)
class StationarySummary:
    rho: float
    N: int
    log_probs: np.ndarray = field(repr=False)
    mean: float
    variance: float
    cv: float
    entropy: float

    @property
    def probs(self) -> np.ndarray:
        return np.exp(self.log_probs)


def summary(rho: float, N: int) -> StationarySummary:
    lp = log_rho_vector(rho, N)
    m, v, c = moments(rho, N)
    return StationarySummary(rho, N, lp, m, v, c, entropy(rho, N))
