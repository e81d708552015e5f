"""Time-dependent law of the level process.

Two independent routes are provided:

* :func:`transient_oracle` integrates the forward equation of the full
  chain, either by uniformization or by an adaptive Runge-Kutta solver.
* For ``lam == mu`` the probabilities have closed forms built on the roots
  of ``P(x) = x [Q(x) + Q2(x)]`` with
  ``Q(x) = prod_{r<N} (x + 2mu(2r+1))`` and ``Q2(x) = prod_{r<N} (x + 2mu(2r+2))``.

The Laplace transform of ``p(0, t)`` and the generating function
``F(z, t) = E[z**level]`` are also available.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import sparse
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq
from scipy.special import gammaln
from scipy.stats import poisson

from .chain import ChainState, ModelParams, Origin, build_generator, state_index
from .special import SignedLogValue, hyp2f1_terminating, ln_binomial

__all__ = [
    "TransientSolution",
    "transient_oracle",
    "polynomial_P",
    "SpectralDecomposition",
    "roots_of_P",
    "RootIsolationError",
    "SingularConfigurationError",
    "p0_closed",
    "pr_closed",
    "level_probs_closed",
    "laplace_H",
    "pgf_F",
]

_POISSON_TAIL = 1e-14


class RootIsolationError(RuntimeError):
    pass


class SingularConfigurationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class TransientSolution:
    """Law of the chain at time ``time``.

    ``ray_resolved[k, j-1]`` is the probability of level ``k`` on ray ``j``;
    row 0 holds the origin split by last-visited ray.
    """

    time: float
    level_probs: np.ndarray
    ray_resolved: np.ndarray = field(default=None, repr=False)


# ---------------------------------------------------------------------------
# numerical oracle

def _initial_vector(params: ModelParams, init: ChainState) -> np.ndarray:
    v = np.zeros(params.n_states)
    v[state_index(init, params.d)] = 1.0
    return v


def _uniformization(Q: sparse.csr_matrix, v0: np.ndarray, times: np.ndarray) -> np.ndarray:
    exit_rates = -Q.diagonal()
    Lam = 1.02 * float(exit_rates.max())
    out = np.zeros((times.size, v0.size))
    if Lam == 0.0:
        out[:] = v0
        return out
    P = (sparse.identity(Q.shape[0], format="csr") + Q / Lam).T.tocsr()
    lt = Lam * times
    K = int(poisson.isf(_POISSON_TAIL, lt.max())) + 2
    n = np.arange(K + 1)
    W = poisson.pmf(n[None, :], lt[:, None])  # (times, K+1)
    v = v0.copy()
    for i in range(K + 1):
        out += np.outer(W[:, i], v)
        v = P @ v
    return out


def _rk(Q: sparse.csr_matrix, v0: np.ndarray, times: np.ndarray) -> np.ndarray:
    QT = Q.T.tocsr()
    tmax = float(times.max())
    if tmax == 0.0:
        return np.tile(v0, (times.size, 1))
    sol = solve_ivp(lambda _t, p: QT @ p, (0.0, tmax), v0, method="DOP853",
                    t_eval=np.sort(times), rtol=1e-12, atol=1e-15)
    if not sol.success:
        raise RuntimeError(sol.message)
    order = np.argsort(times)
    out = np.empty((times.size, v0.size))
    out[order] = sol.y.T
    return out


def _oracle_matrix(params, times, init, method):
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0):
        raise ValueError("times must be non-negative")
    Q = build_generator(params)
    v0 = _initial_vector(params, init)
    if method == "uniformization":
        return times, _uniformization(Q, v0, times)
    if method == "rk":
        return times, _rk(Q, v0, times)
    raise ValueError(f"unknown method {method!r}")


def transient_oracle(params: ModelParams, t, init: ChainState | None = None,
                     method: str = "uniformization"):
    """Law of the chain at time(s) ``t`` from the forward equation.

    ``method`` is ``"uniformization"`` (Poisson tail cut below 1e-14) or
    ``"rk"`` (DOP853 with rtol 1e-12). A scalar ``t`` gives one
    :class:`TransientSolution`, an array gives a list.
    """
    init = Origin(1) if init is None else init
    times, V = _oracle_matrix(params, t, init, method)
    sols = []
    for ti, v in zip(times, V):
        v = np.clip(v, 0.0, None)
        ray = v.reshape(params.N + 1, params.d)
        sols.append(TransientSolution(float(ti), ray.sum(axis=1), ray))
    return sols[0] if np.ndim(t) == 0 else sols


def _oracle_p0(params: ModelParams, times) -> np.ndarray:
    times, V = _oracle_matrix(params, times, Origin(1), "uniformization")
    return V[:, :params.d].sum(axis=1)


# ---------------------------------------------------------------------------
# polynomial P and its roots (lam == mu)

def _log_Q(x: float, N: int, mu: float, offset: int) -> SignedLogValue:
    """prod_{r<N} (x + 2 mu (2r + offset)) as a signed log."""
    f = x + 2 * mu * (2 * np.arange(N) + offset)
    if np.any(f == 0):
        return SignedLogValue.zero()
    sign = -1 if np.count_nonzero(f < 0) % 2 else 1
    return SignedLogValue(sign, float(np.sum(np.log(np.abs(f)))))


def polynomial_P(x: float, N: int, mu: float) -> SignedLogValue:
    """``P(x) = x [Q(x) + Q2(x)]`` evaluated in product form."""
    if N < 1 or not mu > 0:
        raise ValueError("need N >= 1 and mu > 0")
    if x == 0:
        return SignedLogValue.zero()
    return SignedLogValue.from_float(x) * (_log_Q(x, N, mu, 1) + _log_Q(x, N, mu, 2))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Roots ``alpha`` of P (0 first, then decreasing) and weights ``R = Q/P'``.

    ``log_beta``/``sign_beta`` store ``P'(alpha)`` in signed log form.
    ``residual`` is the worst relative residual |P|/(|x|(|Q|+|Q2|)).
    """

    N: int
    mu: float
    roots: np.ndarray
    weights: np.ndarray
    log_beta: np.ndarray
    sign_beta: np.ndarray
    residual: float


def _phi(x, a1, a2):
    # log|Q2(x)| - log|Q(x)|; on each bracket Q2/Q < 0, so P = 0 iff phi = 0
    return float(np.sum(np.log(np.abs(x + a2))) - np.sum(np.log(np.abs(x + a1))))


@lru_cache(maxsize=64)
def roots_of_P(N: int, mu: float) -> SpectralDecomposition:
    """All ``N + 1`` roots of P with the partial-fraction weights.

    The j-th negative root lies in ``(-4j mu, -(4j-2) mu)``: at the right end
    Q vanishes and at the left end Q2 vanishes, while Q2/Q is negative inside.
    The root is found as the zero of ``log|Q2| - log|Q|`` by Brent's method,
    which never forms the (overflowing) products themselves.
    """
    if N < 1 or not mu > 0:
        raise ValueError("need N >= 1 and mu > 0")
    a1 = 2 * mu * (2 * np.arange(N) + 1)
    a2 = 2 * mu * (2 * np.arange(N) + 2)
    roots = [0.0]
    for j in range(1, N + 1):
        lo, hi = -4 * j * mu, -(4 * j - 2) * mu
        if N % 2 == 1 and j == (N + 1) // 2:
            roots.append(-(2 * N + 1) * mu)  # exact root by symmetry of the factors
            continue
        eps = 1e-13 * abs(lo)
        a, b = lo + eps, hi - eps
        fa, fb = _phi(a, a1, a2), _phi(b, a1, a2)
        if not fa < 0 < fb:
            roots.append(_companion_root(N, mu, lo, hi))
            continue
        roots.append(brentq(_phi, a, b, args=(a1, a2), xtol=1e-15 * abs(lo), rtol=1e-15,
                            maxiter=500))
    roots = np.array(roots)

    weights = np.empty(N + 1)
    log_beta = np.empty(N + 1)
    sign_beta = np.empty(N + 1, dtype=int)
    lnC = ln_binomial(2 * N, N)
    ln4N = N * math.log(4.0)
    # root 0: P'(0) = Q(0) + Q2(0)
    weights[0] = 1.0 / (1.0 + math.exp(ln4N - lnC))
    b0 = _log_Q(0.0, N, mu, 1) + _log_Q(0.0, N, mu, 2)
    log_beta[0], sign_beta[0] = b0.log_mag, b0.sign
    residual = 0.0
    for i, x in enumerate(roots[1:], start=1):
        s1 = float(np.sum(1.0 / (x + a1)))
        s2 = float(np.sum(1.0 / (x + a2)))
        weights[i] = 1.0 / (x * (s1 - s2))
        beta = SignedLogValue.from_float(x * (s1 - s2)) * _log_Q(x, N, mu, 1)
        log_beta[i], sign_beta[i] = beta.log_mag, beta.sign
        residual = max(residual, abs(math.expm1(_phi(x, a1, a2))) / 2)
    if np.any(np.diff(roots) >= 0):
        raise RootIsolationError("roots are not strictly decreasing")
    return SpectralDecomposition(N, mu, roots, weights, log_beta, sign_beta, residual)


def _companion_root(N, mu, lo, hi):
    """Fallback for a bracket without a sign change: eigenvalues of the monic form."""
    coeffs = np.poly1d([1.0])
    coeffs2 = np.poly1d([1.0])
    for r in range(N):
        coeffs *= np.poly1d([1.0, 2 * mu * (2 * r + 1)])
        coeffs2 *= np.poly1d([1.0, 2 * mu * (2 * r + 2)])
    cand = np.roots(((coeffs + coeffs2) / 2.0).c)
    cand = cand[(np.abs(cand.imag) < 1e-8) & (cand.real > lo) & (cand.real < hi)].real
    if cand.size != 1:
        raise RootIsolationError(f"cannot isolate a root of P in ({lo}, {hi})")
    return float(cand[0])


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    return t


def p0_closed(t, N: int, mu: float):
    """``p(0, t)`` for ``lam == mu`` from the spectral expansion."""
    t = _check_t(t)
    sd = roots_of_P(N, float(mu))
    terms = 2 * sd.weights * np.exp(np.multiply.outer(t, sd.roots))
    out = np.array([math.fsum(row) for row in np.atleast_2d(terms)])
    return float(out[0]) if t.ndim == 0 else out


def _hyp(a, b, c, z) -> float:
    return float(hyp2f1_terminating(a, b, c, z))


def pr_closed(r: int, t, N: int, mu: float, guard: float = 1e-9):
    """``p(r, t)`` for ``1 <= r <= N`` and ``lam == mu``.

    Three blocks are summed: a binomial sum in ``exp(-4 mu t)`` and two
    partial-fraction blocks over the roots of P.
    """
    if not 1 <= r <= N:
        raise ValueError(f"r must lie in 1..{N}")
    t = _check_t(t)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    sd = roots_of_P(N, float(mu))
    A = np.abs(sd.roots)
    R = sd.weights
    eA = np.exp(-np.multiply.outer(t, A))  # (times, roots)

    def binom(n, k):
        return math.exp(ln_binomial(n, k)) if 0 <= k <= n else 0.0

    s1 = np.zeros_like(t)
    x = np.exp(-4 * mu * t)
    for l in range(N + 1):
        s1 = s1 + binom(N, l) * (-x) ** l * _hyp(-2 * l, -N + r, -2 * N, 2.0)
    s1 *= binom(2 * N, N + r) / 4.0 ** N

    s2 = np.zeros_like(t)
    s3 = np.zeros_like(t)
    for j in range(N):
        c = binom(N - 1, j) * (-1) ** (N - 1 - j)
        d1 = A - 2 * mu * (2 * N - 1 - 2 * j)
        d2 = A - 4 * mu * (N - j)
        if np.min(np.abs(d1)) < guard * mu or np.min(np.abs(d2)) < guard * mu:
            raise SingularConfigurationError("a root of P coincides with a pole of the expansion")
        blk1 = eA @ (R / d1) - np.exp(-2 * mu * t * (2 * N - 1 - 2 * j)) * np.sum(R / d1)
        blk2 = eA @ (R / d2) - np.exp(-4 * mu * t * (N - j)) * np.sum(R / d2)
        br = (binom(2 * N - 1, N + r) * _hyp(-2 * j, -N + r + 1, -2 * N + 1, 2.0)
              - binom(2 * N - 1, N + r - 1) * _hyp(-2 * j, -N + r, -2 * N + 1, 2.0))
        s2 = s2 + c * br * blk1
        s3 = s3 + c * _hyp(-2 * j, -N + r, -2 * N, 2.0) * blk2
    pref = mu * N / 2.0 ** (2 * N - 2) * (-1) ** (N - r)
    out = s1 + pref * s2 + pref * binom(2 * N, N + r) * s3
    return float(out[0]) if scalar else out


def level_probs_closed(t, N: int, mu: float) -> np.ndarray:
    """Vector ``(p(0,t), ..., p(N,t))`` from the closed forms."""
    return np.array([p0_closed(t, N, mu)] + [pr_closed(r, t, N, mu) for r in range(1, N + 1)])


# ---------------------------------------------------------------------------
# Laplace transform and generating function

def laplace_H(eta: float, params: ModelParams) -> float:
    """Laplace transform of ``p(0, t)`` at ``eta`` (``inf`` at ``eta = 0``)."""
    eta = float(eta)
    if eta < 0:
        raise ValueError("eta must be non-negative")
    if eta == 0.0:
        return math.inf
    lam, mu, N = params.lam, params.mu, params.N
    if lam == mu:
        e = eta / (4 * mu)
        a = gammaln(1 + e) + gammaln(N + 0.5 + e)
        b = gammaln(N + 1 + e) + gammaln(0.5 + e)
        return float((2.0 / eta) / (1.0 + np.exp(b - a)))
    s = lam + mu
    e = eta / s
    z = -lam / mu
    num = mu * hyp2f1_terminating(-N, e, 1 + N + e, z)
    den = (eta * mu * hyp2f1_terminating(1 - N, 1 + e, 1 + N + e, z)
           + (eta * lam * (eta + s) / (s * (N + 1) + eta))
           * hyp2f1_terminating(1 - N, 2 + e, 2 + N + e, z))
    return float(num / den)


def _p0_interpolant(params: ModelParams, t: float):
    nodes = np.union1d(np.concatenate([[0.0], np.geomspace(t * 1e-6, t, 400)]),
                       np.linspace(0.0, t, 1601))
    return CubicSpline(nodes, _oracle_p0(params, nodes))


def pgf_F(z: float, t: float, params: ModelParams) -> float:
    """``E[z**level]`` at time ``t`` for a start at the origin.

    The generating function is a closed-form term minus an integral of
    ``p(0, y)`` over ``[0, t]``; ``p(0, y)`` comes from :func:`p0_closed`
    when ``lam == mu`` and from an interpolated oracle otherwise.
    """
    z, t = float(z), float(t)
    if not 0.0 <= z <= 1.0:
        raise ValueError("z must lie in [0, 1]")
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0.0 or z == 1.0:
        return 1.0
    lam, mu, N = params.lam, params.mu, params.N
    if z == 0.0:
        return p0_closed(t, N, mu) if lam == mu else float(_oracle_p0(params, [t])[0])
    s = lam + mu
    c = z * lam + mu
    E = math.exp(t * s)
    first = ((mu * (z - 1) + c * E) * (lam * (1 - z) + c * E) / (s * s * E * E * z)) ** N
    if lam == mu:
        def p0f(y):
            return p0_closed(y, N, mu)
    else:
        p0f = _p0_interpolant(params, t)

    log_pref = -N * math.log(z) - (2 * N - 1) * math.log(s)

    def integrand(y):
        u = t - y
        eu = math.exp(u * s)
        la = math.log(c * eu - lam * (z - 1))
        lb = math.log(c * eu + mu * (z - 1))
        return float(p0f(y)) * math.exp(N * la + (N - 1) * lb - 2 * N * u * s + log_pref)

    integral = quad(integrand, 0.0, t, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
    return first - mu * N * (1 - z) * integral
