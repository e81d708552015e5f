"""Ornstein-Uhlenbeck diffusion on a spider (d half-lines glued at 0).

Under the scaling ``lam = alpha/2 + gamma*eps/2``, ``mu = alpha/2 - gamma*eps/2``
with ``N*eps**2 -> nu``, the rescaled level ``eps*N(t)`` behaves like an OU
process with drift ``-alpha (x - beta)`` and infinitesimal variance
``sigma2 = alpha*nu``, where ``beta = gamma*nu/alpha``. At the vertex the
process reflects and picks a new ray from the switching matrix.

Its stationary density is a truncated Gaussian,

    w(x) = exp(-(2 alpha x / sigma2) (x/2 - beta)) / norm_Q,

times the stationary vector of the switching chain on each ray.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu
from scipy.special import log_ndtr, ndtr

from .chain import as_switch_matrix, switch_stationary

__all__ = [
    "DiffusionParams",
    "scale_params",
    "rates_to_diffusion",
    "norm_Q",
    "stationary_density_w",
    "ray_density",
    "moments_X",
    "SpiderState",
    "SpiderPath",
    "simulate_spider_ou",
    "empirical_density_l1",
    "ray_occupancy",
    "GridDensity",
    "CFLError",
    "fokker_planck_evolve",
]


@dataclass(frozen=True)
class DiffusionParams:
    alpha: float
    gamma: float
    epsilon: float
    nu: float

    def __post_init__(self):
        if not self.alpha > 0 or not self.nu > 0 or not self.epsilon > 0:
            raise ValueError("alpha, nu and epsilon must be positive")
        if abs(self.gamma) * self.epsilon >= self.alpha:
            raise ValueError("|gamma|*epsilon must be below alpha (rates would be negative)")

    @property
    def sigma2(self) -> float:
        return self.alpha * self.nu

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    @property
    def beta(self) -> float:
        return self.gamma * self.nu / self.alpha

    @property
    def lam(self) -> float:
        return self.alpha / 2 + self.gamma * self.epsilon / 2

    @property
    def mu(self) -> float:
        return self.alpha / 2 - self.gamma * self.epsilon / 2

    @classmethod
    def from_limit(cls, alpha: float, sigma2: float, beta: float,
                   epsilon: float | None = None) -> "DiffusionParams":
        """Build from the limit parameters (alpha, sigma2, beta)."""
        nu = sigma2 / alpha
        gamma = beta * alpha / nu
        if epsilon is None:
            epsilon = 1.0 if gamma == 0 else min(1.0, 0.5 * alpha / abs(gamma))
        return cls(alpha, gamma, epsilon, nu)


def scale_params(alpha: float, gamma: float, nu: float, epsilon: float) -> DiffusionParams:
    return DiffusionParams(alpha, gamma, epsilon, nu)


def rates_to_diffusion(lam: float, mu: float, epsilon: float, N: int) -> DiffusionParams:
    """Inverse map: ``alpha = lam + mu``, ``gamma = (lam - mu)/eps``, ``nu = N eps**2``."""
    return DiffusionParams(lam + mu, (lam - mu) / epsilon, epsilon, N * epsilon ** 2)


def _a(p: DiffusionParams) -> float:
    return math.sqrt(p.alpha) * p.beta / p.sigma


def _log_norm_Q(p: DiffusionParams) -> float:
    # log[(sigma sqrt(pi) / (2 sqrt(alpha))) (1 + erf(a)) exp(a^2)], with
    # 1 + erf(a) = 2 Phi(a sqrt 2) to stay finite for large |a|
    a = _a(p)
    return (math.log(p.sigma * math.sqrt(math.pi) / (2 * math.sqrt(p.alpha)))
            + math.log(2.0) + float(log_ndtr(a * math.sqrt(2.0))) + a * a)


def norm_Q(p: DiffusionParams) -> float:
    """Normalizing constant of ``w``."""
    return math.exp(_log_norm_Q(p))


def stationary_density_w(x, p: DiffusionParams):
    """Stationary density of the distance from the vertex."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be non-negative")
    out = np.exp(-(2 * p.alpha * x / p.sigma2) * (x / 2 - p.beta) - _log_norm_Q(p))
    return float(out) if out.ndim == 0 else out


def ray_density(x, j: int, p: DiffusionParams, C) -> float:
    """Joint stationary density of position ``x`` on ray ``j`` (1-based)."""
    pi = switch_stationary(C)
    return stationary_density_w(x, p) * pi[j - 1]


def _edge_ratio(p: DiffusionParams) -> float:
    # exp(-a^2) / (1 + erf(a))
    a = _a(p)
    return math.exp(-a * a - math.log(2.0) - float(log_ndtr(a * math.sqrt(2.0))))


def moments_X(p: DiffusionParams) -> tuple[float, float]:
    """Mean and variance of the stationary distance from the vertex."""
    s2a = p.sigma2 / (2 * p.alpha)
    if p.beta == 0:
        return p.sigma / math.sqrt(math.pi * p.alpha), s2a * (1 - 2 / math.pi)
    r = _edge_ratio(p)
    a = _a(p)
    # beta (1 + sigma r / (sqrt(pi alpha) beta)) written without dividing by beta
    mean = p.beta + p.sigma * r / math.sqrt(math.pi * p.alpha)
    var = s2a * (1 - (2 / math.pi) * r * r - (2 * a / math.sqrt(math.pi)) * r)
    return mean, var


# ---------------------------------------------------------------------------
# SDE simulation

@dataclass(frozen=True)
class SpiderState:
    x: float = 0.0
    ray: int = 1


@dataclass(frozen=True)
class SpiderPath:
    """Recorded positions and rays (1-based) of ``n_paths`` independent lanes.

    ``switch_counts[l, j]`` counts vertex contacts on ray l+1 that moved the
    process to ray j+1.
    """

    times: np.ndarray
    x: np.ndarray
    ray: np.ndarray
    switch_counts: np.ndarray
    dt: float
    seed: int


def simulate_spider_ou(p: DiffusionParams, C, horizon: float, dt: float,
                       init: SpiderState | None = None, seed: int = 0, n_paths: int = 1,
                       record_every: int = 1) -> SpiderPath:
    """Euler-Maruyama paths of the OU process on the spider.

    Each step is ``x' = x - alpha (x - beta) dt + sigma sqrt(dt) xi``. A step
    ending at or below 0 is a vertex contact: the position reflects to |x'|
    and the ray is redrawn once from row ``l`` of ``C`` (``l`` the current ray).
    """
    C = as_switch_matrix(C)
    if not dt > 0 or not horizon > dt:
        raise ValueError("need dt > 0 and horizon > dt")
    if p.alpha * dt >= 0.5:
        raise ValueError(f"unstable step: alpha*dt = {p.alpha * dt} >= 0.5")
    init = SpiderState() if init is None else init
    d = C.shape[0]
    cumC = np.cumsum(C, axis=1)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    n_steps = int(round(horizon / dt))
    n_rec = n_steps // record_every + 1
    xs = np.empty((n_paths, n_rec))
    rays = np.empty((n_paths, n_rec), dtype=np.int64)
    x = np.full(n_paths, float(init.x))
    ray = np.full(n_paths, init.ray - 1, dtype=np.int64)
    xs[:, 0], rays[:, 0] = x, ray
    switches = np.zeros((d, d), dtype=np.int64)
    drift = 1.0 - p.alpha * dt
    shift = p.alpha * p.beta * dt
    noise = p.sigma * math.sqrt(dt)
    for n in range(1, n_steps + 1):
        x = x * drift + shift + noise * rng.standard_normal(n_paths)
        u = rng.random(n_paths)
        hit = x <= 0.0
        if hit.any():
            x[hit] = -x[hit]
            old = ray[hit]
            new = np.minimum((u[hit, None] >= cumC[old]).sum(axis=1), d - 1)
            np.add.at(switches, (old, new), 1)
            ray[hit] = new
        if n % record_every == 0:
            xs[:, n // record_every], rays[:, n // record_every] = x, ray
    times = np.arange(n_rec) * dt * record_every
    return SpiderPath(times, xs, rays + 1, switches, dt, seed)


def _post_burn(path: SpiderPath, burn_in: float):
    return path.times >= burn_in


def empirical_density_l1(path: SpiderPath, p: DiffusionParams, burn_in: float,
                         n_bins: int = 40, x_max: float | None = None) -> float:
    """L1 distance between the pooled post-burn-in histogram and ``w``.

    Bins cover ``[0, x_max]``; mass beyond ``x_max`` forms one extra bin.
    """
    keep = _post_burn(path, burn_in)
    sample = path.x[:, keep].ravel()
    if x_max is None:
        x_max = max(p.beta, 0.0) + 5 * p.sigma / math.sqrt(2 * p.alpha)
    edges = np.linspace(0.0, x_max, n_bins + 1)
    counts, _ = np.histogram(sample, bins=edges)
    emp = np.append(counts, np.count_nonzero(sample > x_max)) / sample.size
    # exact bin masses of w from the cdf
    cdf = _w_cdf(edges, p)
    mass = np.append(np.diff(cdf), 1.0 - cdf[-1])
    return float(np.abs(emp - mass).sum())


def _w_cdf(x, p: DiffusionParams):
    # w is a N(beta, sigma2/(2 alpha)) density restricted to [0, inf)
    s = math.sqrt(p.sigma2 / (2 * p.alpha))
    lo = ndtr(-p.beta / s)
    return (ndtr((np.asarray(x) - p.beta) / s) - lo) / (1.0 - lo)


def ray_occupancy(path: SpiderPath, burn_in: float) -> tuple[np.ndarray, np.ndarray]:
    """Fraction of post-burn-in time on each ray, and its standard error across lanes."""
    keep = _post_burn(path, burn_in)
    r = path.ray[:, keep]
    d = path.switch_counts.shape[0]
    per_lane = np.stack([(r == j + 1).mean(axis=1) for j in range(d)], axis=1)
    mean = per_lane.mean(axis=0)
    n = per_lane.shape[0]
    se = per_lane.std(axis=0, ddof=1) / math.sqrt(n) if n > 1 else np.full(d, np.nan)
    return mean, se


# ---------------------------------------------------------------------------
# Fokker-Planck solver

class CFLError(ValueError):
    pass


@dataclass(frozen=True)
class GridDensity:
    """Cell-average density on a uniform grid of ``[0, x_max]``."""

    x: np.ndarray
    dx: float
    h: np.ndarray
    t: float = 0.0
    tail_mass: float = 0.0
    snapshots: list = field(default_factory=list, repr=False)

    @property
    def mass(self) -> float:
        return float(math.fsum(self.h * self.dx))

    def l1_to(self, f) -> float:
        ref = f(self.x) if callable(f) else np.asarray(f)
        return float(np.sum(np.abs(self.h - ref)) * self.dx)


def _bernoulli(z):
    z = np.asarray(z, dtype=float)
    out = np.ones_like(z)
    small = np.abs(z) < 1e-8
    zs = z[~small]
    out[~small] = zs / np.expm1(zs)
    out[small] = 1.0 - z[small] / 2.0
    return out


def _fp_operator(p: DiffusionParams, n_cells: int, dx: float) -> sparse.csc_matrix:
    """Scharfetter-Gummel finite-volume operator with zero flux at both ends.

    For a linear drift the exponential fitting is exact across a cell, so
    the discrete steady state is proportional to ``w`` at the cell centres.
    """
    D = p.sigma2 / 2.0
    xf = dx * np.arange(1, n_cells)  # interior faces
    pe = -p.alpha * (xf - p.beta) * dx / D
    a_left = D / dx * _bernoulli(-pe)   # weight on the left cell
    a_right = D / dx * _bernoulli(pe)   # weight on the right cell
    # flux_f = a_left h_i - a_right h_{i+1}; dh_i/dt = (flux_{i-1/2} - flux_{i+1/2})/dx
    main = np.zeros(n_cells)
    main[:-1] -= a_left
    main[1:] -= a_right
    upper = a_right   # h_{i+1} feeding cell i
    lower = a_left    # h_i feeding cell i+1
    L = sparse.diags([lower, main, upper], [-1, 0, 1], shape=(n_cells, n_cells)) / dx
    return L.tocsc()


def fokker_planck_evolve(h0, p: DiffusionParams, t_end: float, x_max: float | None = None,
                         n_cells: int = 2000, dt: float | None = None, method: str = "implicit",
                         snapshot_times=None) -> GridDensity:
    """Evolve a density under the reflected OU Fokker-Planck equation.

    ``h0`` is an array of cell averages or a callable evaluated at the cell
    centres. The vertex carries the zero-flux condition; the far end at
    ``x_max`` is also closed, and the mass that reaches beyond
    ``beta + 8 sigma/sqrt(2 alpha)`` is reported as ``tail_mass``.
    ``method`` is ``"implicit"`` (backward Euler) or ``"explicit"``
    (forward Euler, raising :class:`CFLError` when ``dt`` is too large).
    """
    sd = p.sigma / math.sqrt(2 * p.alpha)
    floor = max(p.beta, 0.0) + 8 * sd
    if x_max is None:
        x_max = max(p.beta, 0.0) + 10 * sd
    if x_max < floor:
        raise ValueError(f"x_max must be at least beta + 8 sigma/sqrt(2 alpha) = {floor}")
    dx = x_max / n_cells
    x = (np.arange(n_cells) + 0.5) * dx
    h = np.asarray(h0(x) if callable(h0) else h0, dtype=float).copy()
    if h.shape != (n_cells,):
        raise ValueError("h0 does not match the grid")
    L = _fp_operator(p, n_cells, dx)
    rate = float(np.max(np.abs(L.diagonal())))
    if dt is None:
        dt = min(0.01 / p.alpha, t_end / 10) if t_end > 0 else 1.0
    if method == "explicit" and dt * rate > 1.0:
        raise CFLError(f"dt={dt} too large for the explicit scheme; need dt <= {1 / rate:.3e}")
    n_steps = int(math.ceil(t_end / dt)) if t_end > 0 else 0
    dt = t_end / n_steps if n_steps else 0.0
    snaps = sorted(snapshot_times) if snapshot_times is not None else []
    snapshots = []
    if method == "implicit":
        lu = splu((sparse.identity(n_cells, format="csc") - dt * L).tocsc())
        advance = lu.solve
    elif method == "explicit":
        def advance(v):
            return v + dt * (L @ v)
    else:
        raise ValueError(f"unknown method {method!r}")
    t = 0.0
    si = 0
    while si < len(snaps) and snaps[si] <= 0:
        snapshots.append((0.0, h.copy()))
        si += 1
    for n in range(1, n_steps + 1):
        h = advance(h)
        t = n * dt
        while si < len(snaps) and snaps[si] <= t + 1e-12:
            snapshots.append((t, h.copy()))
            si += 1
    tail = float(np.sum(h[x > floor]) * dx)
    return GridDensity(x, dx, h, t, tail, snapshots)
