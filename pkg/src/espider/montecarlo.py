"""Gillespie simulation of the chain and Monte Carlo estimates of p(k, t).

Random numbers come from a counter-based SplitMix64 construction. Run ``i``
of a campaign with seed ``s`` uses the SplitMix64 stream seeded with
``key_i = mix64(s + (i + 1) * GAMMA)``; its ``n``-th uniform is
``(mix64(key_i + (n + 1) * GAMMA) >> 11) * 2**-53``. Every event consumes
two uniforms (holding time, then jump choice), so a run's path depends only
on ``(seed, i)``. Campaigns can therefore be split across threads in any way
without changing results.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .chain import ChainState, Interior, ModelParams, Origin

__all__ = [
    "GAMMA",
    "uniforms",
    "Trajectory",
    "simulate_path",
    "EstimateTable",
    "estimate_pk",
    "origin_ray_counts",
    "worker_count",
]

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_CHUNK = 20000
Z95 = 1.959963984540054


def worker_count() -> int:
    """Thread cap from ``ESPIDER_THREADS`` (default: CPU count)."""
    env = os.environ.get("ESPIDER_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _mix64(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
        return z ^ (z >> np.uint64(31))


def _run_keys(seed: int, run_ids: np.ndarray) -> np.ndarray:
    s = np.uint64(seed % 2 ** 64)
    with np.errstate(over="ignore"):
        return _mix64(s + (run_ids.astype(np.uint64) + np.uint64(1)) * GAMMA)


def uniforms(keys: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """The ``counters``-th uniform in [0, 1) of each stream."""
    with np.errstate(over="ignore"):
        x = _mix64(keys + (counters.astype(np.uint64) + np.uint64(1)) * GAMMA)
    return (x >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


class _Stepper:
    """Vectorized event step shared by path simulation and campaigns."""

    def __init__(self, params: ModelParams):
        self.N, self.lam, self.mu = params.N, params.lam, params.mu
        self.cumC = np.cumsum(params.C, axis=1)
        self.d = params.d

    def __call__(self, level, ray, u1, u2):
        N = self.N
        at_origin = level == 0
        up = self.lam * (N - level)
        down = np.where(at_origin, 0.0, self.mu * (N + level))
        total = up + down  # at the origin up = lam*N
        hold = -np.log1p(-u1) / total
        # origin: next ray from row `ray` of C; interior: down w.p. down/total
        new_ray = np.minimum((u2[:, None] >= self.cumC[ray]).sum(axis=1), self.d - 1)
        go_down = u2 * total < down
        new_level = np.where(at_origin, 1, np.where(go_down, level - 1, level + 1))
        new_ray = np.where(at_origin, new_ray, ray)
        return hold, new_level, new_ray


@dataclass(frozen=True)
class Trajectory:
    """Jump epochs and the state held from each epoch until the next."""

    jump_times: np.ndarray
    levels: np.ndarray
    rays: np.ndarray
    seed: int
    horizon: float

    @property
    def states(self) -> list[ChainState]:
        return [Origin(int(r)) if k == 0 else Interior(int(k), int(r))
                for k, r in zip(self.levels, self.rays)]

    def state_at(self, t: float) -> ChainState:
        i = int(np.searchsorted(self.jump_times, t, side="right")) - 1
        k, r = int(self.levels[i]), int(self.rays[i])
        return Origin(r) if k == 0 else Interior(k, r)

    def to_json(self) -> str:
        return json.dumps({"seed": self.seed, "horizon": self.horizon,
                           "jump_times": [repr(float(x)) for x in self.jump_times],
                           "levels": self.levels.tolist(), "rays": self.rays.tolist()})


def simulate_path(params: ModelParams, horizon: float, init: ChainState | None = None,
                  seed: int = 0, run: int = 0) -> Trajectory:
    """Exact Gillespie path on ``[0, horizon]``; run ``run`` of stream ``seed``."""
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    init = Origin(1) if init is None else init
    step = _Stepper(params)
    key = _run_keys(seed, np.array([run]))
    level, ray = np.array([init.level]), np.array([init.ray - 1])
    t, n = 0.0, 0
    times, levels, rays = [0.0], [init.level], [init.ray]
    while True:
        u = uniforms(np.repeat(key, 2), np.array([n, n + 1]))
        n += 2
        hold, level, ray = step(level, ray, u[:1], u[1:])
        t += float(hold[0])
        if t > horizon:
            break
        times.append(t)
        levels.append(int(level[0]))
        rays.append(int(ray[0]) + 1)
    return Trajectory(np.array(times), np.array(levels), np.array(rays), seed, float(horizon))


def _sample_lanes(params, times, init, seed, run_ids):
    """States of runs ``run_ids`` at the sorted ``times`` (levels, 0-based rays)."""
    step = _Stepper(params)
    n = run_ids.size
    keys = _run_keys(seed, run_ids)
    m = times.size
    out_level = np.empty((m, n), dtype=np.int64)
    out_ray = np.empty((m, n), dtype=np.int64)
    level = np.full(n, init.level, dtype=np.int64)
    ray = np.full(n, init.ray - 1, dtype=np.int64)
    now = np.zeros(n)
    counter = np.zeros(n, dtype=np.int64)
    lanes = np.arange(n)
    horizon = times[-1]
    while lanes.size:
        kk = keys[lanes]
        u1 = uniforms(kk, counter[lanes])
        u2 = uniforms(kk, counter[lanes] + 1)
        counter[lanes] += 2
        lv, rv, tv = level[lanes], ray[lanes], now[lanes]
        hold, nl, nr = step(lv, rv, u1, u2)
        tnext = tv + hold
        for i in range(m):
            hit = (times[i] >= tv) & (times[i] < tnext)
            if hit.any():
                out_level[i, lanes[hit]] = lv[hit]
                out_ray[i, lanes[hit]] = rv[hit]
        level[lanes], ray[lanes], now[lanes] = nl, nr, tnext
        lanes = lanes[tnext <= horizon]
    return out_level, out_ray


@dataclass(frozen=True)
class EstimateTable:
    """Empirical law of the level at time ``t`` with 95% normal intervals.

    For a count of 0 or ``n_runs`` the interval width uses
    ``p = (count + 0.5)/(n_runs + 1)`` so that it never collapses to zero.
    """

    t: float
    counts: np.ndarray
    n_runs: int
    seed: int
    ray_counts: np.ndarray = field(default=None, repr=False)
    ci_method: str = "normal-approx, continuity guard at 0 and 1"

    @property
    def point(self) -> np.ndarray:
        return self.counts / self.n_runs

    @property
    def half_width_95(self) -> np.ndarray:
        n = self.n_runs
        p = self.point
        edge = (self.counts == 0) | (self.counts == n)
        p = np.where(edge, (self.counts + 0.5) / (n + 1), p)
        return Z95 * np.sqrt(p * (1 - p) / n)

    @property
    def ci_low(self) -> np.ndarray:
        return np.clip(self.point - self.half_width_95, 0.0, 1.0)

    @property
    def ci_high(self) -> np.ndarray:
        return np.clip(self.point + self.half_width_95, 0.0, 1.0)

    def covers(self, target) -> np.ndarray:
        target = np.asarray(target)
        return np.abs(self.point - target) <= self.half_width_95


def estimate_pk(params: ModelParams, t, n_runs: int, seed: int = 0,
                init: ChainState | None = None, by_ray: bool = False):
    """Sample ``n_runs`` independent paths at time(s) ``t`` and tabulate levels.

    Returns one :class:`EstimateTable` for scalar ``t``, else a list.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be at least 1")
    init = Origin(1) if init is None else init
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < 0):
        raise ValueError("t must be non-negative")
    order = np.argsort(t_arr)
    times = t_arr[order]
    chunks = [np.arange(a, min(a + _CHUNK, n_runs)) for a in range(0, n_runs, _CHUNK)]
    with ThreadPoolExecutor(max_workers=min(worker_count(), len(chunks))) as ex:
        parts = list(ex.map(lambda ids: _sample_lanes(params, times, init, seed, ids), chunks))
    levels = np.concatenate([p[0] for p in parts], axis=1)
    rays = np.concatenate([p[1] for p in parts], axis=1)

    tables = [None] * t_arr.size
    for pos, i in enumerate(order):
        counts = np.bincount(levels[pos], minlength=params.N + 1)
        rc = None
        if by_ray:
            rc = np.zeros((params.N + 1, params.d), dtype=np.int64)
            np.add.at(rc, (levels[pos], rays[pos]), 1)
        tables[i] = EstimateTable(float(t_arr[i]), counts, n_runs, seed, rc)
    return tables[0] if np.ndim(t) == 0 else tables


def origin_ray_counts(params: ModelParams, n_visits: int, seed: int = 0,
                      n_lanes: int = 1000, burn_in: int = 20) -> np.ndarray:
    """Count the last-visited ray over arrivals at the origin.

    ``n_lanes`` runs start at the origin with a ray drawn uniformly; the
    first ``burn_in`` arrivals of each run are discarded.
    """
    step = _Stepper(params)
    per_lane = -(-n_visits // n_lanes) + burn_in
    keys = _run_keys(seed, np.arange(n_lanes))
    start = uniforms(keys, np.zeros(n_lanes, dtype=np.int64))
    ray = np.minimum((start * params.d).astype(np.int64), params.d - 1)
    level = np.zeros(n_lanes, dtype=np.int64)
    counter = np.ones(n_lanes, dtype=np.int64)
    visits = np.zeros(n_lanes, dtype=np.int64)
    counts = np.zeros(params.d, dtype=np.int64)
    lanes = np.arange(n_lanes)
    while lanes.size:
        u1 = uniforms(keys[lanes], counter[lanes])
        u2 = uniforms(keys[lanes], counter[lanes] + 1)
        counter[lanes] += 2
        _, nl, nr = step(level[lanes], ray[lanes], u1, u2)
        arrived = (nl == 0) & (level[lanes] > 0)
        visits[lanes] += arrived
        keep = arrived & (visits[lanes] > burn_in)
        np.add.at(counts, nr[keep], 1)
        level[lanes], ray[lanes] = nl, nr
        lanes = lanes[visits[lanes] < per_lane]
    return counts
