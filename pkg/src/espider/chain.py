"""Parameters, state space, rates and generator of the multi-type Ehrenfest chain.

The chain lives on ``d`` rays of length ``N`` glued at an origin. From level
``k`` on ray ``j`` it moves down at rate ``mu*(N+k)`` and up at rate
``lam*(N-k)``. When empty it remembers the last ray ``l`` and leaves at rate
``lam*N`` onto ray ``j`` with probability ``C[l, j]``.

Rays are numbered 1..d in the public API.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

__all__ = [
    "Origin",
    "Interior",
    "ChainState",
    "ModelParams",
    "SWITCH_KINDS",
    "as_switch_matrix",
    "example_switch_matrix",
    "switch_stationary",
    "transition_rate",
    "state_index",
    "enumerate_states",
    "build_generator",
    "level_marginal",
]

SWITCH_KINDS = ("uniform", "uniform-excl", "cyclic", "sequential", "random-walk")


@dataclass(frozen=True)
class Origin:
    """Empty system; ``last_ray`` is the ray most recently occupied."""

    last_ray: int

    @property
    def level(self) -> int:
        return 0

    @property
    def ray(self) -> int:
        return self.last_ray


@dataclass(frozen=True)
class Interior:
    level: int
    ray: int


ChainState = Union[Origin, Interior]


def as_switch_matrix(C, tol: float = 1e-12) -> np.ndarray:
    """Validate a stochastic matrix and return a read-only float copy."""
    C = np.array(C, dtype=float)
    if C.ndim != 2 or C.shape[0] != C.shape[1] or C.shape[0] < 1:
        raise ValueError(f"switching matrix must be square, got shape {C.shape}")
    if np.any(C < 0):
        raise ValueError("switching matrix has negative entries")
    if np.any(np.abs(C.sum(axis=1) - 1.0) > tol):
        raise ValueError("switching matrix rows must sum to 1")
    C.setflags(write=False)
    return C


def example_switch_matrix(kind: str, d: int, p: float = 0.5) -> np.ndarray:
    """The five standard switching schemes.

    ``uniform``: every ray equally likely. ``uniform-excl``: uniform over the
    other rays. ``cyclic``: l -> l+1 (mod d). ``sequential``: l -> l+1 with
    ray d absorbing. ``random-walk``: reflecting walk, right w.p. ``p``.
    """
    if d < 1:
        raise ValueError("d must be positive")
    C = np.zeros((d, d))
    if kind == "uniform":
        C[:] = 1.0 / d
    elif kind == "uniform-excl":
        if d < 2:
            raise ValueError("uniform-excl needs d >= 2")
        C[:] = 1.0 / (d - 1)
        np.fill_diagonal(C, 0.0)
    elif kind == "cyclic":
        C[np.arange(d), (np.arange(d) + 1) % d] = 1.0
    elif kind == "sequential":
        C[np.arange(d - 1), np.arange(1, d)] = 1.0
        C[d - 1, d - 1] = 1.0
    elif kind == "random-walk":
        if not 0 < p < 1:
            raise ValueError("random-walk needs 0 < p < 1")
        if d < 2:
            raise ValueError("random-walk needs d >= 2")
        C[0, 1] = 1.0
        C[d - 1, d - 2] = 1.0
        for l in range(1, d - 1):
            C[l, l - 1] = 1 - p
            C[l, l + 1] = p
    else:
        raise ValueError(f"unknown switching scheme {kind!r}; choose from {SWITCH_KINDS}")
    return as_switch_matrix(C)


def switch_stationary(C, start=None) -> np.ndarray:
    """Limit law of the ray chain driven by ``C``.

    The chain is split into communicating classes. Each closed class gets its
    own stationary vector from a linear solve; transient rays get zero mass.
    With several closed classes the weights are the absorption probabilities
    from ``start`` (uniform over rays by default). Periodic classes such as
    the cyclic scheme are handled since no power iteration is involved.
    """
    C = as_switch_matrix(C)
    d = C.shape[0]
    start = np.full(d, 1.0 / d) if start is None else np.asarray(start, dtype=float)
    n_comp, labels = connected_components(sparse.csr_matrix(C > 0), directed=True,
                                          connection="strong")
    closed = []
    for c in range(n_comp):
        members = np.flatnonzero(labels == c)
        outside = np.setdiff1d(np.arange(d), members)
        if C[np.ix_(members, outside)].sum() == 0:
            closed.append(members)

    pi = np.zeros(d)
    transient = np.setdiff1d(np.arange(d), np.concatenate(closed))
    for members in closed:
        sub = C[np.ix_(members, members)]
        m = len(members)
        A = np.vstack([sub.T - np.eye(m), np.ones(m)])
        rhs = np.zeros(m + 1)
        rhs[-1] = 1.0
        local = np.linalg.lstsq(A, rhs, rcond=None)[0]
        # probability of ending up in this class
        weight = start[members].sum()
        if transient.size:
            T = C[np.ix_(transient, transient)]
            R = C[np.ix_(transient, members)].sum(axis=1)
            absorb = np.linalg.solve(np.eye(transient.size) - T, R)
            weight += start[transient] @ absorb
        pi[members] = weight * local
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


@dataclass(frozen=True, eq=False)
class ModelParams:
    """Rates ``lam`` (up) and ``mu`` (down), capacity ``N``, ``d`` rays and switching matrix ``C``."""

    lam: float
    mu: float
    N: int
    d: int = 1
    C: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if not self.lam > 0 or not self.mu > 0:
            raise ValueError("rates must be positive")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError("N must be a positive integer")
        if int(self.d) != self.d or self.d < 1:
            raise ValueError("d must be a positive integer")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "d", int(self.d))
        C = np.full((self.d, self.d), 1.0 / self.d) if self.C is None else self.C
        C = as_switch_matrix(C)
        if C.shape[0] != self.d:
            raise ValueError(f"switching matrix is {C.shape[0]}x{C.shape[0]}, expected d={self.d}")
        object.__setattr__(self, "C", C)

    @property
    def rho(self) -> float:
        return self.lam / self.mu

    @property
    def n_states(self) -> int:
        return self.d * (self.N + 1)

    def __eq__(self, other):
        if not isinstance(other, ModelParams):
            return NotImplemented
        return (self.lam, self.mu, self.N, self.d) == (other.lam, other.mu, other.N, other.d) \
            and np.array_equal(self.C, other.C)

    def __hash__(self):
        return hash((self.lam, self.mu, self.N, self.d, self.C.tobytes()))

    # JSON config ----------------------------------------------------------
    def to_dict(self, switch: dict | None = None) -> dict:
        sw = switch if switch is not None else {"matrix": self.C.tolist()}
        return {"lambda": self.lam, "mu": self.mu, "N": self.N, "d": self.d, "switch": sw}

    @classmethod
    def from_dict(cls, cfg: dict) -> "ModelParams":
        d = int(cfg.get("d", 1))
        sw = cfg.get("switch", {"kind": "uniform"})
        if "matrix" in sw:
            C = sw["matrix"]
        else:
            C = example_switch_matrix(sw.get("kind", "uniform"), d, sw.get("p", 0.5))
        return cls(float(cfg["lambda"]), float(cfg["mu"]), int(cfg["N"]), d, C)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        return cls.from_dict(json.loads(text))


def _check_state(s: ChainState, params: ModelParams):
    if not 1 <= s.ray <= params.d:
        raise ValueError(f"ray {s.ray} outside 1..{params.d}")
    if isinstance(s, Interior) and not 1 <= s.level <= params.N:
        raise ValueError(f"level {s.level} outside 1..{params.N}")


def transition_rate(src: ChainState, dst: ChainState, params: ModelParams) -> float:
    """Jump rate from ``src`` to ``dst`` (0 for pairs that are not neighbours)."""
    N, lam, mu = params.N, params.lam, params.mu
    if isinstance(src, Origin):
        if isinstance(dst, Interior) and dst.level == 1:
            return params.C[src.last_ray - 1, dst.ray - 1] * lam * N
        return 0.0
    k, j = src.level, src.ray
    if isinstance(dst, Origin):
        return mu * (N + 1) if k == 1 and dst.last_ray == j else 0.0
    if dst.ray != j:
        return 0.0
    if dst.level == k - 1:
        return mu * (N + k)
    if dst.level == k + 1:
        # lam*(N-k) vanishes at k = N; states above N do not exist anyway
        return lam * (N - k) if k < N else 0.0
    return 0.0


def state_index(s: ChainState, d: int) -> int:
    """Position of a state: origins first, then level-major, ray-minor."""
    return s.level * d + (s.ray - 1)


def enumerate_states(params: ModelParams) -> list[ChainState]:
    states: list[ChainState] = [Origin(l) for l in range(1, params.d + 1)]
    for k in range(1, params.N + 1):
        states.extend(Interior(k, j) for j in range(1, params.d + 1))
    return states


def build_generator(params: ModelParams) -> sparse.csr_matrix:
    """Sparse generator over :func:`enumerate_states` order, rows summing to zero."""
    N, d, lam, mu = params.N, params.d, params.lam, params.mu
    rows, cols, vals = [], [], []

    def add(i, j, r):
        if r > 0:
            rows.append(i)
            cols.append(j)
            vals.append(r)

    for l in range(d):
        for j in range(d):
            add(l, d + j, params.C[l, j] * lam * N)
    for k in range(1, N + 1):
        for j in range(d):
            i = k * d + j
            add(i, (k - 1) * d + j, mu * (N + k))
            if k < N:
                add(i, (k + 1) * d + j, lam * (N - k))
    n = params.n_states
    Q = sparse.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    Q = Q - sparse.diags(np.asarray(Q.sum(axis=1)).ravel())
    return Q.tocsr()


def level_marginal(vec: np.ndarray, N: int, d: int) -> np.ndarray:
    """Sum a state vector (or stack of them, last axis) over rays."""
    vec = np.asarray(vec)
    return vec.reshape(vec.shape[:-1] + (N + 1, d)).sum(axis=-1)
