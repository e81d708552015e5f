"""Reproduction harness: exact versus approximate stationary laws.

* :func:`table1` puts the exact ``rho_k`` next to the large-N approximation.
* :func:`table3` puts ``rho_k`` next to ``w(k eps) eps`` from the diffusion limit.
* :func:`moment_agreement` compares exact moments with their asymptotics
  and with the diffusion moments.

The ``check_*`` helpers compare against the stored reference cells, matching each
cell to the number of significant digits printed (at most six).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal

from . import reference_values as ref
from .diffusion import moments_X, rates_to_diffusion, stationary_density_w
from .montecarlo import worker_count
from .special import SignedLogValue, ln_binomial
from .stationary import entropy_argmax, g_approx, moments, rho_k

__all__ = [
    "ComparisonRow",
    "table1",
    "table3",
    "MomentReport",
    "moment_agreement",
    "CellCheck",
    "digits_match",
    "check_table1",
    "check_table2",
    "check_table3",
    "PRESETS",
]

PRESETS = ("published", "paper")


@dataclass(frozen=True)
class ComparisonRow:
    """One table cell pair; ``param`` is rho (approximation table) or sigma2 (diffusion table)."""

    N: int
    param: float
    k: int
    exact: SignedLogValue
    approx: SignedLogValue

    @property
    def delta(self) -> float:
        """(approx - exact)/exact, via expm1 of the log difference."""
        return self.exact.rel_diff(self.approx)


def _pmap(fn, items):
    items = list(items)
    with ThreadPoolExecutor(max_workers=max(1, min(worker_count(), len(items)))) as ex:
        return list(ex.map(fn, items))


def table1(N_list, rho_list, k_list) -> list[ComparisonRow]:
    """Exact ``rho_k`` against its large-N approximation (``rho < 1`` only)."""
    for r in rho_list:
        if not 0 < r < 1:
            raise ValueError("the approximation column needs 0 < rho < 1")
    cells = [(N, r, k) for N in N_list for r in rho_list for k in k_list if k <= N]

    def row(c):
        N, r, k = c
        exact = rho_k(k, r, N)
        shift = k * math.log(r) + ln_binomial(2 * N, N + k) - ln_binomial(2 * N, N)
        approx = g_approx(r, N) * SignedLogValue(1, shift)
        return ComparisonRow(N, r, k, exact, approx)

    return _pmap(row, cells)


def table3(N_list, epsilon: float = 0.1, lambda_mu: float = 1.0, k_list=(0,)) -> list[ComparisonRow]:
    """``rho_k`` (exact) against ``w(k eps) eps`` (approx) for ``lam = mu``."""
    cells = [(N, k) for N in N_list for k in k_list]

    def row(c):
        N, k = c
        p = rates_to_diffusion(lambda_mu, lambda_mu, epsilon, N)
        approx = SignedLogValue.from_float(stationary_density_w(k * epsilon, p) * epsilon)
        return ComparisonRow(N, p.sigma2, k, rho_k(k, 1.0, N), approx)

    return _pmap(row, cells)


@dataclass(frozen=True)
class MomentReport:
    N: int
    epsilon: float
    mean: float
    var: float
    mean_stirling: float
    var_stirling: float
    mean_diffusion: float
    var_diffusion: float

    @property
    def mean_ratio_stirling(self) -> float:
        return self.mean / self.mean_stirling

    @property
    def var_ratio_stirling(self) -> float:
        return self.var / self.var_stirling

    @property
    def mean_ratio_diffusion(self) -> float:
        return self.mean / self.mean_diffusion

    @property
    def var_ratio_diffusion(self) -> float:
        return self.var / self.var_diffusion


def moment_agreement(N: int, epsilon: float = 0.1, lambda_mu: float = 1.0) -> MomentReport:
    """Exact moments at ``rho = 1`` against Stirling asymptotics and the diffusion.

    The diffusion moments are in units of levels, i.e. ``E[X]/eps`` and
    ``Var[X]/eps**2`` with ``sigma2 = 2 lam N eps**2``.
    """
    mean, var, _ = moments(1.0, N)
    sq = math.sqrt(N)
    m_st = sq / math.sqrt(math.pi)
    v_st = N * (0.5 - 1 / math.pi) - sq / (2 * math.sqrt(math.pi))
    p = rates_to_diffusion(lambda_mu, lambda_mu, epsilon, N)
    mx, vx = moments_X(p)
    return MomentReport(N, epsilon, mean, var, m_st, v_st, mx / epsilon, vx / epsilon ** 2)


# ---------------------------------------------------------------------------
# checks against the reference cells

@dataclass(frozen=True)
class CellCheck:
    label: str
    computed: str
    printed: str
    digits: int
    ok: bool


def digits_match(value: SignedLogValue, printed: str, max_digits: int = 6) -> tuple[bool, int]:
    """Does ``value`` match ``printed`` to its shown significant digits?

    The tolerance is one unit in the last compared digit, comparing at most
    ``max_digits`` digits. Exponents must agree exactly.
    """
    dec = Decimal(printed)
    sign, digits, exp = dec.as_tuple()
    digits = list(digits)
    while digits and digits[0] == 0:
        digits.pop(0)
    n_sig = len(digits)
    if n_sig == 0:
        return value.sign == 0, 0
    e10 = dec.adjusted()
    m_ref = float(dec.scaleb(-e10))
    if value.sign != (-1 if sign else 1):
        return False, n_sig
    m_val = math.exp(value.log_mag - e10 * math.log(10.0))
    used = min(n_sig, max_digits)
    tol = 10.0 ** (1 - used)
    return abs(m_val - m_ref) <= tol * (1 + 1e-9), used


def _fmt(v: SignedLogValue) -> str:
    m, e = v.mantissa_exponent()
    return f"{m:.9f}e{e:+d}"


def check_table1(max_digits: int = 6) -> list[CellCheck]:
    out = []
    for N, r, k, ex, ap in ref.TABLE1:
        row = table1([N], [r], [k])[0]
        for name, val, printed in (("exact", row.exact, ex), ("approx", row.approx, ap)):
            ok, used = digits_match(val, printed, max_digits)
            out.append(CellCheck(f"N={N} rho={r} k={k} {name}", _fmt(val), printed, used, ok))
    return out


def check_table3(max_digits: int = 6) -> list[CellCheck]:
    out = []
    pre = ref.TABLE3_PRESET
    rows = {(r.N, r.k): r for r in table3(pre["N"], pre["epsilon"], pre["lam_mu"], pre["k"])}
    for N, k, w_eps, rk, delta in ref.TABLE3:
        row = rows[(N, k)]
        # the reference relative difference is (w eps - rho_k)/rho_k
        d = SignedLogValue.from_float(row.delta)
        for name, val, printed in (("w_eps", row.approx, w_eps), ("rho_k", row.exact, rk),
                                   ("delta", d, delta)):
            ok, used = digits_match(val, printed, max_digits)
            out.append(CellCheck(f"N={N} k={k} {name}", _fmt(val), printed, used, ok))
    return out


def check_table2(tol: float = 0.01) -> list[CellCheck]:
    out = []
    for N, m in ref.TABLE2.items():
        res = entropy_argmax(N)
        ok = abs(res.argmax - m) <= tol and res.unimodal
        out.append(CellCheck(f"N={N} argmax", f"{res.argmax:.4f}", f"{m}", 3, ok))
    return out
