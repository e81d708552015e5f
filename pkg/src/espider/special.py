"""Log-safe special functions.

Everything that can under- or overflow a double is carried as a
:class:`SignedLogValue`, a (sign, log|x|) pair. Stationary probabilities of
the chain reach 1e-1203, far below the smallest subnormal double.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

__all__ = [
    "SignedLogValue",
    "ln_gamma",
    "ln_binomial",
    "erf",
    "hyp2f1_terminating",
    "SingularParameterError",
]

# relative cancellation below which the log-space sum is recomputed exactly
_CANCELLATION_LIMIT = 1e-6


class SingularParameterError(ValueError):
    """Raised when a Pochhammer denominator vanishes at a live term."""


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as ``sign * exp(log_mag)``.

    ``sign`` is -1, 0 or +1. When ``sign == 0`` the value is exactly zero
    and ``log_mag`` is ``-inf``.
    """

    sign: int
    log_mag: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign}")
        if self.sign == 0 and self.log_mag != -math.inf:
            object.__setattr__(self, "log_mag", -math.inf)
        if self.sign != 0 and not math.isfinite(self.log_mag):
            if self.log_mag == -math.inf:
                object.__setattr__(self, "sign", 0)
            else:
                raise ValueError(f"log magnitude must be finite, got {self.log_mag}")

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls) -> "SignedLogValue":
        return cls(0, -math.inf)

    @classmethod
    def one(cls) -> "SignedLogValue":
        return cls(1, 0.0)

    @classmethod
    def from_float(cls, x: float) -> "SignedLogValue":
        x = float(x)
        if x == 0.0:
            return cls.zero()
        if not math.isfinite(x):
            raise ValueError("cannot represent a non-finite float")
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_log(cls, log_mag: float, sign: int = 1) -> "SignedLogValue":
        return cls(sign, float(log_mag))

    @classmethod
    def from_fraction(cls, q: Fraction) -> "SignedLogValue":
        """Exact rational to signed log, without passing through a float."""
        if q == 0:
            return cls.zero()
        sign = 1 if q > 0 else -1
        q = abs(q)
        return cls(sign, _log_int(q.numerator) - _log_int(q.denominator))

    # conversion -----------------------------------------------------------
    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.log_mag > 709.78:
            return self.sign * math.inf
        return self.sign * math.exp(self.log_mag)

    def log10(self) -> float:
        """log10 of the magnitude."""
        return self.log_mag / math.log(10.0)

    def mantissa_exponent(self) -> tuple[float, int]:
        """Return ``(m, e)`` with ``value = m * 10**e`` and ``1 <= |m| < 10``."""
        if self.sign == 0:
            return 0.0, 0
        l10 = self.log10()
        e = math.floor(l10)
        m = 10.0 ** (l10 - e)
        if m >= 10.0:  # rounding at the boundary
            m /= 10.0
            e += 1
        return self.sign * m, e

    def format(self, digits: int = 12) -> str:
        """Decimal string that works for magnitudes outside double range."""
        if self.sign == 0:
            return "0"
        f = float(self)
        if f != 0.0 and math.isfinite(f) and abs(f) >= 2.2250738585072014e-308:
            return repr(f)
        m, e = self.mantissa_exponent()
        return f"{m:.{digits - 1}f}e{e:+d}"

    # arithmetic -----------------------------------------------------------
    def __neg__(self) -> "SignedLogValue":
        return SignedLogValue(-self.sign, self.log_mag)

    def __abs__(self) -> "SignedLogValue":
        return SignedLogValue(abs(self.sign), self.log_mag)

    def __add__(self, other) -> "SignedLogValue":
        other = _coerce(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        hi, lo = (self, other) if self.log_mag >= other.log_mag else (other, self)
        diff = lo.log_mag - hi.log_mag
        if hi.sign == lo.sign:
            return SignedLogValue(hi.sign, hi.log_mag + math.log1p(math.exp(diff)))
        if diff == 0.0:
            return SignedLogValue.zero()
        return SignedLogValue(hi.sign, hi.log_mag + math.log1p(-math.exp(diff)))

    __radd__ = __add__

    def __sub__(self, other) -> "SignedLogValue":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "SignedLogValue":
        return _coerce(other) - self

    def __mul__(self, other) -> "SignedLogValue":
        other = _coerce(other)
        if self.sign == 0 or other.sign == 0:
            return SignedLogValue.zero()
        return SignedLogValue(self.sign * other.sign, self.log_mag + other.log_mag)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "SignedLogValue":
        other = _coerce(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero SignedLogValue")
        if self.sign == 0:
            return SignedLogValue.zero()
        return SignedLogValue(self.sign * other.sign, self.log_mag - other.log_mag)

    def __rtruediv__(self, other) -> "SignedLogValue":
        return _coerce(other) / self

    def reciprocal(self) -> "SignedLogValue":
        return SignedLogValue.one() / self

    def __pow__(self, k: int) -> "SignedLogValue":
        if not isinstance(k, (int, np.integer)):
            raise TypeError("only integer powers are supported")
        if k == 0:
            return SignedLogValue.one()
        if self.sign == 0:
            if k < 0:
                raise ZeroDivisionError("zero to a negative power")
            return SignedLogValue.zero()
        sign = self.sign if k % 2 else 1
        return SignedLogValue(sign, k * self.log_mag)

    def rel_diff(self, other) -> float:
        """(other - self)/self, computed via expm1 when the signs agree."""
        other = _coerce(other)
        if self.sign == 0:
            raise ZeroDivisionError("relative difference to zero")
        if other.sign == self.sign:
            return math.expm1(other.log_mag - self.log_mag)
        return float((other - self) / self)

    def isclose(self, other, rel: float = 1e-12) -> bool:
        other = _coerce(other)
        if self.sign == 0 or other.sign == 0:
            return self.sign == other.sign
        return self.sign == other.sign and abs(math.expm1(other.log_mag - self.log_mag)) <= rel

    def __repr__(self) -> str:
        return f"SignedLogValue(sign={self.sign}, log_mag={self.log_mag!r})"


def _coerce(x) -> SignedLogValue:
    if isinstance(x, SignedLogValue):
        return x
    if isinstance(x, Fraction):
        return SignedLogValue.from_fraction(x)
    return SignedLogValue.from_float(x)


def _log_int(n: int) -> float:
    # math.log handles arbitrarily large ints exactly enough (it scales by bit length)
    return math.log(n)


def log_sum(values: Iterable[SignedLogValue]) -> SignedLogValue:
    """Sum of signed log values, positives and negatives pooled separately."""
    pos, neg = [], []
    for v in values:
        if v.sign > 0:
            pos.append(v.log_mag)
        elif v.sign < 0:
            neg.append(v.log_mag)
    return _pooled(np.asarray(pos), np.asarray(neg))[0]


def _logsumexp(a: np.ndarray) -> float:
    if a.size == 0:
        return -math.inf
    m = float(np.max(a))
    return m + math.log(math.fsum(np.exp(a - m)))


def _pooled(pos: np.ndarray, neg: np.ndarray) -> tuple[SignedLogValue, float]:
    """Combine pooled log terms; also return the relative cancellation |S|/(P+M)."""
    lp, ln_ = _logsumexp(pos), _logsumexp(neg)
    if ln_ == -math.inf:
        return SignedLogValue(1 if lp > -math.inf else 0, lp), 1.0
    if lp == -math.inf:
        return SignedLogValue(-1, ln_), 1.0
    hi, lo = max(lp, ln_), min(lp, ln_)
    r = math.exp(lo - hi)
    if r == 1.0:
        return SignedLogValue.zero(), 0.0
    sign = 1 if lp > ln_ else -1
    return SignedLogValue(sign, hi + math.log1p(-r)), (1 - r) / (1 + r)


# ---------------------------------------------------------------------------
# elementary special functions

def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise ValueError(f"ln_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def ln_binomial(n: int, k: int) -> float:
    """ln C(n, k) for integers ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        raise ValueError(f"ln_binomial needs 0 <= k <= n, got n={n}, k={k}")
    if n <= 60:
        return math.log(math.comb(n, k))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def erf(x: float) -> float:
    """Error function; odd symmetry is enforced explicitly."""
    x = float(x)
    if x < 0:
        return -math.erf(-x)
    return math.erf(x)


# ---------------------------------------------------------------------------
# terminating Gauss hypergeometric series

def _is_int(v: float) -> bool:
    return float(v).is_integer()


def hyp2f1_terminating(a: int, b: float, c: float, z: float) -> SignedLogValue:
    """Terminating series 2F1(a, b; c; z) for a non-positive integer ``a``.

    The series is cut at the first vanishing numerator factor coming from
    either ``a`` or ``b``. Terms are formed from cumulative log ratios and
    pooled by sign. If the pooled sum loses more than six digits to
    cancellation, the sum is redone in exact rational arithmetic (floats
    convert to ``Fraction`` exactly).
    """
    if not _is_int(a) or a > 0:
        raise ValueError(f"a must be a non-positive integer, got {a}")
    a = int(a)
    b, c, z = float(b), float(c), float(z)
    if a == 0 or z == 0.0:
        return SignedLogValue.one()

    n_terms = _live_terms(a, b, c)
    i = np.arange(n_terms - 1, dtype=float)
    num_a, num_b, den_c = a + i, b + i, c + i
    log_ratio = (np.log(np.abs(num_a)) + np.log(np.abs(num_b)) - np.log(np.abs(den_c))
                 - np.log(i + 1) + math.log(abs(z)))
    neg = (num_a < 0).astype(int) + (num_b < 0) + (den_c < 0) + (z < 0)
    log_terms = np.concatenate([[0.0], np.cumsum(log_ratio)])
    signs = np.concatenate([[1], np.where(np.cumsum(neg) % 2 == 1, -1, 1)])

    total, cancel = _pooled(log_terms[signs > 0], log_terms[signs < 0])
    if cancel < _CANCELLATION_LIMIT:
        return SignedLogValue.from_fraction(_hyp2f1_exact(a, b, c, z, n_terms))
    return total


def _live_terms(a: int, b: float, c: float) -> int:
    """Number of nonzero terms; raise if a live term hits (c)_n = 0."""
    n = 1
    while True:
        i = n - 1
        if a + i == 0 or (_is_int(b) and b + i == 0):
            return n
        if c + i == 0:
            raise SingularParameterError(
                f"(c)_n vanishes at a live term: c={c}, n={n}")
        n += 1


def _hyp2f1_exact(a: int, b: float, c: float, z: float, n_terms: int) -> Fraction:
    bq, cq, zq = Fraction(b), Fraction(c), Fraction(z)
    term = Fraction(1)
    total = Fraction(1)
    for i in range(n_terms - 1):
        term = term * (a + i) * (bq + i) / ((cq + i) * (i + 1)) * zq
        total += term
    return total
