"""Spin-S algebra in the ascending |k> basis (row m <-> k = m - S)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

import mpmath
import numpy as np

from .errors import DomainError


@dataclass(frozen=True, order=True)
class SpinValue:
    """Half-integer spin stored exactly as ``twice_s = 2S``."""

    twice_s: int

    def __post_init__(self):
        if isinstance(self.twice_s, bool) or int(self.twice_s) != self.twice_s:
            raise DomainError(f"twice_s must be an integer, got {self.twice_s!r}")
        object.__setattr__(self, "twice_s", int(self.twice_s))
        if self.twice_s < 1:
            raise DomainError(f"spin must be at least 1/2 (twice_s >= 1), got twice_s={self.twice_s}")

    @classmethod
    def of(cls, value) -> "SpinValue":
        """Build from a spin value such as ``1``, ``0.5``, ``"3/2"`` or ``"1.5"``."""
        if isinstance(value, SpinValue):
            return value
        try:
            frac = Fraction(str(value).strip()) if isinstance(value, str) else Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse spin value {value!r}") from exc
        twice = 2 * frac
        if twice.denominator != 1:
            raise DomainError(f"spin must be a multiple of 1/2, got {value!r}")
        return cls(int(twice))

    def s(self) -> Fraction:
        return Fraction(self.twice_s, 2)

    def dim(self) -> int:
        return self.twice_s + 1

    @property
    def is_integer(self) -> bool:
        return self.twice_s % 2 == 0

    def ks(self) -> np.ndarray:
        """Magnetic quantum numbers -S, ..., S as floats (exact in binary)."""
        return np.arange(self.dim()) - self.twice_s / 2

    def __str__(self):
        return str(self.s())


def make_sz(spin: SpinValue) -> np.ndarray:
    return np.diag(spin.ks()).astype(complex)


def _raising(spin: SpinValue) -> np.ndarray:
    S = spin.twice_s / 2
    k = spin.ks()[:-1]
    sp = np.zeros((spin.dim(), spin.dim()))
    # <k+1|S+|k> sits one row below the diagonal in the ascending basis
    sp[np.arange(1, spin.dim()), np.arange(spin.dim() - 1)] = np.sqrt(S * (S + 1) - k * (k + 1))
    return sp


def make_sx(spin: SpinValue) -> np.ndarray:
    sp = _raising(spin)
    return ((sp + sp.T) / 2).astype(complex)


def make_sy(spin: SpinValue) -> np.ndarray:
    sp = _raising(spin)
    return (sp - sp.T) / 2j


# above this 2S the factorial weights come from log-gamma instead of exact integers
EXACT_FACTORIAL_LIMIT = 30


def _factorial_weights(tw: int) -> list:
    if tw <= EXACT_FACTORIAL_LIMIT:
        return [mpmath.mpf(math.factorial(i)) for i in range(tw + 1)]
    return [mpmath.exp(mpmath.loggamma(i + 1)) for i in range(tw + 1)]


@lru_cache(maxsize=256)
def _wigner_small_d(tw: int, beta: float) -> np.ndarray:
    d = tw + 1
    # the alternating sum cancels heavily for large 2S; carry extra digits
    with mpmath.workdps(30 + tw):
        f = _factorial_weights(tw)
        half = mpmath.mpf(beta) / 2
        c, s = mpmath.cos(half), mpmath.sin(half)
        out = np.empty((d, d))
        # integer offsets: S+k' -> p (row), S+k -> q (column)
        for p in range(d):
            for q in range(d):
                norm = mpmath.sqrt(f[p] * f[tw - p] * f[q] * f[tw - q])
                total = mpmath.mpf(0)
                for j in range(max(0, q - p), min(q, tw - p) + 1):
                    term = norm / (f[q - j] * f[j] * f[p - q + j] * f[tw - p - j])
                    term *= c ** (tw + q - p - 2 * j) * s ** (p - q + 2 * j)
                    total += -term if (p - q + j) % 2 else term
                out[p, q] = float(total)
    out.flags.writeable = False
    return out


def wigner_small_d(spin: SpinValue, beta: float) -> np.ndarray:
    """Matrix of d^S_{k'k}(beta) = <k'|exp(-i beta Sy)|k>, ascending basis.

    Closed-form Wigner sum evaluated in extended precision, so the entries are
    correctly rounded doubles even where the alternating series cancels.
    """
    return _wigner_small_d(spin.twice_s, float(beta)).copy()


def make_kick(spin: SpinValue, angle: float = np.pi / 2) -> np.ndarray:
    """Rotation exp(-i angle Sy); real orthogonal. ``make_kick(spin, -angle)`` inverts it."""
    if not np.isfinite(angle):
        raise DomainError(f"kick angle must be finite, got {angle!r}")
    return wigner_small_d(spin, float(angle))
