"""Equatorial coherent spin states, product states and the flat long-basis index."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import DomainError, ValidationError
from .spin_core import SpinValue

NORM_TOL = 1e-10


def _check_norm(amplitudes: np.ndarray, tol: float = NORM_TOL):
    norm2 = float(np.vdot(amplitudes, amplitudes).real)
    if abs(norm2 - 1.0) > tol:
        raise ValidationError(f"state is not normalized: |psi|^2 = {norm2:.15g}")


@dataclass(frozen=True)
class SingleSpinState:
    spin: SpinValue
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.spin.dim(),):
            raise ValidationError(f"expected {self.spin.dim()} amplitudes, got shape {amps.shape}")
        _check_norm(amps)
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class TwoSpinState:
    """Pure state of two spins; ``amplitudes[m1 * dim2 + m2]`` is the |k1>|k2> weight."""

    spin1: SpinValue
    spin2: SpinValue
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        n = self.spin1.dim() * self.spin2.dim()
        if amps.shape != (n,):
            raise ValidationError(f"expected {n} amplitudes, got {amps.size}")
        _check_norm(amps)
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def shape(self) -> tuple[int, int]:
        return self.spin1.dim(), self.spin2.dim()

    def matrix(self) -> np.ndarray:
        """Amplitudes as a (dim1, dim2) array, rows indexed by spin 1 (read-only view)."""
        return self.amplitudes.reshape(self.shape)

    def probabilities(self) -> np.ndarray:
        """Long-basis probability distribution |amplitude|^2."""
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @classmethod
    def from_matrix(cls, spin1: SpinValue, spin2: SpinValue, psi: np.ndarray) -> "TwoSpinState":
        return cls(spin1, spin2, np.asarray(psi).reshape(-1))


def css_amplitudes(spin: SpinValue) -> np.ndarray:
    tw = spin.twice_s
    # 2^-S sqrt(binom(2S, S+k)) == sqrt(binom(2S, S+k) / 2^(2S)); exact ints keep this safe
    return np.sqrt(np.array([comb(tw, j) / 2**tw for j in range(tw + 1)]))


def css_equatorial(spin: SpinValue) -> SingleSpinState:
    """Coherent state along +x: the Sx eigenstate with eigenvalue S and zero phase."""
    return SingleSpinState(spin, css_amplitudes(spin))


def product_state(a: SingleSpinState, b: SingleSpinState) -> TwoSpinState:
    return TwoSpinState(a.spin, b.spin, np.kron(a.amplitudes, b.amplitudes))


def initial_state(spin1: SpinValue, spin2: SpinValue | None = None) -> TwoSpinState:
    """Both spins in their equatorial coherent state."""
    spin2 = spin1 if spin2 is None else spin2
    return product_state(css_equatorial(spin1), css_equatorial(spin2))


def _offset(spin: SpinValue, k) -> int:
    try:
        twice_k = 2 * (Fraction(k) if not isinstance(k, str) else Fraction(k.strip()))
    except (TypeError, ValueError) as exc:
        raise DomainError(f"cannot parse magnetic number {k!r}") from exc
    if twice_k.denominator != 1 or (int(twice_k) - spin.twice_s) % 2:
        raise DomainError(f"k={k} is not a valid magnetic number for spin {spin}")
    if abs(twice_k) > spin.twice_s:
        raise DomainError(f"|k|={abs(Fraction(k))} exceeds spin {spin}")
    return (int(twice_k) + spin.twice_s) // 2


def long_index(spin: SpinValue, k1, k2, spin2: SpinValue | None = None) -> int:
    """0-based flat index of |k1>|k2>; (-S, -S) -> 0, (-S, -S+1) -> 1, ..."""
    spin2 = spin if spin2 is None else spin2
    return _offset(spin, k1) * spin2.dim() + _offset(spin2, k2)
