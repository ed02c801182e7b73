"""Marginals, purity and I-concurrence of pure two-spin states.

Two routes to the purity of a freely evolving state are provided: the direct
partial trace of each snapshot, and :class:`PuritySpectrum`, which expands
Tr rho1^2(tau) under exp(-i g tau Sz1 Sz2) as an exact trigonometric
polynomial with integer frequencies. The spectral route is what makes dense
kick-time searches affordable; tests hold the two against each other.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np
from scipy.integrate import trapezoid

from .errors import DomainError, ValidationError
from .spin_core import SpinValue
from .state_prep import TwoSpinState

PARTIAL_TRACE_NORM_TOL = 1e-6
# slack when matching window edges against sampled times
TIME_TOL = 1e-9


@dataclass(frozen=True)
class MarginalDensity:
    spin: SpinValue
    matrix: np.ndarray


def norm_factor(spin1: SpinValue, spin2: SpinValue | None = None) -> float:
    """(2S+1)/(2S) with S = min(S1, S2)."""
    s = spin1 if spin2 is None else min(spin1, spin2)
    return (s.twice_s + 1) / s.twice_s


def partial_trace(state: TwoSpinState, keep: int = 1) -> MarginalDensity:
    """Reduced density matrix of spin ``keep`` (1 or 2)."""
    n2 = np.vdot(state.amplitudes, state.amplitudes).real
    if abs(n2 - 1) > PARTIAL_TRACE_NORM_TOL:
        raise ValidationError(f"state is not normalized: |psi|^2 = {n2:.12g}")
    psi = state.matrix()
    if keep == 1:
        return MarginalDensity(state.spin1, psi @ psi.conj().T)
    if keep == 2:
        return MarginalDensity(state.spin2, psi.T @ psi.conj())
    raise DomainError(f"keep must be 1 or 2, got {keep!r}")


def purity(rho: MarginalDensity) -> float:
    return float(np.sum(np.abs(rho.matrix) ** 2))


def i_concurrence(state: TwoSpinState) -> float:
    """Normalized I-concurrence, computed from the smaller marginal and clipped to [0, 1]."""
    keep = 1 if state.spin1 <= state.spin2 else 2
    p = purity(partial_trace(state, keep))
    return float(np.clip(norm_factor(state.spin1, state.spin2) * (1.0 - p), 0.0, 1.0))


@dataclass(frozen=True)
class ConcurrenceSeries:
    times: np.ndarray
    concurrence: np.ndarray
    purity: np.ndarray

    def __post_init__(self):
        if not (len(self.times) == len(self.concurrence) == len(self.purity)):
            raise ValidationError("series arrays must have equal lengths")
        if np.any(np.diff(self.times) <= 0):
            raise ValidationError("series times must be strictly ascending")

    def __len__(self):
        return len(self.times)


def concurrence_series(snapshots: Iterable[tuple[float, TwoSpinState]]) -> ConcurrenceSeries:
    times, conc, pur = [], [], []
    for t, st in snapshots:
        keep = 1 if st.spin1 <= st.spin2 else 2
        p = purity(partial_trace(st, keep))
        times.append(t)
        pur.append(p)
        conc.append(norm_factor(st.spin1, st.spin2) * (1.0 - p))
    return ConcurrenceSeries(np.array(times), np.array(conc), np.array(pur))


def series_stats(series: ConcurrenceSeries, window_start: float, window_len: float) -> tuple[float, float, float]:
    """(max, min, trapezoidal time-average) of the concurrence over a window."""
    t = series.times
    end = window_start + window_len
    if window_len <= 0:
        raise DomainError(f"window length must be positive, got {window_len}")
    if len(t) < 2 or window_start < t[0] - TIME_TOL or end > t[-1] + TIME_TOL:
        raise DomainError(
            f"window [{window_start}, {end}] not covered by samples on [{t[0] if len(t) else None}, "
            f"{t[-1] if len(t) else None}]"
        )
    sel = (t >= window_start - TIME_TOL) & (t <= end + TIME_TOL)
    ts, cs = t[sel], series.concurrence[sel]
    if len(ts) < 2:
        raise DomainError("window contains fewer than two samples")
    mean = trapezoid(cs, ts) / (ts[-1] - ts[0])
    return float(cs.max()), float(cs.min()), float(mean)


@lru_cache(maxsize=64)
def _frequency_map(d1: int, d2: int):
    """Fold (index shift a > 0 on spin 1, shift b on spin 2) onto |a*b|.

    Returns the frequencies q > 0, a column order grouping the flattened
    (a, b) grid by q, the group start offsets for ``np.add.reduceat``, the
    sign of a*b in that order, and a mask of the b = 0 columns.
    """
    a = np.arange(1, d1)
    b = np.arange(-(d2 - 1), d2)
    prod = np.outer(a, b).reshape(-1)
    nz = np.flatnonzero(prod)
    order = nz[np.argsort(np.abs(prod[nz]), kind="stable")]
    q = np.abs(prod[order])
    freqs, starts = np.unique(q, return_index=True)
    return freqs.astype(float), order, starts, np.sign(prod[order]).astype(float), prod == 0


@dataclass(frozen=True)
class PuritySpectrum:
    """Purity of freely evolving states as trigonometric polynomials.

    For a batch of initial states psi_n, ``evaluate(tau)`` returns
    Tr rho1^2 of exp(-i g tau Sz1 Sz2) psi_n::

        constant + 2 * sum_q [cos_coef[q] cos(g tau q) + sin_coef[q] sin(g tau q)]
    """

    constant: np.ndarray  # (n,)
    freqs: np.ndarray  # (nq,)
    cos_coef: np.ndarray  # (n, nq)
    sin_coef: np.ndarray  # (n, nq)

    @classmethod
    def from_matrices(cls, psi: np.ndarray) -> "PuritySpectrum":
        """Build from amplitude matrices of shape (d1, d2) or (n, d1, d2)."""
        psi = np.asarray(psi, dtype=complex)
        if psi.ndim == 2:
            psi = psi[None]
        n, d1, d2 = psi.shape
        freqs, order, starts, signs, zero_mask = _frequency_map(d1, d2)
        fft_len = 2 * d2
        # F(a, b) = sum_m sum_{j - j' = b} v[m, j] conj(v[m, j']),  v[m, j] = psi[m, j] conj(psi[m - a, j]).
        # Shifts a < 0 are the complex conjugates of a > 0 and are folded in by the factor 2.
        corr = np.empty((n, d1 - 1, 2 * d2 - 1), dtype=complex)
        lags = np.arange(-(d2 - 1), d2) % fft_len
        for a in range(1, d1):
            v = psi[:, a:, :] * psi[:, : d1 - a, :].conj()
            spec = np.fft.fft(v, fft_len, axis=-1)
            auto = np.fft.ifft(np.sum(np.abs(spec) ** 2, axis=1), axis=-1)
            corr[:, a - 1, :] = auto[:, lags]
        flat = corr.reshape(n, -1)
        diag = np.sum(np.abs(psi) ** 2, axis=2)
        constant = np.sum(diag**2, axis=1) + 2 * flat.real[:, zero_mask].sum(axis=1)
        grouped = flat[:, order]
        cos_coef = np.add.reduceat(grouped.real, starts, axis=1)
        sin_coef = np.add.reduceat(grouped.imag * signs, starts, axis=1)
        return cls(constant, freqs, cos_coef, sin_coef)

    @classmethod
    def from_states(cls, states: Iterable[TwoSpinState]) -> "PuritySpectrum":
        return cls.from_matrices(np.stack([s.matrix() for s in states]))

    def basis(self, taus, g: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
        """cos / sin of g * tau * q, reusable across spectra of the same shape."""
        phase = g * np.outer(self.freqs, np.atleast_1d(np.asarray(taus, dtype=float)))
        return np.cos(phase), np.sin(phase)

    def evaluate(self, taus, g: float = 1.0, basis=None) -> np.ndarray:
        """Purity at elapsed times ``taus``; shape (n, len(taus))."""
        cos, sin = self.basis(taus, g) if basis is None else basis
        return self.constant[:, None] + 2 * (self.cos_coef @ cos + self.sin_coef @ sin)

def free_concurrence_series(
    state: TwoSpinState, g: float, taus, t_offset: float = 0.0
) -> ConcurrenceSeries:
    """Concurrence series of ``state`` evolving freely for elapsed ``taus``, via the spectral route."""
    taus = np.asarray(taus, dtype=float)
    pur = PuritySpectrum.from_matrices(state.matrix()).evaluate(taus, g)[0]
    conc = norm_factor(state.spin1, state.spin2) * (1.0 - pur)
    return ConcurrenceSeries(t_offset + taus, conc, pur)
