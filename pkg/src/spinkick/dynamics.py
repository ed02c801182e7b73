"""Ising evolution H = g Sz1 Sz2 interrupted by two instantaneous y-rotations.

The state is propagated piecewise::

    |psi(t)> = U(t - t2) R^-1 U(t2 - t1) R U(t1) |psi0>,   U(t) = exp(-i g t Sz1 Sz2)

with R = exp(-i angle Sy) acting on both spins and t0 fixed to 0. H is diagonal
in the product basis, so each free segment is an exact phase multiplication.
A sample taken exactly at t1 or t2 sees the post-kick state.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .spin_core import SpinValue, make_kick
from .state_prep import TwoSpinState


@dataclass(frozen=True)
class KickSchedule:
    t1: float | None = None
    t2: float | None = None
    g: float = 1.0
    angle: float = np.pi / 2
    enabled: bool = True

    def __post_init__(self):
        if not (np.isfinite(self.g) and self.g > 0):
            raise ConfigError(f"coupling g must be positive, got {self.g}")
        if not np.isfinite(self.angle):
            raise ConfigError(f"kick angle must be finite, got {self.angle}")
        if self.enabled:
            if self.t1 is None or self.t2 is None:
                raise ConfigError("enabled kick schedule needs both t1 and t2")
            if not (np.isfinite(self.t1) and np.isfinite(self.t2)):
                raise ConfigError("kick times must be finite")
            if not 0 < self.t1 < self.t2:
                raise ConfigError(f"kick times must satisfy 0 < t1 < t2, got t1={self.t1}, t2={self.t2}")

    @classmethod
    def free(cls, g: float = 1.0) -> "KickSchedule":
        """Schedule with kicks switched off."""
        return cls(g=g, enabled=False)


@dataclass(frozen=True)
class EvolutionRequest:
    initial: TwoSpinState
    schedule: KickSchedule
    sample_times: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def __post_init__(self):
        times = np.asarray(self.sample_times, dtype=float).reshape(-1)
        if not np.all(np.isfinite(times)):
            raise ConfigError("sample times must be finite")
        if times.size and times[0] < 0:
            raise ConfigError("sample times must be non-negative")
        if np.any(np.diff(times) <= 0):
            raise ConfigError("sample times must be strictly ascending")
        object.__setattr__(self, "sample_times", times)


def ising_phases(spin1: SpinValue, spin2: SpinValue) -> np.ndarray:
    """k1 * k2 on the (dim1, dim2) grid."""
    return np.outer(spin1.ks(), spin2.ks())


def _propagate(psi: np.ndarray, kk: np.ndarray, g: float, dt: float) -> np.ndarray:
    if dt == 0:
        return psi
    return psi * np.exp(-1j * g * dt * kk)


def _kick(psi: np.ndarray, r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
    # (R1 x R2) vec(psi) == R1 psi R2^T for row-major flattening
    return r1 @ psi @ r2.T


def free_propagate(state: TwoSpinState, g: float, dt: float) -> TwoSpinState:
    if dt < 0:
        raise DomainError(f"propagation time must be non-negative, got {dt}")
    if dt == 0:
        return state
    kk = ising_phases(state.spin1, state.spin2)
    return TwoSpinState.from_matrix(state.spin1, state.spin2, _propagate(state.matrix(), kk, g, dt))


def apply_kick(state: TwoSpinState, angle: float = np.pi / 2, inverse: bool = False) -> TwoSpinState:
    a = -angle if inverse else angle
    psi = _kick(state.matrix(), make_kick(state.spin1, a), make_kick(state.spin2, a))
    return TwoSpinState.from_matrix(state.spin1, state.spin2, psi)


def evolve(request: EvolutionRequest) -> list[tuple[float, TwoSpinState]]:
    """Snapshots ``(t, state)`` for each requested sample time."""
    st = request.initial
    sched = request.schedule
    g = sched.g
    kk = ising_phases(st.spin1, st.spin2)
    psi0 = st.matrix()

    out = []
    if not sched.enabled:
        for t in request.sample_times:
            out.append((float(t), TwoSpinState.from_matrix(st.spin1, st.spin2, _propagate(psi0, kk, g, t))))
        return out

    r1, r2 = make_kick(st.spin1, sched.angle), make_kick(st.spin2, sched.angle)
    after1 = _kick(_propagate(psi0, kk, g, sched.t1), r1, r2)
    after2 = _kick(_propagate(after1, kk, g, sched.t2 - sched.t1), r1.T, r2.T)
    for t in request.sample_times:
        if t < sched.t1:
            psi = _propagate(psi0, kk, g, t)
        elif t < sched.t2:
            psi = _propagate(after1, kk, g, t - sched.t1)
        else:
            psi = _propagate(after2, kk, g, t - sched.t2)
        out.append((float(t), TwoSpinState.from_matrix(st.spin1, st.spin2, psi)))
    return out


def state_after_kicks(initial: TwoSpinState, schedule: KickSchedule) -> TwoSpinState:
    """State immediately after the second kick (or the initial state if kicks are off)."""
    if not schedule.enabled:
        return initial
    return evolve(EvolutionRequest(initial, schedule, np.array([schedule.t2])))[0][1]


def dynamical_period(spin1: SpinValue, spin2: SpinValue | None = None, g: float = 1.0) -> float:
    """Smallest T with exp(-i g T k1 k2) = 1 for all k1, k2: 2 pi / g times 1 or 2 per half-integer spin."""
    spin2 = spin1 if spin2 is None else spin2
    mult = (1 if spin1.is_integer else 2) * (1 if spin2.is_integer else 2)
    return 2 * np.pi * mult / g
