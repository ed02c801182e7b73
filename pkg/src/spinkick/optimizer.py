"""Grid search (plus optional coordinate refinement) over the two kick times."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import KickSchedule, dynamical_period, ising_phases
from .metrics import PuritySpectrum, norm_factor
from .spin_core import SpinValue, make_kick
from .state_prep import initial_state

SAMPLE_STEP = 0.01  # in units of 1/g
DEFAULT_GRID_STEP = 0.05  # in units of 1/g
REFINE_TOL = 1e-4
TIE_TOL = 1e-12
_CHUNK = 128


class Objective(str, enum.Enum):
    MAX = "max"
    MIN = "min"
    MEAN = "mean"


@dataclass(frozen=True)
class OptimizationResult:
    t1: float
    t2: float
    objective_value: float
    c_max: float
    c_min: float
    c_mean: float
    evaluations: int
    grid_step: float


def window_taus(spin1: SpinValue, spin2: SpinValue | None = None, g: float = 1.0, step: float = SAMPLE_STEP) -> np.ndarray:
    """Elapsed times covering one dynamical period, endpoints included, spacing <= step/g."""
    period = dynamical_period(spin1, spin2, g)
    n = math.ceil(period * g / step - 1e-9)
    return np.linspace(0.0, period, n + 1)


def _stats(conc: np.ndarray, taus: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    span = taus[-1] - taus[0]
    dt = np.diff(taus)
    mean = np.sum((conc[:, 1:] + conc[:, :-1]) * dt, axis=1) / (2 * span)
    return conc.max(axis=1), conc.min(axis=1), mean


def _pick(kind: Objective, cmax, cmin, cmean):
    return {Objective.MAX: cmax, Objective.MIN: cmin, Objective.MEAN: cmean}[Objective(kind)]


class _Evaluator:
    """Batched post-second-kick statistics for one spin pair."""

    def __init__(self, spin1: SpinValue, spin2: SpinValue | None, g: float, angle: float):
        self.spin1 = spin1
        self.spin2 = spin1 if spin2 is None else spin2
        self.g = g
        self.kk = ising_phases(self.spin1, self.spin2)
        self.psi0 = initial_state(self.spin1, self.spin2).matrix()
        self.r1 = make_kick(self.spin1, angle)
        self.r2 = make_kick(self.spin2, angle)
        self.taus = window_taus(self.spin1, self.spin2, g)
        self.factor = norm_factor(self.spin1, self.spin2)
        self.evaluations = 0
        self._basis = None

    def post_kick(self, t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
        ph = lambda t: np.exp(-1j * self.g * t[:, None, None] * self.kk)
        psi = ph(t1) * self.psi0
        psi = self.r1 @ psi @ self.r2.T
        psi = ph(t2 - t1) * psi
        return self.r1.T @ psi @ self.r2

    def stats(self, t1, t2) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        t1 = np.atleast_1d(np.asarray(t1, dtype=float))
        t2 = np.atleast_1d(np.asarray(t2, dtype=float))
        out = [np.empty(t1.size) for _ in range(3)]
        for lo in range(0, t1.size, _CHUNK):
            sl = slice(lo, lo + _CHUNK)
            spec = PuritySpectrum.from_matrices(self.post_kick(t1[sl], t2[sl]))
            if self._basis is None:
                self._basis = spec.basis(self.taus, self.g)
            conc = self.factor * (1.0 - spec.evaluate(self.taus, self.g, self._basis))
            for arr, val in zip(out, _stats(conc, self.taus)):
                arr[sl] = val
        self.evaluations += t1.size
        return tuple(out)


def _check_schedule(t1: float, t2: float, g: float):
    KickSchedule(t1=t1, t2=t2, g=g)


def evaluate_schedule(
    spin: SpinValue,
    g: float,
    t1: float,
    t2: float,
    objective: Objective | str = Objective.MAX,
    angle: float = np.pi / 2,
    spin2: SpinValue | None = None,
) -> tuple[float, float, float, float]:
    """(objective value, c_max, c_min, c_mean) of the concurrence over [t2, t2 + period]."""
    _check_schedule(t1, t2, g)
    cmax, cmin, cmean = (float(x[0]) for x in _Evaluator(spin, spin2, g, angle).stats(t1, t2))
    return float(_pick(objective, cmax, cmin, cmean)), cmax, cmin, cmean


def unkicked_stats(spin: SpinValue, g: float = 1.0, spin2: SpinValue | None = None) -> tuple[float, float, float]:
    """(c_max, c_min, c_mean) without kicks over [0, period]."""
    spin2 = spin if spin2 is None else spin2
    taus = window_taus(spin, spin2, g)
    spec = PuritySpectrum.from_matrices(initial_state(spin, spin2).matrix())
    conc = norm_factor(spin, spin2) * (1.0 - spec.evaluate(taus, g))
    return tuple(float(x[0]) for x in _stats(conc, taus))


def _first_best(values: np.ndarray) -> int:
    return int(np.flatnonzero(values >= values.max() - TIE_TOL)[0])


def optimize(
    spin: SpinValue,
    g: float = 1.0,
    objective: Objective | str = Objective.MAX,
    grid_step: float | None = None,
    refine: bool = False,
    angle: float = np.pi / 2,
    spin2: SpinValue | None = None,
    box: tuple[tuple[float, float], tuple[float, float]] | None = None,
) -> OptimizationResult:
    """Maximize a post-kick statistic over (t1, t2).

    Exhaustive grid t1 in {h, 2h, ...} up to 2 pi / g and t2 - t1 in the same set,
    h = ``grid_step`` (default 0.05/g). Ties go to the smallest t1, then t2.
    With ``refine``, coordinate moves of h/10 continue from the grid optimum
    until a move improves the objective by less than 1e-4.

    ``box = ((t1_lo, t1_hi), (t2_lo, t2_hi))`` restricts both the grid and the
    refinement, e.g. to look for a local optimum near known times.
    """
    objective = Objective(objective)
    h = DEFAULT_GRID_STEP / g if grid_step is None else float(grid_step)
    if not h > 0:
        raise ValueError(f"grid step must be positive, got {grid_step}")
    n = int(math.floor(2 * np.pi / (g * h) + 1e-9))
    if n < 1:
        raise ValueError(f"grid step {h} exceeds the search range 2*pi/g")
    ev = _Evaluator(spin, spin2, g, angle)

    steps = h * np.arange(1, n + 1)
    t1_grid = np.repeat(steps, n)
    t2_grid = t1_grid + np.tile(steps, n)
    inside = lambda a, b: True
    if box is not None:
        (lo1, hi1), (lo2, hi2) = box
        inside = lambda a, b: (lo1 - 1e-12 <= a <= hi1 + 1e-12) and (lo2 - 1e-12 <= b <= hi2 + 1e-12)
        keep = np.array([inside(a, b) for a, b in zip(t1_grid, t2_grid)], dtype=bool)
        if not keep.any():
            raise ValueError(f"search box {box} contains no grid points")
        t1_grid, t2_grid = t1_grid[keep], t2_grid[keep]
    cmax, cmin, cmean = ev.stats(t1_grid, t2_grid)
    values = _pick(objective, cmax, cmin, cmean)
    i = _first_best(values)
    best = (t1_grid[i], t2_grid[i])
    best_stats = (cmax[i], cmin[i], cmean[i])
    best_val = values[i]

    if refine:
        d = h / 10
        for _ in range(10_000):
            t1, t2 = best
            cand = [(t1 - d, t2), (t1, t2 - d), (t1, t2 + d), (t1 + d, t2)]
            cand = [(a, b) for a, b in cand if 0 < a < b and inside(a, b)]
            if not cand:
                break
            c1 = np.array([c[0] for c in cand])
            c2 = np.array([c[1] for c in cand])
            st = ev.stats(c1, c2)
            vals = _pick(objective, *st)
            # candidates are listed in (t1, t2) order, so the first best wins ties
            j = _first_best(vals)
            gain = vals[j] - best_val
            if gain <= TIE_TOL:
                break
            best, best_val = cand[j], vals[j]
            best_stats = tuple(s[j] for s in st)
            if gain < REFINE_TOL:
                break

    return OptimizationResult(
        t1=float(best[0]),
        t2=float(best[1]),
        objective_value=float(best_val),
        c_max=float(best_stats[0]),
        c_min=float(best_stats[1]),
        c_mean=float(best_stats[2]),
        evaluations=ev.evaluations,
        grid_step=h,
    )
