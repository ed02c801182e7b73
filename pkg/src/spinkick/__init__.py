"""Entanglement of two Ising-coupled spins with two pi/2 phase kicks."""
from .dynamics import EvolutionRequest, KickSchedule, apply_kick, dynamical_period, evolve, free_propagate
from .errors import ConfigError, DomainError, SpinKickError, ValidationError
from .metrics import (
    ConcurrenceSeries,
    MarginalDensity,
    PuritySpectrum,
    concurrence_series,
    i_concurrence,
    partial_trace,
    purity,
    series_stats,
)
from .optimizer import Objective, OptimizationResult, evaluate_schedule, optimize, unkicked_stats
from .spin_core import SpinValue, make_kick, make_sx, make_sy, make_sz, wigner_small_d
from .state_prep import SingleSpinState, TwoSpinState, css_equatorial, initial_state, long_index, product_state

__version__ = "0.1.0"
