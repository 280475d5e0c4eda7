"""Cooperative three- and four-player quantum games under decoherence."""

from .analytic import AnalyticQuery, Role, closed_form_payoffs, max_payoff_closed_form, payoff_closed_form
from .channels import Channel, KrausSet, NoiseModel, apply_channel, check_completeness, lift_kraus, single_qubit_kraus
from .equilibrium import EquilibriumReport, SearchConfig, find_extremum_over_p, maximize_cooperator_payoff, nash_check
from .game import (
    DegenerateStrategyError,
    DensityMatrix,
    GameSpec,
    StrategyProfile,
    cooperator_op,
    final_state,
    initial_state,
    payoffs,
    play,
    solo_op,
    standard_game,
)

__version__ = "0.1.0"
