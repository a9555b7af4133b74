"""Approximate pure Nash equilibria in weighted congestion games.

Exact (rational) tools for building games without approximate equilibria,
compiling Boolean circuits into congestion games, and checking the resulting
reductions with a brute-force equilibrium oracle.
"""

from .game import (UNBOUNDED, Game, Player, Polynomial, Step, find_improving_move,
                   is_alpha_dominating, is_alpha_pne, player_cost, social_cost)
from .oracle import enumerate_pne, improving_dynamics, nonexistence_threshold

__all__ = [
    "UNBOUNDED", "Game", "Player", "Polynomial", "Step",
    "find_improving_move", "is_alpha_dominating", "is_alpha_pne",
    "player_cost", "social_cost",
    "enumerate_pne", "improving_dynamics", "nonexistence_threshold",
]

__version__ = "0.1.0"
