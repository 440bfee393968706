"""Decide (alpha, beta)-representability of finite posets by separating
filters, by the two-player game, and by evaluating the game axioms."""

from .filters import OMEGA, FilterParams, Representation
from .games import GameParams, Position
from .poset import Poset, PosetError, parse_poset, standard_poset

__all__ = [
    "OMEGA",
    "FilterParams",
    "GameParams",
    "Poset",
    "PosetError",
    "Position",
    "Representation",
    "parse_poset",
    "standard_poset",
]
