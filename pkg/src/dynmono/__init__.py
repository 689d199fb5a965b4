"""Runtime laboratory for evolutionary algorithms on dynamic monotone landscapes."""

from .algorithms import EAConfig, RunResult, run
from .core import BitString, RandomSource, dominates, mutate, random_bitstring, zeros
from .landscapes import Landscape, make_evaluator, parse_landscape, poea_select
from .markov import ChainSpec, expected_total_time, hitting_times, state_drift

__version__ = "0.1.0"

__all__ = [
    "BitString", "RandomSource", "zeros", "dominates", "mutate", "random_bitstring",
    "Landscape", "parse_landscape", "make_evaluator", "poea_select",
    "EAConfig", "RunResult", "run",
    "ChainSpec", "state_drift", "hitting_times", "expected_total_time",
]
