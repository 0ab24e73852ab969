"""Exact checking of window mean-payoff and window parity objectives on MDPs.

Thin wrapper over the native module: models are passed as text in the
``winmdp`` grammar, strategies as JSON documents (strings or dicts), and
every exact probability comes back as a ``fractions.Fraction``.
"""

import json
from fractions import Fraction

from . import _core

ModelError = _core.ModelError
StrategyFormatError = _core.StrategyFormatError
PartialStrategy = _core.PartialStrategy
OracleTooLarge = _core.OracleTooLarge

__all__ = [
    "ModelError",
    "StrategyFormatError",
    "PartialStrategy",
    "OracleTooLarge",
    "model_info",
    "canonical_model",
    "solve",
    "evaluate_strategy",
    "brute_force",
    "monte_carlo",
    "cli",
]


def _fraction(text):
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den) if den else 1)


def _strategy_text(strategy):
    if strategy is None or isinstance(strategy, str):
        return strategy
    return json.dumps(strategy)


def model_info(model):
    """Hash, labeling kind and size statistics of a model."""
    return json.loads(_core.model_info(model))


def canonical_model(model):
    """Reprint a model in canonical form (stable across round-trips)."""
    return _core.canonical_model(model)


def solve(model, objective, window=None, cap=None):
    """Exact per-state values and a witness strategy.

    objective is one of dfw-mp, dfw-par, fw-mp, fw-par, bw-mp, bw-par;
    fixed-window variants need ``window``, bw instead accepts ``cap``.
    """
    doc = json.loads(_core.solve(model, objective, window, cap))
    doc["values"] = {s: _fraction(v) for s, v in doc["values"].items()}
    return doc


def evaluate_strategy(model, objective, window, state, strategy=None):
    """Exact value of a fixed strategy (default: smallest enabled action)."""
    return _fraction(
        _core.evaluate_strategy(model, objective, window, state, _strategy_text(strategy))
    )


def brute_force(model, objective, window=None, guard=10000):
    """Reference values by strategy enumeration; raises OracleTooLarge beyond guard."""
    doc = json.loads(_core.brute_force(model, objective, window, guard))
    return {s: _fraction(v) for s, v in doc.items()}


def monte_carlo(model, objective, window, state, samples=10000, horizon=100, seed=1, strategy=None):
    """Sampled estimate with a 99% confidence half width; deterministic per seed."""
    return json.loads(
        _core.monte_carlo(
            model, objective, window, state, samples, horizon, seed, _strategy_text(strategy)
        )
    )


def cli(args):
    """Run the command line driver in process: returns (exit_code, stdout, stderr)."""
    return _core.cli([str(a) for a in args])
