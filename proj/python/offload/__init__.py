"""Delay-aware Wi-Fi offloading: finite-horizon solvers, baselines and Monte-Carlo experiments."""

from ._core import (
    Action,
    Config,
    DomainError,
    Instance,
    MonotoneSolution,
    ParseError,
    PreconditionError,
    ResourceError,
    Solution,
    ValidationError,
    expectimax,
    run_experiment,
    sample_instance,
    solve,
    solve_monotone,
    verify,
)

__all__ = [
    "Action",
    "Config",
    "DomainError",
    "Instance",
    "MonotoneSolution",
    "ParseError",
    "PreconditionError",
    "ResourceError",
    "Solution",
    "ValidationError",
    "expectimax",
    "run_experiment",
    "sample_instance",
    "solve",
    "solve_monotone",
    "verify",
]
