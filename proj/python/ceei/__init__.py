"""Exact fair-division and market-equilibrium toolkit.

Utilities, prices and welfare values are exact ``fractions.Fraction``
objects wherever the library computes them exactly. Assignments are owner
lists: ``owner[j]`` is the 0-based agent that receives object ``j``.
"""

from ._ceei import (
    CeeiError,
    InconclusiveSearch,
    Instance,
    InstanceTooLarge,
    InvariantError,
    NonConvergence,
    agent_utilities,
    binary_gap_example,
    binary_max_nash,
    brute_force_max_nash,
    exists_ceei_disc_bruteforce,
    exists_ceei_frac_discrete,
    find_ceei_disc_identical,
    from_partition,
    from_three_partition,
    gen_random,
    is_envy_free,
    is_pareto_optimal,
    max_nash_discrete,
    nash_welfare,
    planted_three_partition,
    separation_example,
    solve_eg,
    verify_ceei_disc,
    verify_ceei_frac,
)

__all__ = [name for name in dir() if not name.startswith("_")]
