"""Steiner mincut index and dual edge sensitivity oracle."""

from ._core import (
    Graph,
    Oracle,
    SckError,
    gen_hard_instance,
    gen_random,
    min_steiner_cut_separating,
    recover_adjacency,
    steiner_mincut,
    verify,
)

__all__ = [
    "Graph",
    "Oracle",
    "SckError",
    "gen_hard_instance",
    "gen_random",
    "min_steiner_cut_separating",
    "recover_adjacency",
    "steiner_mincut",
    "verify",
]
