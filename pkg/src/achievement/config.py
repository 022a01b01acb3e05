"""Resource limits shared by the library and the CLI."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Budgets:
    points: int = 5_000_000  # per-depth cover points / certificate grid size
    oracle_soft_cap: int = 24  # terms; above this needs allow_large
    oracle_hard_cap: int = 30
    shift_search_bound: int = 3
    display_depth: int = 4
