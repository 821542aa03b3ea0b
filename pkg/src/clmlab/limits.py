"""One record holding every brute-force cap used across the package."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Limits:
    group_order: int = 200
    # exhaustive Gamma-module searches
    module_order: int = 3**5
    module_group_order: int = 24
    structure_module_order: int = 3**4
    structure_aut_order: int = 12000
    structure_end_size: int = 2_000_000
    # exhaustive enumeration of Hom_Z(G, H) (third counting route)
    exhaustive_hom_size: int = 200_000
    # class-triple automorphism search
    triple_group_order: int = 1000
    triple_candidates: int = 3_000_000
    # class-triple grids cross-check by brute force only below this automorphism count
    triple_bruteforce_aut: int = 1_000


DEFAULT_LIMITS = Limits()
