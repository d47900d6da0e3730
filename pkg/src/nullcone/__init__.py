"""Nullcones of simple groups acting on irreducible modules.

Exact-arithmetic weight systems, instability stratification and component
counts, with a catalog of the modules whose invariant algebra is free.
"""
from .catalog import CatalogEntry, entries, expected, find
from .rootsystem import RootDatum, RootSystemType, build, dominant_rep, dual_weight, root_datum
from .strata import (
    BudgetExceeded,
    Candidate,
    EnumOptions,
    NullconeReport,
    Stratum,
    analyze,
    enumerate_candidates,
    optimality_filter,
    stratum_of,
)
from .weightsys import WeightSystem, weight_system, weyl_dim

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "Candidate", "CatalogEntry", "EnumOptions", "NullconeReport",
    "RootDatum", "RootSystemType", "Stratum", "WeightSystem", "analyze", "build",
    "dominant_rep", "dual_weight", "entries", "enumerate_candidates", "expected", "find",
    "optimality_filter", "root_datum", "stratum_of", "weight_system", "weyl_dim",
]
