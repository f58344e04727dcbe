"""Giant d-dimensional components in multi-parameter random simplicial complexes.

Samplers for MRSC_d(n; p) and LM_d(n, lambda/n), union-find component
analysis over (d-1)-simplices, breadth-first exploration with
forward/backward/sibling bookkeeping, local-neighborhood censuses, and the
exact branching-process oracles the simulations are validated against.
"""

from .branching import (
    BranchingParams,
    component_density,
    extinction_gamma,
    extinction_generic,
    progeny_pgf,
    progeny_pmf,
    rate_I,
    sample_poisson_tree,
    subcritical_constants,
    survival_zeta,
    tree_prob,
)
from .complexes import (
    ComplexD,
    adjacent,
    dim,
    downward_closure,
    faces,
    read_jsonl,
    simplex,
    write_jsonl,
)
from .components import (
    ComponentReport,
    brute_force_components,
    component_map,
    normalized_stats,
    z_geq,
)
from .exploration import (
    CensusResult,
    ExplorationTrace,
    StepRecord,
    census,
    degree,
    explore,
    step_distribution_check,
    two_source_connectivity,
    vertex_growth_curve,
)
from .generate import (
    GenParams,
    derive_params,
    expected_counts,
    sample,
    supercritical_bound,
)
from .indexing import IndexedComplex
from .neighborhoods import (
    RootedNeighborhood,
    canonical_code,
    neighborhood,
    rooted_distance,
    rooted_isomorphic,
    truncate,
)
from .seeds import Seed

__all__ = [
    "BranchingParams",
    "CensusResult",
    "ComplexD",
    "ComponentReport",
    "ExplorationTrace",
    "GenParams",
    "IndexedComplex",
    "RootedNeighborhood",
    "Seed",
    "StepRecord",
    "adjacent",
    "brute_force_components",
    "canonical_code",
    "census",
    "component_density",
    "component_map",
    "degree",
    "derive_params",
    "dim",
    "downward_closure",
    "expected_counts",
    "explore",
    "extinction_gamma",
    "extinction_generic",
    "faces",
    "neighborhood",
    "normalized_stats",
    "progeny_pgf",
    "progeny_pmf",
    "rate_I",
    "read_jsonl",
    "rooted_distance",
    "rooted_isomorphic",
    "sample",
    "sample_poisson_tree",
    "simplex",
    "step_distribution_check",
    "subcritical_constants",
    "supercritical_bound",
    "survival_zeta",
    "tree_prob",
    "truncate",
    "two_source_connectivity",
    "vertex_growth_curve",
    "write_jsonl",
    "z_geq",
]
