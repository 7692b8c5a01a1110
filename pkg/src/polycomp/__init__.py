"""Exact certification of compressed lattice polytopes and their applications:
cut polytopes of graphs, marginal polytopes of hierarchical models, and
LP-versus-IP cell bounds, all in arbitrary-precision rational arithmetic.
"""

__version__ = "0.1.0"

from .bounds import (
    GapWitness,
    StandardFormProgram,
    find_weight,
    gap_witness,
    ip_max,
    lp_ip_equal_all,
    lp_max,
    make_program,
    pull_first_unimodular,
)
from .compressed import (
    CompressedCertificate,
    FacetLevelProfile,
    cube_embedding,
    facet_levels,
    is_compressed,
    verify_cube_section,
)
from .cutpoly import (
    CutVector,
    Graph,
    cut_compressed,
    cut_polytope,
    cut_semimetric,
    cycle_facet_levels,
    edge_contract,
    has_minor,
    induced_subgraph,
    k5free_facets,
    max_induced_cycle,
)
from .linalg import (
    AffineLattice,
    affine_lattice_of,
    determinant,
    hermite_normal_form,
    integer_kernel,
    standard_lattice,
)
from .margins import (
    MarginalModel,
    SimplicialComplex,
    boundary_simplex_classifier,
    cone_model,
    covariance_check,
    is_decomposable,
    is_reducible,
    marginal_matrix,
    marginal_polytope,
    margins_compressed,
    tilde_graph,
)
from .polytope import (
    FacetIneq,
    LatticePolytope,
    affine_hull_equations,
    face_of,
    facet_enumeration,
)
from .triangulate import (
    Triangulation,
    all_pulling_unimodular,
    is_unimodular,
    normalized_volume,
    pulling_triangulation,
    total_normalized_volume,
    transitive_symmetry_shortcut,
)
