"""Exact-arithmetic homology and cohomology over finitely generated abelian
coefficients, with universal-coefficient exact-sequence reports for
complexes, simplicial complexes, towers and inductive sequences."""

from .abgroups import (
    FgAbGroup,
    RankOneIndGroup,
    cyclic,
    ext_group,
    format_group,
    group_from_presentation,
    hom_group,
    parse_group,
    rank_one_classify,
    tensor_group,
    tor_group,
)
from .complexes import (
    ChainHomotopy,
    ChainMap,
    FreeComplex,
    GComplex,
    LocallySplitSes,
    ThreeCell,
    apply_on_homology,
    connecting_homomorphism,
    g_dual,
    homology,
    long_exact_check,
    tensor_complex,
)
from .extuct import (
    cocycle_space,
    coindex_hom,
    ext_via_presentation,
    extension_from_cocycle,
    cocycle_from_extension,
    hom_f_subgroup,
    index_hom,
    naturality_check,
    pext_fg,
    rho_evaluator,
    uct_report,
)
from .intlat import (
    IntMatrix,
    SnfDecomposition,
    image_membership,
    kernel_basis,
    smith_normal_form,
    summand_retraction,
)
from .proind import (
    ChainTower,
    CochainSequence,
    GroupTower,
    PairTower,
    SimplicialTower,
    asymptotic_witness,
    compose_one_cells,
    duality_check,
    hocolim,
    holim,
    holim_map,
    local_map,
    ml_analyze,
    pair_polyhedron_uct_report,
    pair_space_uct_report,
    polyhedron_uct_report,
    space_uct_report,
    verify_one_cell,
    verify_two_cell,
)
from .simplicial import (
    Carrier,
    CoverSystem,
    SimplicialComplex,
    barycentric_subdivision,
    chain_map_with_support,
    homotopy_with_support,
    nerve,
    oriented_chain_complex,
    refinement_carrier,
    relative_pair,
    three_cell_with_support,
)

__version__ = "0.1.0"
