"""Finite-model verification of a homological nerve theorem.

Build simplicial complexes, covers by subcomplexes, nerves and
Vietoris-Rips complexes; compute integral homology by Smith normal form;
assemble the Mayer-Vietoris double complex of a cover and its spectral
sequences; check the nerve theorem's hypotheses, conclusions and proof
steps.
"""
from .algebra import CoefficientSpec, IntMatrix, InvariantFactors, Subspace, kernel_basis, rank, snf, subspace_dim
from .complexes import (
    ChainComplex,
    HomologyGroup,
    SimplicialComplex,
    boundary_matrix,
    chain_homology,
    closure,
    homology,
    is_homologically_trivial,
    skeleton,
)
from .covers import (
    Cover,
    DowkerRelation,
    FiniteMetricSpace,
    InvalidCoverError,
    dowker_pair,
    good_up_to_level,
    intersection,
    nerve,
    nf_complex,
    vietoris_rips,
)
from .mvss import (
    DoubleComplex,
    PageTable,
    build_double_complex,
    check_bicomplex,
    e1_bottom_row,
    row_homology,
    ss_limit,
    ss_pages,
    total_complex,
)
from .nervethm import (
    HypothesisReport,
    TheoremFalsified,
    TheoremReport,
    check_g_chain_map,
    check_hypotheses,
    check_theorem,
    g_map,
)

__version__ = "0.1.0"
