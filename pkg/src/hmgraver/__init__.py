"""Unimodular hierarchical models: design matrices, classification by
forbidden minors and nuclear decompositions, and Graver bases."""

from .complex_core import (ComplexError, HMPair, MinorWitness, NuclearCertificate,
                           SimplicialComplex, VertexKind, alexander_dual,
                           canonical_form, classify_vertex, delete_vertex,
                           embed_as_minor, enumerate_complexes, enumerate_pairs,
                           extend, faces, is_nuclear, link_vertex,
                           merge_face_rewrite, nuclear_decompose,
                           nuclear_decompositions)
from .design_matrix import (DesignMatrix, bareiss_det, build_design_matrix,
                            ghost_repeat, integer_kernel_basis, kernels_equal,
                            lambda_lift, marginal_matrix, rank)
from .graver_engine import (GraverBasis, GuardError, SignedVector, graver_disjoint_nucleus,
                            graver_dual_nucleus, graver_for_unimodular_pair,
                            graver_oracle, graver_oracle_pair, lift_cone, lift_ghost,
                            lift_lambda2, lift_lambda3_over_ghost, sample_graver)
from .unimodularity import (Verdict, certify_nonunimodular_by_submatrix, classify,
                            classify_clique_complex, forbidden_catalog,
                            is_unimodular_by_graver, is_unimodular_by_minors,
                            is_unimodular_pair_by_graver)
