"""Spectrum-refinement isomorphism testing and gravitational clique search over exact field arithmetic."""

__version__ = "0.1.0"

from .field import MERSENNE61, FieldMatrix, MultiSpectrum, multispectrum, permute_conjugate, poly_eval
from .graphs import Graph, Permutation
from .gravity import GravityParams, gravity_clique
from .oracle import IsoWitness, brute_force_isomorphism, exhaustive_sat, max_clique_exact
from .refine import Isomorphic, NonIsomorphic, RefineConfig, iso_test
from .sat import CnfFormula, bipartite_glue, cnf_to_graph, decode_assignment, sat_solve
from .spectral import eigenheight, lp_height, rank1_augment, symmetric_eigendecompose
from .splitting import SplittingBasis, StructureConstants, extract_splitting, structure_constants

__all__ = [
    "MERSENNE61", "FieldMatrix", "MultiSpectrum", "multispectrum", "permute_conjugate", "poly_eval",
    "Graph", "Permutation", "GravityParams", "gravity_clique", "IsoWitness",
    "brute_force_isomorphism", "exhaustive_sat", "max_clique_exact", "Isomorphic", "NonIsomorphic",
    "RefineConfig", "iso_test", "CnfFormula", "bipartite_glue", "cnf_to_graph", "decode_assignment",
    "sat_solve", "eigenheight", "lp_height", "rank1_augment", "symmetric_eigendecompose",
    "SplittingBasis", "StructureConstants", "extract_splitting", "structure_constants",
]
