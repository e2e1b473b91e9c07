"""Computing with compact hereditary families of finite sets: combinatorial
norms, dual-ball extreme points, spreads, point-removal ranks and permutation
search."""

from .core import (ExplicitFamily, FamilyParseError, FinSet, Permutation,
                   apply_permutation, contains, downward_closure,
                   family_from_text, family_to_text, finset, format_permutation,
                   format_set, is_hereditary, maximal_elements,
                   parse_permutation, parse_set, read_family, subsets, trace,
                   write_family)
from .spreading import (SpreadWitness, canonical_spread_witness, is_spread_of,
                        is_spreading, spread_witness, spread_witness_bruteforce,
                        spreading_closure, spreads_within)
from .lazy import (AtLeast, ExtensionSet, LazyFamily, OrdinalW2,
                   UnsupportedDescriptorError, derivative_chain,
                   format_ordinal, parse_ordinal)
from .constructions import (FiniteTree, adjacent_pairs_removed, block_schreier,
                            cube, from_explicit, homeo_not_pi_pair,
                            maximal_member_avoiding, parse_descriptor,
                            permuted, permuted_pair,
                            remove_pattern_initial_pairs, remove_sets,
                            restrict_ground, schreier,
                            singleton_density_check, tree_lift, union)
from .norms import (SignedFunctional, SignedPermutationOperator, SparseVector,
                    apply_operator, candidate_functionals, extreme_points,
                    format_functional, functional_apply, indicator,
                    is_extreme_brute, is_isometry, norm, norming_check,
                    read_vector, vector_from_text, vector_to_text)
from .iso import (AutomorphismOverflowError, CensusReport, ExclusionComparison,
                  automorphism_summary, automorphisms, census,
                  enumerate_hereditary_spreading, excluded_points,
                  find_pi_bruteforce, find_pi_homeomorphism, level_slice,
                  point_signature, reconstruct_level, regular_reachability,
                  signature_table, spread_exclusion_check, stratum)

__version__ = "0.1.0"
