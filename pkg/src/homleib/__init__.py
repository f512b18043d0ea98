"""Exact cohomology, Gerstenhaber structure and deformation theory of
finite-dimensional multiplicative Hom-Leibniz algebras."""
from .algebra import (AlgebraError, HomLeibnizAlgebra, ValidationReport, alpha_power_eval, bracket_eval,
                      corpus_example, standard_corpus, verify_hom_leibniz, verify_multiplicative)
from .cochain import (AlphaTypeCochain, GammaCochain, d_alpha_alpha, d_alpha_gamma, d_gamma_alpha,
                      d_gamma_gamma, differential, is_alpha_compatible)
from .cohomology import (CohomologyReport, ComplexSlice, NotAComplexError, apply_differential, assemble,
                         cheng_cai_cohomology, cohomologous, cohomology, is_coboundary, is_cocycle)
from .deformation import (GaugeTransform, ObstructionClass, TruncatedDeformation, alpha_associator,
                          apply_gauge, extend, gauge_from, infinitesimal, obstruction, reduce, reduce_counted,
                          rigidity_report, verify)
from .equivariant import (FiniteGroup, GroupAction, cochain_action, equivariant_cohomology,
                          equivariant_extend, equivariant_obstruction, fixed_subalgebra, invariant_slice,
                          reynolds, verify_action)
from .gerstenhaber import ShiftedCochain, SignedShuffle, bracket, circle, d_graded, shuffles

__version__ = "0.1.0"
