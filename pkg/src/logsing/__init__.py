"""Exact analysis of isolated hypersurface singularity germs.

Decides quasihomogeneity, computes logarithmic vector fields and local
invariants, and certifies kernel membership for the first logarithmic
differential on top local cohomology, all in exact rational arithmetic.
"""

from .cohomology import (
    CertificateSearchFailed,
    CohElem,
    CohVector,
    InKernel,
    NotInKernel,
    PartialHom,
    certificate_solve,
    d1_presentation,
    derivation_action,
    kernel_test,
    module_action,
    residue,
    residue_pairing,
    truncated_injectivity,
)
from .derlog import (
    LogDerivation,
    LogDerModule,
    TraceObstructionFound,
    annihilator_generators,
    derlog_generators,
    find_weights,
    linear_part,
    quasihomogeneity_test,
    saito_freeness_check,
    trace_vanishing_report,
)
from .groebner import (
    GroebnerBasis,
    ModVector,
    buchberger,
    ideal_membership,
    normal_form,
    syzygies,
)
from .jets import (
    ColengthResult,
    JetSpace,
    NotIsolated,
    NotQuasihomogeneousInput,
    NotSingularAtOrigin,
    colength,
    graded_milnor_piece,
    jet_space,
    lct_check,
    milnor_tjurina,
    mpower_in_ideal,
    quotient_basis,
)
from .orders import GREVLEX, LEX, TermOrder, pot_over, top_over
from .poly import (
    Poly,
    PolyParseError,
    jacobian,
    jacobian_ideals,
    parse_poly,
    partial_derivative,
    poly_arith,
    weighted_degree,
    is_weighted_homogeneous,
)
from .report import AnalysisJob, SingularityReport, analyze, corpus_run, emit_report

__version__ = "0.1.0"

__all__ = [
    "AnalysisJob",
    "CertificateSearchFailed",
    "CohElem",
    "CohVector",
    "ColengthResult",
    "GREVLEX",
    "GroebnerBasis",
    "InKernel",
    "JetSpace",
    "LEX",
    "LogDerModule",
    "LogDerivation",
    "ModVector",
    "NotInKernel",
    "NotIsolated",
    "NotQuasihomogeneousInput",
    "NotSingularAtOrigin",
    "PartialHom",
    "Poly",
    "PolyParseError",
    "SingularityReport",
    "TermOrder",
    "TraceObstructionFound",
    "analyze",
    "annihilator_generators",
    "buchberger",
    "certificate_solve",
    "colength",
    "corpus_run",
    "d1_presentation",
    "derivation_action",
    "derlog_generators",
    "emit_report",
    "find_weights",
    "graded_milnor_piece",
    "ideal_membership",
    "is_weighted_homogeneous",
    "jacobian",
    "jacobian_ideals",
    "jet_space",
    "kernel_test",
    "lct_check",
    "linear_part",
    "milnor_tjurina",
    "module_action",
    "mpower_in_ideal",
    "normal_form",
    "parse_poly",
    "partial_derivative",
    "poly_arith",
    "pot_over",
    "quasihomogeneity_test",
    "quotient_basis",
    "residue",
    "residue_pairing",
    "saito_freeness_check",
    "syzygies",
    "top_over",
    "trace_vanishing_report",
    "truncated_injectivity",
    "weighted_degree",
]
