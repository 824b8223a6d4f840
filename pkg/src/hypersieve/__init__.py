"""hypersieve: exact-arithmetic censuses of hypersurface sections over small
finite fields, density predictions from zeta Euler products, and
constructive lifting of good sections over F_q[t] localized at (t)."""

from .gf import FieldDesc, FieldElem, embed, embed_into, enumerate_field, \
    extension_of, make_field
from .homog import HomogPoly, ProjPoint, enumerate_forms, format_poly, \
    monomial_rank, monomial_unrank, parse_poly, point_from_ints, poly_diff, \
    poly_divides, poly_eval
from .ideal import GradedPiece, SubschemeSpec, graded_piece, hilbert_dim, \
    is_empty_projective, restrict_to_finite, stabilization_degree, \
    vanishing_piece
from .scheme import PointCensus, SectionProblem, SectionReport, \
    closed_point_counts, edim_at, is_good_section, is_irreducible_section, \
    is_normal_R1_section, is_reduced_section, is_smooth_section, \
    is_snc_section, rational_points
from .zeta import DensityPrediction, predict_avoidance, predict_containment, \
    predict_irreducibility, predict_smooth_product, projective_space_census, \
    zeta_truncated
from .density import DensityReport, Experiment, compare_report, run_census
from .dvr import DvrHypersurface, DvrPoint, FqtField, LiftProblem, PolyT, \
    RatFunc, check_flat_restriction, dvr_elem, fiberwise, lift_search, \
    psi_x, specialize_point

__version__ = "0.1.0"
