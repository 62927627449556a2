"""Exact reconstruction of planar maps P2 -> P2 from their branching
curves over prime fields, with the forward oracle used to generate and
verify instances."""

from .field import FieldCtx
from .mpoly import DRL, LEX, Block, MPoly, PolyRing
from .curves import (PlaneCurve, dual_curve, hessian_curve, is_smooth,
                     ramification_det, singular_radical,
                     singularity_count_expected)
from .groebner import (GroebnerBasis, Ideal, buchberger, eliminate,
                       ideal_quotient, normal_form, saturate, solve_zero_dim)
from .linnorm import (ParamCurve, QuadricSpace, adjoint_element,
                      image_quadrics, linear_normalization, linear_syzygies,
                      quotient_graded_piece)
from .veronese import (VeroneseIdeal, verify_veronese, veronese_from_quadrics,
                       veronese_from_syzygies)
from .verpar import (SurfacePoint, find_point, interpolate_map, jet_expand,
                     osculating_space, projection_system)
from .degree2 import HessianPencilSolution, hessian_pencil_step, reconstruct_degree2
from .pipeline import (PlanarMap, ReconstructionReport, branching_curve,
                       forward_generate, preimage_count, reconstruct,
                       verify_branching)

__version__ = "0.1.0"
