"""Optimal sub-Riemannian geodesics on the (n+1, 2n+1) Carnot groups with a
path-geometry structure."""

from .errors import (ConvergenceFailure, DimensionMismatch, InvalidParams, NonHorizontal,
                     NotInCutLocus, NotSpecialOrthogonal, NotUnitLevel, PathGroupError,
                     RootNotBracketed)
from .geodesics import (Covelocity, GeodesicParams, Helix, Line, covelocity_from_params,
                        exp_point, geodesic_curve, integrate_hamiltonian, params_from_covelocity,
                        physical_time, rescaled_time, vertical_flow)
from .group import (GroupPoint, Stratum, classify, frame_at, horizontal_speed,
                    horizontality_defect, inverse, multiply, reduce_to_origin)
from .optimality import (TAU0, CutInfo, conjugate_time, cut_info, cut_time, cut_time_at_point,
                         in_cut_locus, phi0)
from .symmetry import InvariantPoint, invariants_of, reduced_exp, so_n_act
from .synthesis import (Multiplicity, Solution, SynthesisResult, F_y2_profile, distance,
                        synthesize)

__version__ = "0.1.0"
