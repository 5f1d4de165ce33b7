"""Frenet frames, curvatures and Cartan framings of slant null curves on
3-dimensional almost contact B-metric manifolds."""

from .bsolver import BOdeProblem, analytic_b_F0, invert_b_for_u, solve_b_numeric
from .constructions import (
    group_curve,
    group_exponential,
    lie_matrix_rep,
    make_lie_slant_vector,
    make_minkowski_curve,
    minkowski_cartan_frame,
)
from .curves import (
    compute_b,
    curvatures,
    curvatures_closed_form_F1,
    general_frame,
    general_frame_coefficients,
    geodesic_test,
    slant_null_check,
    unique_distinguished_frame,
    verify_cartan,
)
from .models import FlatCosymplecticModel, LieGroupModel, classify, koszul_connection, lee_forms, tensor_F
from .structure import associated_metric, apply_phi, check_structure, metric_eval

__version__ = "0.1.0"
