"""Decoupled geometric parameterization of planar homographies.

A homography relative to a reference square is written as a similarity
(four parameters, linear in two-corner positional offsets) followed by a
kernel transformation (four parameters, linear in four angular offsets).
"""

from .affine import (
    AffineKernelParams,
    AffineParams,
    TransformClass,
    affine_params_to_three_offsets,
    affine_to_matrix,
    classify,
    compose_affine_sks,
    three_offsets_to_affine_params,
)
from .geometry import (
    CorrespondenceSet,
    Homography3,
    Point2,
    SquareConfig,
    apply,
    compose,
    invert,
    projective_distance,
)
from .kernel import (
    AngularOffsets,
    KernelParams,
    angular_offsets_to_kernel,
    kernel_to_angular_offsets,
    kernel_to_matrix,
    matrix_to_kernel,
)
from .similarity import (
    PositionalOffsets2,
    SimilarityParams,
    lift_similarity,
    offsets_to_params,
    params_to_offsets,
    similarity_to_matrix,
    solve_similarity_two_points,
)
from .sks import (
    HomographyParams8,
    compose_sks,
    decompose_sks,
    dlt_four_point,
    pq_offsets_closed_form,
    ransac_homography,
    sks_four_point,
)

__version__ = "0.1.0"
