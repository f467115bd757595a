"""Magnitude of finite subsets of l1^N and of unions of cubes around skew point sets."""

from maglab.cubes import (
    AlphaTable,
    CubeUnionSpec,
    LimitTable,
    WeightMeasure,
    alpha_limits,
    alphas,
    corner,
    corner_partition_check,
    corner_system,
    cube_union_magnitude,
    sign_vectors,
    vertex_system,
    weight_integral,
    weight_measure,
)
from maglab.experiments import conjecture_probe, continuity_probe, convergence_sweep
from maglab.metric import (
    PointSet,
    cube_point_distance,
    d1,
    hausdorff_distance,
    is_skew,
    magnitude_finite,
    product_space,
    similarity_matrix,
    skewness,
    weighting,
)
from maglab.oracles import interval_union_magnitude, two_point_closed_form, two_point_nonskew_closed_form

__version__ = "0.1.0"
