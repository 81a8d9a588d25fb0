from .coordinates import (
    ArcTypeCounts,
    DTCoordinates,
    arc_type_counts,
    boundary_values,
    check_admissible,
    is_admissible_dt,
    sum_coordinates,
)
from .pants import PantsDecomposition, build_pants_decomposition, chain_gluing, standard_decomposition, theta_gluing
