from .calm import (
    common_twists,
    construct_calm_cds,
    gregarious_guide,
    place_system,
    random_word,
    retwist,
    search_calm_cds,
    stream,
    zip_cusps,
)
from .certificates import (
    DistanceCertificate,
    cert_cc_distance_lb,
    cert_heegaard_distance_lb,
    disjointness_upper_bound,
    gnp_membership,
    overlay_pair,
    replay_certificate,
)
from .shapes import (
    CarriedSystem,
    Connector,
    PantsShape,
    classify_pants_shapes,
    is_calm,
    shapes_from_connectors,
    trace_connectors,
)
