from .derive import Derivation, Tower, build_tower, derive, derive_with_log, replay, structurally_covers
from .moves import SplitMove, apply_move, fold, guide_direction, push_weights, slide, split
from .standard import (
    MODELS,
    chart_coordinates,
    chart_weights,
    is_carried,
    loop,
    random_integer,
    random_positive_weights,
    seam,
    standard_track,
    tails,
)
from .tight import EmbeddingRecord, is_tight, tie_system
from .track import (
    ComplementaryRegion,
    TrainTrack,
    check_switch_conditions,
    complementary_regions,
    covers,
    is_maximal,
    random_closed_train_path,
    trace_faces,
)
from .transverse import Crossing, Overlay, TransversePair, check_transverse, dual_pair, overlay_regions, self_overlay
