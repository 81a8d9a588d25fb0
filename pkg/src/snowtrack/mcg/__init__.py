from .action import (
    TwistWord,
    apply_word,
    check_pair,
    frame_curves,
    image_of_frame,
    intersection_with_frame,
    inverse_word,
    pair_frames,
    twist,
    validate_word,
    word_from_json,
    word_to_json,
)
from .curves import construct, readback
from .generators import GENERATOR_SET_VERSION, generator_ids, generator_set
