"""Parse embodied-agent action trajectories into minimal meta-action sequences."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .grammar import (  # noqa: F401
    MetaAction,
    MetaActionGrammar,
    complete,
    default_grammar,
    load_grammar,
    read_grammar,
)
from .intervals import MatchIntervalTable, build_table, build_table_bruteforce  # noqa: F401
from .pattern import Pattern, full_match, parse_pattern  # noqa: F401
from .segmenter import (  # noqa: F401
    Segmentation,
    SegmentationStats,
    corpus_stats,
    expand,
    segment,
    segment_bruteforce,
)
from .trajectory import (  # noqa: F401
    ALPHABET,
    ActionString,
    ActionTrajectory,
    LowLevelAction,
    decode_letter,
    encode_actions,
)
