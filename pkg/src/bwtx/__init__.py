"""Space-efficient Burrows-Wheeler transforms under custom alphabet orders.

The pieces: text loading and end-marker selection, alphabet orderings
(presets or parsed lists), linear-time transform construction, windowed
matrix views, run-minimization analysis, session persistence, and an HTTP
service plus CLI on top.
"""

from .analysis import (
    OrderConstraint,
    PotentialRun,
    RunBreaker,
    Section,
    combine_constraints,
    distinguishing_pairs,
    evaluate_ordering,
    move_char,
    potential_runs,
    run_breakers,
    sections,
)
from .core import (
    RunStatistics,
    Transform,
    build_transform,
    invert,
    naive_bwt,
    rle_length,
    run_count,
)
from .errors import BwtxError, CacheInvalid
from .matrix import (
    WindowGrid,
    WindowSpec,
    cell,
    find_match,
    locate_row,
    prefix_search,
    window,
)
from .ordering import (
    PRESETS,
    AlphabetOrdering,
    ordering_from_bytes,
    parse_ordering,
    preset_ordering,
    set_chapin_tate_table,
)
from .session import Session, SessionTransform, load_session, save_session
from .text import TextBuffer, select_end_marker

__version__ = "0.1.0"

__all__ = [
    "AlphabetOrdering",
    "BwtxError",
    "CacheInvalid",
    "OrderConstraint",
    "PotentialRun",
    "PRESETS",
    "RunBreaker",
    "RunStatistics",
    "Section",
    "Session",
    "SessionTransform",
    "TextBuffer",
    "Transform",
    "WindowGrid",
    "WindowSpec",
    "build_transform",
    "cell",
    "combine_constraints",
    "distinguishing_pairs",
    "evaluate_ordering",
    "find_match",
    "invert",
    "load_session",
    "locate_row",
    "move_char",
    "naive_bwt",
    "ordering_from_bytes",
    "parse_ordering",
    "potential_runs",
    "prefix_search",
    "preset_ordering",
    "rle_length",
    "run_breakers",
    "run_count",
    "save_session",
    "sections",
    "select_end_marker",
    "set_chapin_tate_table",
    "window",
    "__version__",
]
