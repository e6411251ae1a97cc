"""Exact solver and play service for the Game of Arrows on simple graphs."""

from .engine import (
    GrundyCache,
    GrundyEngine,
    Mode,
    ParityClass,
    Player,
    ReducedState,
    canonical_key,
    mex,
    nim_sum,
    reduce_state,
)
from .errors import (
    ArrowsError,
    FormatError,
    IllegalMoveError,
    InvalidGraphError,
    InvalidParameterError,
    InvalidStateError,
    OccupiedEdgeError,
    ResourceLimitError,
)
from .graphs import (
    Graph,
    Trimming,
    disjoint_union,
    forest_isomorphic,
    inverse_trimming,
    parse_graph,
    format_graph,
    path_graph,
    ramification,
    spider_graph,
    trimming,
)
from .states import (
    Arrow,
    Decoration,
    DormantState,
    LegSpec,
    Mark,
    Spider,
    State,
    check_iso_local,
    check_iso_sufficient,
    leg_arrow,
    parse_position,
    format_position,
    spider_state,
    state_trim,
    state_untrim,
)

__version__ = "0.1.0"
