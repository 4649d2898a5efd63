"""Graph environments, postman tours and budgeted search runs."""

from .graph import (
    Edge,
    Network,
    TEdge,
    TruncatedNetwork,
    max_point_distance,
    parse_tntp,
    truncate,
)
from .run import (
    CompetitiveRatio,
    FirstVisit,
    LowerBound,
    RoundRecord,
    RunReport,
    TraversalTrace,
    Witness,
    competitive_ratio,
    cr_lower_bound,
    run_strategy,
)
from .tours import (
    EXACT_MATCHING_LIMIT,
    MatchingMode,
    Tour,
    TourStep,
    cpt_length,
    cpt_tour,
    rpt_tour,
)

__all__ = [
    "Edge",
    "Network",
    "TEdge",
    "TruncatedNetwork",
    "max_point_distance",
    "parse_tntp",
    "truncate",
    "CompetitiveRatio",
    "FirstVisit",
    "LowerBound",
    "RoundRecord",
    "RunReport",
    "TraversalTrace",
    "Witness",
    "competitive_ratio",
    "cr_lower_bound",
    "run_strategy",
    "EXACT_MATCHING_LIMIT",
    "MatchingMode",
    "Tour",
    "TourStep",
    "cpt_length",
    "cpt_tour",
    "rpt_tour",
]
