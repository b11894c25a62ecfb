"""Windowed sequential pattern mining over streams of quantified itemsets.

The miner maintains a progressive sequence tree of candidate patterns
whose item quantities are part of the pattern identity, prunes candidates
that slide out of the period of interest, and reports the frequent
patterns (collapsed to one entry per quantity-stripped skeleton) at every
tick.  A brute-force reference miner, an event-file format, a seeded
stream generator and a benchmark harness round out the package.
"""

from .errors import (
    ElementTooLarge,
    InstanceTooLarge,
    MiningError,
    NonMonotonicTimestamp,
    OutOfOrderError,
    ParseError,
)
from .model import (
    MODE_BOOLEAN,
    MODE_COUPLED,
    ElementLabel,
    Event,
    MinerConfig,
    Pattern,
    QuantifiedItem,
    ReportedPattern,
    TimestampReport,
    dominance_collapse,
    frequency_threshold,
    skeleton,
)
from .oracle import SequenceView, mine_bruteforce, supports, window_view
from .tree import (
    PatternNode,
    ProgressiveTree,
    SequenceEntry,
    candidate_elements,
    mine_stream,
    tree_stats,
    upsert_entry,
    window_valid,
)

__version__ = "0.1.0"

__all__ = [
    "ElementLabel",
    "ElementTooLarge",
    "Event",
    "InstanceTooLarge",
    "MinerConfig",
    "MiningError",
    "MODE_BOOLEAN",
    "MODE_COUPLED",
    "NonMonotonicTimestamp",
    "OutOfOrderError",
    "ParseError",
    "Pattern",
    "PatternNode",
    "ProgressiveTree",
    "QuantifiedItem",
    "ReportedPattern",
    "SequenceEntry",
    "SequenceView",
    "TimestampReport",
    "candidate_elements",
    "dominance_collapse",
    "frequency_threshold",
    "mine_bruteforce",
    "mine_stream",
    "skeleton",
    "supports",
    "tree_stats",
    "upsert_entry",
    "window_valid",
    "window_view",
]
