"""Brute-force reference miner over the raw event window.

This is the ground truth the tree is tested against: it rebuilds the
window from the full event stream at every tick and enumerates candidate
patterns exhaustively (with the sound shortcut that an infrequent pattern
cannot become frequent by growing longer).  It never touches the tree
code and will happily be exponentially slower; a candidate bound guards
against accidentally feeding it something large.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .errors import ElementTooLarge, InstanceTooLarge
from .model import (
    MODE_BOOLEAN,
    MODE_COUPLED,
    DEFAULT_MAX_ELEMENT_SIZE,
    ElementLabel,
    Event,
    TimestampReport,
    dominance_collapse,
    frequency_threshold,
)

DEFAULT_MAX_CANDIDATES = 1_000_000


@dataclass(frozen=True)
class SequenceView:
    """One sequence as the window sees it: its in-window elements in tick
    order, same-tick arrivals already merged into one element."""

    seq_id: str
    elements: tuple[tuple[int, ElementLabel], ...]

    def __post_init__(self):
        ticks = [ts for ts, _ in self.elements]
        if ticks != sorted(set(ticks)):
            raise ValueError("view elements must have strictly increasing ticks")


def window_view(events: Iterable[Event], now: int, poi: int) -> list[SequenceView]:
    """Per-sequence views of the window (now - poi, now].  Sequences with no
    in-window element get no view; future events are ignored."""
    merged: dict[str, dict[int, ElementLabel]] = {}
    for ev in events:
        if not (now - poi < ev.ts <= now):
            continue
        per_seq = merged.setdefault(ev.seq_id, {})
        prev = per_seq.get(ev.ts)
        per_seq[ev.ts] = ev.element if prev is None else prev.merge(ev.element)
    return [
        SequenceView(seq_id, tuple(sorted(merged[seq_id].items())))
        for seq_id in sorted(merged)
    ]


def supports(view: SequenceView, pattern: Iterable[ElementLabel]) -> bool:
    """True when the view embeds the pattern: strictly increasing positions
    whose elements contain each pattern element with exact quantities.

    Greedy earliest-match is complete for subsequence embedding.
    """
    pos = 0
    for wanted in pattern:
        while pos < len(view.elements) and not view.elements[pos][1].contains(wanted):
            pos += 1
        if pos == len(view.elements):
            return False
        pos += 1
    return True


def _subset_labels(element: ElementLabel, cap: int) -> list[ElementLabel]:
    if len(element.items) > cap:
        raise ElementTooLarge(len(element.items), cap)
    return [
        ElementLabel(combo)
        for size in range(1, len(element.items) + 1)
        for combo in combinations(element.items, size)
    ]


def _enumerate_frequent(
    views: list[SequenceView],
    threshold: int,
    cap: int,
    max_candidates: int,
    allow_repeats: bool,
) -> list[tuple[tuple[ElementLabel, ...], int]]:
    """Depth-first enumeration of frequent patterns over the views.

    Extending a pattern can only lose supporters, so branches below the
    threshold are abandoned; this prunes the search without excluding any
    frequent pattern.  Unless allow_repeats is set, a pattern never uses
    the same item-name set (at any quantity) for two positions, matching
    the path rule of the tree miner.
    """
    universe: set[ElementLabel] = set()
    for view in views:
        for _, element in view.elements:
            universe.update(_subset_labels(element, cap))
    labels = sorted(universe)

    frequent: list[tuple[tuple[ElementLabel, ...], int]] = []
    examined = 0

    def extend(prefix: tuple[ElementLabel, ...], alive: list[SequenceView]) -> None:
        nonlocal examined
        used = {label.names() for label in prefix}
        for label in labels:
            if not allow_repeats and label.names() in used:
                continue
            candidate = prefix + (label,)
            examined += 1
            if examined > max_candidates:
                raise InstanceTooLarge(examined, max_candidates)
            supporters = [v for v in alive if supports(v, candidate)]
            if len(supporters) >= threshold:
                frequent.append((candidate, len(supporters)))
                extend(candidate, supporters)

    extend((), views)
    return frequent


def mine_bruteforce(
    events: Iterable[Event],
    now: int,
    poi: int,
    minsup: float,
    mode: str = MODE_COUPLED,
    max_element_size: int = DEFAULT_MAX_ELEMENT_SIZE,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> TimestampReport:
    """Mine the window at `now` by exhaustive enumeration and report exactly
    what a correct miner must emit at that tick.

    Candidate patterns draw their elements from subsets of in-window
    elements, never repeat an element skeleton within a pattern, and are
    counted by distinct supporting sequences.  Raises InstanceTooLarge
    past the candidate bound.
    """
    events = list(events)
    if mode == MODE_BOOLEAN:
        events = [Event(ev.seq_id, ev.ts, ev.element.as_boolean()) for ev in events]
    views = window_view(events, now, poi)
    db_size = len(views)
    if db_size == 0:
        return TimestampReport(ts=now, db_size=0, patterns=())

    threshold = frequency_threshold(db_size, minsup)
    frequent = _enumerate_frequent(
        views, threshold, max_element_size, max_candidates, allow_repeats=False)
    return TimestampReport(
        ts=now,
        db_size=db_size,
        patterns=dominance_collapse(frequent, db_size),
    )


def repeated_element_pattern_count(
    events: Iterable[Event],
    now: int,
    poi: int,
    minsup: float,
    mode: str = MODE_COUPLED,
    max_element_size: int = DEFAULT_MAX_ELEMENT_SIZE,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> int:
    """Diagnostic: how many frequent candidate patterns repeat an element
    skeleton and are therefore invisible to the path-restricted miner.

    Counts pre-collapse label sequences, not collapsed skeletons.
    """
    events = list(events)
    if mode == MODE_BOOLEAN:
        events = [Event(ev.seq_id, ev.ts, ev.element.as_boolean()) for ev in events]
    views = window_view(events, now, poi)
    if not views:
        return 0
    threshold = frequency_threshold(len(views), minsup)
    frequent = _enumerate_frequent(
        views, threshold, max_element_size, max_candidates, allow_repeats=True)
    return sum(
        1 for elements, _ in frequent
        if len({label.names() for label in elements}) != len(elements))
