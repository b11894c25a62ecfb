"""The support-coupled progressive sequence tree.

Candidate patterns live as root-to-node paths in an M-ary tree.  Each node
carries, per sequence, the start tick of that sequence's best (latest
starting) occurrence of the path pattern.  One post-order pass per tick
prunes entries that slid out of the window, grows children from the new
arrivals, deletes dead subtrees, and emits the frequent patterns.

Three rules make the single pass sound:

* A child entry copies its parent entry's start tick, so an entry is valid
  exactly as long as the whole occurrence it witnesses fits the window.
* Entry upserts keep the later start, which maximizes candidate lifetime
  without changing distinct-sequence counts.
* Children created during a pass are never visited in that pass, so the
  items of one tick can only ever form one pattern position.

Path distinctness compares quantity-stripped skeletons: a candidate
element is skipped when its item-name set already labels a node on the
root path, even at a different quantity.  Comparing full labels instead
would let support-coupled mode discover patterns (such as an item at
quantity 1 followed by the same item at quantity 2) whose boolean
counterparts repeat a label and are undiscoverable, silently breaking the
guarantee that boolean mode never reports fewer patterns.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator, Mapping, NamedTuple

from .errors import ElementTooLarge, NonMonotonicTimestamp
from .model import (
    MODE_BOOLEAN,
    ElementLabel,
    MinerConfig,
    TimestampReport,
    dominance_collapse,
    frequency_threshold,
)

Batch = Mapping[str, ElementLabel]


class SequenceEntry(NamedTuple):
    """One sequence's stake in a node: the start tick of its occurrence."""

    seq_id: str
    start_ts: int


class TreeStats(NamedTuple):
    node_count: int
    entry_count: int
    depth: int


def window_valid(start_ts: int, now: int, poi: int) -> bool:
    """True while an occurrence starting at start_ts is still inside the
    window of the poi most recent ticks ending at now."""
    return start_ts > now - poi


def candidate_elements(element: ElementLabel, cap: int) -> list[ElementLabel]:
    """All non-empty subsets of the element's quantified items, each keeping
    the observed quantities, smallest subsets first.

    Raises ElementTooLarge when the element exceeds the cap: 2^n growth on
    an unexpectedly wide element is a data problem, not something to
    truncate quietly.
    """
    n = len(element.items)
    if n > cap:
        raise ElementTooLarge(n, cap)
    out = []
    for size in range(1, n + 1):
        for combo in combinations(element.items, size):
            out.append(ElementLabel(combo))
    return out


class PatternNode:
    """A tree node: its label, its per-sequence entries, and its children.

    The root carries no label and no entries.  Entries map seq_id to
    start_ts, which also enforces one entry per sequence per node.
    """

    __slots__ = ("label", "entries", "children")

    def __init__(self, label: ElementLabel | None = None):
        self.label = label
        self.entries: dict[str, int] = {}
        self.children: dict[ElementLabel, PatternNode] = {}

    def iter_entries(self) -> Iterator[SequenceEntry]:
        for seq_id in sorted(self.entries):
            yield SequenceEntry(seq_id, self.entries[seq_id])

    def __repr__(self) -> str:
        return f"PatternNode({self.label}, entries={self.entries}, children={len(self.children)})"


def upsert_entry(node: PatternNode, seq_id: str, start_ts: int) -> None:
    """Add or refresh a sequence's entry; when one exists the later start
    wins, regardless of arrival order within a pass."""
    prev = node.entries.get(seq_id)
    node.entries[seq_id] = start_ts if prev is None else max(prev, start_ts)


class ProgressiveTree:
    """The windowed miner.  Feed it strictly increasing ticks via
    process_timestamp; each call returns that tick's report.

    Single-writer: process_timestamp must not run concurrently with itself
    or with reads on the same instance.
    """

    def __init__(self, config: MinerConfig):
        self.root = PatternNode()
        self.config = config
        self.last_ts: int | None = None

    def process_timestamp(self, now: int, batch: Batch) -> TimestampReport:
        """Advance the tree to `now` with this tick's arrivals (seq_id ->
        merged element) and report the frequent patterns.

        Empty batches are legal pruning passes, and ticks may skip ahead by
        more than one.
        """
        if self.last_ts is not None and now <= self.last_ts:
            raise NonMonotonicTimestamp(now, self.last_ts)
        config = self.config

        if config.mode == MODE_BOOLEAN:
            batch = {seq: label.as_boolean() for seq, label in batch.items()}
        # Expand each arrival once; this also validates the element cap
        # before any tree mutation happens.
        expanded = {
            seq: candidate_elements(batch[seq], config.max_element_size)
            for seq in sorted(batch)
        }

        cutoff = now - config.poi
        self._update(self.root, expanded, cutoff, path_skeletons=frozenset())

        # Root step: every arrival's candidate subsets become depth-1
        # occurrences starting at the current tick.
        for seq, candidates in expanded.items():
            for label in candidates:
                child = self.root.children.get(label)
                if child is None:
                    child = PatternNode(label)
                    self.root.children[label] = child
                upsert_entry(child, seq, now)

        self.last_ts = now
        return self._report(now)

    def _update(
        self,
        node: PatternNode,
        expanded: dict[str, list[ElementLabel]],
        cutoff: int,
        path_skeletons: frozenset[tuple[str, ...]],
    ) -> bool:
        """Post-order update of the tree as it stood last tick.  Returns
        True when the node emptied and the parent must drop it (with its
        whole subtree)."""
        for label in sorted(node.children):
            child = node.children[label]
            if self._update(child, expanded, cutoff, path_skeletons | {label.names()}):
                del node.children[label]
        if node.label is None:
            return False

        node.entries = {seq: ts for seq, ts in node.entries.items() if ts > cutoff}
        if not node.entries:
            # No surviving occurrence: descendants copied starts no later
            # than ours, so the whole subtree is dead too.
            return True

        for seq, start in node.entries.items():
            candidates = expanded.get(seq)
            if not candidates:
                continue
            for label in candidates:
                if label.names() in path_skeletons:
                    continue
                child = node.children.get(label)
                if child is None:
                    child = PatternNode(label)
                    node.children[label] = child
                upsert_entry(child, seq, start)
        return False

    def _report(self, now: int) -> TimestampReport:
        db = set()
        for child in self.root.children.values():
            db.update(child.entries)
        db_size = len(db)
        if db_size == 0:
            return TimestampReport(ts=now, db_size=0, patterns=())

        threshold = frequency_threshold(db_size, self.config.minsup)
        frequent: list[tuple[tuple[ElementLabel, ...], int]] = []
        self._collect(self.root, (), threshold, frequent)
        return TimestampReport(
            ts=now,
            db_size=db_size,
            patterns=dominance_collapse(frequent, db_size),
        )

    def _collect(
        self,
        node: PatternNode,
        prefix: tuple[ElementLabel, ...],
        threshold: int,
        out: list[tuple[tuple[ElementLabel, ...], int]],
    ) -> None:
        for label in sorted(node.children):
            child = node.children[label]
            pattern = prefix + (label,)
            if len(child.entries) >= threshold:
                out.append((pattern, len(child.entries)))
            self._collect(child, pattern, threshold, out)

    def stats(self) -> TreeStats:
        """Exact node, entry and depth counts; the root counts as one node
        at depth zero."""
        nodes = entries = depth = 0
        stack: list[tuple[PatternNode, int]] = [(self.root, 0)]
        while stack:
            node, d = stack.pop()
            nodes += 1
            entries += len(node.entries)
            depth = max(depth, d)
            stack.extend((child, d + 1) for child in node.children.values())
        return TreeStats(nodes, entries, depth)

    def check_invariants(self, now: int | None = None) -> None:
        """Raise AssertionError on any structural violation: stale entries,
        empty non-root nodes, or a repeated element skeleton (and hence a
        repeated label) on a root path.

        Debugging and test aid; now defaults to the last processed tick.
        """
        if now is None:
            now = self.last_ts
        poi = self.config.poi

        def walk(node: PatternNode, skeletons: frozenset[tuple[str, ...]]) -> None:
            if node.label is not None:
                assert node.entries, f"empty non-root node {node.label}"
                if now is not None:
                    for seq, ts in node.entries.items():
                        assert window_valid(ts, now, poi), (
                            f"stale entry ({seq}, {ts}) at now={now}, poi={poi}")
            for label, child in node.children.items():
                assert label.names() not in skeletons, (
                    f"repeated element skeleton {label.names()} on path")
                assert child.label == label, "child label does not match its key"
                walk(child, skeletons | {label.names()})

        assert self.root.label is None and not self.root.entries
        walk(self.root, frozenset())


def tree_stats(tree: ProgressiveTree) -> TreeStats:
    return tree.stats()


def mine_stream(
    batches: list[tuple[int, Batch]],
    config: MinerConfig,
    tree: ProgressiveTree | None = None,
) -> Iterator[TimestampReport]:
    """Replay (ts, batch) pairs through a tree, yielding one report per
    tick as it is produced."""
    if tree is None:
        tree = ProgressiveTree(config)
    for ts, batch in batches:
        yield tree.process_timestamp(ts, batch)
