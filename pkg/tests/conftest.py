"""Shared test helpers: compact label/batch builders and the worked trace."""

from __future__ import annotations

import pytest

from prosupmine.model import ElementLabel, Event, QuantifiedItem


def label(*items: str) -> ElementLabel:
    """Build an ElementLabel from 'A:2' / 'B' shorthand."""
    parsed = []
    for token in items:
        name, _, qty = token.partition(":")
        parsed.append(QuantifiedItem(name, int(qty) if qty else 1))
    return ElementLabel.of(*parsed)


def batches_of(*ticks: tuple[int, dict[str, tuple[str, ...]]]):
    """[(ts, {seq: ('A:2', 'B')})] -> [(ts, {seq: ElementLabel})]."""
    return [
        (ts, {seq: label(*items) for seq, items in batch.items()})
        for ts, batch in ticks
    ]


def events_of(batches) -> list[Event]:
    return [Event(seq, ts, element)
            for ts, batch in batches for seq, element in batch.items()]


@pytest.fixture
def trace_batches():
    """The two-tick worked example: S01 emits 2A at t1 and B at t2."""
    return batches_of(
        (1, {"S01": ("A:2",)}),
        (2, {"S01": ("B:1",)}),
    )


@pytest.fixture
def trace_text():
    return "1,S01,A:2\n2,S01,B:1\n"
