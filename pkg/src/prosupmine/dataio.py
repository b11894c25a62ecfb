"""Event file parsing, report serialization and the synthetic generator.

Event file grammar, one arrival per line (UTF-8, LF):

    ts,seq_id,item[:qty][;item[:qty]]*

`:qty` defaults to 1.  Duplicate items within a line merge to the larger
quantity, as do multiple lines for the same (sequence, tick).
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import OutOfOrderError, ParseError
from .model import (
    ElementLabel,
    Event,
    QuantifiedItem,
    TimestampReport,
)

Batch = dict[str, ElementLabel]

REPORT_FORMATS = ("text", "csv", "jsonl")
CSV_HEADER = ("ts", "pattern", "support", "support_ratio", "db_size")


def _byte_offset(line: str, index: int) -> int:
    return len(line[:index].encode("utf-8"))


def parse_event_line(line: str, lineno: int | None = None) -> Event:
    """Parse one event line; errors carry the line number and the byte
    offset of the offending token."""
    fields = line.split(",")
    if len(fields) != 3:
        raise ParseError(f"expected 'ts,seq_id,items', got {len(fields)} comma-separated "
                         f"fields", lineno, 0)
    ts_field, seq_field, items_field = fields

    if not ts_field.isdigit():
        raise ParseError(f"malformed timestamp {ts_field!r}: must be a non-negative "
                         f"integer", lineno, 0)
    ts = int(ts_field)

    seq_offset = len(ts_field) + 1
    items_offset = seq_offset + len(seq_field) + 1

    qty: dict[str, int] = {}
    cursor = items_offset
    for token in items_field.split(";"):
        parts = token.split(":")
        if len(parts) == 1:
            name, qty_text = parts[0], None
        elif len(parts) == 2:
            name, qty_text = parts
        else:
            raise ParseError(f"malformed item {token!r}: at most one ':' allowed",
                             lineno, _byte_offset(line, cursor))
        if not name:
            raise ParseError("empty item name", lineno, _byte_offset(line, cursor))
        if qty_text is None:
            q = 1
        else:
            if not qty_text.isdigit() or int(qty_text) < 1:
                raise ParseError(f"quantity for item {name!r} must be an integer >= 1, "
                                 f"got {qty_text!r}", lineno, _byte_offset(line, cursor))
            q = int(qty_text)
        try:
            QuantifiedItem(name, q)
        except ValueError as exc:
            raise ParseError(str(exc), lineno, _byte_offset(line, cursor)) from exc
        qty[name] = max(qty.get(name, 0), q)
        cursor += len(token) + 1

    element = ElementLabel.of(*((name, q) for name, q in qty.items()))
    try:
        return Event(seq_field, ts, element)
    except ValueError as exc:
        raise ParseError(str(exc), lineno, _byte_offset(line, seq_offset)) from exc


def parse_stream(text: str, strict: bool = False) -> list[tuple[int, Batch]]:
    """Parse event file text into per-tick batches: nondecreasing input
    ticks are grouped and sorted, same-(sequence, tick) arrivals merge to
    itemwise max quantity.

    With strict=True a tick decrease between lines raises OutOfOrderError
    instead of being sorted away.
    """
    by_tick: dict[int, Batch] = {}
    prev_ts: int | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        event = parse_event_line(line, lineno)
        if strict and prev_ts is not None and event.ts < prev_ts:
            raise OutOfOrderError(
                f"timestamp {event.ts} after {prev_ts} in strict mode", lineno)
        prev_ts = event.ts
        batch = by_tick.setdefault(event.ts, {})
        prev = batch.get(event.seq_id)
        batch[event.seq_id] = event.element if prev is None else prev.merge(event.element)
    return [
        (ts, dict(sorted(by_tick[ts].items())))
        for ts in sorted(by_tick)
    ]


def load_stream(path, strict: bool = False) -> list[tuple[int, Batch]]:
    with open(path, "r", encoding="utf-8", newline=None) as fh:
        return parse_stream(fh.read(), strict=strict)


def batches_to_events(batches: Iterable[tuple[int, Batch]]) -> list[Event]:
    return [
        Event(seq_id, ts, element)
        for ts, batch in batches
        for seq_id, element in batch.items()
    ]


def render_event_line(event: Event) -> str:
    items = ";".join(f"{qi.name}:{qi.qty}" for qi in event.element.items)
    return f"{event.ts},{event.seq_id},{items}"


def write_events(batches: Iterable[tuple[int, Batch]]) -> str:
    """Serialize batches back to canonical event file text (quantities
    always explicit, ticks ascending, sequences sorted within a tick)."""
    lines = []
    for ts, batch in batches:
        for seq_id in sorted(batch):
            lines.append(render_event_line(Event(seq_id, ts, batch[seq_id])))
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# Synthetic stream generation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorParams:
    """Knobs for the seeded synthetic stream: at every tick each sequence
    emits, with probability arrival_prob, an element of 1..element_size_max
    distinct items with quantities 1..qty_max."""

    n_sequences: int
    n_items: int
    n_ticks: int
    arrival_prob: float = 0.2
    element_size_max: int = 3
    qty_max: int = 3
    seed: int = 42

    def __post_init__(self):
        for name in ("n_sequences", "n_items", "n_ticks"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not 0 < self.arrival_prob <= 1:
            raise ValueError("arrival_prob must be in (0, 1]")
        if self.element_size_max < 1 or self.qty_max < 1:
            raise ValueError("element_size_max and qty_max must be >= 1")


def item_names(n: int) -> list[str]:
    """A, B, ..., Z, AA, AB, ... deterministic item alphabet."""
    names = []
    for i in range(n):
        name = ""
        k = i
        while True:
            name = chr(ord("A") + k % 26) + name
            k = k // 26 - 1
            if k < 0:
                break
        names.append(name)
    return names


def sequence_ids(n: int) -> list[str]:
    width = max(2, len(str(n)))
    return [f"S{i:0{width}d}" for i in range(1, n + 1)]


def generate_stream(params: GeneratorParams) -> list[tuple[int, Batch]]:
    """Deterministic synthetic batches (Mersenne Twister seeded with
    params.seed, fixed draw order: tick-major, then sequence).  Ticks run
    1..n_ticks; ticks where nothing arrived are omitted, matching what an
    event file can express."""
    rng = random.Random(params.seed)
    names = item_names(params.n_items)
    seqs = sequence_ids(params.n_sequences)
    size_cap = min(params.element_size_max, params.n_items)

    batches: list[tuple[int, Batch]] = []
    for ts in range(1, params.n_ticks + 1):
        batch: Batch = {}
        for seq in seqs:
            if rng.random() >= params.arrival_prob:
                continue
            size = rng.randint(1, size_cap)
            chosen = rng.sample(names, size)
            batch[seq] = ElementLabel.of(
                *(QuantifiedItem(nm, rng.randint(1, params.qty_max)) for nm in chosen))
        if batch:
            batches.append((ts, batch))
    return batches


# ---------------------------------------------------------------------------
# Report serialization
# ---------------------------------------------------------------------------

def write_report(report: TimestampReport, fmt: str = "text", header: bool = True) -> str:
    """Serialize one report.

    text:  one 't{ts} <pattern> {support}' line per pattern, nothing when
           the report is empty.
    csv:   'ts,pattern,support,support_ratio,db_size' rows (header
           controlled by `header` so reports can be streamed).
    jsonl: one JSON object per report, sorted keys.
    """
    if fmt == "text":
        return "".join(
            f"t{report.ts} {rp.render()} {rp.support}\n" for rp in report.patterns)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if header:
            writer.writerow(CSV_HEADER)
        for rp in report.patterns:
            writer.writerow([report.ts, rp.render(), rp.support,
                             repr(rp.support_ratio), report.db_size])
        return buf.getvalue()
    if fmt == "jsonl":
        payload = {
            "ts": report.ts,
            "db_size": report.db_size,
            "patterns": [
                {"pattern": rp.render(), "support": rp.support,
                 "support_ratio": rp.support_ratio}
                for rp in report.patterns
            ],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    raise ValueError(f"unknown report format {fmt!r}; expected one of {REPORT_FORMATS}")


def parse_pattern_text(text: str) -> tuple[ElementLabel, ...]:
    """Inverse of render_pattern on its own output."""
    if not (text.startswith("<") and text.endswith(">")):
        raise ValueError(f"pattern text must look like '<(A:2)(B:1)>', got {text!r}")
    body = text[1:-1]
    if not (body.startswith("(") and body.endswith(")")):
        raise ValueError(f"pattern text has no elements: {text!r}")
    labels = []
    for chunk in body[1:-1].split(")("):
        items = []
        for token in chunk.split(","):
            name, _, qty = token.partition(":")
            items.append(QuantifiedItem(name, int(qty)))
        labels.append(ElementLabel.of(*items))
    return tuple(labels)
