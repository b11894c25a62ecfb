"""Core domain types for windowed sequential pattern mining.

The stream unit is an Event: one sequence emits one element (a set of
quantified items) at one integer tick.  Patterns are ordered lists of
element labels; a label matches an occurrence only when every item
quantity is exactly equal (quantity 3 of an item does not stand in for
quantity 2).  Boolean mode recovers the classical unquantified problem
by coercing every quantity to 1 at ingestion.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

# Separators reserved by the event-file grammar and the report renderers.
RESERVED_CHARS = ",;:|"

MODE_COUPLED = "coupled"
MODE_BOOLEAN = "boolean"
MODES = (MODE_COUPLED, MODE_BOOLEAN)

DEFAULT_MAX_ELEMENT_SIZE = 12

_TOKEN_RE = re.compile(r"[^\s,;:|]+\Z")


def validate_token(value: str, what: str) -> str:
    """Check that a name is a usable token: non-empty, no whitespace, none
    of the reserved separators ',;:|'."""
    if not isinstance(value, str) or not _TOKEN_RE.match(value):
        raise ValueError(f"{what} {value!r} must be a non-empty token without "
                         f"whitespace or any of '{RESERVED_CHARS}'")
    return value


@dataclass(frozen=True, order=True)
class QuantifiedItem:
    """An item name with its per-occurrence count (quantity 2 of item A is
    written '2A' in input shorthand and 'A:2' in the file grammar)."""

    name: str
    qty: int = 1

    def __post_init__(self):
        validate_token(self.name, "item name")
        if not isinstance(self.qty, int) or self.qty < 1:
            raise ValueError(f"quantity for item {self.name!r} must be an integer >= 1, "
                             f"got {self.qty!r}")

    def __str__(self) -> str:
        return f"{self.name}:{self.qty}"


@dataclass(frozen=True, order=True)
class ElementLabel:
    """A canonical non-empty set of quantified items: the things one sequence
    emitted together at one tick, and the label of one pattern position.

    Items are kept sorted by name; equality and ordering include quantities.
    """

    items: tuple[QuantifiedItem, ...]

    def __post_init__(self):
        if not self.items:
            raise ValueError("element label must contain at least one item")
        names = [qi.name for qi in self.items]
        if names != sorted(names) or len(set(names)) != len(names):
            raise ValueError("element label items must be unique and sorted by name; "
                             "use ElementLabel.of() to canonicalize")

    @classmethod
    def of(cls, *items: QuantifiedItem | tuple[str, int] | str) -> "ElementLabel":
        """Build a label from items, (name, qty) pairs, or bare names (qty 1).

        Duplicate item names are rejected; merging policy belongs to the
        ingestion layer, not the model.
        """
        norm = []
        for it in items:
            if isinstance(it, QuantifiedItem):
                norm.append(it)
            elif isinstance(it, str):
                norm.append(QuantifiedItem(it, 1))
            else:
                name, qty = it
                norm.append(QuantifiedItem(name, qty))
        names = [qi.name for qi in norm]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate item names in element: {sorted(names)}")
        return cls(tuple(sorted(norm)))

    def merge(self, other: "ElementLabel") -> "ElementLabel":
        """Union of the two item sets, keeping the larger quantity per name."""
        qty: dict[str, int] = {qi.name: qi.qty for qi in self.items}
        for qi in other.items:
            qty[qi.name] = max(qty.get(qi.name, 0), qi.qty)
        return ElementLabel(tuple(QuantifiedItem(n, q) for n, q in sorted(qty.items())))

    def as_boolean(self) -> "ElementLabel":
        """The same item set with every quantity coerced to 1."""
        return ElementLabel(tuple(QuantifiedItem(qi.name, 1) for qi in self.items))

    def names(self) -> tuple[str, ...]:
        return tuple(qi.name for qi in self.items)

    def qty_of(self, name: str) -> int | None:
        for qi in self.items:
            if qi.name == name:
                return qi.qty
        return None

    def contains(self, other: "ElementLabel") -> bool:
        """True when every item of `other` appears here with exactly the
        same quantity (exact-match semantics)."""
        return all(self.qty_of(qi.name) == qi.qty for qi in other.items)

    def __len__(self) -> int:
        return len(self.items)

    def __str__(self) -> str:
        return "(" + ",".join(str(qi) for qi in self.items) + ")"


@dataclass(frozen=True)
class Event:
    """One arrival: sequence `seq_id` emitted `element` at tick `ts`."""

    seq_id: str
    ts: int
    element: ElementLabel

    def __post_init__(self):
        validate_token(self.seq_id, "sequence id")
        if not isinstance(self.ts, int) or self.ts < 0:
            raise ValueError(f"timestamp must be a non-negative integer, got {self.ts!r}")


@dataclass(frozen=True)
class Pattern:
    """An ordered, non-empty list of element labels with no label repeated.

    The no-repeat restriction mirrors the tree's path rule: candidate paths
    never reuse a label, so patterns with two equal elements are never
    discovered and are not representable here.
    """

    elements: tuple[ElementLabel, ...]

    def __post_init__(self):
        if not self.elements:
            raise ValueError("pattern must contain at least one element")
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("pattern elements must have pairwise distinct labels")

    def __len__(self) -> int:
        return len(self.elements)

    def __str__(self) -> str:
        return render_pattern(self.elements)


Skeleton = tuple[tuple[str, ...], ...]


def skeleton(p: Pattern | Iterable[ElementLabel]) -> Skeleton:
    """Strip quantities: the ordered item-name sets of a pattern's elements."""
    elements = p.elements if isinstance(p, Pattern) else tuple(p)
    return tuple(label.names() for label in elements)


def render_pattern(elements: Iterable[ElementLabel]) -> str:
    """Render elements as '<(A:2)(B:1)>': elements in pattern order, items
    within an element in canonical name order."""
    return "<" + "".join(str(label) for label in elements) + ">"


def frequency_threshold(db_size: int, minsup: float) -> int:
    """Minimum distinct-sequence count for a pattern to be frequent:
    ceil(minsup * db_size).

    Computed over exact rationals so float noise can never shift the
    boundary; a pattern is frequent iff its count >= this value and the
    window holds at least one sequence.
    """
    if db_size < 0:
        raise ValueError("db_size must be >= 0")
    if not 0 < minsup <= 1:
        raise ValueError("minsup must be in (0, 1]")
    return math.ceil(Fraction(minsup) * db_size)


@dataclass(frozen=True)
class MinerConfig:
    """Window length, frequency threshold ratio, quantity mode and the
    per-element structural cap."""

    poi: int
    minsup: float
    mode: str = MODE_COUPLED
    max_element_size: int = DEFAULT_MAX_ELEMENT_SIZE

    def __post_init__(self):
        if not isinstance(self.poi, int) or self.poi < 1:
            raise ValueError(f"poi must be an integer >= 1, got {self.poi!r}")
        if not 0 < self.minsup <= 1:
            raise ValueError("minsup must be in (0, 1]")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not isinstance(self.max_element_size, int) or self.max_element_size < 1:
            raise ValueError("max_element_size must be an integer >= 1")


@dataclass(frozen=True)
class ReportedPattern:
    """A frequent pattern after the dominance collapse: one entry per
    skeleton, carrying the per-position maximum quantities observed among
    its frequent quantity variants.

    Unlike Pattern, positions here may repeat a label: maxing quantities
    across variants can make two originally distinct positions equal.
    """

    elements: tuple[ElementLabel, ...]
    support: int
    support_ratio: float

    @property
    def skeleton(self) -> Skeleton:
        return skeleton(self.elements)

    @property
    def quantities(self) -> tuple[dict[str, int], ...]:
        """Per position, the item -> quantity map (keys equal the skeleton)."""
        return tuple({qi.name: qi.qty for qi in label.items} for label in self.elements)

    def render(self) -> str:
        return render_pattern(self.elements)

    def __str__(self) -> str:
        return f"{self.render()} support={self.support}"


@dataclass(frozen=True)
class TimestampReport:
    """Everything emitted for one tick: the window population |DB| and the
    frequent collapsed patterns, in canonical order."""

    ts: int
    db_size: int
    patterns: tuple[ReportedPattern, ...] = ()

    def __post_init__(self):
        if self.db_size == 0 and self.patterns:
            raise ValueError("an empty window cannot report patterns")


def _canonical_key(elements: tuple[ElementLabel, ...]):
    # Length, then skeleton, then quantities break any remaining tie.
    return (len(elements), skeleton(elements), elements)


def dominance_collapse(
    frequent: Iterable[tuple[tuple[ElementLabel, ...], int]],
    db_size: int,
) -> tuple[ReportedPattern, ...]:
    """Collapse frequent quantity variants of the same skeleton into one
    reported pattern.

    Groups the [(elements, support)] input by skeleton; each group reports
    the per-(position, item) maximum quantity and the maximum support among
    its members.  Output is in canonical report order.
    """
    groups: dict[Skeleton, list[tuple[tuple[ElementLabel, ...], int]]] = {}
    for elements, support in frequent:
        groups.setdefault(skeleton(elements), []).append((tuple(elements), support))

    collapsed = []
    for variants in groups.values():
        width = len(variants[0][0])
        merged = []
        for k in range(width):
            label = variants[0][0][k]
            for elements, _ in variants[1:]:
                label = label.merge(elements[k])
            merged.append(label)
        support = max(s for _, s in variants)
        collapsed.append(ReportedPattern(
            elements=tuple(merged),
            support=support,
            support_ratio=support / db_size,
        ))
    collapsed.sort(key=lambda rp: _canonical_key(rp.elements))
    return tuple(collapsed)
