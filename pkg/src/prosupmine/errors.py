"""Exception types shared across the miner, parser, oracle and CLI."""

from __future__ import annotations


class MiningError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(MiningError):
    """Malformed event line. Carries the 1-based line number and the byte
    offset of the offending token within that line."""

    def __init__(self, message: str, lineno: int | None = None, offset: int | None = None):
        self.lineno = lineno
        self.offset = offset
        where = ""
        if lineno is not None:
            where = f" (line {lineno}" + (f", byte {offset}" if offset is not None else "") + ")"
        super().__init__(message + where)


class OutOfOrderError(MiningError):
    """Timestamps decreased between lines while strict ordering was requested."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"{message} (line {lineno})"
        super().__init__(message)


class ElementTooLarge(MiningError):
    """An element carries more items than the configured cap allows.

    Raised instead of truncating: oversized elements signal a configuration
    or ingestion problem, and silently dropping items would corrupt counts.
    """

    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"element has {size} items, exceeds cap of {cap}")


class NonMonotonicTimestamp(MiningError):
    """process_timestamp was called with a tick not after the last one."""

    def __init__(self, now: int, last: int):
        self.now = now
        self.last = last
        super().__init__(f"timestamp {now} is not after last processed timestamp {last}")


class InstanceTooLarge(MiningError):
    """The brute-force enumeration exceeded its configured candidate bound."""

    def __init__(self, examined: int, bound: int):
        self.examined = examined
        self.bound = bound
        super().__init__(f"enumeration examined more than {bound} candidate patterns; "
                         f"instance too large for the brute-force miner")
