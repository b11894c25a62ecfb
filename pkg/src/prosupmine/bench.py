"""Parameter sweeps over the miner: window length and minimum support vs
pattern counts and execution time, and boolean vs support-coupled counts.

Timing uses a monotonic clock and the median of repeated replays, and
never includes parsing or generation: the stream is materialized once up
front.  Pattern and node counts come from one extra untimed replay so the
instrumentation cannot pollute the measurements.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

from .dataio import GeneratorParams, generate_stream, load_stream
from .model import MODE_BOOLEAN, MODE_COUPLED, ElementLabel, MinerConfig, TimestampReport
from .tree import ProgressiveTree

Batches = list[tuple[int, dict[str, ElementLabel]]]


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a stream source crossed with window lengths, support
    thresholds and modes, timed over `repetitions` replays per cell."""

    source: object
    poi_values: tuple[int, ...]
    minsup_values: tuple[float, ...]
    modes: tuple[str, ...] = (MODE_COUPLED,)
    repetitions: int = 3
    max_element_size: int = 12

    def __post_init__(self):
        if not self.poi_values or not self.minsup_values or not self.modes:
            raise ValueError("poi_values, minsup_values and modes must be non-empty")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")


@dataclass(frozen=True)
class SweepRow:
    poi: int
    minsup: float
    mode: str
    total_patterns: int
    mean_exec_time_ns: int
    peak_node_count: int


@dataclass
class SweepResult:
    rows: list[SweepRow]
    # (poi, minsup, mode) -> [(ts, pattern_count), ...] for invariant checks
    per_tick_counts: dict[tuple[int, float, str], list[tuple[int, int]]] = field(
        default_factory=dict)


def resolve_stream(source) -> Batches:
    if isinstance(source, GeneratorParams):
        return generate_stream(source)
    if isinstance(source, (str, Path)):
        return load_stream(source)
    return list(source)


def _replay(batches: Batches, config: MinerConfig) -> list[TimestampReport]:
    tree = ProgressiveTree(config)
    return [tree.process_timestamp(ts, batch) for ts, batch in batches]


def _timed_replay_ns(batches: Batches, config: MinerConfig) -> int:
    tree = ProgressiveTree(config)
    start = time.perf_counter_ns()
    for ts, batch in batches:
        tree.process_timestamp(ts, batch)
    return time.perf_counter_ns() - start


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Replay the stream once per (poi, minsup, mode) cell, in spec order.

    Exec time is the median over `repetitions` timed replays; counts come
    from a separate instrumented replay of the same cell.
    """
    batches = resolve_stream(spec.source)
    result = SweepResult(rows=[])
    for poi in spec.poi_values:
        for minsup in spec.minsup_values:
            for mode in spec.modes:
                config = MinerConfig(poi=poi, minsup=minsup, mode=mode,
                                     max_element_size=spec.max_element_size)
                tree = ProgressiveTree(config)
                total = 0
                peak_nodes = 0
                ticks: list[tuple[int, int]] = []
                for ts, batch in batches:
                    report = tree.process_timestamp(ts, batch)
                    total += len(report.patterns)
                    ticks.append((ts, len(report.patterns)))
                    peak_nodes = max(peak_nodes, tree.stats().node_count)
                times = [_timed_replay_ns(batches, config)
                         for _ in range(spec.repetitions)]
                result.rows.append(SweepRow(
                    poi=poi, minsup=minsup, mode=mode,
                    total_patterns=total,
                    mean_exec_time_ns=int(statistics.median(times)),
                    peak_node_count=peak_nodes,
                ))
                result.per_tick_counts[(poi, minsup, mode)] = ticks
    return result


def check_sweep_invariants(result: SweepResult) -> list[str]:
    """Violations of the two provable per-tick laws across sweep cells:

    * raising minsup never adds patterns at a tick (same poi and mode);
    * boolean mode never reports fewer patterns than support-coupled mode
      (same poi and minsup).

    Empty list means the sweep is consistent.
    """
    violations = []
    cells = result.per_tick_counts
    keys = list(cells)
    pois = sorted({k[0] for k in keys})
    minsups = sorted({k[1] for k in keys})
    modes = [k[2] for k in keys]

    for poi in pois:
        for mode in dict.fromkeys(modes):
            levels = [m for m in minsups if (poi, m, mode) in cells]
            for low, high in zip(levels, levels[1:]):
                for (ts_l, n_low), (ts_h, n_high) in zip(cells[(poi, low, mode)],
                                                         cells[(poi, high, mode)]):
                    if ts_l == ts_h and n_high > n_low:
                        violations.append(
                            f"minsup antitonicity: poi={poi} mode={mode} ts={ts_l}: "
                            f"{n_high} patterns at minsup={high} > {n_low} at minsup={low}")
    for poi in pois:
        for minsup in minsups:
            if (poi, minsup, MODE_BOOLEAN) in cells and (poi, minsup, MODE_COUPLED) in cells:
                for (ts_b, n_bool), (ts_c, n_coup) in zip(
                        cells[(poi, minsup, MODE_BOOLEAN)],
                        cells[(poi, minsup, MODE_COUPLED)]):
                    if ts_b == ts_c and n_bool < n_coup:
                        violations.append(
                            f"mode inequality: poi={poi} minsup={minsup} ts={ts_b}: "
                            f"boolean {n_bool} < coupled {n_coup}")
    return violations


@dataclass
class ModeComparison:
    # [(ts, boolean_count, coupled_count)]
    per_tick: list[tuple[int, int, int]]
    # [(ts, boolean_report, coupled_report)] where boolean < coupled
    violations: list[tuple[int, TimestampReport, TimestampReport]]


def compare_modes(source, poi: int, minsup: float,
                  max_element_size: int = 12) -> ModeComparison:
    """Run both modes over the same stream and pair the per-tick pattern
    counts; any tick where boolean undercounts coupled is recorded with
    both full reports for debugging."""
    batches = resolve_stream(source)
    bool_reports = _replay(batches, MinerConfig(
        poi=poi, minsup=minsup, mode=MODE_BOOLEAN, max_element_size=max_element_size))
    coup_reports = _replay(batches, MinerConfig(
        poi=poi, minsup=minsup, mode=MODE_COUPLED, max_element_size=max_element_size))

    per_tick = []
    violations = []
    for rb, rc in zip(bool_reports, coup_reports):
        per_tick.append((rb.ts, len(rb.patterns), len(rc.patterns)))
        if len(rb.patterns) < len(rc.patterns):
            violations.append((rb.ts, rb, rc))
    return ModeComparison(per_tick=per_tick, violations=violations)


# ---------------------------------------------------------------------------
# CSV and plot-data rendering
# ---------------------------------------------------------------------------

SWEEP_CSV_HEADER = "poi,minsup,mode,total_patterns,mean_exec_time_ns,peak_node_count"


def sweep_csv(rows: list[SweepRow]) -> str:
    lines = [SWEEP_CSV_HEADER]
    for r in rows:
        lines.append(f"{r.poi},{r.minsup!r},{r.mode},{r.total_patterns},"
                     f"{r.mean_exec_time_ns},{r.peak_node_count}")
    return "\n".join(lines) + "\n"


def poi_time_data(rows: list[SweepRow]) -> str:
    """Window length vs execution time (support-coupled cells, times
    averaged over the support levels)."""
    out = ["# poi mean_exec_time_ns"]
    pois = sorted({r.poi for r in rows})
    for poi in pois:
        times = [r.mean_exec_time_ns for r in rows
                 if r.poi == poi and r.mode == MODE_COUPLED]
        if times:
            out.append(f"{poi} {int(statistics.mean(times))}")
    return "\n".join(out) + "\n"


def poi_minsup_count_data(rows: list[SweepRow]) -> str:
    """Window length and support level vs total pattern count
    (support-coupled cells), one column per support level."""
    minsups = sorted({r.minsup for r in rows})
    out = ["# poi " + " ".join(f"patterns@minsup={m!r}" for m in minsups)]
    for poi in sorted({r.poi for r in rows}):
        cells = []
        for m in minsups:
            match = [r.total_patterns for r in rows
                     if r.poi == poi and r.minsup == m and r.mode == MODE_COUPLED]
            cells.append(str(match[0]) if match else "nan")
        out.append(f"{poi} " + " ".join(cells))
    return "\n".join(out) + "\n"


def mode_count_data(rows: list[SweepRow]) -> str:
    """Boolean vs support-coupled total pattern counts per cell."""
    out = ["# poi minsup boolean_patterns coupled_patterns"]
    seen = {}
    for r in rows:
        seen.setdefault((r.poi, r.minsup), {})[r.mode] = r.total_patterns
    for (poi, minsup), by_mode in sorted(seen.items()):
        if MODE_BOOLEAN in by_mode and MODE_COUPLED in by_mode:
            out.append(f"{poi} {minsup!r} {by_mode[MODE_BOOLEAN]} {by_mode[MODE_COUPLED]}")
    return "\n".join(out) + "\n"
