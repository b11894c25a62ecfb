import random

import pytest

from prosupmine.errors import InstanceTooLarge
from prosupmine.model import MODE_BOOLEAN, Event, TimestampReport
from prosupmine.oracle import (
    SequenceView,
    mine_bruteforce,
    repeated_element_pattern_count,
    supports,
    window_view,
)

from conftest import events_of, label


@pytest.fixture
def trace_events():
    return [Event("S01", 1, label("A:2")), Event("S01", 2, label("B:1"))]


class TestWindowView:
    def test_keeps_in_window_elements(self, trace_events):
        (view,) = window_view(trace_events, now=2, poi=3)
        assert view.seq_id == "S01"
        assert view.elements == ((1, label("A:2")), (2, label("B:1")))

    def test_sequence_disappears_when_all_elements_obsolete(self, trace_events):
        assert window_view(trace_events, now=4, poi=2) == []

    def test_window_boundary(self, trace_events):
        (view,) = window_view(trace_events, now=2, poi=1)
        assert view.elements == ((2, label("B:1")),)

    def test_future_events_are_ignored(self, trace_events):
        (view,) = window_view(trace_events, now=1, poi=3)
        assert view.elements == ((1, label("A:2")),)

    def test_same_tick_arrivals_merge(self):
        events = [Event("S", 1, label("A:1")), Event("S", 1, label("B:2", "A:3"))]
        (view,) = window_view(events, now=1, poi=2)
        assert view.elements == ((1, label("A:3", "B:2")),)

    def test_views_sorted_by_sequence(self):
        events = [Event("S2", 1, label("A")), Event("S1", 1, label("B"))]
        assert [v.seq_id for v in window_view(events, now=1, poi=1)] == ["S1", "S2"]

    def test_view_rejects_unordered_elements(self):
        with pytest.raises(ValueError):
            SequenceView("S", ((2, label("A")), (1, label("B"))))


class TestSupports:
    def test_direct_embedding(self):
        view = SequenceView("S01", ((1, label("A:2")), (2, label("B:1"))))
        assert supports(view, (label("A:2"), label("B:1")))

    def test_exact_quantity_required(self):
        view = SequenceView("S01", ((1, label("A:2")), (2, label("B:1"))))
        assert not supports(view, (label("A:1"),))

    def test_order_must_be_respected(self):
        view = SequenceView("S01", ((1, label("A:2")), (2, label("B:1"))))
        assert not supports(view, (label("B:1"), label("A:2")))

    def test_subset_matching_within_element(self):
        view = SequenceView("S", ((1, label("A:1", "B:2", "C:1")),))
        assert supports(view, (label("A:1", "C:1"),))
        assert not supports(view, (label("A:1", "C:2"),))

    def test_positions_strictly_increase(self):
        view = SequenceView("S", ((1, label("A:1", "B:1")),))
        # both pattern elements would need the same position
        assert not supports(view, (label("A:1"), label("B:1")))
        view2 = SequenceView("S", ((1, label("A:1", "B:1")), (2, label("B:1"))))
        assert supports(view2, (label("A:1"), label("B:1")))


class TestMineBruteforce:
    def test_worked_trace(self, trace_events):
        report = mine_bruteforce(trace_events, now=2, poi=3, minsup=0.5)
        assert report.db_size == 1
        assert [(rp.render(), rp.support) for rp in report.patterns] == [
            ("<(A:2)>", 1), ("<(B:1)>", 1), ("<(A:2)(B:1)>", 1)]

    def test_two_sequences_full_support(self):
        events = [Event(s, t, e) for s in ("S1", "S2")
                  for t, e in ((1, label("A:1")), (2, label("B:1")))]
        report = mine_bruteforce(events, now=2, poi=2, minsup=1.0)
        assert report.db_size == 2
        assert [(rp.render(), rp.support) for rp in report.patterns] == [
            ("<(A:1)>", 2), ("<(B:1)>", 2), ("<(A:1)(B:1)>", 2)]

    def test_empty_window_reports_nothing(self):
        events = [Event("S", 1, label("A"))]
        report = mine_bruteforce(events, now=9, poi=2, minsup=0.5)
        assert report == TimestampReport(ts=9, db_size=0, patterns=())

    def test_boolean_mode_coerces(self, trace_events):
        report = mine_bruteforce(trace_events, now=2, poi=3, minsup=0.5,
                                 mode=MODE_BOOLEAN)
        assert [rp.render() for rp in report.patterns] == [
            "<(A:1)>", "<(B:1)>", "<(A:1)(B:1)>"]

    def test_threshold_excludes_minority_patterns(self):
        events = [
            Event("S1", 1, label("A:1")), Event("S2", 1, label("A:1")),
            Event("S1", 2, label("B:1")),
        ]
        report = mine_bruteforce(events, now=2, poi=2, minsup=1.0)
        assert [rp.render() for rp in report.patterns] == ["<(A:1)>"]

    def test_invariant_under_arrival_permutation(self):
        rng = random.Random(3)
        events = [
            Event("S1", 1, label("A:1", "B:2")), Event("S2", 1, label("B:2")),
            Event("S1", 2, label("C:1")), Event("S2", 2, label("A:1")),
            Event("S1", 3, label("B:2")),
        ]
        base = mine_bruteforce(events, now=3, poi=3, minsup=0.5)
        for _ in range(5):
            shuffled = events[:]
            rng.shuffle(shuffled)
            assert mine_bruteforce(shuffled, now=3, poi=3, minsup=0.5) == base

    def test_candidate_bound_guard(self):
        batches = [(1, {f"S{i}": label("A", "B", "C") for i in range(3)})]
        events = events_of(batches)
        with pytest.raises(InstanceTooLarge) as exc:
            mine_bruteforce(events, now=1, poi=1, minsup=0.34, max_candidates=5)
        assert exc.value.bound == 5

    def test_no_repeated_skeletons_in_output(self):
        # A arrives twice; <A><A> embeds but is not a legal pattern here
        events = [Event("S", 1, label("A")), Event("S", 2, label("A"))]
        report = mine_bruteforce(events, now=2, poi=3, minsup=1.0)
        assert [rp.render() for rp in report.patterns] == ["<(A:1)>"]

    def test_quantity_variants_of_one_item_set_never_chain(self):
        # (A:1) then (A:2) share the skeleton {A}; the two-position pattern
        # is excluded even though the labels differ.
        events = [Event("S", 1, label("A:1")), Event("S", 2, label("A:2"))]
        report = mine_bruteforce(events, now=2, poi=3, minsup=1.0)
        assert [rp.render() for rp in report.patterns] == ["<(A:2)>"]


class TestRepeatedElementDiagnostic:
    def test_counts_missed_repeat_patterns(self):
        events = [Event("S", 1, label("A")), Event("S", 2, label("A"))]
        assert repeated_element_pattern_count(events, now=2, poi=3, minsup=1.0) == 1

    def test_counts_quantity_variant_repeats(self):
        events = [Event("S", 1, label("A:1")), Event("S", 2, label("A:2"))]
        assert repeated_element_pattern_count(events, now=2, poi=3, minsup=1.0) == 1

    def test_zero_when_no_repeats_embed(self):
        events = [Event("S", 1, label("A")), Event("S", 2, label("B"))]
        assert repeated_element_pattern_count(events, now=2, poi=3, minsup=1.0) == 0

    def test_zero_on_empty_window(self):
        assert repeated_element_pattern_count([], now=1, poi=1, minsup=0.5) == 0
