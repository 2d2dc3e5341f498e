import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from formations.matcher import TeamObservation, match
from formations.segmentation import (
    ATTACKING, DEFENDING, FrameRecord, Policy, SegmentationError, mean_position, parse_policy,
    resolve_substitutions, segment,
)
from oracles import exact_mean


def rec(x, y, frame=0, player="a", team="h", t=0.0, period=1, poss="h"):
    return FrameRecord(period, frame, t, team, player, x, y, poss)


def make_match(n_frames, dt, possession, period=1, players=10, rng=None, teams=("h", "v")):
    """Records for two teams; ``possession(k)`` gives the owner of frame k."""
    rng = rng or np.random.default_rng(0)
    out = []
    for k in range(n_frames):
        for team in teams:
            for p in range(players):
                x, y = rng.normal(0, 10, 2)
                out.append(FrameRecord(period, k, k * dt, team, f"{team}{p}", float(x), float(y), possession(k)))
    return out


class TestMean:
    def test_single_frame(self):
        assert mean_position([rec(3, 7)]) == (3, 7)

    def test_midpoint(self):
        assert mean_position([rec(0, 0), rec(10, 4)]) == (5, 2)

    def test_empty(self):
        with pytest.raises(SegmentationError):
            mean_position([])

    def test_against_streaming_sum(self, rng):
        xy = rng.uniform(-52.5, 52.5, (1000, 2))
        m = mean_position([rec(x, y) for x, y in xy])
        ox, oy = exact_mean(xy)
        assert abs(m[0] - ox) < 1e-12 and abs(m[1] - oy) < 1e-12


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.tuples(st.floats(-60, 60), st.floats(-40, 40)), min_size=1, max_size=40),
    st.lists(st.tuples(st.floats(-60, 60), st.floats(-40, 40)), min_size=1, max_size=40),
)
def test_mean_of_concatenation_is_weighted_mean(a, b):
    ma = mean_position([rec(x, y) for x, y in a])
    mb = mean_position([rec(x, y) for x, y in b])
    m = mean_position([rec(x, y) for x, y in a + b])
    na, nb = len(a), len(b)
    for k in range(2):
        assert m[k] == pytest.approx((na * ma[k] + nb * mb[k]) / (na + nb), abs=1e-9)


@pytest.mark.parametrize(
    "text,expected",
    [("frame", Policy("frame")), ("possession", Policy("possession")), ("period", Policy("period")),
     ("10s", Policy("duration", 10.0)), ("5m", Policy("duration", 300.0)), (30, Policy("duration", 30.0))],
)
def test_parse_policy(text, expected):
    assert parse_policy(text) == expected


@pytest.mark.parametrize("bad", ["5h", "m", "0s", "-5s", "1.5m", "", "minute"])
def test_parse_policy_rejects(bad):
    with pytest.raises(SegmentationError):
        parse_policy(bad)


def test_frame_policy_is_raw_positions():
    recs = make_match(5, 0.1, lambda k: "h")
    segs = segment(recs, "frame", split_phase=False)
    assert len(segs) == 10
    by_key = {(r.frame_id, r.team_id, r.player_id): (r.x, r.y) for r in recs}
    for s in segs:
        assert s.frame_count == 1 and s.start_frame == s.end_frame
        for pid, xy in s.mean_positions.items():
            assert xy == by_key[(s.start_frame, s.team_id, pid)]


def test_five_minute_windows_in_45_minutes():
    # possession swaps every 30 s so both phases occur in every window
    recs = make_match(540, 5.0, lambda k: "h" if (k * 5 // 30) % 2 == 0 else "v", players=2)
    segs = segment(recs, "5m", split_phase=True)
    counts = {}
    for s in segs:
        counts[(s.team_id, s.phase)] = counts.get((s.team_id, s.phase), 0) + 1
    assert counts == {(t, p): 9 for t in "hv" for p in (ATTACKING, DEFENDING)}


def test_duration_windows_do_not_cross_periods():
    a = make_match(60, 1.0, lambda k: "h", period=1, players=1)
    b = make_match(60, 1.0, lambda k: "h", period=2, players=1)
    b = [FrameRecord(r.period, r.frame_id + 100, r.timestamp, r.team_id, r.player_id, r.x, r.y, r.possession_team_id) for r in b]
    segs = segment(a + b, "40s", split_phase=False)
    # 0-39, 40-59 in each period, per team
    assert [(s.period, s.frame_count) for s in segs if s.team_id == "h"] == [(1, 40), (1, 20), (2, 40), (2, 20)]


def test_possession_boundaries_at_scripted_flips():
    flips = [0, 7, 19, 20, 33]
    owner = {}
    current = "h"
    for k in range(40):
        if k in flips[1:]:
            current = "v" if current == "h" else "h"
        owner[k] = current
    recs = make_match(40, 0.1, owner.__getitem__, players=1)
    segs = [s for s in segment(recs, "possession", split_phase=False) if s.team_id == "h"]
    assert [s.start_frame for s in segs] == flips
    assert [s.end_frame for s in segs] == [6, 18, 19, 32, 39]


def test_possession_policy_needs_possession():
    recs = make_match(5, 0.1, lambda k: None)
    with pytest.raises(SegmentationError):
        segment(recs, "possession", split_phase=False)
    with pytest.raises(SegmentationError):
        segment(recs, "period", split_phase=True)


@pytest.mark.parametrize("policy", ["frame", "possession", "period", "3s"])
def test_partition(policy):
    rng = np.random.default_rng(4)
    owner = rng.choice(["h", "v", None], size=80, p=[0.45, 0.45, 0.1])
    recs = make_match(80, 0.5, lambda k: owner[k], players=1)
    attributed = [k for k in range(80) if owner[k] is not None]
    phase_of = {None: None, "h": {"h": ATTACKING, "v": DEFENDING}, "v": {"h": DEFENDING, "v": ATTACKING}}
    for team in "hv":
        # every attributed frame is counted once, under the right phase
        for p in (ATTACKING, DEFENDING):
            want = sum(1 for k in range(80) if owner[k] is not None and phase_of[owner[k]][team] == p)
            got = sum(s.frame_count for s in segment(recs, policy, split_phase=True) if s.team_id == team and s.phase == p)
            assert got == want
        segs = [s for s in segment(recs, policy, split_phase=True) if s.team_id == team]
        assert sum(s.frame_count for s in segs) == len(attributed)
        unsplit = [s for s in segment(recs, policy, split_phase=False) if s.team_id == team]
        assert sum(s.frame_count for s in unsplit) == 80


class TestSubstitutions:
    def test_rare_player_dropped(self):
        counts = {str(i): 100 for i in range(10)}
        counts["sub"] = 3
        assert resolve_substitutions(counts, 10) == {str(i) for i in range(10)}

    def test_exactly_ten(self):
        counts = {str(i): 50 + i for i in range(10)}
        assert resolve_substitutions(counts, 10) == set(counts)

    def test_twelve_players(self):
        counts = {f"p{i}": 900 for i in range(9)}
        counts.update({"a": 450, "b": 430, "c": 20})
        kept = resolve_substitutions(counts, 10)
        assert kept == set(counts) - {"b", "c"}

    def test_tie_goes_to_lower_id(self):
        counts = {"7": 10, "3": 10, "12": 10}
        assert resolve_substitutions(counts, 2) == {"3", "7"}

    def test_fewer_than_limit(self):
        assert resolve_substitutions({"a": 1, "b": 2}, 10) == {"a", "b"}

    def test_unknown_mode(self):
        with pytest.raises(SegmentationError):
            resolve_substitutions({"a": 1}, 10, mode="keep")

    def test_segment_drops_and_flags(self):
        recs = make_match(20, 1.0, lambda k: "h", players=10)
        recs += [rec(0.0, 0.0, frame=k, player="late", team="h", t=float(k)) for k in range(18, 20)]
        s = [s for s in segment(recs, "period", split_phase=True) if s.team_id == "h"][0]
        assert "late" not in s.mean_positions and s.dropped == ("late",)
        assert len(s.mean_positions) == 10 and not s.undermanned
        few = [r for r in recs if r.player_id not in ("h0", "late")]
        s = [s for s in segment(few, "period") if s.team_id == "h"][0]
        assert s.undermanned and len(s.mean_positions) == 9


def test_frame_policy_matching_equals_direct_matching(registry):
    recs = make_match(6, 0.1, lambda k: "h", rng=np.random.default_rng(9))
    for s in segment(recs, "frame", split_phase=True):
        raw = {r.player_id: (r.x, r.y) for r in recs if r.frame_id == s.start_frame and r.team_id == s.team_id}
        a = match(TeamObservation.from_mapping(s.mean_positions), registry)
        b = match(TeamObservation.from_mapping(raw), registry)
        assert a == b
