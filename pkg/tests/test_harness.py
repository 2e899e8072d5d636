"""Trial generation, dwell selection rules, and metrics."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from hovernav.geometry import (DEFAULT_DISPLAY, LARGE_MAP, SMALL_MAP,
                               min_scale)
from hovernav.harness import (CLASS_FRACTIONS, EVENT_FINISHED,
                              EVENT_FIRST_MISS, EVENT_SELECTED,
                              EVENT_WRONG_TARGET, MetricsReport, PlanError,
                              Session, TargetSpec, TrialPlan, compute_metrics,
                              generate_trial_plan)
from hovernav.logs import LogHeader, SessionLog, TickRecord
from hovernav.geometry import MapConfig, ViewportState
from hovernav.harness import SessionEvent
from hovernav.techniques import InputSample, Touch, make_technique


class TestTrialPlan:
    def test_study_class_distances(self):
        # 0.125/0.25/0.5 of the diagonal: 0.2007/0.4015/0.8029 m (small map),
        # 20.05/40.09/80.18 m (large map)
        for map_cfg, paper_values in (
                (SMALL_MAP, {"small": 0.2, "medium": 0.4, "large": 0.8}),
                (LARGE_MAP, {"small": 20.0, "medium": 40.0, "large": 80.0})):
            diag = math.hypot(map_cfg.width, map_cfg.height)
            plan = generate_trial_plan(map_cfg, seed=3)
            for cls, paper in paper_values.items():
                d = plan.class_distance(cls)
                assert d == pytest.approx(CLASS_FRACTIONS[cls] * diag, rel=1e-14)
                assert abs(d - paper) / paper < 0.005
        small = generate_trial_plan(SMALL_MAP, seed=3)
        assert small.class_distance("small") == pytest.approx(0.2007, abs=5e-4)
        large = generate_trial_plan(LARGE_MAP, seed=3)
        assert large.class_distance("small") == pytest.approx(20.05, abs=5e-2)

    @given(seed=st.integers(0, 10**9),
           map_cfg=st.sampled_from([SMALL_MAP, LARGE_MAP]))
    @settings(max_examples=150, deadline=None)
    def test_plan_composition(self, seed, map_cfg):
        plan = generate_trial_plan(map_cfg, seed)
        assert len(plan.targets) == 15
        counts = {"small": 0, "medium": 0, "large": 0}
        prev = (0.0, 0.0)
        lim_x = map_cfg.width / 2 - 0.005
        lim_y = map_cfg.height / 2 - 0.005
        for i, t in enumerate(plan.targets):
            assert t.index == i
            counts[t.distance_class] += 1
            d = math.dist(prev, t.position)
            assert abs(d - plan.class_distance(t.distance_class)) < 1e-6
            assert -lim_x <= t.position[0] <= lim_x
            assert -lim_y <= t.position[1] <= lim_y
            prev = t.position
        assert counts == {"small": 5, "medium": 5, "large": 5}

    def test_same_seed_same_plan(self):
        a = generate_trial_plan(LARGE_MAP, 1234)
        b = generate_trial_plan(LARGE_MAP, 1234)
        assert a == b
        c = generate_trial_plan(LARGE_MAP, 1235)
        assert c != a

    def test_tiny_map_rejected(self):
        with pytest.raises(PlanError):
            generate_trial_plan(MapConfig(0.009, 0.009, "tiny"), 0)


def near_plan(*positions, map_cfg=SMALL_MAP):
    """Hand-built plan with targets at chosen map positions."""
    targets = tuple(TargetSpec(p, "small", i) for i, p in enumerate(positions))
    return TrialPlan(map=map_cfg, seed=0, targets=targets, technique="rate3d")


def make_session(plan, technique_kind="rate3d"):
    tech = make_technique(technique_kind, plan.map, DEFAULT_DISPLAY)
    return Session(plan, tech, tick_rate=60.0, dwell_s=1.0)


def touch_at(x, y):
    return InputSample(x, y, 0.0, touches=(Touch(0, x, y),))


class TestSessionRules:
    def test_dwell_selects_after_one_second(self):
        session = make_session(near_plan((0.01, 0.0), (0.03, 0.0)))
        tx, ty = session.target_screen(0)
        events = []
        ticks_to_selection = None
        for i in range(100):
            evs = session.advance(touch_at(tx, ty))
            events.extend(evs)
            if any(e.kind == EVENT_SELECTED for e in evs):
                ticks_to_selection = i + 1
                break
        # 1.0 s at 60 Hz, exact to one tick
        assert ticks_to_selection is not None
        assert abs(ticks_to_selection - 60) <= 1
        assert session.active_index == 1
        assert session.first_miss_count == 0

    def test_dwell_resets_when_leaving_radius(self):
        session = make_session(near_plan((0.01, 0.0), (0.03, 0.0)))
        tx, ty = session.target_screen(0)
        for _ in range(40):
            session.advance(touch_at(tx, ty))
        assert session.dwell_ticks == 40
        session.advance(touch_at(tx + 0.006, ty))  # leave the circle
        assert session.dwell_ticks == 0
        for _ in range(59):
            evs = session.advance(touch_at(tx, ty))
        assert not any(e.kind == EVENT_SELECTED for e in evs)
        evs = session.advance(touch_at(tx, ty))
        assert any(e.kind == EVENT_SELECTED for e in evs)

    def test_dwell_resets_on_lift(self):
        session = make_session(near_plan((0.01, 0.0), (0.03, 0.0)))
        tx, ty = session.target_screen(0)
        for _ in range(59):
            session.advance(touch_at(tx, ty))
        session.advance(InputSample(tx, ty, 0.0))  # lift
        evs = session.advance(touch_at(tx, ty))
        assert not any(e.kind == EVENT_SELECTED for e in evs)
        assert session.dwell_ticks == 1

    def test_first_touch_miss_at_6mm(self):
        # radius is 5 mm; dwelling 1 s at 6 mm misses, once per touch-down
        session = make_session(near_plan((0.01, 0.0), (0.03, 0.0)))
        tx, ty = session.target_screen(0)
        events = []
        for _ in range(130):
            events.extend(session.advance(touch_at(tx + 0.006, ty)))
        misses = [e for e in events if e.kind == EVENT_FIRST_MISS]
        assert len(misses) == 1
        assert session.first_miss_count == 1
        assert session.active_index == 0  # still active
        # after a successful dwell the target is acquired regardless
        for _ in range(61):
            events.extend(session.advance(touch_at(tx, ty)))
        assert any(e.kind == EVENT_SELECTED for e in events)

    def test_scale_gate_blocks_selection(self):
        # position control pins the scale just below 1: no selection, no error
        plan = near_plan((0.01, 0.0), (0.03, 0.0))
        session = make_session(plan, "absolute3d")
        h_for_0999 = 0.001 * session.technique.params.h_max / (1 - session.scale_min)
        session.advance(InputSample(0.0, 0.0, h_for_0999))
        assert session.viewport.scale < 1.0 - 1e-6
        assert session.viewport.scale > 0.99
        tx, ty = session.target_screen(0)
        events = []
        for _ in range(120):
            events.extend(session.advance(
                InputSample(tx, ty, h_for_0999, touches=(Touch(0, tx, ty),))))
        assert events == []
        assert session.first_miss_count == 0

    def test_off_display_target_not_selectable(self):
        session = make_session(near_plan((0.30, 0.0), (0.03, 0.0)))
        assert not session.selectable()
        events = []
        for _ in range(120):
            events.extend(session.advance(touch_at(0.05, 0.0)))
        assert events == []

    def test_wrong_target_dwell(self):
        session = make_session(near_plan((0.03, 0.0), (-0.03, 0.0)))
        wx, wy = session.target_screen(1)  # the red inactive one
        events = []
        for _ in range(130):
            events.extend(session.advance(touch_at(wx, wy)))
        wrongs = [e for e in events if e.kind == EVENT_WRONG_TARGET]
        assert len(wrongs) == 1
        assert wrongs[0].target == 1
        assert session.wrong_target_count == 1
        assert session.active_index == 0
        # that same dwell also misses the active target, once
        assert session.first_miss_count == 1

    def test_error_counters_never_decrease(self):
        session = make_session(near_plan((0.01, 0.0), (0.03, 0.0)))
        tx, ty = session.target_screen(0)
        seen = (0, 0)
        for i in range(400):
            x = tx + (0.007 if (i // 70) % 2 == 0 else 0.0)
            session.advance(touch_at(x, ty))
            now = (session.first_miss_count, session.wrong_target_count)
            assert now >= seen
            seen = now

    def test_finished_signal_after_completion(self):
        session = make_session(near_plan((0.01, 0.0)))
        tx, ty = session.target_screen(0)
        for _ in range(61):
            session.advance(touch_at(tx, ty))
        assert session.done
        before = session.viewport
        evs = session.advance(touch_at(tx, ty))
        assert [e.kind for e in evs] == [EVENT_FINISHED]
        assert session.viewport == before
        assert session.tick == 60


def synthetic_log(scales_and_events, tick_rate=60.0, n_targets=2):
    """Minimal log: list of (scale, [events]) per tick."""
    targets = tuple(TargetSpec((0.01 * i, 0.0), ("small", "medium", "large")[i % 3], i)
                    for i in range(n_targets))
    header = LogHeader(
        session="synthetic", technique="rate3d", map=SMALL_MAP,
        display=DEFAULT_DISPLAY, seed=0, tick_rate=tick_rate, dwell_s=1.0,
        params={}, targets=targets)
    dt = 1.0 / tick_rate
    records = []
    for i, (scale, events) in enumerate(scales_and_events):
        # records carry the elapsed time at the end of their tick
        records.append(TickRecord(
            tick=i, time=(i + 1) * dt, input=InputSample(),
            viewport=ViewportState((0.0, 0.0), scale),
            events=tuple(events)))
    return SessionLog(header=header, records=tuple(records))


class TestMetrics:
    def test_acquisition_time_differencing(self):
        # selections at t = 4.0 s and t = 9.5 s give times 4.0 and 5.5
        ticks = []
        for i in range(570):
            events = []
            if i == 239:  # end-of-tick time 240/60 = 4.0 s
                events.append(SessionEvent(EVENT_SELECTED, 0))
            if i == 569:  # end-of-tick time 570/60 = 9.5 s
                events.append(SessionEvent(EVENT_SELECTED, 1))
            ticks.append((1.0, events))
        m = compute_metrics(synthetic_log(ticks))
        assert m.times[0] == pytest.approx(4.0, abs=1e-9)
        assert m.times[1] == pytest.approx(9.5 - 4.0, abs=1e-9)
        assert not m.truncated

    def test_norm_scale_all_at_max(self):
        ticks = [(1.0, []) for _ in range(100)]
        ticks.append((1.0, [SessionEvent(EVENT_SELECTED, 0)]))
        ticks.append((1.0, [SessionEvent(EVENT_SELECTED, 1)]))
        m = compute_metrics(synthetic_log(ticks))
        assert m.norm_scale_avg == 1.0
        assert m.zoom_free_count == 2

    def test_norm_scale_alternating_halves(self):
        smin = min_scale(SMALL_MAP, DEFAULT_DISPLAY)
        ticks = []
        for i in range(200):
            ticks.append((1.0 if i % 2 == 0 else smin, []))
        ticks.append((1.0, [SessionEvent(EVENT_SELECTED, 0)]))
        ticks.append((1.0, [SessionEvent(EVENT_SELECTED, 1)]))
        m = compute_metrics(synthetic_log(ticks))
        # alternating max scale (norm 1) and min scale (norm 0), plus the two
        # final max-scale ticks
        expected = (100 + 2) / 202
        assert m.norm_scale_avg == pytest.approx(expected, rel=1e-12)
        # target 0's interval saw min scale; target 1's one-tick interval
        # stayed at scale 1 and counts as zoom-free
        assert m.per_target_zoom_free == (False, True)
        assert m.zoom_free_count == 1

    def test_error_attribution_per_interval(self):
        ticks = [(1.0, []) for _ in range(10)]
        ticks[3] = (1.0, [SessionEvent(EVENT_FIRST_MISS, 0)])
        ticks[5] = (1.0, [SessionEvent(EVENT_SELECTED, 0)])
        ticks[7] = (1.0, [SessionEvent(EVENT_WRONG_TARGET, 0)])
        ticks[9] = (1.0, [SessionEvent(EVENT_SELECTED, 1)])
        m = compute_metrics(synthetic_log(ticks))
        assert m.per_target_first_miss == (1, 0)
        assert m.per_target_wrong == (0, 1)
        assert m.first_miss == 1
        assert m.wrong_target == 1

    def test_truncated_log_flagged(self):
        ticks = [(1.0, []) for _ in range(10)]
        ticks[5] = (1.0, [SessionEvent(EVENT_SELECTED, 0)])
        m = compute_metrics(synthetic_log(ticks))  # second target never hit
        assert m.truncated
        assert len(m.times) == 1

    def test_class_stats_shape(self):
        ticks = [(1.0, [])] * 3
        ticks = ticks + [(1.0, [SessionEvent(EVENT_SELECTED, 0)]),
                         (1.0, [SessionEvent(EVENT_SELECTED, 1)])]
        m = compute_metrics(synthetic_log(ticks))
        stats = m.class_stats()
        assert set(stats) == {"small", "medium", "large", "all"}
        mean, sd, n = stats["all"]
        assert n == 2 and sd >= 0.0
