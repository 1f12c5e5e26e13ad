import numpy as np
import pytest

from kljnsim.circuit import AttenuatorConfig, NetworkConfig
from kljnsim.noise import NoiseSpec
from kljnsim.protocol import (
    KEY_BIT_BY_STATE,
    AlarmPolicy,
    Choice,
    LoopState,
    ResistorPair,
    classify_state,
    current_alarm,
    draw_choices,
    iter_bit_periods,
    run_bit_period,
    run_key_exchange,
)
from kljnsim.stats import wilson_ci

NOISE = NoiseSpec()
PAIR = ResistorPair(1000.0, 10000.0)
GAA = NetworkConfig(1000.0, 10000.0, AttenuatorConfig(2.9, 500.0))
LOSSLESS = NetworkConfig(1000.0, 10000.0, None)
SERIES_ONLY = NetworkConfig(1000.0, 10000.0, AttenuatorConfig(2.9, None))


def lh_period(net, n_samples, seed=0, period=0, noise=NOISE):
    return run_bit_period(Choice.LOW, Choice.HIGH, PAIR, net, noise, n_samples, seed, period)


class TestClassifyState:
    @pytest.mark.parametrize(
        "alice, bob, expected, secure",
        [
            (Choice.LOW, Choice.HIGH, LoopState.LH, True),
            (Choice.HIGH, Choice.LOW, LoopState.HL, True),
            (Choice.HIGH, Choice.HIGH, LoopState.HH, False),
            (Choice.LOW, Choice.LOW, LoopState.LL, False),
        ],
    )
    def test_mapping(self, alice, bob, expected, secure):
        state = classify_state(alice, bob)
        assert state is expected
        assert state.secure is secure

    def test_key_bit_convention(self):
        assert KEY_BIT_BY_STATE[LoopState.LH] == 0
        assert KEY_BIT_BY_STATE[LoopState.HL] == 1


class TestResistorPair:
    def test_lookup(self):
        assert PAIR.resistance(Choice.LOW) == 1000.0
        assert PAIR.resistance(Choice.HIGH) == 10000.0

    @pytest.mark.parametrize("lo, hi", [(0.0, 10.0), (10.0, 10.0), (100.0, 10.0)])
    def test_validation(self, lo, hi):
        with pytest.raises(ValueError):
            ResistorPair(lo, hi)


class TestRunBitPeriod:
    def test_single_loop_currents_identical(self):
        trace = lh_period(LOSSLESS, 500)
        assert np.array_equal(trace.i_alice, trace.i_bob)

    def test_one_sample_boundary(self):
        trace = lh_period(GAA, 1)
        assert trace.n_samples == 1
        states = list(trace.samples())
        assert len(states) == 1
        assert states[0].i_alice == float(trace.i_alice[0])

    def test_gaa_moment_ratio(self):
        trace = lh_period(GAA, 1_000_000, seed=3)
        ratio = float(np.mean(trace.i_alice**2) / np.mean(trace.i_bob**2))
        assert ratio == pytest.approx(4.95, rel=0.02)

    def test_deterministic(self):
        a = lh_period(GAA, 256, seed=9, period=4)
        b = lh_period(GAA, 256, seed=9, period=4)
        assert np.array_equal(a.i_alice, b.i_alice)
        assert np.array_equal(a.v_node, b.v_node)

    def test_periods_use_disjoint_streams(self):
        a = lh_period(GAA, 256, seed=9, period=0)
        b = lh_period(GAA, 256, seed=9, period=1)
        assert not np.array_equal(a.i_alice, b.i_alice)

    def test_state_recorded(self):
        trace = run_bit_period(Choice.HIGH, Choice.LOW, PAIR, GAA, NOISE, 8, 0)
        assert trace.state is LoopState.HL
        assert trace.alice_choice is Choice.HIGH

    def test_rejects_empty_period(self):
        with pytest.raises(ValueError):
            lh_period(GAA, 0)

    def test_waveform_mode_stride(self):
        wave = NoiseSpec(mode="waveform", oversample=4)
        trace = lh_period(GAA, 64, noise=wave)
        assert trace.measurement_stride == 4

    def test_lossless_state_mean_squares_agree(self):
        # wire current carries no resistor-arrangement information: LH and
        # HL mean squares match within statistics
        n = 100_000
        lh = lh_period(LOSSLESS, n, seed=21, period=0)
        hl = run_bit_period(Choice.HIGH, Choice.LOW, PAIR, LOSSLESS, NOISE, n, 21, 1)
        ms_lh = float(np.mean(lh.i_alice**2))
        ms_hl = float(np.mean(hl.i_alice**2))
        expected = 1.0 / 11000.0
        se = expected * np.sqrt(2.0 / n)
        assert abs(ms_lh - ms_hl) < 3.0 * np.sqrt(2.0) * se
        assert ms_lh == pytest.approx(expected, rel=0.02)


class TestCurrentAlarm:
    def test_lossless_never_triggers(self):
        policy = AlarmPolicy(rel_tolerance=0.1, window=50)
        for seed in range(20):
            trace = lh_period(LOSSLESS, 200, seed=seed)
            report = current_alarm(trace, policy)
            assert not report.triggered
            assert report.first_trigger_sample is None
            assert report.rel_difference == 0.0

    def test_lossless_robust_to_tiny_tolerance(self):
        trace = lh_period(LOSSLESS, 100, seed=5)
        report = current_alarm(trace, AlarmPolicy(rel_tolerance=1e-12, window=10))
        assert not report.triggered

    def test_gaa_triggers_promptly(self):
        policy = AlarmPolicy(rel_tolerance=0.1, window=50)
        triggered = []
        diffs = []
        for seed in range(200):
            trace = lh_period(GAA, 50, seed=seed)
            report = current_alarm(trace, policy)
            triggered.append(report.triggered)
            diffs.append(report.rel_difference)
        assert all(triggered)
        assert np.mean(diffs) == pytest.approx(0.80, abs=0.05)

    def test_trigger_sample_within_first_window(self):
        trace = lh_period(GAA, 200, seed=1)
        report = current_alarm(trace, AlarmPolicy(rel_tolerance=0.1, window=50))
        assert report.triggered
        assert report.first_trigger_sample == 49

    def test_series_loss_alone_stays_silent(self):
        policy = AlarmPolicy(rel_tolerance=0.1, window=50)
        for seed in range(20):
            report = current_alarm(lh_period(SERIES_ONLY, 100, seed=seed), policy)
            assert not report.triggered

    def test_short_trace_rejected(self):
        trace = lh_period(GAA, 10)
        with pytest.raises(ValueError):
            current_alarm(trace, AlarmPolicy(rel_tolerance=0.1, window=50))

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            AlarmPolicy(rel_tolerance=0.0)
        with pytest.raises(ValueError):
            AlarmPolicy(window=1)


class TestDrawChoices:
    def test_deterministic(self):
        assert draw_choices(64, 5) == draw_choices(64, 5)

    def test_roughly_fair(self):
        choices = draw_choices(4000, 123)
        highs = sum(1 for a, _ in choices if a is Choice.HIGH)
        lo, hi = wilson_ci(highs, 4000, 3.29)
        assert lo <= 0.5 <= hi


class TestRunKeyExchange:
    def test_lossless_thousand_bits(self):
        record = run_key_exchange(1000, PAIR, LOSSLESS, NOISE, 100, AlarmPolicy(), 17)
        assert record.n_bits == 1000
        assert record.n_alarms == 0
        lo, hi = wilson_ci(record.n_secure, 1000, 2.576)
        assert lo <= 0.5 <= hi
        assert len(record.key_bits) == record.n_secure

    def test_gaa_alarms_on_secure_periods(self):
        record = run_key_exchange(300, PAIR, GAA, NOISE, 100, AlarmPolicy(), 2)
        secure = [o for o in record.outcomes if o.trace.state.secure]
        assert secure
        assert all(o.alarm.triggered for o in secure)
        assert record.n_alarms_secure == len(secure)

    def test_single_bit(self):
        record = run_key_exchange(1, PAIR, LOSSLESS, NOISE, 100, AlarmPolicy(), 0)
        assert record.n_bits == 1

    def test_deterministic(self):
        a = run_key_exchange(50, PAIR, GAA, NOISE, 64, AlarmPolicy(window=32), 99)
        b = run_key_exchange(50, PAIR, GAA, NOISE, 64, AlarmPolicy(window=32), 99)
        assert a.key_bits == b.key_bits
        assert [o.alarm for o in a.outcomes] == [o.alarm for o in b.outcomes]
        for oa, ob in zip(a.outcomes, b.outcomes):
            assert np.array_equal(oa.trace.i_alice, ob.trace.i_alice)

    def test_key_bits_follow_states(self):
        record = run_key_exchange(80, PAIR, LOSSLESS, NOISE, 60, AlarmPolicy(window=10), 31)
        for outcome in record.outcomes:
            state = outcome.trace.state
            if state.secure:
                assert outcome.key_bit == KEY_BIT_BY_STATE[state]
            else:
                assert outcome.key_bit is None

    def test_iter_matches_record(self):
        traces = list(iter_bit_periods(20, PAIR, GAA, NOISE, 16, 7))
        record = run_key_exchange(20, PAIR, GAA, NOISE, 16, AlarmPolicy(window=8), 7)
        for trace, outcome in zip(traces, record.outcomes):
            assert trace.state is outcome.trace.state
            assert np.array_equal(trace.i_bob, outcome.trace.i_bob)
