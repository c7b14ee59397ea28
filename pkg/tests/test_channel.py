import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iccr.channel import (
    AntennaConfig,
    ChannelSequence,
    Condition,
    FeedbackKind,
    FeedbackMode,
    NoiseSpec,
    channel_output,
    classify_condition,
    sample_channel,
)
from iccr.numerics import seeded_rng

configs = st.builds(AntennaConfig, st.integers(1, 6), st.integers(1, 6), st.integers(1, 6))


@pytest.mark.parametrize("cfg, cond", [
    ((1, 1, 1), Condition.III),
    ((1, 2, 2), Condition.II),
    ((2, 1, 2), Condition.III),
    ((1, 4, 2), Condition.IV),
    ((2, 3, 1), Condition.V),
    ((3, 1, 8), Condition.I),
    ((1, 1, 2), Condition.I),
])
def test_condition_examples(cfg, cond):
    assert classify_condition(AntennaConfig(*cfg)) is cond


@given(configs)
def test_conditions_partition_the_space(cfg):
    mt, mc, mr = cfg.m_t, cfg.m_c, cfg.m_r
    cond = classify_condition(cfg)
    if mt + mc <= mr:
        assert cond is Condition.I
    elif mt + mc <= 2 * mr:
        assert cond in (Condition.II, Condition.III)
        assert (cond is Condition.II) == (mr > mt)
    else:
        assert cond in (Condition.IV, Condition.V)
        assert (cond is Condition.IV) == (mr > mt)


def test_antenna_config_rejects_nonpositive():
    with pytest.raises(ValueError):
        AntennaConfig(0, 1, 1)
    with pytest.raises(ValueError):
        AntennaConfig(1, 1.5, 1)


def test_feedback_mode_parse_and_flags():
    m = FeedbackMode.parse("shannon")
    assert m.kind.has_csi and m.kind.has_output
    assert not FeedbackKind.DELAYED_CSIT.has_output
    assert str(FeedbackMode.parse("csit", False)) == "csit-no-cr"
    assert not FeedbackMode.parse("none").relay_has_feedback


def test_sampled_channel_shapes_and_reproducibility():
    cfg = AntennaConfig(2, 3, 4)
    ch = sample_channel(cfg, 5, seeded_rng(9))
    assert ch.slots == 5
    assert ch.h("a", "c", 0).shape == (4, 3)
    assert ch.h("b", "a", 4).shape == (4, 2)
    assert ch == sample_channel(cfg, 5, seeded_rng(9))
    assert ch.receiver_matrix("a", 1).shape == (4, 7)
    with pytest.raises(ValueError):
        ch.link("aa")[0, 0, 0] = 1


@settings(max_examples=25, deadline=None)
@given(configs, st.integers(1, 4), st.integers(0, 2**32))
def test_channel_json_round_trip(cfg, slots, seed):
    ch = sample_channel(cfg, slots, seeded_rng(seed))
    assert ChannelSequence.from_json(ch.to_json()) == ch


def test_channel_output_is_superposition():
    cfg = AntennaConfig(1, 2, 2)
    ch = sample_channel(cfg, 1, seeded_rng(0))
    xa, xb, xc = np.array([1.0]), np.array([2j]), np.array([1.0, -1.0])
    out = channel_output(ch, 0, xa, xb, xc)
    want = ch.h("b", "a", 0) @ xa + ch.h("b", "b", 0) @ xb + ch.h("b", "c", 0) @ xc
    assert np.allclose(out.y_b, want)
    assert not out.noise_enabled


def test_channel_output_noise_and_validation():
    cfg = AntennaConfig(1, 1, 1)
    ch = sample_channel(cfg, 1, seeded_rng(0))
    z = np.zeros(1)
    noisy = channel_output(ch, 0, z, z, z, NoiseSpec(10.0), seeded_rng(1))
    assert noisy.y_a[0] != 0
    with pytest.raises(ValueError):
        channel_output(ch, 0, z, z, z, NoiseSpec(10.0))
    with pytest.raises(ValueError):
        channel_output(ch, 0, np.zeros(2), z, z)
    with pytest.raises(IndexError):
        channel_output(ch, 1, z, z, z)


def test_noise_spec_power():
    assert NoiseSpec(30.0).power == pytest.approx(1000.0)
    assert NoiseSpec().variance == 0.0
