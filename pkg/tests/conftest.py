import pytest

from iccr.channel import AntennaConfig, FeedbackMode, NoiseSpec, NOISELESS
from iccr.montecarlo import run_trial
from iccr.schemes import build_scheme


def make_transcript(cfg, mode="csit", seed=0, snr_db=None, relay_feedback=True):
    plan = build_scheme(AntennaConfig(*cfg), FeedbackMode.parse(mode, relay_feedback))
    noise = NOISELESS if snr_db is None else NoiseSpec(snr_db)
    return run_trial(plan, seed, noise)


@pytest.fixture
def transcript_factory():
    return make_transcript
