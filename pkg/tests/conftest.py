from pathlib import Path

import pytest

from helpers import SleepRecorder
from reaug.datasets import flatten, load_scierc
from reaug.datasets.synth import generate_corpus

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def mini_path():
    return FIXTURES / "scierc_mini.json"


@pytest.fixture
def mini_samples(mini_path):
    return flatten(load_scierc(mini_path))


@pytest.fixture
def by_id(mini_samples):
    return {s.id: s for s in mini_samples}


@pytest.fixture(scope="session")
def synth_samples():
    return flatten(generate_corpus(80, sentences_per_doc=3, seed=7))


@pytest.fixture
def sleeps():
    return SleepRecorder()
