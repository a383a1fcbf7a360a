import numpy as np
import pytest

from dataset import SynthSpec, center_dataset, synth
from training import Hyperparams, init_state


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def small_dataset():
    return synth(SynthSpec(n=200, c=4, d1=16, d2=8, noise_sigma=0.1, seed=3))


@pytest.fixture(scope="session")
def small_hyper():
    return Hyperparams(k=8, miter=10)


@pytest.fixture
def centered_state(small_dataset, small_hyper):
    """A freshly initialized model on the centered small dataset: (model, centered train set)."""
    train, centering = center_dataset(small_dataset)
    return init_state(train, small_hyper, centering), train


@pytest.fixture
def cli_env(tmp_path, monkeypatch):
    """Run the CLI inside tmp_path with the log file kept there."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("EDSH_LOG_FILE", str(tmp_path / "edsh.log"))
    monkeypatch.setenv("LOG_LEVEL", "CRITICAL")
    monkeypatch.delenv("EDSH_CONFIG_DIR", raising=False)
    monkeypatch.delenv("EDSH_THREADS", raising=False)
    return tmp_path
