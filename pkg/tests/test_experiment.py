import json

import pytest

from dataset import SynthSpec, split, synth
from evaluations import TASKS, run_experiment, run_task
from training import Hyperparams, train


def test_experiment_outputs(tmp_path):
    table = run_experiment(SynthSpec(n=240, c=4, d1=16, d2=8, seed=1), Hyperparams(miter=3), tmp_path,
                           bit_lengths=[8, 12], ks=[1, 10])
    assert table["bits"].tolist() == [8, 12]
    assert ((table["image_to_text"] >= 0) & (table["image_to_text"] <= 1)).all()
    document = json.loads((tmp_path / "map_table.json").read_text())
    assert document["m_cutoff"] == 100
    assert len(document["rows"]) == 2
    for bits in (8, 12):
        for task in TASKS:
            assert (tmp_path / f"bits_{bits}" / task / "pr.csv").exists()


@pytest.mark.slow
@pytest.mark.parametrize("task", sorted(TASKS))
def test_desk_scale_retrieval_quality(task):
    ds = synth(SynthSpec(n=2200, c=10, d1=64, d2=32, noise_sigma=0.15, seed=0))
    train_set, query_set = split(ds, 200 / 2200, seed=0)
    model, _ = train(train_set, Hyperparams(k=16))
    query_modality, db_modality = TASKS[task]
    report = run_task(model, query_set, train_set, query_modality, db_modality, m=100, ks=[1, 100])
    assert report.map_at_m >= 0.90
