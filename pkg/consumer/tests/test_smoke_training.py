"""Training loop behavior: convergence, guards, determinism, CLI."""

import json

import pytest

from pgtrain import TrainError, load_corpus, smoke_train
from pgtrain.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, main


def labeled(corpus_dir):
    graphs = load_corpus(corpus_dir)
    labels = [0 if g.name.startswith("arith") else 1 for g in graphs]
    return graphs, labels


def test_converges_and_writes_metrics(toy_corpus, tmp_path):
    graphs, labels = labeled(toy_corpus)
    out = tmp_path / "metrics.json"
    metrics = smoke_train(graphs, labels, out, seed=0)
    assert metrics["train_accuracy"] == 1.0
    assert metrics["epochs_run"] <= 200
    assert metrics["hidden_dim"] == 60
    assert metrics["learning_rate"] == 0.01
    assert metrics["conv_layers"] == 2
    assert len(metrics["loss_curve"]) == metrics["epochs_run"]
    assert json.loads(out.read_text()) == metrics


def test_single_class_rejected(toy_corpus):
    graphs, _ = labeled(toy_corpus)
    with pytest.raises(TrainError, match="at least 2 classes"):
        smoke_train(graphs, [0] * len(graphs))


def test_too_few_graphs_rejected(toy_corpus):
    graphs, labels = labeled(toy_corpus)
    with pytest.raises(TrainError, match="at least 4 graphs"):
        smoke_train(graphs[:3], labels[:3])


def test_label_count_mismatch_rejected(toy_corpus):
    graphs, labels = labeled(toy_corpus)
    with pytest.raises(TrainError, match="labels"):
        smoke_train(graphs, labels[:-1])


def test_noncontiguous_labels_rejected(toy_corpus):
    graphs, labels = labeled(toy_corpus)
    with pytest.raises(TrainError, match="labels must be"):
        smoke_train(graphs, [l * 2 for l in labels])


def test_divergence_reported(toy_corpus):
    graphs, labels = labeled(toy_corpus)
    with pytest.raises(TrainError, match="diverged"):
        smoke_train(graphs, labels, learning_rate=1e18, max_epochs=30, seed=0)


def test_fixed_seed_reruns_identically(toy_corpus):
    graphs, labels = labeled(toy_corpus)
    first = smoke_train(graphs, labels, seed=7)
    second = smoke_train(graphs, labels, seed=7)
    assert first == second  # loss curve included, element for element


def test_cli_happy_path(toy_corpus, tmp_path):
    graphs, labels = labeled(toy_corpus)
    label_file = tmp_path / "labels.json"
    label_file.write_text(json.dumps({g.name: l for g, l in zip(graphs, labels)}))
    out = tmp_path / "metrics.json"
    assert main([str(toy_corpus), str(label_file), "-o", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["train_accuracy"] == 1.0


def test_cli_missing_label(toy_corpus, tmp_path):
    label_file = tmp_path / "labels.json"
    label_file.write_text(json.dumps({"arith0.bundle": 0}))
    assert main([str(toy_corpus), str(label_file)]) == EXIT_IO


def test_cli_single_class_fails(toy_corpus, tmp_path):
    graphs, _ = labeled(toy_corpus)
    label_file = tmp_path / "labels.json"
    label_file.write_text(json.dumps({g.name: 0 for g in graphs}))
    assert main([str(toy_corpus), str(label_file), "-o", str(tmp_path / "m.json")]) == EXIT_FAIL


def test_cli_bad_corpus_dir(tmp_path):
    label_file = tmp_path / "labels.json"
    label_file.write_text("{}")
    assert main([str(tmp_path / "nowhere"), str(label_file)]) == EXIT_IO
