"""Smoke training: prove the bundles drive a model to convergence.

Full-batch Adam on a handful of labeled graphs.  The point is validating
the interchange format and the architecture shape, not benchmark scores.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import torch
from torch import nn

from .bundle import BundleGraph
from .model import RelGraphClassifier


class TrainError(Exception):
    """Unusable inputs or a diverged optimization."""


def smoke_train(
    graphs: list[BundleGraph],
    labels: list[int],
    out_path: Path | str | None = None,
    *,
    hidden_dim: int = 60,
    learning_rate: float = 0.01,
    max_epochs: int = 200,
    seed: int = 0,
) -> dict:
    """Train until 100% training accuracy or max_epochs; return metrics.

    Needs at least 4 graphs spanning at least 2 classes.  Raises
    TrainError on bad inputs or a non-finite loss.  Writes the metrics as
    JSON when out_path is given.
    """
    if len(graphs) != len(labels):
        raise TrainError(f"{len(graphs)} graphs but {len(labels)} labels")
    if len(graphs) < 4:
        raise TrainError(f"need at least 4 graphs, got {len(graphs)}")
    classes = sorted(set(labels))
    if len(classes) < 2:
        raise TrainError(f"need at least 2 classes, got {len(classes)}")
    if classes != list(range(len(classes))):
        raise TrainError(f"labels must be 0..{len(classes) - 1}, got {classes}")

    relations = sorted({rel for g in graphs for rel in g.edges})
    in_dim = next(iter(graphs[0].features.values())).shape[1]

    torch.manual_seed(seed)
    model = RelGraphClassifier(relations, in_dim, hidden_dim, len(classes))
    optimizer = torch.optim.Adam(model.parameters(), lr=learning_rate)
    loss_fn = nn.CrossEntropyLoss()
    targets = torch.tensor(labels, dtype=torch.long)

    loss_curve: list[float] = []
    accuracy = 0.0
    for _ in range(max_epochs):
        optimizer.zero_grad()
        logits = torch.stack([model(g) for g in graphs])
        loss = loss_fn(logits, targets)
        if not math.isfinite(loss.item()):
            raise TrainError(f"training diverged at epoch {len(loss_curve) + 1}: loss={loss.item()}")
        loss.backward()
        optimizer.step()
        loss_curve.append(loss.item())
        with torch.no_grad():
            predictions = torch.stack([model(g) for g in graphs]).argmax(dim=1)
        accuracy = float((predictions == targets).float().mean().item())
        if accuracy == 1.0:
            break

    metrics = {
        "graphs": len(graphs),
        "classes": len(classes),
        "hidden_dim": hidden_dim,
        "learning_rate": learning_rate,
        "conv_layers": model.num_layers,
        "seed": seed,
        "epochs_run": len(loss_curve),
        "train_accuracy": accuracy,
        "loss_curve": loss_curve,
    }
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(metrics, indent=2) + "\n")
    return metrics
