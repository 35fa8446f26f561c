"""Relational graph convolution over typed nodes and edges.

Messages flow along each (source kind, relation, dest kind) triple through
its own linear map, are mean-aggregated per destination node, and are
summed across relations on top of a self projection.  The readout mean
pools within each node kind, means across kinds, and classifies linearly.
"""

from __future__ import annotations

import torch
from torch import nn

from .bundle import BundleGraph, Relation


def _relation_key(relation: Relation) -> str:
    return "__".join(relation)


class RelConvLayer(nn.Module):
    def __init__(self, relations: list[Relation], in_dim: int, out_dim: int):
        super().__init__()
        self.self_proj = nn.Linear(in_dim, out_dim)
        self.rel_proj = nn.ModuleDict(
            {_relation_key(rel): nn.Linear(in_dim, out_dim, bias=False)
             for rel in sorted(relations)})

    def forward(self, feats: dict[str, torch.Tensor],
                edges: dict[Relation, torch.Tensor]) -> dict[str, torch.Tensor]:
        out = {kind: self.self_proj(h) for kind, h in feats.items()}
        for relation, index in edges.items():
            key = _relation_key(relation)
            if key not in self.rel_proj:
                continue
            src_kind, _, dst_kind = relation
            if src_kind not in feats or dst_kind not in out:
                continue
            messages = self.rel_proj[key](feats[src_kind])[index[0]]
            summed = torch.zeros_like(out[dst_kind])
            summed.index_add_(0, index[1], messages)
            counts = torch.zeros(out[dst_kind].shape[0], dtype=summed.dtype)
            counts.index_add_(0, index[1], torch.ones(index.shape[1], dtype=summed.dtype))
            out[dst_kind] = out[dst_kind] + summed / counts.clamp(min=1.0).unsqueeze(1)
        return out


class RelGraphClassifier(nn.Module):
    """Two convolution layers, relu between, mean readout over node kinds,
    linear head producing one logit per class."""

    def __init__(self, relations: list[Relation], in_dim: int = 120,
                 hidden_dim: int = 60, num_classes: int = 2):
        super().__init__()
        self.conv1 = RelConvLayer(relations, in_dim, hidden_dim)
        self.conv2 = RelConvLayer(relations, hidden_dim, hidden_dim)
        self.head = nn.Linear(hidden_dim, num_classes)
        self.hidden_dim = hidden_dim
        self.num_layers = 2

    def forward(self, graph: BundleGraph) -> torch.Tensor:
        feats = {kind: torch.from_numpy(mat).to(torch.float32)
                 for kind, mat in graph.features.items()}
        edges = {rel: torch.from_numpy(idx) for rel, idx in graph.edges.items()}
        h = {k: torch.relu(v) for k, v in self.conv1(feats, edges).items()}
        h = {k: torch.relu(v) for k, v in self.conv2(h, edges).items()}
        pools = [v.mean(dim=0) for _, v in sorted(h.items()) if v.shape[0] > 0]
        readout = torch.stack(pools).mean(dim=0)
        return self.head(readout)
