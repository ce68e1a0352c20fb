"""Two-layer graph convolutional encoder trained on link prediction.

Forward pass (conventional row-feature orientation):

    H1 = relu(A_hat @ H0 @ W1)
    Z  = A_hat @ H1 @ W2          # identity activation on the output

where A_hat is the selected adjacency operator.  The decoder scores a
node pair with sigmoid(z_u . z_v); training minimizes BCE over the train
edges (label 1) plus freshly resampled uniform negatives (label 0), with
message passing restricted to the train-edge subgraph so held-out edges
stay unseen.  Gradients are hand-derived and checked against the
finite-difference oracle in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cograph
from .cograph import AdjacencyOperator, CooccurrenceGraph
from .ngram import EmbeddingTable
from .numcore import DTYPE, Adam, ensure_finite, rng, sigmoid


@dataclass
class GcnModel:
    h0: np.ndarray  # V x d0 trainable node features
    w1: np.ndarray  # d0 x d_h
    w2: np.ndarray  # d_h x d_out
    adjacency_mode: str = "sym_norm"


@dataclass
class GcnTrainConfig:
    lr: float = 0.005
    epochs: int = 200
    train_fraction: float = 0.8
    seed: int = 0
    d0: int = 64
    d_h: int = 64
    d_out: int = 64
    negatives_per_positive: int = 1
    adjacency_mode: str = "sym_norm"
    train_h0: bool = True

    def __post_init__(self):
        if self.lr <= 0:
            raise ValueError("lr must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if min(self.d0, self.d_h, self.d_out) < 1:
            raise ValueError("dimensions must be >= 1")
        if self.negatives_per_positive < 1:
            raise ValueError("negatives_per_positive must be >= 1")


def init_model(n_nodes: int, config: GcnTrainConfig) -> GcnModel:
    """All parameters drawn N(0, 0.1) from the seeded generator, in the
    order h0, w1, w2."""
    gen = rng(config.seed)
    h0 = gen.normal(0.0, 0.1, size=(n_nodes, config.d0)).astype(DTYPE)
    w1 = gen.normal(0.0, 0.1, size=(config.d0, config.d_h)).astype(DTYPE)
    w2 = gen.normal(0.0, 0.1, size=(config.d_h, config.d_out)).astype(DTYPE)
    return GcnModel(h0=h0, w1=w1, w2=w2, adjacency_mode=config.adjacency_mode)


def gcn_forward(model: GcnModel, adj: AdjacencyOperator) -> np.ndarray:
    """Node embeddings Z (V x d_out); row i holds word id i+1."""
    a = adj.matrix
    v = model.h0.shape[0]
    if a.shape != (v, v):
        raise ValueError(f"adjacency is {a.shape}, expected ({v}, {v})")
    if adj.mode != model.adjacency_mode:
        raise ValueError(f"adjacency mode {adj.mode!r} does not match model {model.adjacency_mode!r}")
    pre1 = a @ model.h0 @ model.w1
    h1 = np.maximum(pre1, 0)
    return a @ h1 @ model.w2


def link_score(z: np.ndarray, u: int, v: int) -> float:
    """sigmoid(z_u . z_v) for word ids u, v."""
    n = z.shape[0]
    for node in (u, v):
        if not 1 <= node <= n:
            raise ValueError(f"id {node} out of range 1..{n}")
    return float(sigmoid(float(z[u - 1] @ z[v - 1])))


def _pair_indices(pairs) -> tuple:
    arr = np.asarray(pairs, dtype=np.int64).reshape(len(pairs), 2)
    return arr[:, 0] - 1, arr[:, 1] - 1


def link_logits(z: np.ndarray, pairs) -> np.ndarray:
    ui, vi = _pair_indices(pairs)
    return np.sum(z[ui] * z[vi], axis=1)


def bce_link_loss(z: np.ndarray, pos_pairs, neg_pairs) -> float:
    """Mean BCE over positive and negative pairs, computed in a
    log1p-stable form off the raw logits."""
    logits = np.concatenate([link_logits(z, pos_pairs), link_logits(z, neg_pairs)])
    labels = np.concatenate([
        np.ones(len(pos_pairs)), np.zeros(len(neg_pairs)),
    ])
    # -[y*log p + (1-y)*log(1-p)] = max(x,0) - x*y + log(1+exp(-|x|))
    x = logits.astype(np.float64)
    return float(np.mean(np.maximum(x, 0) - x * labels + np.log1p(np.exp(-np.abs(x)))))


def loss_and_grads(model: GcnModel, adj: AdjacencyOperator, pos_pairs, neg_pairs):
    """Forward + hand-derived backprop of the link BCE w.r.t. h0, w1, w2.

    Returns (loss, grads, z) so callers can reuse the embeddings of the
    same forward pass.
    """
    a = adj.matrix
    pre1 = a @ model.h0 @ model.w1
    h1 = np.maximum(pre1, 0)
    z = a @ h1 @ model.w2

    pairs_u = []
    pairs_v = []
    labels = []
    for (u, v) in pos_pairs:
        pairs_u.append(u - 1)
        pairs_v.append(v - 1)
        labels.append(1.0)
    for (u, v) in neg_pairs:
        pairs_u.append(u - 1)
        pairs_v.append(v - 1)
        labels.append(0.0)
    ui = np.asarray(pairs_u, dtype=np.int64)
    vi = np.asarray(pairs_v, dtype=np.int64)
    y = np.asarray(labels, dtype=z.dtype)
    k = len(labels)

    logits = np.sum(z[ui] * z[vi], axis=1)
    p = sigmoid(logits)
    x64 = logits.astype(np.float64)
    loss = float(np.mean(np.maximum(x64, 0) - x64 * y + np.log1p(np.exp(-np.abs(x64)))))

    g = ((p - y) / k).astype(z.dtype)  # dL/dlogit per pair
    dz = np.zeros_like(z)
    np.add.at(dz, ui, g[:, None] * z[vi])
    np.add.at(dz, vi, g[:, None] * z[ui])

    ah1 = a @ h1
    dw2 = ah1.T @ dz
    dh1 = (a.T @ dz) @ model.w2.T
    dpre1 = dh1 * (pre1 > 0)
    ah0 = a @ model.h0
    dw1 = ah0.T @ dpre1
    dh0 = (a.T @ dpre1) @ model.w1.T
    return loss, {"h0": dh0, "w1": dw1, "w2": dw2}, z


def roc_auc(pos_scores, neg_scores) -> float:
    """Rank-based AUC (ties get averaged ranks): the probability that a
    random positive outscores a random negative."""
    pos = np.asarray(pos_scores, dtype=np.float64)
    neg = np.asarray(neg_scores, dtype=np.float64)
    if pos.size == 0 or neg.size == 0:
        return float("nan")
    scores = np.concatenate([pos, neg])
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(scores.size, dtype=np.float64)
    sorted_scores = scores[order]
    i = 0
    while i < scores.size:
        j = i
        while j + 1 < scores.size and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0  # average 1-based rank
        i = j + 1
    u = ranks[:pos.size].sum() - pos.size * (pos.size + 1) / 2.0
    return float(u / (pos.size * neg.size))


def held_out_auc(z: np.ndarray, split: cograph.EdgeSplit) -> float:
    pos = link_logits(z, split.test_edges) if split.test_edges else np.array([])
    neg = link_logits(z, split.test_negatives) if split.test_negatives else np.array([])
    return roc_auc(pos, neg)


def train_gcn(graph: CooccurrenceGraph, config: GcnTrainConfig):
    """Full-batch link-prediction training.

    Returns (model, history) with one (epoch, loss, auc) row per epoch;
    loss and AUC are measured on the forward pass of that epoch, before
    the parameter update.
    """
    if graph.n_edges < 2:
        raise ValueError(f"graph has {graph.n_edges} edges, need at least 2")
    if cograph.n_non_edges(graph) == 0:
        raise ValueError("graph is complete: link prediction is degenerate")

    split = cograph.split_edges(graph, config.train_fraction, config.seed)
    train_graph = cograph.subgraph(graph, split.train_edges)
    adj = cograph.adjacency(train_graph, config.adjacency_mode)

    model = init_model(graph.n_nodes, config)
    params = {"w1": model.w1, "w2": model.w2}
    if config.train_h0:
        params["h0"] = model.h0
    opt = Adam(params, lr=config.lr)
    gen = rng(config.seed + 1)  # negative-sampling stream, separate from init/split

    n_neg = len(split.train_edges) * config.negatives_per_positive
    history = []
    for epoch in range(1, config.epochs + 1):
        negatives = cograph.sample_non_edges(graph, n_neg, gen, replace=True)
        loss, grads, z = loss_and_grads(model, adj, split.train_edges, negatives)
        ensure_finite("gcn loss", np.array([loss]))
        auc = held_out_auc(z, split)
        opt.step({name: grads[name] for name in params})
        model.w1 = opt.params["w1"]
        model.w2 = opt.params["w2"]
        if config.train_h0:
            model.h0 = opt.params["h0"]
        history.append((epoch, loss, auc))
    return model, history


def export_embeddings(model: GcnModel, adj: AdjacencyOperator) -> EmbeddingTable:
    """(V+1) x d_out table over the full-graph adjacency; row 0 is PAD."""
    z = gcn_forward(model, adj)
    table = np.zeros((z.shape[0] + 1, z.shape[1]), dtype=DTYPE)
    table[1:] = z
    return EmbeddingTable(vectors=table, source="CE")
