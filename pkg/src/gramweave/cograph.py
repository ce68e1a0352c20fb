"""Word co-occurrence graph over vocabulary ids.

Nodes are the word ids 1..V; an undirected edge joins every pair of
adjacent tokens within a sentence (window 1, never across sentence
boundaries, no self-loops, unweighted).  Also provides the adjacency
operators the graph encoder consumes and seeded edge splits for link
prediction.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .numcore import DTYPE, rng, round_half_up
from .textprep import Vocabulary, encode


@dataclass(frozen=True)
class CooccurrenceGraph:
    n_nodes: int
    edges: frozenset  # unordered pairs stored as (u, v) with u < v

    @property
    def n_edges(self) -> int:
        return len(self.edges)


@dataclass
class AdjacencyOperator:
    matrix: np.ndarray  # V x V, float32
    mode: str  # "raw" | "sym_norm"


@dataclass
class EdgeSplit:
    train_edges: list
    test_edges: list
    test_negatives: list
    seed: int


def _canonical(u: int, v: int):
    return (u, v) if u < v else (v, u)


def build_graph(corpus: list, vocab: Vocabulary) -> CooccurrenceGraph:
    """Edge between each pair of consecutive tokens inside a sentence.

    Duplicates collapse; consecutive identical tokens add nothing.
    """
    edges = set()
    for sentence in corpus:
        ids = encode(sentence, vocab)
        for a, b in zip(ids, ids[1:]):
            if a != b:
                edges.add(_canonical(a, b))
    return CooccurrenceGraph(n_nodes=vocab.size, edges=frozenset(edges))


def canonical_edges(graph: CooccurrenceGraph) -> list:
    return sorted(graph.edges)


def _adjacency_sets(graph: CooccurrenceGraph) -> list:
    adj = [set() for _ in range(graph.n_nodes + 1)]
    for u, v in graph.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def neighbors(graph: CooccurrenceGraph, node: int, hops: int = 1) -> set:
    """All nodes reachable within `hops` edges, excluding the start node."""
    if not 1 <= node <= graph.n_nodes:
        raise ValueError(f"node {node} out of range 1..{graph.n_nodes}")
    if hops < 1:
        raise ValueError("hops must be >= 1")
    adj = _adjacency_sets(graph)
    seen = {node}
    frontier = {node}
    for _ in range(hops):
        frontier = {w for u in frontier for w in adj[u]} - seen
        if not frontier:
            break
        seen |= frontier
    return seen - {node}


def adjacency(graph: CooccurrenceGraph, mode: str = "sym_norm") -> AdjacencyOperator:
    """0/1 adjacency ("raw") or D^-1/2 (A+I) D^-1/2 with self-loop
    degrees ("sym_norm")."""
    v = graph.n_nodes
    a = np.zeros((v, v), dtype=DTYPE)
    for i, j in graph.edges:
        a[i - 1, j - 1] = 1.0
        a[j - 1, i - 1] = 1.0
    if mode == "raw":
        return AdjacencyOperator(matrix=a, mode="raw")
    if mode == "sym_norm":
        a_hat = a + np.eye(v, dtype=DTYPE)
        inv_sqrt_deg = 1.0 / np.sqrt(a_hat.sum(axis=1))
        a_hat = a_hat * inv_sqrt_deg[:, None] * inv_sqrt_deg[None, :]
        return AdjacencyOperator(matrix=a_hat.astype(DTYPE), mode="sym_norm")
    raise ValueError(f"unknown adjacency mode: {mode!r}")


def subgraph(graph: CooccurrenceGraph, edges) -> CooccurrenceGraph:
    """Same node set, restricted edge set (for train-only message passing)."""
    kept = frozenset(_canonical(u, v) for u, v in edges)
    if not kept <= graph.edges:
        raise ValueError("subgraph edges must be a subset of the graph")
    return CooccurrenceGraph(n_nodes=graph.n_nodes, edges=kept)


def n_non_edges(graph: CooccurrenceGraph) -> int:
    v = graph.n_nodes
    return v * (v - 1) // 2 - graph.n_edges


def sample_non_edges(graph: CooccurrenceGraph, count: int,
                     gen: np.random.Generator, replace: bool = True) -> list:
    """Uniform non-edges; `replace=False` dedups (used by edge splits)."""
    available = n_non_edges(graph)
    if available == 0:
        raise ValueError("graph is complete: no non-edges to sample")
    if not replace and count > available:
        raise ValueError(f"cannot sample {count} distinct non-edges, only {available} exist")
    v = graph.n_nodes
    # Enumerate when rejection sampling would thrash (dense or tiny graphs).
    if not replace and count * 2 > available:
        pool = [
            (u, w)
            for u in range(1, v + 1)
            for w in range(u + 1, v + 1)
            if (u, w) not in graph.edges
        ]
        idx = gen.choice(len(pool), size=count, replace=False)
        return [pool[i] for i in idx]
    out = []
    seen = set()
    while len(out) < count:
        u = int(gen.integers(1, v + 1))
        w = int(gen.integers(1, v + 1))
        if u == w:
            continue
        pair = _canonical(u, w)
        if pair in graph.edges:
            continue
        if not replace:
            if pair in seen:
                continue
            seen.add(pair)
        out.append(pair)
    return out


def split_edges(graph: CooccurrenceGraph, train_fraction: float, seed: int) -> EdgeSplit:
    """Seeded shuffle; train count = round(train_fraction * |E|);
    |test| negatives sampled uniformly from non-edges without replacement."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    if graph.n_edges < 2:
        raise ValueError(f"graph has {graph.n_edges} edges, need at least 2 to split")
    if n_non_edges(graph) == 0:
        raise ValueError("graph is complete: no negative edges available")
    gen = rng(seed)
    edges = canonical_edges(graph)
    order = gen.permutation(len(edges))
    shuffled = [edges[i] for i in order]
    n_train = round_half_up(train_fraction * len(edges))
    train = shuffled[:n_train]
    test = shuffled[n_train:]
    negatives = sample_non_edges(graph, len(test), gen, replace=False)
    return EdgeSplit(train_edges=train, test_edges=test, test_negatives=negatives, seed=seed)


def write_edges_tsv(graph: CooccurrenceGraph, vocab: Vocabulary, path) -> None:
    """Canonical edge list: token_u<TAB>token_v with u < v lexicographically,
    lines sorted; the golden-file form."""
    pairs = []
    for i, j in graph.edges:
        a, b = vocab.id_to_token[i], vocab.id_to_token[j]
        if b < a:
            a, b = b, a
        pairs.append((a, b))
    pairs.sort()
    Path(path).write_text(
        "\n".join(f"{a}\t{b}" for a, b in pairs) + ("\n" if pairs else ""),
        encoding="utf-8",
    )
