"""Independent reference implementations used to check the library.

These deliberately avoid the library's data structures: the tokenizer walks
character groups, the BM25 scorer recomputes statistics from raw bodies
with Counters, and the traversal oracles are plain set-expansion loops.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter


def tokenize_oracle(text: str) -> list[str]:
    out = []
    for is_word, group in itertools.groupby(text.lower(), key=str.isalnum):
        if is_word:
            token = "".join(group)
            if len(token) >= 2:
                out.append(token)
    return out


def bm25_oracle(
    bodies: dict[str, str],
    query_weights: dict[str, float],
    k1: float = 1.2,
    b: float = 0.75,
) -> dict[str, float]:
    """Score every document that matches at least one weighted query term."""
    tokens = {doc: tokenize_oracle(body) for doc, body in bodies.items()}
    n = len(bodies)
    if n == 0:
        return {}
    avg = sum(len(t) for t in tokens.values()) / n
    df: Counter = Counter()
    for doc_tokens in tokens.values():
        df.update(set(doc_tokens))
    scores: dict[str, float] = {}
    for doc, doc_tokens in tokens.items():
        tf = Counter(doc_tokens)
        score = 0.0
        matched = False
        for term, weight in query_weights.items():
            f = tf.get(term, 0)
            if f == 0:
                continue
            matched = True
            idf = math.log(1.0 + (n - df[term] + 0.5) / (df[term] + 0.5))
            score += weight * idf * (f * (k1 + 1.0)) / (f + k1 * (1.0 - b + b * len(doc_tokens) / avg))
        if matched:
            scores[doc] = score
    return scores


def query_weights_oracle(query_tokens: list[str], expansion: set[str] = frozenset(), expansion_weight: float = 0.3) -> dict[str, float]:
    """Mirror of the weighting convention: 1.0 per query-term occurrence,
    expansion terms not already present get expansion_weight once."""
    weights: dict[str, float] = {}
    for term in query_tokens:
        weights[term] = weights.get(term, 0.0) + 1.0
    for term in sorted(expansion - set(weights)):
        weights[term] = expansion_weight
    return weights


def undirected_bfs_oracle(edges: list[tuple[str, str]], start: str, depth: int) -> set[str]:
    """Nodes within ``depth`` hops of start, treating every edge as two-way."""
    adjacency: dict[str, set[str]] = {}
    for a, b_ in edges:
        adjacency.setdefault(a, set()).add(b_)
        adjacency.setdefault(b_, set()).add(a)
    reached = {start}
    frontier = {start}
    for _ in range(depth):
        frontier = {n for node in frontier for n in adjacency.get(node, ())} - reached
        if not frontier:
            break
        reached |= frontier
    return reached


def directed_bfs_oracle(edges: list[tuple[str, str]], start: str, depth: int) -> set[str]:
    """Nodes reachable from start within ``depth`` hops along edge direction."""
    adjacency: dict[str, set[str]] = {}
    for a, b_ in edges:
        adjacency.setdefault(a, set()).add(b_)
    reached = {start}
    frontier = {start}
    for _ in range(depth):
        frontier = {n for node in frontier for n in adjacency.get(node, ())} - reached
        if not frontier:
            break
        reached |= frontier
    return reached


def flow_neighborhood_oracle(flow_edges: list[tuple[str, str]], start: str, radius: int) -> set[str]:
    """Union of the forward cone and the backward cone around start."""
    forward = directed_bfs_oracle(flow_edges, start, radius)
    backward = directed_bfs_oracle([(b_, a) for a, b_ in flow_edges], start, radius)
    return forward | backward
