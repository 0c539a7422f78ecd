"""Graph-centrality comparison systems over an extract pool.

Each extract is a node; edges are weighted either by normalized word overlap
(TextRank style) or by cosine similarity of pool-local TF-IDF vectors
(LexRank style). Both rank nodes with the same power-iteration core.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .corpus import lemmatize, tokenize
from .matcher import Extract
from .summarizer import Summary, SummaryConfig

DEFAULT_DAMPING = 0.85
DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITERS = 100

METHOD_TEXTRANK = "textrank"
METHOD_LEXRANK = "lexrank"
GRAPH_SYSTEMS = {"TextRank": METHOD_TEXTRANK, "LexRank": METHOD_LEXRANK}


@dataclass
class ExtractGraph:
    nodes: list[Extract]
    weights: np.ndarray  # symmetric, non-negative, zero diagonal


@dataclass
class RankScores:
    scores: np.ndarray  # non-negative, sums to 1
    converged: bool = True


def _word_lemmas(extract: Extract) -> list[str]:
    """Lemmatized word tokens of an extract's text, punctuation dropped."""
    return [lemmatize(s) for s, _, _ in tokenize(extract.text)
            if any(ch.isalnum() for ch in s)]


def textrank_weights(extracts: list[Extract]) -> ExtractGraph:
    """Edge weight = |shared lemma types| / (log len_i + log len_j).

    Lengths are word-token counts; a node with fewer than two word tokens
    contributes zero weight (log guard).
    """
    tokens = [_word_lemmas(e) for e in extracts]
    types = [set(t) for t in tokens]
    n = len(extracts)
    weights = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            if len(tokens[i]) < 2 or len(tokens[j]) < 2:
                continue
            shared = len(types[i] & types[j])
            if shared:
                w = shared / (math.log(len(tokens[i])) + math.log(len(tokens[j])))
                weights[i, j] = weights[j, i] = w
    return ExtractGraph(nodes=list(extracts), weights=weights)


def lexrank_weights(extracts: list[Extract],
                    threshold: float | None = None) -> ExtractGraph:
    """Edge weight = cosine similarity of TF-IDF vectors over the pool.

    TF is the raw term count in the extract; IDF = log(N / df) with the pool
    itself as the document collection. Weights below `threshold` are zeroed
    (continuous variant when None); all-zero vectors get zero cosines.
    """
    counts = [Counter(_word_lemmas(e)) for e in extracts]
    n = len(extracts)
    df = Counter()
    for c in counts:
        df.update(c.keys())
    vocab = sorted(df)
    idf = {w: math.log(n / df[w]) for w in vocab}
    mat = np.zeros((n, len(vocab)))
    for i, c in enumerate(counts):
        for j, w in enumerate(vocab):
            if w in c:
                mat[i, j] = c[w] * idf[w]
    norms = np.linalg.norm(mat, axis=1)
    weights = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            if norms[i] == 0.0 or norms[j] == 0.0:
                continue
            w = float(np.dot(mat[i], mat[j]) / (norms[i] * norms[j]))
            if threshold is not None and w < threshold:
                w = 0.0
            weights[i, j] = weights[j, i] = w
    return ExtractGraph(nodes=list(extracts), weights=weights)


def pagerank(graph: ExtractGraph, damping: float = DEFAULT_DAMPING,
             max_iters: int = DEFAULT_MAX_ITERS,
             tol: float = DEFAULT_TOL) -> RankScores:
    """Power iteration over the row-normalized weight matrix.

    Isolated nodes (zero weight rows) teleport uniformly. Iterates until the
    L1 change drops below `tol` or `max_iters` is hit, in which case the
    converged flag is False.
    """
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must be in (0, 1)")
    n = len(graph.nodes)
    if n == 0:
        return RankScores(scores=np.array([]), converged=True)
    weights = np.asarray(graph.weights, dtype=np.float64)
    row_sums = weights.sum(axis=1)
    transition = np.where(row_sums[:, None] > 0,
                          weights / np.where(row_sums[:, None] > 0,
                                             row_sums[:, None], 1.0),
                          1.0 / n)
    scores = np.full(n, 1.0 / n)
    converged = False
    for _ in range(max_iters):
        updated = (1.0 - damping) / n + damping * (transition.T @ scores)
        if np.abs(updated - scores).sum() < tol:
            scores = updated
            converged = True
            break
        scores = updated
    scores = scores / scores.sum()
    return RankScores(scores=scores, converged=converged)


def graph_summary(extracts: list[Extract], method: str,
                  config: SummaryConfig, entity: str = "",
                  category: str = "") -> Summary:
    """Greedy budget fill in descending centrality order.

    Ties break by doc_id then keyword location; extracts that would overflow
    the budget are skipped and scanning continues, same hard cap as the
    selection systems.
    """
    system = {v: k for k, v in GRAPH_SYSTEMS.items()}[method]
    summary = Summary(entity=entity, category=category, system=system)
    if not extracts:
        return summary
    if len(extracts) == 1:
        scores = np.array([1.0])
    else:
        builder = textrank_weights if method == METHOD_TEXTRANK \
            else lexrank_weights
        scores = pagerank(builder(extracts)).scores
    order = sorted(range(len(extracts)), key=lambda i: (
        -scores[i], extracts[i].match.doc_id, extracts[i].match.keyword_loc))
    words = 0
    for i in order:
        ext = extracts[i]
        if words + ext.word_count <= config.word_limit:
            summary.selections.append(ext)
            words += ext.word_count
    return summary
