"""Taxonomy expansion over word vectors, and the polysemy diagnostic.

Vectors are consumed from a text file, never trained here. Expansion ranks
the whole vocabulary by cosine similarity against each seed term and keeps
the top candidates; the polysemy average uses an external sense-count
lexicon as a proxy for how general a term set is.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .taxonomy import EXPANDED, RiskTaxonomy, RiskTerm

logger = logging.getLogger(__name__)

DEFAULT_TOP_K = 10
DEFAULT_MIN_SIM = 0.5


@dataclass
class WordVectors:
    dim: int
    vocabulary: dict[str, np.ndarray]

    def __contains__(self, word: str) -> bool:
        return word in self.vocabulary


@dataclass
class ExpansionResult:
    category: str
    seed_term: str
    candidates: list[tuple[str, float]]  # similarity descending


def load_vectors(path: str | Path) -> WordVectors:
    """Parse a text vector file: header `vocab_size dim`, then word + floats.

    Any line whose value count does not match the header dimension, and any
    zero vector, is a fatal parse error naming the line.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty vector file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"{path}:1: expected header 'vocab_size dim'")
    vocab_size, dim = int(header[0]), int(header[1])
    vocabulary: dict[str, np.ndarray] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != dim + 1:
            raise ValueError(
                f"{path}:{lineno}: expected {dim} values, got {len(parts) - 1}")
        vec = np.array([float(v) for v in parts[1:]], dtype=np.float64)
        if not np.any(vec):
            raise ValueError(f"{path}:{lineno}: zero vector not admitted")
        vocabulary[parts[0]] = vec
    if len(vocabulary) != vocab_size:
        logger.warning("header declared %d words, parsed %d",
                       vocab_size, len(vocabulary))
    return WordVectors(dim=dim, vocabulary=vocabulary)


def similarity(r: np.ndarray, w: np.ndarray) -> float:
    """Cosine similarity: the normalized dot product of the two vectors."""
    nr, nw = np.linalg.norm(r), np.linalg.norm(w)
    if nr == 0.0 or nw == 0.0:
        raise ValueError("cosine similarity undefined for zero vectors")
    return float(np.dot(r, w) / (nr * nw))


def term_vector(term: str, vectors: WordVectors) -> np.ndarray | None:
    """Vector for a term: direct lookup, or the mean over component words.

    Returns None when no component word is in the vocabulary.
    """
    direct = vectors.vocabulary.get(term)
    if direct is not None:
        return direct
    parts = [vectors.vocabulary[w] for w in term.split(" ")
             if w in vectors.vocabulary]
    if not parts:
        return None
    return np.mean(parts, axis=0)


def rank_candidates(seed_term: str, category: str, vectors: WordVectors,
                    k: int, min_sim: float,
                    excluded: set[str]) -> ExpansionResult | None:
    """Top-k vocabulary words by similarity to one seed term.

    The seed's own component words and any word in `excluded` are skipped.
    Returns None when the seed has no vector.
    """
    vec = term_vector(seed_term, vectors)
    if vec is None:
        logger.warning("seed term %r has no vector; skipped", seed_term)
        return None
    own = set(seed_term.split(" ")) | {seed_term}
    scored = [(word, similarity(vec, wvec))
              for word, wvec in vectors.vocabulary.items()
              if word not in own and word not in excluded]
    scored = [(w, s) for w, s in scored if s >= min_sim]
    scored.sort(key=lambda ws: (-ws[1], ws[0]))
    return ExpansionResult(category=category, seed_term=seed_term,
                           candidates=scored[:k])


def expand_taxonomy(taxonomy: RiskTaxonomy, vectors: WordVectors,
                    k: int = DEFAULT_TOP_K,
                    min_sim: float = DEFAULT_MIN_SIM,
                    ) -> tuple[RiskTaxonomy, dict]:
    """Add vector-similar terms to every category, tagged origin=expanded.

    Per-seed candidate lists are merged per category, deduplicated keeping
    the highest similarity, and appended in term order. The report maps each
    category to its added terms with similarity and nearest seed.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    categories: dict[str, list[RiskTerm]] = {}
    report: dict[str, list[dict]] = {}
    for category, terms in taxonomy.categories.items():
        existing = {t.text for t in terms}
        best: dict[str, tuple[float, str]] = {}  # word -> (sim, nearest seed)
        for term in terms:
            if term.origin != "seed":
                continue
            result = rank_candidates(term.text, category, vectors,
                                     k, min_sim, excluded=existing)
            if result is None:
                continue
            for word, sim in result.candidates:
                cur = best.get(word)
                if cur is None or (sim, ) > (cur[0], ) or \
                        (sim == cur[0] and term.text < cur[1]):
                    best[word] = (sim, term.text)
        added = sorted(best.items())
        categories[category] = list(terms) + [
            RiskTerm(text=word, origin=EXPANDED, similarity=sim)
            for word, (sim, _) in added]
        report[category] = [
            {"term": word, "similarity": sim, "nearest_seed": seed}
            for word, (sim, seed) in added]
    return RiskTaxonomy(categories=categories), report


@dataclass
class SenseLexicon:
    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for word, count in self.counts.items():
            if count < 1:
                raise ValueError(f"sense count for {word!r} must be >= 1")

    def sense_count(self, word: str) -> int:
        # out-of-lexicon words are treated as monosemous
        return self.counts.get(word, 1)


def load_sense_lexicon(path: str | Path) -> SenseLexicon:
    """Load a word<TAB>count TSV; '#' lines are comments."""
    counts: dict[str, int] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, _, count = line.partition("\t")
        counts[word] = int(count)
    return SenseLexicon(counts=counts)


def polysemy_average(terms: list[str], lexicon: SenseLexicon) -> float:
    """Mean sense count over every word of every term in the set."""
    words = [w for term in terms for w in term.split(" ")]
    if not words:
        raise ValueError("term list is empty")
    return sum(lexicon.sense_count(w) for w in words) / len(words)


def polysemy_increase(seed_terms: list[str], expanded_terms: list[str],
                      lexicon: SenseLexicon) -> tuple[float, float, float]:
    """Seed mean, expanded mean, and percentage increase between them."""
    seed_mean = polysemy_average(seed_terms, lexicon)
    expanded_mean = polysemy_average(expanded_terms, lexicon)
    pct = (expanded_mean - seed_mean) / seed_mean * 100.0
    return seed_mean, expanded_mean, pct
