"""Scikit-learn compatible wrappers around the pipeline stages.

These transformers let the preprocessing, mining, expansion, and
summarization stages compose with sklearn pipelines and parameter search;
each is a thin layer over the functional core.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .corpus import Document, preprocess
from .expansion import (DEFAULT_MIN_SIM, DEFAULT_TOP_K, WordVectors,
                        expand_taxonomy)
from .matcher import DEFAULT_CUTOFF, Extract, mine_documents
from .summarizer import (COMPOSED_SYSTEMS, DEFAULT_WORD_LIMIT, SYSTEM_BASELINE,
                         Summary, SummaryConfig, baseline_random,
                         compose_summary)
from .taxonomy import EntitySet, RiskTaxonomy


class CorpusPreprocessor(BaseEstimator, TransformerMixin):
    """Transforms (doc_id, raw_text) pairs into preprocessed Documents."""

    def __init__(self, lexicon=None):
        self.lexicon = lexicon

    def fit(self, X, y=None):
        return self

    def transform(self, X) -> list[Document]:
        return [preprocess(doc_id, text, self.lexicon) for doc_id, text in X]


class RiskExtractMiner(BaseEstimator, TransformerMixin):
    """Transforms Documents into deduped extract pools per (entity, category)."""

    def __init__(self, taxonomy: RiskTaxonomy = None,
                 entities: EntitySet = None, cutoff: int = DEFAULT_CUTOFF,
                 threads: int = 1):
        self.taxonomy = taxonomy
        self.entities = entities
        self.cutoff = cutoff
        self.threads = threads

    def fit(self, X, y=None):
        return self

    def transform(self, X: list[Document]) -> dict[tuple[str, str], list[Extract]]:
        if self.taxonomy is None or self.entities is None:
            raise ValueError("taxonomy and entities must be set")
        return mine_documents(X, self.taxonomy, self.entities,
                              cutoff=self.cutoff, threads=self.threads)


class TaxonomyExpander(BaseEstimator, TransformerMixin):
    """Fits on word vectors, transforms a seed taxonomy into an expanded one."""

    def __init__(self, k: int = DEFAULT_TOP_K,
                 min_sim: float = DEFAULT_MIN_SIM):
        self.k = k
        self.min_sim = min_sim

    def fit(self, X: WordVectors, y=None):
        self.vectors_ = X
        return self

    def transform(self, X: RiskTaxonomy) -> RiskTaxonomy:
        if not hasattr(self, "vectors_"):
            raise NotFittedError("fit on WordVectors before transforming")
        expanded, self.report_ = expand_taxonomy(
            X, self.vectors_, k=self.k, min_sim=self.min_sim)
        return expanded


class ExtractSummarizer(BaseEstimator):
    """Predicts a Summary from (seed_pool, expanded_pool) extract pairs."""

    def __init__(self, system: str = "AlternateThirds",
                 word_limit: int = DEFAULT_WORD_LIMIT, random_seed: int = 0):
        self.system = system
        self.word_limit = word_limit
        self.random_seed = random_seed

    def fit(self, X, y=None):
        return self

    def predict(self, X) -> list[Summary]:
        config = SummaryConfig(word_limit=self.word_limit,
                               system=self.system,
                               random_seed=self.random_seed)
        summaries = []
        for seed_pool, expanded_pool in X:
            if self.system in COMPOSED_SYSTEMS:
                summaries.append(compose_summary(
                    seed_pool, expanded_pool, config))
            elif self.system == SYSTEM_BASELINE:
                summaries.append(baseline_random(
                    list(seed_pool) + list(expanded_pool), config))
            else:
                raise ValueError(f"unknown system: {self.system!r}")
        return summaries
