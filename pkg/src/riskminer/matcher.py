"""Entity-keyword pairing by bidirectional token distance.

For every instance of every risk keyword, the nearest instance of every
entity is considered (before or after the keyword equally); the keyword
instance then commits to its single closest entity, and matches beyond the
distance cutoff are discarded. Context spans cover the sentences of both
anchors.
"""

from __future__ import annotations

import statistics
from bisect import bisect_left
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .corpus import Document
from .taxonomy import EntitySet, RiskTaxonomy, RiskTerm, find_term_locations

DEFAULT_CUTOFF = 100


@dataclass(frozen=True)
class Match:
    doc_id: str
    category: str
    keyword: RiskTerm
    entity: str
    keyword_loc: int
    entity_loc: int
    distance: int


@dataclass(frozen=True)
class Extract:
    match: Match
    sentence_start: int
    sentence_end: int
    text: str
    word_count: int
    origin: str

    @property
    def distance(self) -> int:
        return self.match.distance

    @property
    def keyword_text(self) -> str:
        return self.match.keyword.text

    @property
    def extract_id(self) -> str:
        m = self.match
        return f"{m.doc_id}:{m.keyword_loc}:{m.entity_loc}"


@dataclass(frozen=True)
class ComplexityEstimate:
    keyword_terms: int            # i: keyword terms across all categories
    keyword_mean_instances: float  # a: mean instances of each keyword per doc
    entity_count: int             # j: entities provided
    entity_mean_instances: float  # b: mean instances of each entity per doc

    @property
    def predicted_comparisons(self) -> float:
        return (self.keyword_terms * self.keyword_mean_instances
                * self.entity_count * self.entity_mean_instances)


def _nearest(locs: list[int], target: int) -> int:
    """Closest location to target; equal distances prefer the preceding one."""
    i = bisect_left(locs, target)
    if i == 0:
        return locs[0]
    if i == len(locs):
        return locs[-1]
    before, after = locs[i - 1], locs[i]
    # tie goes to the preceding instance
    return before if target - before <= after - target else after


def pair_entities_keywords(doc: Document, taxonomy: RiskTaxonomy,
                           entities: EntitySet,
                           cutoff: int = DEFAULT_CUTOFF) -> list[Match]:
    """Pair each keyword instance with its globally nearest entity instance.

    Ties between the entity instance before and after a keyword go to the
    preceding instance; ties between different entities at equal distance go
    to the alphabetically first entity name. Matches with distance beyond
    the cutoff are dropped.
    """
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    entity_locs = {
        name: locs
        for name in sorted(entities.entities)
        if (locs := find_term_locations(doc, name))
    }
    matches: list[Match] = []
    if not entity_locs:
        return matches
    for category, terms in taxonomy.categories.items():
        for term in terms:
            for kloc in find_term_locations(doc, term.text):
                best_entity = None
                best_eloc = -1
                best_dist = -1
                for name, locs in entity_locs.items():
                    eloc = _nearest(locs, kloc)
                    dist = abs(eloc - kloc)
                    if best_entity is None or dist < best_dist:
                        best_entity, best_eloc, best_dist = name, eloc, dist
                if best_dist <= cutoff:
                    matches.append(Match(
                        doc_id=doc.id, category=category, keyword=term,
                        entity=best_entity, keyword_loc=kloc,
                        entity_loc=best_eloc, distance=best_dist))
    return matches


def _is_word(surface: str) -> bool:
    return any(ch.isalnum() for ch in surface)


def retrieve_span(doc: Document, match: Match) -> Extract:
    """Retrieve the contiguous sentence span covering both anchors."""
    lo = min(match.keyword_loc, match.entity_loc)
    hi = max(match.keyword_loc, match.entity_loc)
    s_start = doc.tokens[lo].sentence_index
    s_end = doc.tokens[hi].sentence_index
    t_start = doc.sentences[s_start].token_start
    t_end = doc.sentences[s_end].token_end
    text = doc.raw[doc.tokens[t_start].char_start:doc.tokens[t_end].char_end]
    word_count = sum(1 for t in doc.tokens[t_start:t_end + 1]
                     if _is_word(t.surface))
    return Extract(match=match, sentence_start=s_start, sentence_end=s_end,
                   text=text, word_count=word_count, origin=match.keyword.origin)


def dedupe(extracts: list[Extract]) -> list[Extract]:
    """Keep one extract per distinct text: the lowest-distance version.

    Ties break by lower doc_id, then lower keyword location. Survivors keep
    their original relative order.
    """
    best: dict[str, Extract] = {}
    for ext in extracts:
        cur = best.get(ext.text)
        if cur is None or _dedupe_key(ext) < _dedupe_key(cur):
            best[ext.text] = ext
    survivors = set(map(id, best.values()))
    return [ext for ext in extracts if id(ext) in survivors]


def _dedupe_key(ext: Extract):
    return (ext.distance, ext.match.doc_id, ext.match.keyword_loc)


def mine_documents(docs: list[Document], taxonomy: RiskTaxonomy,
                   entities: EntitySet, cutoff: int = DEFAULT_CUTOFF,
                   threads: int = 1) -> dict[tuple[str, str], list[Extract]]:
    """Run pairing + span retrieval over a corpus, grouped and deduped.

    Returns deduped extract pools keyed by (entity, category). Per-document
    work fans out to `threads` workers; the merge is sorted so the result is
    independent of scheduling.
    """
    def mine_one(doc: Document) -> list[Extract]:
        return [retrieve_span(doc, m)
                for m in pair_entities_keywords(doc, taxonomy, entities, cutoff)]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_doc = list(pool.map(mine_one, docs))
    else:
        per_doc = [mine_one(doc) for doc in docs]

    merged = [ext for group in per_doc for ext in group]
    merged.sort(key=lambda e: (e.match.doc_id, e.match.keyword_loc,
                               e.match.entity_loc, e.match.category,
                               e.keyword_text))
    pools: dict[tuple[str, str], list[Extract]] = {}
    for ext in merged:
        pools.setdefault((ext.match.entity, ext.match.category), []).append(ext)
    return {key: dedupe(exts) for key, exts in sorted(pools.items())}


def estimate_complexity(taxonomy: RiskTaxonomy, entities: EntitySet,
                        docs: list[Document]) -> ComplexityEstimate:
    """Predict per-document comparison load from corpus instance counts."""
    n_docs = len(docs)
    term_texts = [t.text for _, t in taxonomy.terms()]
    kw_instances = sum(len(find_term_locations(doc, text))
                       for doc in docs for text in term_texts)
    ent_instances = sum(len(find_term_locations(doc, name))
                        for doc in docs for name in entities.entities)
    i, j = len(term_texts), len(entities.entities)
    a = kw_instances / (i * n_docs) if i and n_docs else 0.0
    b = ent_instances / (j * n_docs) if j and n_docs else 0.0
    return ComplexityEstimate(keyword_terms=i, keyword_mean_instances=a,
                              entity_count=j, entity_mean_instances=b)


def extract_stats(extracts: list[Extract]) -> dict[str, float]:
    """Multi-sentence fraction and distance mean/stddev for an extract set."""
    if not extracts:
        raise ValueError("extract list is empty")
    distances = [e.distance for e in extracts]
    multi = sum(1 for e in extracts if e.sentence_end > e.sentence_start)
    return {
        "multi_sentence_fraction": multi / len(extracts),
        "mean_distance": statistics.fmean(distances),
        "distance_stddev": statistics.pstdev(distances),
    }
