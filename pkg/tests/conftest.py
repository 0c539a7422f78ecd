"""Shared fixtures and oracle helpers."""

from pathlib import Path

import pytest

from riskminer.corpus import Document, preprocess
from riskminer.matcher import Extract, Match
from riskminer.taxonomy import (EntitySet, RiskTaxonomy, RiskTerm,
                                find_term_locations)

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def fixture_docs() -> list[Document]:
    docs = []
    for path in sorted((DATA / "corpus").glob("*.txt")):
        docs.append(preprocess(path.stem, path.read_text(encoding="utf-8")))
    return docs


def make_extract(text, keyword="kw", origin="seed", distance=0, doc_id="d1",
                 keyword_loc=0, entity="acme", entity_loc=None,
                 category="Legal", word_count=None, sentence_start=0,
                 sentence_end=0):
    """Build a standalone Extract without a backing document."""
    if entity_loc is None:
        entity_loc = keyword_loc + distance
    if word_count is None:
        word_count = len(text.split())
    match = Match(doc_id=doc_id, category=category,
                  keyword=RiskTerm(text=keyword, origin=origin,
                                   similarity=0.5 if origin == "expanded" else None),
                  entity=entity, keyword_loc=keyword_loc,
                  entity_loc=entity_loc,
                  distance=abs(entity_loc - keyword_loc))
    return Extract(match=match, sentence_start=sentence_start,
                   sentence_end=sentence_end, text=text,
                   word_count=word_count, origin=origin)


def brute_force_pairs(doc: Document, taxonomy: RiskTaxonomy,
                      entities: EntitySet, cutoff: int):
    """Exhaustive nearest-pair search over all location pairs.

    Independent of the production pairing path: enumerates every
    (keyword_loc, entity_loc) combination and minimizes by
    (distance, entity name, entity location).
    """
    results = set()
    for category, terms in taxonomy.categories.items():
        for term in terms:
            for kloc in find_term_locations(doc, term.text):
                candidates = [
                    (abs(eloc - kloc), name, eloc)
                    for name in entities.entities
                    for eloc in find_term_locations(doc, name)
                ]
                if not candidates:
                    continue
                dist, name, eloc = min(candidates)
                if dist <= cutoff:
                    results.add((category, term.text, kloc, name, eloc, dist))
    return results


def match_key(m: Match):
    return (m.category, m.keyword.text, m.keyword_loc, m.entity,
            m.entity_loc, m.distance)
