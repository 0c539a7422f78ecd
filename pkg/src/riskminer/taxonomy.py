"""Risk taxonomy and entity handling, plus in-document term location."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Document, normalize_term

logger = logging.getLogger(__name__)

SEED = "seed"
EXPANDED = "expanded"


@dataclass(frozen=True)
class RiskTerm:
    text: str
    origin: str = SEED
    similarity: float | None = None

    def __post_init__(self):
        if not self.text:
            raise ValueError("risk term text must be non-empty")
        if self.origin not in (SEED, EXPANDED):
            raise ValueError(f"unknown origin: {self.origin!r}")
        if self.origin == SEED and self.similarity is not None:
            raise ValueError("seed terms carry no similarity score")


@dataclass
class RiskTaxonomy:
    categories: dict[str, list[RiskTerm]] = field(default_factory=dict)

    def terms(self, origin: str | None = None) -> list[tuple[str, RiskTerm]]:
        """All (category, term) pairs, optionally filtered by origin."""
        return [(cat, term)
                for cat, terms in self.categories.items()
                for term in terms
                if origin is None or term.origin == origin]

    def term_count(self) -> int:
        return sum(len(terms) for terms in self.categories.values())


@dataclass
class EntitySet:
    entities: list[str]

    def __post_init__(self):
        if not self.entities:
            raise ValueError("entity set must be non-empty")
        if len(set(self.entities)) != len(self.entities):
            raise ValueError("entity set contains duplicates")


def load_taxonomy(path: str | Path,
                  lexicon: dict[str, str] | None = None) -> RiskTaxonomy:
    """Load a taxonomy JSON file, normalizing every term.

    Duplicate terms within a category are dropped with a warning; an empty
    category is an error.
    """
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    categories: dict[str, list[RiskTerm]] = {}
    for name, raw_terms in data["categories"].items():
        if not raw_terms:
            raise ValueError(f"category {name!r} has no terms")
        seen: set[str] = set()
        terms: list[RiskTerm] = []
        for entry in raw_terms:
            text = normalize_term(entry["text"], lexicon)
            origin = entry.get("origin", SEED)
            if text in seen:
                logger.warning("duplicate term %r in category %r dropped",
                               text, name)
                continue
            seen.add(text)
            terms.append(RiskTerm(
                text=text, origin=origin,
                similarity=entry.get("similarity")
                if origin == EXPANDED else None))
        categories[name] = terms
    return RiskTaxonomy(categories=categories)


def save_taxonomy(taxonomy: RiskTaxonomy, path: str | Path) -> None:
    data = {"categories": {
        cat: [_term_dict(t) for t in terms]
        for cat, terms in taxonomy.categories.items()}}
    Path(path).write_text(
        json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _term_dict(term: RiskTerm) -> dict:
    out: dict = {"text": term.text, "origin": term.origin}
    if term.similarity is not None:
        out["similarity"] = term.similarity
    return out


def load_entities(path: str | Path,
                  lexicon: dict[str, str] | None = None) -> EntitySet:
    """Load one entity name per line, normalized and deduplicated."""
    entities: list[str] = []
    seen: set[str] = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name = normalize_term(line, lexicon)
        if name and name not in seen:
            seen.add(name)
            entities.append(name)
    return EntitySet(entities=entities)


def find_term_locations(doc: Document, term_text: str) -> list[int]:
    """Token indices of the first token of each non-overlapping term match.

    The term must already be normalized; matching compares its lemma sequence
    against the document's lemmas, scanning left to right so overlapping
    candidates never both match. Locations are ascending.
    """
    lemmas = term_text.split(" ")
    first = lemmas[0]
    candidates = doc.lemma_positions().get(first, [])
    if len(lemmas) == 1:
        return list(candidates)
    locations: list[int] = []
    tokens = doc.tokens
    blocked_until = -1
    for pos in candidates:
        if pos <= blocked_until or pos + len(lemmas) > len(tokens):
            continue
        if all(tokens[pos + i].lemma == lemmas[i]
               for i in range(1, len(lemmas))):
            locations.append(pos)
            blocked_until = pos + len(lemmas) - 1
    return locations
