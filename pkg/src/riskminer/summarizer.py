"""Summary composition: ranked extract selection and specificity alternation.

Extract pools are ranked by keyword frequency then shortest distance.
Selection walks the ranked list under a hard word budget, taking at most one
extract per keyword per round; when only the keyword constraint blocks
progress the round resets and the residual pool is reranked. The alternating
systems cycle selection between the expanded (general) and seed (specific)
pools to shape the summary's specificity flow.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .matcher import Extract

logger = logging.getLogger(__name__)

SYSTEM_SEED = "Seed"
SYSTEM_EXPANDED = "Expanded"
SYSTEM_MIXED_THIRDS = "MixedThirds"
SYSTEM_ALTERNATE_THIRDS = "AlternateThirds"
SYSTEM_BASELINE = "Baseline"
COMPOSED_SYSTEMS = (SYSTEM_SEED, SYSTEM_EXPANDED,
                    SYSTEM_MIXED_THIRDS, SYSTEM_ALTERNATE_THIRDS)

DEFAULT_WORD_LIMIT = 100


@dataclass
class SummaryConfig:
    word_limit: int = DEFAULT_WORD_LIMIT
    system: str = SYSTEM_ALTERNATE_THIRDS
    random_seed: int = 0

    def __post_init__(self):
        if self.word_limit <= 0:
            raise ValueError("word_limit must be positive")


@dataclass
class Summary:
    entity: str
    category: str
    system: str
    selections: list[Extract] = field(default_factory=list)

    @property
    def word_count(self) -> int:
        return sum(e.word_count for e in self.selections)

    @property
    def origin_sequence(self) -> list[str]:
        return [e.origin for e in self.selections]

    @property
    def text(self) -> str:
        return " ".join(e.text for e in self.selections)


def rank_extracts(extracts: list[Extract]) -> list[Extract]:
    """Sort a deduped pool by (keyword frequency desc, distance asc,
    doc_id asc, keyword_loc asc), frequencies counted within the pool."""
    freq: dict[str, int] = {}
    for ext in extracts:
        freq[ext.keyword_text] = freq.get(ext.keyword_text, 0) + 1
    return sorted(extracts, key=lambda e: (
        -freq[e.keyword_text], e.distance, e.match.doc_id,
        e.match.keyword_loc))


def _first_eligible(pool: list[Extract], used_keywords: set[str],
                    budget_left: int) -> Extract | None:
    for ext in pool:
        if ext.keyword_text not in used_keywords and \
                ext.word_count <= budget_left:
            return ext
    return None


def _any_fits(pool: list[Extract], budget_left: int) -> bool:
    return any(e.word_count <= budget_left for e in pool)


def select_extracts(pool: list[Extract], config: SummaryConfig,
                    entity: str = "", category: str = "") -> Summary:
    """Fill the word budget from one ranked pool.

    Each round takes at most one extract per keyword, in rank order,
    skipping extracts that would overflow the budget. A round blocked only
    by keyword repeats resets the keyword set and reranks the residual pool;
    selection ends when nothing remaining fits the budget.
    """
    summary = Summary(entity=entity, category=category, system=config.system)
    if not pool:
        logger.warning("empty extract pool for %s/%s", entity, category)
        return summary
    residual = rank_extracts(pool)
    used: set[str] = set()
    words = 0
    while residual:
        for ext in list(residual):
            if ext.keyword_text in used:
                continue
            if words + ext.word_count > config.word_limit:
                continue
            summary.selections.append(ext)
            used.add(ext.keyword_text)
            words += ext.word_count
            residual.remove(ext)
        if not _any_fits(residual, config.word_limit - words):
            break
        # only the keyword constraint blocks further progress: new round
        used = set()
        residual = rank_extracts(residual)
    return summary


def compose_summary(seed_pool: list[Extract], expanded_pool: list[Extract],
                    config: SummaryConfig, entity: str = "",
                    category: str = "") -> Summary:
    """Compose a summary under one of the four non-random systems.

    Seed and Expanded draw from a single pool. MixedThirds takes slot one
    from the expanded pool and every later slot from the seed pool;
    AlternateThirds cycles expanded, seed, expanded, ... Slots share one
    keyword set and one word budget; a slot whose designated pool has no
    eligible extract falls through to the other pool.
    """
    if config.system == SYSTEM_SEED:
        return select_extracts(seed_pool, config, entity, category)
    if config.system == SYSTEM_EXPANDED:
        return select_extracts(expanded_pool, config, entity, category)
    if config.system == SYSTEM_MIXED_THIRDS:
        pattern = lambda slot: "expanded" if slot == 0 else "seed"
    elif config.system == SYSTEM_ALTERNATE_THIRDS:
        pattern = lambda slot: "expanded" if slot % 2 == 0 else "seed"
    else:
        raise ValueError(f"unknown system: {config.system!r}")

    pools = {"seed": rank_extracts(seed_pool),
             "expanded": rank_extracts(expanded_pool)}
    summary = Summary(entity=entity, category=category, system=config.system)
    if not pools["seed"] and not pools["expanded"]:
        logger.warning("both pools empty for %s/%s", entity, category)
        return summary
    used: set[str] = set()
    words = 0
    slot = 0
    while True:
        budget_left = config.word_limit - words
        want = pattern(slot)
        other = "seed" if want == "expanded" else "expanded"
        src = want
        pick = _first_eligible(pools[want], used, budget_left)
        if pick is None:
            src = other
            pick = _first_eligible(pools[other], used, budget_left)
        if pick is None:
            if _any_fits(pools["seed"], budget_left) or \
                    _any_fits(pools["expanded"], budget_left):
                used = set()
                pools = {k: rank_extracts(v) for k, v in pools.items()}
                continue
            break
        pools[src].remove(pick)
        summary.selections.append(pick)
        used.add(pick.keyword_text)
        words += pick.word_count
        slot += 1
    return summary


_MASK64 = (1 << 64) - 1


class Xorshift64Star:
    """xorshift64* PRNG with splitmix64 seeding.

    next() applies x ^= x >> 12; x ^= x << 25; x ^= x >> 27 (64-bit) and
    returns (x * 0x2545F4914F6CDD1D) mod 2**64. The seed runs through one
    splitmix64 round so seed 0 is usable. Fixed so selection traces can be
    reproduced outside this codebase.
    """

    def __init__(self, seed: int):
        z = (seed + 0x9E3779B97F4A7C15) & _MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        self.state = (z ^ (z >> 31)) or 0x9E3779B97F4A7C15

    def next(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & _MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & _MASK64

    def choice_index(self, n: int) -> int:
        return self.next() % n


def baseline_random(pool: list[Extract], config: SummaryConfig,
                    entity: str = "", category: str = "") -> Summary:
    """Uniform random selection without replacement until the budget is hit.

    Each draw is uniform over the remaining extracts that still fit the
    budget, using the documented seeded generator, so a given seed always
    produces the same summary.
    """
    summary = Summary(entity=entity, category=category,
                      system=SYSTEM_BASELINE)
    rng = Xorshift64Star(config.random_seed)
    remaining = list(pool)
    words = 0
    while True:
        fits = [e for e in remaining
                if words + e.word_count <= config.word_limit]
        if not fits:
            break
        pick = fits[rng.choice_index(len(fits))]
        remaining.remove(pick)
        summary.selections.append(pick)
        words += pick.word_count
    return summary
