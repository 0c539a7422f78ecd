"""Summary evaluation metrics and annotation agreement statistics."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

BLEU_EPSILON = 1e-9
SKIP_GAP = 4  # max intervening tokens in a skip-bigram

# (annotator1 label, annotator2 label) per double-annotated item
AnnotationPairs = list[tuple[str, str]]


def metric_tokens(text: str) -> list[str]:
    """Lowercased, punctuation-stripped whitespace tokens."""
    tokens = []
    for word in text.lower().split():
        stripped = "".join(ch for ch in word if ch.isalnum())
        if stripped:
            tokens.append(stripped)
    return tokens


@dataclass(frozen=True)
class Score:
    precision: float
    recall: float
    f1: float


@dataclass
class EvaluationReport:
    rouge1_f1: float
    rouge2_f1: float
    rougeL_f1: float
    rougeSU4_f1: float
    bleu4: float
    per_reference: list[dict] = field(default_factory=list)


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _prf(overlap: int, cand_total: int, ref_total: int) -> Score:
    p = overlap / cand_total if cand_total else 0.0
    r = overlap / ref_total if ref_total else 0.0
    return Score(p, r, _f1(p, r))


def _mean_scores(scores: list[Score]) -> Score:
    n = len(scores)
    return Score(sum(s.precision for s in scores) / n,
                 sum(s.recall for s in scores) / n,
                 sum(s.f1 for s in scores) / n)


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n])
                   for i in range(len(tokens) - n + 1))


def rouge_n(candidate: str, references: list[str], n: int) -> Score:
    """Clipped n-gram overlap, averaged over references."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not references:
        raise ValueError("at least one reference is required")
    cand = _ngrams(metric_tokens(candidate), n)
    scores = []
    for ref_text in references:
        ref = _ngrams(metric_tokens(ref_text), n)
        overlap = sum((cand & ref).values())
        scores.append(_prf(overlap, sum(cand.values()), sum(ref.values())))
    return _mean_scores(scores)


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y
                       else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(candidate: str, references: list[str]) -> Score:
    """Longest-common-subsequence overlap, averaged over references."""
    if not references:
        raise ValueError("at least one reference is required")
    cand = metric_tokens(candidate)
    scores = []
    for ref_text in references:
        ref = metric_tokens(ref_text)
        lcs = _lcs_length(cand, ref)
        scores.append(_prf(lcs, len(cand), len(ref)))
    return _mean_scores(scores)


def _su_units(tokens: list[str], gap: int = SKIP_GAP) -> Counter:
    """Unigrams plus skip-bigrams with at most `gap` intervening tokens."""
    units = Counter(("u", t) for t in tokens)
    for i in range(len(tokens)):
        for j in range(i + 1, min(i + gap + 2, len(tokens))):
            units[("b", tokens[i], tokens[j])] += 1
    return units


def rouge_su4(candidate: str, references: list[str]) -> Score:
    """Skip-bigram (gap <= 4) plus unigram overlap, averaged over references."""
    if not references:
        raise ValueError("at least one reference is required")
    cand = _su_units(metric_tokens(candidate))
    scores = []
    for ref_text in references:
        ref = _su_units(metric_tokens(ref_text))
        overlap = sum((cand & ref).values())
        scores.append(_prf(overlap, sum(cand.values()), sum(ref.values())))
    return _mean_scores(scores)


def bleu4(candidate: str, references: list[str]) -> float:
    """Geometric mean of modified 1..4-gram precisions times brevity penalty.

    Zero precision counts are replaced by a small epsilon so short summaries
    without any 4-gram overlap still score above zero. The brevity penalty
    uses the reference whose length is closest to the candidate (ties go to
    the shorter reference).
    """
    if not references:
        raise ValueError("at least one reference is required")
    cand = metric_tokens(candidate)
    refs = [metric_tokens(r) for r in references]
    if not cand:
        return 0.0
    log_sum = 0.0
    for n in range(1, 5):
        cand_grams = _ngrams(cand, n)
        total = sum(cand_grams.values())
        if total == 0:
            log_sum += math.log(BLEU_EPSILON)
            continue
        max_ref = Counter()
        for ref in refs:
            max_ref |= _ngrams(ref, n)
        clipped = sum((cand_grams & max_ref).values())
        log_sum += math.log(max(clipped / total, BLEU_EPSILON))
    precision_term = math.exp(log_sum / 4.0)
    ref_len = min((abs(len(r) - len(cand)), len(r)) for r in refs)[1]
    bp = 1.0 if len(cand) >= ref_len else math.exp(1.0 - ref_len / len(cand))
    return bp * precision_term


def evaluate_summary(candidate: str, references: list[str]) -> EvaluationReport:
    """All intrinsic metrics for one candidate against its references."""
    per_reference = []
    for ref in references:
        per_reference.append({
            "rouge1_f1": rouge_n(candidate, [ref], 1).f1,
            "rouge2_f1": rouge_n(candidate, [ref], 2).f1,
            "rougeL_f1": rouge_l(candidate, [ref]).f1,
            "rougeSU4_f1": rouge_su4(candidate, [ref]).f1,
            "bleu4": bleu4(candidate, [ref]),
        })
    n = len(per_reference)
    mean = {k: sum(row[k] for row in per_reference) / n
            for k in per_reference[0]}
    return EvaluationReport(per_reference=per_reference, **mean)


@dataclass(frozen=True)
class PreferenceCounts:
    prefer_system: int
    prefer_human: int

    def __post_init__(self):
        if self.prefer_system < 0 or self.prefer_human < 0:
            raise ValueError("counts must be non-negative")


def preference_chi_square(counts: PreferenceCounts,
                          yates: bool = False) -> float:
    """Pearson's chi-square (d.f.=1) against a 50/50 preference null."""
    a, b = counts.prefer_system, counts.prefer_human
    total = a + b
    if total == 0:
        raise ValueError("total preference count must be positive")
    diff = abs(a - b)
    if yates:
        diff = max(diff - 1.0, 0.0)
    return diff * diff / total


def cohens_kappa(pairs: list[tuple[str, str]]) -> float:
    """Cohen's kappa over double-annotated items.

    Expected agreement is the product of the two annotators' marginal label
    distributions. Degenerate marginals (expected agreement 1) yield kappa 1
    under perfect agreement and are an error otherwise.
    """
    if not pairs:
        raise ValueError("at least one annotation pair is required")
    n = len(pairs)
    observed = sum(1 for a, b in pairs if a == b) / n
    labels = {lab for pair in pairs for lab in pair}
    m1 = Counter(a for a, _ in pairs)
    m2 = Counter(b for _, b in pairs)
    expected = sum((m1[lab] / n) * (m2[lab] / n) for lab in labels)
    if expected == 1.0:
        if observed == 1.0:
            return 1.0
        raise ValueError("kappa undefined: chance agreement is 1")
    return (observed - expected) / (1.0 - expected)
