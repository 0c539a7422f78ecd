"""Document ingestion: tokenization, lemmatization, sentence segmentation.

Everything here is deterministic and rule-based so that the same raw text
always produces the same Document, and the same normalization can be applied
to taxonomy terms and entity names.
"""

from __future__ import annotations

import json
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

logger = logging.getLogger(__name__)

# A token is either a word (letters/digits, with internal apostrophes or
# hyphens) or a single non-space punctuation character.
_TOKEN_RE = re.compile(r"\w+(?:['’-]\w+)*|[^\w\s]")

_SENTENCE_FINAL = {".", "!", "?"}

# Consonants that undouble after stripping -ing/-ed (running -> run).
_DOUBLING = set("bdfgklmnprtv")


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    index: int
    sentence_index: int
    char_start: int
    char_end: int


@dataclass(frozen=True)
class Sentence:
    index: int
    token_start: int  # inclusive
    token_end: int    # inclusive


@dataclass
class Document:
    id: str
    raw: str
    tokens: list[Token]
    sentences: list[Sentence]
    _lemma_index: dict[str, list[int]] | None = field(
        default=None, repr=False, compare=False)

    def lemma_positions(self) -> dict[str, list[int]]:
        """Map each lemma to its ascending token positions (cached)."""
        if self._lemma_index is None:
            index: dict[str, list[int]] = {}
            for tok in self.tokens:
                index.setdefault(tok.lemma, []).append(tok.index)
            self._lemma_index = index
        return self._lemma_index

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "raw": self.raw,
            "tokens": [[t.surface, t.lemma, t.index, t.sentence_index,
                        t.char_start, t.char_end] for t in self.tokens],
            "sentences": [[s.index, s.token_start, s.token_end]
                          for s in self.sentences],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Document":
        tokens = [Token(*row) for row in data["tokens"]]
        sentences = [Sentence(*row) for row in data["sentences"]]
        return cls(id=data["id"], raw=data["raw"],
                   tokens=tokens, sentences=sentences)


def tokenize(raw: str) -> list[tuple[str, int, int]]:
    """Split text into (surface, char_start, char_end) spans.

    Words keep internal apostrophes/hyphens; every other non-space character
    becomes its own token. Empty input yields an empty list.
    """
    return [(m.group(), m.start(), m.end()) for m in _TOKEN_RE.finditer(raw)]


def lemmatize(surface: str, lexicon: dict[str, str] | None = None) -> str:
    """Normalize a surface form to its lemma.

    Order of precedence: lexicon lookup on the lowercased surface, then a
    small suffix-rule fallback (plural -s/-es, -ing, -ed with doubled-final-
    consonant repair), then the lowercased surface unchanged.
    """
    lower = surface.lower()
    if lexicon:
        hit = lexicon.get(lower)
        if hit:
            return hit
    for rule in (_strip_es, _strip_ing, _strip_ed, _strip_s):
        stem = rule(lower)
        if stem is not None:
            return stem
    return lower


def _strip_es(word: str) -> str | None:
    if len(word) >= 5 and word.endswith("es"):
        stem = word[:-2]
        if stem.endswith(("s", "x", "z", "ch", "sh")):
            return stem
    return None


def _strip_s(word: str) -> str | None:
    if len(word) >= 4 and word.endswith("s") and \
            not word.endswith(("ss", "us", "is")):
        return word[:-1]
    return None


def _strip_ing(word: str) -> str | None:
    if len(word) >= 6 and word.endswith("ing"):
        return _undouble(word[:-3])
    return None


def _strip_ed(word: str) -> str | None:
    if len(word) >= 5 and word.endswith("ed"):
        return _undouble(word[:-2])
    return None


def _undouble(stem: str) -> str:
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] in _DOUBLING:
        return stem[:-1]
    return stem


def segment_sentences(spans: list[tuple[str, int, int]]) -> list[Sentence]:
    """Partition token spans into sentences.

    A boundary falls after sentence-final punctuation (. ! ?) whenever the
    next token starts with an uppercase letter. The trailing run of tokens
    always forms the final sentence, so the ranges cover [0, len(spans)).
    """
    if not spans:
        return []
    sentences: list[Sentence] = []
    start = 0
    for i, (surface, _, _) in enumerate(spans):
        is_last = i == len(spans) - 1
        boundary = is_last or (
            surface in _SENTENCE_FINAL and spans[i + 1][0][:1].isupper())
        if boundary:
            sentences.append(Sentence(len(sentences), start, i))
            start = i + 1
    return sentences


def preprocess(doc_id: str, raw: str,
               lexicon: dict[str, str] | None = None) -> Document:
    """Tokenize, segment, and lemmatize raw text into a Document."""
    spans = tokenize(raw)
    sentences = segment_sentences(spans)
    sent_of: list[int] = []
    for sent in sentences:
        sent_of.extend([sent.index] * (sent.token_end - sent.token_start + 1))
    tokens = [
        Token(surface=s, lemma=lemmatize(s, lexicon), index=i,
              sentence_index=sent_of[i], char_start=cs, char_end=ce)
        for i, (s, cs, ce) in enumerate(spans)
    ]
    return Document(id=doc_id, raw=raw, tokens=tokens, sentences=sentences)


def normalize_term(text: str, lexicon: dict[str, str] | None = None) -> str:
    """Normalize a term or entity name the same way document text is.

    Tokenizes, lemmatizes every token, and joins with single spaces, so that
    term matching reduces to lemma-sequence equality.
    """
    return " ".join(lemmatize(s, lexicon) for s, _, _ in tokenize(text))


def load_lexicon(path: str | Path) -> dict[str, str]:
    """Load a surface<TAB>lemma lookup table; '#' lines are comments."""
    lexicon: dict[str, str] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        surface, _, lemma = line.partition("\t")
        if surface and lemma:
            lexicon[surface.lower()] = lemma.strip().lower()
    return lexicon


@dataclass
class IngestResult:
    documents: list[Document]
    skipped_empty: int = 0
    malformed: int = 0


def ingest_corpus(source: str | Path,
                  lexicon: dict[str, str] | None = None,
                  threads: int = 1) -> IngestResult:
    """Read a corpus and preprocess every document.

    `source` is either a directory of .txt files (id = file stem) or a JSONL
    file with one {"id": ..., "text": ...} object per line. Documents whose
    body is empty or whitespace-only are skipped and counted; malformed JSONL
    records are skipped with a warning count. The output is sorted by
    document id regardless of worker scheduling.
    """
    source = Path(source)
    if not source.exists():
        raise FileNotFoundError(f"corpus source not found: {source}")

    records: list[tuple[str, str]] = []
    skipped = 0
    malformed = 0
    if source.is_dir():
        for path in sorted(source.glob("*.txt")):
            records.append((path.stem, path.read_text(encoding="utf-8")))
    else:
        for lineno, line in enumerate(
                source.read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                doc_id, text = obj["id"], obj["text"]
                if not isinstance(doc_id, str) or not isinstance(text, str):
                    raise TypeError("id and text must be strings")
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                logger.warning("skipping malformed record at line %d: %s",
                               lineno, exc)
                malformed += 1
                continue
            records.append((doc_id, text))

    kept = []
    for doc_id, text in records:
        if not text.strip():
            skipped += 1
        else:
            kept.append((doc_id, text))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            docs = list(pool.map(
                lambda r: preprocess(r[0], r[1], lexicon), kept))
    else:
        docs = [preprocess(doc_id, text, lexicon) for doc_id, text in kept]

    docs.sort(key=lambda d: d.id)
    return IngestResult(documents=docs, skipped_empty=skipped,
                        malformed=malformed)
