"""Risk mining and specificity-alternating extractive summarization."""

from .corpus import (Document, IngestResult, Sentence, Token, ingest_corpus,
                     lemmatize, load_lexicon, normalize_term, preprocess,
                     segment_sentences, tokenize)
from .expansion import (ExpansionResult, SenseLexicon, WordVectors,
                        expand_taxonomy, load_sense_lexicon, load_vectors,
                        polysemy_average, polysemy_increase, rank_candidates,
                        similarity, term_vector)
from .graph_rank import (ExtractGraph, RankScores, graph_summary,
                         lexrank_weights, pagerank, textrank_weights)
from .matcher import (ComplexityEstimate, Extract, Match, dedupe,
                      estimate_complexity, extract_stats, mine_documents,
                      pair_entities_keywords, retrieve_span)
from .metrics import (AnnotationPairs, EvaluationReport, PreferenceCounts,
                      Score, bleu4, cohens_kappa, evaluate_summary,
                      preference_chi_square, rouge_l, rouge_n, rouge_su4)
from .summarizer import (Summary, SummaryConfig, Xorshift64Star,
                         baseline_random, compose_summary, rank_extracts,
                         select_extracts)
from .taxonomy import (EntitySet, RiskTaxonomy, RiskTerm,
                       find_term_locations, load_entities, load_taxonomy,
                       save_taxonomy)

__version__ = "0.1.0"
