"""Command-line pipeline: ingest, expand, mine, summarize, evaluate, stats.

Every stage reads and writes plain text/JSON artifacts under the output
directory so intermediate results stay auditable, and every stage is
deterministic given its inputs and configuration (the random baseline via
the configured seed). Exit codes: 0 success, 1 runtime failure, 2
usage/config error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import re
import sys
from pathlib import Path

from . import corpus, expansion, graph_rank, matcher, summarizer, taxonomy

logger = logging.getLogger(__name__)

ALL_SYSTEMS = ("Seed", "Expanded", "MixedThirds", "AlternateThirds",
               "Baseline", "TextRank", "LexRank")

_DEFAULTS = {
    "cutoff": matcher.DEFAULT_CUTOFF,
    "word_limit": summarizer.DEFAULT_WORD_LIMIT,
    "k": expansion.DEFAULT_TOP_K,
    "min_sim": expansion.DEFAULT_MIN_SIM,
    "seed": 0,
    "threads": 1,
    "out": "out",
}


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--corpus")
    shared.add_argument("--taxonomy")
    shared.add_argument("--entities")
    shared.add_argument("--vectors")
    shared.add_argument("--senses")
    shared.add_argument("--cutoff", type=int)
    shared.add_argument("--word-limit", type=int, dest="word_limit")
    shared.add_argument("--k", type=int)
    shared.add_argument("--min-sim", type=float, dest="min_sim")
    shared.add_argument("--system", action="append", choices=ALL_SYSTEMS)
    shared.add_argument("--seed", type=int)
    shared.add_argument("--out")
    shared.add_argument("--threads", type=int)
    shared.add_argument("--config")

    parser = argparse.ArgumentParser(
        prog="riskminer",
        description="Risk mining and specificity-alternating summarization")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("ingest", parents=[shared])
    sub.add_parser("expand", parents=[shared])
    sub.add_parser("mine", parents=[shared])
    sub.add_parser("summarize", parents=[shared])
    ev = sub.add_parser("evaluate", parents=[shared])
    ev.add_argument("batch", help="JSONL of {summary_id, candidate_path, "
                                  "reference_paths}")
    sub.add_parser("stats", parents=[shared])
    return parser


def _load_config_file(path: str) -> dict:
    """Read key=value pairs; keys use flag names with '-' or '_'."""
    values = {}
    for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


_INT_KEYS = {"cutoff", "word_limit", "k", "seed", "threads"}
_FLOAT_KEYS = {"min_sim"}


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Apply precedence: command-line flags > config file > defaults."""
    file_values = _load_config_file(args.config) if args.config else {}
    for key, raw in file_values.items():
        if getattr(args, key, None) is not None:
            continue
        if key == "system":
            setattr(args, key, raw.split(","))
        elif key in _INT_KEYS:
            setattr(args, key, int(raw))
        elif key in _FLOAT_KEYS:
            setattr(args, key, float(raw))
        else:
            setattr(args, key, raw)
    for key, default in _DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, default)
    if getattr(args, "system", None) is None:
        args.system = list(ALL_SYSTEMS)
    for name in args.system:
        if name not in ALL_SYSTEMS:
            raise ValueError(f"unknown system: {name!r}")
    return args


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name)


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def cmd_ingest(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if not args.corpus:
        raise ValueError("--corpus is required for ingest")
    result = corpus.ingest_corpus(args.corpus, threads=args.threads)
    with (out / "corpus.jsonl").open("w", encoding="utf-8") as fh:
        for doc in result.documents:
            fh.write(json.dumps(doc.to_dict(), sort_keys=True) + "\n")
    _write_json(out / "ingest_stats.json", {
        "documents": len(result.documents),
        "skipped_empty": result.skipped_empty,
        "malformed": result.malformed,
    })
    print(f"ingested {len(result.documents)} documents "
          f"({result.skipped_empty} empty skipped, "
          f"{result.malformed} malformed)")
    return 0


def _load_cached_corpus(out: Path) -> list[corpus.Document]:
    cache = out / "corpus.jsonl"
    if not cache.exists():
        raise FileNotFoundError(
            f"{cache} not found; run the ingest stage first")
    return [corpus.Document.from_dict(json.loads(line))
            for line in cache.read_text(encoding="utf-8").splitlines()
            if line.strip()]


def cmd_expand(args) -> int:
    if not args.vectors:
        raise ValueError("--vectors is required for expand "
                         "(a text vector file: header 'vocab dim')")
    if not args.taxonomy:
        raise ValueError("--taxonomy is required for expand")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tax = taxonomy.load_taxonomy(args.taxonomy)
    vectors = expansion.load_vectors(args.vectors)
    expanded, report = expansion.expand_taxonomy(
        tax, vectors, k=args.k, min_sim=args.min_sim)
    taxonomy.save_taxonomy(expanded, out / "taxonomy_expanded.json")
    _write_json(out / "expansion_report.json", report)
    added = sum(len(v) for v in report.values())
    print(f"expanded taxonomy with {added} terms "
          f"-> {out / 'taxonomy_expanded.json'}")
    return 0


def cmd_mine(args) -> int:
    if not args.taxonomy or not args.entities:
        raise ValueError("--taxonomy and --entities are required for mine")
    out = Path(args.out)
    docs = _load_cached_corpus(out)
    tax = taxonomy.load_taxonomy(args.taxonomy)
    entities = taxonomy.load_entities(args.entities)
    pools = matcher.mine_documents(docs, tax, entities,
                                   cutoff=args.cutoff, threads=args.threads)
    extracts_dir = out / "extracts"
    extracts_dir.mkdir(parents=True, exist_ok=True)
    for stale in extracts_dir.glob("*.jsonl"):
        stale.unlink()
    total = []
    pair_counts = {}
    for (entity, category), exts in pools.items():
        path = extracts_dir / f"{_slug(entity)}__{_slug(category)}.jsonl"
        with path.open("w", encoding="utf-8") as fh:
            for ext in exts:
                fh.write(json.dumps(_extract_dict(ext), sort_keys=True) + "\n")
        pair_counts[f"{entity}/{category}"] = len(exts)
        total.extend(exts)
    stats = {
        "extracts": len(total),
        "pairs": pair_counts,
        "complexity": _complexity_dict(
            matcher.estimate_complexity(tax, entities, docs)),
    }
    if total:
        stats.update(matcher.extract_stats(total))
    else:
        logger.warning("no matches found")
    _write_json(out / "mine_stats.json", stats)
    print(f"mined {len(total)} extracts across {len(pools)} entity-risk pairs")
    return 0


def _extract_dict(ext: matcher.Extract) -> dict:
    m = ext.match
    return {
        "doc_id": m.doc_id, "category": m.category,
        "keyword": m.keyword.text, "entity": m.entity,
        "keyword_loc": m.keyword_loc, "entity_loc": m.entity_loc,
        "distance": m.distance, "sentence_start": ext.sentence_start,
        "sentence_end": ext.sentence_end, "origin": ext.origin,
        "text": ext.text, "word_count": ext.word_count,
    }


def _extract_from_dict(data: dict) -> matcher.Extract:
    term = taxonomy.RiskTerm(text=data["keyword"], origin=data["origin"])
    match = matcher.Match(
        doc_id=data["doc_id"], category=data["category"], keyword=term,
        entity=data["entity"], keyword_loc=data["keyword_loc"],
        entity_loc=data["entity_loc"], distance=data["distance"])
    return matcher.Extract(
        match=match, sentence_start=data["sentence_start"],
        sentence_end=data["sentence_end"], text=data["text"],
        word_count=data["word_count"], origin=data["origin"])


def _complexity_dict(est: matcher.ComplexityEstimate) -> dict:
    return {
        "keyword_terms": est.keyword_terms,
        "keyword_mean_instances": est.keyword_mean_instances,
        "entity_count": est.entity_count,
        "entity_mean_instances": est.entity_mean_instances,
        "predicted_comparisons": est.predicted_comparisons,
    }


def cmd_summarize(args) -> int:
    out = Path(args.out)
    extracts_dir = out / "extracts"
    if not extracts_dir.exists():
        raise FileNotFoundError(
            f"{extracts_dir} not found; run the mine stage first")
    pools: dict[tuple[str, str], list[matcher.Extract]] = {}
    for path in sorted(extracts_dir.glob("*.jsonl")):
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                ext = _extract_from_dict(json.loads(line))
                key = (ext.match.entity, ext.match.category)
                pools.setdefault(key, []).append(ext)

    needs_expanded = {"MixedThirds", "AlternateThirds"} & set(args.system)
    if needs_expanded:
        any_expanded = any(e.origin == taxonomy.EXPANDED
                           for exts in pools.values() for e in exts)
        if not any_expanded:
            raise RuntimeError(
                "alternating systems need expanded-origin extracts; mine "
                "with an expanded taxonomy first")

    summaries_dir = out / "summaries"
    summaries_dir.mkdir(parents=True, exist_ok=True)
    written = 0
    for (entity, category), exts in sorted(pools.items()):
        seed_pool = [e for e in exts if e.origin == taxonomy.SEED]
        expanded_pool = [e for e in exts if e.origin == taxonomy.EXPANDED]
        for system in args.system:
            config = summarizer.SummaryConfig(
                word_limit=args.word_limit, system=system,
                random_seed=args.seed)
            if system in summarizer.COMPOSED_SYSTEMS:
                summary = summarizer.compose_summary(
                    seed_pool, expanded_pool, config, entity, category)
            elif system == summarizer.SYSTEM_BASELINE:
                summary = summarizer.baseline_random(
                    exts, config, entity, category)
            else:
                summary = graph_rank.graph_summary(
                    exts, graph_rank.GRAPH_SYSTEMS[system], config,
                    entity, category)
            stem = f"{_slug(entity)}__{_slug(category)}__{system}"
            (summaries_dir / f"{stem}.txt").write_text(
                summary.text + "\n", encoding="utf-8")
            _write_json(summaries_dir / f"{stem}.json", {
                "entity": entity, "category": category, "system": system,
                "word_count": summary.word_count,
                "origin_sequence": summary.origin_sequence,
                "selections": [e.extract_id for e in summary.selections],
            })
            written += 1
    print(f"wrote {written} summaries to {summaries_dir}")
    return 0


_METRIC_COLUMNS = ("rouge1_f1", "rouge2_f1", "rougeL_f1",
                   "rougeSU4_f1", "bleu4")


def cmd_evaluate(args) -> int:
    from . import metrics

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for line in Path(args.batch).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        candidate_path = Path(record["candidate_path"])
        reference_paths = [Path(p) for p in record["reference_paths"]]
        missing = [p for p in [candidate_path, *reference_paths]
                   if not p.exists()]
        if missing:
            logger.warning("skipping %s: missing %s",
                           record["summary_id"], missing)
            continue
        report = metrics.evaluate_summary(
            candidate_path.read_text(encoding="utf-8"),
            [p.read_text(encoding="utf-8") for p in reference_paths])
        rows.append((record["summary_id"],
                     [getattr(report, col) for col in _METRIC_COLUMNS]))
    csv_path = out / "evaluation.csv"
    with csv_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("summary_id",) + _METRIC_COLUMNS)
        for summary_id, values in rows:
            writer.writerow([summary_id] + [f"{v:.6f}" for v in values])
        if rows:
            means = [sum(vals[i] for _, vals in rows) / len(rows)
                     for i in range(len(_METRIC_COLUMNS))]
            writer.writerow(["mean"] + [f"{v:.6f}" for v in means])
    print(f"evaluated {len(rows)} summaries -> {csv_path}")
    return 0


def cmd_stats(args) -> int:
    out = Path(args.out)
    combined = {}
    for name in ("ingest_stats.json", "mine_stats.json"):
        path = out / name
        if path.exists():
            combined[name.removesuffix(".json")] = json.loads(
                path.read_text(encoding="utf-8"))
    if not combined:
        raise FileNotFoundError(f"no stats artifacts under {out}")
    print(json.dumps(combined, indent=2, sort_keys=True))
    return 0


_COMMANDS = {
    "ingest": cmd_ingest,
    "expand": cmd_expand,
    "mine": cmd_mine,
    "summarize": cmd_summarize,
    "evaluate": cmd_evaluate,
    "stats": cmd_stats,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING)
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        args = _resolve(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](args)
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
