import json
from pathlib import Path

import pytest

from riskminer.cli import main

ALL_SYSTEMS = ("Seed", "Expanded", "MixedThirds", "AlternateThirds",
               "Baseline", "TextRank", "LexRank")


def run_pipeline(data_dir, out, systems=ALL_SYSTEMS, threads=1, seed=7,
                 cutoff=100):
    assert main(["ingest", "--corpus", str(data_dir / "corpus"),
                 "--out", str(out), "--threads", str(threads)]) == 0
    assert main(["mine", "--taxonomy", str(data_dir / "taxonomy.json"),
                 "--entities", str(data_dir / "entities.txt"),
                 "--cutoff", str(cutoff), "--out", str(out),
                 "--threads", str(threads)]) == 0
    argv = ["summarize", "--out", str(out), "--seed", str(seed)]
    for system in systems:
        argv += ["--system", system]
    assert main(argv) == 0


def snapshot(out: Path) -> dict[str, bytes]:
    return {str(p.relative_to(out)): p.read_bytes()
            for p in sorted(out.rglob("*")) if p.is_file()}


class TestIngest:
    def test_directory_fixture(self, data_dir, tmp_path):
        assert main(["ingest", "--corpus", str(data_dir / "corpus"),
                     "--out", str(tmp_path)]) == 0
        cache = (tmp_path / "corpus.jsonl").read_text().splitlines()
        assert len(cache) == 3

    def test_missing_corpus_dir(self, tmp_path):
        assert main(["ingest", "--corpus", str(tmp_path / "nope"),
                     "--out", str(tmp_path)]) == 2

    def test_jsonl_stats(self, data_dir, tmp_path):
        assert main(["ingest", "--corpus", str(data_dir / "corpus.jsonl"),
                     "--out", str(tmp_path)]) == 0
        stats = json.loads((tmp_path / "ingest_stats.json").read_text())
        assert stats == {"documents": 4, "skipped_empty": 1, "malformed": 1}


class TestExpand:
    def test_missing_vectors_flag(self, data_dir, tmp_path):
        assert main(["expand", "--taxonomy", str(data_dir / "taxonomy.json"),
                     "--out", str(tmp_path)]) == 2

    def test_writes_bounded_expansion(self, data_dir, tmp_path):
        assert main(["expand", "--taxonomy", str(data_dir / "taxonomy.json"),
                     "--vectors", str(data_dir / "vectors.txt"),
                     "--k", "2", "--min-sim", "-1",
                     "--out", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "expansion_report.json").read_text())
        seeds_per_cat = {"Legal": 2, "Cybersecurity": 3}
        for cat, added in report.items():
            assert len(added) <= 2 * seeds_per_cat[cat]
        assert (tmp_path / "taxonomy_expanded.json").exists()

    def test_min_sim_above_one_adds_nothing(self, data_dir, tmp_path):
        assert main(["expand", "--taxonomy", str(data_dir / "taxonomy.json"),
                     "--vectors", str(data_dir / "vectors.txt"),
                     "--min-sim", "1.01", "--out", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "expansion_report.json").read_text())
        assert all(added == [] for added in report.values())


class TestMine:
    def test_requires_ingest_first(self, data_dir, tmp_path):
        assert main(["mine", "--taxonomy", str(data_dir / "taxonomy.json"),
                     "--entities", str(data_dir / "entities.txt"),
                     "--out", str(tmp_path)]) == 2

    def test_planted_match_found(self, data_dir, tmp_path):
        main(["ingest", "--corpus", str(data_dir / "corpus"),
              "--out", str(tmp_path)])
        assert main(["mine", "--taxonomy", str(data_dir / "taxonomy.json"),
                     "--entities", str(data_dir / "entities.txt"),
                     "--out", str(tmp_path)]) == 0
        legal = (tmp_path / "extracts" / "acme__Legal.jsonl").read_text()
        rows = [json.loads(line) for line in legal.splitlines()]
        assert any(r["keyword"] == "lawsuit" for r in rows)

    def test_cutoff_antitone(self, data_dir, tmp_path):
        main(["ingest", "--corpus", str(data_dir / "corpus"),
              "--out", str(tmp_path)])
        sets = []
        for cutoff in (10, 50, 100):
            main(["mine", "--taxonomy", str(data_dir / "taxonomy.json"),
                  "--entities", str(data_dir / "entities.txt"),
                  "--cutoff", str(cutoff), "--out", str(tmp_path)])
            rows = set()
            for path in (tmp_path / "extracts").glob("*.jsonl"):
                for line in path.read_text().splitlines():
                    rows.add(line)
            sets.append(rows)
        assert sets[0] <= sets[1] <= sets[2]


class TestSummarize:
    def test_requires_mine_first(self, tmp_path):
        assert main(["summarize", "--out", str(tmp_path)]) == 2

    def test_all_seven_systems(self, data_dir, tmp_path):
        run_pipeline(data_dir, tmp_path)
        sidecars = list((tmp_path / "summaries").glob("*.json"))
        pairs = {json.loads(p.read_text())["entity"] + "/" +
                 json.loads(p.read_text())["category"] for p in sidecars}
        assert len(sidecars) == 7 * len(pairs)

    def test_alternate_sidecar_starts_expanded(self, data_dir, tmp_path):
        run_pipeline(data_dir, tmp_path)
        path = tmp_path / "summaries" / "acme__Legal__AlternateThirds.json"
        sidecar = json.loads(path.read_text())
        assert sidecar["origin_sequence"][0] == "expanded"

    def test_rerun_is_byte_identical(self, data_dir, tmp_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        run_pipeline(data_dir, out1)
        run_pipeline(data_dir, out2)
        assert snapshot(out1) == snapshot(out2)

    def test_alternating_without_expanded_extracts_fails(self, data_dir,
                                                         tmp_path):
        seed_only = tmp_path / "seed_taxonomy.json"
        seed_only.write_text(json.dumps({"categories": {
            "Legal": [{"text": "lawsuit"}, {"text": "settlement"}]}}))
        main(["ingest", "--corpus", str(data_dir / "corpus"),
              "--out", str(tmp_path)])
        main(["mine", "--taxonomy", str(seed_only),
              "--entities", str(data_dir / "entities.txt"),
              "--out", str(tmp_path)])
        assert main(["summarize", "--system", "AlternateThirds",
                     "--out", str(tmp_path)]) == 1


class TestEvaluate:
    def build_batch(self, data_dir, tmp_path) -> Path:
        ref1 = data_dir / "references" / "acme_legal_ref1.txt"
        ref2 = data_dir / "references" / "acme_legal_ref2.txt"
        batch = tmp_path / "batch.jsonl"
        records = [
            {"summary_id": "self", "candidate_path": str(ref1),
             "reference_paths": [str(ref1)]},
            {"summary_id": "cross", "candidate_path": str(ref1),
             "reference_paths": [str(ref1), str(ref2)]},
            {"summary_id": "missing", "candidate_path": str(ref1),
             "reference_paths": [str(tmp_path / "absent.txt")]},
        ]
        batch.write_text("\n".join(json.dumps(r) for r in records) + "\n")
        return batch

    def test_csv_rows(self, data_dir, tmp_path):
        batch = self.build_batch(data_dir, tmp_path)
        assert main(["evaluate", str(batch), "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "evaluation.csv").read_text().splitlines()
        header = lines[0].split(",")
        assert header == ["summary_id", "rouge1_f1", "rouge2_f1",
                          "rougeL_f1", "rougeSU4_f1", "bleu4"]
        rows = {line.split(",")[0]: line.split(",")[1:] for line in lines[1:]}
        # missing reference row is skipped, mean row appended
        assert set(rows) == {"self", "cross", "mean"}
        assert all(float(v) == pytest.approx(1.0) for v in rows["self"])

    def test_matches_library_scores(self, data_dir, tmp_path):
        from riskminer.metrics import evaluate_summary
        batch = self.build_batch(data_dir, tmp_path)
        main(["evaluate", str(batch), "--out", str(tmp_path)])
        lines = (tmp_path / "evaluation.csv").read_text().splitlines()
        cross = next(line for line in lines if line.startswith("cross,"))
        got = [float(v) for v in cross.split(",")[1:]]
        ref1 = (data_dir / "references" / "acme_legal_ref1.txt").read_text()
        ref2 = (data_dir / "references" / "acme_legal_ref2.txt").read_text()
        report = evaluate_summary(ref1, [ref1, ref2])
        expected = [report.rouge1_f1, report.rouge2_f1, report.rougeL_f1,
                    report.rougeSU4_f1, report.bleu4]
        assert got == pytest.approx(expected, abs=1e-6)


class TestStatsAndConfig:
    def test_stats_prints_artifacts(self, data_dir, tmp_path, capsys):
        run_pipeline(data_dir, tmp_path, systems=("Seed",))
        capsys.readouterr()  # drop pipeline progress lines
        assert main(["stats", "--out", str(tmp_path)]) == 0
        printed = json.loads(capsys.readouterr().out)
        assert "ingest_stats" in printed and "mine_stats" in printed
        assert "complexity" in printed["mine_stats"]

    def test_stats_without_artifacts(self, tmp_path):
        assert main(["stats", "--out", str(tmp_path / "empty")]) == 2

    def test_config_file_with_flag_override(self, data_dir, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text(
            f"corpus={data_dir / 'corpus'}\n"
            f"out={tmp_path / 'from_config'}\n"
            "cutoff=50\n")
        # the --out flag wins over the config value
        assert main(["ingest", "--config", str(config),
                     "--out", str(tmp_path / "from_flag")]) == 0
        assert (tmp_path / "from_flag" / "corpus.jsonl").exists()
        assert not (tmp_path / "from_config").exists()

    def test_bad_config_line(self, tmp_path):
        config = tmp_path / "bad.cfg"
        config.write_text("no equals sign here\n")
        assert main(["ingest", "--config", str(config),
                     "--out", str(tmp_path)]) == 2

    def test_unknown_subcommand_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2
