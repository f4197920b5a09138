"""Acceptance suite: one test per criterion, each reporting PASS or FAIL."""

import functools
import json
import math
import os
import random
import subprocess
import sys
import time

import pytest

import oracle
from conftest import ACCEPTANCE, FIXTURES
from subcat import synth
from subcat.evaluate import EvalMode, js_divergence, precision_recall, usage_shift
from subcat.extraction import FilterStats, extract_raw, read_corpus
from subcat.lexicon import Frame, FrameLexicon, binomial_tail, passes_binomial_test, read_json, read_tsv, to_json, to_tsv
from subcat.morphology import LexiconAnalyzer, MorphAnalysis, Pos, ambiguity_stats, load_analyzer_lexicon
from subcat.treebank import build_lexicon, extract_frames, process_treebank
from subcat.trees import parse_bracketed, serialize, serialize_all


def criterion(number, text):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                line = f"[{number}] FAIL  {text}"
                print(line)
                ACCEPTANCE.append(line)
                raise
            line = f"[{number}] PASS  {text}"
            print(line)
            ACCEPTANCE.append(line)
        return run
    return wrap


def rows(instances):
    return [(i.sentence_id, i.stem, i.verb_tag, i.frame.canonical, i.vp_path) for i in instances]


@criterion(1, "treebank extraction equals brute-force traversal; census identity; < 1 s")
def test_treebank_oracle_equivalence():
    text = (FIXTURES / "synthetic.tb").read_text()
    start = time.perf_counter()
    trees = parse_bracketed(text)
    instances, census = extract_frames(trees)
    elapsed = time.perf_counter() - start

    expected, total_vps = oracle.brute_force_instances(oracle.read_sexprs(text))
    assert rows(instances) == expected
    assert census.vps == total_vps
    assert census.vps_with_verb + census.skipped_vps == census.vps
    assert census.vps_with_verb == len(instances)
    assert elapsed < 1.0

    # the fixture exercises what it should
    assert census.sentences >= 30 and census.vps >= 50
    assert census.skipped_vps > 0
    assert sum(1 for t in trees for p, n in t.subtrees() if n.label == "VP" and
               any(c.label == "VP" for c in n.children)) > 0
    tags = {i.verb_tag for i in instances}
    assert {"IV_PASS", "PV_PASS"} <= tags
    assert any(c.label == "PUNC" for t in trees for _, n in t.subtrees()
               if n.label == "VP" for c in n.children)


@criterion(2, "reference totals 5845/926/1747/376 serialize to 0.16 and 0.22")
def test_reference_fraction_arithmetic():
    doc = json.loads(FilterStats(5845, 926, 1747, 376).to_json(precision=2))
    assert doc["fraction_single"] == 0.16
    assert doc["fraction_stems"] == 0.22


@criterion(3, "ambiguity mean/sd/max match population formulas; {2,4} -> (3.0, 1.0, 4)")
def test_ambiguity_closed_form():
    def analyzer_for(counts):
        an = LexiconAnalyzer(MorphAnalysis(f"t{k}", f"s{i}", Pos.NOUN) for k in set(counts) for i in range(k))
        return an, [f"t{k}" for k in counts]

    an, tokens = analyzer_for([2, 4])
    r = ambiguity_stats(tokens, an)
    assert (r.mean, r.std_dev, r.max) == (3.0, 1.0, 4)

    rng = random.Random(5)
    cases = [[1, 1, 1], [0, 3], [1, 2, 3, 4, 5]] + [[rng.randint(0, 9) for _ in range(rng.randint(1, 50))]
                                                     for _ in range(50)]
    for counts in cases:
        an, tokens = analyzer_for(counts)
        r = ambiguity_stats(tokens, an)
        mean = sum(counts) / len(counts)
        sd = math.sqrt(sum((c - mean) ** 2 for c in counts) / len(counts))
        assert abs(r.mean - mean) <= 1e-9
        assert abs(r.std_dev - sd) <= 1e-9
        assert r.max == max(counts)

    fixture = load_analyzer_lexicon((FIXTURES / "analyzer.tsv").read_text())
    r = ambiguity_stats((FIXTURES / "corpus.txt").read_text().split(), fixture)
    assert abs(r.mean - 0.8) <= 1e-9 and abs(r.std_dev - math.sqrt(0.26)) <= 1e-9 and r.max == 2


@criterion(4, "binomial keep/drop matches brute-force tail for n <= 200; (100, 1, 0.02) dropped")
def test_binomial_filter_oracle():
    alpha = 0.05
    for eps in (0.01, 0.02, 0.05):
        for n in range(1, 201):
            for m in range(1, n + 1):
                expected = oracle.binomial_tail(n, m, eps) <= alpha
                assert passes_binomial_test(n, m, eps, alpha) is expected, (n, m, eps)
    assert binomial_tail(100, 1, 0.02) == pytest.approx(0.867, abs=5e-4)
    assert not passes_binomial_test(100, 1, 0.02, 0.05)


@criterion(5, "evaluation identities; JS 0 / 1 / symmetric 1e-12 / oracle 1e-9 on 100 random lexica")
def test_evaluation_identities():
    a, b, c = Frame(("NP",)), Frame(("PP",)), Frame(("SBAR",))
    gold = FrameLexicon.from_counts({"x": {a: 2, b: 1}, "y": {c: 4}})
    for mode in EvalMode:
        r = precision_recall(gold, gold, mode)
        assert (r.precision, r.recall, r.f1) == (1.0, 1.0, 1.0)
        r = precision_recall(FrameLexicon.from_counts({"z": {a: 1}}), gold, mode)
        assert (r.precision, r.recall, r.f1) == (0.0, 0.0, 0.0)
    r = precision_recall(FrameLexicon.from_counts({"x": {a: 1, b: 1}}),
                         FrameLexicon.from_counts({"x": {a: 1, c: 1}}), EvalMode.FRAME_TYPE)
    assert (r.precision, r.recall, r.f1) == (0.5, 0.5, 0.5)

    assert js_divergence(gold.stem_totals(), gold.stem_totals()) == 0.0
    assert js_divergence({"x": 3}, {"y": 2, "z": 1}) == 1.0
    rng = random.Random(2024)
    for _ in range(100):
        p = {s: rng.randint(1, 25) for s in rng.sample("abcdefghijkl", rng.randint(1, 8))}
        q = {s: rng.randint(1, 25) for s in rng.sample("abcdefghijkl", rng.randint(1, 8))}
        pq, qp = js_divergence(p, q), js_divergence(q, p)
        assert abs(pq - qp) <= 1e-12
        assert abs(pq - oracle.js_bits(p, q)) <= 1e-9


@criterion(6, "usage-shift deltas sum to 0; clause frames absent from single-verb raw lexicon")
def test_usage_shift_and_clause_frames():
    corpus = synth.generate(sentences=2000, seed=21)
    full = build_lexicon(process_treebank(corpus.trees).instances)
    tb = process_treebank(corpus.trees)
    single_vp = build_lexicon(i for i in tb.instances if i.sentence_id in tb.single_vp_ids)
    raw = extract_raw(read_corpus(corpus.raw_text), load_analyzer_lexicon(corpus.analyzer_text)).lexicon

    for stem in sorted(set(full.stems()) & set(single_vp.stems())):
        assert abs(math.fsum(s.delta for s in usage_shift(stem, full, single_vp))) <= 1e-12
    for stem in sorted(set(full.stems()) & set(raw.stems())):
        assert abs(math.fsum(s.delta for s in usage_shift(stem, full, raw))) <= 1e-12

    clause_frames = [f for f in full.frames("qAl") if "SBAR" in f]
    assert clause_frames and all(full.count("qAl", f) > 0 for f in clause_frames)
    for lex in (raw, single_vp):
        shifts = {s.frame: s for s in usage_shift("qAl", full, lex)}
        for f in clause_frames:
            assert shifts[f].filtered == 0.0
        assert all("SBAR" not in f for s in lex.stems() for f in lex.frames(s))


def _pipeline(workdir, data, workers):
    env = dict(os.environ, SUBCAT_WORKERS=str(workers))
    steps = [
        ["extract-treebank", "--in", data / "treebank.tb", "--out", "tb.tsv", "--census", "census.json",
         "--instances", "instances.tsv", "--filter-stats", "tb-filter.json"],
        ["extract-raw", "--in", data / "corpus.txt", "--lexicon", data / "analyzer.tsv", "--out", "raw.tsv",
         "--frames", "frames.tsv", "--filter-stats", "raw-filter.json", "--binomial-filter"],
        ["ambiguity-stats", "--in", data / "corpus.txt", "--lexicon", data / "analyzer.tsv", "--out", "amb.json",
         "--histogram", "amb.txt"],
        ["filter", "--in", data / "corpus.txt", "--lexicon", data / "analyzer.tsv", "--out", "kept.txt",
         "--stats", "kept.json"],
        ["compare", "--candidate", "raw.tsv", "--gold", "tb.tsv", "--out", "compare.json", "--table", "table.txt"],
        ["report", "--treebank", data / "treebank.tb", "--corpus", data / "corpus.txt",
         "--lexicon", data / "analyzer.tsv", "--out", "report.md"],
    ]
    workdir.mkdir()
    start = time.perf_counter()
    for step in steps:
        subprocess.run([sys.executable, "-m", "subcat.cli", *map(str, step)], cwd=workdir, env=env, check=True)
    elapsed = time.perf_counter() - start
    return elapsed, {p.name: p.read_bytes() for p in sorted(workdir.iterdir())}


@criterion(7, "CLI pipeline on 10,000 generated sentences < 10 s, byte-identical across runs and workers")
def test_determinism_and_scale(tmp_path):
    data = tmp_path / "data"
    assert synth.main([str(data), "--sentences", "10000", "--seed", "7"]) == 0
    t1, first = _pipeline(tmp_path / "run1", data, workers=1)
    t2, again = _pipeline(tmp_path / "run2", data, workers=1)
    t8, eight = _pipeline(tmp_path / "run8", data, workers=8)
    print(f"pipeline seconds: workers=1 {t1:.2f}, {t2:.2f}; workers=8 {t8:.2f}")
    assert len(first) == 14
    assert first == again == eight
    assert max(t1, t2, t8) < 10.0


@criterion(8, "tree parse/serialize and lexicon write/read are identities on all fixtures")
def test_round_trips():
    for path in sorted(FIXTURES.glob("*.tb")):
        trees = parse_bracketed(path.read_text())
        assert parse_bracketed(serialize_all(trees)) == trees
        assert all(parse_bracketed(serialize(t)) == [t] for t in trees)
        lex = build_lexicon(extract_frames(trees)[0], path.name)
        assert read_tsv(to_tsv(lex)) == lex
        assert read_json(to_json(lex)) == lex
    golden = (FIXTURES / "mini.lex.tsv").read_text()
    assert to_tsv(read_tsv(golden)) == golden
    raw = extract_raw(read_corpus((FIXTURES / "corpus.txt").read_text()),
                      load_analyzer_lexicon((FIXTURES / "analyzer.tsv").read_text()), fractional=True).lexicon
    assert read_tsv(to_tsv(raw)) == raw and read_json(to_json(raw)) == raw
