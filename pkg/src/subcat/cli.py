"""Command-line front end.

    subcat extract-treebank --in TB... --out LEX
    subcat extract-raw      --in CORPUS... --lexicon ANALYZER --out LEX
    subcat ambiguity-stats  --in CORPUS... --lexicon ANALYZER [--out JSON]
    subcat filter           --in CORPUS... --lexicon ANALYZER [--out TXT] [--stats JSON]
    subcat compare          --candidate LEX --gold LEX [--out JSON]
    subcat report           --treebank TB --corpus CORPUS --lexicon ANALYZER --out MD

Exit status: 0 on success, 1 on usage errors, 2 on data errors.  Outputs
are rendered in memory first and written atomically, so a failed run
leaves no partial files behind.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path
from typing import Sequence

from subcat import evaluate, extraction, lexicon, morphology, treebank
from subcat.config import WORKERS_ENV, RunConfig, UsageError
from subcat.errors import DataError
from subcat.extraction import FilterTally
from subcat.lexicon import FrameLexicon
from subcat.morphology import UnknownPolicy, VerbPolicy
from subcat.pipeline import ambiguity_shards, filter_shards, run_raw, run_treebank
from subcat.report import render_report
from subcat.treebank import StemSource
from subcat.trees import TreeNode, parse_bracketed


# -- input ---------------------------------------------------------------------

def _read_text(path: str, progress: bool) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except FileNotFoundError:
        raise DataError("no such file", source=path) from None
    except UnicodeDecodeError as e:
        raise DataError(f"not valid UTF-8 ({e.reason})", source=path) from None
    if progress:
        print(f"{path}: {text.count(chr(10))} lines", file=sys.stderr)
    return text


def _read_trees(paths: Sequence[str], progress: bool) -> list[TreeNode]:
    trees = []
    for path in paths:
        try:
            trees.extend(parse_bracketed(_read_text(path, progress)))
        except DataError as e:
            raise e.with_source(path) if e.source is None else e
    return trees


def _read_sentences(paths: Sequence[str], split: bool, progress: bool) -> list[list[str]]:
    out = []
    for path in paths:
        out.extend(extraction.read_corpus(_read_text(path, progress), split))
    return out


def _read_analyzer(path: str, progress: bool) -> morphology.LexiconAnalyzer:
    return morphology.load_analyzer_lexicon(_read_text(path, progress), source=path)


def _read_lexicon(path: str, progress: bool) -> FrameLexicon:
    text = _read_text(path, progress)
    try:
        if path.endswith(".json"):
            return lexicon.read_json(text)
        return lexicon.read_tsv(text, source=path)
    except DataError:
        raise
    except (ValueError, KeyError) as e:
        raise DataError(f"cannot read lexicon: {e}", source=path) from None


# -- output --------------------------------------------------------------------

def _write_atomic(outputs: dict[str, str]) -> None:
    pending = []
    try:
        for path, text in outputs.items():
            target = Path(path)
            target.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
            pending.append(tmp)
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
        for tmp, path in zip(pending, outputs):
            os.replace(tmp, path)
        pending = []
    finally:
        for tmp in pending:
            try:
                os.unlink(tmp)
            except OSError:
                pass


def _lexicon_text(lex: FrameLexicon, path: str, cfg: RunConfig) -> str:
    if path.endswith(".json"):
        return lexicon.to_json(lex, cfg.metadata())
    return lexicon.to_tsv(lex, cfg.metadata())


def _maybe_filter(lex: FrameLexicon, cfg: RunConfig) -> FrameLexicon:
    if not cfg.binomial_filter:
        return lex
    if lex.fractional:
        raise UsageError("--binomial-filter needs integer counts (drop --fractional)")
    return lexicon.binomial_filter(lex, cfg.error_rate, cfg.significance)


def _source_name(paths: Sequence[str]) -> str:
    return ",".join(sorted(Path(p).name for p in paths))


# -- subcommands ---------------------------------------------------------------

def cmd_extract_treebank(args, cfg: RunConfig) -> dict[str, str]:
    trees = _read_trees(args.inputs, args.progress)
    result = run_treebank(trees, cfg)
    instances = result.instances
    if cfg.single_vp_only:
        instances = [i for i in instances if i.sentence_id in result.single_vp_ids]
    lex = treebank.build_lexicon(instances, _source_name(args.inputs))
    outputs = {args.out: _lexicon_text(_maybe_filter(lex, cfg), args.out, cfg)}
    if args.instances:
        outputs[args.instances] = treebank.instances_tsv(instances)
    if args.census:
        outputs[args.census] = evaluate.to_json(result.census.to_dict(cfg.precision))
    if args.filter_stats:
        outputs[args.filter_stats] = result.tally.stats().to_json(cfg.precision)
    return outputs


def cmd_extract_raw(args, cfg: RunConfig) -> dict[str, str]:
    analyzer = _read_analyzer(args.lexicon, args.progress)
    sentences = _read_sentences(args.inputs, cfg.split_sentences, args.progress)
    if not sentences:
        raise DataError("corpus has no sentences", source=args.inputs[0])
    result = run_raw(sentences, analyzer, cfg)
    result.lexicon.source = _source_name(args.inputs)
    outputs = {args.out: _lexicon_text(_maybe_filter(result.lexicon, cfg), args.out, cfg)}
    if args.frames:
        outputs[args.frames] = extraction.case_frames_tsv(result.frames)
    if args.filter_stats:
        outputs[args.filter_stats] = result.tally.stats().to_json(cfg.precision)
    return outputs


def cmd_ambiguity(args, cfg: RunConfig) -> dict[str, str]:
    analyzer = _read_analyzer(args.lexicon, args.progress)
    sentences = _read_sentences(args.inputs, cfg.split_sentences, args.progress)
    tokens = [t for s in sentences for t in s]
    tally = morphology.AmbiguityTally()
    for part in ambiguity_shards(tokens, analyzer, cfg):
        tally = tally + part
    report = tally.report()
    outputs = {args.out or "-": report.to_json()}
    if args.histogram:
        outputs[args.histogram] = report.histogram_text()
    return outputs


def cmd_filter(args, cfg: RunConfig) -> dict[str, str]:
    analyzer = _read_analyzer(args.lexicon, args.progress)
    sentences = _read_sentences(args.inputs, cfg.split_sentences, args.progress)
    retained, tally = [], FilterTally()
    for kept, part in filter_shards(sentences, analyzer, cfg):
        retained.extend(kept)
        tally = tally + part
    if not tally.total:
        raise DataError("corpus has no sentences", source=args.inputs[0])
    outputs = {}
    if args.out:
        outputs[args.out] = "".join(" ".join(s) + "\n" for s in retained)
    outputs[args.stats or "-"] = tally.stats().to_json(cfg.precision)
    return outputs


def compare_doc(candidate: FrameLexicon, gold: FrameLexicon, cfg: RunConfig) -> dict:
    doc = {"eval": evaluate.precision_recall(candidate, gold, evaluate.EvalMode(cfg.mode)).to_dict()}
    if candidate and gold:
        doc["divergence"] = evaluate.stem_distribution_divergence(candidate, gold, cfg.top_k).to_dict()
    else:
        doc["divergence"] = None
    return doc


def cmd_compare(args, cfg: RunConfig) -> dict[str, str]:
    candidate = _read_lexicon(args.candidate, args.progress)
    gold = _read_lexicon(args.gold, args.progress)
    outputs = {args.out or "-": evaluate.to_json(compare_doc(candidate, gold, cfg))}
    if args.table:
        report = evaluate.precision_recall(candidate, gold, evaluate.EvalMode(cfg.mode))
        outputs[args.table] = evaluate.eval_table(report, gold)
    return outputs


def cmd_report(args, cfg: RunConfig) -> dict[str, str]:
    trees = _read_trees([args.treebank], args.progress)
    analyzer = _read_analyzer(args.lexicon, args.progress)
    sentences = _read_sentences([args.corpus], cfg.split_sentences, args.progress)
    if not sentences:
        raise DataError("corpus has no sentences", source=args.corpus)
    return {args.out: render_report(trees, sentences, analyzer, cfg)}


# -- argument parsing ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--workers", type=int, help=f"worker processes (env {WORKERS_ENV})")
    p.add_argument("--precision", type=int, help="decimals for reported fractions (default 2)")
    p.add_argument("--progress", action="store_true", help="line counts on stderr")


def _treebank_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--verb-tags", help="comma-separated tag substrings marking verbs (IV,PV)")
    p.add_argument("--vp-prefixes", help="comma-separated VP label prefixes (VP)")
    p.add_argument("--ignore-labels", help="comma-separated sibling labels left out of frames")
    p.add_argument("--strip-suffixes", action="store_const", const=True,
                   help="NP-OBJ -> NP in frames")
    p.add_argument("--multiset", action="store_const", const=True, help="keep repeated labels")
    p.add_argument("--stem-source", choices=[s.value for s in StemSource])
    p.add_argument("--lemma-separator")


def _raw_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--policy", type=str.upper, choices=[v.value for v in VerbPolicy])
    p.add_argument("--split-sentences", action="store_const", const=True,
                   help="split lines on sentence-final punctuation")


def _filter_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--binomial-filter", action="store_const", const=True,
                   help="drop entries consistent with extraction noise")
    p.add_argument("--error-rate", type=float)
    p.add_argument("--significance", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="subcat", description="Verb subcategorization frame acquisition.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("extract-treebank", help="frames from a bracketed treebank")
    p.add_argument("--in", dest="inputs", nargs="+", required=True)
    p.add_argument("--out", required=True, help="lexicon (.tsv or .json)")
    p.add_argument("--instances", help="verb instance TSV")
    p.add_argument("--census", help="census JSON")
    p.add_argument("--filter-stats", help="single-VP filter statistics JSON")
    p.add_argument("--single-vp-only", action="store_const", const=True,
                   help="build the lexicon from single-VP sentences only")
    _treebank_flags(p)
    _filter_flags(p)
    _common(p)
    p.set_defaults(func=cmd_extract_treebank)

    p = sub.add_parser("extract-raw", help="case-marking frames from raw text")
    p.add_argument("--in", dest="inputs", nargs="+", required=True)
    p.add_argument("--lexicon", required=True, help="analyzer TSV")
    p.add_argument("--out", required=True)
    p.add_argument("--frames", help="per-sentence case frame TSV")
    p.add_argument("--filter-stats", help="single-verb filter statistics JSON")
    p.add_argument("--case-map", help="e.g. NOM=SUBJ,ACC=OBJ,GEN=GENARG")
    p.add_argument("--require-subject", action="store_const", const=True)
    p.add_argument("--fractional", action="store_const", const=True,
                   help="split ambiguous verbs 1/n over their stems")
    _raw_flags(p)
    _filter_flags(p)
    _common(p)
    p.set_defaults(func=cmd_extract_raw)

    p = sub.add_parser("ambiguity-stats", help="analyses-per-token statistics")
    p.add_argument("--in", dest="inputs", nargs="+", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--out", help="report JSON (stdout if omitted)")
    p.add_argument("--histogram", help="plain-text histogram")
    p.add_argument("--unknown", type=str.upper, choices=[u.value for u in UnknownPolicy])
    p.add_argument("--split-sentences", action="store_const", const=True)
    _common(p)
    p.set_defaults(func=cmd_ambiguity)

    p = sub.add_parser("filter", help="keep single-verb sentences")
    p.add_argument("--in", dest="inputs", nargs="+", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--out", help="retained sentences")
    p.add_argument("--stats", help="filter statistics JSON (stdout if omitted)")
    _raw_flags(p)
    _common(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("compare", help="evaluate a candidate lexicon against a gold one")
    p.add_argument("--candidate", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--mode", type=str.upper, choices=[m.value for m in evaluate.EvalMode])
    p.add_argument("--top-k", type=int)
    p.add_argument("--out", help="JSON (stdout if omitted)")
    p.add_argument("--table", help="per-stem plain-text table")
    _common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("report", help="markdown summary of the whole pipeline")
    p.add_argument("--treebank", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon", required=True, help="analyzer TSV")
    p.add_argument("--out", required=True)
    p.add_argument("--top-k", type=int)
    _treebank_flags(p)
    _raw_flags(p)
    _common(p)
    p.set_defaults(func=cmd_report)
    return parser


_NOT_CONFIG = {"command", "func", "inputs", "out", "instances", "census", "filter_stats", "frames",
               "lexicon", "histogram", "stats", "candidate", "gold", "table", "treebank", "corpus",
               "config", "progress"}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError(parser.format_help())
        cfg = RunConfig.load(args.config)
        cfg.update({k: v for k, v in vars(args).items() if k not in _NOT_CONFIG and v is not None})
        cfg.validate()
        outputs = args.func(args, cfg)
    except UsageError as e:
        print(str(e).rstrip(), file=sys.stderr)
        return 1
    except DataError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    stdout = outputs.pop("-", None)
    try:
        _write_atomic(outputs)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if stdout is not None:
        sys.stdout.write(stdout)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
