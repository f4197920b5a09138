"""Markdown summary for ``subcat report``."""

from __future__ import annotations

from subcat import evaluate, morphology, treebank
from subcat.evaluate import EvalMode
from subcat.lexicon import binomial_filter, top_k_stems
from subcat.pipeline import run_raw, run_treebank


def _fmt(x, precision: int) -> str:
    if x is None:
        return "n/a"
    if isinstance(x, float):
        return f"{x:.{precision}f}"
    return str(x)


def _table(header: list[str], rows: list[list]) -> list[str]:
    out = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    out.extend("| " + " | ".join(str(c) for c in row) + " |" for row in rows)
    return out


def render_report(trees, sentences, analyzer, cfg) -> str:
    prec = cfg.precision
    tb = run_treebank(trees, cfg)
    raw = run_raw(sentences, analyzer, cfg)
    full = treebank.build_lexicon(tb.instances)
    single = treebank.build_lexicon(i for i in tb.instances if i.sentence_id in tb.single_vp_ids)
    candidate = raw.lexicon
    if cfg.binomial_filter and not candidate.fractional:
        candidate = binomial_filter(candidate, cfg.error_rate, cfg.significance)

    lines = ["# Subcategorization acquisition report", ""]

    c = tb.census
    lines += ["## Treebank census", ""]
    lines += _table(["measure", "count"], [
        ["sentences", c.sentences],
        ["verb phrases", c.vps],
        ["verb phrases with a verb", c.vps_with_verb],
        ["verb phrases skipped", c.skipped_vps],
        ["coverage", _fmt(c.coverage, prec)],
        ["unique verb stems", c.unique_stems],
    ])

    lines += ["", "## Single-verb filtering", ""]
    rows = []
    for name, stats in (("treebank (VP nodes)", tb.tally.stats()), ("raw text (verb tokens)", raw.tally.stats())):
        rows.append([name, stats.total_sentences, stats.single_verb_sentences,
                     _fmt(stats.fraction_single, prec), stats.unique_stems_total,
                     stats.unique_stems_single, _fmt(stats.fraction_stems, prec)])
    lines += _table(["source", "sentences", "single-verb", "fraction", "stems", "stems (single)", "fraction"], rows)

    k = cfg.top_k
    lines += ["", f"## Top {k} verb stems", ""]
    top_full, top_single = top_k_stems(full, k), top_k_stems(single, k)
    rows = []
    for i in range(max(len(top_full), len(top_single))):
        left = f"{top_full[i][0]} ({top_full[i][1]})" if i < len(top_full) else ""
        right = f"{top_single[i][0]} ({top_single[i][1]})" if i < len(top_single) else ""
        rows.append([i + 1, left, right])
    lines += _table(["rank", "all sentences", "single-VP sentences"], rows)

    lines += ["", "## Selection bias", ""]
    if full and single:
        div = evaluate.stem_distribution_divergence(full, single, k)
        lines += _table(["measure", "value"], [
            ["Jensen-Shannon divergence (bits)", f"{div.js_divergence:.4f}"],
            ["shared stems / all stems", _fmt(div.support_overlap, prec)],
            [f"shared top-{k} stems", _fmt(div.top_k_overlap, prec)],
        ])
        for stem, _ in top_k_stems(full, 3):
            lines += ["", f"Usage of `{stem}`:", ""]
            shifts = evaluate.usage_shift(stem, full, single)
            lines += _table(["frame", "all", "single-VP", "delta"],
                            [[f"`{s.frame.canonical}`", _fmt(s.full, prec), _fmt(s.filtered, prec),
                              _fmt(s.delta, prec)] for s in shifts])
    else:
        lines.append("Not enough data: one of the lexica is empty.")

    lines += ["", "## Raw-text lexicon against the treebank gold standard", ""]
    rows = []
    for mode in EvalMode:
        rep = evaluate.precision_recall(candidate, full, mode)
        rows.append([mode.value, _fmt(rep.precision, prec), _fmt(rep.recall, prec), _fmt(rep.f1, prec)])
    lines += _table(["mode", "precision", "recall", "F1"], rows)
    if candidate and full:
        div = evaluate.stem_distribution_divergence(candidate, full, k)
        lines += ["", f"Stem distribution divergence (raw vs treebank): {div.js_divergence:.4f} bits"]

    lines += ["", "## Morphological ambiguity", ""]
    tokens = [t for s in sentences for t in s]
    amb = morphology.ambiguity_stats(tokens, analyzer, morphology.UnknownPolicy(cfg.unknown))
    lines += _table(["tokens", "mean analyses", "std dev", "max"],
                    [[amb.token_count, f"{amb.mean:.2f}", f"{amb.std_dev:.2f}", amb.max]])
    lines.append("")
    return "\n".join(lines)
