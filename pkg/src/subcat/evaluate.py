"""Compare a candidate lexicon with a gold lexicon; measure selection bias."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from subcat.errors import EmptyLexicon, UnknownStem
from subcat.lexicon import Frame, FrameLexicon, relative_frequencies, top_k_stems


class EvalMode(enum.Enum):
    STEM_COVERAGE = "STEM_COVERAGE"
    FRAME_TYPE = "FRAME_TYPE"
    TOKEN_WEIGHTED = "TOKEN_WEIGHTED"


def _ratio(num, den) -> float | None:
    return None if not den else float(Fraction(num) / Fraction(den))


def _f1(p: float | None, r: float | None) -> float | None:
    if p is None or r is None:
        return None
    if p + r == 0:
        return 0.0
    return 2 * p * r / (p + r)


@dataclass(frozen=True)
class EvalReport:
    """Precision/recall of a candidate lexicon.

    ``None`` marks an undefined value: recall against an empty gold, or
    precision of an empty candidate when the gold is not empty.
    """

    precision: float | None
    recall: float | None
    f1: float | None
    mode: EvalMode
    true_positives: int | Fraction
    candidate_size: int | Fraction
    gold_size: int | Fraction
    per_stem: dict[str, tuple[float | None, float | None]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        def num(x):
            if isinstance(x, Fraction):
                return int(x) if x.denominator == 1 else float(x)
            return x

        return {
            "mode": self.mode.value,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "counts": {
                "true_positives": num(self.true_positives),
                "candidate_size": num(self.candidate_size),
                "gold_size": num(self.gold_size),
            },
            "per_stem": {s: {"precision": p, "recall": r} for s, (p, r) in sorted(self.per_stem.items())},
        }


def _scores(tp, cand, gold) -> tuple[float | None, float | None]:
    if not cand:
        precision = 1.0 if not gold else None
    else:
        precision = _ratio(tp, cand)
    return precision, _ratio(tp, gold)


def _pairs(lex: FrameLexicon, stem: str | None = None) -> set[tuple[str, Frame]]:
    stems = [stem] if stem is not None else lex.stems()
    return {(s, f) for s in stems if s in lex for f in lex.frames(s)}


def _weighted(cand: FrameLexicon, gold: FrameLexicon, stem: str | None = None):
    stems = [stem] if stem is not None else sorted(set(cand.stems()) | set(gold.stems()))
    tp = csize = gsize = 0
    for s in stems:
        cf = cand.frames(s) if s in cand else {}
        gf = gold.frames(s) if s in gold else {}
        csize += sum(cf.values())
        gsize += sum(gf.values())
        tp += sum(min(c, gf[f]) for f, c in cf.items() if f in gf)
    return tp, csize, gsize


def precision_recall(candidate: FrameLexicon, gold: FrameLexicon,
                     mode: EvalMode = EvalMode.FRAME_TYPE) -> EvalReport:
    """Score ``candidate`` against ``gold``.

    STEM_COVERAGE compares stem sets, FRAME_TYPE compares (stem, frame)
    pairs, TOKEN_WEIGHTED credits min(candidate count, gold count) per
    shared pair against each side's grand total.  Per-stem scores use the
    pair view (weighted in TOKEN_WEIGHTED mode).
    """
    if mode is EvalMode.STEM_COVERAGE:
        c, g = set(candidate.stems()), set(gold.stems())
        tp, csize, gsize = len(c & g), len(c), len(g)
    elif mode is EvalMode.FRAME_TYPE:
        c, g = _pairs(candidate), _pairs(gold)
        tp, csize, gsize = len(c & g), len(c), len(g)
    else:
        tp, csize, gsize = _weighted(candidate, gold)
    p, r = _scores(tp, csize, gsize)

    per_stem = {}
    for stem in sorted(set(candidate.stems()) | set(gold.stems())):
        if mode is EvalMode.TOKEN_WEIGHTED:
            per_stem[stem] = _scores(*_weighted(candidate, gold, stem))
        else:
            cs, gs = _pairs(candidate, stem), _pairs(gold, stem)
            per_stem[stem] = _scores(len(cs & gs), len(cs), len(gs))
    return EvalReport(p, r, _f1(p, r), mode, tp, csize, gsize, per_stem)


def eval_table(report: EvalReport, gold: FrameLexicon) -> str:
    """Plain-text per-stem table, most frequent gold stems first."""
    totals = gold.stem_totals()

    def fmt(x):
        return "   -  " if x is None else f"{x:6.3f}"

    order = sorted(report.per_stem, key=lambda s: (-totals.get(s, 0), s))
    width = max([4] + [len(s) for s in order])
    lines = [f"{'stem':<{width}}  {'gold':>6}  {'P':>6}  {'R':>6}"]
    for stem in order:
        p, r = report.per_stem[stem]
        lines.append(f"{stem:<{width}}  {str(totals.get(stem, 0)):>6}  {fmt(p)}  {fmt(r)}")
    return "\n".join(lines) + "\n"


# -- divergence --------------------------------------------------------------

def js_divergence(a: dict[str, int | Fraction], b: dict[str, int | Fraction]) -> float:
    """Jensen-Shannon divergence in bits between two count vectors.

    Mass on one side only contributes exactly half its probability; the
    rest is summed term by term in key order so the value is symmetric.
    """
    ta, tb = sum(a.values()), sum(b.values())
    if not ta or not tb:
        raise EmptyLexicon("distribution has no mass")
    only_a = sum(c for k, c in a.items() if not b.get(k))
    only_b = sum(c for k, c in b.items() if not a.get(k))
    disjoint_part = float(Fraction(only_a) / ta + Fraction(only_b) / tb) / 2
    terms = []
    for key in sorted(set(a) & set(b)):
        if not a[key] or not b[key]:
            continue
        p = float(Fraction(a[key]) / ta)
        q = float(Fraction(b[key]) / tb)
        m = (p + q) / 2
        terms.append((p * math.log2(p / m) + q * math.log2(q / m)) / 2)
    js = disjoint_part + math.fsum(terms)
    return min(1.0, max(0.0, js))


@dataclass(frozen=True)
class DivergenceReport:
    js_divergence: float
    support_overlap: float
    top_k_overlap: float
    k: int

    def to_dict(self) -> dict:
        return {
            "js_divergence": self.js_divergence,
            "support_overlap": self.support_overlap,
            "top_k_overlap": self.top_k_overlap,
            "k": self.k,
        }


def stem_distribution_divergence(a: FrameLexicon, b: FrameLexicon, k: int = 10) -> DivergenceReport:
    """Compare the stem marginals of two lexica.

    ``support_overlap`` is shared stems over the union of stems;
    ``top_k_overlap`` is shared top-k stems over the larger top-k list.
    """
    if not a or not b:
        raise EmptyLexicon("both lexica need at least one stem")
    ta, tb = a.stem_totals(), b.stem_totals()
    sa, sb = set(ta), set(tb)
    top_a = {s for s, _ in top_k_stems(a, k)}
    top_b = {s for s, _ in top_k_stems(b, k)}
    top_den = max(len(top_a), len(top_b))
    return DivergenceReport(
        js_divergence=js_divergence(ta, tb),
        support_overlap=len(sa & sb) / len(sa | sb),
        top_k_overlap=len(top_a & top_b) / top_den if top_den else 1.0,
        k=k,
    )


@dataclass(frozen=True)
class FrameShift:
    frame: Frame
    full: float
    filtered: float

    @property
    def delta(self) -> float:
        return self.full - self.filtered


def usage_shift(stem: str, full: FrameLexicon, filtered: FrameLexicon) -> list[FrameShift]:
    """Per-frame relative frequency of ``stem`` on each side, frames sorted."""
    if stem not in full and stem not in filtered:
        raise UnknownStem(f"{stem!r} is in neither lexicon")
    rf = relative_frequencies(full, stem) if stem in full else {}
    rg = relative_frequencies(filtered, stem) if stem in filtered else {}
    frames = sorted(set(rf) | set(rg), key=lambda f: f.canonical)
    return [FrameShift(f, rf.get(f, 0.0), rg.get(f, 0.0)) for f in frames]


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
