"""Single-verb sentence filtering and case-marking frames over raw text.

Sentences are token lists.  A token counts as a verb when its analyses
satisfy the chosen :class:`~subcat.morphology.VerbPolicy`; only sentences
with exactly one such token are used, and the nouns around that verb are
mapped to argument slots by their morphological case.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from subcat.errors import EmptyCorpus, NoVerbFound
from subcat.lexicon import Frame, FrameLexicon, Provenance
from subcat.morphology import Analyzer, MorphAnalysis, Pos, VerbPolicy, is_verb_candidate

DEFAULT_CASE_SLOTS = {"NOM": "SUBJ", "ACC": "OBJ", "GEN": "GENARG"}

_SENTENCE_END = re.compile(r"(?<=[.?!۔؟])\s+")


@dataclass(frozen=True)
class CaseHeuristics:
    case_to_slot: Mapping[str, str] = field(default_factory=lambda: dict(DEFAULT_CASE_SLOTS))
    require_clear_subject: bool = False
    subject_case: str = "NOM"

    def __post_init__(self):
        if not self.case_to_slot:
            raise ValueError("case_to_slot must map at least one case")
        for case, slot in self.case_to_slot.items():
            if not case or not slot:
                raise ValueError(f"empty case or slot in {case!r} -> {slot!r}")
        object.__setattr__(self, "case_to_slot", dict(self.case_to_slot))

    def slots_for(self, analyses: Iterable[MorphAnalysis]) -> set[str]:
        return {self.case_to_slot[a.case] for a in analyses
                if a.pos is Pos.NOUN and a.case in self.case_to_slot}


# -- filter statistics -------------------------------------------------------

@dataclass(frozen=True)
class FilterStats:
    total_sentences: int
    single_verb_sentences: int
    unique_stems_total: int
    unique_stems_single: int

    def __post_init__(self):
        if not 0 <= self.single_verb_sentences <= self.total_sentences:
            raise ValueError("need 0 <= single_verb_sentences <= total_sentences")
        if not 0 <= self.unique_stems_single <= self.unique_stems_total:
            raise ValueError("need 0 <= unique_stems_single <= unique_stems_total")

    @property
    def fraction_single(self) -> float | None:
        if not self.total_sentences:
            return None
        return self.single_verb_sentences / self.total_sentences

    @property
    def fraction_stems(self) -> float | None:
        if not self.unique_stems_total:
            return None
        return self.unique_stems_single / self.unique_stems_total

    def to_dict(self, precision: int = 2) -> dict:
        def rounded(x):
            return None if x is None else round(x, precision)

        return {
            "total_sentences": self.total_sentences,
            "single_verb_sentences": self.single_verb_sentences,
            "fraction_single": rounded(self.fraction_single),
            "unique_stems_total": self.unique_stems_total,
            "unique_stems_single": self.unique_stems_single,
            "fraction_stems": rounded(self.fraction_stems),
            "fraction_single_exact": self.fraction_single,
            "fraction_stems_exact": self.fraction_stems,
        }

    def to_json(self, precision: int = 2) -> str:
        return json.dumps(self.to_dict(precision), indent=2) + "\n"


@dataclass
class FilterTally:
    """Mergeable counterpart of FilterStats that keeps the stem sets."""

    total: int = 0
    single: int = 0
    stems_total: set = field(default_factory=set)
    stems_single: set = field(default_factory=set)

    def observe(self, is_single: bool, stems: Iterable[str], single_stems: Iterable[str] = ()) -> None:
        self.total += 1
        self.stems_total.update(stems)
        if is_single:
            self.single += 1
            self.stems_single.update(single_stems)

    def __add__(self, other: "FilterTally") -> "FilterTally":
        return FilterTally(self.total + other.total, self.single + other.single,
                           self.stems_total | other.stems_total,
                           self.stems_single | other.stems_single)

    def stats(self) -> FilterStats:
        return FilterStats(self.total, self.single, len(self.stems_total), len(self.stems_single))


# -- corpus reading ----------------------------------------------------------

def split_sentences(text: str) -> list[str]:
    """Naive splitter on . ? ! and the Arabic full stop / question mark."""
    return [s.strip() for s in _SENTENCE_END.split(text) if s.strip()]


def read_corpus(text: str, split: bool = False) -> list[list[str]]:
    """One sentence per non-blank line, whitespace-tokenized."""
    lines = text.splitlines()
    if split:
        lines = [s for line in lines for s in split_sentences(line)]
    return [line.split() for line in lines if line.strip()]


# -- verb counting and filtering ---------------------------------------------

def _verb_positions(analyses: Sequence[Sequence[MorphAnalysis]], policy: VerbPolicy) -> list[int]:
    return [i for i, a in enumerate(analyses) if is_verb_candidate(a, policy)]


def _verb_stems(analyses: Sequence[MorphAnalysis]) -> list[str]:
    stems: list[str] = []
    for a in analyses:
        if a.is_verb and a.stem not in stems:
            stems.append(a.stem)
    return stems


def count_verbs(sentence: Sequence[str], analyzer: Analyzer,
                policy: VerbPolicy = VerbPolicy.ANY) -> int:
    return sum(1 for token in sentence if is_verb_candidate(analyzer.analyze(token), policy))


def filter_tally(corpus: Iterable[Sequence[str]], analyzer: Analyzer,
                 policy: VerbPolicy = VerbPolicy.ANY) -> tuple[list[Sequence[str]], FilterTally]:
    retained = []
    tally = FilterTally()
    for sentence in corpus:
        analyses = [analyzer.analyze(t) for t in sentence]
        verbs = _verb_positions(analyses, policy)
        stems = [s for i in verbs for s in _verb_stems(analyses[i])]
        single = len(verbs) == 1
        tally.observe(single, stems, stems if single else ())
        if single:
            retained.append(sentence)
    return retained, tally


def filter_single_verb(corpus: Iterable[Sequence[str]], analyzer: Analyzer,
                       policy: VerbPolicy = VerbPolicy.ANY) -> tuple[list[Sequence[str]], FilterStats]:
    """Keep sentences with exactly one verb candidate.

    Stem sets use every verbal analysis of each verb token, so an
    ambiguous verb contributes all of its candidate stems.
    """
    retained, tally = filter_tally(corpus, analyzer, policy)
    if not tally.total:
        raise EmptyCorpus("corpus has no sentences")
    return retained, tally.stats()


# -- case frames -------------------------------------------------------------

@dataclass(frozen=True)
class CaseFrame:
    stem: str
    frame: Frame
    verb_index: int
    alternative_stems: tuple[str, ...] = ()
    # some noun contributed more than one slot
    ambiguous: bool = False
    # require_clear_subject was set and no subject-case noun was present
    low_confidence: bool = False

    @property
    def flags(self) -> str:
        names = [n for n, on in (("ambiguous", self.ambiguous), ("low_confidence", self.low_confidence)) if on]
        return ",".join(names) or "-"


def extract_case_frame(sentence: Sequence[str], analyzer: Analyzer,
                       heuristics: CaseHeuristics = CaseHeuristics(),
                       policy: VerbPolicy = VerbPolicy.ANY) -> CaseFrame:
    analyses = [analyzer.analyze(t) for t in sentence]
    verbs = _verb_positions(analyses, policy)
    if len(verbs) != 1:
        raise NoVerbFound(f"expected exactly one verb, found {len(verbs)}")
    v = verbs[0]
    stems = _verb_stems(analyses[v])
    slots: set[str] = set()
    ambiguous = False
    has_subject = False
    for i, token_analyses in enumerate(analyses):
        if i == v:
            continue
        token_slots = heuristics.slots_for(token_analyses)
        ambiguous = ambiguous or len(token_slots) > 1
        slots |= token_slots
        has_subject = has_subject or any(
            a.pos is Pos.NOUN and a.case == heuristics.subject_case for a in token_analyses)
    return CaseFrame(
        stem=stems[0],
        frame=Frame.of(slots),
        verb_index=v,
        alternative_stems=tuple(stems[1:]),
        ambiguous=ambiguous,
        low_confidence=heuristics.require_clear_subject and not has_subject,
    )


@dataclass
class RawResult:
    lexicon: FrameLexicon
    tally: FilterTally
    frames: list[tuple[int, CaseFrame]]

    def __add__(self, other: "RawResult") -> "RawResult":
        return RawResult(self.lexicon + other.lexicon, self.tally + other.tally,
                         sorted(self.frames + other.frames, key=lambda p: p[0]))


def extract_raw(corpus: Iterable[Sequence[str]], analyzer: Analyzer,
                heuristics: CaseHeuristics = CaseHeuristics(),
                policy: VerbPolicy = VerbPolicy.ANY, fractional: bool = False,
                first_id: int = 1, source: str = "") -> RawResult:
    """Filter to single-verb sentences and accumulate their case frames.

    With ``fractional`` an ambiguous verb token spreads weight 1/n over its
    n candidate stems; otherwise the leftmost stem gets weight 1.
    """
    lexicon = FrameLexicon(fractional, Provenance.RAW_CASE, source)
    tally = FilterTally()
    frames = []
    for sid, sentence in enumerate(corpus, first_id):
        analyses = [analyzer.analyze(t) for t in sentence]
        verbs = _verb_positions(analyses, policy)
        stems = [s for i in verbs for s in _verb_stems(analyses[i])]
        single = len(verbs) == 1
        tally.observe(single, stems, stems if single else ())
        if not single:
            continue
        cf = extract_case_frame(sentence, analyzer, heuristics, policy)
        frames.append((sid, cf))
        if fractional:
            all_stems = (cf.stem,) + cf.alternative_stems
            for stem in all_stems:
                lexicon.add(stem, cf.frame, Fraction(1, len(all_stems)))
        else:
            lexicon.add(cf.stem, cf.frame)
    return RawResult(lexicon, tally, frames)


def case_frames_tsv(frames: Iterable[tuple[int, CaseFrame]]) -> str:
    lines = ["# sentence_id\tstem\tframe\tflags\talternatives\n"]
    for sid, cf in frames:
        lines.append(f"{sid}\t{cf.stem}\t{cf.frame.canonical}\t{cf.flags}\t{','.join(cf.alternative_stems) or '-'}\n")
    return "".join(lines)
