"""Morphological analysis interface, a lexicon-backed analyzer, ambiguity stats.

Any object with an ``analyze(token) -> list[MorphAnalysis]`` method is an
analyzer.  :class:`LexiconAnalyzer` reads a TSV table, one analysis per row::

    surface <TAB> stem <TAB> pos <TAB> feature=value;feature=value
"""

from __future__ import annotations

import enum
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Protocol, Sequence

from subcat.errors import EmptyCorpus, EmptyLexicon, MalformedRow, UnknownPos


class Pos(enum.Enum):
    VERB = "VERB"
    NOUN = "NOUN"
    ADJ = "ADJ"
    OTHER = "OTHER"


@dataclass(frozen=True)
class MorphAnalysis:
    surface: str
    stem: str
    pos: Pos
    features: Mapping[str, str] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if not self.surface or not self.stem:
            raise ValueError("surface and stem must be non-empty")

    @property
    def case(self) -> str | None:
        return self.features.get("case")

    @property
    def is_verb(self) -> bool:
        return self.pos is Pos.VERB


class Analyzer(Protocol):
    def analyze(self, token: str) -> list[MorphAnalysis]: ...


class VerbPolicy(enum.Enum):
    ANY = "ANY"
    ALL = "ALL"
    MAJORITY = "MAJORITY"


class UnknownPolicy(enum.Enum):
    COUNT_AS_ZERO = "COUNT_AS_ZERO"
    COUNT_AS_ONE = "COUNT_AS_ONE"
    SKIP = "SKIP"


class LexiconAnalyzer:
    """Table lookup analyzer; rows for one surface come back in file order."""

    def __init__(self, analyses: Iterable[MorphAnalysis] = ()):
        self._table: dict[str, list[MorphAnalysis]] = {}
        for a in analyses:
            self._table.setdefault(a.surface, []).append(a)

    def analyze(self, token: str) -> list[MorphAnalysis]:
        return list(self._table.get(token, ()))

    def __contains__(self, token: str) -> bool:
        return token in self._table

    def __len__(self) -> int:
        return sum(len(v) for v in self._table.values())

    def surfaces(self) -> list[str]:
        return list(self._table)


def _parse_features(text: str, lineno: int, source: str | None) -> dict[str, str]:
    feats: dict[str, str] = {}
    for item in filter(None, (p.strip() for p in text.split(";"))):
        key, eq, value = item.partition("=")
        key, value = key.strip(), value.strip()
        if not eq or not key or not value:
            raise MalformedRow(f"bad feature {item!r}, expected name=value", source=source, line=lineno)
        if key in feats:
            raise MalformedRow(f"duplicate feature {key!r}", source=source, line=lineno)
        feats[key] = value
    return feats


def load_analyzer_lexicon(text: str, source: str | None = None) -> LexiconAnalyzer:
    """Build an analyzer from TSV text.  Blank and ``#`` lines are skipped."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) not in (3, 4):
            raise MalformedRow(f"expected 3 or 4 tab-separated columns, got {len(cols)}",
                               source=source, line=lineno)
        surface, stem, pos = (c.strip() for c in cols[:3])
        if not surface or not stem:
            raise MalformedRow("empty surface or stem", source=source, line=lineno)
        try:
            pos_value = Pos(pos)
        except ValueError:
            raise UnknownPos(f"unknown part of speech {pos!r}", source=source, line=lineno) from None
        feats = _parse_features(cols[3], lineno, source) if len(cols) == 4 else {}
        rows.append(MorphAnalysis(surface, stem, pos_value, feats))
    if not rows:
        raise EmptyLexicon("analyzer lexicon has no entries", source=source)
    return LexiconAnalyzer(rows)


def read_analyzer(path) -> LexiconAnalyzer:
    with open(path, encoding="utf-8") as f:
        return load_analyzer_lexicon(f.read(), source=str(path))


def is_verb_candidate(analyses: Sequence[MorphAnalysis], policy: VerbPolicy = VerbPolicy.ANY) -> bool:
    if not analyses:
        return False
    verbs = sum(1 for a in analyses if a.is_verb)
    if policy is VerbPolicy.ANY:
        return verbs > 0
    if policy is VerbPolicy.ALL:
        return verbs == len(analyses)
    return 2 * verbs > len(analyses)


# -- ambiguity statistics ----------------------------------------------------

@dataclass
class AmbiguityTally:
    """Mergeable accumulator behind :class:`AmbiguityReport`."""

    histogram: Counter = field(default_factory=Counter)
    max_surfaces: set = field(default_factory=set)

    @property
    def max(self) -> int:
        return max(self.histogram) if self.histogram else 0

    def observe(self, surface: str, k: int) -> None:
        top = self.max if self.histogram else -1
        self.histogram[k] += 1
        if k > top:
            self.max_surfaces = {surface}
        elif k == top:
            self.max_surfaces.add(surface)

    def __add__(self, other: "AmbiguityTally") -> "AmbiguityTally":
        hist = self.histogram + other.histogram
        top = max(hist) if hist else 0
        surfaces = set()
        for part in (self, other):
            if part.histogram and part.max == top:
                surfaces |= part.max_surfaces
        return AmbiguityTally(hist, surfaces)

    def report(self) -> "AmbiguityReport":
        n = sum(self.histogram.values())
        if n == 0:
            raise EmptyCorpus("no tokens to compute ambiguity over")
        mean = math.fsum(k * c for k, c in self.histogram.items()) / n
        var = math.fsum(c * (k - mean) ** 2 for k, c in self.histogram.items()) / n
        return AmbiguityReport(
            token_count=n,
            mean=mean,
            std_dev=math.sqrt(var),
            max=self.max,
            max_tokens=sorted(self.max_surfaces),
            histogram=dict(sorted(self.histogram.items())),
        )


@dataclass(frozen=True)
class AmbiguityReport:
    token_count: int
    mean: float
    std_dev: float
    max: int
    max_tokens: list[str]
    histogram: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "token_count": self.token_count,
            "mean": self.mean,
            "std_dev": self.std_dev,
            "max": self.max,
            "max_tokens": list(self.max_tokens),
            "histogram": {str(k): v for k, v in self.histogram.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def histogram_text(self, width: int = 50) -> str:
        peak = max(self.histogram.values())
        lines = [f"# analyses/token: mean={self.mean:.4f} sd={self.std_dev:.4f} "
                 f"max={self.max} tokens={self.token_count}"]
        for k, count in self.histogram.items():
            bar = "#" * max(1, round(width * count / peak))
            lines.append(f"{k:>4} {count:>8} {bar}")
        return "\n".join(lines) + "\n"


def analysis_count(token: str, analyzer: Analyzer, unknown_policy: UnknownPolicy) -> int | None:
    """Number of analyses for ``token``, or None when the token is skipped."""
    k = len(analyzer.analyze(token))
    if k:
        return k
    if unknown_policy is UnknownPolicy.SKIP:
        return None
    return 1 if unknown_policy is UnknownPolicy.COUNT_AS_ONE else 0


def ambiguity_tally(tokens: Iterable[str], analyzer: Analyzer,
                    unknown_policy: UnknownPolicy = UnknownPolicy.COUNT_AS_ZERO) -> AmbiguityTally:
    tally = AmbiguityTally()
    for token in tokens:
        k = analysis_count(token, analyzer, unknown_policy)
        if k is not None:
            tally.observe(token, k)
    return tally


def ambiguity_stats(tokens: Iterable[str], analyzer: Analyzer,
                    unknown_policy: UnknownPolicy = UnknownPolicy.COUNT_AS_ZERO) -> AmbiguityReport:
    """Analyses-per-token statistics over running tokens (population sd)."""
    return ambiguity_tally(tokens, analyzer, unknown_policy).report()
