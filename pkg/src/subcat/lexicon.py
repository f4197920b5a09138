"""Frame-frequency lexica: accumulation, merging, normalization, filtering.

A lexicon maps verb stem -> Frame -> count.  Counts are exact: ints in
the default mode, :class:`fractions.Fraction` when fractional weighting is
enabled, so merges are associative bit-for-bit and output does not depend
on shard order.
"""

from __future__ import annotations

import enum
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Iterator, Mapping

from subcat.errors import (
    InvalidRate,
    InvalidSignificance,
    MalformedRow,
    MixedWeightModes,
    NonPositiveWeight,
    UnknownStem,
)

EMPTY_FRAME = "EMPTY"
FRAME_SEPARATOR = "+"

DEFAULT_ERROR_RATE = 0.02
DEFAULT_SIGNIFICANCE = 0.05
# tails for n above this are summed in log space
EXACT_TAIL_LIMIT = 1000


def _escape(label: str) -> str:
    return label.replace("\\", "\\\\").replace("+", "\\+")


def _split_canonical(text: str) -> list[str]:
    labels, buf, i = [], [], 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            buf.append(text[i + 1])
            i += 2
            continue
        if ch == FRAME_SEPARATOR:
            labels.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
        i += 1
    labels.append("".join(buf))
    return labels


@dataclass(frozen=True, order=True)
class Frame:
    """The dependents observed with one verb usage.

    ``labels`` is kept sorted.  Frames are sets unless built with
    ``multiset=True``, in which case repeated labels survive.
    """

    labels: tuple[str, ...] = ()

    def __post_init__(self):
        labels = tuple(sorted(self.labels))
        if any(not label for label in labels):
            raise ValueError("frame labels must be non-empty")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of(cls, labels: Iterable[str], multiset: bool = False) -> "Frame":
        labels = list(labels)
        return cls(tuple(labels) if multiset else tuple(set(labels)))

    @property
    def canonical(self) -> str:
        if not self.labels:
            return EMPTY_FRAME
        return FRAME_SEPARATOR.join(_escape(label) for label in self.labels)

    @classmethod
    def parse(cls, canonical: str) -> "Frame":
        if canonical == EMPTY_FRAME:
            return cls(())
        return cls(tuple(_split_canonical(canonical)))

    def __contains__(self, label: str) -> bool:
        return label in self.labels

    def __len__(self) -> int:
        return len(self.labels)

    def __str__(self) -> str:
        return self.canonical


class Provenance(enum.Enum):
    TREEBANK = "TREEBANK"
    RAW_CASE = "RAW_CASE"


def _check_weight(weight, fractional: bool):
    if isinstance(weight, bool) or not isinstance(weight, (int, float, Rational)):
        raise TypeError(f"weight must be a number, got {weight!r}")
    if weight <= 0:
        raise NonPositiveWeight(f"weight must be positive, got {weight!r}")
    if fractional:
        return Fraction(weight) if not isinstance(weight, float) else Fraction(repr(weight))
    if isinstance(weight, int):
        return weight
    if isinstance(weight, Fraction) and weight.denominator == 1:
        return int(weight)
    raise MixedWeightModes("non-integer weight added to an integer-count lexicon")


class FrameLexicon:
    """stem -> Frame -> count."""

    def __init__(self, fractional: bool = False, provenance: Provenance | None = None,
                 source: str = ""):
        self.fractional = fractional
        self.provenance = provenance
        self.source = source
        self._entries: dict[str, dict[Frame, int | Fraction]] = {}

    @classmethod
    def from_counts(cls, counts: Mapping[str, Mapping[Frame | str, object]], **kwargs) -> "FrameLexicon":
        lex = cls(**kwargs)
        for stem, frames in counts.items():
            for frame, count in frames.items():
                if isinstance(frame, str):
                    frame = Frame.parse(frame)
                lex.add(stem, frame, count)
        return lex

    def add(self, stem: str, frame: Frame, weight=1) -> None:
        if not stem:
            raise ValueError("stem must be non-empty")
        weight = _check_weight(weight, self.fractional)
        frames = self._entries.setdefault(stem, {})
        frames[frame] = frames.get(frame, 0) + weight

    def copy(self) -> "FrameLexicon":
        new = FrameLexicon(self.fractional, self.provenance, self.source)
        new._entries = {stem: dict(frames) for stem, frames in self._entries.items()}
        return new

    # mapping-ish access
    def stems(self) -> list[str]:
        return sorted(self._entries)

    def frames(self, stem: str) -> dict[Frame, int | Fraction]:
        try:
            return dict(self._entries[stem])
        except KeyError:
            raise UnknownStem(stem) from None

    def count(self, stem: str, frame: Frame):
        return self._entries.get(stem, {}).get(frame, 0)

    def items(self) -> Iterator[tuple[str, Frame, int | Fraction]]:
        """All entries, sorted by stem then frame canonical form."""
        for stem in sorted(self._entries):
            frames = self._entries[stem]
            for frame in sorted(frames, key=lambda f: f.canonical):
                yield stem, frame, frames[frame]

    def total(self, stem: str):
        try:
            return sum(self._entries[stem].values())
        except KeyError:
            raise UnknownStem(stem) from None

    def grand_total(self):
        return sum(sum(frames.values()) for frames in self._entries.values())

    def stem_totals(self) -> dict[str, int | Fraction]:
        return {stem: sum(frames.values()) for stem, frames in self._entries.items()}

    def __contains__(self, stem: str) -> bool:
        return stem in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FrameLexicon):
            return NotImplemented
        return self.fractional == other.fractional and self._entries == other._entries

    def __add__(self, other: "FrameLexicon") -> "FrameLexicon":
        return merge(self, other)

    def __repr__(self) -> str:
        mode = "fractional" if self.fractional else "integer"
        return f"FrameLexicon({len(self)} stems, {self.grand_total()} observations, {mode})"


def add_observation(lexicon: FrameLexicon, stem: str, frame: Frame, weight=1) -> FrameLexicon:
    lexicon.add(stem, frame, weight)
    return lexicon


def merge(a: FrameLexicon, b: FrameLexicon) -> FrameLexicon:
    """Pointwise sum of two lexica (commutative, associative, empty is identity)."""
    if a.fractional != b.fractional:
        raise MixedWeightModes("cannot merge integer and fractional lexica")
    if a.provenance and b.provenance and a.provenance != b.provenance:
        raise ValueError(f"cannot merge {a.provenance.value} and {b.provenance.value} lexica")
    sources = sorted({s for src in (a.source, b.source) for s in src.split(",") if s})
    out = FrameLexicon(a.fractional, a.provenance or b.provenance, ",".join(sources))
    for lex in (a, b):
        for stem, frames in lex._entries.items():
            target = out._entries.setdefault(stem, {})
            for frame, count in frames.items():
                target[frame] = target.get(frame, 0) + count
    return out


def merge_all(lexica: Iterable[FrameLexicon], fractional: bool = False) -> FrameLexicon:
    out = FrameLexicon(fractional)
    for lex in lexica:
        out = merge(out, lex)
    return out


def relative_frequencies(lexicon: FrameLexicon, stem: str) -> dict[Frame, float]:
    frames = lexicon.frames(stem)
    total = sum(frames.values())
    return {frame: float(Fraction(count) / total) for frame, count in frames.items()}


def top_k_stems(lexicon: FrameLexicon, k: int) -> list[tuple[str, int | Fraction]]:
    if k < 0:
        raise ValueError("k must be non-negative")
    ranked = sorted(lexicon.stem_totals().items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]


# -- binomial noise filter ---------------------------------------------------

def _as_fraction(x: float) -> Fraction:
    # 0.02 means 1/50, not the nearest binary double
    return Fraction(repr(x)) if isinstance(x, float) else Fraction(x)


@lru_cache(maxsize=4096)
def _exact_tails(n: int, rate: Fraction) -> tuple[tuple[int, ...], int]:
    """Numerators of P(X >= m) for m = 0..n over a common denominator."""
    a, b = rate.numerator, rate.denominator
    q = b - a
    # pmf numerators C(n,k) a^k q^(n-k), accumulated from the top
    tails = [0] * (n + 2)
    acc = 0
    for k in range(n, -1, -1):
        acc += math.comb(n, k) * a ** k * q ** (n - k)
        tails[k] = acc
    return tuple(tails), b ** n


def _log_tail(n: int, m: int, rate: float) -> float:
    log_p, log_q = math.log(rate), math.log1p(-rate)
    log_n1 = math.lgamma(n + 1)
    terms = [log_n1 - math.lgamma(k + 1) - math.lgamma(n - k + 1) + k * log_p + (n - k) * log_q
             for k in range(m, n + 1)]
    top = max(terms)
    return top + math.log(math.fsum(math.exp(t - top) for t in terms))


def _validate_rates(error_rate, significance) -> None:
    if not 0 < error_rate < 1:
        raise InvalidRate(f"error rate must lie in (0, 1), got {error_rate!r}")
    if not 0 < significance < 1:
        raise InvalidSignificance(f"significance must lie in (0, 1), got {significance!r}")


def binomial_tail(n: int, m: int, error_rate: float) -> float:
    """P(X >= m) for X ~ Binomial(n, error_rate)."""
    if not 0 < error_rate < 1:
        raise InvalidRate(f"error rate must lie in (0, 1), got {error_rate!r}")
    if m <= 0:
        return 1.0
    if m > n:
        return 0.0
    if n <= EXACT_TAIL_LIMIT:
        tails, denom = _exact_tails(n, _as_fraction(error_rate))
        return tails[m] / denom
    return math.exp(_log_tail(n, m, float(error_rate)))


def passes_binomial_test(n: int, m: int, error_rate: float = DEFAULT_ERROR_RATE,
                         significance: float = DEFAULT_SIGNIFICANCE) -> bool:
    """Whether ``m`` of ``n`` observations are unlikely to be noise alone."""
    _validate_rates(error_rate, significance)
    if m <= 0:
        return False
    if m > n:
        raise ValueError(f"count {m} exceeds total {n}")
    if n <= EXACT_TAIL_LIMIT:
        tails, denom = _exact_tails(n, _as_fraction(error_rate))
        alpha = _as_fraction(significance)
        return tails[m] * alpha.denominator <= alpha.numerator * denom
    return _log_tail(n, m, float(error_rate)) <= math.log(significance)


def binomial_filter(lexicon: FrameLexicon, error_rate: float = DEFAULT_ERROR_RATE,
                    significance: float = DEFAULT_SIGNIFICANCE) -> FrameLexicon:
    """Drop (stem, frame) entries whose count is consistent with noise.

    With ``n`` the stem total and ``m`` the frame count, an entry is kept
    iff P(X >= m | X ~ Binomial(n, error_rate)) <= significance.
    """
    _validate_rates(error_rate, significance)
    if lexicon.fractional:
        raise MixedWeightModes("binomial filtering needs integer counts")
    out = FrameLexicon(False, lexicon.provenance, lexicon.source)
    for stem in lexicon.stems():
        frames = lexicon._entries[stem]
        n = sum(frames.values())
        kept = {f: c for f, c in frames.items() if passes_binomial_test(n, c, error_rate, significance)}
        if kept:
            out._entries[stem] = kept
    return out


# -- serialization -----------------------------------------------------------

def _parse_count(text: str, fractional: bool):
    if fractional:
        return Fraction(text)
    return int(text)


def to_tsv(lexicon: FrameLexicon, metadata: Mapping[str, object] | None = None) -> str:
    buf = io.StringIO()
    meta = {
        "provenance": lexicon.provenance.value if lexicon.provenance else "",
        "source": lexicon.source,
        "weighting": "fractional" if lexicon.fractional else "integer",
    }
    meta.update(metadata or {})
    for key in sorted(meta):
        buf.write(f"#@ {key}={meta[key]}\n")
    buf.write("# stem\tframe\tcount\trel_freq\n")
    totals = lexicon.stem_totals()
    for stem, frame, count in lexicon.items():
        rel = float(Fraction(count) / totals[stem])
        buf.write(f"{stem}\t{frame.canonical}\t{count}\t{rel:.6f}\n")
    return buf.getvalue()


def read_tsv(text: str, source: str | None = None) -> FrameLexicon:
    meta: dict[str, str] = {}
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if line.startswith("#@"):
            key, _, value = line[2:].strip().partition("=")
            meta[key] = value
            continue
        if line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (3, 4) or not fields[0] or not fields[1]:
            raise MalformedRow("expected stem, frame, count[, rel_freq]", source=source, line=lineno)
        rows.append((lineno, fields))
    fractional = meta.get("weighting") == "fractional"
    provenance = Provenance(meta["provenance"]) if meta.get("provenance") else None
    lex = FrameLexicon(fractional, provenance, meta.get("source", ""))
    for lineno, fields in rows:
        try:
            count = _parse_count(fields[2], fractional)
            lex.add(fields[0], Frame.parse(fields[1]), count)
        except (ValueError, TypeError, ZeroDivisionError) as e:
            raise MalformedRow(f"bad count {fields[2]!r}: {e}", source=source, line=lineno) from None
    return lex


def to_json(lexicon: FrameLexicon, metadata: Mapping[str, object] | None = None) -> str:
    def count_value(count):
        if isinstance(count, Fraction):
            return int(count) if count.denominator == 1 else str(count)
        return count

    entries: dict[str, dict[str, object]] = {}
    for stem, frame, count in lexicon.items():
        entries.setdefault(stem, {})[frame.canonical] = count_value(count)
    doc = {
        "provenance": lexicon.provenance.value if lexicon.provenance else None,
        "source": lexicon.source,
        "weighting": "fractional" if lexicon.fractional else "integer",
        "metadata": dict(metadata or {}),
        "entries": entries,
    }
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def read_json(text: str) -> FrameLexicon:
    doc = json.loads(text)
    fractional = doc.get("weighting") == "fractional"
    provenance = Provenance(doc["provenance"]) if doc.get("provenance") else None
    lex = FrameLexicon(fractional, provenance, doc.get("source", ""))
    for stem, frames in doc["entries"].items():
        for canonical, count in frames.items():
            lex.add(stem, Frame.parse(canonical), Fraction(count) if fractional else count)
    return lex


def load(path) -> FrameLexicon:
    with open(path, encoding="utf-8") as f:
        text = f.read()
    if str(path).endswith(".json"):
        return read_json(text)
    return read_tsv(text, source=str(path))
