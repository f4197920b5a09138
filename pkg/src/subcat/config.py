"""Run configuration: defaults, ``key = value`` files, environment."""

from __future__ import annotations

import configparser
import dataclasses
import os
from dataclasses import dataclass

from subcat import evaluate, extraction, lexicon, treebank
from subcat.extraction import CaseHeuristics
from subcat.morphology import UnknownPolicy, VerbPolicy
from subcat.treebank import ExtractionConfig, StemSource

WORKERS_ENV = "SUBCAT_WORKERS"


class UsageError(Exception):
    pass


def _csv(value) -> tuple[str, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(value)
    return tuple(v.strip() for v in str(value).split(",") if v.strip())


def _bool(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {value!r}")


def _case_map(value) -> dict[str, str]:
    if isinstance(value, dict):
        return dict(value)
    out = {}
    for item in _csv(value):
        case, eq, slot = item.partition("=")
        if not eq:
            raise UsageError(f"bad case mapping {item!r}, expected CASE=SLOT")
        out[case.strip()] = slot.strip()
    return out


@dataclass
class RunConfig:
    # treebank traversal
    verb_tags: tuple[str, ...] = ("IV", "PV")
    vp_prefixes: tuple[str, ...] = ("VP",)
    ignore_labels: tuple[str, ...] = treebank.DEFAULT_PUNCTUATION
    strip_suffixes: bool = False
    multiset: bool = False
    stem_source: str = "TREEBANK_LEMMA"
    lemma_separator: str = "@"
    single_vp_only: bool = False
    # raw text
    case_map: dict = dataclasses.field(default_factory=lambda: dict(extraction.DEFAULT_CASE_SLOTS))
    require_subject: bool = False
    policy: str = "ANY"
    unknown: str = "COUNT_AS_ZERO"
    fractional: bool = False
    split_sentences: bool = False
    # noise filter
    binomial_filter: bool = False
    error_rate: float = lexicon.DEFAULT_ERROR_RATE
    significance: float = lexicon.DEFAULT_SIGNIFICANCE
    # evaluation and output
    mode: str = "FRAME_TYPE"
    top_k: int = 10
    precision: int = 2
    workers: int = 1

    _CONVERTERS = {
        "verb_tags": _csv, "vp_prefixes": _csv, "ignore_labels": _csv,
        "strip_suffixes": _bool, "multiset": _bool, "single_vp_only": _bool,
        "require_subject": _bool, "fractional": _bool, "split_sentences": _bool,
        "binomial_filter": _bool, "case_map": _case_map,
        "error_rate": float, "significance": float, "top_k": int, "precision": int, "workers": int,
        "stem_source": lambda v: str(v).upper(), "policy": lambda v: str(v).upper(),
        "mode": lambda v: str(v).upper(), "unknown": lambda v: str(v).upper(),
        "lemma_separator": str,
    }

    def update(self, values: dict) -> None:
        names = {f.name for f in dataclasses.fields(self)}
        for key, value in values.items():
            key = key.replace("-", "_")
            if key not in names:
                raise UsageError(f"unknown configuration key {key!r}")
            try:
                setattr(self, key, self._CONVERTERS[key](value))
            except (ValueError, TypeError) as e:
                raise UsageError(f"bad value for {key}: {e}") from None

    @classmethod
    def load(cls, path: str | None) -> "RunConfig":
        cfg = cls()
        if path:
            parser = configparser.ConfigParser()
            try:
                with open(path, encoding="utf-8") as f:
                    parser.read_string("[DEFAULT]\n" + f.read(), source=path)
            except configparser.Error as e:
                raise UsageError(f"{path}: {e}") from None
            except OSError as e:
                raise UsageError(f"cannot read config: {e}") from None
            values = dict(parser.defaults())
            for section in parser.sections():
                values.update({k: v for k, v in parser.items(section, raw=True)})
            cfg.update(values)
        env = os.environ.get(WORKERS_ENV)
        if env:
            cfg.update({"workers": env})
        return cfg

    def validate(self) -> None:
        try:
            StemSource(self.stem_source)
            VerbPolicy(self.policy)
            UnknownPolicy(self.unknown)
            evaluate.EvalMode(self.mode)
        except ValueError as e:
            raise UsageError(str(e)) from None
        if self.workers < 1:
            raise UsageError("workers must be >= 1")
        if not 0 < self.error_rate < 1 or not 0 < self.significance < 1:
            raise UsageError("error rate and significance must lie in (0, 1)")

    def extraction_config(self) -> ExtractionConfig:
        try:
            return ExtractionConfig(
                verb_tag_substrings=self.verb_tags,
                vp_label_prefixes=self.vp_prefixes,
                ignored_sibling_labels=self.ignore_labels,
                strip_label_suffixes=self.strip_suffixes,
                stem_source=StemSource(self.stem_source),
                lemma_separator=self.lemma_separator,
                multiset_frames=self.multiset,
            )
        except (TypeError, ValueError) as e:
            raise UsageError(str(e)) from None

    def heuristics(self) -> CaseHeuristics:
        try:
            return CaseHeuristics(self.case_map, self.require_subject)
        except ValueError as e:
            raise UsageError(str(e)) from None

    def metadata(self) -> dict:
        meta = {}
        if self.binomial_filter:
            meta["binomial_error_rate"] = self.error_rate
            meta["binomial_significance"] = self.significance
        return meta
