"""Verb instances and frames from bracketed treebanks.

For every VP node in a sentence: find the verb among the VP's immediate
children by its POS tag, take its stem, and record the labels of the
remaining children as the frame.  VPs without a verb are skipped and
counted.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from subcat.extraction import FilterStats, FilterTally
from subcat.lexicon import Frame, FrameLexicon, Provenance
from subcat.trees import TreeNode

DEFAULT_PUNCTUATION = ("PUNC", ".", ",", ":", "``", "''", "-LRB-", "-RRB-")


class StemSource(enum.Enum):
    TREEBANK_LEMMA = "TREEBANK_LEMMA"
    SURFACE_FORM = "SURFACE_FORM"


@dataclass(frozen=True)
class ExtractionConfig:
    verb_tag_substrings: tuple[str, ...] = ("IV", "PV")
    vp_label_prefixes: tuple[str, ...] = ("VP",)
    ignored_sibling_labels: tuple[str, ...] = DEFAULT_PUNCTUATION
    strip_label_suffixes: bool = False
    # TREEBANK_LEMMA falls back to the surface form when a leaf has no lemma
    stem_source: StemSource = StemSource.TREEBANK_LEMMA
    # leaf tokens may carry a lemma as ``surface<sep>lemma``
    lemma_separator: str = "@"
    multiset_frames: bool = False

    def __post_init__(self):
        for name in ("verb_tag_substrings", "vp_label_prefixes", "ignored_sibling_labels"):
            value = getattr(self, name)
            if isinstance(value, str):
                raise TypeError(f"{name} must be a sequence of strings")
            object.__setattr__(self, name, tuple(value))
        if not self.verb_tag_substrings or not all(self.verb_tag_substrings):
            raise ValueError("verb_tag_substrings must be non-empty")
        if not self.vp_label_prefixes or not all(self.vp_label_prefixes):
            raise ValueError("vp_label_prefixes must be non-empty")
        if not self.lemma_separator:
            raise ValueError("lemma_separator must be non-empty")

    def is_vp(self, label: str) -> bool:
        return label.startswith(self.vp_label_prefixes)

    def is_verb_tag(self, label: str) -> bool:
        return any(s in label for s in self.verb_tag_substrings)

    def frame_label(self, label: str) -> str | None:
        """Label as it enters a frame, or None if the sibling is ignored."""
        if label in self.ignored_sibling_labels:
            return None
        if self.strip_label_suffixes:
            # bracketed labels such as -LRB- and -NONE- keep their own hyphens
            start = label.find("-", 1) + 1 if label.startswith("-") else 1
            cut = label.find("-", max(start, 1))
            if cut > 0:
                label = label[:cut]
            if label in self.ignored_sibling_labels:
                return None
        return label

    def stem_of(self, token: str) -> str:
        surface, sep, lemma = token.rpartition(self.lemma_separator)
        if not sep or not surface:
            return token
        if self.stem_source is StemSource.TREEBANK_LEMMA and lemma:
            return lemma
        return surface


@dataclass(frozen=True)
class VerbInstance:
    stem: str
    verb_tag: str
    frame: Frame
    sentence_id: int
    vp_path: tuple[int, ...]

    def __post_init__(self):
        if not self.stem:
            raise ValueError("stem must be non-empty")

    def to_row(self) -> str:
        return "\t".join([str(self.sentence_id), self.stem, self.verb_tag,
                          self.frame.canonical, format_path(self.vp_path)])


def format_path(path: Sequence[int]) -> str:
    return "/" + "/".join(str(i) for i in path)


def parse_path(text: str) -> tuple[int, ...]:
    if not text.startswith("/"):
        raise ValueError(f"bad path {text!r}")
    return tuple(int(p) for p in text[1:].split("/") if p)


@dataclass(frozen=True)
class CensusStats:
    """Corpus-level counts; ``+`` merges two censuses."""

    sentences: int = 0
    vps: int = 0
    vps_with_verb: int = 0
    stems: frozenset[str] = field(default_factory=frozenset)

    @property
    def skipped_vps(self) -> int:
        return self.vps - self.vps_with_verb

    @property
    def unique_stems(self) -> int:
        return len(self.stems)

    @property
    def coverage(self) -> float | None:
        if not self.vps:
            return None
        return self.vps_with_verb / self.vps

    def __add__(self, other: "CensusStats") -> "CensusStats":
        return CensusStats(self.sentences + other.sentences, self.vps + other.vps,
                           self.vps_with_verb + other.vps_with_verb, self.stems | other.stems)

    def to_dict(self, precision: int = 2) -> dict:
        cov = self.coverage
        return {
            "sentences": self.sentences,
            "vps": self.vps,
            "vps_with_verb": self.vps_with_verb,
            "skipped_vps": self.skipped_vps,
            "unique_stems": self.unique_stems,
            "coverage": None if cov is None else round(cov, precision),
            "coverage_exact": cov,
        }


def find_verb_phrases(tree: TreeNode, config: ExtractionConfig = ExtractionConfig()
                      ) -> list[tuple[tuple[int, ...], TreeNode]]:
    """Every VP-labelled node, nested ones included, in pre-order."""
    return [(path, node) for path, node in tree.subtrees()
            if not node.is_leaf and config.is_vp(node.label)]


def _find_verb(vp: TreeNode, config: ExtractionConfig) -> tuple[int, TreeNode] | None:
    # immediate tagged children first-class; one preterminal group level below.
    # Nested VPs are visited on their own, so never look inside them here.
    for i, child in enumerate(vp.children):
        if child.is_leaf:
            if config.is_verb_tag(child.label):
                return i, child
        elif child.is_preterminal_group and not config.is_vp(child.label):
            for leaf in child.children:
                if config.is_verb_tag(leaf.label):
                    return i, leaf
    return None


def extract_verb_instance(vp: TreeNode, config: ExtractionConfig = ExtractionConfig(),
                          sentence_id: int = 0, vp_path: Sequence[int] = ()) -> VerbInstance | None:
    found = _find_verb(vp, config)
    if found is None:
        return None
    index, verb = found
    labels = []
    for i, child in enumerate(vp.children):
        if i == index:
            continue
        label = config.frame_label(child.label)
        if label is not None:
            labels.append(label)
    return VerbInstance(
        stem=config.stem_of(verb.token),
        verb_tag=verb.label,
        frame=Frame.of(labels, multiset=config.multiset_frames),
        sentence_id=sentence_id,
        vp_path=tuple(vp_path),
    )


def sentence_instances(tree: TreeNode, sentence_id: int,
                       config: ExtractionConfig = ExtractionConfig()) -> tuple[list[VerbInstance], int]:
    """Instances for one tree plus its VP count."""
    vps = find_verb_phrases(tree, config)
    out = []
    for path, vp in vps:
        inst = extract_verb_instance(vp, config, sentence_id, path)
        if inst is not None:
            out.append(inst)
    return out, len(vps)


@dataclass
class TreebankResult:
    """One pass over a treebank: instances, census and single-VP tally."""

    instances: list[VerbInstance] = field(default_factory=list)
    census: CensusStats = field(default_factory=CensusStats)
    tally: FilterTally = field(default_factory=FilterTally)
    single_vp_ids: set = field(default_factory=set)

    def __add__(self, other: "TreebankResult") -> "TreebankResult":
        return TreebankResult(self.instances + other.instances, self.census + other.census,
                              self.tally + other.tally, self.single_vp_ids | other.single_vp_ids)


def process_treebank(trees: Iterable[TreeNode], config: ExtractionConfig = ExtractionConfig(),
                     first_id: int = 1) -> TreebankResult:
    result = TreebankResult()
    sentences = vps = 0
    for sid, tree in enumerate(trees, first_id):
        found, n_vps = sentence_instances(tree, sid, config)
        result.instances.extend(found)
        sentences += 1
        vps += n_vps
        stems = {i.stem for i in found}
        # the treebank counterpart of single-verb filtering counts VP nodes
        single = n_vps == 1
        result.tally.observe(single, stems, stems if single else ())
        if single:
            result.single_vp_ids.add(sid)
    result.census = CensusStats(sentences, vps, len(result.instances),
                                frozenset(i.stem for i in result.instances))
    return result


def extract_frames(trees: Iterable[TreeNode], config: ExtractionConfig = ExtractionConfig(),
                   first_id: int = 1) -> tuple[list[VerbInstance], CensusStats]:
    result = process_treebank(trees, config, first_id)
    return result.instances, result.census


def filter_single_vp(trees: Sequence[TreeNode], config: ExtractionConfig = ExtractionConfig(),
                     first_id: int = 1) -> tuple[list[TreeNode], FilterStats]:
    """Keep sentences with exactly one VP node."""
    result = process_treebank(trees, config, first_id)
    retained = [t for sid, t in enumerate(trees, first_id) if sid in result.single_vp_ids]
    return retained, result.tally.stats()


def build_lexicon(instances: Iterable[VerbInstance], source: str = "") -> FrameLexicon:
    lex = FrameLexicon(provenance=Provenance.TREEBANK, source=source)
    for inst in instances:
        lex.add(inst.stem, inst.frame)
    return lex


def instances_tsv(instances: Iterable[VerbInstance]) -> str:
    header = "# sentence_id\tstem\tverb_tag\tframe\tvp_path\n"
    return header + "".join(inst.to_row() + "\n" for inst in instances)


def read_instances_tsv(text: str) -> list[VerbInstance]:
    out = []
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        sid, stem, tag, frame, path = line.split("\t")
        out.append(VerbInstance(stem, tag, Frame.parse(frame), int(sid), parse_path(path)))
    return out
