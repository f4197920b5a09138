"""Verb subcategorization frame acquisition from treebanks and raw text."""

from subcat.errors import DataError
from subcat.lexicon import Frame, FrameLexicon, Provenance
from subcat.morphology import Analyzer, LexiconAnalyzer, MorphAnalysis, Pos
from subcat.trees import TreeNode, parse_bracketed, serialize

__all__ = [
    "Analyzer",
    "DataError",
    "Frame",
    "FrameLexicon",
    "LexiconAnalyzer",
    "MorphAnalysis",
    "Pos",
    "Provenance",
    "TreeNode",
    "parse_bracketed",
    "serialize",
]

__version__ = "0.1.0"
