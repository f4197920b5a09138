"""Seeded synthetic corpora: a treebank, its raw text, and an analyzer table.

The three outputs describe the same sentences, so the treebank path and the
raw case-marking path can be run side by side.  Nouns carry case endings in
the raw text (-u nominative, -a accusative, -i genitive) and a handful of
unmarked forms are ambiguous between all three cases.

    python -m subcat.synth OUTDIR [--sentences N] [--seed S]
"""

from __future__ import annotations

import argparse
import random
from dataclasses import dataclass
from pathlib import Path

from subcat.trees import TreeNode, serialize

# stem, perfective surface, imperfective surface, frame preferences
VERBS = [
    ("qAl", "qAl+a", "yaqul+u", ["SBAR", "NP-OBJ", "SBAR"]),
    ("kAn", "kAn+a", "yakun+u", ["VP", "NP-PRD", "VP"]),
    ("saj~al", "saj~al+a", "yusaj~il+u", ["NP-OBJ", "NP-OBJ PP"]),
    (">aEolan", ">aEolan+a", "yuEolin+u", ["SBAR", "NP-OBJ"]),
    ("$Arik", "$Arak+a", "yu$Arik+u", ["PP", "NP-OBJ PP"]),
    ("daEA", "daEA", "yadoEu", ["NP-OBJ", "NP-OBJ PP", "S"]),
    ("fAz", "fAz+a", "yafuwz+u", ["PP", "NP-OBJ"]),
    ("balag", "balag+a", "yabolug+u", ["NP-OBJ"]),
    (">aDAf", ">aDAf+a", "yuDiyf+u", ["SBAR", "NP-OBJ"]),
    ("lotaqiy", "{iltaqaY", "yaltaqiy", ["NP-OBJ", "PP", ""]),
]

NOUNS = ["ra}iys", "wazir", "Hukuwmat", "majolis", "bayAn", "qarAr", "mu&otamar",
         "jA}izat", "$arikat", "mabolag", "fariyq", "wafd", "Sa$ab", "ta$riyE"]

PREPS = ["fiy", "EalaY", "min", "maEa", "<ilaY"]

CASE_ENDING = {"NOM": "u", "ACC": "a", "GEN": "i"}


@dataclass
class SyntheticCorpus:
    trees: list[TreeNode]
    treebank_text: str
    raw_text: str
    analyzer_text: str


class _Builder:
    def __init__(self, rng: random.Random, ambiguous_rate: float):
        self.rng = rng
        self.ambiguous_rate = ambiguous_rate
        self.tokens: list[str] = []

    def noun(self, case: str) -> TreeNode:
        root = self.rng.choice(NOUNS)
        if self.rng.random() < self.ambiguous_rate:
            surface = root
        else:
            surface = root + "+" + CASE_ENDING[case]
        self.tokens.append(surface)
        return TreeNode.leaf("NOUN", surface)

    def np(self, label: str, case: str) -> TreeNode:
        return TreeNode(label, (self.noun(case),))

    def pp(self) -> TreeNode:
        prep = self.rng.choice(PREPS)
        self.tokens.append(prep)
        return TreeNode("PP", (TreeNode.leaf("PREP", prep), self.np("NP", "GEN")))

    def verb(self, depth: int) -> TreeNode:
        stem, pv, iv, _ = self.rng.choice(VERBS)
        passive = self.rng.random() < 0.1
        if self.rng.random() < 0.5:
            tag, surface = ("PV_PASS" if passive else "PV"), pv
        else:
            tag, surface = ("IV_PASS" if passive else "IV"), iv
        self.tokens.append(surface)
        token = f"{surface}@{stem}" if self.rng.random() < 0.9 else surface
        leaf = TreeNode.leaf(tag, token)
        # occasionally wrap the verb with a clitic in a preterminal group
        if self.rng.random() < 0.1:
            self.tokens.insert(len(self.tokens) - 1, "wa")
            return TreeNode("VERB", (TreeNode.leaf("CONJ", "wa"), leaf))
        return leaf

    def vp(self, depth: int) -> TreeNode:
        # verbless VP (nominal predicate); treebank skips it
        if depth == 0 and self.rng.random() < 0.06:
            return TreeNode("VP", (self.np("NP-PRD", "NOM"), self.pp()))
        verb = self.verb(depth)
        stem = _stem_of(verb)
        prefs = next(v[3] for v in VERBS if v[0] == stem)
        frame = self.rng.choice(prefs).split()
        children = [verb]
        last_start = len(self.tokens)
        if self.rng.random() < 0.6:
            children.append(self.np("NP-SBJ", "NOM"))
        for label in frame:
            if label:
                last_start = len(self.tokens)
            if label in ("SBAR", "S", "VP") and depth >= 2:
                label = "NP-OBJ"
            if label == "NP-OBJ":
                children.append(self.np("NP-OBJ", "ACC"))
            elif label == "NP-PRD":
                children.append(self.np("NP-PRD", "ACC"))
            elif label == "PP":
                children.append(self.pp())
            elif label == "SBAR":
                self.tokens.append(">an~a")
                children.append(TreeNode("SBAR", (TreeNode.leaf("SUB_CONJ", ">an~a"),
                                                  TreeNode("S", (self.vp(depth + 1),)))))
            elif label == "S":
                children.append(TreeNode("S", (self.vp(depth + 1),)))
            elif label == "VP":
                children.append(self.vp(depth + 1))
        if self.rng.random() < 0.2:
            last_start = len(self.tokens)
            children.append(self.pp())
        if len(children) > 2 and self.rng.random() < 0.1:
            # comma before the last dependent; tokens are already in order
            self.tokens.insert(last_start, ",")
            children.insert(len(children) - 1, TreeNode.leaf("PUNC", ","))
        return TreeNode("VP", tuple(children))

    def sentence(self) -> TreeNode:
        self.tokens = []
        children = [self.vp(0)]
        self.tokens.append(".")
        children.append(TreeNode.leaf("PUNC", "."))
        return TreeNode("S", tuple(children))


def _stem_of(verb: TreeNode) -> str:
    leaf = verb if verb.is_leaf else verb.children[-1]
    token = leaf.token
    if "@" in token:
        return token.rsplit("@", 1)[1]
    for stem, pv, iv, _ in VERBS:
        if token in (pv, iv):
            return stem
    raise ValueError(token)


def analyzer_table() -> str:
    rows = ["# surface\tstem\tpos\tfeatures"]
    for stem, pv, iv, _ in VERBS:
        rows.append(f"{pv}\t{stem}\tVERB\taspect=PERF")
        rows.append(f"{iv}\t{stem}\tVERB\taspect=IMPF")
    for root in NOUNS:
        for case, ending in CASE_ENDING.items():
            rows.append(f"{root}+{ending}\t{root}\tNOUN\tcase={case}")
        # unvocalized form: case unknown from the surface
        for case in CASE_ENDING:
            rows.append(f"{root}\t{root}\tNOUN\tcase={case}")
    for prep in PREPS:
        rows.append(f"{prep}\t{prep}\tOTHER\t")
    rows.append(">an~a\t>an~a\tOTHER\t")
    rows.append(".\t.\tOTHER\t")
    rows.append(",\t,\tOTHER\t")
    rows.append("wa\twa\tOTHER\t")
    # a verb/noun homograph, like an unvocalized Arabic form
    rows.append("Hukuwmat+a\tHakam\tVERB\taspect=PERF")
    return "\n".join(rows) + "\n"


def generate(sentences: int = 1000, seed: int = 13, ambiguous_rate: float = 0.1) -> SyntheticCorpus:
    rng = random.Random(seed)
    builder = _Builder(rng, ambiguous_rate)
    trees, raw = [], []
    for _ in range(sentences):
        trees.append(builder.sentence())
        raw.append(" ".join(builder.tokens))
    return SyntheticCorpus(
        trees=trees,
        treebank_text="".join(serialize(t) + "\n\n" for t in trees),
        raw_text="\n".join(raw) + "\n",
        analyzer_text=analyzer_table(),
    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("outdir", type=Path)
    ap.add_argument("--sentences", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=13)
    args = ap.parse_args(argv)
    corpus = generate(args.sentences, args.seed)
    args.outdir.mkdir(parents=True, exist_ok=True)
    (args.outdir / "treebank.tb").write_text(corpus.treebank_text, encoding="utf-8")
    (args.outdir / "corpus.txt").write_text(corpus.raw_text, encoding="utf-8")
    (args.outdir / "analyzer.tsv").write_text(corpus.analyzer_text, encoding="utf-8")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
