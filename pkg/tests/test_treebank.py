import random

import pytest
from hypothesis import given, settings, strategies as st

from subcat.lexicon import Frame
from subcat.treebank import (
    CensusStats,
    ExtractionConfig,
    StemSource,
    build_lexicon,
    extract_frames,
    extract_verb_instance,
    filter_single_vp,
    find_verb_phrases,
    instances_tsv,
    read_instances_tsv,
)
from subcat.trees import TreeNode, parse_bracketed, serialize

import oracle


def tree(text):
    return parse_bracketed(text)[0]


def as_rows(instances):
    return [(i.sentence_id, i.stem, i.verb_tag, i.frame.canonical, i.vp_path) for i in instances]


def test_no_vp():
    assert find_verb_phrases(tree("(S (NP (NN dog)))")) == []


def test_single_vp_path():
    vps = find_verb_phrases(tree("(S (VP (PV qAl) (SBAR (S (NN x)))))"))
    assert [p for p, _ in vps] == [(0,)]


def test_nested_vps_outer_first():
    t = tree("(S (VP (PV kAn) (VP (IV yaqul) (NP (NN x)))))")
    vps = find_verb_phrases(t)
    assert [p for p, _ in vps] == [(0,), (0, 1)]
    assert all(t.at(p) is node for p, node in vps)


def test_qal_with_sbar():
    vp = tree("(VP (PV qAl) (SBAR (SUB_CONJ >an) (S (NP (NN x)))))")
    inst = extract_verb_instance(vp)
    assert inst.stem == "qAl"
    assert inst.frame == Frame(("SBAR",))


def test_verbless_vp_is_skipped():
    assert extract_verb_instance(tree("(VP (NP (NN x)) (PP (IN y) (NP (NN z))))")) is None


def test_passive_tag_and_punctuation():
    inst = extract_verb_instance(tree("(VP (IV_PASS yuqAl) (NP-SBJ (NN x)) (PUNC .))"))
    assert inst.verb_tag == "IV_PASS"
    assert inst.frame.canonical == "NP-SBJ"


def test_leftmost_verb_wins():
    inst = extract_verb_instance(tree("(VP (NP (NN a)) (PV first) (IV second))"))
    assert inst.stem == "first"
    assert inst.frame.canonical == "IV+NP"


def test_verb_inside_preterminal_group():
    inst = extract_verb_instance(tree("(VP (VERB (CONJ wa) (PV qAl)) (NP-OBJ (NN x)))"))
    assert (inst.stem, inst.verb_tag, inst.frame.canonical) == ("qAl", "PV", "NP-OBJ")


def test_verb_not_taken_from_nested_vp():
    t = tree("(VP (NP (NN a)) (VP (PV qAl)))")
    assert extract_verb_instance(t) is None


def test_frame_is_a_set_by_default():
    vp = tree("(VP (PV x) (NP (NN a)) (NP (NN b)))")
    assert extract_verb_instance(vp).frame.labels == ("NP",)
    multi = extract_verb_instance(vp, ExtractionConfig(multiset_frames=True))
    assert multi.frame.labels == ("NP", "NP")


def test_strip_suffixes():
    vp = tree("(VP (PV x) (NP-OBJ (NN a)) (NP-SBJ-1 (NN b)) (-NONE- *T*))")
    assert extract_verb_instance(vp).frame.canonical == "-NONE-+NP-OBJ+NP-SBJ-1"
    stripped = extract_verb_instance(vp, ExtractionConfig(strip_label_suffixes=True))
    assert stripped.frame.canonical == "-NONE-+NP"


def test_stem_sources():
    vp = tree("(VP (PV qAl+a@qAl))")
    assert extract_verb_instance(vp).stem == "qAl"
    surface = ExtractionConfig(stem_source=StemSource.SURFACE_FORM)
    assert extract_verb_instance(vp, surface).stem == "qAl+a"
    assert extract_verb_instance(tree("(VP (PV qAl+a))")).stem == "qAl+a"


def test_substring_matching_is_configurable():
    vp = tree("(VP (VBD sat) (PP (IN on) (NP (NN mat))))")
    assert extract_verb_instance(vp) is None
    inst = extract_verb_instance(vp, ExtractionConfig(verb_tag_substrings=("VB",)))
    assert inst.stem == "sat"


def test_config_validation():
    with pytest.raises(ValueError):
        ExtractionConfig(verb_tag_substrings=())
    with pytest.raises(TypeError):
        ExtractionConfig(verb_tag_substrings="IV")


def test_empty_corpus():
    instances, census = extract_frames([])
    assert instances == []
    assert (census.sentences, census.vps, census.vps_with_verb, census.unique_stems) == (0, 0, 0, 0)
    assert census.coverage is None


def test_four_tree_fixture(fixtures):
    text = (fixtures / "four.tb").read_text()
    instances, census = extract_frames(parse_bracketed(text))
    assert (census.vps, census.vps_with_verb) == (5, 4)
    assert census.coverage == pytest.approx(0.8)
    expected, total = oracle.brute_force_instances(oracle.read_sexprs(text))
    assert total == 5
    assert as_rows(instances) == expected


def test_mini_fixture_against_hand_list(fixtures):
    instances, census = extract_frames(parse_bracketed((fixtures / "mini.tb").read_text()))
    assert as_rows(instances) == [
        (1, "qAl", "PV", "NP-SBJ+SBAR", (0,)),
        (1, "daEam", "IV", "NP-OBJ", (0, 2, 1, 1)),
        (2, "kAn", "PV", "NP-SBJ+VP", (0,)),
        (2, "$Arik", "IV", "PP", (0, 2)),
        (3, ">aEolan", "PV_PASS", "NP-SBJ+PP", (0,)),
        (4, "qAl", "IV_PASS", "NP-SBJ", (0,)),
        (6, "saj~al+a", "PV", "NP-OBJ", (0,)),
    ]
    assert (census.sentences, census.vps, census.skipped_vps, census.unique_stems) == (6, 8, 1, 6)


def test_single_vp_filter(fixtures):
    trees = parse_bracketed((fixtures / "mini.tb").read_text())
    retained, stats = filter_single_vp(trees)
    assert retained == [trees[i] for i in (2, 3, 4, 5)]
    assert (stats.total_sentences, stats.single_verb_sentences) == (6, 4)
    assert (stats.unique_stems_total, stats.unique_stems_single) == (6, 3)


def test_instances_tsv_roundtrip(fixtures):
    instances, _ = extract_frames(parse_bracketed((fixtures / "synthetic.tb").read_text()))
    text = instances_tsv(instances)
    assert read_instances_tsv(text) == instances
    assert text.splitlines()[1].split("\t")[4].startswith("/")


def test_census_merge_is_commutative():
    a = CensusStats(2, 3, 2, frozenset({"x"}))
    b = CensusStats(1, 1, 0, frozenset({"x", "y"}))
    assert a + b == b + a
    assert (a + b).unique_stems == 2
    assert a + CensusStats() == a


def test_reordering_trees_only_changes_ids(fixtures):
    trees = parse_bracketed((fixtures / "synthetic.tb").read_text())
    shuffled = trees[:]
    random.Random(3).shuffle(shuffled)
    a, ca = extract_frames(trees)
    b, cb = extract_frames(shuffled)
    strip = lambda xs: sorted((i.stem, i.verb_tag, i.frame.canonical, i.vp_path) for i in xs)
    assert strip(a) == strip(b)
    assert ca == cb
    assert build_lexicon(a) == build_lexicon(b)


labels = st.sampled_from(["NP", "NP-SBJ", "PP", "SBAR", "S", "VP", "VP-1", "ADVP", "PUNC", "VERB"])
tags = st.sampled_from(["PV", "IV", "IV_PASS", "PV_PASS", "NOUN", "PREP", "PUNC", "CONJ", "PV+PVSUFF"])
words = st.sampled_from(["qAl", "kAn+a@kAn", "x", "fAz@", "@y", "daEA"])
leaf = st.builds(TreeNode.leaf, tags, words)
random_trees = st.recursive(
    leaf,
    lambda kids: st.builds(lambda l, cs: TreeNode(l, tuple(cs)), labels, st.lists(kids, min_size=1, max_size=4)),
    max_leaves=40,
).filter(lambda t: not t.is_leaf and t.node_count() <= 100)


@settings(max_examples=300)
@given(st.lists(random_trees, min_size=1, max_size=4))
def test_matches_brute_force_oracle(trees):
    text = "\n\n".join(serialize(t) for t in trees)
    expected, total = oracle.brute_force_instances(oracle.read_sexprs(text))
    instances, census = extract_frames(parse_bracketed(text))
    assert as_rows(instances) == expected
    assert census.vps == total
    assert census.vps_with_verb + census.skipped_vps == census.vps


@given(random_trees)
def test_frame_members_are_sibling_labels(t):
    config = ExtractionConfig()
    for path, vp in find_verb_phrases(t, config):
        inst = extract_verb_instance(vp, config, vp_path=path)
        if inst is None:
            continue
        assert t.at(inst.vp_path) is vp
        child_labels = {c.label for c in vp.children}
        assert set(inst.frame.labels) <= child_labels
        assert not set(inst.frame.labels) & set(config.ignored_sibling_labels)
