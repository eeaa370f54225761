import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqtag.corpus import (
    Corpus,
    CorpusFormatError,
    Sentence,
    SplitError,
    corpus_stats,
    oov_rate,
    parse_conll,
    split,
    validate_labels,
    write_conll,
)
from seqtag.synthetic import random_corpus
from seqtag.tagset import KINDS, Category, Label, TagsetError


def test_tagset_has_22_kinds():
    assert len(KINDS) == 22
    assert len({k.name for k in KINDS}) == 22
    by_cat = {c: sum(k.category == c for k in KINDS) for c in Category}
    assert by_cat == {Category.ENAMEX: 11, Category.NUMEX: 4, Category.TIMEX: 7}


@pytest.mark.parametrize("text", ["O", "B-Person", "I-Special_Day"])
def test_label_round_trip(text):
    assert str(Label.parse(text)) == text


@pytest.mark.parametrize("text", ["B-person", "B-City", "X-Person", "B-", "Person"])
def test_label_rejects(text):
    with pytest.raises(TagsetError):
        Label.parse(text)


def test_label_invariant():
    with pytest.raises(TagsetError):
        Label("O", KINDS[0])
    with pytest.raises(TagsetError):
        Label("B")


def test_parse_empty():
    assert len(parse_conll("")) == 0


def test_parse_single_token():
    c = parse_conll("rAma\tB-Person\n\n")
    assert len(c) == 1
    assert len(c[0]) == 1
    assert str(c[0].tokens[0].label) == "B-Person"


def test_parse_unknown_kind():
    with pytest.raises(TagsetError, match="line 2"):
        parse_conll("a\tO\nxyz\tB-City\n")


def test_parse_wrong_columns():
    with pytest.raises(CorpusFormatError) as err:
        parse_conll("a\tO\n\nb O\n")
    assert err.value.lineno == 3


def test_parse_ignores_trailing_blank_lines():
    c = parse_conll("a\tO\nb\tB-Year\n\n\n\nc\tO\n\n\n")
    assert [s.words for s in c] == [["a", "b"], ["c"]]


def test_write_empty():
    assert write_conll(Corpus()) == ""


def test_write_format():
    c = Corpus((Sentence.from_pairs(["rAma", "gaila"], ["B-Person", "O"]),))
    assert write_conll(c) == "rAma\tB-Person\ngaila\tO\n\n"


def test_round_trip_random_corpus():
    c = random_corpus(20, seed=3)
    assert parse_conll(write_conll(c)) == c


label_text = st.sampled_from(["O"] + [f"{p}-{k.name}" for k in KINDS for p in "BI"])
surface = st.text(alphabet=st.characters(blacklist_categories=("Z", "C")), min_size=1, max_size=6)
sentence = st.lists(st.tuples(surface, label_text), min_size=1, max_size=8).map(
    lambda pairs: Sentence.from_pairs([w for w, _ in pairs], [lab for _, lab in pairs]))


@given(st.lists(sentence, max_size=6))
@settings(max_examples=100, deadline=None)
def test_round_trip_property(sents):
    c = Corpus(tuple(sents))
    assert parse_conll(write_conll(c)) == c


def test_stats_empty():
    s = corpus_stats(Corpus())
    assert (s.sentence_count, s.token_count, s.type_count, s.entity_token_count,
            s.other_token_count, s.per_kind_counts) == (0, 0, 0, 0, 0, {})


def test_stats_known_composition():
    # 3 sentences, 10 tokens, two Person mentions covering 3 tokens
    c = Corpus((
        Sentence.from_pairs(["rAma", "kumAra", "gaila"], ["B-Person", "I-Person", "O"]),
        Sentence.from_pairs(["a", "b", "c", "a"], ["O"] * 4),
        Sentence.from_pairs(["sIwA", "x", "y"], ["B-Person", "O", "O"]),
    ))
    s = corpus_stats(c)
    assert s.sentence_count == 3
    assert s.token_count == 10
    assert s.type_count == 9
    assert s.entity_token_count == 3
    assert s.other_token_count == 7
    assert s.per_kind_counts == {"Person": 2}


def test_stats_permutation_covariant():
    c = random_corpus(30, seed=1)
    perm = np.random.default_rng(0).permutation(len(c))
    shuffled = Corpus(tuple(c[i] for i in perm))
    assert corpus_stats(c) == corpus_stats(shuffled)


def test_stats_invariants():
    s = corpus_stats(random_corpus(40, seed=2))
    assert s.entity_token_count + s.other_token_count == s.token_count
    assert s.type_count <= s.token_count


def _no_entity_corpus(n):
    return Corpus(tuple(Sentence.from_pairs([f"w{i}"], ["O"]) for i in range(n)))


def test_split_no_entities():
    c = _no_entity_corpus(10)
    train, test = split(c, 0.2, seed=7)
    assert (len(train), len(test)) == (8, 2)
    again = split(c, 0.2, seed=7)
    assert (train, test) == again


def test_split_singleton_kind_goes_to_test():
    sents = [Sentence.from_pairs([f"w{i}"], ["O"]) for i in range(20)]
    sents[13] = Sentence.from_pairs(["jvara"], ["B-Disease"])
    c = Corpus(tuple(sents))
    for seed in range(10):
        _, test = split(c, 0.2, seed=seed)
        assert sents[13] in test.sentences


def test_split_five_kinds():
    kinds = ["Person", "Money", "Year", "Disease", "Location"]
    c = random_corpus(100, kinds=kinds, seed=11, entity_rate=0.1)
    train, test = split(c, 0.2, seed=3)
    test_kinds = set().union(*(s.kinds() for s in test))
    assert {k for s in c for k in s.kinds()} <= test_kinds
    assert 20 <= len(test) <= 24


def test_split_is_partition():
    c = random_corpus(157, seed=5)
    train, test = split(c, 0.25, seed=1)
    assert sorted(map(repr, train.sentences + test.sentences)) == sorted(map(repr, c.sentences))
    assert len(train) + len(test) == len(c)


def test_split_infeasible():
    c = random_corpus(10, seed=0, entity_rate=0.9)
    with pytest.raises(SplitError, match="infeasible"):
        split(c, 0.2, seed=0)


def test_oov_identity():
    c = random_corpus(15, seed=4)
    assert oov_rate(c, c) == 0.0


def test_oov_hand_value():
    train = Corpus((Sentence.from_pairs(["a", "b"], ["O", "O"]),))
    test = Corpus((Sentence.from_pairs(["a", "c", "d"], ["O", "O", "O"]),))
    assert oov_rate(train, test) == pytest.approx(100 * 2 / 3)


def test_oov_empty_test():
    with pytest.raises(ValueError):
        oov_rate(_no_entity_corpus(2), Corpus())


def test_validate_labels():
    ok = _no_entity_corpus(3)
    assert validate_labels(ok) == []
    bad = Corpus((
        Sentence.from_pairs(["a", "b"], ["O", "I-Person"]),
        Sentence.from_pairs(["a", "b"], ["B-Person", "I-Location"]),
        Sentence.from_pairs(["a", "b", "c"], ["B-Person", "I-Person", "I-Person"]),
    ))
    v = validate_labels(bad)
    assert [(x.sentence, x.position) for x in v] == [(0, 1), (1, 1)]
