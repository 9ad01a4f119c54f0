import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dialup.errors import EmptyCorpus, EmptyVocabulary, MalformedLine, ValidationError
from dialup.resources import (
    EOS,
    TaggedCorpus,
    Vocabulary,
    build_vocabulary,
    extract_function_words,
    extract_suffixes,
    generate_nonword,
    parse_conllu,
    read_char_ngram,
    read_function_words,
    read_suffixes,
    read_vocabulary,
    train_char_ngram,
    write_char_ngram,
    write_function_words,
    write_suffixes,
    write_vocabulary,
)

from conftest import FIXTURES

# hand-counted from tr_fixture.conllu: the 1-2 range line and the 4.1 empty node are skipped
FIXTURE_TOKENS = [
    ("Bu", "DET"), ("ev", "NOUN"), ("çok", "ADV"), ("güzel", "ADJ"), (".", "PUNCT"),
    ("Ben", "PRON"), ("ve", "CCONJ"), ("sen", "PRON"), ("okula", "NOUN"), ("gidiyoruz", "VERB"), (".", "PUNCT"),
    ("Evde", "NOUN"), ("ki", "ADP"), ("kitap", "NOUN"), ("için", "ADP"), ("geldi", "VERB"), (".", "PUNCT"),
    ("Ali", "PROPN"), ("ile", "ADP"), ("Ayşe", "PROPN"), (",", "PUNCT"), ("Mehmet", "PROPN"), ("de", "CCONJ"), (".", "PUNCT"),
    ("Kitap", "NOUN"), ("gibi", "ADP"), ("bir", "DET"), ("yüz", "NOUN"), ("gördüm", "VERB"), (".", "PUNCT"),
    ("O", "PRON"), ("gibi", "NOUN"), ("yüz", "NOUN"), ("ile", "ADP"), ("geldi", "VERB"), (".", "PUNCT"),
    ("Gibi", "NOUN"), ("gibi", "ADP"), ("yüz", "ADP"), ("bu", "DET"), ("kadar", "ADP"), (".", "PUNCT"),
]
# modal tag closed-class; "gibi" ties ADP 2 / NOUN 2 and is kept, "yüz" is NOUN 2 / ADP 1 and is not
FIXTURE_FUNCTION_WORDS = {"bu", "ben", "ve", "sen", "ki", "için", "ile", "de", "o", "bir", "gibi", "kadar"}


def row(i, form, upos):
    return f"{i}\t{form}\t_\t{upos}\t_\t_\t_\t_\t_\t_"


def parse_fixture():
    with open(FIXTURES / "tr_fixture.conllu", encoding="utf-8") as f:
        return parse_conllu(f)


def test_fixture_tokens():
    corpus = parse_fixture()
    assert len(corpus) == 7
    assert [(t.form, t.upos) for t in corpus.tokens()] == FIXTURE_TOKENS


def test_fixture_function_words():
    assert set(extract_function_words(parse_fixture()).words) == FIXTURE_FUNCTION_WORDS


def test_two_token_sentence():
    corpus = parse_conllu([row(1, "Ev", "NOUN"), row(2, "güzel", "ADJ"), ""])
    assert len(corpus.sentences) == 1 and len(corpus.sentences[0]) == 2


def test_mwt_range_skipped():
    corpus = parse_conllu(["1-2\tdel\t_\t_\t_\t_\t_\t_\t_\t_", row(1, "de", "ADP"), row(2, "el", "DET")])
    assert [t.form for t in corpus.tokens()] == ["de", "el"]


def test_strict_and_lenient():
    bad = "1\tev\t_\tNOUN\t_\t_\t_\t_\t_"
    with pytest.raises(MalformedLine):
        parse_conllu([bad])
    corpus = parse_conllu([bad, row(1, "ev", "NOUN")], strict=False)
    assert corpus.skipped_lines == 1 and len(corpus) == 1
    with pytest.raises(MalformedLine):
        parse_conllu([row(1, "ev", "FOO")])


def _corpus(pairs):
    return parse_conllu([row(i, f, u) for i, (f, u) in enumerate(pairs, 1)])


def test_modal_tag_rules():
    assert "the" in extract_function_words(_corpus([("the", "DET")] * 3 + [("the", "NOUN")]))
    assert "ran" not in extract_function_words(_corpus([("ran", "NOUN")] * 5 + [("ran", "ADP")]))
    assert "on" in extract_function_words(_corpus([("on", "ADP")] * 2 + [("on", "NOUN")] * 2))


def test_empty_corpus():
    with pytest.raises(EmptyCorpus):
        extract_function_words(TaggedCorpus([]))


def test_function_words_order_independent():
    corpus = parse_fixture()
    shuffled = list(corpus.sentences)
    random.Random(3).shuffle(shuffled)
    a = extract_function_words(corpus)
    assert a == extract_function_words(TaggedCorpus(shuffled))
    assert a == extract_function_words(TaggedCorpus(list(corpus.sentences)))


def test_function_word_file_round_trip(tmp_path):
    fw = extract_function_words(parse_fixture())
    write_function_words(fw, tmp_path / "f.txt")
    assert read_function_words(tmp_path / "f.txt").words == fw.words


# -- suffixes ---------------------------------------------------------------


def test_ed_count():
    inv = extract_suffixes(["walked", "talked", "jumped", "cat"], 4, 2, 10)
    assert dict(inv.suffixes)["ed"] == 3


def test_one_char_words_give_nothing():
    assert len(extract_suffixes(list("abcdefg"), 4, 2, 10)) == 0


def brute_force_suffix_counts(words, max_len):
    """Oracle: test every (word, L) pair independently."""
    out = Counter()
    for w in set(words):
        for L in range(1, max_len + 1):
            if len(w) - L >= 2:
                out[w[-L:]] += 1
    return out


def test_planted_suffixes(tur_table):
    rng = random.Random(5)
    stems = set()
    while len(stems) < 50:
        stems.add("".join(rng.choice("bcdfgkmnprstvz") + rng.choice("aeiou") for _ in range(2)))
    words = [s + suf for s in sorted(stems) for suf in ("ak", "im")]
    inv = extract_suffixes(words, 4, 5, 100)
    top5 = [s for s, _ in inv.suffixes[:5]]
    assert "ak" in top5 and "im" in top5
    oracle = brute_force_suffix_counts(words, 4)
    assert dict(inv.suffixes) == {s: c for s, c in oracle.items() if c >= 5}


def test_suffix_parameters_validated():
    with pytest.raises(ValidationError):
        extract_suffixes(["abc"], 4, 1, 10)


def test_suffix_file_round_trip(tmp_path):
    inv = extract_suffixes(["walked", "talked", "jumped", "hopped", "cat"], 3, 2, 10)
    write_suffixes(inv, tmp_path / "s.tsv")
    assert read_suffixes(tmp_path / "s.tsv") == inv


# -- vocabulary -------------------------------------------------------------


def test_vocabulary_folds_and_counts(tmp_path):
    v = build_vocabulary(["Ev ev, EV!", "su 12"])
    assert v["ev"] == 3 and "su" in v and "12" not in v
    write_vocabulary(v, tmp_path / "v.tsv")
    assert dict(read_vocabulary(tmp_path / "v.tsv")) == dict(v)
    with pytest.raises(ValidationError):
        Vocabulary({"a": 0})


# -- character n-grams --------------------------------------------------------


def test_single_path_probability():
    k = 0.01
    m = train_char_ngram({"ab": 1}, n=2, k=k)
    # alphabet {a, b} plus the end marker
    assert math.isclose(m.prob("a", "b"), (1 + k) / (1 * 1 + k * 3))


@settings(max_examples=30, deadline=None)
@given(st.dictionaries(st.text("abcde", min_size=1, max_size=6), st.integers(1, 5), min_size=1, max_size=8),
       st.integers(2, 4))
def test_distribution_normalised(vocab, n):
    m = train_char_ngram(vocab, n)
    for h in list(m.counts) + ["zz"]:
        assert math.isclose(sum(m.distribution(h).values()), 1.0, abs_tol=1e-12)


def test_sampled_characters_match_training_unigrams():
    v = build_vocabulary((FIXTURES / "tr_corpus.txt").read_text(encoding="utf-8").splitlines())
    m = train_char_ngram(v, 3)
    rng = random.Random(0)
    drawn = Counter()
    for _ in range(20_000):
        drawn.update(m.sample(rng))
    total_d = sum(drawn.values())
    total_u = sum(m.unigram.values())
    for ch, c in m.unigram.most_common(8):
        assert abs(drawn[ch] / total_d - c / total_u) < 0.05


def test_nonword_contract():
    v = build_vocabulary((FIXTURES / "tr_corpus.txt").read_text(encoding="utf-8").splitlines())
    m = train_char_ngram(v, 3)
    for i in range(300):
        w = generate_nonword(m, 1 + i % 8, v, random.Random(i))
        assert w not in v and set(w) <= m.alphabet
    assert generate_nonword(m, 5, v, random.Random(9)) == generate_nonword(m, 5, v, random.Random(9))


def test_nonword_fallback_when_sampler_only_makes_words():
    # every sample of length 1-3 over a one-letter alphabet is in the vocabulary
    v = Vocabulary({"a": 1, "aa": 1, "aaa": 1})
    m = train_char_ngram(v, 2)
    w = generate_nonword(m, 1, v, random.Random(0))
    assert w not in v and set(w) <= {"a"}


def test_ngram_errors_and_round_trip(tmp_path):
    with pytest.raises(EmptyVocabulary):
        train_char_ngram({}, 3)
    with pytest.raises(ValidationError):
        train_char_ngram({"ab": 1}, 1)
    m = train_char_ngram({"kaynar": 2, "su": 1}, 3)
    assert EOS not in m.alphabet
    write_char_ngram(m, tmp_path / "m.tsv")
    back = read_char_ngram(tmp_path / "m.tsv")
    assert back.counts == m.counts and back.order == 3 and back.k == m.k
