import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dialup.errors import BothEmpty, EmptyCorpus, LengthMismatch, ValidationError
from dialup.metrics import ChrfParams, chrf, corpus_chrf, edit_distance, function_word_share, noise_rate_report
from dialup.noisers import NoiseDials, sample_language
from dialup.resources import SuffixInventory

import synth
from conftest import read_lines


def test_identity_and_disjoint():
    assert chrf("Kaynar su", "Kaynar su") == 100.0
    assert chrf("abc", "xyz") == 0.0


def test_hand_oracle():
    # unigrams: 3 of 4 match each way -> F1 = 0.75
    # bigrams: ab, bc match of {ab, bc, cd} / {ab, bc, ce} -> F2 = 2/3
    expected = 100 * (0.75 + 2 / 3) / 2
    assert round(expected, 2) == 70.83
    assert math.isclose(chrf("abcd", "abce", ChrfParams(max_n=2, beta=2)), expected)


def test_corpus_hand_oracle():
    # pooled unigrams a,b,c vs a,b,d -> 2/3; pooled bigrams ab vs ab -> 1
    score = corpus_chrf(["ab", "c"], ["ab", "d"], ChrfParams(max_n=2, beta=2))
    assert round(score, 2) == 83.33


def test_corpus_degenerate_cases():
    lines = read_lines("tr_corpus.txt")
    assert corpus_chrf(lines, lines) == 100.0
    assert math.isclose(corpus_chrf(["kaynar su"], ["gaynar su"]), chrf("kaynar su", "gaynar su"))
    with pytest.raises(LengthMismatch):
        corpus_chrf(["a"], [])
    with pytest.raises(BothEmpty):
        chrf(" ", "")


def test_param_validation():
    with pytest.raises(ValidationError):
        ChrfParams(max_n=0)


@settings(max_examples=100, deadline=None)
@given(st.text("abcde ", min_size=1, max_size=20), st.text("abcde ", min_size=1, max_size=20))
def test_bounds_and_whitespace(x, y):
    if not x.strip() or not y.strip():
        return
    s = chrf(x, y)
    assert 0.0 <= s <= 100.0
    assert chrf(x, x) == 100.0
    assert math.isclose(chrf(x.replace(" ", ""), " ".join(y)), s)


def test_edit_distance():
    assert edit_distance("kitten", "sitting") == 3
    assert edit_distance("", "abc") == 3 and edit_distance("abc", "abc") == 0


# -- noise rates --------------------------------------------------------------


def test_zero_language_report(tr_resources):
    lines = read_lines("tr_corpus.txt")
    lang = sample_language(NoiseDials(), tr_resources, 1)
    rep = noise_rate_report(lines, [lang.apply(l, tr_resources) for l in lines], lang, tr_resources)
    assert all(r.changed == 0 for r in rep.rates)
    # attested: bu ben ve sen için ile de o bir (ki, gibi, kadar never occur)
    assert rep["f"].universe == 9
    with pytest.raises(LengthMismatch):
        noise_rate_report(lines, lines[:-1], lang, tr_resources)


def test_full_function_word_rate():
    units = synth.unit_words(50, seed=1)
    lines = [" ".join(units)]
    res = synth.resources_from_lines(lines, function_words=units, suffixes=SuffixInventory(()))
    lang = sample_language(NoiseDials(0, 0, 1.0, 0), res, 3)
    rep = noise_rate_report(lines, [lang.apply(lines[0], res)], lang, res)
    # 0.8-dial phonological noise on a 4-phoneme word misses with probability 0.2**4
    assert rep["f"].universe == 50 and rep["f"].rate >= 0.96


def test_phoneme_rate_binomial():
    res, lines = synth.big_inventory_resources()
    n = len(res.g2p.phonemes)
    assert n >= 300
    bound = 3 * math.sqrt(0.05 * 0.95 / n)
    passes = 0
    for seed in range(20):
        lang = sample_language(NoiseDials(0.05, 0, 0, 0), res, seed)
        rep = noise_rate_report(lines, lines, lang, res)
        passes += abs(rep["p"].rate - 0.05) <= bound
    assert passes >= 18


def test_report_tsv(tr_resources):
    lang = sample_language(NoiseDials(), tr_resources, 1)
    lines = read_lines("tr_corpus.txt")[:2]
    tsv = noise_rate_report(lines, lines, lang, tr_resources).to_tsv(label="3")
    head, first = tsv.splitlines()[:2]
    assert head == "chunk\tdim\tuniverse\tchanged\trate\ttheta"
    assert first.startswith("3\tp\t")


# -- function-word share ------------------------------------------------------


def test_function_word_share():
    funcs = {"ve", "bu"}
    assert function_word_share(["ve bu, VE"], funcs) == 1.0
    assert function_word_share(["ev su"], funcs) == 0.0
    lines = ["ve ev su bu ekmek"] * 20  # 100 tokens, 40 function tokens
    assert function_word_share(lines, funcs) == 0.40
    with pytest.raises(ValidationError):
        function_word_share(["ev"], set())
    with pytest.raises(EmptyCorpus):
        function_word_share(["", "..."], funcs)


def test_fixture_share():
    # az_fixture against the projected CRL set: 21 function tokens out of 67 word tokens
    funcs = {"bu", "mən", "və", "sən", "üçün", "ilə", "da", "o", "bir", "kimi", "qədər"}
    assert math.isclose(function_word_share(read_lines("az_fixture.txt"), funcs), 21 / 67)
