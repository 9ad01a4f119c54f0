"""Seeded synthetic data for tests that need more volume than the hand fixtures."""

from __future__ import annotations

import itertools
import random

from dialup.noisers import Resources
from dialup.phonology import load_inventory, load_table, parse_inventory, parse_table
from dialup.resources import (
    FunctionWordList,
    SuffixInventory,
    build_vocabulary,
    extract_suffixes,
    train_char_ngram,
)
ONSETS = list("bcçdfghjklmnprsştvyz") + [""]
VOWELS = list("aeıioöuü")
CODAS = list("klmnrst") + [""] * 4
SUFFIXES = ["lar", "ler", "da", "de", "dan", "den", "ı", "i", "ın", "in", "yor", "dı", "di", "mış", "ca", "lık"]
FUNCTION_WORDS = [
    "bu", "ben", "ve", "sen", "ki", "için", "ile", "de", "o", "bir", "gibi", "kadar",
    "şu", "biz", "siz", "onlar", "ama", "veya", "çünkü", "ya",
]


def _syllable(rng: random.Random) -> str:
    return rng.choice(ONSETS) + rng.choice(VOWELS) + rng.choice(CODAS)


def make_stems(n: int, seed: int = 0) -> list[str]:
    rng = random.Random(seed)
    stems: list[str] = []
    seen = set(FUNCTION_WORDS)
    while len(stems) < n:
        w = "".join(_syllable(rng) for _ in range(rng.randint(1, 3)))
        if len(w) >= 3 and w not in seen:
            seen.add(w)
            stems.append(w)
    return stems


def make_corpus(n_lines: int = 10_000, n_stems: int = 1500, seed: int = 0) -> list[str]:
    """Turkish-looking sentences: stems with optional suffixes, sprinkled function words."""
    rng = random.Random(seed)
    stems = make_stems(n_stems, seed)
    # Zipf-ish stem weights so frequent and rare words both occur
    cum = list(itertools.accumulate(1.0 / (i + 1) ** 0.8 for i in range(len(stems))))
    lines = []
    for _ in range(n_lines):
        words = []
        for _ in range(rng.randint(4, 11)):
            if rng.random() < 0.3:
                words.append(rng.choice(FUNCTION_WORDS))
            else:
                w = rng.choices(stems, cum_weights=cum)[0]
                if rng.random() < 0.6:
                    w += rng.choice(SUFFIXES)
                words.append(w)
        words[0] = words[0][:1].upper() + words[0][1:]
        lines.append(" ".join(words) + rng.choice([".", ".", ".", "?", "!"]))
    return lines


def resources_from_lines(lines, g2p="latn_tur", inventory=None, function_words=FUNCTION_WORDS,
                         suffixes: SuffixInventory | None = None) -> Resources:
    vocab = build_vocabulary(lines)
    return Resources(
        inventory if inventory is not None else load_inventory(),
        load_table(g2p) if isinstance(g2p, str) else g2p,
        suffixes if suffixes is not None else extract_suffixes(vocab, 4, 5, 100),
        FunctionWordList(frozenset(function_words)),
        train_char_ngram(vocab, 3),
        vocab,
    )


# --------------------------------------------------------------------------
# a large artificial phoneme inventory, for phoneme-level rate checks

PLACES = [f"pl{i}" for i in range(15)]
MANNERS = [f"mn{i}" for i in range(10)]
HEIGHTS = ["close", "mid", "open"]
BACKS = ["front", "central", "back"]


def big_inventory() -> tuple:
    """~300 consonants on a full voicing x place x manner grid, plus 18 vowels.

    Every phoneme has radius-1 neighbours and the table spells each one with its
    own CJK character, so the whole inventory is invertible.
    """
    rows = []
    code = 0x4E00
    cons = []
    for v in "+-":
        for pl in PLACES:
            for mn in MANNERS:
                sym = chr(code)
                code += 1
                rows.append(f"{sym}\tconsonant\t{v}\t{pl}\t{mn}")
                cons.append(sym)
    vowels = []
    for h in HEIGHTS:
        for b in BACKS:
            for r in "+-":
                sym = chr(code)
                code += 1
                rows.append(f"{sym}\tvowel\t{h}\t{b}\t{r}")
                vowels.append(sym)
    pairs = [f"{s}\t{s}" for s in cons + vowels]
    inv = parse_inventory(rows)
    table = parse_table(pairs, "synthetic")
    return inv, table, cons, vowels


def big_inventory_resources(seed: int = 0) -> tuple[Resources, list[str]]:
    """Resources over :func:`big_inventory`, with a corpus attesting every phoneme."""
    inv, table, cons, vowels = big_inventory()
    rng = random.Random(seed)
    symbols = cons + vowels
    words = []
    for i, s in enumerate(symbols):
        words.append(s + rng.choice(vowels) + rng.choice(cons))
    lines = [" ".join(words[i : i + 10]) for i in range(0, len(words), 10)]
    vocab = build_vocabulary(lines)
    res = Resources(
        inv, table, SuffixInventory((), 4, 5, 100), FunctionWordList(frozenset()),
        train_char_ngram(vocab, 3), vocab,
    )
    return res, lines


def unit_words(n: int, seed: int = 0, length: int = 4) -> list[str]:
    """Distinct latn_tur words of ``length`` letters drawn from consonants and vowels with neighbours."""
    rng = random.Random(seed)
    cons = list("bdgkptszfvmn")
    out, seen = [], set()
    while len(out) < n:
        w = "".join(rng.choice(cons) if i % 2 == 0 else rng.choice("aeiou") for i in range(length))
        if w not in seen:
            seen.add(w)
            out.append(w)
    return out


__all__ = [
    "FUNCTION_WORDS", "SUFFIXES", "make_stems", "make_corpus", "resources_from_lines",
    "big_inventory", "big_inventory_resources", "unit_words",
]
