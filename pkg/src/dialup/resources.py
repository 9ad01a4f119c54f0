"""HRL-side resources consumed by the noisers.

Function-word lists (from UD-tagged text), frequency-mined suffixes, a
character n-gram model used to mint non-words, and a plain word-frequency
vocabulary. Each resource has a small UTF-8 text serialization.
"""

from __future__ import annotations

import itertools
import logging
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import EmptyCorpus, EmptyVocabulary, MalformedLine, ValidationError
from .text import fold, words

log = logging.getLogger(__name__)

UPOS_TAGS = frozenset(
    "ADJ ADP ADV AUX CCONJ DET INTJ NOUN NUM PART PRON PROPN PUNCT SCONJ SYM VERB X".split()
)
CLOSED_POS = frozenset({"DET", "PRON", "ADP", "AUX", "CCONJ", "SCONJ"})


# --------------------------------------------------------------------------
# CoNLL-U


class TaggedToken(NamedTuple):
    form: str
    upos: str


@dataclass
class TaggedCorpus:
    sentences: list[list[TaggedToken]]
    skipped_lines: int = 0

    def tokens(self) -> Iterator[TaggedToken]:
        for sent in self.sentences:
            yield from sent

    def __len__(self) -> int:
        return len(self.sentences)


def parse_conllu(lines: Iterable[str], strict: bool = True) -> TaggedCorpus:
    """Read (FORM, UPOS) pairs from CoNLL-U.

    Multiword-token ranges (``1-2``) and empty nodes (``8.1``) are skipped. In
    lenient mode malformed lines are dropped and counted instead of raising.
    """
    sentences: list[list[TaggedToken]] = []
    current: list[TaggedToken] = []
    skipped = 0
    for no, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            if current:
                sentences.append(current)
                current = []
            continue
        if line.startswith("#"):
            continue
        cols = line.split("\t")
        problem = None
        if len(cols) != 10:
            problem = f"expected 10 columns, got {len(cols)}"
        elif "-" in cols[0] or "." in cols[0]:
            continue
        elif not cols[0].isdigit():
            problem = f"bad token id {cols[0]!r}"
        elif not cols[1]:
            problem = "empty FORM"
        elif cols[3] not in UPOS_TAGS:
            problem = f"unknown UPOS {cols[3]!r}"
        if problem:
            if strict:
                raise MalformedLine(no, problem)
            skipped += 1
            continue
        current.append(TaggedToken(cols[1], cols[3]))
    if current:
        sentences.append(current)
    if skipped:
        log.warning("skipped %d malformed CoNLL-U lines", skipped)
    return TaggedCorpus(sentences, skipped)


# --------------------------------------------------------------------------
# function words


@dataclass(frozen=True)
class FunctionWordList:
    words: frozenset[str]
    pos: frozenset[str] = CLOSED_POS

    def __contains__(self, word: str) -> bool:
        return fold(word) in self.words

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(sorted(self.words))


def extract_function_words(
    corpus: TaggedCorpus, closed_pos: Iterable[str] = CLOSED_POS
) -> FunctionWordList:
    """Words whose most frequent UPOS is closed-class. Ties count as closed-class."""
    closed = frozenset(closed_pos)
    tags: dict[str, Counter] = defaultdict(Counter)
    for tok in corpus.tokens():
        tags[fold(tok.form)][tok.upos] += 1
    if not tags:
        raise EmptyCorpus("corpus has no tokens")
    chosen = set()
    for word, counts in tags.items():
        top = max(counts.values())
        if any(counts[t] == top for t in closed):
            chosen.add(word)
    return FunctionWordList(frozenset(chosen), closed)


def write_function_words(fw: FunctionWordList, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for w in fw:
            f.write(w + "\n")


def read_function_words(path) -> FunctionWordList:
    with open(path, encoding="utf-8") as f:
        return FunctionWordList(frozenset(fold(l.strip()) for l in f if l.strip()))


# --------------------------------------------------------------------------
# vocabulary


class Vocabulary(Mapping[str, int]):
    """Case-folded word -> corpus frequency."""

    def __init__(self, freqs: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = freqs.items() if isinstance(freqs, Mapping) else freqs
        self._freqs: dict[str, int] = {}
        for w, c in items:
            if c < 1:
                raise ValidationError(f"frequency of {w!r} must be >= 1")
            key = fold(w)
            self._freqs[key] = self._freqs.get(key, 0) + int(c)

    def __getitem__(self, word: str) -> int:
        return self._freqs[word]

    def __contains__(self, word) -> bool:
        return isinstance(word, str) and fold(word) in self._freqs

    def __iter__(self):
        return iter(self._freqs)

    def __len__(self) -> int:
        return len(self._freqs)

    def sorted_items(self) -> list[tuple[str, int]]:
        return sorted(self._freqs.items(), key=lambda kv: (-kv[1], kv[0]))

    @property
    def alphabet(self) -> frozenset[str]:
        return frozenset(ch for w in self._freqs for ch in w if ch.isalpha())


def build_vocabulary(lines: Iterable[str]) -> Vocabulary:
    counts: Counter = Counter()
    for line in lines:
        counts.update(words(line))
    return Vocabulary(counts)


def write_vocabulary(vocab: Vocabulary, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for w, c in vocab.sorted_items():
            f.write(f"{w}\t{c}\n")


def read_vocabulary(path) -> Vocabulary:
    items = []
    with open(path, encoding="utf-8") as f:
        for no, line in enumerate(f, 1):
            if not line.strip():
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) != 2 or not cols[1].isdigit():
                raise MalformedLine(no, "expected word<TAB>freq")
            items.append((cols[0], int(cols[1])))
    return Vocabulary(items)


# --------------------------------------------------------------------------
# suffixes


@dataclass(frozen=True)
class SuffixInventory:
    suffixes: tuple[tuple[str, int], ...]
    max_len: int = 4
    min_type_freq: int = 5
    top_k: int = 100

    def __iter__(self):
        return (s for s, _ in self.suffixes)

    def __len__(self) -> int:
        return len(self.suffixes)

    def __contains__(self, suffix: str) -> bool:
        return any(s == suffix for s, _ in self.suffixes)


def extract_suffixes(
    vocab: Iterable[str], max_len: int = 4, min_type_freq: int = 5, top_k: int = 100
) -> SuffixInventory:
    """Count word-final n-grams over distinct word types.

    A candidate of length L is only counted on words of length >= L + 2, so
    every suffix leaves a stem of at least two characters.
    """
    if max_len < 1 or min_type_freq < 2 or top_k < 1:
        raise ValidationError("need max_len >= 1, min_type_freq >= 2, top_k >= 1")
    counts: Counter = Counter()
    for w in set(fold(w) for w in vocab):
        for L in range(1, min(max_len, len(w) - 2) + 1):
            counts[w[-L:]] += 1
    kept = [(s, c) for s, c in counts.items() if c >= min_type_freq]
    kept.sort(key=lambda sc: (-sc[1], -len(sc[0]), sc[0]))
    return SuffixInventory(tuple(kept[:top_k]), max_len, min_type_freq, top_k)


def write_suffixes(inv: SuffixInventory, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"#max_len={inv.max_len} #min_type_freq={inv.min_type_freq} #top_k={inv.top_k}\n")
        for s, c in inv.suffixes:
            f.write(f"{s}\t{c}\n")


def _header_params(line: str) -> dict[str, str]:
    out = {}
    for part in line.split():
        key, _, val = part.lstrip("#").partition("=")
        out[key] = val
    return out


def read_suffixes(path) -> SuffixInventory:
    params = {}
    rows = []
    with open(path, encoding="utf-8") as f:
        for no, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if line.startswith("#"):
                params.update(_header_params(line))
                continue
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 2 or not cols[1].isdigit():
                raise MalformedLine(no, "expected suffix<TAB>freq")
            rows.append((cols[0], int(cols[1])))
    return SuffixInventory(
        tuple(rows),
        int(params.get("max_len", 4)),
        int(params.get("min_type_freq", 5)),
        int(params.get("top_k", max(len(rows), 1))),
    )


# --------------------------------------------------------------------------
# character n-gram model

BOS = "␂"
EOS = "␃"


@dataclass
class CharNgramModel:
    order: int
    counts: dict[str, Counter]
    k: float = 0.01
    _totals: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        if self.order < 2:
            raise ValidationError("n-gram order must be >= 2")
        if self.k <= 0:
            raise ValidationError("smoothing constant must be positive")
        self._totals = {h: sum(c.values()) for h, c in self.counts.items()}
        self.alphabet = frozenset(ch for c in self.counts.values() for ch in c if ch != EOS)
        # alphabet plus end marker, in a fixed order for sampling
        self.outcomes = tuple(sorted(self.alphabet)) + (EOS,)
        unigram: Counter = Counter()
        for c in self.counts.values():
            for ch, n in c.items():
                if ch != EOS:
                    unigram[ch] += n
        self.unigram = unigram
        self._cum: dict[tuple[str, bool], list[float]] = {}

    def history(self, prefix: str) -> str:
        padded = BOS * (self.order - 1) + prefix
        return padded[-(self.order - 1) :]

    def prob(self, history: str, ch: str) -> float:
        c = self.counts.get(history, {})
        total = self._totals.get(history, 0)
        return (c.get(ch, 0) + self.k) / (total + self.k * len(self.outcomes))

    def distribution(self, history: str) -> dict[str, float]:
        return {ch: self.prob(history, ch) for ch in self.outcomes}

    def sample(self, rng: random.Random, min_len: int = 0, max_len: int = 50) -> str:
        """Draw one string; the end marker is suppressed until ``min_len`` characters."""
        out: list[str] = []
        while len(out) < max_len:
            h = self.history("".join(out[-(self.order - 1) :]))
            may_end = len(out) >= min_len
            outcomes = self.outcomes if may_end else self.outcomes[:-1]
            cum = self._cum.get((h, may_end))
            if cum is None:
                cum = list(itertools.accumulate(self.prob(h, ch) for ch in outcomes))
                self._cum[(h, may_end)] = cum
            ch = rng.choices(outcomes, cum_weights=cum)[0]
            if ch == EOS:
                break
            out.append(ch)
        return "".join(out)


def train_char_ngram(vocab: Mapping[str, int], n: int = 3, k: float = 0.01) -> CharNgramModel:
    if n < 2:
        raise ValidationError("n-gram order must be >= 2")
    if not vocab:
        raise EmptyVocabulary("cannot train on an empty vocabulary")
    counts: dict[str, Counter] = defaultdict(Counter)
    for word, freq in vocab.items():
        padded = BOS * (n - 1) + word + EOS
        for i in range(n - 1, len(padded)):
            counts[padded[i - n + 1 : i]][padded[i]] += freq
    return CharNgramModel(n, dict(counts), k)


def generate_nonword(
    model: CharNgramModel, target_len: int, vocab: Iterable[str], rng: random.Random
) -> str:
    """Sample a string of roughly ``target_len`` characters that is not in ``vocab``."""
    if target_len < 1:
        raise ValidationError("target_len must be >= 1")
    known = vocab if isinstance(vocab, (Vocabulary, set, frozenset)) else set(map(fold, vocab))
    lo, hi = max(1, target_len - 2), target_len + 2
    cand = ""
    for _ in range(50):
        cand = model.sample(rng, min_len=lo, max_len=hi)
        if fold(cand) not in known:
            return cand
    # rare characters first: least likely to recreate a real word
    rare = sorted(model.alphabet, key=lambda ch: (model.unigram[ch], ch))
    base = cand[: hi - 1]
    for ch in rare:
        if fold(base + ch) not in known:
            return base + ch
    # exhaustive search; vocab is finite so some string of some length is free
    length = lo
    while True:
        found = _first_free(rare, length, known)
        if found is not None:
            return found
        length += 1


def _first_free(alphabet: list[str], length: int, known) -> str | None:
    for combo in itertools.product(alphabet, repeat=length):
        s = "".join(combo)
        if fold(s) not in known:
            return s
    return None


def write_char_ngram(model: CharNgramModel, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"#order={model.order} #k={model.k}\n")
        for h in sorted(model.counts):
            for ch in sorted(model.counts[h]):
                f.write(f"{h}\t{ch}\t{model.counts[h][ch]}\n")


def read_char_ngram(path) -> CharNgramModel:
    params = {}
    counts: dict[str, Counter] = defaultdict(Counter)
    with open(path, encoding="utf-8") as f:
        for no, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if line.startswith("#"):
                params.update(_header_params(line))
                continue
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 3 or not cols[2].isdigit():
                raise MalformedLine(no, "expected history<TAB>char<TAB>count")
            counts[cols[0]][cols[1]] = int(cols[2])
    if "order" not in params:
        raise MalformedLine(1, "missing #order header")
    return CharNgramModel(int(params["order"]), dict(counts), float(params.get("k", 0.01)))


# --------------------------------------------------------------------------
# bundle


@dataclass(frozen=True)
class ResourcePaths:
    function_words: Path
    suffixes: Path
    charlm: Path
    vocab: Path

    @classmethod
    def in_dir(cls, d) -> "ResourcePaths":
        d = Path(d)
        return cls(d / "function_words.txt", d / "suffixes.tsv", d / "charlm.tsv", d / "vocab.tsv")
