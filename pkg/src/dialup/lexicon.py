"""CRL -> HRL bilingual lexicons: loading, merging, IBM Model 1 induction, and
projection of HRL function-word status onto CRL words."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import EmptyBitext, MalformedLine, ValidationError
from .resources import FunctionWordList
from .text import fold, words


class Translation(NamedTuple):
    hrl: str
    weight: float
    source: str


@dataclass(frozen=True)
class LexiconEntry:
    crl: str
    translations: tuple[Translation, ...]

    @property
    def top(self) -> Translation:
        return self.translations[0]


class BilingualLexicon:
    """CRL word -> translations ordered by (source priority, weight desc, HRL word)."""

    def __init__(self, priority: Sequence[str] = (), entries: dict[str, Iterable[Translation]] | None = None):
        self.priority: list[str] = list(dict.fromkeys(priority))
        rank = {s: i for i, s in enumerate(self.priority)}
        self.entries: dict[str, LexiconEntry] = {}
        for crl, trans in (entries or {}).items():
            best: dict[tuple[str, str], float] = {}
            for t in trans:
                if t.source not in rank:
                    raise ValidationError(f"source {t.source!r} is not in the priority list")
                key = (t.hrl, t.source)
                best[key] = max(best.get(key, t.weight), t.weight)
            ordered = sorted(
                (Translation(h, w, s) for (h, s), w in best.items()),
                key=lambda t: (rank[t.source], -t.weight, t.hrl),
            )
            if ordered:
                self.entries[crl] = LexiconEntry(crl, tuple(ordered))

    def __contains__(self, word: str) -> bool:
        return fold(word) in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.entries))

    def get(self, word: str) -> LexiconEntry | None:
        return self.entries.get(fold(word))

    def lookup(self, word: str) -> str | None:
        """Resolved top translation: highest-priority source, then weight, then HRL word."""
        e = self.entries.get(fold(word))
        return e.top.hrl if e else None

    def translations(self) -> Iterator[tuple[str, Translation]]:
        for crl in sorted(self.entries):
            for t in self.entries[crl].translations:
                yield crl, t

    def to_tsv(self) -> str:
        lines = [f"# priority: {','.join(self.priority)}"]
        lines += [f"{crl}\t{t.hrl}\t{t.weight!r}\t{t.source}" for crl, t in self.translations()]
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_tsv())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BilingualLexicon)
            and self.priority == other.priority
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"<BilingualLexicon {len(self)} entries, priority={self.priority}>"


def load_lexicon(lines: Iterable[str], source: str = "lexicon") -> BilingualLexicon:
    """Read ``crl<TAB>hrl[<TAB>weight[<TAB>source]]`` lines.

    A missing weight is 1.0; a fourth column overrides ``source``. A
    ``# priority: a,b`` comment (as written by :meth:`BilingualLexicon.to_tsv`)
    fixes the source order. Multiword entries are rejected.
    """
    priority: list[str] = []
    entries: dict[str, list[Translation]] = defaultdict(list)
    for no, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.startswith("priority:"):
                priority.extend(s for s in body[len("priority:") :].strip().split(",") if s)
            continue
        cols = line.split("\t")
        if not 2 <= len(cols) <= 4:
            raise MalformedLine(no, "expected crl<TAB>hrl[<TAB>weight[<TAB>source]]")
        crl, hrl = fold(cols[0].strip()), fold(cols[1].strip())
        if not crl or not hrl:
            raise MalformedLine(no, "empty word")
        if len(crl.split()) > 1 or len(hrl.split()) > 1:
            raise MalformedLine(no, "multiword entries are not supported")
        weight = 1.0
        if len(cols) >= 3 and cols[2].strip():
            try:
                weight = float(cols[2])
            except ValueError:
                raise MalformedLine(no, f"bad weight {cols[2]!r}") from None
            if weight < 0 or math.isnan(weight):
                raise MalformedLine(no, "weight must be nonnegative")
        src = cols[3].strip() if len(cols) == 4 and cols[3].strip() else source
        if src not in priority:
            priority.append(src)
        entries[crl].append(Translation(hrl, weight, src))
    return BilingualLexicon(priority, entries)


def read_lexicon(path, source: str | None = None) -> BilingualLexicon:
    from pathlib import Path

    with open(path, encoding="utf-8") as f:
        return load_lexicon(f, source or Path(path).stem)


def merge_lexicons(lexicons: Sequence[BilingualLexicon]) -> BilingualLexicon:
    """Union of lexicons; earlier lexicons take priority over later ones."""
    priority: list[str] = []
    entries: dict[str, list[Translation]] = defaultdict(list)
    for lex in lexicons:
        priority.extend(s for s in lex.priority if s not in priority)
        for crl, t in lex.translations():
            entries[crl].append(t)
    return BilingualLexicon(priority, entries)


# --------------------------------------------------------------------------
# IBM Model 1

NULL = "<null>"


class IBMModel1:
    """EM estimation of t(hrl | crl) with a NULL token on the CRL side."""

    def __init__(self, pairs: Iterable[tuple[str, str]]):
        self.pairs: list[tuple[list[str], list[str]]] = []
        for crl, hrl in pairs:
            f = list(words(hrl))
            if f:
                self.pairs.append(([NULL] + list(words(crl)), f))
        if not self.pairs:
            raise EmptyBitext("no usable sentence pairs")
        tgt_vocab = {w for _, f in self.pairs for w in f}
        uniform = 1.0 / len(tgt_vocab)
        self.t: dict[str, dict[str, float]] = defaultdict(dict)
        for e, f in self.pairs:
            for ei in e:
                row = self.t[ei]
                for fj in f:
                    row[fj] = uniform
        self.history: list[float] = [self.log_likelihood()]

    def log_likelihood(self) -> float:
        ll = 0.0
        for e, f in self.pairs:
            for fj in f:
                ll += math.log(sum(self.t[ei][fj] for ei in e))
            ll -= len(f) * math.log(len(e))
        return ll

    def step(self) -> float:
        counts: dict[str, dict[str, float]] = defaultdict(lambda: defaultdict(float))
        for e, f in self.pairs:
            for fj in f:
                z = sum(self.t[ei][fj] for ei in e)
                for ei in e:
                    counts[ei][fj] += self.t[ei][fj] / z
        new: dict[str, dict[str, float]] = defaultdict(dict)
        for ei in sorted(counts):
            row = counts[ei]
            total = math.fsum(row.values())
            for fj in sorted(row):
                new[ei][fj] = row[fj] / total
        self.t = new
        ll = self.log_likelihood()
        self.history.append(ll)
        return ll

    def fit(self, iterations: int = 10) -> "IBMModel1":
        if iterations < 1:
            raise ValidationError("iterations must be >= 1")
        for _ in range(iterations):
            self.step()
        return self

    def lexicon(self, threshold: float = 0.1, source: str = "ibm1") -> BilingualLexicon:
        if not 0 < threshold <= 1:
            raise ValidationError("threshold must be in (0, 1]")
        entries = {}
        for crl, row in self.t.items():
            if crl == NULL:
                continue
            kept = [Translation(h, p, source) for h, p in row.items() if p >= threshold]
            if kept:
                entries[crl] = kept
        return BilingualLexicon([source], entries)


def induce_lexicon_ibm1(
    bitext: Iterable[tuple[str, str]], iterations: int = 10, prob_threshold: float = 0.1
) -> BilingualLexicon:
    """Lexicon from (crl sentence, hrl sentence) pairs via IBM Model 1."""
    if iterations < 1:
        raise ValidationError("iterations must be >= 1")
    if not 0 < prob_threshold <= 1:
        raise ValidationError("threshold must be in (0, 1]")
    return IBMModel1(bitext).fit(iterations).lexicon(prob_threshold)


# --------------------------------------------------------------------------
# projection


@dataclass(frozen=True)
class CrlFunctionWordSet:
    words: frozenset[str]

    def __contains__(self, word: str) -> bool:
        return fold(word) in self.words

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(sorted(self.words))


def project_function_words(
    lex: BilingualLexicon, hrl_funcs: FunctionWordList | Iterable[str]
) -> CrlFunctionWordSet:
    funcs = hrl_funcs.words if isinstance(hrl_funcs, FunctionWordList) else {fold(w) for w in hrl_funcs}
    return CrlFunctionWordSet(frozenset(crl for crl in lex.entries if lex.lookup(crl) in funcs))


def write_word_set(ws: Iterable[str], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for w in sorted(ws):
            f.write(w + "\n")


def read_crl_function_words(path) -> CrlFunctionWordSet:
    with open(path, encoding="utf-8") as f:
        return CrlFunctionWordSet(frozenset(fold(l.strip()) for l in f if l.strip()))
