"""Diagnostics: chrF proximity, empirical noise rates, function-word share."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BothEmpty, EmptyCorpus, LengthMismatch, ValidationError
from .noisers import DIMENSIONS, MIN_STEM, ArtificialLanguage, Resources
from .phonology import to_phonemes
from .text import fold, words


@dataclass(frozen=True)
class ChrfParams:
    max_n: int = 6
    beta: float = 2.0

    def __post_init__(self):
        if self.max_n < 1 or self.beta <= 0:
            raise ValidationError("chrF needs max_n >= 1 and beta > 0")


def _ngrams(s: str, n: int) -> Counter:
    return Counter(s[i : i + n] for i in range(len(s) - n + 1))


def _strip_ws(s: str) -> str:
    return "".join(s.split())


def _stats(hyp: str, ref: str, n: int) -> tuple[int, int, int]:
    h, r = _ngrams(hyp, n), _ngrams(ref, n)
    match = sum((h & r).values())
    return match, sum(h.values()), sum(r.values())


def _f_score(match: int, hyp_total: int, ref_total: int, beta: float) -> float:
    p = match / hyp_total if hyp_total else 0.0
    r = match / ref_total if ref_total else 0.0
    if p == 0 and r == 0:
        return 0.0
    b2 = beta * beta
    return (1 + b2) * p * r / (b2 * p + r)


def _score(stats: Sequence[tuple[int, int, int]], beta: float) -> float:
    fs = [_f_score(m, h, r, beta) for m, h, r in stats if h or r]
    return 100.0 * sum(fs) / len(fs) if fs else 0.0


def chrf(hypothesis: str, reference: str, params: ChrfParams = ChrfParams()) -> float:
    """Character n-gram F-score in [0, 100], whitespace ignored.

    F is computed per order and averaged over orders for which at least one
    side has n-grams.
    """
    hyp, ref = _strip_ws(hypothesis), _strip_ws(reference)
    if not hyp and not ref:
        raise BothEmpty("both strings are empty after whitespace removal")
    stats = [_stats(hyp, ref, n) for n in range(1, params.max_n + 1)]
    return _score(stats, params.beta)


def corpus_chrf(
    hyps: Sequence[str], refs: Sequence[str], params: ChrfParams = ChrfParams()
) -> float:
    """Corpus chrF from n-gram statistics pooled over all lines."""
    if len(hyps) != len(refs):
        raise LengthMismatch(len(hyps), len(refs))
    pooled = [[0, 0, 0] for _ in range(params.max_n)]
    for hyp, ref in zip(hyps, refs):
        hyp, ref = _strip_ws(hyp), _strip_ws(ref)
        for n in range(1, params.max_n + 1):
            m, h, r = _stats(hyp, ref, n)
            acc = pooled[n - 1]
            acc[0] += m
            acc[1] += h
            acc[2] += r
    if not any(acc[1] or acc[2] for acc in pooled):
        raise BothEmpty("both corpora are empty after whitespace removal")
    return _score([tuple(acc) for acc in pooled], params.beta)


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance over characters."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


# --------------------------------------------------------------------------
# noise rates


@dataclass(frozen=True)
class DimensionRate:
    dim: str
    universe: int
    changed: int
    theta: float

    @property
    def rate(self) -> float:
        return self.changed / self.universe if self.universe else 0.0


@dataclass(frozen=True)
class NoiseRateReport:
    rates: tuple[DimensionRate, ...]

    def __getitem__(self, dim: str) -> DimensionRate:
        for r in self.rates:
            if r.dim == dim:
                return r
        raise KeyError(dim)

    def to_tsv(self, label: str | None = None, header: bool = True) -> str:
        rows = []
        if header:
            rows.append(("chunk\t" if label is not None else "") + "dim\tuniverse\tchanged\trate\ttheta")
        for r in self.rates:
            prefix = f"{label}\t" if label is not None else ""
            rows.append(f"{prefix}{r.dim}\t{r.universe}\t{r.changed}\t{r.rate:.4f}\t{r.theta:g}")
        return "\n".join(rows) + "\n"


def noise_rate_report(
    original: Sequence[str],
    noised: Sequence[str],
    lang: ArtificialLanguage,
    res: Resources,
) -> NoiseRateReport:
    """Type-level rates: of the units attested in ``original``, how many does ``lang`` change."""
    if len(original) != len(noised):
        raise LengthMismatch(len(original), len(noised))
    types = set()
    for line in original:
        types.update(words(line))

    phonemes = set()
    for w in types:
        phonemes.update(s.symbol for s in to_phonemes(w, res.g2p) if s.symbol is not None)
    p_changed = sum(1 for s in phonemes if s in lang.phoneme_map)

    suffixes = set()
    inventory = set(res.suffixes)
    longest = max((len(s) for s in inventory), default=0)
    for w in types:
        for L in range(1, min(longest, len(w) - MIN_STEM) + 1):
            if w[-L:] in inventory:
                suffixes.add(w[-L:])
    m_changed = sum(1 for s in suffixes if lang.suffix_map.get(s, s) != s)

    funcs = {w for w in types if w in res.function_words.words}
    f_changed = sum(1 for w in funcs if lang.function_word_map.get(w, w) != w)

    content = types - funcs
    c_changed = sum(1 for w in sorted(content) if lang.content_replacement(w, res) != w)

    counts = {
        "p": (len(phonemes), p_changed),
        "m": (len(suffixes), m_changed),
        "f": (len(funcs), f_changed),
        "c": (len(content), c_changed),
    }
    return NoiseRateReport(
        tuple(DimensionRate(d, *counts[d], lang.dials[d]) for d in DIMENSIONS)
    )


def function_word_share(lines: Iterable[str], funcset: Iterable[str]) -> float:
    """Fraction of word tokens whose case-folded core is in ``funcset``."""
    fs = getattr(funcset, "words", None)
    fs = fs if fs is not None else {fold(w) for w in funcset}
    if not fs:
        raise ValidationError("function-word set is empty")
    total = hits = 0
    for line in lines:
        for w in words(line):
            total += 1
            hits += w in fs
    if not total:
        raise EmptyCorpus("corpus has no word tokens")
    return hits / total
