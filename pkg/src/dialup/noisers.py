"""Artificial-language sampling and application.

An :class:`ArtificialLanguage` is a frozen map of changes from the HRL:
phoneme substitutions, suffix replacements, function-word replacements and
(lazily decided) content-word replacements by non-words. Every decision is a
pure function of the language seed and the unit, so applying a language gives
the same result regardless of which sentence a unit is first seen in.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field, fields, replace
from typing import Iterable, Mapping

from .errors import ValidationError
from .phonology import (
    GraphemePhonemeTable,
    PhonemeInventory,
    check_table,
    load_inventory,
    load_table,
    phonetic_neighbors,
    to_phonemes,
)
from .resources import (
    CharNgramModel,
    FunctionWordList,
    ResourcePaths,
    SuffixInventory,
    Vocabulary,
    generate_nonword,
    read_char_ngram,
    read_function_words,
    read_suffixes,
    read_vocabulary,
)
from .seeding import derive_rng, unit_uniform
from .text import fold, has_alpha, match_case, split_layout, split_token

# phonological noise applied inside suffixes and function words
INTERNAL_DIAL = 0.8
MIN_STEM = 2

DIMENSIONS = ("p", "m", "f", "c")


@dataclass(frozen=True)
class NoiseDials:
    theta_p: float = 0.0
    theta_m: float = 0.0
    theta_f: float = 0.0
    theta_c: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{f.name} must be in [0, 1], got {v}")

    def __getitem__(self, dim: str) -> float:
        return getattr(self, f"theta_{dim}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.theta_p, self.theta_m, self.theta_f, self.theta_c)

    def with_dim(self, dim: str, value: float) -> "NoiseDials":
        return replace(self, **{f"theta_{dim}": value})

    def scaled(self, factor: float) -> "NoiseDials":
        # rounding keeps radii like 0.8 * 1/10 printable as 0.08
        return NoiseDials(*(round(v * factor, 12) for v in self.as_tuple()))

    @property
    def is_zero(self) -> bool:
        return not any(self.as_tuple())


SHELL_DIALS = NoiseDials(0.05, 0.3, 0.5, 0.001)
CLOUD_MAX_DIALS = NoiseDials(0.07, 0.5, 0.8, 0.001)


@dataclass(frozen=True)
class RandaugDials:
    theta_rc: float = 0.0
    theta_rw: float = 0.0

    def __post_init__(self):
        for name in ("theta_rc", "theta_rw"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{name} must be in [0, 1], got {v}")

    def scaled(self, factor: float) -> "RandaugDials":
        return RandaugDials(round(self.theta_rc * factor, 12), round(self.theta_rw * factor, 12))


RANDAUG_SHELL_DIALS = RandaugDials(0.05, 0.001)
RANDAUG_CLOUD_MAX_DIALS = RandaugDials(0.07, 0.001)


@dataclass(eq=False)
class Resources:
    """Everything a language needs to be sampled and applied."""

    inventory: PhonemeInventory
    g2p: GraphemePhonemeTable
    suffixes: SuffixInventory
    function_words: FunctionWordList
    charlm: CharNgramModel
    vocab: Vocabulary
    _candidates: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        check_table(self.g2p, self.inventory)

    def candidates(self, symbol: str) -> tuple[str, ...]:
        return phoneme_candidates(symbol, self.inventory, self.g2p, self._candidates)

    @classmethod
    def load(cls, directory, g2p: str, inventory=None) -> "Resources":
        """Read the four files written by ``resources build`` plus a G2P table."""
        paths = ResourcePaths.in_dir(directory)
        return cls(
            load_inventory(inventory),
            load_table(g2p),
            read_suffixes(paths.suffixes),
            read_function_words(paths.function_words),
            read_char_ngram(paths.charlm),
            read_vocabulary(paths.vocab),
        )


def phoneme_candidates(
    symbol: str, inv: PhonemeInventory, g2p: GraphemePhonemeTable, cache: dict | None = None
) -> tuple[str, ...]:
    """Radius-1 neighbours of ``symbol`` that the script can spell, sorted."""
    if cache is not None and symbol in cache:
        return cache[symbol]
    spellable = g2p.invertible
    out = tuple(sorted(q.symbol for q in phonetic_neighbors(symbol, inv, 1) if q.symbol in spellable))
    if cache is not None:
        cache[symbol] = out
    return out


def noise_unit_phonologically(
    unit: str,
    internal_dial: float,
    inv: PhonemeInventory,
    g2p: GraphemePhonemeTable,
    rng: random.Random,
    cache: dict | None = None,
) -> str:
    """Replace each phoneme of ``unit`` with a random nearby phoneme with probability ``internal_dial``.

    The result can equal the input when every coin misses; that is left alone
    rather than resampled.
    """
    if not 0.0 <= internal_dial <= 1.0:
        raise ValidationError("internal_dial must be in [0, 1]")
    out = []
    for seg in to_phonemes(unit, g2p):
        if seg.is_residue:
            out.append(seg.source)
            continue
        hit = rng.random() < internal_dial
        cands = phoneme_candidates(seg.symbol, inv, g2p, cache)
        if hit and cands:
            out.append(g2p.grapheme_for(rng.choice(cands)))
        else:
            out.append(seg.source)
    return "".join(out)


class ArtificialLanguage:
    def __init__(
        self,
        dials: NoiseDials,
        seed: int,
        phoneme_map: Mapping[str, str] | None = None,
        suffix_map: Mapping[str, str] | None = None,
        function_word_map: Mapping[str, str] | None = None,
        content_word_map: Mapping[str, str] | None = None,
    ):
        self.dials = dials
        self.seed = int(seed)
        self.phoneme_map = dict(phoneme_map or {})
        self.suffix_map = dict(suffix_map or {})
        self.function_word_map = dict(function_word_map or {})
        # word -> replacement; identity decisions are stored as word -> word
        self.content_word_map: dict[str, str] = dict(content_word_map or {})
        self._lock = threading.Lock()
        self._token_cache: dict[str, str] = {}
        self._bound_to: int | None = None
        self._max_suffix = max((len(s) for s in self.suffix_map), default=0)

    def __repr__(self) -> str:
        return (
            f"<ArtificialLanguage seed={self.seed} dials={self.dials.as_tuple()} "
            f"phonemes={len(self.phoneme_map)} suffixes={len(self.suffix_map)} "
            f"function_words={len(self.function_word_map)}>"
        )

    # -- content words ---------------------------------------------------

    def content_replacement(self, word: str, res: Resources) -> str:
        """Decide (once) whether content word ``word`` becomes a non-word."""
        word = fold(word)
        got = self.content_word_map.get(word)
        if got is not None:
            return got
        if unit_uniform(self.seed, "content", word) < self.dials.theta_c:
            rng = derive_rng(self.seed, "content-nonword", word)
            decision = fold(generate_nonword(res.charlm, len(word), res.vocab, rng))
        else:
            decision = word
        with self._lock:
            return self.content_word_map.setdefault(word, decision)

    # -- application -----------------------------------------------------

    def _spell(self, orig: str, folded: str, g2p: GraphemePhonemeTable) -> str:
        """Push ``folded`` through the phoneme map, keeping the casing of ``orig``."""
        pmap = self.phoneme_map
        if not pmap:
            return orig
        aligned = len(orig) == len(folded)
        parts = []
        changed = False
        pos = 0
        for seg in to_phonemes(folded, g2p):
            n = len(seg.source)
            src = orig[pos : pos + n] if aligned else seg.source
            target = pmap.get(seg.symbol) if seg.symbol is not None else None
            if target is None:
                parts.append(src)
            else:
                g = g2p.grapheme_for(target)
                if src[:1].isupper():
                    g = g[:1].upper() + g[1:]
                parts.append(g)
                changed = True
            pos += n
        if not changed:
            return orig
        out = "".join(parts)
        return out if aligned else match_case(orig, out)

    def transform_word(self, core: str, res: Resources) -> str:
        key = fold(core)
        fw = self.function_word_map.get(key)
        if fw is not None:
            return match_case(core, fw)
        if key not in res.function_words:
            cw = self.content_replacement(key, res)
            if cw != key:
                return match_case(core, cw)
        aligned = len(core) == len(key)
        for L in range(min(self._max_suffix, len(key) - MIN_STEM), 0, -1):
            suf = key[-L:]
            rep = self.suffix_map.get(suf)
            if rep is None:
                continue
            if aligned:
                stem = self._spell(core[:-L], key[:-L], res.g2p)
                out = stem + rep
                return out.upper() if len(core) > 1 and core.isupper() else out
            stem = self._spell(key[:-L], key[:-L], res.g2p)
            return match_case(core, stem + rep)
        return self._spell(core, key, res.g2p)

    def apply(self, sentence: str, res: Resources) -> str:
        if self._bound_to != id(res):
            with self._lock:
                self._token_cache = {}
                self._bound_to = id(res)
        cache = self._token_cache
        pieces = split_layout(sentence)
        for i in range(0, len(pieces), 2):
            tok = pieces[i]
            if not tok:
                continue
            out = cache.get(tok)
            if out is None:
                lead, core, trail = split_token(tok)
                out = lead + self.transform_word(core, res) + trail if has_alpha(core) else tok
                cache[tok] = out
            pieces[i] = out
        return "".join(pieces)

    # -- serialization ---------------------------------------------------

    def to_text(self) -> str:
        d = self.dials
        lines = [
            "# artificial language",
            f"#seed={self.seed} #theta_p={d.theta_p!r} #theta_m={d.theta_m!r} "
            f"#theta_f={d.theta_f!r} #theta_c={d.theta_c!r}",
        ]
        for name, mapping in (
            ("phonemes", self.phoneme_map),
            ("suffixes", self.suffix_map),
            ("function_words", self.function_word_map),
            ("content_words", self.content_word_map),
        ):
            lines.append(f"[{name}]")
            # identity content decisions are re-derivable from the seed
            lines.extend(f"{k}\t{v}" for k, v in sorted(mapping.items()) if k != v)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ArtificialLanguage":
        header: dict[str, str] = {}
        sections: dict[str, dict[str, str]] = {
            "phonemes": {},
            "suffixes": {},
            "function_words": {},
            "content_words": {},
        }
        current = None
        for no, line in enumerate(text.splitlines(), 1):
            if not line:
                continue
            if line.startswith("#"):
                for part in line.split():
                    k, sep, v = part.lstrip("#").partition("=")
                    if sep:
                        header[k] = v
                continue
            if line.startswith("[") and line.endswith("]"):
                current = line[1:-1]
                if current not in sections:
                    raise ValidationError(f"line {no}: unknown section {current!r}")
                continue
            src, sep, tgt = line.partition("\t")
            if current is None or not sep or not src or not tgt:
                raise ValidationError(f"line {no}: expected source<TAB>target inside a section")
            sections[current][src] = tgt
        try:
            dials = NoiseDials(*(float(header[f"theta_{d}"]) for d in DIMENSIONS))
            seed = int(header["seed"])
        except KeyError as e:
            raise ValidationError(f"language header missing {e}") from None
        return cls(
            dials,
            seed,
            sections["phonemes"],
            sections["suffixes"],
            sections["function_words"],
            sections["content_words"],
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_text())

    @classmethod
    def load(cls, path) -> "ArtificialLanguage":
        with open(path, encoding="utf-8") as f:
            return cls.from_text(f.read())


def sample_language(dials: NoiseDials, res: Resources, seed: int) -> ArtificialLanguage:
    """Draw the phoneme, suffix and function-word maps of one artificial language.

    Each unit type gets its own coin from (seed, dimension, unit), so raising a
    dial with the seed fixed only ever adds units to a map.
    """
    check_table(res.g2p, res.inventory)
    phoneme_map: dict[str, str] = {}
    if dials.theta_p > 0:
        for sym in sorted(res.g2p.phonemes):
            rng = derive_rng(seed, "phoneme", sym)
            if rng.random() < dials.theta_p:
                cands = res.candidates(sym)
                if cands:
                    phoneme_map[sym] = rng.choice(cands)

    def noise_units(units: Iterable[str], dim: str, theta: float) -> dict[str, str]:
        out: dict[str, str] = {}
        if theta <= 0:
            return out
        for unit in units:
            rng = derive_rng(seed, dim, unit)
            if rng.random() < theta:
                noised = noise_unit_phonologically(
                    unit, INTERNAL_DIAL, res.inventory, res.g2p, rng, res._candidates
                )
                if noised != unit:
                    out[unit] = noised
        return out

    suffix_map = noise_units(res.suffixes, "suffix", dials.theta_m)
    function_map = noise_units(res.function_words, "function", dials.theta_f)
    return ArtificialLanguage(dials, seed, phoneme_map, suffix_map, function_map)


def apply_language(sentence: str, lang: ArtificialLanguage, res: Resources) -> str:
    return lang.apply(sentence, res)


class RandaugNoiser:
    """Uniform character and word substitutions, with no linguistic motivation."""

    def __init__(self, dials: RandaugDials, script_alphabet: Iterable[str], vocab: Iterable[str]):
        self.dials = dials
        self.alphabet = sorted(set(script_alphabet))
        if not self.alphabet:
            raise ValidationError("script alphabet must be nonempty")
        self.words = sorted(set(fold(w) for w in vocab))

    def _other_word(self, key: str, rng: random.Random) -> str | None:
        words = self.words
        if not words or (len(words) == 1 and words[0] == key):
            return None
        while True:
            w = words[rng.randrange(len(words))]
            if w != key:
                return w

    def apply(self, sentence: str, rng: random.Random) -> str:
        rc, rw = self.dials.theta_rc, self.dials.theta_rw
        if rc == 0 and rw == 0:
            return sentence
        pieces = split_layout(sentence)
        for i in range(0, len(pieces), 2):
            tok = pieces[i]
            if not tok:
                continue
            lead, core, trail = split_token(tok)
            if not has_alpha(core):
                continue
            if rng.random() < rw:
                other = self._other_word(fold(core), rng)
                if other is not None:
                    pieces[i] = lead + match_case(core, other) + trail
                    continue
            chars = list(core)
            for j, ch in enumerate(chars):
                if ch.isalpha() and rng.random() < rc:
                    new = self.alphabet[rng.randrange(len(self.alphabet))]
                    chars[j] = new.upper() if ch.isupper() else new
            pieces[i] = lead + "".join(chars) + trail
        return "".join(pieces)


def apply_randaug(
    sentence: str,
    rd: RandaugDials,
    script_alphabet: Iterable[str],
    vocab: Iterable[str],
    rng: random.Random,
) -> str:
    return RandaugNoiser(rd, script_alphabet, vocab).apply(sentence, rng)

