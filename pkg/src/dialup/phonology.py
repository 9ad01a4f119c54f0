"""Grapheme/phoneme transduction and phonetic proximity.

Tables map orthographic units to IPA symbols and back. Phonemes carry a small
categorical feature bundle (three features per class); two phonemes are
"nearby" when their bundles differ in at most ``radius`` features.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources as _res
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

from .errors import (
    MalformedLine,
    PhonemeNotInInventory,
    ResourceMismatch,
    UnmappedPhoneme,
    ValidationError,
)

CONSONANT = "consonant"
VOWEL = "vowel"

CONSONANT_FEATURES = ("voicing", "place", "manner")
VOWEL_FEATURES = ("height", "backness", "rounding")
_BINARY = {"+", "-"}


@dataclass(frozen=True)
class Phoneme:
    symbol: str
    cls: str
    features: tuple[str, str, str]

    def __post_init__(self):
        if not self.symbol:
            raise ValidationError("phoneme symbol must be nonempty")
        if self.cls not in (CONSONANT, VOWEL):
            raise ValidationError(f"{self.symbol}: unknown class {self.cls!r}")
        if len(self.features) != 3 or not all(self.features):
            raise ValidationError(f"{self.symbol}: incomplete feature bundle {self.features}")
        binary = self.features[0] if self.cls == CONSONANT else self.features[2]
        if binary not in _BINARY:
            raise ValidationError(f"{self.symbol}: binary feature must be + or -, got {binary!r}")

    @property
    def feature_dict(self) -> dict[str, str]:
        names = CONSONANT_FEATURES if self.cls == CONSONANT else VOWEL_FEATURES
        return dict(zip(names, self.features))


def feature_distance(a: Phoneme, b: Phoneme) -> int:
    """Hamming distance between feature bundles; phonemes of different class never match."""
    if a.cls != b.cls:
        raise ValueError("distance is only defined within a class")
    return sum(x != y for x, y in zip(a.features, b.features))


class PhonemeInventory:
    def __init__(self, phonemes: Iterable[Phoneme]):
        by_symbol: dict[str, Phoneme] = {}
        for p in phonemes:
            if p.symbol in by_symbol:
                raise ValidationError(f"duplicate phoneme symbol {p.symbol!r}")
            by_symbol[p.symbol] = p
        classes = {p.cls for p in by_symbol.values()}
        if classes != {CONSONANT, VOWEL}:
            raise ValidationError("inventory needs at least one consonant and one vowel")
        self._by_symbol = by_symbol
        self._neighbor_cache: dict[tuple[str, int], frozenset[Phoneme]] = {}

    def __contains__(self, item: Union[str, Phoneme]) -> bool:
        sym = item.symbol if isinstance(item, Phoneme) else item
        return sym in self._by_symbol

    def __getitem__(self, symbol: str) -> Phoneme:
        try:
            return self._by_symbol[symbol]
        except KeyError:
            raise PhonemeNotInInventory(symbol) from None

    def __iter__(self) -> Iterator[Phoneme]:
        return iter(sorted(self._by_symbol.values(), key=lambda p: p.symbol))

    def __len__(self) -> int:
        return len(self._by_symbol)

    @property
    def symbols(self) -> frozenset[str]:
        return frozenset(self._by_symbol)

    def __repr__(self) -> str:
        return f"<PhonemeInventory {len(self)} phonemes>"


def parse_inventory(lines: Iterable[str]) -> PhonemeInventory:
    """Read ``symbol<TAB>class<TAB>f1<TAB>f2<TAB>f3`` rows."""
    phonemes = []
    for no, raw in enumerate(lines, 1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 5:
            raise MalformedLine(no, f"expected 5 columns, got {len(cols)}")
        try:
            phonemes.append(Phoneme(cols[0], cols[1], (cols[2], cols[3], cols[4])))
        except ValidationError as e:
            raise MalformedLine(no, str(e)) from None
    return PhonemeInventory(phonemes)


def load_inventory(path: Union[str, Path, None] = None) -> PhonemeInventory:
    """Load a feature inventory; without a path, the bundled IPA inventory."""
    if path is None:
        text = _res.files("dialup.data").joinpath("ipa_features.tsv").read_text("utf-8")
        return parse_inventory(text.splitlines())
    with open(path, encoding="utf-8") as f:
        return parse_inventory(f)


def phonetic_neighbors(
    p: Union[Phoneme, str], inv: PhonemeInventory, radius: int = 1
) -> frozenset[Phoneme]:
    """Same-class phonemes of ``inv`` within ``radius`` feature flips of ``p`` (excluding ``p``)."""
    if radius < 1:
        raise ValidationError("radius must be >= 1")
    sym = p.symbol if isinstance(p, Phoneme) else p
    if sym not in inv:
        raise PhonemeNotInInventory(sym)
    cached = inv._neighbor_cache.get((sym, radius))
    if cached is None:
        me = inv[sym]
        cached = frozenset(
            q
            for q in inv
            if q.symbol != sym and q.cls == me.cls and feature_distance(me, q) <= radius
        )
        inv._neighbor_cache[(sym, radius)] = cached
    return cached


class Segment(NamedTuple):
    """A slice of input text and the phoneme it spells (None for residue)."""

    source: str
    symbol: str | None

    @property
    def is_residue(self) -> bool:
        return self.symbol is None


@dataclass(frozen=True)
class GraphemePhonemeTable:
    script_id: str
    # (grapheme, phoneme symbol, bijective)
    pairs: tuple[tuple[str, str, bool], ...]
    _forward: dict = field(init=False, repr=False, compare=False)
    _inverse: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        forward: dict[str, str] = {}
        inverse: dict[str, str] = {}
        for g, ph, bij in self.pairs:
            if not g or not ph:
                raise ValidationError("empty grapheme or phoneme in table")
            if g in forward:
                raise ValidationError(f"{self.script_id}: duplicate grapheme {g!r}")
            forward[g] = ph
            if bij:
                if ph in inverse:
                    raise ValidationError(
                        f"{self.script_id}: phoneme {ph!r} has two bijective graphemes "
                        f"({inverse[ph]!r}, {g!r})"
                    )
                inverse[ph] = g
        object.__setattr__(self, "_forward", forward)
        object.__setattr__(self, "_inverse", inverse)

    @cached_property
    def max_grapheme_len(self) -> int:
        return max((len(g) for g in self._forward), default=0)

    @cached_property
    def phonemes(self) -> frozenset[str]:
        """Every phoneme the table can produce from text."""
        return frozenset(self._forward.values())

    @cached_property
    def invertible(self) -> frozenset[str]:
        """Phonemes that have a canonical spelling."""
        return frozenset(self._inverse)

    @property
    def graphemes(self) -> frozenset[str]:
        return frozenset(self._forward)

    def grapheme_for(self, symbol: str) -> str:
        try:
            return self._inverse[symbol]
        except KeyError:
            raise UnmappedPhoneme(symbol) from None

    def phoneme_for(self, grapheme: str) -> str | None:
        return self._forward.get(grapheme)

    def is_bijective(self, grapheme: str) -> bool:
        ph = self._forward.get(grapheme)
        return ph is not None and self._inverse.get(ph) == grapheme


def parse_table(lines: Iterable[str], script_id: str) -> GraphemePhonemeTable:
    pairs = []
    for no, raw in enumerate(lines, 1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) not in (2, 3) or (len(cols) == 3 and cols[2] != "oneway"):
            raise MalformedLine(no, "expected grapheme<TAB>ipa[<TAB>oneway]")
        pairs.append((cols[0], cols[1], len(cols) == 2))
    try:
        return GraphemePhonemeTable(script_id, tuple(pairs))
    except ValidationError as e:
        raise ValidationError(f"bad table {script_id}: {e}") from None


def _data_dir():
    return _res.files("dialup.data").joinpath("g2p")


def shipped_tables() -> list[str]:
    return sorted(p.name[:-4] for p in _data_dir().iterdir() if p.name.endswith(".tsv"))


def load_table(name_or_path: Union[str, Path]) -> GraphemePhonemeTable:
    """Load a shipped table by id (e.g. ``latn_tur``) or any table file by path."""
    path = Path(name_or_path)
    if path.suffix == ".tsv" and path.exists():
        with open(path, encoding="utf-8") as f:
            return parse_table(f, path.stem)
    name = str(name_or_path)
    res = _data_dir().joinpath(f"{name}.tsv")
    if not res.is_file():
        raise ValidationError(f"unknown G2P table {name!r} (shipped: {', '.join(shipped_tables())})")
    return parse_table(res.read_text("utf-8").splitlines(), name)


def load_test_vocab(name: str) -> list[str]:
    res = _data_dir().joinpath(f"{name}.vocab")
    if not res.is_file():
        return []
    return [w.strip() for w in res.read_text("utf-8").splitlines() if w.strip()]


def to_phonemes(text: str, table: GraphemePhonemeTable) -> list[Segment]:
    """Greedy longest-match transduction, left to right."""
    out: list[Segment] = []
    i, n = 0, len(text)
    longest = table.max_grapheme_len
    while i < n:
        for L in range(min(longest, n - i), 0, -1):
            chunk = text[i : i + L]
            ph = table.phoneme_for(chunk)
            if ph is not None:
                out.append(Segment(chunk, ph))
                i += L
                break
        else:
            out.append(Segment(text[i], None))
            i += 1
    return out


def from_phonemes(segments: Sequence[Union[Segment, str]], table: GraphemePhonemeTable) -> str:
    """Spell phonemes with their canonical graphemes; residues are copied through.

    Bare strings are taken to be phoneme symbols.
    """
    parts = []
    for seg in segments:
        if isinstance(seg, Segment):
            parts.append(seg.source if seg.is_residue else table.grapheme_for(seg.symbol))
        else:
            parts.append(table.grapheme_for(seg))
    return "".join(parts)


def check_table(table: GraphemePhonemeTable, inv: PhonemeInventory) -> None:
    missing = sorted(table.phonemes - inv.symbols)
    if missing:
        raise ResourceMismatch(
            f"table {table.script_id} uses phonemes missing from the inventory: {' '.join(missing)}"
        )
