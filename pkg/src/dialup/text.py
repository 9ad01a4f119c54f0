"""Whitespace tokenization with punctuation detachment and case handling."""

from __future__ import annotations

import re
import unicodedata
from typing import Iterator, NamedTuple

_WS = re.compile(r"(\s+)")


class Token(NamedTuple):
    lead: str
    core: str
    trail: str

    def join(self, core: str | None = None) -> str:
        return self.lead + (self.core if core is None else core) + self.trail


def _is_word_char(ch: str) -> bool:
    # combining marks (Devanagari matras, Arabic harakat) belong to the word
    return ch.isalnum() or unicodedata.category(ch)[0] == "M"


def split_token(tok: str) -> Token:
    i, j = 0, len(tok)
    while i < j and not _is_word_char(tok[i]):
        i += 1
    while j > i and not _is_word_char(tok[j - 1]):
        j -= 1
    return Token(tok[:i], tok[i:j], tok[j:])


def split_layout(line: str) -> list[str]:
    """Split into pieces where odd indices are whitespace runs.

    Even indices hold tokens and may be empty (leading/trailing whitespace),
    so ``"".join(pieces) == line`` always holds.
    """
    return _WS.split(line)


def has_alpha(s: str) -> bool:
    return any(ch.isalpha() for ch in s)


def fold(s: str) -> str:
    return s.casefold()


def match_case(original: str, replacement: str) -> str:
    """Carry the capitalization pattern of ``original`` over to ``replacement``."""
    if not replacement or not original:
        return replacement
    if len(original) > 1 and original.isupper():
        return replacement.upper()
    if original[0].isupper():
        return replacement[0].upper() + replacement[1:]
    return replacement


def words(line: str) -> Iterator[str]:
    """Case-folded word cores of a line; tokens without letters are skipped."""
    for tok in line.split():
        core = split_token(tok).core
        if has_alpha(core):
            yield fold(core)
