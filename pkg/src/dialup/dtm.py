"""Inference-time adaptation of CRL text: swap words for their HRL translations.

Tokens are whitespace-delimited with leading/trailing punctuation detached; a
token is a function word iff its case-folded core is in the projected CRL
function-word set, and a content word otherwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .lexicon import BilingualLexicon, CrlFunctionWordSet
from .text import fold, has_alpha, match_case, split_layout, split_token

FUNCTION = "function"
CONTENT = "content"


class SwapMode(str, enum.Enum):
    FUNC = "func"
    CONT = "cont"
    ALL = "all"

    def accepts(self, cls: str) -> bool:
        if self is SwapMode.ALL:
            return True
        return (cls == FUNCTION) == (self is SwapMode.FUNC)


class Swap(NamedTuple):
    index: int
    original: str
    replacement: str
    cls: str
    line: int = 0


@dataclass
class SwapReport:
    mode: SwapMode
    total: int = 0
    swaps: list[Swap] = field(default_factory=list)
    skipped_unknown: int = 0

    @property
    def swapped(self) -> int:
        return len(self.swaps)

    @property
    def rate(self) -> float:
        return self.swapped / self.total if self.total else 0.0

    def positions(self) -> set[tuple[int, int]]:
        return {(s.line, s.index) for s in self.swaps}

    def summary_tsv(self) -> str:
        return (
            "mode\ttotal\tswapped\trate\tskipped_unknown\n"
            f"{self.mode.value}\t{self.total}\t{self.swapped}\t{self.rate:.4f}\t{self.skipped_unknown}\n"
        )

    def trace_tsv(self) -> str:
        rows = ["line\tindex\toriginal\treplacement\tclass"]
        rows += [f"{s.line}\t{s.index}\t{s.original}\t{s.replacement}\t{s.cls}" for s in self.swaps]
        return "\n".join(rows) + "\n"


def classify(core: str, crl_funcs: CrlFunctionWordSet) -> str:
    return FUNCTION if fold(core) in crl_funcs.words else CONTENT


def swap_sentence(
    sentence: str,
    lex: BilingualLexicon,
    crl_funcs: CrlFunctionWordSet,
    mode: SwapMode | str,
    line_no: int = 0,
) -> tuple[str, SwapReport]:
    mode = SwapMode(mode)
    report = SwapReport(mode)
    pieces = split_layout(sentence)
    index = 0
    for i in range(0, len(pieces), 2):
        tok = pieces[i]
        if not tok:
            continue
        report.total += 1
        lead, core, trail = split_token(tok)
        if has_alpha(core):
            cls = classify(core, crl_funcs)
            if mode.accepts(cls):
                hrl = lex.lookup(core)
                if hrl is None:
                    report.skipped_unknown += 1
                else:
                    rep = match_case(core, hrl)
                    pieces[i] = lead + rep + trail
                    report.swaps.append(Swap(index, core, rep, cls, line_no))
        index += 1
    return "".join(pieces), report


def swap_corpus(
    lines: Iterable[str],
    lex: BilingualLexicon,
    crl_funcs: CrlFunctionWordSet,
    mode: SwapMode | str,
) -> tuple[list[str], SwapReport]:
    mode = SwapMode(mode)
    total = SwapReport(mode)
    out = []
    for no, line in enumerate(lines):
        swapped, rep = swap_sentence(line, lex, crl_funcs, mode, no)
        out.append(swapped)
        total.total += rep.total
        total.skipped_unknown += rep.skipped_unknown
        total.swaps.extend(rep.swaps)
    return out, total
