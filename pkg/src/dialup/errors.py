"""Exception types shared across the package."""


class DialupError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(DialupError, ValueError):
    """Bad arguments or configuration, detected before any work is done."""


class MalformedLine(DialupError, ValueError):
    def __init__(self, line_no: int, reason: str = ""):
        self.line_no = line_no
        self.reason = reason
        msg = f"malformed line {line_no}"
        super().__init__(f"{msg}: {reason}" if reason else msg)


class UnmappedPhoneme(DialupError, KeyError):
    def __init__(self, symbol: str):
        self.symbol = symbol
        super().__init__(symbol)

    def __str__(self) -> str:
        return f"phoneme {self.symbol!r} has no inverse grapheme"


class PhonemeNotInInventory(DialupError, KeyError):
    def __init__(self, symbol: str):
        self.symbol = symbol
        super().__init__(symbol)

    def __str__(self) -> str:
        return f"phoneme {self.symbol!r} is not in the inventory"


class ResourceMismatch(DialupError):
    pass


class EmptyCorpus(DialupError, ValueError):
    pass


class EmptyVocabulary(DialupError, ValueError):
    pass


class EmptyBitext(DialupError, ValueError):
    pass


class TooFewLines(DialupError, ValueError):
    def __init__(self, n: int, k: int):
        self.n = n
        self.k = k
        super().__init__(f"cannot split {n} lines into {k} chunks")


class LengthMismatch(DialupError, ValueError):
    def __init__(self, left: int, right: int):
        self.left = left
        self.right = right
        super().__init__(f"line counts differ: {left} vs {right}")


class BothEmpty(DialupError, ValueError):
    pass
