"""Finite words over the alphabet {1, ..., N}.

Symbols are 1-based at every interface. Words of a fixed length are ordered
lexicographically; ``lex_index`` gives the 1-based position of a word in that
order and ``recode_word`` maps blocks of ``n`` symbols to single symbols of the
alphabet of size ``N**n`` using that position.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InvalidInputError, ResourceLimitError

#: Default cap on the number of words any exhaustive enumeration may visit.
DEFAULT_WORD_BUDGET = 2**24

_budget = DEFAULT_WORD_BUDGET


def word_budget() -> int:
    return _budget


def set_word_budget(limit: int) -> int:
    """Set the global enumeration budget and return the previous value."""
    global _budget
    if limit < 1:
        raise InvalidInputError("word budget must be positive")
    previous, _budget = _budget, int(limit)
    return previous


def check_budget(count: int, what: str = "enumeration", budget: int | None = None) -> None:
    limit = word_budget() if budget is None else budget
    if count > limit:
        raise ResourceLimitError(f"{what} needs {count} terms, budget is {limit}")


@dataclass(frozen=True)
class Alphabet:
    size: int

    def __post_init__(self):
        if int(self.size) != self.size or self.size < 2:
            raise InvalidInputError(f"alphabet size must be an integer >= 2, got {self.size!r}")

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(range(1, self.size + 1))


@dataclass(frozen=True)
class Word:
    """A nonempty finite word with 1-based symbols over an alphabet of size N."""

    symbols: tuple[int, ...]
    alphabet_size: int

    def __post_init__(self):
        symbols = tuple(int(s) for s in self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if self.alphabet_size < 2:
            raise InvalidInputError(f"alphabet size must be >= 2, got {self.alphabet_size}")
        if not symbols:
            raise InvalidInputError("the empty word is not a valid word")
        for s in symbols:
            if not 1 <= s <= self.alphabet_size:
                raise InvalidInputError(f"symbol {s} outside 1..{self.alphabet_size}")

    @classmethod
    def parse(cls, text: str, alphabet_size: int) -> "Word":
        """Parse ``"1221"`` (N <= 9) or ``"1,12,3"`` (any N)."""
        text = text.strip()
        if "," in text or alphabet_size > 9:
            parts = [p for p in text.split(",")]
            try:
                return cls(tuple(int(p) for p in parts), alphabet_size)
            except ValueError as exc:
                raise InvalidInputError(f"cannot parse word {text!r}") from exc
        if not text.isdigit():
            raise InvalidInputError(f"cannot parse word {text!r}")
        return cls(tuple(int(c) for c in text), alphabet_size)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, item):
        return self.symbols[item]

    def __add__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __str__(self):
        if self.alphabet_size <= 9:
            return "".join(str(s) for s in self.symbols)
        return ",".join(str(s) for s in self.symbols)

    def as_array(self) -> np.ndarray:
        """Zero-based symbol indices, for indexing generator stacks."""
        return np.asarray(self.symbols, dtype=np.intp) - 1


def as_word(w, alphabet_size: int) -> Word:
    """Coerce a Word, a string or a sequence of ints to a Word over ``alphabet_size``."""
    if isinstance(w, Word):
        if w.alphabet_size != alphabet_size:
            raise InvalidInputError(
                f"word over alphabet {w.alphabet_size} used with alphabet {alphabet_size}"
            )
        return w
    if isinstance(w, str):
        return Word.parse(w, alphabet_size)
    return Word(tuple(w), alphabet_size)


def concat(a: Word, b: Word) -> Word:
    if a.alphabet_size != b.alphabet_size:
        raise InvalidInputError(
            f"cannot concatenate words over alphabets {a.alphabet_size} and {b.alphabet_size}"
        )
    return Word(a.symbols + b.symbols, a.alphabet_size)


def power(a: Word, n: int) -> Word:
    if int(n) != n or n < 1:
        raise InvalidInputError(f"word power must be a positive integer, got {n!r}")
    return Word(a.symbols * int(n), a.alphabet_size)


def _validate_shape(N: int, n: int) -> None:
    if N < 2:
        raise InvalidInputError(f"alphabet size must be >= 2, got {N}")
    if n < 1:
        raise InvalidInputError(f"word length must be >= 1, got {n}")


def word_count(N: int, n: int) -> int:
    return N**n


def enumerate_words(N: int, n: int, budget: int | None = None) -> Iterator[Word]:
    """Yield all ``N**n`` words of length ``n`` in lexicographic order.

    The sequence is streamed; nothing is materialised.
    """
    _validate_shape(N, n)
    check_budget(N**n, f"enumeration of words of length {n} over {N} symbols", budget)
    for symbols in itertools.product(range(1, N + 1), repeat=n):
        yield Word(symbols, N)


def enumerate_words_upto(N: int, L: int, budget: int | None = None) -> Iterator[Word]:
    """All words of length 1..L, shorter lengths first, lexicographic within a length."""
    check_budget(sum(N**n for n in range(1, L + 1)), "enumeration", budget)
    for n in range(1, L + 1):
        yield from enumerate_words(N, n)


def word_array(N: int, n: int, budget: int | None = None) -> np.ndarray:
    """Zero-based symbol table of shape ``(N**n, n)``, rows in lexicographic order."""
    _validate_shape(N, n)
    check_budget(N**n, "word table", budget)
    idx = np.arange(N**n)
    cols = [(idx // N ** (n - 1 - t)) % N for t in range(n)]
    return np.stack(cols, axis=1).astype(np.intp)


def lex_index(w: Word) -> int:
    """1-based position of ``w`` among words of its length in lexicographic order."""
    N = w.alphabet_size
    pos = 0
    for s in w.symbols:
        pos = pos * N + (s - 1)
    return pos + 1


def lex_inverse(i: int, N: int, n: int) -> Word:
    _validate_shape(N, n)
    if not 1 <= i <= N**n:
        raise InvalidInputError(f"index {i} outside 1..{N**n}")
    r = i - 1
    symbols = []
    for _ in range(n):
        r, s = divmod(r, N)
        symbols.append(s + 1)
    return Word(tuple(reversed(symbols)), N)


def recode_word(w: Word, n: int) -> Word:
    """Replace each consecutive block of ``n`` symbols by its lexicographic index.

    The result lives over the alphabet of size ``N**n`` and has length ``|w|/n``.
    """
    if n < 1:
        raise InvalidInputError(f"block length must be >= 1, got {n}")
    if len(w) % n:
        raise InvalidInputError(f"block length {n} does not divide word length {len(w)}")
    N = w.alphabet_size
    blocks = [Word(w.symbols[q : q + n], N) for q in range(0, len(w), n)]
    return Word(tuple(lex_index(b) for b in blocks), N**n)


def decode_word(w: Word, N: int, n: int) -> Word:
    """Inverse of :func:`recode_word`."""
    if w.alphabet_size != N**n:
        raise InvalidInputError(f"word alphabet {w.alphabet_size} is not {N}**{n}")
    symbols: list[int] = []
    for s in w.symbols:
        symbols.extend(lex_inverse(s, N, n).symbols)
    return Word(tuple(symbols), N)


def prefix_partition(N: int, n: int, max_block: int) -> tuple[int, int]:
    """Split length-``n`` words into ``N**p`` prefix blocks of ``N**(n-p)`` words each.

    Returns ``(p, n - p)`` with the smallest ``p`` such that a block holds at most
    ``max_block`` words. Blocks are visited in lexicographic prefix order, so the
    concatenation of blocks is the full lexicographic enumeration.
    """
    _validate_shape(N, n)
    suffix = n
    while suffix > 1 and N**suffix > max_block:
        suffix -= 1
    return n - suffix, suffix

