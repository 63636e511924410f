"""Plain-text system descriptions.

::

    # comments run to the end of a line
    alphabet 2
    factors 2
    factor 1 dim 2 beta 1
    factor 2 dim 2 beta 1
    matrix 1 1
    2 0
    0 1
    ...
    seed-subspace 1
    1 1
    translations
    0 0
    1 0

``matrix j i`` is followed by ``d_j`` rows of ``d_j`` entries, decimal or
``p/q``. A ``seed-subspace j`` block lists spanning vectors for an extra
search seed in factor ``j``. Translation vectors do not affect any computed
quantity; the block is accepted and skipped with a warning.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .classes import Subspace
from .errors import InvalidInputError, ParseError
from .multilinear import is_invertible
from .potentials import MatrixSystem

_NUMBER = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")
_RATIONAL = re.compile(r"[+-]?\d+/\d+")
_KEYWORDS = ("alphabet", "factors", "factor", "matrix", "seed-subspace", "translations")


@dataclass
class SystemFile:
    system: MatrixSystem
    seeds: dict[int, list[Subspace]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


@dataclass
class _Line:
    number: int
    tokens: list[tuple[str, int]]  # (text, 1-based column)

    @property
    def keyword(self) -> str | None:
        head = self.tokens[0][0]
        return head if head in _KEYWORDS else None


def _tokenize(text: str) -> list[_Line]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", body)]
        if tokens:
            lines.append(_Line(number, tokens))
    return lines


def _number(token: tuple[str, int], line: int, notes: list[str]) -> float:
    tok, col = token
    if _RATIONAL.fullmatch(tok):
        q = Fraction(tok)
        if q.denominator == 0:
            raise ParseError(f"zero denominator in {tok!r}", line, col)
        value = float(q)
        if Fraction(value) != q:
            notes.append(f"line {line}, column {col}: {tok} converted to {value!r}")
        return value
    if _NUMBER.fullmatch(tok):
        return float(tok)
    raise ParseError(f"expected a number, got {tok!r}", line, col)


def _int(token: tuple[str, int], line: int, what: str, lo: int = 1) -> int:
    tok, col = token
    if not re.fullmatch(r"\d+", tok) or int(tok) < lo:
        raise ParseError(f"{what} must be an integer >= {lo}, got {tok!r}", line, col)
    return int(tok)


def _expect(ln: _Line, shape: list[str]) -> None:
    if len(ln.tokens) != len(shape):
        col = ln.tokens[min(len(shape), len(ln.tokens) - 1)][1]
        raise ParseError(f"expected '{' '.join(shape)}'", ln.number, col)
    for (tok, col), want in zip(ln.tokens, shape):
        if not want.isupper() and tok != want:
            raise ParseError(f"expected {want!r}, got {tok!r}", ln.number, col)


def _rows(lines: list[_Line], pos: int, width: int, notes: list[str], count: int | None = None):
    """Numeric rows from ``pos``: exactly ``count`` of them, or up to the next keyword."""
    rows = []
    while pos < len(lines) and (count is None or len(rows) < count):
        ln = lines[pos]
        if ln.keyword:
            break
        if len(ln.tokens) != width:
            col = ln.tokens[min(width, len(ln.tokens) - 1)][1]
            raise ParseError(f"expected {width} entr{'y' if width == 1 else 'ies'}, found {len(ln.tokens)}", ln.number, col)
        rows.append([_number(t, ln.number, notes) for t in ln.tokens])
        pos += 1
    return rows, pos


def parse_system(source: str | os.PathLike, name: str = "") -> SystemFile:
    """Parse a description from text, or from a file when ``source`` is a path."""
    if isinstance(source, os.PathLike) or ("\n" not in source and Path(source).is_file()):
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InvalidInputError(f"cannot read {path}: {exc}") from exc
        name = name or path.stem
    else:
        text = source
    lines = _tokenize(text)
    notes: list[str] = []
    warnings: list[str] = []
    if not lines:
        raise ParseError("empty system description", 1, 1)

    _expect(lines[0], ["alphabet", "N"])
    N = _int(lines[0].tokens[1], lines[0].number, "alphabet size", lo=2)
    if len(lines) < 2:
        raise ParseError("missing 'factors k'", lines[0].number + 1, 1)
    _expect(lines[1], ["factors", "K"])
    k = _int(lines[1].tokens[1], lines[1].number, "factor count")

    dims: dict[int, int] = {}
    betas: dict[int, float] = {}
    mats: dict[tuple[int, int], np.ndarray] = {}
    seeds: dict[int, list[Subspace]] = {}
    pos = 2
    while pos < len(lines):
        ln = lines[pos]
        kw = ln.keyword
        if kw == "factor":
            _expect(ln, ["factor", "J", "dim", "D", "beta", "B"])
            j = _int(ln.tokens[1], ln.number, "factor index")
            if j > k:
                raise ParseError(f"factor index {j} exceeds factors {k}", ln.number, ln.tokens[1][1])
            if j in dims:
                raise ParseError(f"factor {j} declared twice", ln.number, ln.tokens[1][1])
            dims[j] = _int(ln.tokens[3], ln.number, "dimension")
            betas[j] = _number(ln.tokens[5], ln.number, notes)
            if not betas[j] > 0:
                raise ParseError("beta must be positive", ln.number, ln.tokens[5][1])
            pos += 1
        elif kw == "matrix":
            _expect(ln, ["matrix", "J", "I"])
            j = _int(ln.tokens[1], ln.number, "factor index")
            i = _int(ln.tokens[2], ln.number, "symbol")
            if j not in dims:
                raise ParseError(f"matrix for undeclared factor {j}", ln.number, ln.tokens[1][1])
            if i > N:
                raise ParseError(f"symbol {i} exceeds alphabet {N}", ln.number, ln.tokens[2][1])
            if (j, i) in mats:
                raise ParseError(f"matrix {j} {i} given twice", ln.number, 1)
            d = dims[j]
            rows, pos = _rows(lines, pos + 1, d, notes, count=d)
            if len(rows) != d:
                at = lines[pos].number if pos < len(lines) else ln.number + 1
                raise ParseError(f"matrix {j} {i} needs {d} rows, found {len(rows)}", at, 1)
            M = np.array(rows)
            if not is_invertible(M):
                raise InvalidInputError(f"matrix (j={j}, i={i}) is not invertible")
            mats[(j, i)] = M
        elif kw == "seed-subspace":
            _expect(ln, ["seed-subspace", "J"])
            j = _int(ln.tokens[1], ln.number, "factor index")
            if j not in dims:
                raise ParseError(f"seed subspace for undeclared factor {j}", ln.number, ln.tokens[1][1])
            rows, pos = _rows(lines, pos + 1, dims[j], notes)
            if not rows:
                raise ParseError("seed-subspace block has no vectors", ln.number, 1)
            try:
                seeds.setdefault(j, []).append(Subspace(np.array(rows).T))
            except InvalidInputError as exc:
                raise ParseError(str(exc), ln.number, 1) from exc
        elif kw == "translations":
            _expect(ln, ["translations"])
            width = len(lines[pos + 1].tokens) if pos + 1 < len(lines) else 0
            _, pos = _rows(lines, pos + 1, width, notes) if width else ([], pos + 1)
            warnings.append("translations do not affect any computed quantity; block ignored")
        else:
            tok, col = ln.tokens[0]
            raise ParseError(f"unexpected {tok!r}", ln.number, col)

    for j in range(1, k + 1):
        if j not in dims:
            raise ParseError(f"factor {j} is never declared", lines[-1].number, 1)
        for i in range(1, N + 1):
            if (j, i) not in mats:
                raise ParseError(f"missing 'matrix {j} {i}'", lines[-1].number, 1)
    gens = tuple(np.array([mats[(j, i)] for i in range(1, N + 1)]) for j in range(1, k + 1))
    system = MatrixSystem(gens, tuple(betas[j] for j in range(1, k + 1)), name)
    return SystemFile(system, {j - 1: v for j, v in seeds.items()}, notes, warnings)


def format_number(x: float) -> str:
    """Shortest text that parses back to ``x`` exactly; integral values without a point."""
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def export_system(system: MatrixSystem) -> str:
    out = [f"alphabet {system.alphabet_size}", f"factors {system.factor_count}"]
    for j, (d, b) in enumerate(zip(system.dims, system.betas), start=1):
        out.append(f"factor {j} dim {d} beta {format_number(b)}")
    for j, g in enumerate(system.generators, start=1):
        for i, M in enumerate(g, start=1):
            out.append(f"matrix {j} {i}")
            out.extend(" ".join(format_number(x) for x in row) for row in M)
    return "\n".join(out) + "\n"
