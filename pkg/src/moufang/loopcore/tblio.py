"""Reading and writing ``.tbl`` Cayley-table files.

Format: the first non-comment line holds ``n``; then exactly ``n`` lines of
``n`` whitespace-separated 0-based indices, row ``i`` column ``j`` holding
``i*j``. Lines whose first non-blank character is ``#`` are comments; blank
lines are ignored.
"""

from __future__ import annotations

from pathlib import Path

from ..errors import ParseError
from .loop import FiniteLoop, validate_loop


def parse_table(text: str) -> list[list[int]]:
    lines = [
        (no, line)
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise ParseError("missing order line", line=1)
    no, first = lines[0]
    tokens = first.split()
    if len(tokens) != 1:
        raise ParseError("first line must hold only the order n", line=no)
    try:
        n = int(tokens[0])
    except ValueError:
        raise ParseError(f"order {tokens[0]!r} is not an integer", line=no, column=1) from None
    if n < 1:
        raise ParseError("order must be positive", line=no, column=1)
    body = lines[1:]
    if len(body) != n:
        where = body[n][0] if len(body) > n else (body[-1][0] if body else no)
        raise ParseError(f"expected {n} table rows, found {len(body)}", line=where)
    rows = []
    for no, line in body:
        tokens = line.split()
        if len(tokens) != n:
            raise ParseError(f"ragged row: {len(tokens)} entries, expected {n}", line=no)
        row = []
        for col, tok in enumerate(tokens, start=1):
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(f"entry {tok!r} is not an integer", line=no, column=col) from None
            if not 0 <= v < n:
                raise ParseError(f"entry {v} out of range 0..{n - 1}", line=no, column=col)
            row.append(v)
        rows.append(row)
    return rows


def format_table(L: FiniteLoop, comment: str | None = None) -> str:
    width = len(str(L.n - 1))
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(str(L.n))
    out.extend(" ".join(str(v).rjust(width) for v in row) for row in L.mul)
    return "\n".join(out) + "\n"


def load_tbl(path) -> FiniteLoop:
    return validate_loop(parse_table(Path(path).read_text()))


def save_tbl(L: FiniteLoop, path, comment: str | None = None) -> None:
    Path(path).write_text(format_table(L, comment))
