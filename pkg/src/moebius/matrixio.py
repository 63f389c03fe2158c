"""Plain-text matrix files.

The first non-blank line holds the dimension; it is followed by ``dim`` rows
of ``dim`` whitespace-separated ``re:im`` entries. Lines starting with ``#``
are ignored.
"""

from __future__ import annotations

import numpy as np

from .errors import MatrixParseError


def parse_complex(token: str) -> complex:
    """Parse ``re:im`` (or a bare real number) into a complex value."""
    parts = token.split(":")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"bad complex literal {token!r}")


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real!r}:{z.imag!r}"


def loads(text: str) -> np.ndarray:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise MatrixParseError("empty matrix file", line=1)
    lineno, head = lines[0]
    try:
        dim = int(head)
    except ValueError:
        raise MatrixParseError(f"expected dimension, got {head!r}", line=lineno) from None
    if dim < 1:
        raise MatrixParseError("dimension must be positive", line=lineno)
    rows = lines[1:]
    if len(rows) != dim:
        where = rows[-1][0] + 1 if rows else lineno + 1
        raise MatrixParseError(f"expected {dim} rows, found {len(rows)}", line=where)
    out = np.empty((dim, dim), dtype=np.complex128)
    for r, (lineno, ln) in enumerate(rows):
        tokens = ln.split()
        if len(tokens) != dim:
            raise MatrixParseError(f"expected {dim} entries, found {len(tokens)}", line=lineno)
        for c, tok in enumerate(tokens):
            try:
                out[r, c] = parse_complex(tok)
            except ValueError:
                raise MatrixParseError(f"bad entry {tok!r}", line=lineno) from None
    if not np.all(np.isfinite(out)):
        raise MatrixParseError("non-finite entry")
    return out


def load(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(a) -> str:
    a = np.asarray(a, dtype=np.complex128)
    lines = [str(a.shape[0])]
    lines += [" ".join(format_complex(z) for z in row) for row in a]
    return "\n".join(lines) + "\n"


def dump(a, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(a))
