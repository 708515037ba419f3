"""Matrix Market array/coordinate I/O and the sweep CSV table.

Only the ``matrix`` object is handled, with ``real``, ``integer`` or
``complex`` fields and ``general``, ``symmetric``, ``skew-symmetric`` or
``hermitian`` symmetry.  Everything is read into a dense ``complex128``
array.  Floats are written with :func:`repr`, the shortest string that
round-trips exactly.
"""

import csv
import math

import numpy as np

from .errors import DimensionError, ParseError
from .experiments import CSV_COLUMNS, SweepRecord

__all__ = ["read_matrix", "write_matrix", "emit_csv", "read_csv"]

_FIELDS = {"real", "integer", "complex"}
_SYMMETRIES = {"general", "symmetric", "skew-symmetric", "hermitian"}


def _tokens(lines):
    """Yield ``(lineno, fields)`` for non-comment, non-blank lines."""
    for lineno, line in lines:
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        yield lineno, s.split()


def _number(fields, complex_field, lineno):
    want = 2 if complex_field else 1
    if len(fields) != want:
        raise ParseError(f"expected {want} value(s), got {len(fields)}", lineno)
    try:
        vals = [float(f) for f in fields]
    except ValueError:
        raise ParseError(f"not a number: {' '.join(fields)!r}", lineno) from None
    return complex(vals[0], vals[1]) if complex_field else complex(vals[0], 0.0)


def read_matrix(path):
    """Read a Matrix Market file into a dense complex matrix.

    Raises
    ------
    ParseError
        On a malformed header or entry; the message names the line.
    DimensionError
        When the entry count or indices disagree with the size line.
    """
    with open(path, encoding="ascii") as fh:
        lines = list(enumerate(fh, start=1))
    if not lines:
        raise ParseError("empty file", 1)

    head = lines[0][1].split()
    if len(head) != 5 or head[0].lower() != "%%matrixmarket":
        raise ParseError("missing %%MatrixMarket banner", 1)
    obj, fmt, fld, sym = (h.lower() for h in head[1:])
    if obj != "matrix":
        raise ParseError(f"unsupported object {obj!r}", 1)
    if fmt not in ("array", "coordinate"):
        raise ParseError(f"unsupported format {fmt!r}", 1)
    if fld not in _FIELDS:
        raise ParseError(f"unsupported field {fld!r}", 1)
    if sym not in _SYMMETRIES:
        raise ParseError(f"unsupported symmetry {sym!r}", 1)
    cplx = fld == "complex"

    body = _tokens(lines[1:])
    try:
        size_line, size = next(body)
    except StopIteration:
        raise ParseError("missing size line", len(lines)) from None
    want = 2 if fmt == "array" else 3
    if len(size) != want:
        raise ParseError(f"size line needs {want} integers", size_line)
    try:
        dims = [int(x) for x in size]
    except ValueError:
        raise ParseError("size line is not integer", size_line) from None
    nrows, ncols = dims[0], dims[1]
    if nrows < 0 or ncols < 0:
        raise DimensionError("negative dimension", size_line)
    if sym != "general" and nrows != ncols:
        raise DimensionError(f"{sym} matrix must be square", size_line)

    out = np.zeros((nrows, ncols), dtype=np.complex128)
    if fmt == "array":
        if sym == "general":
            slots = [(i, j) for j in range(ncols) for i in range(nrows)]
        else:
            lo = 1 if sym == "skew-symmetric" else 0
            slots = [(i, j) for j in range(ncols) for i in range(j + lo, nrows)]
        last = size_line
        for i, j in slots:
            try:
                last, fields = next(body)
            except StopIteration:
                raise ParseError(
                    f"truncated: expected {len(slots)} entries", last + 1) from None
            _place(out, i, j, _number(fields, cplx, last), sym)
        extra = next(body, None)
        if extra is not None:
            raise DimensionError("more entries than the size line declares", extra[0])
        return out

    nnz = dims[2]
    last = size_line
    for _ in range(nnz):
        try:
            last, fields = next(body)
        except StopIteration:
            raise ParseError(f"truncated: expected {nnz} entries", last + 1) from None
        if len(fields) < 3:
            raise ParseError("coordinate entry needs row, column and value", last)
        try:
            i, j = int(fields[0]) - 1, int(fields[1]) - 1
        except ValueError:
            raise ParseError("non-integer index", last) from None
        if not (0 <= i < nrows and 0 <= j < ncols):
            raise DimensionError(f"index ({i + 1}, {j + 1}) out of range", last)
        _place(out, i, j, _number(fields[2:], cplx, last), sym)
    extra = next(body, None)
    if extra is not None:
        raise DimensionError("more entries than the size line declares", extra[0])
    return out


def _place(out, i, j, val, sym):
    out[i, j] = val
    if i == j or sym == "general":
        return
    if sym == "symmetric":
        out[j, i] = val
    elif sym == "skew-symmetric":
        out[j, i] = -val
    else:
        out[j, i] = val.conjugate()


def _fmt(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("cannot write non-finite entries")
    return repr(x)


def write_matrix(m, path, fmt="array", field=None, comment=None):
    """Write ``m`` (2-D, or 1-D as a column) in Matrix Market format.

    ``field`` defaults to ``"complex"`` when any entry has a nonzero
    imaginary part and ``"real"`` otherwise.
    """
    m = np.asarray(m)
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2:
        raise ValueError("expected a vector or matrix")
    if field is None:
        field = "complex" if np.iscomplexobj(m) and np.any(m.imag != 0) else "real"
    if field not in ("real", "complex"):
        raise ValueError(f"unsupported field {field!r}")
    if fmt not in ("array", "coordinate"):
        raise ValueError(f"unsupported format {fmt!r}")
    if field == "real" and np.iscomplexobj(m) and np.any(m.imag != 0):
        raise ValueError("matrix has imaginary parts; use field='complex'")

    def entry(z):
        z = complex(z)
        if field == "complex":
            return f"{_fmt(z.real)} {_fmt(z.imag)}"
        return _fmt(z.real)

    nrows, ncols = m.shape
    lines = [f"%%MatrixMarket matrix {fmt} {field} general"]
    if comment:
        lines.extend(f"% {c}" for c in comment.splitlines())
    if fmt == "array":
        lines.append(f"{nrows} {ncols}")
        lines.extend(entry(m[i, j]) for j in range(ncols) for i in range(nrows))
    else:
        nz = [(i, j) for j in range(ncols) for i in range(nrows) if m[i, j] != 0]
        lines.append(f"{nrows} {ncols} {len(nz)}")
        lines.extend(f"{i + 1} {j + 1} {entry(m[i, j])}" for i, j in nz)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def emit_csv(records, path):
    """Write sweep records, one row each, under the fixed header."""
    if not records:
        raise ValueError("no records to write")
    with open(path, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for rec in records:
            w.writerow([_cell(getattr(rec, c)) for c in CSV_COLUMNS])


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def read_csv(path):
    """Parse a file written by :func:`emit_csv` back into ``SweepRecord``s."""
    ints = {"n_trials", "n_flagged"}
    with open(path, newline="", encoding="ascii") as fh:
        rows = list(csv.DictReader(fh))
    return [SweepRecord(**{c: (int(r[c]) if c in ints else float(r[c])) for c in CSV_COLUMNS})
            for r in rows]
