"""Plain-text coordinate format for tensors.

::

    # comments and blank lines are ignored
    tensor3 <n1> <n2> <n3> gf<p>        or        tensorr <r> <n> gf<p>
    <i> <j> <k> <value>                           <i1> ... <ir> <value>

Indices are 1-based, values lie in ``[1, p)``; zero values and repeated index
tuples are rejected.  Writing always lists entries in lexicographic index
order, so write/read/write is byte-stable.
"""

from __future__ import annotations

import re
from pathlib import Path

from .errors import TensorFormatError
from .galois import FieldSpec
from .hypercube import TensorR
from .tensor3 import Tensor3

_FIELD_RE = re.compile(r"gf(\d+)$")


def format_tensor(T: Tensor3 | TensorR) -> str:
    if isinstance(T, Tensor3):
        header = "tensor3 {} {} {} {}".format(*T.dims, T.field)
    else:
        header = f"tensorr {T.r} {T.n} {T.field}"
    lines = [header]
    lines.extend(" ".join(map(str, idx)) + f" {v}" for idx, v in T.items())
    return "\n".join(lines) + "\n"


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise TensorFormatError(f"line {lineno}: expected an integer, got {tok!r}") from None


def parse_tensor(text: str) -> Tensor3 | TensorR:
    lines = [(n, ln.strip()) for n, ln in enumerate(text.splitlines(), 1)]
    lines = [(n, ln) for n, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise TensorFormatError("empty tensor file")
    lineno, header = lines[0]
    toks = header.split()
    kind = toks[0] if toks else ""
    if kind == "tensor3" and len(toks) == 5:
        dims = [_int(t, lineno) for t in toks[1:4]]
        order = 3
    elif kind == "tensorr" and len(toks) == 4:
        order, side = _int(toks[1], lineno), _int(toks[2], lineno)
        if order < 3 or order % 2 == 0:
            raise TensorFormatError(f"line {lineno}: hypercube order must be odd and >= 3, got {order}")
        dims = [side] * order
    else:
        raise TensorFormatError(f"line {lineno}: bad header {header!r}")
    if any(d < 0 for d in dims) or (kind == "tensorr" and dims[0] < 1):
        raise TensorFormatError(f"line {lineno}: bad dimensions {dims}")
    m = _FIELD_RE.match(toks[-1])
    if not m:
        raise TensorFormatError(f"line {lineno}: bad field tag {toks[-1]!r}")
    try:
        field = FieldSpec(int(m.group(1)))
    except ValueError as exc:
        raise TensorFormatError(f"line {lineno}: {exc}") from None

    entries: dict[tuple[int, ...], int] = {}
    for lineno, line in lines[1:]:
        vals = [_int(t, lineno) for t in line.split()]
        if len(vals) != order + 1:
            raise TensorFormatError(f"line {lineno}: expected {order} indices and a value")
        *idx, v = vals
        key = tuple(idx)
        if not all(1 <= x <= d for x, d in zip(key, dims)):
            raise TensorFormatError(f"line {lineno}: index {key} out of range")
        if not 0 < v < field.p:
            raise TensorFormatError(f"line {lineno}: value {v} must lie in [1, {field.p})")
        if key in entries:
            raise TensorFormatError(f"line {lineno}: duplicate entry {key}")
        entries[key] = v
    if kind == "tensor3":
        return Tensor3(dims, field, entries)  # type: ignore[arg-type]
    return TensorR(order, dims[0], field, entries)


def read_tensor(path: str | Path) -> Tensor3 | TensorR:
    return parse_tensor(Path(path).read_text())


def write_tensor(T: Tensor3 | TensorR, path: str | Path) -> None:
    Path(path).write_text(format_tensor(T))
