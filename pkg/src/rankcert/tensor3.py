"""Sparse 3-way tensors over GF(p) and their structural operations.

Tensor indices are 1-based, matching the ``[n]`` convention and the text file
format.  Only nonzero entries are stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .errors import DimensionError, FieldMismatchError
from .galois import GF2, FieldSpec, MatF

Index3 = tuple[int, int, int]


class Tensor3:
    """An ``n1 x n2 x n3`` tensor with a sparse ``{(i, j, k): value}`` map."""

    __slots__ = ("dims", "field", "_entries", "_hash")

    def __init__(self, dims: Sequence[int], field: FieldSpec = GF2,
                 entries: Mapping[Index3, int] | None = None):
        dims = tuple(int(d) for d in dims)
        if len(dims) != 3 or any(d < 0 for d in dims):
            raise DimensionError(f"bad tensor dimensions {dims}")
        p = field.p
        clean: dict[Index3, int] = {}
        for idx, v in (entries or {}).items():
            idx = tuple(int(x) for x in idx)
            if len(idx) != 3 or not all(1 <= x <= d for x, d in zip(idx, dims)):
                raise IndexError(f"index {idx} outside {dims}")
            v = int(v) % p
            if v:
                clean[idx] = v  # type: ignore[index]
        self.dims: tuple[int, int, int] = dims  # type: ignore[assignment]
        self.field = field
        self._entries = clean
        self._hash: int | None = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, dims: Sequence[int], field: FieldSpec = GF2) -> "Tensor3":
        return cls(dims, field)

    @classmethod
    def identity_slice(cls, m: int, field: FieldSpec = GF2) -> "Tensor3":
        """The ``m x m x 1`` tensor whose only slice is the identity."""
        return cls((m, m, 1), field, {(i, i, 1): 1 for i in range(1, m + 1)})

    @classmethod
    def from_slices(cls, slices: Sequence[Sequence[Sequence[int]]], field: FieldSpec = GF2) -> "Tensor3":
        """Build from a list of ``n1 x n2`` nested lists, one per slice."""
        if not slices:
            raise DimensionError("need at least one slice to infer n1, n2")
        n1 = len(slices[0])
        n2 = len(slices[0][0]) if n1 else 0
        entries = {}
        for k, sl in enumerate(slices, 1):
            if len(sl) != n1 or any(len(row) != n2 for row in sl):
                raise DimensionError("slices must share one shape")
            for i, row in enumerate(sl, 1):
                for j, v in enumerate(row, 1):
                    if v:
                        entries[(i, j, k)] = v
        return cls((n1, n2, len(slices)), field, entries)

    @classmethod
    def simple(cls, a: Sequence[int], b: Sequence[int], c: Sequence[int], field: FieldSpec = GF2) -> "Tensor3":
        """The outer product ``a (x) b (x) c``."""
        return materialize(Decomposition([tuple(a)], [tuple(b)], [tuple(c)]), (len(a), len(b), len(c)), field)

    # -- access --------------------------------------------------------------

    @property
    def n1(self) -> int:
        return self.dims[0]

    @property
    def n2(self) -> int:
        return self.dims[1]

    @property
    def n3(self) -> int:
        return self.dims[2]

    @property
    def entries(self) -> Mapping[Index3, int]:
        return dict(self._entries)

    def items(self) -> Iterator[tuple[Index3, int]]:
        return iter(sorted(self._entries.items()))

    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, idx: Index3) -> int:
        if not all(1 <= x <= d for x, d in zip(idx, self.dims)):
            raise IndexError(f"index {idx} outside {self.dims}")
        return self._entries.get(tuple(idx), 0)  # type: ignore[arg-type]

    def is_zero(self) -> bool:
        return not self._entries

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.dims == other.dims and self.field == other.field and self._entries == other._entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dims, self.field, frozenset(self._entries.items())))
        return self._hash

    def __repr__(self) -> str:
        n1, n2, n3 = self.dims
        return f"Tensor3({n1}x{n2}x{n3}, {self.field}, nnz={self.nnz()})"

    # -- structural operations --------------------------------------------------

    def slice(self, k: int) -> MatF:
        """The ``k``-th slice: the ``n1 x n2`` matrix of entries ``T[i, j, k]``."""
        n1, n2, n3 = self.dims
        if not 1 <= k <= n3:
            raise IndexError(f"slice {k} outside 1..{n3}")
        flat = [0] * (n1 * n2)
        for (i, j, kk), v in self._entries.items():
            if kk == k:
                flat[(i - 1) * n2 + (j - 1)] = v
        return MatF(n1, n2, tuple(flat), self.field)

    def slices(self) -> list[MatF]:
        return [self.slice(k) for k in range(1, self.n3 + 1)]

    def flatten(self, mode: int) -> MatF:
        """Mode-``mode`` matricization.

        Rows follow the chosen mode; columns enumerate the other two modes in
        row-major order, the smaller mode number varying slowest.
        """
        if mode not in (1, 2, 3):
            raise ValueError(f"mode must be 1, 2 or 3, got {mode}")
        others = [m for m in (1, 2, 3) if m != mode]
        rows = self.dims[mode - 1]
        inner = self.dims[others[1] - 1]
        cols = self.dims[others[0] - 1] * inner
        flat = [0] * (rows * cols)
        for idx, v in self._entries.items():
            r = idx[mode - 1] - 1
            c = (idx[others[0] - 1] - 1) * inner + (idx[others[1] - 1] - 1)
            flat[r * cols + c] = v
        return MatF(rows, cols, tuple(flat), self.field)

    def permute(self, order: Sequence[int]) -> "Tensor3":
        """Reorder modes: the result's mode ``m`` is this tensor's mode ``order[m-1]``."""
        if sorted(order) != [1, 2, 3]:
            raise ValueError(f"not a permutation of the modes: {order}")
        dims = tuple(self.dims[o - 1] for o in order)
        return Tensor3(dims, self.field,
                       {tuple(idx[o - 1] for o in order): v for idx, v in self._entries.items()})  # type: ignore[misc]

    def transpose12(self) -> "Tensor3":
        """Swap the first two modes (transposes every slice)."""
        return self.permute((2, 1, 3))

    def split(self, m: int) -> tuple["Tensor3", "Tensor3"]:
        """Cut along the third mode after slice ``m``; inverse of :func:`concat`."""
        n1, n2, n3 = self.dims
        if not 0 <= m <= n3:
            raise IndexError(f"split point {m} outside 0..{n3}")
        left = {idx: v for idx, v in self._entries.items() if idx[2] <= m}
        right = {(i, j, k - m): v for (i, j, k), v in self._entries.items() if k > m}
        return Tensor3((n1, n2, m), self.field, left), Tensor3((n1, n2, n3 - m), self.field, right)


def concat(A: Tensor3, B: Tensor3) -> Tensor3:
    """Stack along the third mode: slices of ``A`` followed by slices of ``B``."""
    if A.field != B.field:
        raise FieldMismatchError(f"concat of {A.field} and {B.field} tensors")
    if A.dims[:2] != B.dims[:2]:
        raise DimensionError(f"concat needs equal n1, n2; got {A.dims} and {B.dims}")
    entries = dict(A._entries)
    shift = A.n3
    for (i, j, k), v in B._entries.items():
        entries[(i, j, k + shift)] = v
    return Tensor3((A.n1, A.n2, A.n3 + B.n3), A.field, entries)


def block2x2(TL: Tensor3, TR: Tensor3, BL: Tensor3, BR: Tensor3) -> Tensor3:
    """Place four equal-depth tensors as the blocks ``[[TL, TR], [BL, BR]]`` of every slice."""
    blocks = (TL, TR, BL, BR)
    if len({b.field for b in blocks}) != 1:
        raise FieldMismatchError("block2x2 operands must share a field")
    if len({b.n3 for b in blocks}) != 1:
        raise DimensionError(f"block2x2 operands need equal depth, got {[b.n3 for b in blocks]}")
    if TL.n1 != TR.n1 or BL.n1 != BR.n1 or TL.n2 != BL.n2 or TR.n2 != BR.n2:
        raise DimensionError(
            f"block shapes do not tile: TL {TL.dims}, TR {TR.dims}, BL {BL.dims}, BR {BR.dims}")
    di, dj = TL.n1, TL.n2
    entries: dict[Index3, int] = {}
    for block, (oi, oj) in zip(blocks, ((0, 0), (0, dj), (di, 0), (di, dj))):
        for (i, j, k), v in block._entries.items():
            entries[(i + oi, j + oj, k)] = v
    return Tensor3((TL.n1 + BL.n1, TL.n2 + TR.n2, TL.n3), TL.field, entries)


@dataclass(frozen=True, init=False)
class Decomposition:
    """A sum of ``r`` simple tensors given by three lists of factor columns."""

    a_factors: tuple[tuple[int, ...], ...]
    b_factors: tuple[tuple[int, ...], ...]
    c_factors: tuple[tuple[int, ...], ...]

    def __init__(self, a_factors, b_factors, c_factors, allow_zero: bool = False):
        a = tuple(tuple(int(x) for x in col) for col in a_factors)
        b = tuple(tuple(int(x) for x in col) for col in b_factors)
        c = tuple(tuple(int(x) for x in col) for col in c_factors)
        if not len(a) == len(b) == len(c):
            raise DimensionError(f"factor lists have lengths {len(a)}, {len(b)}, {len(c)}")
        if not allow_zero:
            for t, cols in enumerate(zip(a, b, c)):
                if any(not any(col) for col in cols):
                    raise ValueError(f"term {t} has a zero factor column")
        object.__setattr__(self, "a_factors", a)
        object.__setattr__(self, "b_factors", b)
        object.__setattr__(self, "c_factors", c)

    @property
    def r(self) -> int:
        return len(self.a_factors)

    def terms(self) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]]:
        return zip(self.a_factors, self.b_factors, self.c_factors)

    def to_dict(self) -> dict:
        return {"r": self.r, "a": [list(c) for c in self.a_factors],
                "b": [list(c) for c in self.b_factors], "c": [list(c) for c in self.c_factors]}


def materialize(D: Decomposition, dims: Sequence[int], field: FieldSpec = GF2) -> Tensor3:
    """Sum of the outer products ``a_t (x) b_t (x) c_t``."""
    n1, n2, n3 = dims
    p = field.p
    acc: dict[Index3, int] = {}
    for a, b, c in D.terms():
        if (len(a), len(b), len(c)) != (n1, n2, n3):
            raise DimensionError(f"factor lengths {(len(a), len(b), len(c))} do not match {tuple(dims)}")
        nz_a = [(i, x) for i, x in enumerate(a, 1) if x % p]
        nz_b = [(j, y) for j, y in enumerate(b, 1) if y % p]
        nz_c = [(k, z) for k, z in enumerate(c, 1) if z % p]
        for i, x in nz_a:
            for j, y in nz_b:
                xy = x * y
                for k, z in nz_c:
                    key = (i, j, k)
                    acc[key] = (acc.get(key, 0) + xy * z) % p
    return Tensor3((n1, n2, n3), field, acc)
