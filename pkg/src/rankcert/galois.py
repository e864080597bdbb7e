"""Exact arithmetic in prime fields GF(p) and dense matrix algebra over them.

Matrices and vectors carry plain ``int`` residues in ``[0, p)`` next to the
:class:`FieldSpec` they belong to; :class:`Scalar` is the checked element type
for one-off arithmetic.  Over GF(2) rows are packed into Python ints for
elimination, which gives the same results as the generic path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionError, FieldMismatchError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(p)."""

    p: int = 2

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise ValueError(f"field modulus must be prime, got {self.p!r}")

    def __call__(self, value: int) -> "Scalar":
        return Scalar(value % self.p, self)

    def __str__(self) -> str:
        return f"gf{self.p}"

    @property
    def zero(self) -> "Scalar":
        return Scalar(0, self)

    @property
    def one(self) -> "Scalar":
        return Scalar(1, self)

    def reduce(self, value: int) -> int:
        return value % self.p

    def inv(self, value: int) -> int:
        value %= self.p
        if value == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        return pow(value, self.p - 2, self.p)


GF2 = FieldSpec(2)


@dataclass(frozen=True)
class Scalar:
    """An element of GF(p).  Ints are coerced into the field of the other operand."""

    value: int
    field: FieldSpec

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.p:
            raise ValueError(f"{self.value} is not a canonical residue mod {self.field.p}")

    def _other(self, other: "Scalar | int") -> int:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatchError(f"cannot combine {self.field} and {other.field} elements")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented  # type: ignore[return-value]

    def _make(self, value: int) -> "Scalar":
        return Scalar(value % self.field.p, self.field)

    def __add__(self, other: "Scalar | int") -> "Scalar":
        return self._make(self.value + self._other(other))

    __radd__ = __add__

    def __sub__(self, other: "Scalar | int") -> "Scalar":
        return self._make(self.value - self._other(other))

    def __rsub__(self, other: int) -> "Scalar":
        return self._make(self._other(other) - self.value)

    def __mul__(self, other: "Scalar | int") -> "Scalar":
        return self._make(self.value * self._other(other))

    __rmul__ = __mul__

    def __neg__(self) -> "Scalar":
        return self._make(-self.value)

    def inv(self) -> "Scalar":
        return Scalar(self.field.inv(self.value), self.field)

    def __truediv__(self, other: "Scalar | int") -> "Scalar":
        return self._make(self.value * self.field.inv(self._other(other)))

    def __rtruediv__(self, other: int) -> "Scalar":
        return self._make(self._other(other) * self.field.inv(self.value))

    def __pow__(self, exponent: int) -> "Scalar":
        if exponent < 0:
            return self.inv() ** (-exponent)
        return self._make(pow(self.value, exponent, self.field.p))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.p})"


@dataclass(frozen=True)
class MatF:
    """A dense ``rows x cols`` matrix over GF(p), stored row-major.

    Indexing with ``M[i, j]`` is 0-based like any Python sequence.
    """

    rows: int
    cols: int
    entries: tuple[int, ...]
    field: FieldSpec = GF2

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise DimensionError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )
        p = self.field.p
        if any(not 0 <= e < p for e in self.entries):
            object.__setattr__(self, "entries", tuple(e % p for e in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], field: FieldSpec = GF2, cols: int | None = None) -> "MatF":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        flat: list[int] = []
        for row in rows:
            if len(row) != cols:
                raise DimensionError("ragged rows")
            flat.extend(int(v) % field.p for v in row)
        return cls(len(rows), cols, tuple(flat), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldSpec = GF2) -> "MatF":
        return cls(rows, cols, (0,) * (rows * cols), field)

    @classmethod
    def identity(cls, n: int, field: FieldSpec = GF2) -> "MatF":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)), field)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i}, {j}) outside {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_lists(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "MatF":
        e = self.entries
        c = self.cols
        return MatF(self.cols, self.rows,
                    tuple(e[i * c + j] for j in range(c) for i in range(self.rows)), self.field)

    def matvec(self, x: Sequence[int]) -> list[int]:
        if len(x) != self.cols:
            raise DimensionError(f"vector of length {len(x)} against {self.cols} columns")
        p = self.field.p
        c = self.cols
        return [sum(self.entries[i * c + j] * x[j] for j in range(c)) % p for i in range(self.rows)]

    def __matmul__(self, other: "MatF") -> "MatF":
        if self.field != other.field:
            raise FieldMismatchError("matrix product across fields")
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        p = self.field.p
        a, b = self.to_lists(), other.to_lists()
        out = [[sum(a[i][t] * b[t][j] for t in range(self.cols)) % p for j in range(other.cols)]
               for i in range(self.rows)]
        return MatF.from_rows(out, self.field, other.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)


# ---------------------------------------------------------------------------
# elimination kernels on raw rows
# ---------------------------------------------------------------------------

def pack_gf2(row: Iterable[int]) -> int:
    """Pack a 0/1 row into an int, column j at bit j."""
    bits = 0
    for j, v in enumerate(row):
        if v & 1:
            bits |= 1 << j
    return bits


def gf2_rank_packed(rows: Iterable[int]) -> int:
    """Rank over GF(2) of bit-packed rows (xor basis keyed by leading bit)."""
    basis: dict[int, int] = {}
    for v in rows:
        while v:
            top = v.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = v
                break
            v ^= b
    return len(basis)


def rank_of_rows(rows: Sequence[Sequence[int]], p: int, packed: bool | None = None) -> int:
    """Rank of a list of integer rows modulo the prime ``p``.

    ``packed`` selects the bit-packed kernel; it defaults to on for GF(2).
    """
    if packed is None:
        packed = p == 2
    if packed:
        if p != 2:
            raise ValueError("bit packing only applies to GF(2)")
        return gf2_rank_packed(pack_gf2(r) for r in rows)
    work = [[v % p for v in r] for r in rows if any(v % p for v in r)]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(work)) if work[i][col]), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        inv = pow(prow[col], p - 2, p)
        for i in range(rank + 1, len(work)):
            f = work[i][col]
            if f:
                f = f * inv % p
                row = work[i]
                for j in range(col, ncols):
                    row[j] = (row[j] - f * prow[j]) % p
        rank += 1
        if rank == len(work):
            break
    return rank


def mat_rank(M: MatF) -> int:
    """Rank of ``M`` over its field by exact Gaussian elimination."""
    if M.rows == 0 or M.cols == 0:
        return 0
    # eliminate along the shorter side; rank is transpose invariant
    src = M if M.rows <= M.cols else M.transpose()
    return rank_of_rows(src.to_lists(), M.field.p)


def mat_solve(A: MatF, b: Sequence[int]) -> tuple[int, ...] | None:
    """Solve ``A x = b`` over GF(p).

    Returns ``None`` when the system is inconsistent.  Otherwise returns the
    solution whose free variables (non-pivot columns of the reduced row echelon
    form, pivots chosen left to right) are zero.
    """
    if len(b) != A.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, matrix has {A.rows} rows")
    p = A.field.p
    n = A.cols
    aug = [A.row(i) + [b[i] % p] for i in range(A.rows)]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, len(aug)) if aug[i][col]), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = pow(aug[r][col], p - 2, p)
        aug[r] = [v * inv % p for v in aug[r]]
        prow = aug[r]
        for i in range(len(aug)):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], prow)]
        pivots.append(col)
        r += 1
        if r == len(aug):
            break
    if any(row[n] for row in aug[r:]):
        return None
    x = [0] * n
    for i, col in enumerate(pivots):
        x[col] = aug[i][n]
    return tuple(x)
