"""The recursive family A(0), ..., A(l) of n^k x n^k x n tensors.

A(0) is the identity slice of side n^(k-1); each step glues three copies of the
previous tensor into a 2x2 block layout while doubling the depth::

    A(i+1) = [[A(i) 0,  0 A(i)],
              [0 A(i),  0 0   ]]

where ``X Y`` is concatenation along the third mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterator

from .errors import DimensionError, InvalidParamsError
from .galois import GF2, FieldSpec
from .tensor3 import Tensor3, block2x2, concat

DEFAULT_MAX_VOLUME = 1 << 26


@dataclass(frozen=True)
class ConstructionParams:
    n: int
    k: int
    field: FieldSpec = GF2
    max_volume: int = dc_field(default=DEFAULT_MAX_VOLUME, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 2 or self.n & (self.n - 1):
            raise InvalidParamsError(f"n must be a power of 2 and at least 2, got {self.n}")
        if not isinstance(self.k, int) or self.k < 1:
            raise InvalidParamsError(f"k must be a positive integer, got {self.k}")
        if self.side * self.side > self.max_volume:
            raise InvalidParamsError(
                f"n^k x n^k = {self.side}x{self.side} exceeds the size cap {self.max_volume}")

    @property
    def l(self) -> int:  # noqa: E743
        return self.n.bit_length() - 1

    @property
    def side(self) -> int:
        return self.n ** self.k

    @property
    def base_side(self) -> int:
        return self.n ** (self.k - 1)

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "p": self.field.p, "l": self.l}


def level_zero(params: ConstructionParams) -> Tensor3:
    """A(0): the n^(k-1) x n^(k-1) x 1 tensor whose slice is the identity."""
    return Tensor3.identity_slice(params.base_side, params.field)


def level_step(A: Tensor3) -> Tensor3:
    """A(i) -> A(i+1); doubles every dimension and triples the nonzero count."""
    if A.n1 != A.n2:
        raise DimensionError(f"level_step needs square slices, got {A.dims}")
    Z = Tensor3.zeros(A.dims, A.field)
    return block2x2(concat(A, Z), concat(Z, A), concat(Z, A), concat(Z, Z))


def levels(params: ConstructionParams) -> Iterator[Tensor3]:
    """Yield A(0), A(1), ..., A(l)."""
    A = level_zero(params)
    yield A
    for _ in range(params.l):
        A = level_step(A)
        yield A


def construction_tensor(params: ConstructionParams) -> Tensor3:
    """The final n^k x n^k x n tensor A(l), l = log2 n."""
    *_, last = levels(params)
    return last


def block_tensor(A: Tensor3, B: Tensor3, C: Tensor3, E: Tensor3) -> Tensor3:
    """``M = [[A E, 0 B], [0 C, 0 0]]`` for the shapes of the block bound.

    A is m x n x p, B is m x n' x p', C is m' x n x p' and E is m x n x p'.
    """
    m, n, p = A.dims
    _, n_, p_ = B.dims
    m_ = C.n1
    if B.n1 != m or C.dims != (m_, n, p_) or E.dims != (m, n, p_):
        raise DimensionError(
            f"incompatible blocks: A {A.dims}, B {B.dims}, C {C.dims}, E {E.dims}")
    f = A.field
    return block2x2(
        concat(A, E),
        concat(Tensor3.zeros((m, n_, p), f), B),
        concat(Tensor3.zeros((m_, n, p), f), C),
        Tensor3.zeros((m_, n_, p + p_), f),
    )
