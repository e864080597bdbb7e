"""Order-r hypercube tensors over [n]^r and the reshaping map to n^k x n^k x n.

For odd ``r = 2k + 1`` the map ``phi`` groups the first ``k`` indices into a
row index, the next ``k`` into a column index and keeps the last index as the
depth.  Groups are encoded big-endian in base ``n`` (the first index is the
most significant digit), so a simple tensor ``x1 (x) ... (x) xr`` goes to
``kron(x1..xk) (x) kron(xk+1..x2k) (x) xr``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .errors import DimensionError
from .galois import GF2, FieldSpec, MatF, mat_rank
from .tensor3 import Decomposition, Tensor3, materialize


class TensorR:
    """A sparse tensor over ``[n]^r`` with 1-based index tuples; ``r`` must be odd."""

    __slots__ = ("r", "n", "field", "_entries")

    def __init__(self, r: int, n: int, field: FieldSpec = GF2,
                 entries: Mapping[tuple[int, ...], int] | None = None):
        if r < 3 or r % 2 == 0:
            raise DimensionError(f"hypercube order must be odd and at least 3, got {r}")
        if n < 1:
            raise DimensionError(f"side length must be positive, got {n}")
        clean = {}
        for idx, v in (entries or {}).items():
            idx = tuple(int(x) for x in idx)
            if len(idx) != r or not all(1 <= x <= n for x in idx):
                raise IndexError(f"index {idx} outside [{n}]^{r}")
            v = int(v) % field.p
            if v:
                clean[idx] = v
        self.r, self.n, self.field = r, n, field
        self._entries = clean

    @property
    def k(self) -> int:
        return self.r // 2

    @property
    def entries(self) -> dict[tuple[int, ...], int]:
        return dict(self._entries)

    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        return iter(sorted(self._entries.items()))

    def nnz(self) -> int:
        return len(self._entries)

    def is_zero(self) -> bool:
        return not self._entries

    def __getitem__(self, idx: tuple[int, ...]) -> int:
        return self._entries.get(tuple(idx), 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorR):
            return NotImplemented
        return (self.r, self.n, self.field, self._entries) == (other.r, other.n, other.field, other._entries)

    def __hash__(self) -> int:
        return hash((self.r, self.n, self.field, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        return f"TensorR([{self.n}]^{self.r}, {self.field}, nnz={self.nnz()})"


def _group_index(digits: Sequence[int], n: int) -> int:
    v = 0
    for d in digits:
        v = v * n + (d - 1)
    return v + 1


def _split_index(v: int, n: int, k: int) -> tuple[int, ...]:
    v -= 1
    out = []
    for _ in range(k):
        out.append(v % n + 1)
        v //= n
    return tuple(reversed(out))


def phi(T: TensorR) -> Tensor3:
    """Reshape ``[n]^(2k+1)`` into ``n^k x n^k x n``."""
    n, k = T.n, T.k
    side = n ** k
    entries = {}
    for idx, v in T.items():
        entries[(_group_index(idx[:k], n), _group_index(idx[k:2 * k], n), idx[-1])] = v
    return Tensor3((side, side, n), T.field, entries)


def phi_inverse(T: Tensor3, n: int, k: int) -> TensorR:
    """Undo :func:`phi` for a tensor of dims ``(n^k, n^k, n)``."""
    if k < 1:
        raise DimensionError(f"k must be positive, got {k}")
    if T.dims != (n ** k, n ** k, n):
        raise DimensionError(f"expected dims {(n ** k, n ** k, n)} for n={n}, k={k}; got {T.dims}")
    entries = {}
    for (i, j, l), v in T.items():
        entries[_split_index(i, n, k) + _split_index(j, n, k) + (l,)] = v
    return TensorR(2 * k + 1, n, T.field, entries)


# ---------------------------------------------------------------------------
# decompositions on the hypercube side
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HypercubeDecomposition:
    """A sum of simple order-r tensors ``x1 (x) ... (x) xr``; each term is a tuple of r vectors."""

    terms: tuple[tuple[tuple[int, ...], ...], ...]

    def __init__(self, terms: Sequence[Sequence[Sequence[int]]]):
        clean = tuple(tuple(tuple(int(x) for x in vec) for vec in term) for term in terms)
        if len({len(t) for t in clean}) > 1:
            raise DimensionError("all terms must have the same order")
        for t, term in enumerate(clean):
            if any(not any(vec) for vec in term):
                raise ValueError(f"term {t} has a zero factor")
        object.__setattr__(self, "terms", clean)

    def __len__(self) -> int:
        return len(self.terms)


def kron(vectors: Sequence[Sequence[int]], p: int) -> tuple[int, ...]:
    """Kronecker product, first vector most significant."""
    out = [1]
    for vec in vectors:
        out = [x * y % p for x in out for y in vec]
    return tuple(out)


def materialize_r(D: HypercubeDecomposition, r: int, n: int, field: FieldSpec = GF2) -> TensorR:
    """Sum of the simple order-r tensors listed in ``D``."""
    p = field.p
    acc: dict[tuple[int, ...], int] = {}
    for term in D.terms:
        if len(term) != r or any(len(vec) != n for vec in term):
            raise DimensionError(f"term does not live in [{n}]^{r}")
        supports = [[(i, x) for i, x in enumerate(vec, 1) if x % p] for vec in term]
        for combo in _product(supports):
            idx = tuple(i for i, _ in combo)
            val = 1
            for _, x in combo:
                val = val * x % p
            acc[idx] = (acc.get(idx, 0) + val) % p
    return TensorR(r, n, field, acc)


def _product(supports):
    if not supports:
        yield ()
        return
    for head in supports[0]:
        for tail in _product(supports[1:]):
            yield (head,) + tail


def phi_term(term: Sequence[Sequence[int]], p: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Image of one simple order-(2k+1) tensor: again a simple 3-way tensor."""
    r = len(term)
    if r < 3 or r % 2 == 0:
        raise DimensionError(f"term order must be odd and at least 3, got {r}")
    k = r // 2
    return kron(term[:k], p), kron(term[k:2 * k], p), tuple(x % p for x in term[-1])


@dataclass(frozen=True)
class TransportCertificate:
    """Outcome of pushing a hypercube decomposition through ``phi``."""

    terms: int
    image: Decomposition
    consistent: bool

    @property
    def rank_upper_bound(self) -> int:
        """Upper bound on the rank of the 3-way image: one simple term per hypercube term."""
        return self.terms

    def to_dict(self) -> dict:
        return {"terms": self.terms, "consistent": self.consistent,
                "rank_upper_bound": self.rank_upper_bound, "image": self.image.to_dict()}


def transport_witness(D: HypercubeDecomposition, n: int, k: int, field: FieldSpec = GF2) -> TransportCertificate:
    """Map each simple term through ``phi`` and confirm the images sum to ``phi`` of the whole.

    A consistent result shows ``rank(phi(H)) <= len(D)`` for ``H = sum(D)``.
    """
    r = 2 * k + 1
    p = field.p
    for term in D.terms:
        if len(term) != r or any(len(vec) != n for vec in term):
            raise DimensionError(f"term does not live in [{n}]^{r}")
    images = [phi_term(term, p) for term in D.terms]
    image = Decomposition([a for a, _, _ in images], [b for _, b, _ in images],
                          [c for _, _, c in images], allow_zero=True)
    side = n ** k
    lhs = materialize(image, (side, side, n), field)
    rhs = phi(materialize_r(D, r, n, field))
    return TransportCertificate(len(D), image, lhs == rhs)


def _unkron(vec: Sequence[int], n: int, k: int, field: FieldSpec) -> list[tuple[int, ...]]:
    """Split a length-``n^k`` vector into ``k`` factors of length ``n``, if it is a Kronecker product."""
    p = field.p
    if k == 1:
        return [tuple(vec)]
    rest = n ** (k - 1)
    M = MatF(n, rest, tuple(int(x) % p for x in vec), field)
    if mat_rank(M) != 1:
        raise ValueError("vector is not a Kronecker product of length-n factors")
    rows = M.to_lists()
    lead_row = next(i for i, row in enumerate(rows) if any(row))
    tail = rows[lead_row]
    j0 = next(j for j, x in enumerate(tail) if x)
    inv = pow(tail[j0], p - 2, p)
    head = tuple(row[j0] * inv % p for row in rows)
    return [head] + _unkron(tail, n, k - 1, field)


def pullback_witness(D: Decomposition, n: int, k: int, field: FieldSpec = GF2) -> HypercubeDecomposition:
    """Express a 3-way witness as hypercube terms when every row/column factor is a Kronecker product."""
    side = n ** k
    terms = []
    for a, b, c in D.terms():
        if (len(a), len(b), len(c)) != (side, side, n):
            raise DimensionError(f"factor lengths {(len(a), len(b), len(c))} do not match {(side, side, n)}")
        terms.append(tuple(_unkron(a, n, k, field) + _unkron(b, n, k, field) + [tuple(c)]))
    return HypercubeDecomposition(terms)


def is_simple(T: Tensor3) -> bool:
    """Nonzero with every flattening of rank 1."""
    return not T.is_zero() and all(mat_rank(T.flatten(m)) == 1 for m in (1, 2, 3))

