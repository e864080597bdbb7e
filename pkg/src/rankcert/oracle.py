"""Exhaustive exact tensor rank over small prime fields.

For a candidate rank ``r`` the search enumerates factor columns ``a_t`` (mode 1)
and ``c_t`` (mode 3) in canonical form and asks whether every mode-2 fiber
``T[:, j, :]`` lies in the span of the ``r`` vectors ``a_t (x) c_t``; if so the
``b`` factors follow from a linear solve.  Canonical form:

* each column is nonzero with first nonzero entry 1 (the scalar moves into b);
* the pairs ``(a_t, c_t)`` are listed in nondecreasing lexicographic order,
  repeats allowed.

Every decomposition can be brought to this form, so an exhausted search is a
proof that no decomposition with ``r`` terms exists.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Sequence

from .bounds import flattening_bound
from .errors import BudgetExceeded, InfeasibleError
from .galois import MatF, mat_solve
from .tensor3 import Decomposition, Tensor3, materialize

DEFAULT_MAX_BITS = 24

EXACT = "exact"
EXCEEDED_R_MAX = "exceeded_r_max"
EXCEEDED_BUDGET = "exceeded_budget"


@dataclass(frozen=True)
class OracleResult:
    rank: int | None
    witness: Decomposition | None
    searched_up_to: int
    status: str
    solves: int = 0

    @property
    def lower_bound(self) -> int:
        """Largest rank value this run has proven to be a lower bound."""
        return self.rank if self.status == EXACT else self.searched_up_to + 1

    def to_dict(self) -> dict:
        d = {"rank": self.rank, "status": self.status, "searched_up_to": self.searched_up_to,
             "lower_bound": self.lower_bound, "solves": self.solves}
        if self.witness is not None:
            d["witness"] = self.witness.to_dict()
        return d


def normalized_vectors(d: int, p: int) -> list[tuple[int, ...]]:
    """Nonzero vectors of GF(p)^d whose first nonzero entry is 1, in lexicographic order."""
    out = []
    for v in itertools.product(range(p), repeat=d):
        lead = next((x for x in v if x), 0)
        if lead == 1:
            out.append(v)
    return out


def trivial_upper_bound(T: Tensor3) -> int:
    n1, n2, n3 = T.dims
    return min(n1 * n2, n1 * n3, n2 * n3)


def search_bits(T: Tensor3, r: int) -> float:
    """log2 of the raw (A, C) choice space at rank ``r``; the feasibility guard measures this."""
    return r * (T.n1 + T.n3) * math.log2(T.field.p)


class _Span:
    """Incrementally maintained echelon basis for membership tests."""

    __slots__ = ("p", "rows")

    def __init__(self, p: int, rows: dict | None = None):
        self.p = p
        self.rows = rows if rows is not None else {}

    def reduce(self, v):
        if self.p == 2:
            rows = self.rows
            while v:
                b = rows.get(v.bit_length() - 1)
                if b is None:
                    return v
                v ^= b
            return 0
        p = self.p
        v = list(v)
        for col in sorted(self.rows):
            f = v[col]
            if f:
                row = self.rows[col]
                for j in range(col, len(v)):
                    v[j] = (v[j] - f * row[j]) % p
        return v if any(v) else None

    def extended(self, v) -> "_Span":
        rest = self.reduce(v)
        if not rest:
            return self
        rows = dict(self.rows)
        if self.p == 2:
            rows[rest.bit_length() - 1] = rest
        else:
            lead = next(j for j, x in enumerate(rest) if x)
            inv = pow(rest[lead], self.p - 2, self.p)
            rows[lead] = [x * inv % self.p for x in rest]
        return _Span(self.p, rows)

    def contains(self, v) -> bool:
        return not self.reduce(v)


def _encode(vec: Sequence[int], p: int):
    if p == 2:
        bits = 0
        for pos, x in enumerate(vec):
            if x:
                bits |= 1 << (len(vec) - 1 - pos)
        return bits
    return list(vec)


class _Counter:
    def __init__(self, budget: int | None, time_limit: float | None):
        self.budget = budget
        self.deadline = None if time_limit is None else time.monotonic() + time_limit
        self.solves = 0
        self.searched_up_to = -1

    def tick(self) -> None:
        self.solves += 1
        if self.budget is not None and self.solves > self.budget:
            raise BudgetExceeded(f"work budget of {self.budget} solves exhausted",
                                 self.solves - 1, self.searched_up_to)
        if self.deadline is not None and self.solves % 1024 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("wall-clock limit reached", self.solves, self.searched_up_to)


def _kron(a: Sequence[int], c: Sequence[int], p: int) -> list[int]:
    return [x * z % p for x in a for z in c]


def _search(T: Tensor3, r: int, counter: _Counter) -> Decomposition | None:
    """First canonical rank-``r`` decomposition of ``T``, or None when none exists."""
    n1, n2, n3 = T.dims
    p = T.field.p
    if T.is_zero():
        return Decomposition([], [], [])
    if r == 0:
        counter.tick()
        return None
    fibers = {}
    for (i, j, k), v in T.items():
        fibers.setdefault(j, [0] * (n1 * n3))[(i - 1) * n3 + (k - 1)] = v
    targets = [_encode(f, p) for _, f in sorted(fibers.items())]

    pairs = [(a, c) for a in normalized_vectors(n1, p) for c in normalized_vectors(n3, p)]
    encoded = [_encode(_kron(a, c, p), p) for a, c in pairs]
    chosen: list[int] = []

    def dfs(start: int, span: _Span) -> bool:
        if len(chosen) == r:
            counter.tick()
            return all(span.contains(t) for t in targets)
        for idx in range(start, len(pairs)):
            chosen.append(idx)
            if dfs(idx, span.extended(encoded[idx])):
                return True
            chosen.pop()
        return False

    if not dfs(0, _Span(p)):
        return None
    a_cols = [pairs[t][0] for t in chosen]
    c_cols = [pairs[t][1] for t in chosen]
    K = MatF.from_rows([[_kron(a, c, p)[row] for a, c in zip(a_cols, c_cols)]
                        for row in range(n1 * n3)], T.field, r)
    b_cols = [[0] * n2 for _ in range(r)]
    for j in range(1, n2 + 1):
        rhs = fibers.get(j)
        if rhs is None:
            continue
        x = mat_solve(K, rhs)
        if x is None:
            raise AssertionError("span test and linear solve disagree")
        for t in range(r):
            b_cols[t][j - 1] = x[t]
    return Decomposition(a_cols, b_cols, c_cols, allow_zero=True)


def _trivial_witness(T: Tensor3) -> Decomposition:
    """Decomposition by fibers along the mode whose complement is smallest."""
    n1, n2, n3 = T.dims
    best = min((n1 * n2, 3), (n1 * n3, 2), (n2 * n3, 1))[1]
    terms: dict[tuple[int, int], list[int]] = {}
    size = T.dims[best - 1]
    for idx, v in T.items():
        key = tuple(x for m, x in enumerate(idx, 1) if m != best)
        terms.setdefault(key, [0] * size)[idx[best - 1] - 1] = v  # type: ignore[arg-type]
    a, b, c = [], [], []
    for (u, w), fiber in sorted(terms.items()):
        cols = []
        units = iter((u, w))
        for m in (1, 2, 3):
            if m == best:
                cols.append(fiber)
            else:
                e = [0] * T.dims[m - 1]
                e[next(units) - 1] = 1
                cols.append(e)
        a.append(cols[0]), b.append(cols[1]), c.append(cols[2])
    return Decomposition(a, b, c)


def _guard(T: Tensor3, r: int, max_bits: float) -> None:
    bits = search_bits(T, r)
    if bits > max_bits:
        raise InfeasibleError(
            f"rank-{r} search on {T.dims} over {T.field} needs {bits:.1f} enumeration bits "
            f"(guard {max_bits})")


def refute_rank(T: Tensor3, r: int, budget: int | None = None, time_limit: float | None = None,
                max_bits: float = DEFAULT_MAX_BITS) -> bool:
    """True iff no decomposition with ``r`` terms exists, i.e. rank(T) > r.

    Raises :class:`BudgetExceeded` when the cap is hit first.
    """
    if r < 0:
        raise ValueError("rank cannot be negative")
    if r >= trivial_upper_bound(T):
        return False
    if r < flattening_bound(T).value:
        return True
    _guard(T, r, max_bits)
    return _search(T, r, _Counter(budget, time_limit)) is None


def exact_rank(T: Tensor3, r_max: int | None = None, budget: int | None = None,
               time_limit: float | None = None, max_bits: float = DEFAULT_MAX_BITS) -> OracleResult:
    """Smallest ``r`` admitting a decomposition, with a witness.

    Candidates run upward from the flattening bound, so the first success is
    minimal.  ``budget`` caps the number of span tests, ``time_limit`` the
    wall-clock seconds; hitting either returns status ``exceeded_budget``.
    """
    if T.is_zero():
        return OracleResult(0, Decomposition([], [], []), 0, EXACT)
    top = trivial_upper_bound(T)
    r_max = top if r_max is None else min(r_max, top)
    start = flattening_bound(T).value
    counter = _Counter(budget, time_limit)
    counter.searched_up_to = start - 1
    for r in range(start, r_max + 1):
        if r == top:
            witness: Decomposition | None = _trivial_witness(T)
        else:
            _guard(T, r, max_bits)
            try:
                witness = _search(T, r, counter)
            except BudgetExceeded as exc:
                return OracleResult(None, None, exc.searched_up_to, EXCEEDED_BUDGET, exc.solves)
        if witness is not None:
            if any(not any(col) for col in witness.b_factors):
                raise AssertionError(f"rank-{r} witness has a vanishing term; rank {r} is not minimal")
            witness = Decomposition(witness.a_factors, witness.b_factors, witness.c_factors)
            if materialize(witness, T.dims, T.field) != T:
                raise AssertionError("oracle witness does not reproduce the tensor")
            return OracleResult(r, witness, r, EXACT, counter.solves)
        counter.searched_up_to = r
    return OracleResult(None, None, counter.searched_up_to, EXCEEDED_R_MAX, counter.solves)
