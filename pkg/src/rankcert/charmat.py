"""Characteristic matrices ``A(s) = sum_k s_k A_k`` and their ranks.

Three rank notions live here:

* ``row_rank`` / ``col_rank``: the largest number of rows (columns) of ``A(s)``
  that are linearly independent over the base field F.  A row is a vector of
  linear forms, so this is the rank of the mode-1 (mode-2) flattening, and row
  rank and column rank can differ (``[s1 s2]`` has column rank 2, row rank 1).
* ``generic_rank``: the rank of ``A(s)`` as a matrix over the function field
  F(s).  It never exceeds either of the two above.

Every rank has two independent evaluation routes.  ``"symbolic"`` is exact:
coefficient elimination for row/column rank and fraction-free (Bareiss)
elimination over the polynomial ring F[s] for the generic rank.
``"randomized"`` substitutes uniform points from an extension field
GF(p^e) with p^e >= 2^20 and keeps the maximum rank over a few trials; a
trial can only undershoot, with probability at most degree / p^e.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from typing import Sequence

from .galois import mat_rank
from .tensor3 import Tensor3

SYMBOLIC_THRESHOLD = 64
DEFAULT_TRIALS = 3
MIN_EXT_ORDER = 1 << 20

METHODS = ("auto", "symbolic", "randomized")


# ---------------------------------------------------------------------------
# extension fields GF(p^e), used only by the randomized routes
# ---------------------------------------------------------------------------

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _ptrim([x % p for x in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _ptrim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim([v % p for v in out])


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _is_irreducible(f: list[int], p: int) -> bool:
    """No factor of degree <= deg/2: gcd(x^(p^i) - x, f) = 1 for each such i."""
    e = len(f) - 1
    h = [0, 1]
    for _ in range(e // 2):
        # h <- h^p mod f
        acc, base, k = [1], h, p
        while k:
            if k & 1:
                acc = _pmod(_pmul(acc, base, p), f, p)
            base = _pmod(_pmul(base, base, p), f, p)
            k >>= 1
        h = acc
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, _ptrim(diff), p)) != 1:
            return False
    return True


def _find_irreducible(p: int, e: int) -> list[int]:
    """Lexicographically first monic irreducible of degree ``e`` (low coefficient first)."""
    if e == 1:
        return [0, 1]
    for code in range(1, p ** e):
        low = []
        c = code
        for _ in range(e):
            low.append(c % p)
            c //= p
        if low[0] == 0:
            continue
        f = low + [1]
        if _is_irreducible(f, p):
            return f
    raise ArithmeticError(f"no irreducible polynomial of degree {e} over GF({p})")


class ExtField:
    """GF(p^e), elements encoded as ints whose base-p digits are polynomial coefficients."""

    def __init__(self, p: int, min_order: int = MIN_EXT_ORDER):
        e = 1
        while p ** e < min_order:
            e += 1
        self.p, self.e, self.q = p, e, p ** e
        self.modulus = _find_irreducible(p, e)
        if p == 2:
            self._mod_bits = sum(1 << i for i, c in enumerate(self.modulus) if c)

    def random(self, rng: random.Random) -> int:
        return rng.randrange(self.q)

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, d: Sequence[int]) -> int:
        v = 0
        for x in reversed(d):
            v = v * self.p + x
        return v

    def embed(self, v: int) -> int:
        return v % self.p

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self._undigits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self._undigits([(x - y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self.p == 2:
            acc = 0
            while b:
                if b & 1:
                    acc ^= a
                a <<= 1
                b >>= 1
            top = self.e
            while acc.bit_length() > top:
                acc ^= self._mod_bits << (acc.bit_length() - 1 - top)
            return acc
        prod = _pmod(_pmul(self._digits(a), self._digits(b), self.p), self.modulus, self.p)
        return self._undigits(prod + [0] * (self.e - len(prod)))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        result, base, k = 1, a, self.q - 2
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def rank(self, rows: list[list[int]]) -> int:
        work = [list(r) for r in rows if any(r)]
        if not work:
            return 0
        ncols = len(work[0])
        r = 0
        for col in range(ncols):
            pivot = next((i for i in range(r, len(work)) if work[i][col]), None)
            if pivot is None:
                continue
            work[r], work[pivot] = work[pivot], work[r]
            prow = work[r]
            inv = self.inv(prow[col])
            for i in range(r + 1, len(work)):
                f = work[i][col]
                if f:
                    f = self.mul(f, inv)
                    row = work[i]
                    for j in range(col, ncols):
                        if prow[j]:
                            row[j] = self.sub(row[j], self.mul(f, prow[j]))
            r += 1
            if r == len(work):
                break
        return r


_EXT_CACHE: dict[int, ExtField] = {}


def extension_field(p: int) -> ExtField:
    if p not in _EXT_CACHE:
        _EXT_CACHE[p] = ExtField(p)
    return _EXT_CACHE[p]


# ---------------------------------------------------------------------------
# multivariate polynomials over GF(p) for the fraction-free route
# ---------------------------------------------------------------------------

Poly = dict  # {exponent tuple: nonzero coefficient}


def _poly_mul(a: Poly, b: Poly, p: int) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = (out.get(e, 0) + ca * cb) % p
    return {e: c for e, c in out.items() if c}


def _poly_sub(a: Poly, b: Poly, p: int) -> Poly:
    out = dict(a)
    for e, c in b.items():
        v = (out.get(e, 0) - c) % p
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _poly_divexact(a: Poly, b: Poly, p: int) -> Poly:
    """Quotient of ``a`` by ``b``; raises if the division leaves a remainder."""
    if len(b) == 1:
        (eb, cb), = b.items()
        inv = pow(cb, p - 2, p)
        out = {}
        for e, c in a.items():
            d = tuple(x - y for x, y in zip(e, eb))
            if min(d, default=0) < 0:
                raise ArithmeticError("inexact polynomial division")
            out[d] = c * inv % p
        return out
    lead_b = max(b)
    inv = pow(b[lead_b], p - 2, p)
    rem = dict(a)
    quot: Poly = {}
    while rem:
        lead = max(rem)
        d = tuple(x - y for x, y in zip(lead, lead_b))
        if min(d) < 0:
            raise ArithmeticError("inexact polynomial division")
        c = rem[lead] * inv % p
        quot[d] = c
        rem = _poly_sub(rem, {tuple(x + y for x, y in zip(e, d)): cb * c % p for e, cb in b.items()}, p)
    return quot


def _bareiss_rank(M: list[list[Poly]], nvars: int, p: int) -> int:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    M = [list(r) for r in M]
    prev: Poly = {(0,) * nvars: 1}
    rank = 0
    for s in range(min(rows, cols)):
        best = None
        for i in range(s, rows):
            for j in range(s, cols):
                if M[i][j] and (best is None or len(M[i][j]) < best[0]):
                    best = (len(M[i][j]), i, j)
        if best is None:
            break
        _, pi, pj = best
        M[s], M[pi] = M[pi], M[s]
        for row in M:
            row[s], row[pj] = row[pj], row[s]
        piv = M[s][s]
        for i in range(s + 1, rows):
            lead = M[i][s]
            for j in range(s + 1, cols):
                num = _poly_mul(piv, M[i][j], p) if M[i][j] else {}
                if lead and M[s][j]:
                    num = _poly_sub(num, _poly_mul(lead, M[s][j], p), p)
                M[i][j] = _poly_divexact(num, prev, p) if num else {}
            M[i][s] = {}
        prev = piv
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# the characteristic matrix
# ---------------------------------------------------------------------------

class CharMatrix:
    """``A(s)`` for a tensor ``A``: entry (i, j) is the linear form sum_k A[i, j, k] s_k."""

    def __init__(self, base: Tensor3):
        self.base = base

    @property
    def var_count(self) -> int:
        return self.base.n3

    @property
    def shape(self) -> tuple[int, int]:
        return self.base.n1, self.base.n2

    def transpose(self) -> "CharMatrix":
        return CharMatrix(self.base.transpose12())

    def linear_form(self, i: int, j: int) -> dict[int, int]:
        """Coefficients ``{k: A[i, j, k]}`` of entry (i, j), 1-based."""
        return {k: v for (a, b, k), v in self.base.items() if a == i and b == j}

    def evaluate(self, point: Sequence[int], ext: ExtField | None = None) -> list[list[int]]:
        """Substitute ``s_k = point[k-1]``; values live in ``ext`` when given, else in F."""
        n1, n2 = self.shape
        out = [[0] * n2 for _ in range(n1)]
        if ext is None:
            p = self.base.field.p
            for (i, j, k), v in self.base.items():
                out[i - 1][j - 1] = (out[i - 1][j - 1] + v * point[k - 1]) % p
        else:
            for (i, j, k), v in self.base.items():
                out[i - 1][j - 1] = ext.add(out[i - 1][j - 1], ext.mul(ext.embed(v), point[k - 1]))
        return out

    def polynomial_rows(self) -> list[list[Poly]]:
        n1, n2 = self.shape
        n3 = self.var_count
        rows: list[list[Poly]] = [[{} for _ in range(n2)] for _ in range(n1)]
        for (i, j, k), v in self.base.items():
            e = tuple(int(t == k - 1) for t in range(n3))
            rows[i - 1][j - 1][e] = v
        return rows


def _resolve(method: str, C: CharMatrix) -> str:
    if method not in METHODS:
        raise ValueError(f"unknown rank method {method!r}; choose from {METHODS}")
    if method == "auto":
        return "symbolic" if min(C.shape) <= SYMBOLIC_THRESHOLD else "randomized"
    return method


def resolve_method(method: str, T: Tensor3) -> str:
    """The concrete route ``method`` selects for tensor ``T``."""
    return _resolve(method, CharMatrix(T))


def _as_charmat(C: CharMatrix | Tensor3) -> CharMatrix:
    return C if isinstance(C, CharMatrix) else CharMatrix(C)


def row_rank(C: CharMatrix | Tensor3, method: str = "auto", seed: int = 0,
             trials: int = DEFAULT_TRIALS) -> int:
    """Maximal number of rows of ``A(s)`` linearly independent over F."""
    C = _as_charmat(C)
    n1, n2 = C.shape
    n3 = C.var_count
    if n1 == 0 or n2 == 0 or n3 == 0:
        return 0
    if _resolve(method, C) == "symbolic":
        return mat_rank(C.base.flatten(1))
    # stacking evaluations at n3 points applies (I (x) Z) to the coefficient
    # rows; Z is invertible unless its determinant (degree n3) vanishes
    ext = extension_field(C.base.field.p)
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        stacked = [[] for _ in range(n1)]
        for _ in range(n3):
            point = [ext.random(rng) for _ in range(n3)]
            for i, row in enumerate(C.evaluate(point, ext)):
                stacked[i].extend(row)
        best = max(best, ext.rank(stacked))
    return best


def col_rank(C: CharMatrix | Tensor3, method: str = "auto", seed: int = 0,
             trials: int = DEFAULT_TRIALS) -> int:
    """Maximal number of columns of ``A(s)`` linearly independent over F."""
    return row_rank(_as_charmat(C).transpose(), method, seed, trials)


def generic_rank(C: CharMatrix | Tensor3, method: str = "auto", seed: int = 0,
                 trials: int = DEFAULT_TRIALS) -> int:
    """Rank of ``A(s)`` over the rational function field F(s)."""
    C = _as_charmat(C)
    n1, n2 = C.shape
    if n1 == 0 or n2 == 0 or C.base.is_zero():
        return 0
    p = C.base.field.p
    if _resolve(method, C) == "symbolic":
        rows = C.polynomial_rows()
        if n1 > n2:
            rows = [list(col) for col in zip(*rows)]
        return _bareiss_rank(rows, C.var_count, p)
    ext = extension_field(p)
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        point = [ext.random(rng) for _ in range(C.var_count)]
        best = max(best, ext.rank(C.evaluate(point, ext)))
    return best


@dataclass(frozen=True)
class NondegeneracyReport:
    slices_independent: bool
    full_row_rank: bool
    full_col_rank: bool

    @property
    def nondegenerate(self) -> bool:
        return self.slices_independent and self.full_row_rank and self.full_col_rank

    def __bool__(self) -> bool:
        return self.nondegenerate

    def to_dict(self) -> dict:
        d = asdict(self)
        d["nondegenerate"] = self.nondegenerate
        return d


def is_nondegenerate(T: Tensor3, method: str = "auto", seed: int = 0) -> NondegeneracyReport:
    """Check that no nontrivial slice combination vanishes and ``A(s)`` has full row and column rank."""
    n1, n2, n3 = T.dims
    slices_ok = n3 > 0 and mat_rank(T.flatten(3)) == n3
    return NondegeneracyReport(
        slices_independent=slices_ok,
        full_row_rank=n1 > 0 and row_rank(T, method, seed) == n1,
        full_col_rank=n2 > 0 and col_rank(T, method, seed) == n2,
    )
