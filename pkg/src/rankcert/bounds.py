"""Machine-checked lower bounds on tensor rank.

* :func:`flattening_bound` -- the classical matricization bound.
* :func:`partition_bound` -- the three block-partition inequalities for
  nondegenerate characteristic matrices (lower-triangular layout, and the two
  "shared variables" layouts side by side / stacked).
* :func:`block_bound` -- ``R[M] >= R[A] + colrank B + rowrank C`` for
  ``M = [[A E, 0 B], [0 C, 0 0]]``; the block ``E`` does not enter the bound.
* :func:`certificate` -- replays the block bound at every level of the
  recursive construction and telescopes to ``2 n^k - n^(k-1)``.

Every bound refuses to fire when one of its hypotheses (nondegeneracy,
matching shapes) is false; hypotheses are computed, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from . import charmat
from .charmat import NondegeneracyReport, col_rank, is_nondegenerate, row_rank
from .construction import ConstructionParams, level_zero, level_step
from .errors import DimensionError, HypothesisError
from .galois import mat_rank
from .tensor3 import Tensor3, block2x2, concat

CERT_METHODS = ("auto", "symbolic", "randomized", "both")


@dataclass(frozen=True)
class LowerBound:
    """``value`` together with the rule and operands that produced it."""

    value: int
    rule: str
    inputs: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError("a rank lower bound cannot be negative")

    def __int__(self) -> int:
        return self.value

    def to_dict(self) -> dict:
        inputs = {k: (v.to_dict() if hasattr(v, "to_dict") else v) for k, v in self.inputs.items()}
        return {"value": self.value, "rule": self.rule, "inputs": inputs}


def _value(b: LowerBound | int) -> int:
    return b.value if isinstance(b, LowerBound) else int(b)


def flattening_bound(T: Tensor3) -> LowerBound:
    """Largest rank among the three mode flattenings."""
    ranks = [mat_rank(T.flatten(m)) for m in (1, 2, 3)]
    return LowerBound(max(ranks), "flattening", {"mode_ranks": ranks})


# ---------------------------------------------------------------------------
# block-partition inequalities
# ---------------------------------------------------------------------------

def partition_bound(case: str, *, r_g1: LowerBound | int, r_g3: LowerBound | int,
                    row_rank_g1: int | None = None, col_rank_g3: int | None = None,
                    row_rank_g3: int | None = None, dim_s: int | None = None,
                    nondegenerate: tuple[bool, bool, bool] = (True, True, True)) -> LowerBound:
    """Combine verified component data into a rank bound for the composite.

    ``case`` selects the layout:

    ``"i"``    ``[[G1(s), 0], [G2(s), G3(s)]]``:
               ``max(R[G1] + colrank G3, R[G3] + rowrank G1)``
    ``"ii"``   ``[G1(s) + G2(t), G3(t)]``:
               ``max(R[G1] + colrank G3, R[G3] + dim s)``
    ``"iii"``  ``[[G1(s) + G2(t)], [G3(t)]]``:
               ``max(R[G1] + rowrank G3, R[G3] + dim s)``

    ``nondegenerate`` carries the verdicts for G1, G2, G3; any false verdict
    raises :class:`HypothesisError`.
    """
    if case not in ("i", "ii", "iii"):
        raise ValueError(f"case must be 'i', 'ii' or 'iii', got {case!r}")
    verdicts = tuple(bool(v) for v in nondegenerate)
    failed = [f"G{n}" for n, ok in zip((1, 2, 3), verdicts) if not ok]
    if failed:
        raise HypothesisError(f"partition bound needs nondegenerate blocks; failed: {', '.join(failed)}")

    needed = {"i": ("row_rank_g1", "col_rank_g3"), "ii": ("col_rank_g3", "dim_s"),
              "iii": ("row_rank_g3", "dim_s")}[case]
    supplied = {"row_rank_g1": row_rank_g1, "col_rank_g3": col_rank_g3,
                "row_rank_g3": row_rank_g3, "dim_s": dim_s}
    for name in needed:
        if supplied[name] is None:
            raise ValueError(f"case {case} needs {name}")
        if supplied[name] <= 0:
            # a nondegenerate block has positive row/column rank and at least one slice
            raise HypothesisError(f"{name} = {supplied[name]} contradicts nondegeneracy")

    a, b = _value(r_g1), _value(r_g3)
    if case == "i":
        branches = (a + col_rank_g3, b + row_rank_g1)
    elif case == "ii":
        branches = (a + col_rank_g3, b + dim_s)
    else:
        branches = (a + row_rank_g3, b + dim_s)
    inputs = {"r_g1": r_g1, "r_g3": r_g3, "branches": list(branches)}
    inputs.update({k: supplied[k] for k in needed})
    return LowerBound(max(branches), f"partition-{case}", inputs)


def partition_tensor(case: str, G1: Tensor3, G2: Tensor3, G3: Tensor3) -> Tensor3:
    """Assemble the composite tensor whose characteristic matrix has the ``case`` layout."""
    f = G1.field
    if case == "i":
        a, b, q = G1.dims
        c, d = G3.n1, G3.n2
        if G2.dims != (c, b, q) or G3.n3 != q:
            raise DimensionError(f"case i shapes: G1 {G1.dims}, G2 {G2.dims}, G3 {G3.dims}")
        return block2x2(G1, Tensor3.zeros((a, d, q), f), G2, G3)
    if case in ("ii", "iii"):
        a, b, q1 = G1.dims
        q2 = G2.n3
        if G2.dims[:2] != (a, b):
            raise DimensionError(f"G1 {G1.dims} and G2 {G2.dims} must share a block shape")
        top = concat(G1, G2)
        if case == "ii":
            if G3.n1 != a or G3.n3 != q2:
                raise DimensionError(f"case ii shapes: G1 {G1.dims}, G2 {G2.dims}, G3 {G3.dims}")
            right = concat(Tensor3.zeros((a, G3.n2, q1), f), G3)
            return _hstack(top, right)
        if G3.n2 != b or G3.n3 != q2:
            raise DimensionError(f"case iii shapes: G1 {G1.dims}, G2 {G2.dims}, G3 {G3.dims}")
        bottom = concat(Tensor3.zeros((G3.n1, b, q1), f), G3)
        return _hstack(top.transpose12(), bottom.transpose12()).transpose12()
    raise ValueError(f"case must be 'i', 'ii' or 'iii', got {case!r}")


def _hstack(L: Tensor3, R: Tensor3) -> Tensor3:
    entries = dict(L.entries)
    for (i, j, k), v in R.items():
        entries[(i, j + L.n2, k)] = v
    return Tensor3((L.n1, L.n2 + R.n2, L.n3), L.field, entries)


def partition_bound_from_tensors(case: str, G1: Tensor3, G2: Tensor3, G3: Tensor3,
                                 r_g1: LowerBound | int, r_g3: LowerBound | int,
                                 method: str = "auto", seed: int = 0) -> LowerBound:
    """:func:`partition_bound` with ranks and verdicts computed from the blocks."""
    partition_tensor(case, G1, G2, G3)  # shape check
    verdicts = tuple(is_nondegenerate(G, method, seed).nondegenerate for G in (G1, G2, G3))
    if case == "i":
        return partition_bound("i", r_g1=r_g1, r_g3=r_g3, row_rank_g1=row_rank(G1, method, seed),
                               col_rank_g3=col_rank(G3, method, seed), nondegenerate=verdicts)
    if case == "ii":
        return partition_bound("ii", r_g1=r_g1, r_g3=r_g3, col_rank_g3=col_rank(G3, method, seed),
                               dim_s=G1.n3, nondegenerate=verdicts)
    return partition_bound("iii", r_g1=r_g1, r_g3=r_g3, row_rank_g3=row_rank(G3, method, seed),
                           dim_s=G1.n3, nondegenerate=verdicts)


def block_bound(A: Tensor3, B: Tensor3, C: Tensor3, E: Tensor3, R_A: LowerBound | int,
                method: str = "auto", seed: int = 0) -> LowerBound:
    """Rank bound for ``M = [[A E, 0 B], [0 C, 0 0]]``.

    Shapes: A is m x n x p, B is m x n' x p', C is m' x n x p', E is m x n x p'.
    ``E`` is only shape-checked; the bound does not depend on it.
    """
    m, n, _ = A.dims
    if B.n1 != m or C.n2 != n or B.n3 != C.n3 or E.dims != (m, n, B.n3):
        raise DimensionError(f"incompatible blocks: A {A.dims}, B {B.dims}, C {C.dims}, E {E.dims}")
    if len({X.field for X in (A, B, C, E)}) != 1:
        raise DimensionError("blocks must share a field")
    reports = {name: is_nondegenerate(X, method, seed) for name, X in (("A", A), ("B", B), ("C", C))}
    failed = [name for name, rep in reports.items() if not rep.nondegenerate]
    if failed:
        raise HypothesisError(f"block bound needs nondegenerate blocks; failed: {', '.join(failed)}")
    cr_b = col_rank(B, method, seed)
    rr_c = row_rank(C, method, seed)
    return LowerBound(_value(R_A) + cr_b + rr_c, "block",
                      {"R_A": R_A, "col_rank_B": cr_b, "row_rank_C": rr_c})


# ---------------------------------------------------------------------------
# the level-by-level certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LevelRecord:
    i: int
    dims: tuple[int, int, int]
    row_rank: int
    col_rank: int
    nondegenerate: NondegeneracyReport
    increment: int
    cumulative_bound: int

    def to_dict(self) -> dict:
        return {"i": self.i, "dims": list(self.dims), "row_rank": self.row_rank,
                "col_rank": self.col_rank, "nondegenerate": self.nondegenerate.to_dict(),
                "increment": self.increment, "cumulative_bound": self.cumulative_bound}


@dataclass(frozen=True)
class Certificate:
    """Per-level ledger; ``levels[i]`` describes A(i) and bounds R[A(i+1)]."""

    params: ConstructionParams
    base_bound: int
    levels: tuple[LevelRecord, ...]
    final_dims: tuple[int, int, int]
    final_bound: int
    valid: bool
    rank_method: str
    failing_level: int | None = None
    failure: str | None = None

    @property
    def expected_final_bound(self) -> int:
        return 2 * self.params.side - self.params.base_side

    @property
    def increments(self) -> list[int]:
        return [lv.increment for lv in self.levels]

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "base_bound": self.base_bound,
            "levels": [lv.to_dict() for lv in self.levels],
            "final_dims": list(self.final_dims),
            "final_bound": self.final_bound,
            "expected_final_bound": self.expected_final_bound,
            "rank_method": self.rank_method,
            "valid": self.valid,
            "failing_level": self.failing_level,
            "failure": self.failure,
        }


def _ranks(A: Tensor3, method: str, seed: int) -> tuple[int, int, NondegeneracyReport]:
    if method != "both":
        return row_rank(A, method, seed), col_rank(A, method, seed), is_nondegenerate(A, method, seed)
    sym = _ranks(A, "symbolic", seed)
    rnd = _ranks(A, "randomized", seed)
    if sym != rnd:
        raise HypothesisError(f"symbolic {sym[:2]} and randomized {rnd[:2]} ranks disagree")
    return sym


def certificate(params: ConstructionParams, method: str = "auto", seed: int = 0) -> Certificate:
    """Replay the block bound from A(0) up to A(l) and check every hypothesis on the way."""
    if method not in CERT_METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {CERT_METHODS}")
    A = level_zero(params)
    base = mat_rank(A.slice(1))
    cumulative: LowerBound | int = LowerBound(base, "matrix-rank", {"slice": 1})
    resolved = "cross-checked" if method == "both" else charmat.resolve_method(method, A)
    records: list[LevelRecord] = []

    def fail(i: int, why: str) -> Certificate:
        return Certificate(params, base, tuple(records), A.dims, _value(cumulative), False,
                           resolved, i, why)

    width = params.base_side
    for i in range(params.l):
        expected = (width << i, width << i, 1 << i)
        if A.dims != expected:
            return fail(i, f"A({i}) has dims {A.dims}, expected {expected}")
        try:
            rr, cr, report = _ranks(A, method, seed)
        except HypothesisError as exc:
            return fail(i, str(exc))
        if method != "both":
            resolved = _merge_method(resolved, charmat.resolve_method(method, A))
        increment = rr + cr
        records.append(LevelRecord(i, A.dims, rr, cr, report, increment, _value(cumulative) + increment))
        if not report.nondegenerate:
            return fail(i, f"A({i}) is degenerate: {report.to_dict()}")
        if rr != expected[0] or cr != expected[1]:
            return fail(i, f"A({i}) has row/column rank {rr}/{cr}, expected {expected[0]}")
        zero_e = Tensor3.zeros((A.n1, A.n2, A.n3), A.field)
        try:
            step_bound = block_bound(A, A, A, zero_e, cumulative,
                                     "symbolic" if method == "both" else method, seed)
        except HypothesisError as exc:
            return fail(i, str(exc))
        if step_bound.value != records[-1].cumulative_bound:
            return fail(i, f"block bound {step_bound.value} disagrees with ledger")
        cumulative = LowerBound(step_bound.value, "certificate", {"level": i, "block": step_bound})
        A = level_step(A)

    final_dims = (params.side, params.side, params.n)
    if A.dims != final_dims:
        return fail(params.l, f"final tensor has dims {A.dims}, expected {final_dims}")
    final = _value(cumulative)
    cert = Certificate(params, base, tuple(records), A.dims, final, True, resolved)
    if final != cert.expected_final_bound:
        return fail(params.l, f"final bound {final} differs from 2n^k - n^(k-1) = {cert.expected_final_bound}")
    return cert


def _merge_method(current: str, new: str) -> str:
    return current if current == new else "mixed"


def check_certificate(data: dict) -> list[str]:
    """Re-verify the arithmetic of a serialized certificate without recomputing any rank.

    Returns the list of problems found; empty means the ledger is consistent
    and proves ``final_bound``.
    """
    problems: list[str] = []
    try:
        n, k, l = (int(data["params"][key]) for key in ("n", "k", "l"))
        levels = data["levels"]
        base = int(data["base_bound"])
        final = int(data["final_bound"])
    except (KeyError, TypeError, ValueError) as exc:
        return [f"malformed certificate: {exc}"]
    if 2 ** l != n:
        problems.append(f"2^l = {2 ** l} but n = {n}")
    width = n ** (k - 1)
    if base != width:
        problems.append(f"base bound {base} differs from n^(k-1) = {width}")
    if len(levels) != l:
        problems.append(f"{len(levels)} level records, expected {l}")
    running = base
    for i, lv in enumerate(levels):
        tag = f"level {i}"
        if lv.get("i") != i:
            problems.append(f"{tag}: index field is {lv.get('i')}")
        dims = lv.get("dims")
        if dims != [width << i, width << i, 1 << i]:
            problems.append(f"{tag}: dims {dims}")
            continue
        nd = lv.get("nondegenerate", {})
        if not all(nd.get(key) is True for key in ("slices_independent", "full_row_rank", "full_col_rank")):
            problems.append(f"{tag}: nondegeneracy not established")
        if lv.get("row_rank") != dims[0] or lv.get("col_rank") != dims[1]:
            problems.append(f"{tag}: ranks {lv.get('row_rank')}/{lv.get('col_rank')} are not full")
        inc = lv.get("increment")
        if inc != lv.get("row_rank", 0) + lv.get("col_rank", 0):
            problems.append(f"{tag}: increment {inc} is not row_rank + col_rank")
        if inc != 2 ** (i + 1) * width:
            problems.append(f"{tag}: increment {inc} differs from 2^(i+1) n^(k-1)")
        running += inc if isinstance(inc, int) else 0
        if lv.get("cumulative_bound") != running:
            problems.append(f"{tag}: cumulative bound {lv.get('cumulative_bound')}, recomputed {running}")
    if final != running:
        problems.append(f"final bound {final}, recomputed {running}")
    if final != 2 * n ** k - width:
        problems.append(f"final bound {final} differs from 2n^k - n^(k-1) = {2 * n ** k - width}")
    if data.get("valid") is not (not problems):
        problems.append(f"valid flag {data.get('valid')} contradicts the ledger")
    return problems
