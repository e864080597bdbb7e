import random

import pytest

from conftest import random_tensor
from oracles import dense, gf2_inverse, is_nilpotent_nonzero, naive_rank
from rankcert.bounds import flattening_bound
from rankcert.errors import BudgetExceeded, InfeasibleError
from rankcert.galois import FieldSpec
from rankcert.oracle import (EXACT, EXCEEDED_BUDGET, EXCEEDED_R_MAX, exact_rank, normalized_vectors,
                             refute_rank, trivial_upper_bound)
from rankcert.tensor3 import Decomposition, Tensor3, materialize


def test_normalized_vectors():
    assert normalized_vectors(2, 2) == [(0, 1), (1, 0), (1, 1)]
    assert len(normalized_vectors(3, 3)) == (27 - 1) // 2
    assert all(next(x for x in v if x) == 1 for v in normalized_vectors(3, 5))


def test_small_examples(w21):
    assert exact_rank(Tensor3.zeros((2, 2, 2))).rank == 0
    assert exact_rank(Tensor3.identity_slice(3)).rank == 3
    assert exact_rank(Tensor3.simple([1, 1], [0, 1], [1, 1])).rank == 1
    res = exact_rank(w21)
    assert res.status == EXACT and res.rank == 3
    assert materialize(res.witness, w21.dims, w21.field) == w21
    assert refute_rank(w21, 2)
    assert not refute_rank(w21, 3)


def test_level_one_over_gf3():
    w = Tensor3.from_slices([[[1, 0], [0, 0]], [[0, 1], [1, 0]]], FieldSpec(3))
    res = exact_rank(w)
    assert res.rank == 3
    assert materialize(res.witness, w.dims, w.field) == w


@pytest.mark.parametrize("dims,p,count", [((2, 2, 2), 2, 40), ((2, 2, 3), 2, 25), ((2, 2, 2), 3, 25)])
def test_matches_breadth_first_search(dims, p, count):
    rng = random.Random(hash((dims, p)) & 0xFFFF)
    for _ in range(count):
        T = random_tensor(rng, dims, p, density=rng.choice([0.3, 0.6, 0.9]))
        res = exact_rank(T)
        assert res.rank == naive_rank(dims, p, dense(T)), T.entries
        assert materialize(res.witness, dims, T.field) == T
        assert len(res.witness.a_factors) == res.rank


def test_witness_has_no_redundant_terms():
    rng = random.Random(21)
    for _ in range(30):
        T = random_tensor(rng, (2, 3, 2), 2)
        res = exact_rank(T)
        assert res.rank >= flattening_bound(T).value
        if res.rank:
            assert refute_rank(T, res.rank - 1)


def test_r_max_and_budget(w21):
    res = exact_rank(w21, r_max=2)
    assert res.status == EXCEEDED_R_MAX and res.rank is None
    assert res.searched_up_to == 2 and res.lower_bound == 3
    # flattening already gives 2, so the first real search happens at r = 2
    res = exact_rank(w21, budget=1)
    assert res.status == EXCEEDED_BUDGET and res.rank is None
    assert res.lower_bound >= 2
    with pytest.raises(BudgetExceeded):
        refute_rank(Tensor3.from_slices([[[1, 0], [0, 1]], [[0, 1], [1, 1]]]), 2, budget=1)


def test_guard_refuses_large_searches(w22):
    with pytest.raises(InfeasibleError):
        refute_rank(w22, 5)
    with pytest.raises(InfeasibleError):
        exact_rank(w22, r_max=5)
    with pytest.raises(ValueError):
        refute_rank(w22, -1)


def test_trivial_bound_short_circuits():
    T = random_tensor(random.Random(22), (2, 5, 5))
    assert trivial_upper_bound(T) == 10
    assert not refute_rank(T, 10)
    assert not refute_rank(T, 40)


def test_level_two_square_block_pencil_has_rank_above_four(w22):
    # flattening gives only 4; rank 4 would make S2^-1 S1 diagonalizable, but it is nilpotent
    S1, S2 = (w22.slice(k).to_lists() for k in (1, 2))
    assert flattening_bound(w22).value == 4
    S2inv = gf2_inverse(S2)
    prod = [[sum(S2inv[i][t] * S1[t][j] for t in range(4)) % 2 for j in range(4)] for i in range(4)]
    assert is_nilpotent_nonzero(prod, 2)
    assert refute_rank(w22, 4)


def _kron_vec(u, v):
    return tuple(x * y for x in u for y in v)


@pytest.mark.slow
def test_level_two_rank_is_six(w22, w21):
    assert refute_rank(w22, 5, max_bits=30)
    # w21 (x) I2 supplies six terms: the block pattern is the outer index
    base = exact_rank(w21).witness
    e = [(1, 0), (0, 1)]
    a, b, c = [], [], []
    for t in range(2):
        for x, y, z in zip(base.a_factors, base.b_factors, base.c_factors):
            a.append(_kron_vec(x, e[t])), b.append(_kron_vec(y, e[t])), c.append(z)
    assert materialize(Decomposition(a, b, c), w22.dims) == w22


def test_result_serialization(w21):
    d = exact_rank(w21).to_dict()
    assert d["rank"] == 3 and d["status"] == EXACT and d["lower_bound"] == 3
    assert d["witness"]["r"] == 3 and len(d["witness"]["a"]) == 3
