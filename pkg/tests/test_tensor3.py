import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_tensor
from rankcert.errors import DimensionError, FieldMismatchError
from rankcert.galois import FieldSpec, mat_rank
from rankcert.tensor3 import Decomposition, Tensor3, block2x2, concat, materialize

# slices worked out by unrolling one step of the recursion from A(0) = [1]
W21_SLICES = [[[1, 0], [0, 0]], [[0, 1], [1, 0]]]


def test_slice_examples(w21):
    assert Tensor3.identity_slice(3).slice(1).to_lists() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert Tensor3.zeros((2, 2, 2)).slice(2).to_lists() == [[0, 0], [0, 0]]
    assert w21.slice(2).to_lists() == [[0, 1], [1, 0]]


def test_slice_out_of_range(w21):
    with pytest.raises(IndexError):
        w21.slice(0)
    with pytest.raises(IndexError):
        w21.slice(3)


def test_entries_are_normalized():
    T = Tensor3((2, 2, 1), FieldSpec(3), {(1, 1, 1): 4, (2, 2, 1): 3})
    assert T.entries == {(1, 1, 1): 1}
    with pytest.raises(IndexError):
        Tensor3((2, 2, 1), FieldSpec(3), {(3, 1, 1): 1})


def test_equality_includes_field_and_dims():
    a = Tensor3((1, 1, 1), FieldSpec(2), {(1, 1, 1): 1})
    assert a == Tensor3.identity_slice(1)
    assert a != Tensor3((1, 1, 1), FieldSpec(3), {(1, 1, 1): 1})
    assert a != Tensor3((1, 1, 2), FieldSpec(2), {(1, 1, 1): 1})
    assert len({a, Tensor3.identity_slice(1)}) == 1


def test_concat_examples():
    I2 = Tensor3.identity_slice(2)
    Z = Tensor3.zeros((2, 2, 1))
    C = concat(I2, Z)
    assert C.dims == (2, 2, 2)
    assert [s.to_lists() for s in C.slices()] == [[[1, 0], [0, 1]], [[0, 0], [0, 0]]]


def test_concat_slices_and_nnz():
    rng = random.Random(3)
    for _ in range(30):
        A = random_tensor(rng, (2, 3, rng.randint(1, 3)))
        B = random_tensor(rng, (2, 3, rng.randint(1, 3)))
        AB = concat(A, B)
        assert AB.nnz() == A.nnz() + B.nnz()
        for j in range(1, B.n3 + 1):
            assert AB.slice(A.n3 + j) == B.slice(j)
        for j in range(1, A.n3 + 1):
            assert AB.slice(j) == A.slice(j)


def test_concat_mismatch():
    with pytest.raises(DimensionError):
        concat(Tensor3.zeros((2, 2, 1)), Tensor3.zeros((2, 3, 1)))
    with pytest.raises(FieldMismatchError):
        concat(Tensor3.zeros((2, 2, 1)), Tensor3.zeros((2, 2, 1), FieldSpec(3)))


@settings(max_examples=50)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 4), st.randoms(use_true_random=False))
def test_split_concat_round_trip(n1, n2, n3, rnd):
    T = random_tensor(rnd, (n1, n2, n3), p=3)
    for m in range(n3 + 1):
        left, right = T.split(m)
        assert concat(left, right) == T


def test_block2x2_examples(w21):
    one = Tensor3.identity_slice(1)
    zero = Tensor3.zeros((1, 1, 1))
    assert block2x2(one, zero, zero, one) == Tensor3.identity_slice(2)
    Z = Tensor3.zeros((2, 1, 3))
    assert block2x2(Z, Z, Z, Z) == Tensor3.zeros((4, 2, 3))
    # the recursion's inputs at i = 0, n = 2, k = 1
    A0 = one
    got = block2x2(concat(A0, zero), concat(zero, A0), concat(zero, A0), concat(zero, zero))
    assert got == w21


def test_block2x2_slices_are_block_matrices():
    rng = random.Random(4)
    TL, TR = random_tensor(rng, (2, 1, 2)), random_tensor(rng, (2, 3, 2))
    BL, BR = random_tensor(rng, (1, 1, 2)), random_tensor(rng, (1, 3, 2))
    M = block2x2(TL, TR, BL, BR)
    assert M.dims == (3, 4, 2)
    for k in (1, 2):
        top = [a + b for a, b in zip(TL.slice(k).to_lists(), TR.slice(k).to_lists())]
        bottom = [a + b for a, b in zip(BL.slice(k).to_lists(), BR.slice(k).to_lists())]
        assert M.slice(k).to_lists() == top + bottom


def test_block2x2_mismatch():
    a = Tensor3.zeros((1, 1, 1))
    with pytest.raises(DimensionError):
        block2x2(a, a, a, Tensor3.zeros((1, 1, 2)))
    with pytest.raises(DimensionError):
        block2x2(a, Tensor3.zeros((2, 1, 1)), a, a)


def test_flatten_examples(w21):
    e111 = Tensor3.simple([1, 0], [1, 0], [1, 0])
    for mode in (1, 2, 3):
        F = e111.flatten(mode)
        assert F.to_lists() == [[1, 0, 0, 0], [0, 0, 0, 0]]
        assert Tensor3.zeros((2, 3, 4)).flatten(mode).is_zero()
    assert mat_rank(w21.flatten(3)) == 2


def test_flatten_column_order():
    T = Tensor3((2, 3, 4), FieldSpec(5), {(2, 3, 4): 1, (1, 2, 3): 2})
    F1, F2, F3 = (T.flatten(m) for m in (1, 2, 3))
    assert (F1.rows, F1.cols) == (2, 12) and F1[1, 2 * 4 + 3] == 1 and F1[0, 1 * 4 + 2] == 2
    assert (F2.rows, F2.cols) == (3, 8) and F2[2, 1 * 4 + 3] == 1 and F2[1, 0 * 4 + 2] == 2
    assert (F3.rows, F3.cols) == (4, 6) and F3[3, 1 * 3 + 2] == 1 and F3[2, 0 * 3 + 1] == 2


def test_materialize_examples(w21):
    assert materialize(Decomposition([], [], []), (2, 2, 2)) == Tensor3.zeros((2, 2, 2))
    e1 = (1, 0)
    assert materialize(Decomposition([e1], [e1], [e1]), (2, 2, 2)) == Tensor3((2, 2, 2), entries={(1, 1, 1): 1})
    e2 = (0, 1)
    three = Decomposition([e1, e1, e2], [e1, e2, e1], [e1, e2, e2])
    assert materialize(three, (2, 2, 2)) == w21


def test_materialize_accumulates_mod_p():
    F = FieldSpec(3)
    D = Decomposition([(1,), (1,), (1,)], [(1,), (1,), (1,)], [(1,), (1,), (1,)])
    assert materialize(D, (1, 1, 1), F).is_zero()


def test_decomposition_invariants():
    with pytest.raises(ValueError):
        Decomposition([(0, 0)], [(1,)], [(1,)])
    with pytest.raises(DimensionError):
        Decomposition([(1,)], [], [(1,)])
    with pytest.raises(DimensionError):
        materialize(Decomposition([(1, 0)], [(1,)], [(1,)]), (3, 1, 1))


def test_permute_and_transpose():
    T = Tensor3((1, 2, 3), entries={(1, 2, 3): 1})
    assert T.permute((3, 1, 2)).dims == (3, 1, 2)
    assert T.permute((3, 1, 2))[3, 1, 2] == 1
    assert T.transpose12().transpose12() == T
