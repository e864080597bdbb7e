import itertools
import random

import pytest
import sympy

from conftest import random_tensor
from oracles import brute_matrix_rank
from rankcert.charmat import (CharMatrix, ExtField, col_rank, generic_rank, is_nondegenerate,
                              row_rank)
from rankcert.galois import FieldSpec, mat_rank, MatF
from rankcert.tensor3 import Tensor3


def _minor_rank_oracle(T: Tensor3) -> int:
    """Largest r with an r x r minor of A(s) that is nonzero mod p (sympy determinants over Z[s])."""
    s = sympy.symbols(f"s1:{T.n3 + 1}")
    A = sympy.zeros(T.n1, T.n2)
    for (i, j, k), v in T.items():
        A[i - 1, j - 1] += v * s[k - 1]
    p = T.field.p
    for r in range(min(T.n1, T.n2), 0, -1):
        for rows in itertools.combinations(range(T.n1), r):
            for cols in itertools.combinations(range(T.n2), r):
                det = sympy.expand(A.extract(list(rows), list(cols)).det())
                if det != 0 and sympy.Poly(det, *s, modulus=p).as_expr() != 0:
                    return r
    return 0


def _coefficient_rows(T: Tensor3) -> list[list[int]]:
    """Row i of A(s) as its coefficient vector indexed by (j, k)."""
    rows = [[0] * (T.n2 * T.n3) for _ in range(T.n1)]
    for (i, j, k), v in T.items():
        rows[i - 1][(j - 1) * T.n3 + (k - 1)] = v
    return rows


ROW_VECTOR = Tensor3.from_slices([[[1, 0]], [[0, 1]]])  # A(s) = [s1 s2]


@pytest.mark.parametrize("method", ["symbolic", "randomized"])
def test_row_vector_example(method):
    assert col_rank(ROW_VECTOR, method) == 2
    assert row_rank(ROW_VECTOR, method) == 1
    assert generic_rank(ROW_VECTOR, method) == 1


@pytest.mark.parametrize("method", ["symbolic", "randomized"])
@pytest.mark.parametrize("m", [1, 3, 5])
def test_scaled_identity(method, m):
    T = Tensor3.identity_slice(m)
    assert row_rank(T, method) == col_rank(T, method) == generic_rank(T, method) == m


@pytest.mark.parametrize("method", ["symbolic", "randomized"])
def test_level_one_ranks(w21, method):
    assert row_rank(w21, method) == col_rank(w21, method) == 2
    # s = (1, 1) gives [[1, 1], [1, 0]], already rank 2
    assert mat_rank(MatF.from_rows(CharMatrix(w21).evaluate([1, 1]))) == 2


def test_charmatrix_views(w21):
    C = CharMatrix(w21)
    assert C.var_count == 2
    assert C.shape == (2, 2)
    assert C.linear_form(1, 2) == {2: 1}
    assert C.linear_form(2, 2) == {}
    assert C.transpose().base == w21.transpose12()


def _corpus(seed: int, count: int):
    rng = random.Random(seed)
    for _ in range(count):
        p = rng.choice([2, 2, 3, 5])
        dims = (rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 3))
        yield random_tensor(rng, dims, p, density=rng.choice([0.2, 0.4, 0.7]))


def test_row_col_rank_against_coefficient_rows():
    for T in _corpus(5, 60):
        p = T.field.p
        if T.n2 * T.n3 <= 8:
            assert row_rank(T, "symbolic") == brute_matrix_rank(_coefficient_rows(T), p)
        assert row_rank(T, "symbolic") == mat_rank(MatF.from_rows(_coefficient_rows(T), T.field, T.n2 * T.n3))
        assert col_rank(T, "symbolic") == mat_rank(MatF.from_rows(_coefficient_rows(T.transpose12()), T.field, T.n1 * T.n3))


def test_generic_rank_against_minors():
    for T in _corpus(6, 40):
        if min(T.n1, T.n2) > 3:
            continue
        assert generic_rank(T, "symbolic") == _minor_rank_oracle(T), T.entries


def test_routes_agree_on_random_corpus():
    for seed, T in enumerate(_corpus(7, 60)):
        for fn in (row_rank, col_rank, generic_rank):
            assert fn(T, "symbolic") == fn(T, "randomized", seed=seed), (fn.__name__, T.entries)


def test_specialization_never_exceeds_generic():
    rng = random.Random(8)
    for T in _corpus(8, 60):
        p = T.field.p
        g = generic_rank(T, "symbolic")
        assert g <= min(row_rank(T), col_rank(T))
        for _ in range(5):
            point = [rng.randrange(p) for _ in range(T.n3)]
            ev = MatF.from_rows(CharMatrix(T).evaluate(point), T.field, T.n2)
            assert mat_rank(ev) <= g


def test_randomized_route_is_seed_deterministic():
    T = random_tensor(random.Random(9), (4, 4, 3))
    assert generic_rank(T, "randomized", seed=1) == generic_rank(T, "randomized", seed=1)
    assert row_rank(T, "randomized", seed=2) == row_rank(T, "randomized", seed=2)


def test_unknown_method():
    with pytest.raises(ValueError):
        row_rank(ROW_VECTOR, "numeric")


def test_nondegeneracy_examples(w21):
    assert is_nondegenerate(Tensor3.identity_slice(4)).nondegenerate
    same = Tensor3.from_slices([[[1, 1], [0, 1]], [[1, 1], [0, 1]]])
    rep = is_nondegenerate(same)
    assert not rep.slices_independent and not rep.nondegenerate
    assert is_nondegenerate(w21).nondegenerate
    assert not is_nondegenerate(Tensor3.zeros((2, 2, 2)))
    assert is_nondegenerate(ROW_VECTOR).nondegenerate
    repeated_row = Tensor3.from_slices([[[1, 0], [1, 0]], [[0, 1], [0, 1]]])  # [[s1, s2], [s1, s2]]
    rep = is_nondegenerate(repeated_row)
    assert rep.slices_independent and rep.full_col_rank and not rep.full_row_rank
    assert rep.to_dict() == {"slices_independent": True, "full_row_rank": False,
                             "full_col_rank": True, "nondegenerate": False}


def _irreducible_by_trial_division(f: list[int], p: int) -> bool:
    deg = len(f) - 1
    fx = sympy.Poly(list(reversed(f)), sympy.Symbol("x"), modulus=p)
    return fx.is_irreducible and fx.degree() == deg


@pytest.mark.parametrize("p,min_order", [(2, 16), (3, 30), (5, 100), (2, 1 << 20), (3, 1 << 20)])
def test_extension_field_modulus_irreducible(p, min_order):
    K = ExtField(p, min_order)
    assert K.q >= min_order and K.q == p ** K.e
    assert _irreducible_by_trial_division(K.modulus, p)


def test_extension_field_arithmetic():
    for p, order in ((2, 16), (3, 27)):
        K = ExtField(p, order)
        elems = range(K.q)
        for a in elems:
            if a:
                assert K.mul(a, K.inv(a)) == 1
            assert K.sub(K.add(a, 7 % K.q), 7 % K.q) == a
        for a, b, c in itertools.islice(itertools.product(elems, repeat=3), 0, None, 37):
            assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
            assert K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c))
    K = ExtField(2)
    rng = random.Random(0)
    for _ in range(50):
        a = rng.randrange(1, K.q)
        assert K.mul(a, K.inv(a)) == 1


def test_large_prime_uses_base_field():
    K = ExtField(1_048_583)
    assert K.e == 1
    assert K.mul(5, K.inv(5)) == 1
    T = Tensor3.identity_slice(3, FieldSpec(1_048_583))
    assert generic_rank(T, "randomized") == 3
