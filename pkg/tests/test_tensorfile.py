import random

import pytest

from conftest import random_tensor
from rankcert.errors import TensorFormatError
from rankcert.galois import FieldSpec
from rankcert.hypercube import TensorR, phi_inverse
from rankcert.tensor3 import Tensor3
from rankcert.tensorfile import format_tensor, parse_tensor, read_tensor, write_tensor


def test_format_example(w21):
    assert format_tensor(w21) == "tensor3 2 2 2 gf2\n1 1 1 1\n1 2 2 1\n2 1 2 1\n"
    H = TensorR(3, 2, FieldSpec(3), {(2, 2, 1): 2})
    assert format_tensor(H) == "tensorr 3 2 gf3\n2 2 1 2\n"


def test_round_trips(tmp_path, w22):
    rng = random.Random(41)
    samples = [w22, phi_inverse(w22, 2, 2), Tensor3.zeros((3, 1, 2))]
    samples += [random_tensor(rng, (rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4)), p)
                for p in (2, 3, 7) for _ in range(5)]
    for T in samples:
        text = format_tensor(T)
        assert parse_tensor(text) == T
        path = tmp_path / "t.txt"
        write_tensor(T, path)
        assert read_tensor(path) == T
        assert format_tensor(read_tensor(path)) == text


def test_comments_and_blank_lines():
    T = parse_tensor("# hi\n\ntensor3 1 1 1 gf5\n  # entry\n1 1 1 4\n")
    assert T.entries == {(1, 1, 1): 4} and T.field.p == 5


@pytest.mark.parametrize("text", [
    "",
    "matrix 2 2 gf2\n",
    "tensor3 2 2 gf2\n",
    "tensor3 2 2 2 gf4\n",
    "tensor3 2 2 2 f2\n",
    "tensor3 2 2 2 gf2\n1 1 3 1\n",
    "tensor3 2 2 2 gf2\n0 1 1 1\n",
    "tensor3 2 2 2 gf3\n1 1 1 3\n",
    "tensor3 2 2 2 gf3\n1 1 1 0\n",
    "tensor3 2 2 2 gf2\n1 1 1 1\n1 1 1 1\n",
    "tensor3 2 2 2 gf2\n1 1 1\n",
    "tensor3 2 2 2 gf2\n1 1 x 1\n",
    "tensorr 4 2 gf2\n",
    "tensorr 3 2 gf2\n1 1 1 1 1\n",
])
def test_malformed_inputs(text):
    with pytest.raises(TensorFormatError):
        parse_tensor(text)
