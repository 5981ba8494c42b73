import pytest

from htriang.homology import (IntMatrix, determinant, homology, integer_kernel, smith_normal_form,
                              solve_integer_linear)


def test_snf_textbook_example():
    A = IntMatrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    s = smith_normal_form(A)
    assert s.diagonal == [2, 6, 12]
    assert s.verify(A)


def test_snf_zero_and_rectangular():
    for rows in ([[0, 0, 0]], [[0], [0]], [[3, 6, 9]], [[4], [6]]):
        A = IntMatrix(rows)
        assert smith_normal_form(A).verify(A)
    assert smith_normal_form(IntMatrix([[4], [6]])).diagonal == [2]


def test_determinant():
    assert determinant(IntMatrix([[2, 1], [7, 4]])) == 1
    assert determinant(IntMatrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]])) == -1


def test_solve_integer_linear():
    A = IntMatrix([[2, 0], [0, 3]])
    assert solve_integer_linear(A, [4, 9]) == [2, 3]
    assert solve_integer_linear(A, [1, 0]) is None
    with pytest.raises(ValueError):
        solve_integer_linear(A, [1])


def test_integer_kernel():
    A = IntMatrix([[1, 2, 3], [2, 4, 6]])
    ker = integer_kernel(A)
    assert len(ker) == 2
    for v in ker:
        assert A.apply(v) == [0, 0]


@pytest.mark.parametrize("name, h", [
    ("fig8", ["Z", "0", "0", "Z"]),
    ("s2xs1", ["Z", "Z", "Z", "Z"]),
    ("l31", ["Z", "Z/3", "0", "Z"]),
])
def test_bundled_homology(examples, name, h):
    assert [str(homology(examples[name], k)) for k in range(4)] == h


def test_homology_degree_range(examples):
    with pytest.raises(ValueError):
        homology(examples["fig8"], 4)
