import random

import pytest

from conitop import (
    IntersectionForm,
    ValidationError,
    direct_sum,
    is_characteristic,
    is_characteristic_exhaustive,
    is_unimodular,
    signature,
)
from conitop.lattice import determinant

from oracles import random_symmetric_rows, signature_oracle_small

HYPERBOLIC = IntersectionForm.from_rows([[0, 1], [1, 0]])


def test_signature_examples():
    assert signature(IntersectionForm.from_rows([[1]])) == 1
    assert signature(IntersectionForm.from_rows([[-1]])) == -1
    # hyperbolic plane: eigenvalues +-1, so the sign count is 0
    assert signature_oracle_small([[0, 1], [1, 0]]) == 0
    assert signature(HYPERBOLIC) == 0
    assert signature(IntersectionForm(())) == 0


def test_signature_matches_eigen_oracle_exhaustively():
    span = range(-3, 4)
    for a in span:
        assert signature(IntersectionForm.from_rows([[a]])) == signature_oracle_small([[a]])
    for a in span:
        for b in span:
            for c in span:
                rows = [[a, b], [b, c]]
                assert signature(IntersectionForm.from_rows(rows)) == signature_oracle_small(rows)


E8_ROWS = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, 0),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, -1),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, 0, 0, -1, 0, 0, 2),
)


def test_e8_form_known_values():
    # the even positive-definite rank-8 unimodular form: det 1, signature 8
    q = IntersectionForm.from_rows(E8_ROWS)
    assert determinant(q) == 1
    assert signature(q) == 8
    assert is_characteristic((0,) * 8, q)
    neg = IntersectionForm.from_rows([[-v for v in row] for row in E8_ROWS])
    assert signature(neg) == -8
    assert signature(direct_sum(q, neg)) == 0


def test_signature_even_form_with_zero_diagonal():
    # forces the hyperbolic-split pivot path at rank 4
    rows = [
        [0, 1, 0, 0],
        [1, 0, 0, 0],
        [0, 0, 0, 2],
        [0, 0, 2, 0],
    ]
    assert signature(IntersectionForm.from_rows(rows)) == 0


def test_signature_additivity_random():
    rng = random.Random(20260808)
    for _ in range(200):
        q1 = IntersectionForm(random_symmetric_rows(rng, rng.randint(0, 4)))
        q2 = IntersectionForm(random_symmetric_rows(rng, rng.randint(0, 4)))
        assert signature(direct_sum(q1, q2)) == signature(q1) + signature(q2)


def test_unimodular_examples():
    assert is_unimodular(IntersectionForm.from_rows([[1]]))
    assert not is_unimodular(IntersectionForm.from_rows([[2]]))
    # cofactor expansion of the hyperbolic form gives determinant -1
    assert determinant(HYPERBOLIC) == -1
    assert is_unimodular(HYPERBOLIC)
    assert is_unimodular(IntersectionForm(()))


def test_direct_sum_examples():
    plus = IntersectionForm.from_rows([[1]])
    minus = IntersectionForm.from_rows([[-1]])
    assert direct_sum(plus, minus).matrix == ((1, 0), (0, -1))
    q = HYPERBOLIC
    assert direct_sum(q, IntersectionForm(())).matrix == q.matrix
    assert direct_sum(IntersectionForm(()), q).matrix == q.matrix
    two_minus = direct_sum(minus, minus)
    assert two_minus.matrix == ((-1, 0), (0, -1))
    assert signature(two_minus) == -2


def test_characteristic_examples():
    plus = IntersectionForm.from_rows([[1]])
    assert is_characteristic((1,), plus)
    assert not is_characteristic((0,), plus)
    assert is_characteristic_exhaustive((0, 0), HYPERBOLIC)
    assert is_characteristic((0, 0), HYPERBOLIC)
    assert is_characteristic((), IntersectionForm(()))


def test_characteristic_closed_form_agrees_with_exhaustive():
    rng = random.Random(404)
    for _ in range(120):
        rank = rng.randint(0, 6)
        q = IntersectionForm(random_symmetric_rows(rng, rank))
        w = tuple(rng.randint(0, 1) for _ in range(rank))
        assert is_characteristic(w, q) == is_characteristic_exhaustive(w, q)


def test_characteristic_dimension_mismatch():
    with pytest.raises(ValidationError):
        is_characteristic((1, 0), IntersectionForm.from_rows([[1]]))
    with pytest.raises(ValidationError):
        is_characteristic((2,), IntersectionForm.from_rows([[1]]))


def test_form_validation():
    with pytest.raises(ValidationError):
        IntersectionForm.from_rows([[0, 1], [2, 0]])
    with pytest.raises(ValidationError):
        IntersectionForm.from_rows([[0, 1]])


def test_evaluate_and_matvec():
    q = HYPERBOLIC
    assert q.matvec((1, 2)) == (2, 1)
    assert q.evaluate((1, 2), (3, 4)) == 1 * 4 + 2 * 3
    with pytest.raises(ValidationError):
        q.evaluate((1,), (1, 0))
