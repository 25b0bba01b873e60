"""Exact integer symmetric bilinear form algebra.

An :class:`IntersectionForm` models the cup-product pairing on the degree-two
cohomology of a closed oriented 4-manifold in a chosen basis: a symmetric
integer matrix ``Q`` with ``Q[i][j]`` the evaluation of the product of the
``i``-th and ``j``-th basis classes on the fundamental class.  Basis order is
part of the data; nothing here canonicalizes it.

All arithmetic is exact: Python integers for determinants and mod-2 work,
``fractions.Fraction`` for the diagonalization behind :func:`signature`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .intmat import Mat, Vec, as_matrix, as_vector, determinant as _det

MAX_EXHAUSTIVE_RANK = 20


@dataclass(frozen=True)
class IntersectionForm:
    """Symmetric integer bilinear form; rank 0 is allowed."""

    matrix: Mat

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_matrix(self.matrix))
        n = len(self.matrix)
        for row in self.matrix:
            if len(row) != n:
                raise ValidationError("form matrix is not square")
        for i in range(n):
            for j in range(i):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise ValidationError(
                        f"form matrix is not symmetric at ({i},{j})"
                    )

    @classmethod
    def from_rows(cls, rows) -> "IntersectionForm":
        return cls(as_matrix(rows))

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def entry(self, i: int, j: int) -> int:
        return self.matrix[i][j]

    def diagonal(self) -> Vec:
        return tuple(self.matrix[i][i] for i in range(self.rank))

    def matvec(self, x: Vec) -> Vec:
        if len(x) != self.rank:
            raise ValidationError("vector length does not match form rank")
        return tuple(sum(row[j] * x[j] for j in range(self.rank)) for row in self.matrix)

    def evaluate(self, x: Vec, y: Vec) -> int:
        """Pairing x^T Q y."""
        if len(x) != self.rank or len(y) != self.rank:
            raise ValidationError("vector length does not match form rank")
        return sum(x[i] * v for i, v in enumerate(self.matvec(y)))


def signature(q: IntersectionForm) -> int:
    """Positive minus negative inertia index, computed exactly.

    Symmetric (Lagrange) reduction over the rationals.  Pivot rule, fixed so
    the computation is deterministic: take the first nonzero diagonal entry;
    if the whole diagonal vanishes but the form does not, split off the
    hyperbolic plane on the first off-diagonal nonzero entry, which
    contributes one positive and one negative square.
    """
    m = [[Fraction(v) for v in row] for row in q.matrix]
    pos = neg = 0
    while m:
        n = len(m)
        k = next((i for i in range(n) if m[i][i] != 0), None)
        if k is not None:
            a = m[k][k]
            if a > 0:
                pos += 1
            else:
                neg += 1
            rest = [i for i in range(n) if i != k]
            m = [
                [m[i][j] - m[i][k] * m[k][j] / a for j in rest]
                for i in rest
            ]
            continue
        hyp = next(
            ((i, j) for i in range(n) for j in range(i + 1, n) if m[i][j] != 0),
            None,
        )
        if hyp is None:
            break
        k, l = hyp
        b = m[k][l]
        pos += 1
        neg += 1
        rest = [i for i in range(n) if i not in (k, l)]
        m = [
            [m[i][j] - (m[i][k] * m[j][l] + m[i][l] * m[j][k]) / b for j in rest]
            for i in rest
        ]
    return pos - neg


def determinant(q: IntersectionForm) -> int:
    return _det(q.matrix)


def is_unimodular(q: IntersectionForm) -> bool:
    return determinant(q) in (1, -1)


def direct_sum(q1: IntersectionForm, q2: IntersectionForm) -> IntersectionForm:
    """Block sum; models the intersection form of a connected sum."""
    r1, r2 = q1.rank, q2.rank
    rows = [list(row) + [0] * r2 for row in q1.matrix]
    rows += [[0] * r1 + list(row) for row in q2.matrix]
    return IntersectionForm.from_rows(rows)


def _check_mod2_vector(w, rank: int) -> Vec:
    w = as_vector(w)
    if len(w) != rank:
        raise ValidationError("w2 length does not match form rank")
    if any(v not in (0, 1) for v in w):
        raise ValidationError("w2 entries must be 0 or 1")
    return w


def is_characteristic(w, q: IntersectionForm) -> bool:
    """Wu condition: x.Q.x = w.Q.x (mod 2) for all x.

    Uses the closed form diag(Q) = Q.w (mod 2), which is equivalent because
    x.Q.x = sum_i Q[i][i] x_i (mod 2).
    """
    w = _check_mod2_vector(w, q.rank)
    qw = q.matvec(w)
    return all((q.matrix[i][i] - qw[i]) % 2 == 0 for i in range(q.rank))


def is_characteristic_exhaustive(w, q: IntersectionForm) -> bool:
    """Wu condition checked by running over all 2^rank mod-2 vectors.

    Independent of :func:`is_characteristic`; kept as a cross-check oracle.
    Refuses ranks above MAX_EXHAUSTIVE_RANK.
    """
    w = _check_mod2_vector(w, q.rank)
    if q.rank > MAX_EXHAUSTIVE_RANK:
        raise ValidationError(
            f"exhaustive characteristic check limited to rank {MAX_EXHAUSTIVE_RANK}"
        )
    for bits in range(2 ** q.rank):
        x = tuple((bits >> i) & 1 for i in range(q.rank))
        if (q.evaluate(x, x) - q.evaluate(w, x)) % 2 != 0:
            return False
    return True
