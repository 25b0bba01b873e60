"""Invariant systems of simply-connected 6-manifolds with torsion-free homology.

The classifying data for such a manifold is the tuple carried by
:class:`InvariantSystem`: the rank of H^2, the symmetric trilinear
cup-product tensor on H^2, the linear functional given by pairing against the
first Pontryagin class, the second Stiefel-Whitney class as a mod-2 vector,
the third Betti number, and (when meaningful) a reference first Chern class
for almost-complex comparisons.

Basis convention for sphere-bundle systems built by :func:`projectivize`:
slot 0 is always the fiberwise class ``a`` (the first Chern class of the dual
of the tautological line bundle), followed by the pullbacks of the base
classes in base order.  Every formula below is stated in this basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement

from .bundle import RankTwoBundle, c1_squared
from .errors import ValidationError
from .fourfold import FourManifold
from .intmat import Mat, Vec, as_vector, vec_mod2
from .lattice import signature


def triple_indices(rank: int) -> tuple[tuple[int, int, int], ...]:
    """All index triples i <= j <= k, in lexicographic order."""
    return tuple(combinations_with_replacement(range(rank), 3))


@dataclass(frozen=True)
class CohClass2:
    """A degree-two cohomology class, as coordinates in a system's basis."""

    coords: Vec

    def __post_init__(self):
        object.__setattr__(self, "coords", as_vector(self.coords))


def _coords(x) -> Vec:
    if isinstance(x, CohClass2):
        return x.coords
    return as_vector(x)


@dataclass(frozen=True)
class InvariantSystem:
    # classifiable records whether the classification hypotheses (simple
    # connectivity, torsion-free homology) were declared for everything this
    # system was built from; when False, equivalence verdicts are statements
    # about invariant systems only, not about diffeomorphism classes.
    rank: int
    mu: tuple[int, ...]  # entries over triple_indices(rank), in that order
    p1: Vec
    w2: Vec
    b3: int
    c1_class: Vec | None = None
    basis_labels: tuple[str, ...] = ()
    classifiable: bool = True

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(int(v) for v in self.mu))
        object.__setattr__(self, "p1", as_vector(self.p1))
        object.__setattr__(self, "w2", as_vector(self.w2))
        if self.c1_class is not None:
            object.__setattr__(self, "c1_class", as_vector(self.c1_class))
        if not self.basis_labels:
            object.__setattr__(
                self, "basis_labels", tuple(f"e{i + 1}" for i in range(self.rank))
            )
        r = self.rank
        if len(self.mu) != len(triple_indices(r)):
            raise ValidationError("mu entry count does not match rank")
        if len(self.p1) != r or len(self.w2) != r or len(self.basis_labels) != r:
            raise ValidationError("p1/w2/basis label length does not match rank")
        if any(v not in (0, 1) for v in self.w2):
            raise ValidationError("w2 entries must be 0 or 1")
        if self.b3 < 0:
            raise ValidationError("b3 must be nonnegative")
        if self.c1_class is not None:
            if len(self.c1_class) != r:
                raise ValidationError("c1_class length does not match rank")
            if vec_mod2(self.c1_class) != self.w2:
                raise ValidationError("c1_class is not an integral lift of w2")

    # -- trilinear tensor access ------------------------------------------

    @cached_property
    def _mu_index(self) -> dict[tuple[int, int, int], int]:
        return {ijk: pos for pos, ijk in enumerate(triple_indices(self.rank))}

    def mu_value(self, i: int, j: int, k: int) -> int:
        """Fully symmetric accessor: indices may come in any order."""
        key = tuple(sorted((i, j, k)))
        return self.mu[self._mu_index[key]]

    def mu_items(self) -> tuple[tuple[tuple[int, int, int], int], ...]:
        return tuple(zip(triple_indices(self.rank), self.mu))

    @cached_property
    def _mu_dense(self) -> tuple:
        r = self.rank
        return tuple(
            tuple(tuple(self.mu_value(i, j, k) for k in range(r)) for j in range(r))
            for i in range(r)
        )

    def mu_eval(self, x, y, z) -> int:
        """Trilinear evaluation on coordinate vectors or :class:`CohClass2`."""
        x, y, z = _coords(x), _coords(y), _coords(z)
        r = self.rank
        if len(x) != r or len(y) != r or len(z) != r:
            raise ValidationError("vector length does not match system rank")
        dense = self._mu_dense
        total = 0
        for i, xi in enumerate(x):
            if not xi:
                continue
            plane = dense[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                row = plane[j]
                total += xi * yj * sum(zk * row[k] for k, zk in enumerate(z) if zk)
        return total

    def cubic(self, x) -> int:
        return self.mu_eval(x, x, x)

    def p1_pairing(self, x) -> int:
        x = _coords(x)
        return sum(a * b for a, b in zip(self.p1, x))

    def basis_class(self, label: str) -> CohClass2:
        """The basis vector carrying the given label, as a class."""
        if label not in self.basis_labels:
            raise ValidationError(f"no basis slot labeled {label!r}")
        pos = self.basis_labels.index(label)
        return CohClass2(tuple(1 if i == pos else 0 for i in range(self.rank)))

    def c1_as_class(self) -> CohClass2:
        """The reference first Chern class; errors when absent."""
        if self.c1_class is None:
            raise ValidationError("system carries no reference c1 class")
        return CohClass2(self.c1_class)


def make_system(
    rank: int,
    entries: dict[tuple[int, int, int], int],
    p1,
    w2,
    b3: int = 0,
    c1_class=None,
    basis_labels=(),
    classifiable: bool = True,
) -> InvariantSystem:
    """Build a system from a sparse {sorted triple: value} dictionary."""
    table = {}
    for ijk, v in entries.items():
        key = tuple(sorted(ijk))
        if table.get(key, v) != v:
            raise ValidationError(f"conflicting mu values for triple {key}")
        table[key] = int(v)
    mu = tuple(table.get(ijk, 0) for ijk in triple_indices(rank))
    return InvariantSystem(
        rank, mu, tuple(p1), tuple(w2), b3, c1_class, tuple(basis_labels), classifiable
    )


def projectivize(base: FourManifold, e: RankTwoBundle) -> InvariantSystem:
    """Invariant system of the 2-sphere bundle of lines in a rank-two bundle.

    The cohomology ring is generated over the base by the fiberwise class
    ``a`` subject to a^2 = -c1(E).a - c2(E) (pulled back coefficients), which
    gives, in the basis (a, y_1, ..., y_r):

      mu(a,a,a)     = c1(E).c1(E) - c2(E)
      mu(a,a,y_i)   = -(Q c1(E))_i
      mu(a,y_i,y_j) = Q_ij
      mu(y_i,y_j,y_k) = 0

    The tangent bundle splits off the pulled-back base tangent bundle, and
    the fiberwise summand is (dual tautological) tensor (pullback of E) minus
    a trivial line, whence

      w2 = (0, base w2 + c1(E) mod 2)
      p1 pairing = (3 sig(base) + c1(E).c1(E) - 4 c2(E), 0, ..., 0)
      reference c1 = 2a + pullback(base c1 lift + c1(E))   [when the base
                     carries a c1 lift; absent otherwise]
    """
    if e.base != base:
        raise ValidationError("bundle base does not match the given manifold")
    q = base.form
    r = base.rank
    qc1 = q.matvec(e.c1)
    entries: dict[tuple[int, int, int], int] = {(0, 0, 0): c1_squared(e) - e.c2}
    for i in range(r):
        entries[(0, 0, i + 1)] = -qc1[i]
        for j in range(i, r):
            entries[(0, i + 1, j + 1)] = q.entry(i, j)
    p1 = (3 * signature(q) + c1_squared(e) - 4 * e.c2,) + (0,) * r
    w2 = (0,) + tuple((a + b) % 2 for a, b in zip(base.w2, e.c1))
    c1_class = None
    if base.c1_tangent is not None:
        c1_class = (2,) + tuple(a + b for a, b in zip(base.c1_tangent, e.c1))
    labels = ("a",) + tuple(f"y{i + 1}" for i in range(r))
    return make_system(
        r + 1, entries, p1, w2, 0, c1_class, labels, classifiable=base.simply_connected
    )


def euler_characteristic(s: InvariantSystem) -> int:
    """2 + 2 b2 - b3 for a simply-connected 6-manifold with torsion-free homology."""
    return 2 + 2 * s.rank - s.b3


def cp3bar_system() -> InvariantSystem:
    """Frozen invariants of orientation-reversed complex projective 3-space.

    Derivation, recorded once as the audited source of these constants: the
    total Chern class of complex projective 3-space is (1+g)^4 for the
    hyperplane class g, so c1 = 4g, c2 = 6g^2, p1 = c1^2 - 2c2 = 4g^2, and
    g^3 evaluates to 1.  Reversing the orientation negates the fundamental
    class.  Writing z' for the degree-two generator normalized so that the
    cube of z' evaluates to -1 (the convention used throughout this package),
    the p1 pairing against z' is -4 and w2 = 0 since 4g is even.

    A point blowup of a complex 3-fold is differentiably a connected sum with
    this manifold, and its first Chern class restricts to -2 times the
    exceptional divisor class on the new summand.  The exceptional divisor
    class cubes to +1, hence equals -z' in this normalization, so the
    restriction is +2.z'; the reference c1 stored here is therefore (2,).
    """
    return make_system(
        1,
        {(0, 0, 0): -1},
        p1=(-4,),
        w2=(0,),
        b3=0,
        c1_class=(2,),
        basis_labels=("z'",),
    )


def _fresh_label(existing: tuple[str, ...], stem: str) -> str:
    if stem not in existing:
        return stem
    n = 2
    while f"{stem}{n}" in existing:
        n += 1
    return f"{stem}{n}"


def blowup_point(s: InvariantSystem) -> InvariantSystem:
    """Blow up a point: block sum with :func:`cp3bar_system`.

    The new class has no mixed cup products with the old ones; p1 and w2
    extend by the frozen constants; the reference c1, when present, extends
    by +2 on the new slot (see the derivation in :func:`cp3bar_system`).
    """
    extra = cp3bar_system()
    r = s.rank
    entries = {ijk: v for ijk, v in s.mu_items()}
    entries[(r, r, r)] = extra.mu_value(0, 0, 0)
    c1_class = None
    if s.c1_class is not None:
        c1_class = s.c1_class + extra.c1_class
    labels = s.basis_labels + (_fresh_label(s.basis_labels, "z'"),)
    return make_system(
        r + 1,
        entries,
        s.p1 + extra.p1,
        s.w2 + extra.w2,
        s.b3,
        c1_class,
        labels,
        classifiable=s.classifiable,
    )


def sum_with_s6(s: InvariantSystem) -> InvariantSystem:
    """Connected sum with the 6-sphere changes nothing."""
    return s


def twist_witness(base: FourManifold, e: RankTwoBundle, l) -> Mat:
    """Basis change relating the systems of a bundle and its twist.

    The projectivization does not change under tensoring by a line bundle;
    on systems the identification fixes the base slots and maps the fiber
    class by  a |-> a + sum_i l_i y_i.  The sign of the l-term was fixed once
    by checking both candidates on a single instance (the complex projective
    plane with the trivial bundle, l = (1)); the tests re-derive it.

    Returns the matrix (rows, acting on coordinate columns) of the witness
    from projectivize(base, e) to projectivize(base, twist(e, l)).
    """
    l = as_vector(l)
    if len(l) != base.rank:
        raise ValidationError("twist vector length does not match base rank")
    r = base.rank + 1
    rows = [[0] * r for _ in range(r)]
    rows[0][0] = 1
    for i, li in enumerate(l):
        rows[i + 1][0] = li
        rows[i + 1][i + 1] = 1
    return tuple(tuple(row) for row in rows)
