"""Closed simply-connected oriented 4-manifolds as intersection-form data.

A :class:`FourManifold` is the tuple (form, w2, optional c1 lift) that the
rest of the package consumes: the unimodular intersection form on H^2, the
second Stiefel-Whitney class of the tangent bundle as a mod-2 vector in the
same basis, and optionally an integral lift of w2 used as the reference first
Chern class of the tangent bundle for almost-complex bookkeeping.

Simple connectivity and torsion-freeness are assumptions of the downstream
classification layer, not something checkable from this data; constructors
document them rather than verify them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .intmat import Vec, as_vector, vec_mod2
from .lattice import IntersectionForm, direct_sum, is_characteristic, is_unimodular, signature

STANDARD_NAMES = ("S4", "CP2", "CP2bar", "S2xS2")


@dataclass(frozen=True)
class FourManifold:
    # simply_connected is a declared assumption, never verified: it is not
    # computable from the stored data, but the downstream classification
    # layer is only valid under it, so the flag rides along into outputs.
    label: str
    form: IntersectionForm
    w2: Vec
    c1_tangent: Vec | None = None
    simply_connected: bool = True

    def __post_init__(self):
        object.__setattr__(self, "w2", as_vector(self.w2))
        if self.c1_tangent is not None:
            object.__setattr__(self, "c1_tangent", as_vector(self.c1_tangent))
        if not is_unimodular(self.form):
            raise ValidationError(
                f"{self.label}: intersection form is not unimodular"
            )
        if not is_characteristic(self.w2, self.form):
            raise ValidationError(f"{self.label}: w2 is not characteristic")
        if self.c1_tangent is not None:
            if len(self.c1_tangent) != self.form.rank:
                raise ValidationError(
                    f"{self.label}: c1_tangent length does not match rank"
                )
            if vec_mod2(self.c1_tangent) != self.w2:
                raise ValidationError(
                    f"{self.label}: c1_tangent is not an integral lift of w2"
                )

    @property
    def rank(self) -> int:
        return self.form.rank


def standard(name: str) -> FourManifold:
    """Catalog manifolds addressable by name in descriptors.

    S4 is the rank-0 case.  CP2 carries its genuine tangent data
    (c1 = 3 times the generator).  S2xS2 likewise (c1 = (2,2) in the
    hyperbolic basis).

    CP2bar admits no almost complex structure, so its ``c1_tangent`` slot is
    pure bookkeeping: it stores (1,), the class that the first Chern class of
    a complex one-point blowup restricts to on the exceptional summand.  That
    is the only value consistent with blowup bookkeeping: connected sum with
    CP2bar is the differentiable model of a point blowup, whose first Chern
    class is the old one minus the exceptional divisor class, and the
    exceptional divisor class is minus the preferred generator here.
    """
    if name == "S4":
        return FourManifold("S4", IntersectionForm(()), (), ())
    if name == "CP2":
        return FourManifold("CP2", IntersectionForm(((1,),)), (1,), (3,))
    if name == "CP2bar":
        return FourManifold("CP2bar", IntersectionForm(((-1,),)), (1,), (1,))
    if name == "S2xS2":
        return FourManifold(
            "S2xS2", IntersectionForm(((0, 1), (1, 0))), (0, 0), (2, 2)
        )
    raise ValidationError(f"unknown catalog manifold {name!r}")


def connected_sum(n1: FourManifold, n2: FourManifold) -> FourManifold:
    """Connected sum: block-sum form, concatenated w2 and c1 data.

    The c1 lift survives only when both summands carry one.
    """
    c1 = None
    if n1.c1_tangent is not None and n2.c1_tangent is not None:
        c1 = n1.c1_tangent + n2.c1_tangent
    label = n1.label if n2.rank == 0 and n2.label == "S4" else f"{n1.label} # {n2.label}"
    return FourManifold(
        label,
        direct_sum(n1.form, n2.form),
        n1.w2 + n2.w2,
        c1,
        n1.simply_connected and n2.simply_connected,
    )


def p1_number(n: FourManifold) -> int:
    """Pairing of the first Pontryagin class with the fundamental class.

    Equals three times the signature (signature theorem).
    """
    return 3 * signature(n.form)
