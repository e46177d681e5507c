"""Closed-form outer bound on the capacity region.

Each term is a sum of ``log2 det(I + F F^H)`` pieces.  Every Schur-complement
expression of the form ``I + rho_a A A^H - ... (I + rho_b B B^H)^{-1} ...``
equals ``I + rho_a A P(rho_b, B) A^H`` with ``P(rho, B) = (I + rho B^H B)^{-1}``,
so each piece is evaluated from a Gram factor built with
:func:`mimoic.hermitian.capped_sqrt`.  No large matrix is ever formed or
subtracted, which keeps the terms accurate at link gains near ``1e24``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .channel import ChannelInstance
from .geometry import RateConstraint, RateRegion2D, region_from_constraints
from .hermitian import capped_sqrt, logdet2_gram

__all__ = ["OuterTerms", "TERM_DIRECTIONS", "outer_terms", "outer_region", "outer_constraints"]

TERM_DIRECTIONS = {
    "i1": (1, 0),
    "i2": (0, 1),
    "i3": (1, 1),
    "i4": (1, 1),
    "i5": (1, 1),
    "i6": (1, 1),
    "i7": (2, 1),
    "i8": (1, 2),
    "i9": (2, 1),
    "i10": (1, 2),
}


@dataclass(frozen=True)
class OuterTerms:
    """Right-hand sides of the ten outer-bound constraints, in bits."""

    i1: float
    i2: float
    i3: float
    i4: float
    i5: float
    i6: float
    i7: float
    i8: float
    i9: float
    i10: float

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def direction(self, name: str) -> tuple[int, int]:
        return TERM_DIRECTIONS[name]


def _lg(*blocks) -> float:
    return logdet2_gram(np.hstack(blocks))


def outer_terms(ch: ChannelInstance) -> OuterTerms:
    """Evaluate the ten outer-bound terms for ``ch``."""
    a11 = math.sqrt(ch.rho11) * ch.h11
    a12 = math.sqrt(ch.rho12) * ch.h12
    a21 = math.sqrt(ch.rho21) * ch.h21
    a22 = math.sqrt(ch.rho22) * ch.h22
    # P(rho_ij, H_ij)^{1/2}: what is left of user i's input after receiver j
    # has seen it through the cross link (or through the direct link for p11/p22)
    p1, _ = capped_sqrt(ch.h12, ch.rho12)
    p2, _ = capped_sqrt(ch.h21, ch.rho21)
    p11, _ = capped_sqrt(ch.h11, ch.rho11)
    p22, _ = capped_sqrt(ch.h22, ch.rho22)
    g1 = np.vstack([a11, a12])
    g2 = np.vstack([a21, a22])

    direct1 = _lg(a11)
    direct2 = _lg(a22)
    rx1_all = _lg(a11, a21)
    rx2_all = _lg(a22, a12)
    rx1_priv = _lg(a11 @ p1)
    rx2_priv = _lg(a22 @ p2)
    rx1_mixed = _lg(a11 @ p1, a21)
    rx2_mixed = _lg(a22 @ p2, a12)
    c12, c21 = ch.c12, ch.c21

    return OuterTerms(
        i1=direct1 + min(_lg(a12 @ p11), c21),
        i2=direct2 + min(_lg(a21 @ p22), c12),
        i3=rx1_mixed + rx2_mixed + c12 + c21,
        i4=rx1_priv + rx2_all + c12,
        i5=rx2_priv + rx1_all + c21,
        i6=_lg(g1, g2),
        i7=rx1_priv + rx2_mixed + rx1_all + c12 + c21,
        i8=rx2_priv + rx1_mixed + rx2_all + c12 + c21,
        i9=_lg(g2 @ p2, g1) + rx1_all + c21,
        i10=_lg(g1 @ p1, g2) + rx2_all + c12,
    )


def outer_constraints(t: OuterTerms) -> list[RateConstraint]:
    """The five binding constraints of the outer region."""
    return [
        RateConstraint(1, 0, t.i1),
        RateConstraint(0, 1, t.i2),
        RateConstraint(1, 1, min(t.i3, t.i4, t.i5, t.i6)),
        RateConstraint(2, 1, min(t.i7, t.i9)),
        RateConstraint(1, 2, min(t.i8, t.i10)),
    ]


def outer_region(ch: ChannelInstance) -> RateRegion2D:
    """Outer bound as a polygon in the nonnegative quadrant."""
    return region_from_constraints(outer_constraints(outer_terms(ch)))
