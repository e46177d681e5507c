"""Two-round cooperative scheme: covariance split, quantization, strategy regions.

Each transmitter sends ``X_i = X_ic + X_ip`` with independent Gaussian parts.
The private covariance ``Q_ip = (I + rho_ij H_ij^H H_ij)^{-1}`` makes the
private signal arrive at the unintended receiver below the noise floor.

Mutual informations are evaluated with a small Gaussian calculus: every
observation is a sum of independent sources seen through known column blocks
plus diagonal noise, so ``h(B | C)`` is ``log2 det(D + F F^H)`` over the
sources not in ``C`` and ``I(A; B | C) = h(B | C) - h(B | A, C)``.  The
``log2(pi e)`` constants cancel in every difference and are omitted.

For the quantized observation ``Yq2 = Y2 + Zq2`` with ``Zq2 ~ CN(0, Delta)``
and ``Delta = I + rho22 H22 Q2p H22^H``, ``Zq2`` is written as fresh unit
noise plus ``sqrt(rho22) H22 Q2p^{1/2} w``.  The extra source ``w`` is only
present in ``Yq2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelInstance, swap_users
from .geometry import (
    RateConstraint,
    RateRegion2D,
    hull_union,
    region_from_constraints,
)
from .hermitian import capped_sqrt, logdet2_gram
from .outer import outer_terms

__all__ = [
    "CovarianceSplit",
    "QuantizationPlan",
    "StrategyRegion",
    "GaussianObservations",
    "ORDERS",
    "STRATEGY_LABELS",
    "covariance_split",
    "quantization_plan",
    "strategy_constraints",
    "strategy_region",
    "combined_achievable",
    "guaranteed_inner_constraints",
    "guaranteed_inner_region",
]

ORDERS = ("two_one_two", "one_two_one")
STRATEGY_LABELS = tuple(str(k) for k in range(20, 36))


@dataclass(frozen=True)
class CovarianceSplit:
    """Private/common covariances and their square roots."""

    q1p: np.ndarray
    q1c: np.ndarray
    q2p: np.ndarray
    q2c: np.ndarray
    q1p_half: np.ndarray
    q1c_half: np.ndarray
    q2p_half: np.ndarray
    q2c_half: np.ndarray


@dataclass(frozen=True)
class QuantizationPlan:
    delta: np.ndarray
    xi: float


@dataclass(frozen=True)
class StrategyRegion:
    order: str
    constraints: tuple  # (label, RateConstraint) pairs in lemma order
    region: RateRegion2D


def covariance_split(ch: ChannelInstance) -> CovarianceSplit:
    """Split each input so its private part is capped at the cross receiver."""
    p1, c1 = capped_sqrt(ch.h12, ch.rho12)
    p2, c2 = capped_sqrt(ch.h21, ch.rho21)
    q1p = p1 @ p1
    q2p = p2 @ p2
    q1p = 0.5 * (q1p + q1p.conj().T)
    q2p = 0.5 * (q2p + q2p.conj().T)
    return CovarianceSplit(
        q1p=q1p,
        q1c=np.eye(ch.m1) - q1p,
        q2p=q2p,
        q2c=np.eye(ch.m2) - q2p,
        q1p_half=p1,
        q1c_half=c1,
        q2p_half=p2,
        q2c_half=c2,
    )


def quantization_plan(ch: ChannelInstance, split: CovarianceSplit, order: str = "two_one_two") -> QuantizationPlan:
    """Distortion ``Delta`` at the quantizing receiver and the rate loss ``xi``.

    For ``one_two_one`` receiver 1 quantizes and the roles are mirrored.
    """
    if order == "one_two_one":
        ch = swap_users(ch)
        split = CovarianceSplit(
            split.q2p, split.q2c, split.q1p, split.q1c,
            split.q2p_half, split.q2c_half, split.q1p_half, split.q1c_half,
        )
    elif order != "two_one_two":
        raise ValueError(f"unknown order {order!r}")
    a22 = math.sqrt(ch.rho22) * ch.h22
    priv = a22 @ split.q2p_half
    delta = np.eye(ch.n2) + priv @ priv.conj().T
    # L(Q2p, sqrt(rho21) H21^H) = Q2p^{1/2} P(rho21, H21 Q2p^{1/2}) Q2p^{1/2}
    keep, _ = capped_sqrt(ch.h21 @ split.q2p_half, ch.rho21)
    xi = logdet2_gram(np.hstack([priv, priv @ keep]), np.full(ch.n2, 2.0)) - logdet2_gram(priv)
    return QuantizationPlan(delta=0.5 * (delta + delta.conj().T), xi=max(xi, 0.0))


class GaussianObservations:
    """Entropies of ``Y1``, ``Y2`` and ``(Y1, Yq2)`` given subsets of sources.

    Sources are ``"1c", "1p", "2c", "2p"`` (the four input parts) and ``"w"``
    (the signal-shaped part of the quantization noise).
    """

    def __init__(self, ch: ChannelInstance, split: CovarianceSplit):
        a11 = math.sqrt(ch.rho11) * ch.h11
        a12 = math.sqrt(ch.rho12) * ch.h12
        a21 = math.sqrt(ch.rho21) * ch.h21
        a22 = math.sqrt(ch.rho22) * ch.h22
        halves = {"1c": split.q1c_half, "1p": split.q1p_half, "2c": split.q2c_half, "2p": split.q2p_half}
        at_rx1 = {"1c": a11, "1p": a11, "2c": a21, "2p": a21}
        at_rx2 = {"1c": a12, "1p": a12, "2c": a22, "2p": a22}
        y1 = {s: at_rx1[s] @ halves[s] for s in halves}
        y2 = {s: at_rx2[s] @ halves[s] for s in halves}
        joint = {s: np.vstack([y1[s], y2[s]]) for s in halves}
        joint["w"] = np.vstack([np.zeros((ch.n1, ch.m2), complex), a22 @ split.q2p_half])
        self._obs = {
            "y1": (y1, np.ones(ch.n1)),
            "y2": (y2, np.ones(ch.n2)),
            "y1q2": (joint, np.concatenate([np.ones(ch.n1), np.full(ch.n2, 2.0)])),
        }
        self._cache: dict = {}

    def entropy(self, obs: str, given=()) -> float:
        """``h(obs | given)`` in bits, without the ``log2(pi e)`` constant."""
        blocks, noise = self._obs[obs]
        key = (obs, frozenset(given))
        if key not in self._cache:
            active = [blocks[s] for s in sorted(blocks) if s not in key[1]]
            factor = np.hstack(active) if active else np.zeros((noise.shape[0], 0), complex)
            self._cache[key] = logdet2_gram(factor, noise)
        return self._cache[key]

    def mi(self, what, obs: str, given=()) -> float:
        """``I(what; obs | given)`` in bits."""
        given = set(given)
        return self.entropy(obs, given) - self.entropy(obs, given | set(what))


# source groups
X1 = ("1c", "1p")
X2 = ("2c", "2p")
X1C = ("1c",)
X2C = ("2c",)


def strategy_constraints(ch: ChannelInstance, order: str = "two_one_two") -> tuple:
    """The sixteen evaluated bounds of one processing order.

    Returns ``(label, RateConstraint)`` pairs labelled ``"20"`` to ``"35"``.
    For ``one_two_one`` the channel is relabelled, the ``two_one_two`` bounds
    are evaluated, and the rate coefficients are swapped back.
    """
    if order == "one_two_one":
        mirrored = strategy_constraints(swap_users(ch), "two_one_two")
        return tuple((k, RateConstraint(c.b, c.a, c.c)) for k, c in mirrored)
    if order != "two_one_two":
        raise ValueError(f"unknown order {order!r}")
    split = covariance_split(ch)
    g = GaussianObservations(ch, split)
    xi = quantization_plan(ch, split).xi
    c12 = ch.c12
    c21q = max(ch.c21 - xi, 0.0)
    mi = g.mi

    own1 = mi(X1, "y1", X1C + X2C)  # I(X1; Y1 | X1c, X2c)
    own2 = mi(X2, "y2", X1C + X2C)  # I(X2; Y2 | X1c, X2c)
    rx2_c = mi(X1C + X2, "y2", X2C)  # I(X1c, X2; Y2 | X2c)
    rx2_all = mi(X1C + X2, "y2")  # I(X1c, X2; Y2)
    leak = mi(X2C, "y1", X1)  # I(X2c; Y1 | X1)
    rx1_all = mi(X2C + X1, "y1")  # I(X2c, X1; Y1)
    rx1_c = mi(X2C + X1, "y1", X1C)  # I(X2c, X1; Y1 | X1c)
    rxq_all = mi(X2C + X1, "y1q2")  # I(X2c, X1; Y1, Yq2)
    rxq_c = mi(X2C + X1, "y1q2", X1C)  # I(X2c, X1; Y1, Yq2 | X1c)

    rows = [
        (1, 0, mi(X1, "y1", X2C)),
        (1, 0, own1 + rx2_c + c12),
        (0, 1, mi(X2, "y2", X1C) + c12),
        (0, 1, leak + own2),
        (1, 1, rx1_all + own2 + c21q),
        (1, 1, rxq_all + own2),
        (1, 1, rx1_c + rx2_c + c12 + c21q),
        (1, 1, rxq_c + rx2_c + c12),
        (1, 1, own1 + rx2_all + c12),
        (1, 1, own1 + leak + rx2_c + c12),
        (2, 1, rx1_all + own1 + rx2_c + c12 + c21q),
        (2, 1, rxq_all + own1 + rx2_c + c12),
        (1, 2, rx1_c + rx2_all + own2 + c12 + c21q),
        (1, 2, rx1_c + leak + rx2_c + own2 + c12 + c21q),
        (1, 2, rxq_c + rx2_all + own2 + c12),
        (1, 2, rxq_c + leak + rx2_c + own2 + c12),
    ]
    return tuple(
        (label, RateConstraint(a, b, c)) for label, (a, b, c) in zip(STRATEGY_LABELS, rows)
    )


def strategy_region(ch: ChannelInstance, order: str = "two_one_two") -> StrategyRegion:
    cons = strategy_constraints(ch, order)
    return StrategyRegion(order, cons, region_from_constraints([c for _, c in cons]))


def combined_achievable(ch: ChannelInstance) -> RateRegion2D:
    """Convex hull of the two strategy regions (time sharing)."""
    return hull_union(
        strategy_region(ch, "two_one_two").region,
        strategy_region(ch, "one_two_one").region,
    )


def guaranteed_inner_constraints(ch: ChannelInstance, terms=None) -> list[RateConstraint]:
    """Outer-bound constraints displaced by the antenna-count constants."""
    t = outer_terms(ch) if terms is None else terms
    n1, n2 = ch.n1, ch.n2
    return [
        RateConstraint(1, 0, t.i1 - n1 - n2),
        RateConstraint(0, 1, t.i2 - n1 - n2),
        RateConstraint(1, 1, min(t.i3, t.i4, t.i5, t.i6) - n1 - n2 - max(n1, n2)),
        RateConstraint(2, 1, min(t.i7, t.i9) - 2 * n1 - 2 * n2),
        RateConstraint(1, 2, min(t.i8, t.i10) - 2 * n1 - 3 * n2),
    ]


def guaranteed_inner_region(ch: ChannelInstance, terms=None) -> RateRegion2D:
    return region_from_constraints(guaranteed_inner_constraints(ch, terms))
